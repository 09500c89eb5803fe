use std::io::Write;

use rayon::prelude::*;
use regensim::engine::{renewal_scan, sample_window};
use regensim::house_of_cards::{
    impatience_bound, loss_of_memory_bound, regime_report, rho_table, tau_tail_bound, Regime,
};
use regensim::models::{dary_trajectory, replay, DaryState};
use regensim::uniform::derive_seed;
use regensim::{Error, ThresholdSchedule, UniformField};
use serde_json::{json, Value};

use crate::config::{Format, RunConfig};
use crate::error::CliError;
use crate::output::Table;

/// Replicates computed in parallel per batch, written in order.
const BATCH: u64 = 4096;

/// Depth of the advisory regime report.
const REPORT_DEPTH: usize = 2000;

fn seed(config: &RunConfig) -> u64 {
    config.seed.unwrap_or(0)
}

/// Checks the declared regime against what the command needs.
fn check_regime(
    config: &RunConfig,
    schedule: &ThresholdSchedule,
    needs: &[Regime],
    force: bool,
) -> Result<(), CliError> {
    if needs.contains(&config.regime) {
        return Ok(());
    }
    let report = regime_report(schedule, REPORT_DEPTH, config.regime)?;
    let echo = serde_json::to_string(&report).expect("report serializes");
    if force {
        eprintln!(
            "regensim: warning: running under regime {:?} (--force); advisory report: {echo}",
            config.regime
        );
        return Ok(());
    }
    let names: Vec<&str> = needs.iter().map(|r| regime_name(*r)).collect();
    Err(CliError::Regime(format!(
        "command needs regime {} but config declares {}; advisory report: {echo}",
        names.join(" or "),
        regime_name(config.regime)
    )))
}

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::SumBetaDiverges => "sum-beta-diverges",
        Regime::BetaPositive => "beta-positive",
        Regime::Unasserted => "unasserted",
    }
}

pub fn sample(
    config: &RunConfig,
    from: i64,
    to: i64,
    count: u64,
    force: bool,
    out: impl Write,
) -> Result<(), CliError> {
    if from > to {
        return Err(CliError::Config(format!(
            "--from {from} is after --to {to}"
        )));
    }
    let model = config.model()?;
    let schedule = config.schedule()?;
    check_regime(
        config,
        &schedule,
        &[Regime::SumBetaDiverges, Regime::BetaPositive],
        force,
    )?;
    let spec = model.spec();
    let master = seed(config);
    let columns: &[&str] = &[
        "replicate",
        "seed",
        "window",
        "symbols",
        "tau",
        "uniforms_used",
        "aborted",
    ];
    let mut table = Table::new(out, config.format.unwrap_or(Format::JsonLines), columns)?;
    let mut aborted = 0u64;
    let mut start = 0u64;
    while start < count {
        let end = (start + BATCH).min(count);
        let rows: Vec<Result<Vec<Value>, Error>> = (start..end)
            .into_par_iter()
            .map(|i| {
                let s = derive_seed(master, i);
                let field = UniformField::new(s);
                let window = json!([from, to]);
                match sample_window(from, to, &field, spec, &schedule, config.max_depth) {
                    Ok(w) => {
                        let labels: Vec<i64> = w
                            .symbols
                            .iter()
                            .map(|&g| spec.alphabet().label(g))
                            .collect();
                        Ok(vec![
                            json!(i),
                            json!(s),
                            window,
                            json!(labels),
                            json!(w.record.tau),
                            json!(w.record.uniforms_consumed),
                            json!(false),
                        ])
                    }
                    Err(Error::Aborted { .. }) => Ok(vec![
                        json!(i),
                        json!(s),
                        window,
                        Value::Null,
                        Value::Null,
                        Value::Null,
                        json!(true),
                    ]),
                    Err(e) => Err(e),
                }
            })
            .collect();
        for row in rows {
            let row = row?;
            if row[6] == json!(true) {
                aborted += 1;
            }
            table.row(row)?;
        }
        start = end;
    }
    table.finish()?;
    if count > 0 && aborted == count {
        return Err(CliError::Aborted(format!(
            "all {count} runs aborted at depth {}",
            config.max_depth
        )));
    }
    if aborted > 0 {
        eprintln!(
            "regensim: {aborted} of {count} runs aborted at depth {}",
            config.max_depth
        );
    }
    Ok(())
}

pub fn rho(config: &RunConfig, max_m: usize, out: impl Write) -> Result<(), CliError> {
    if max_m == 0 {
        return Err(CliError::Config("--max-m must be at least 1".into()));
    }
    let schedule = config.schedule()?;
    let t = rho_table(&schedule, max_m)?;
    let mut table = Table::new(out, csv_default(config), &["m", "beta_m", "f_m", "rho_m"])?;
    for m in 0..=max_m {
        table.row(vec![
            json!(m),
            json!(t.beta[m]),
            json!(t.first_return[m]),
            json!(t.rho[m]),
        ])?;
    }
    Ok(table.finish()?)
}

fn csv_default(config: &RunConfig) -> Format {
    config.format.unwrap_or(Format::Csv)
}

pub fn bounds(
    config: &RunConfig,
    window_len: usize,
    m: usize,
    memory_gap: Option<usize>,
    sup_norm: f64,
    out: impl Write,
) -> Result<(), CliError> {
    if window_len == 0 {
        return Err(CliError::Config("--window-len must be at least 1".into()));
    }
    let schedule = config.schedule()?;
    let t = window_len as i64 - 1;
    let mut table = Table::new(
        out,
        csv_default(config),
        &["bound", "window_len", "m", "value"],
    )?;
    let tail = tau_tail_bound(&schedule, 0, t, m)?;
    table.row(vec![
        json!("tau_tail"),
        json!(window_len),
        json!(m),
        json!(tail),
    ])?;
    let imp = match impatience_bound(&schedule, 0, t, m) {
        Ok(v) => json!(v),
        Err(Error::BoundVacuous { .. }) => json!("vacuous"),
        Err(e) => return Err(e.into()),
    };
    table.row(vec![json!("impatience"), json!(window_len), json!(m), imp])?;
    if let Some(gap) = memory_gap {
        let v = loss_of_memory_bound(&schedule, -(gap as i64), 0, t, sup_norm)?;
        table.row(vec![
            json!("loss_of_memory"),
            json!(window_len),
            json!(gap),
            json!(v),
        ])?;
    }
    Ok(table.finish()?)
}

pub fn renewal(
    config: &RunConfig,
    from: i64,
    to: i64,
    force: bool,
    out: impl Write,
) -> Result<(), CliError> {
    if from > to {
        return Err(CliError::Config(format!(
            "--from {from} is after --to {to}"
        )));
    }
    let schedule = config.schedule()?;
    check_regime(config, &schedule, &[Regime::BetaPositive], force)?;
    let field = UniformField::new(seed(config));
    let report = renewal_scan(from, to, &field, &schedule)?;
    let mut table = Table::new(out, csv_default(config), &["time", "checked", "censored"])?;
    for r in &report.times {
        table.row(vec![json!(r.time), json!(r.checked), json!(r.censored)])?;
    }
    Ok(table.finish()?)
}

pub fn dary(
    config: &RunConfig,
    resolution: usize,
    steps: usize,
    digits: Option<Vec<u32>>,
    base: Option<u32>,
    force: bool,
    out: impl Write,
) -> Result<(), CliError> {
    if resolution == 0 {
        return Err(CliError::Config("--resolution must be at least 1".into()));
    }
    let columns: &[&str] = &["step", "left", "digit"];
    let rows = match digits {
        Some(digits) => {
            let base = match (base, &config.model) {
                (Some(b), _) => b,
                (None, Some(_)) => config.model()?.spec().alphabet().len() as u32,
                (None, None) => {
                    return Err(CliError::Config("--digits needs --base or a model".into()))
                }
            };
            if base < 2 || digits.iter().any(|&g| g >= base) {
                return Err(CliError::Config(format!(
                    "digits must lie in 0..{base} with base >= 2"
                )));
            }
            let start = DaryState::zero(base, resolution);
            let mut rows = vec![(0usize, 0.0, Value::Null)];
            rows.extend(
                replay(&start, &digits)
                    .into_iter()
                    .map(|r| (r.step, r.left, json!(r.digit))),
            );
            rows
        }
        None => {
            let model = config.model()?;
            let schedule = config.schedule()?;
            check_regime(
                config,
                &schedule,
                &[Regime::SumBetaDiverges, Regime::BetaPositive],
                force,
            )?;
            let field = UniformField::new(seed(config));
            dary_trajectory(
                model.spec(),
                &schedule,
                resolution,
                steps,
                &field,
                config.max_depth,
            )?
            .into_iter()
            .map(|r| (r.step, r.left, json!(r.digit)))
            .collect()
        }
    };
    let mut table = Table::new(out, csv_default(config), columns)?;
    for (step, left, digit) in rows {
        table.row(vec![json!(step), json!(left), digit])?;
    }
    Ok(table.finish()?)
}
