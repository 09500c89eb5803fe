//! The house-of-cards chain `W` and the quantities derived from it.
//!
//! `W` climbs from height `x` to `x + 1` with probability `a*_x` and falls
//! back to 0 otherwise. `rho_m`, the probability of being back at 0 after
//! `m` steps, controls regeneration depths, the bias of aborting long runs,
//! loss of memory, and renewal gaps.

use serde::{Deserialize, Serialize};

use crate::spec::ThresholdSchedule;
use crate::uniform::UniformSource;
use crate::{Error, Result};

/// `beta`, first-return probabilities `f` and return probabilities `rho`
/// up to a horizon `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoTable {
    pub horizon: usize,
    /// `beta_m = a*_0 ... a*_m` for `m` in `0..=N`.
    pub beta: Vec<f64>,
    /// `f_j` for `j` in `0..=N`; `f_0 = 0`.
    pub first_return: Vec<f64>,
    /// `rho_m` for `m` in `0..=N`; `rho_0 = 1`.
    pub rho: Vec<f64>,
}

impl RhoTable {
    /// `rho_m`. Panics if `m > N`.
    pub fn rho(&self, m: usize) -> f64 {
        self.rho[m]
    }
}

fn threshold(schedule: &ThresholdSchedule, k: usize) -> Result<f64> {
    schedule.value(k).ok_or_else(|| {
        Error::InvalidSchedule(format!(
            "a*_{k} requested past the end of a finite schedule"
        ))
    })
}

/// Return probabilities by the renewal recursion
/// `rho_m = sum_{j=1}^m f_j rho_{m-j}`, where the first return at step `j`
/// climbs `j - 1` times and then falls: `f_1 = 1 - a*_0`,
/// `f_j = beta_{j-2} (1 - a*_{j-1})`.
pub fn rho_table(schedule: &ThresholdSchedule, horizon: usize) -> Result<RhoTable> {
    assert!(horizon >= 1, "horizon must be at least 1");
    let a: Vec<f64> = (0..=horizon)
        .map(|k| threshold(schedule, k))
        .collect::<Result<_>>()?;
    let mut beta = Vec::with_capacity(horizon + 1);
    let mut prod = 1.0;
    for &ak in &a {
        prod *= ak;
        beta.push(prod);
    }
    let mut f = vec![0.0; horizon + 1];
    f[1] = 1.0 - a[0];
    for j in 2..=horizon {
        f[j] = beta[j - 2] * (1.0 - a[j - 1]);
    }
    let mut rho = vec![0.0; horizon + 1];
    rho[0] = 1.0;
    for m in 1..=horizon {
        rho[m] = (1..=m)
            .map(|j| f[j] * rho[m - j])
            .sum::<f64>()
            .clamp(0.0, 1.0);
    }
    Ok(RhoTable {
        horizon,
        beta,
        first_return: f,
        rho,
    })
}

/// Heights `W_m, W_{m+1}, ..., W_n` of the chain started at 0 at time `m`,
/// driven by `W_j = (W_{j-1} + 1) 1{U_j < a*_{W_{j-1}}}`.
pub fn simulate_w<U: UniformSource + ?Sized>(
    schedule: &ThresholdSchedule,
    m: i64,
    n: i64,
    field: &U,
) -> Result<Vec<usize>> {
    assert!(m <= n, "start {m} after end {n}");
    let mut path = Vec::with_capacity((n - m + 1) as usize);
    let mut w = 0usize;
    path.push(w);
    for j in m + 1..=n {
        let u = field.uniform(j).ok_or(Error::Aborted { depth: 0 })?;
        w = if u < threshold(schedule, w)? {
            w + 1
        } else {
            0
        };
        path.push(w);
    }
    Ok(path)
}

const VACUOUS_SLACK: f64 = 1e-12;

fn window_mass(schedule: &ThresholdSchedule, len: usize, m: usize) -> Result<f64> {
    if schedule.is_degenerate_from(0) {
        return Ok(0.0);
    }
    let table = rho_table(schedule, (m + len - 1).max(1))?;
    Ok((0..len).map(|i| table.rho[m + i]).sum())
}

/// Upper bound `min(1, sum_{i=0}^{t-s} rho_{m+i})` on `P(s - tau[s, t] > m)`.
pub fn tau_tail_bound(schedule: &ThresholdSchedule, s: i64, t: i64, m: usize) -> Result<f64> {
    assert!(s <= t, "window [{s}, {t}] is empty");
    Ok(window_mass(schedule, (t - s + 1) as usize, m)?.clamp(0.0, 1.0))
}

/// Total-variation bias from aborting runs deeper than `max_depth`:
/// `S / (1 - S)` with `S = sum_{i=0}^{t-s} rho_{M+i}`. Vacuous once `S`
/// is within `1e-12` of one, where the ratio only reflects rounding.
pub fn impatience_bound(
    schedule: &ThresholdSchedule,
    s: i64,
    t: i64,
    max_depth: usize,
) -> Result<f64> {
    assert!(s <= t, "window [{s}, {t}] is empty");
    let mass = window_mass(schedule, (t - s + 1) as usize, max_depth)?;
    if mass >= 1.0 - VACUOUS_SLACK {
        return Err(Error::BoundVacuous { mass });
    }
    Ok(mass / (1.0 - mass))
}

/// `2 sup|f| sum_{j=0}^{t-s} rho_{s+j-i}`: how far the conditional law of
/// a window given the symbols before `i` can be from the stationary law.
pub fn loss_of_memory_bound(
    schedule: &ThresholdSchedule,
    i: i64,
    s: i64,
    t: i64,
    sup_norm: f64,
) -> Result<f64> {
    assert!(i <= s && s <= t, "need i <= s <= t, got {i}, {s}, {t}");
    if sup_norm == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * sup_norm * window_mass(schedule, (t - s + 1) as usize, (s - i) as usize)?)
}

/// Regime asserted by the user; the numeric report below is only advisory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `sum beta_m = infinity`: every finite window regenerates.
    SumBetaDiverges,
    /// `lim beta_m > 0`: half-infinite windows regenerate too.
    BetaPositive,
    Unasserted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegimeCandidate {
    FiniteWindow,
    SemiInfinite,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeReport {
    pub kmax: usize,
    /// `sum_{m <= kmax} beta_m`.
    pub partial_sum: f64,
    pub beta_kmax: f64,
    /// `log2(beta_{kmax/2} / beta_kmax)`: the exponent `g` if `beta_m ~ m^-g`.
    pub decay_exponent: f64,
    pub candidate: RegimeCandidate,
    pub declared: Regime,
}

/// Heuristic look at `beta` up to `kmax`. `beta` is treated as levelling
/// off when it moved by less than 0.1% over the second half of the range,
/// and as non-summable when it decays no faster than `m^-1.05`.
pub fn regime_report(
    schedule: &ThresholdSchedule,
    kmax: usize,
    declared: Regime,
) -> Result<RegimeReport> {
    assert!(kmax >= 1, "kmax must be at least 1");
    let table = rho_table(schedule, kmax)?;
    let beta_kmax = table.beta[kmax];
    let beta_half = table.beta[kmax / 2];
    let partial_sum = table.beta.iter().sum();
    let decay_exponent = if beta_kmax > 0.0 {
        (beta_half / beta_kmax).log2()
    } else {
        f64::INFINITY
    };
    let candidate = if beta_kmax > 0.0 && beta_kmax / beta_half >= 1.0 - 1e-3 {
        RegimeCandidate::SemiInfinite
    } else if decay_exponent <= 1.05 {
        RegimeCandidate::FiniteWindow
    } else {
        RegimeCandidate::Inconclusive
    };
    Ok(RegimeReport {
        kmax,
        partial_sum,
        beta_kmax,
        decay_exponent,
        candidate,
        declared,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::ScheduleTail;
    use crate::uniform::{ExplicitUniforms, UniformField};
    use proptest::prelude::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn constant_schedule_rho() {
        let t = rho_table(&ThresholdSchedule::constant(0.8).unwrap(), 40).unwrap();
        assert_eq!(t.rho[0], 1.0);
        for m in 1..=40 {
            assert!(close(t.rho[m], 0.2), "rho_{m} = {}", t.rho[m]);
        }
        assert!(close(t.beta[3], 0.8f64.powi(4)));
    }

    #[test]
    fn degenerate_schedule_never_returns() {
        let t = rho_table(&ThresholdSchedule::degenerate(), 10).unwrap();
        assert!(t.rho[1..].iter().all(|&r| r == 0.0));
        assert!(t.beta.iter().all(|&b| b == 1.0));
    }

    #[test]
    fn first_returns_bounded() {
        let t = rho_table(&ThresholdSchedule::power(0.5, 2.0).unwrap(), 200).unwrap();
        let total: f64 = t.first_return.iter().sum();
        assert!(total <= 1.0 + 1e-12);
        assert!(t.beta.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn rho_by_path_enumeration() {
        // brute force over all reset/climb paths of the chain
        let schedule =
            ThresholdSchedule::new(vec![0.3, 0.6, 0.7, 0.9], ScheduleTail::Constant(0.95)).unwrap();
        let table = rho_table(&schedule, 12).unwrap();
        for m in 1..=12usize {
            let mut dist = vec![0.0; m + 1];
            dist[0] = 1.0;
            for _ in 0..m {
                let mut next = vec![0.0; m + 1];
                for (x, &p) in dist.iter().enumerate() {
                    if p > 0.0 {
                        let a = schedule.value(x).unwrap();
                        next[0] += p * (1.0 - a);
                        if x < m {
                            next[x + 1] += p * a;
                        }
                    }
                }
                dist = next;
            }
            assert!((table.rho[m] - dist[0]).abs() < 1e-12, "m = {m}");
        }
    }

    #[test]
    fn bounds_examples() {
        let c = ThresholdSchedule::constant(0.8).unwrap();
        assert!(close(tau_tail_bound(&c, 0, 0, 2).unwrap(), 0.2));
        assert!(close(tau_tail_bound(&c, 0, 2, 1).unwrap(), 0.6));
        assert!(close(tau_tail_bound(&c, 0, 9, 1).unwrap(), 1.0));
        assert_eq!(
            tau_tail_bound(&ThresholdSchedule::degenerate(), 0, 5, 0).unwrap(),
            0.0
        );
        assert!(close(impatience_bound(&c, 0, 0, 1).unwrap(), 0.25));
        assert!(close(impatience_bound(&c, 3, 3, 17).unwrap(), 0.25));
        assert_eq!(
            impatience_bound(&ThresholdSchedule::degenerate(), 0, 0, 5).unwrap(),
            0.0
        );
        assert!(matches!(
            impatience_bound(&c, 0, 9, 1),
            Err(Error::BoundVacuous { .. })
        ));
        assert!(matches!(
            impatience_bound(&c, 0, 4, 1),
            Err(Error::BoundVacuous { .. })
        ));
        assert!(close(loss_of_memory_bound(&c, -2, 0, 0, 1.0).unwrap(), 0.4));
        assert_eq!(loss_of_memory_bound(&c, -2, 0, 0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn geometric_impatience_from_table() {
        let g = ThresholdSchedule::geometric(0.5, 0.5).unwrap();
        let table = rho_table(&g, 20).unwrap();
        let expect = table.rho[20] / (1.0 - table.rho[20]);
        assert!(close(impatience_bound(&g, 0, 0, 20).unwrap(), expect));
    }

    #[test]
    fn loss_of_memory_decays() {
        let g = ThresholdSchedule::geometric(0.5, 0.2).unwrap();
        let values: Vec<f64> = (0..60)
            .map(|d| loss_of_memory_bound(&g, -d, 0, 2, 1.0).unwrap())
            .collect();
        assert!(values.windows(2).all(|w| w[1] <= w[0] + 1e-15));
        assert!(values[59] < values[1]);
    }

    #[test]
    fn w_examples() {
        let schedule = ThresholdSchedule::geometric(0.5, 0.5).unwrap();
        let low = ExplicitUniforms::new(1, vec![0.0; 5]);
        assert_eq!(
            simulate_w(&schedule, 0, 5, &low).unwrap(),
            vec![0, 1, 2, 3, 4, 5]
        );
        let u = ExplicitUniforms::new(1, vec![0.1, 0.6, 0.99, 0.2]);
        // a* = 0.5, 0.75, 0.875, ...
        assert_eq!(
            simulate_w(&schedule, 0, 4, &u).unwrap(),
            vec![0, 1, 2, 0, 1]
        );
    }

    #[test]
    fn regime_candidates() {
        let d = regime_report(&ThresholdSchedule::degenerate(), 100, Regime::Unasserted).unwrap();
        assert_eq!(d.candidate, RegimeCandidate::SemiInfinite);
        let c = regime_report(
            &ThresholdSchedule::constant(0.8).unwrap(),
            100,
            Regime::Unasserted,
        )
        .unwrap();
        assert_eq!(c.candidate, RegimeCandidate::Inconclusive);
        assert!(c.partial_sum < 4.0 + 1e-9);
        let g = regime_report(
            &ThresholdSchedule::geometric(0.5, 0.5).unwrap(),
            200,
            Regime::BetaPositive,
        )
        .unwrap();
        assert_eq!(g.candidate, RegimeCandidate::SemiInfinite);
        assert!((g.beta_kmax - 0.288_788_095_086_602_4).abs() < 1e-9);
        assert_eq!(g.declared, Regime::BetaPositive);
        // 1 - 0.5/(k+1): beta_m ~ m^-0.5, not summable
        let h = regime_report(
            &ThresholdSchedule::power(0.5, 1.0).unwrap(),
            4000,
            Regime::Unasserted,
        )
        .unwrap();
        assert_eq!(h.candidate, RegimeCandidate::FiniteWindow);
    }

    proptest! {
        #[test]
        fn lowering_a_threshold_raises_rho(
            raw in proptest::collection::vec(0.05f64..0.95, 1..12),
            which in 0usize..12,
            drop in 0.0f64..1.0,
        ) {
            let mut prefix = raw.clone();
            prefix.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let hi = ThresholdSchedule::finite_memory(prefix.clone()).unwrap();
            let k = which % prefix.len();
            let floor = if k == 0 { 0.01 } else { prefix[k - 1] };
            prefix[k] = floor + (prefix[k] - floor) * drop;
            prefix[k] = prefix[k].max(1e-3);
            let lo = ThresholdSchedule::finite_memory(prefix).unwrap();
            let (th, tl) = (rho_table(&hi, 30).unwrap(), rho_table(&lo, 30).unwrap());
            for m in 0..=30 {
                prop_assert!(tl.rho[m] >= th.rho[m] - 1e-12, "m = {}", m);
            }
        }

        #[test]
        fn coalescence(seed in any::<u64>(), m in -40i64..0, gap in 1i64..30) {
            let schedule = ThresholdSchedule::geometric(0.5, 0.5).unwrap();
            let field = UniformField::new(seed);
            let k = m + gap;
            let n = k + 80;
            let early = simulate_w(&schedule, m, n, &field).unwrap();
            let late = simulate_w(&schedule, k, n, &field).unwrap();
            let mut merged = false;
            for j in k..=n {
                let (a, b) = (early[(j - m) as usize], late[(j - k) as usize]);
                prop_assert!(a >= b);
                merged |= a == 0;
                if merged {
                    prop_assert_eq!(a, b);
                }
            }
        }
    }
}
