//! Regeneration times, reconstruction and perfect window samples.
//!
//! Each time `n` gets a level `K_n` (the unique `k` with
//! `a*_{k-1} <= U_n < a*_k`), read as an arrow from `n` back to `n - K_n`.
//! The regeneration time `tau[s, t]` is the largest `m <= s` such that no
//! arrow starting in `[m, t]` lands left of `m`. Symbols on `[tau, t]` are
//! then a function of `U_tau, ..., U_t` alone.

use crate::partition::locate;
use crate::spec::{schedule_level, Level, Symbol, ThresholdSchedule};
use crate::uniform::UniformSource;
use crate::{Error, Result, Specification};

/// Outcome of the backward search for one window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegenerationRecord {
    pub s: i64,
    pub t: i64,
    /// `tau[s, t] <= s`.
    pub tau: i64,
    /// `K_n` for `n` in `[tau, t]`, in time order.
    pub levels: Vec<usize>,
    /// Uniforms read: exactly `t - tau + 1`.
    pub uniforms_consumed: usize,
}

impl RegenerationRecord {
    /// `K_n` for `n` in `[tau, t]`.
    pub fn level(&self, n: i64) -> usize {
        self.levels[(n - self.tau) as usize]
    }

    /// Distance `s - tau` looked into the past.
    pub fn depth(&self) -> usize {
        (self.s - self.tau) as usize
    }
}

fn level_at<U: UniformSource + ?Sized>(
    n: i64,
    s: i64,
    field: &U,
    schedule: &ThresholdSchedule,
    max_depth: usize,
) -> Result<usize> {
    let u = field.uniform(n).ok_or(Error::Aborted {
        depth: (s - n).max(0) as usize,
    })?;
    match schedule_level(u, schedule)? {
        Level::Finite(k) => Ok(k),
        Level::Unbounded => Err(Error::Aborted { depth: max_depth }),
    }
}

/// `tau[s, t]` by the block recursion `Y_{-1} = t + 1`, `Y_0 = s`,
/// `Y_n = Y_{n-1} - Z[Y_{n-1}, Y_{n-2} - 1]` with
/// `Z[a, b] = max{K_j - j + a : j in [a, b]}`, stopped at the first fixed
/// point. Every uniform in `[tau, t]` is read once.
///
/// Fails with [`Error::Aborted`] once the search would pass `s - max_depth`.
/// Debug builds recompute `tau` by the direct definition and assert
/// agreement.
pub fn tau_window<U: UniformSource + ?Sized>(
    s: i64,
    t: i64,
    field: &U,
    schedule: &ThresholdSchedule,
    max_depth: usize,
) -> Result<RegenerationRecord> {
    assert!(s <= t, "window [{s}, {t}] is empty");
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut hi = t;
    let mut y = s;
    let tau = loop {
        let mut block = Vec::with_capacity((hi - y + 1) as usize);
        let mut z = 0i64;
        for j in y..=hi {
            let k = level_at(j, s, field, schedule, max_depth)?;
            z = z.max(k as i64 - j + y);
            block.push(k);
        }
        blocks.push(block);
        let next = y - z;
        if next == y {
            break y;
        }
        if (s - next) as u64 > max_depth as u64 {
            return Err(Error::Aborted { depth: max_depth });
        }
        hi = y - 1;
        y = next;
    };
    let levels: Vec<usize> = blocks.into_iter().rev().flatten().collect();
    let record = RegenerationRecord {
        s,
        t,
        tau,
        uniforms_consumed: levels.len(),
        levels,
    };
    #[cfg(debug_assertions)]
    {
        let direct = tau_direct(s, t, field, schedule, max_depth);
        assert_eq!(
            direct,
            Ok(tau),
            "block recursion and direct scan disagree on [{s}, {t}]"
        );
    }
    Ok(record)
}

/// `tau[s, t] = max{m <= s : U_k < a*_{k-m} for all k in [m, t]}` by
/// scanning `m = s, s-1, ...`. Quadratic; kept as the reference for
/// [`tau_window`].
pub fn tau_direct<U: UniformSource + ?Sized>(
    s: i64,
    t: i64,
    field: &U,
    schedule: &ThresholdSchedule,
    max_depth: usize,
) -> Result<i64> {
    let last = schedule.prefix().last().copied().unwrap_or(0.0);
    for m in (s - max_depth as i64..=s).rev() {
        let mut ok = true;
        for k in m..=t {
            let u = field.uniform(k).ok_or(Error::Aborted {
                depth: (s - k).max(0) as usize,
            })?;
            let a = schedule.value((k - m) as usize).unwrap_or(last);
            if u >= a {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(m);
        }
    }
    Err(Error::Aborted { depth: max_depth })
}

/// Forward pass `j = tau, ..., t`: `x_j` is the symbol whose interval in the
/// partition for history `x_{j-1}, x_{j-2}, ...` contains `U_j`, searching
/// levels `0..=K_j` only.
pub fn reconstruct<S, U>(record: &RegenerationRecord, field: &U, spec: &S) -> Result<Vec<Symbol>>
where
    S: Specification + ?Sized,
    U: UniformSource + ?Sized,
{
    let mut x: Vec<Symbol> = Vec::with_capacity(record.levels.len());
    for (i, &cap) in record.levels.iter().enumerate() {
        let j = record.tau + i as i64;
        let u = field.uniform(j).ok_or(Error::Aborted { depth: 0 })?;
        debug_assert!(cap <= i, "arrow from {j} crosses tau");
        let hit = locate(u, |d| x[i - d], spec, cap)?;
        x.push(hit.symbol);
    }
    Ok(x)
}

/// A perfect sample of the stationary process on `[s, t]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowSample {
    pub s: i64,
    pub t: i64,
    /// `x_s, ..., x_t`.
    pub symbols: Vec<Symbol>,
    pub record: RegenerationRecord,
    pub seed: Option<u64>,
}

impl WindowSample {
    pub fn at(&self, n: i64) -> Symbol {
        self.symbols[(n - self.s) as usize]
    }
}

/// `tau_window`, then `reconstruct`, restricted to `[s, t]`.
pub fn sample_window<S, U>(
    s: i64,
    t: i64,
    field: &U,
    spec: &S,
    schedule: &ThresholdSchedule,
    max_depth: usize,
) -> Result<WindowSample>
where
    S: Specification + ?Sized,
    U: UniformSource + ?Sized,
{
    let record = tau_window(s, t, field, schedule, max_depth)?;
    let mut symbols = reconstruct(&record, field, spec)?;
    symbols.drain(..(s - record.tau) as usize);
    Ok(WindowSample {
        s,
        t,
        symbols,
        record,
        seed: field.seed(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenewalTime {
    pub time: i64,
    /// Lags `0..checked` were verified, i.e. `checked = t - time + 1`.
    pub checked: usize,
    /// The defining condition was only checked up to the horizon and the
    /// schedule still has thresholds below one beyond it.
    pub censored: bool,
}

/// Renewal times found in a finite stretch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenewalReport {
    pub s: i64,
    pub t: i64,
    /// Increasing.
    pub times: Vec<RenewalTime>,
    /// `[T_l, T_{l+1} - 1]` for consecutive times.
    pub blocks: Vec<(i64, i64)>,
}

impl RenewalReport {
    /// `T_{l+1} - T_l` over consecutive observed times. The stretch after
    /// the last time is right-censored and not included.
    pub fn gaps(&self) -> Vec<i64> {
        self.times
            .windows(2)
            .map(|w| w[1].time - w[0].time)
            .collect()
    }

    /// Gaps whose closing time was verified over at least `min_checked`
    /// lags, so that a late failure past the horizon is negligible.
    pub fn settled_gaps(&self, min_checked: usize) -> Vec<i64> {
        self.times
            .windows(2)
            .filter(|w| w[1].checked >= min_checked)
            .map(|w| w[1].time - w[0].time)
            .collect()
    }

    /// The symbol blocks `xi_l` cut out of a sample that starts at
    /// `sample_start` and covers the report's blocks.
    pub fn block_symbols<'a>(&self, sample_start: i64, symbols: &'a [Symbol]) -> Vec<&'a [Symbol]> {
        self.blocks
            .iter()
            .map(|&(a, b)| &symbols[(a - sample_start) as usize..=(b - sample_start) as usize])
            .collect()
    }
}

/// Times `j` in `[s, t]` with `U_{j+l} < a*_l` for every `l` in
/// `[0, t - j]`. Equivalently `min_{k in [j, t]} (k - K_k) >= j`, which is
/// computed by one backward pass.
pub fn renewal_scan<U: UniformSource + ?Sized>(
    s: i64,
    t: i64,
    field: &U,
    schedule: &ThresholdSchedule,
) -> Result<RenewalReport> {
    assert!(s <= t, "window [{s}, {t}] is empty");
    let mut found = Vec::new();
    let mut reach = i64::MAX;
    for k in (s..=t).rev() {
        let u = field.uniform(k).ok_or(Error::Aborted { depth: 0 })?;
        let target = match schedule_level(u, schedule)? {
            Level::Finite(level) => k - level as i64,
            Level::Unbounded => i64::MIN,
        };
        reach = reach.min(target);
        if reach >= k {
            let censored = !schedule.is_degenerate_from((t - k + 1) as usize);
            found.push(RenewalTime {
                time: k,
                checked: (t - k + 1) as usize,
                censored,
            });
        }
    }
    found.reverse();
    let blocks = found
        .windows(2)
        .map(|w| (w[0].time, w[1].time - 1))
        .collect();
    Ok(RenewalReport {
        s,
        t,
        times: found,
        blocks,
    })
}
