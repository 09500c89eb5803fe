//! Markov chains on `[0, 1)` obtained from a digit chain by D-ary expansion:
//! `X_n = sum_{j >= 1} x_{n-j} D^{-j}` and `X_{n+1} = (x_n + X_n) / D`.
//!
//! At resolution `l` only the `l` most recent digits are kept, and the state
//! is reported as the grid interval `[X, X + D^{-l})` rather than a point.

use crate::engine::{sample_window, RegenerationRecord};
use crate::spec::{Specification, ThresholdSchedule};
use crate::uniform::UniformSource;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DaryState {
    base: u32,
    /// Most recent first, exactly `resolution` long.
    digits: Vec<u32>,
}

impl DaryState {
    /// The point 0 at the given resolution.
    pub fn zero(base: u32, resolution: usize) -> Self {
        assert!(base >= 2, "base must be at least 2");
        Self {
            base,
            digits: vec![0; resolution],
        }
    }

    pub fn from_digits(base: u32, digits: Vec<u32>) -> Self {
        assert!(base >= 2, "base must be at least 2");
        assert!(digits.iter().all(|&d| d < base), "digit out of range");
        Self { base, digits }
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn resolution(&self) -> usize {
        self.digits.len()
    }

    /// `(w_{-1}, ..., w_{-l})`.
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// `X = sum_j w_{-j} D^{-j}`, evaluated oldest digit first.
    pub fn point(&self) -> f64 {
        let d = self.base as f64;
        self.digits
            .iter()
            .rev()
            .fold(0.0, |x, &g| (g as f64 + x) / d)
    }

    /// `[X, X + D^{-l})`.
    pub fn interval(&self) -> (f64, f64) {
        let x = self.point();
        (x, x + (self.base as f64).powi(-(self.resolution() as i32)))
    }

    /// Grid cell `X * D^l` as an integer in `0..D^l`.
    pub fn cell(&self) -> u64 {
        self.digits
            .iter()
            .fold(0u64, |acc, &g| acc * self.base as u64 + g as u64)
    }

    /// Feeds digit `g`: the new point is `(g + X) / D`, truncated to the
    /// resolution.
    pub fn step(&self, g: u32) -> Self {
        assert!(g < self.base, "digit out of range");
        let mut digits = Vec::with_capacity(self.digits.len());
        if !self.digits.is_empty() {
            digits.push(g);
            digits.extend_from_slice(&self.digits[..self.digits.len() - 1]);
        }
        Self {
            base: self.base,
            digits,
        }
    }
}

fn check_digit_alphabet<S: Specification + ?Sized>(spec: &S) -> Result<u32> {
    let labels = spec.alphabet().labels();
    if labels.len() < 2 || labels.iter().enumerate().any(|(i, &l)| l != i as i64) {
        return Err(Error::InvalidSpecification(
            "digit chain alphabet must be 0, 1, ..., D-1 with D >= 2".into(),
        ));
    }
    Ok(labels.len() as u32)
}

/// Perfect sample of the interval chain's marginal on the grid of
/// resolution `l`: a perfect digit window on `[-l, -1]` mapped through the
/// expansion.
pub fn dary_perfect_marginal<S, U>(
    spec: &S,
    schedule: &ThresholdSchedule,
    resolution: usize,
    field: &U,
    max_depth: usize,
) -> Result<(DaryState, RegenerationRecord)>
where
    S: Specification + ?Sized,
    U: UniformSource + ?Sized,
{
    let base = check_digit_alphabet(spec)?;
    if resolution == 0 {
        return Err(Error::InvalidSpecification(
            "resolution must be at least 1".into(),
        ));
    }
    let l = resolution as i64;
    let sample = sample_window(-l, -1, field, spec, schedule, max_depth)?;
    // symbols run oldest (x_{-l}) to newest (x_{-1})
    let digits = sample.symbols.iter().rev().map(|g| g.0).collect();
    Ok((DaryState::from_digits(base, digits), sample.record))
}

/// One row of a sampled interval-chain trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DaryStep {
    pub step: usize,
    /// Left endpoint of the state interval at this step.
    pub left: f64,
    /// Most recent digit, `x_{step-1}`.
    pub digit: u32,
}

/// States `X_0, ..., X_steps` of the interval chain, all read off one
/// perfect digit window `[-l, steps - 1]`.
pub fn dary_trajectory<S, U>(
    spec: &S,
    schedule: &ThresholdSchedule,
    resolution: usize,
    steps: usize,
    field: &U,
    max_depth: usize,
) -> Result<Vec<DaryStep>>
where
    S: Specification + ?Sized,
    U: UniformSource + ?Sized,
{
    let base = check_digit_alphabet(spec)?;
    let l = resolution.max(1) as i64;
    let sample = sample_window(-l, steps as i64 - 1, field, spec, schedule, max_depth)?;
    let digits: Vec<u32> = sample.symbols.iter().map(|g| g.0).collect();
    let window = l as usize;
    let initial: Vec<u32> = digits[..window]
        .iter()
        .rev()
        .copied()
        .take(resolution)
        .collect();
    let mut state = DaryState::from_digits(base, initial);
    let mut rows = Vec::with_capacity(steps + 1);
    rows.push(DaryStep {
        step: 0,
        left: state.point(),
        digit: digits[window - 1],
    });
    for n in 0..steps {
        let g = digits[window + n];
        state = state.step(g);
        rows.push(DaryStep {
            step: n + 1,
            left: state.point(),
            digit: g,
        });
    }
    Ok(rows)
}

/// Replays explicit digits from a starting state.
pub fn replay(start: &DaryState, digits: &[u32]) -> Vec<DaryStep> {
    let mut state = start.clone();
    digits
        .iter()
        .enumerate()
        .map(|(n, &g)| {
            state = state.step(g);
            DaryStep {
                step: n + 1,
                left: state.point(),
                digit: g,
            }
        })
        .collect()
}
