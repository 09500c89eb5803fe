//! Alphabets, specifications and threshold schedules.
//!
//! Histories are always passed most-recent-first: `history[0]` is `w_{-1}`,
//! `history[k-1]` is `w_{-k}`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Index of a symbol in its [`Alphabet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Symbol(pub u32);

impl Symbol {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Finite ordered alphabet. The order fixes the within-level layout of the
/// interval partition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct Alphabet {
    labels: Vec<i64>,
}

impl Alphabet {
    pub fn new(labels: Vec<i64>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidSpecification("alphabet is empty".into()));
        }
        for (i, a) in labels.iter().enumerate() {
            if labels[..i].contains(a) {
                return Err(Error::InvalidSpecification(format!("duplicate symbol {a}")));
            }
        }
        Ok(Self { labels })
    }

    /// `{0, 1, ..., n-1}`.
    pub fn range(n: usize) -> Result<Self> {
        Self::new((0..n as i64).collect())
    }

    /// `{-1, +1}` in that order.
    pub fn binary_signs() -> Self {
        Self {
            labels: vec![-1, 1],
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn label(&self, g: Symbol) -> i64 {
        self.labels[g.index()]
    }

    pub fn symbol_of(&self, label: i64) -> Option<Symbol> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .map(|i| Symbol(i as u32))
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.labels.len() as u32).map(Symbol)
    }
}

impl TryFrom<Vec<i64>> for Alphabet {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Alphabet> for Vec<i64> {
    fn from(a: Alphabet) -> Self {
        a.labels
    }
}

/// A system of one-sided conditional probabilities, seen through its
/// minorants `a_k(g | w_{-k}^{-1})`: the infimum of `P(g | ...)` over all
/// pasts that agree with `w` on the last `k` sites.
///
/// Implementations must satisfy, for every history `w` and extension `z`:
///
/// * `minorant(g, w) <= minorant(g, w·z)` (monotone in depth);
/// * `sum_g minorant(g, w) <= 1`;
/// * `sum_g minorant(g, w) >= a*_k` for the schedule in use.
pub trait Specification: Send + Sync {
    fn alphabet(&self) -> &Alphabet;

    /// `a_k(g | w)` with `k = history.len()`.
    fn minorant(&self, g: Symbol, history: &[Symbol]) -> f64;

    /// Deepest history the kernel can evaluate, if bounded.
    fn max_queryable_depth(&self) -> Option<usize> {
        None
    }
}

/// `sum_g a_k(g | w)`, accumulated left to right in alphabet order. The
/// partition accumulates its level boundaries the same way, so a schedule
/// built from this value is never above a boundary by rounding.
pub fn level_mass<S: Specification + ?Sized>(spec: &S, history: &[Symbol]) -> f64 {
    let mut mass = 0.0;
    for g in spec.alphabet().symbols() {
        mass += spec.minorant(g, history);
    }
    mass
}

impl<S: Specification + ?Sized> Specification for &S {
    fn alphabet(&self) -> &Alphabet {
        (**self).alphabet()
    }
    fn minorant(&self, g: Symbol, history: &[Symbol]) -> f64 {
        (**self).minorant(g, history)
    }
    fn max_queryable_depth(&self) -> Option<usize> {
        (**self).max_queryable_depth()
    }
}

impl<S: Specification + ?Sized> Specification for Arc<S> {
    fn alphabet(&self) -> &Alphabet {
        (**self).alphabet()
    }
    fn minorant(&self, g: Symbol, history: &[Symbol]) -> f64 {
        (**self).minorant(g, history)
    }
    fn max_queryable_depth(&self) -> Option<usize> {
        (**self).max_queryable_depth()
    }
}

/// Calls `f` on every history of length `k` over an alphabet of size `n`.
pub fn for_each_history(n: usize, k: usize, mut f: impl FnMut(&[Symbol])) {
    let mut w = vec![Symbol(0); k];
    loop {
        f(&w);
        let mut pos = 0;
        loop {
            if pos == k {
                return;
            }
            if w[pos].index() + 1 < n {
                w[pos].0 += 1;
                break;
            }
            w[pos] = Symbol(0);
            pos += 1;
        }
    }
}

/// `a_k = inf_w sum_g a_k(g | w)` by enumerating all `|G|^k` histories.
pub fn exact_threshold<S: Specification + ?Sized>(spec: &S, k: usize) -> f64 {
    let mut best = f64::INFINITY;
    for_each_history(spec.alphabet().len(), k, |w| {
        best = best.min(level_mass(spec, w));
    });
    best
}

/// Result of resolving a uniform against a schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Finite(usize),
    /// `u` is at or above every queryable threshold.
    Unbounded,
}

impl Level {
    pub fn finite(self) -> Option<usize> {
        match self {
            Level::Finite(k) => Some(k),
            Level::Unbounded => None,
        }
    }
}

/// Deepest index probed when searching an open-ended tail.
pub const MAX_QUERY_DEPTH: usize = if usize::BITS >= 64 {
    (1u64 << 40) as usize
} else {
    usize::MAX / 4
};

/// Continuation of a threshold schedule past its explicit prefix. Closed
/// forms are indexed by absolute depth `k`.
#[derive(Clone)]
pub enum ScheduleTail {
    /// No values past the prefix.
    Exhausted,
    /// `a*_k = 1` past the prefix (finite memory).
    Degenerate,
    /// `a*_k = a` past the prefix.
    Constant(f64),
    /// `a*_k = 1 - scale * ratio^k`.
    GeometricGap {
        scale: f64,
        ratio: f64,
    },
    /// `a*_k = 1 - scale * (k + 1)^(-exponent)`.
    PowerGap {
        scale: f64,
        exponent: f64,
    },
    Custom(Arc<dyn Fn(usize) -> f64 + Send + Sync>),
}

impl fmt::Debug for ScheduleTail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Exhausted => write!(f, "Exhausted"),
            Self::Degenerate => write!(f, "Degenerate"),
            Self::Constant(a) => write!(f, "Constant({a})"),
            Self::GeometricGap { scale, ratio } => {
                write!(f, "GeometricGap {{ scale: {scale}, ratio: {ratio} }}")
            }
            Self::PowerGap { scale, exponent } => {
                write!(f, "PowerGap {{ scale: {scale}, exponent: {exponent} }}")
            }
            Self::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl ScheduleTail {
    fn eval(&self, k: usize) -> Option<f64> {
        match self {
            Self::Exhausted => None,
            Self::Degenerate => Some(1.0),
            Self::Constant(a) => Some(*a),
            Self::GeometricGap { scale, ratio } => Some(1.0 - scale * ratio.powf(k as f64)),
            Self::PowerGap { scale, exponent } => {
                Some(1.0 - scale * ((k + 1) as f64).powf(-exponent))
            }
            Self::Custom(f) => Some(f(k)),
        }
    }
}

/// Non-decreasing thresholds `a*_0 <= a*_1 <= ...` in `(0, 1]`, with the
/// convention `a*_{-1} = 0`.
///
/// A value of exactly `1.0` only appears through [`ScheduleTail::Degenerate`]
/// or when a closed-form tail rounds to one in floating point.
#[derive(Clone, Debug)]
pub struct ThresholdSchedule {
    prefix: Vec<f64>,
    tail: ScheduleTail,
}

impl ThresholdSchedule {
    pub fn new(prefix: Vec<f64>, tail: ScheduleTail) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidSchedule(m));
        for (k, &a) in prefix.iter().enumerate() {
            if !(a > 0.0 && a < 1.0) {
                return bad(format!("a*_{k} = {a} outside (0, 1)"));
            }
            if k > 0 && a < prefix[k - 1] {
                return bad(format!("a*_{k} = {a} < a*_{} = {}", k - 1, prefix[k - 1]));
            }
        }
        match &tail {
            ScheduleTail::Constant(a) if !(*a > 0.0 && *a < 1.0) => {
                return bad(format!("constant tail {a} outside (0, 1)"));
            }
            ScheduleTail::GeometricGap { scale, ratio }
                if !(*scale > 0.0 && *ratio > 0.0 && *ratio < 1.0) =>
            {
                return bad("geometric tail needs scale > 0 and ratio in (0, 1)".into());
            }
            ScheduleTail::PowerGap { scale, exponent } if !(*scale > 0.0 && *exponent > 0.0) => {
                return bad("power tail needs scale > 0 and exponent > 0".into());
            }
            ScheduleTail::Exhausted if prefix.is_empty() => return bad("empty schedule".into()),
            _ => {}
        }
        let schedule = Self { prefix, tail };
        // spot-check the tail: continuity with the prefix, range and monotonicity
        let start = schedule.prefix.len();
        let mut prev = schedule.prefix.last().copied().unwrap_or(0.0);
        for k in start..start + 64 {
            let Some(a) = schedule.tail.eval(k) else {
                break;
            };
            if !(a > 0.0 && a <= 1.0) {
                return bad(format!("a*_{k} = {a} outside (0, 1]"));
            }
            if a < prev {
                return bad(format!("tail not non-decreasing at k = {k}"));
            }
            prev = a;
        }
        Ok(schedule)
    }

    /// `a*_k = a` for every `k`.
    pub fn constant(a: f64) -> Result<Self> {
        Self::new(Vec::new(), ScheduleTail::Constant(a))
    }

    /// `a*_k = 1` for every `k`: the zero-memory case.
    pub fn degenerate() -> Self {
        Self {
            prefix: Vec::new(),
            tail: ScheduleTail::Degenerate,
        }
    }

    /// `a*_k = 1 - scale * ratio^k`.
    pub fn geometric(scale: f64, ratio: f64) -> Result<Self> {
        Self::new(Vec::new(), ScheduleTail::GeometricGap { scale, ratio })
    }

    /// `a*_k = 1 - scale * (k + 1)^(-exponent)`.
    pub fn power(scale: f64, exponent: f64) -> Result<Self> {
        Self::new(Vec::new(), ScheduleTail::PowerGap { scale, exponent })
    }

    /// Explicit prefix followed by `a*_k = 1`.
    pub fn finite_memory(prefix: Vec<f64>) -> Result<Self> {
        Self::new(prefix, ScheduleTail::Degenerate)
    }

    pub fn prefix(&self) -> &[f64] {
        &self.prefix
    }

    pub fn tail(&self) -> &ScheduleTail {
        &self.tail
    }

    /// `a*_k`, or `None` past a finite prefix with no continuation.
    #[inline]
    pub fn value(&self, k: usize) -> Option<f64> {
        match self.prefix.get(k) {
            Some(&a) => Some(a),
            None => self.tail.eval(k),
        }
    }

    /// `a*_k` with the `a*_{-1} = 0` convention.
    pub fn value_signed(&self, k: i64) -> Option<f64> {
        if k < 0 {
            Some(0.0)
        } else {
            self.value(k as usize)
        }
    }

    /// True when `a*_j = 1` for every `j >= k`.
    pub fn is_degenerate_from(&self, k: usize) -> bool {
        match self.tail {
            ScheduleTail::Degenerate => self.prefix.len() <= k,
            _ => false,
        }
    }

    /// Pointwise `self <= other` on `0..depth`.
    pub fn dominated_by(&self, other: &ThresholdSchedule, depth: usize) -> bool {
        (0..depth).all(|k| match (self.value(k), other.value(k)) {
            (Some(a), Some(b)) => a <= b,
            (None, _) => true,
            (Some(_), None) => false,
        })
    }
}

/// The unique `K` with `a*_{K-1} <= u < a*_K`.
pub fn schedule_level(u: f64, schedule: &ThresholdSchedule) -> Result<Level> {
    let prefix = &schedule.prefix;
    let idx = prefix.partition_point(|&a| a <= u);
    if idx < prefix.len() {
        return Ok(Level::Finite(idx));
    }
    let start = prefix.len();
    let above = |k: usize| schedule.tail.eval(k).map(|a| u < a);
    match &schedule.tail {
        ScheduleTail::Exhausted => Err(Error::ScheduleExhausted { u, len: start }),
        ScheduleTail::Degenerate => Ok(Level::Finite(start)),
        ScheduleTail::Constant(a) => Ok(if u < *a {
            Level::Finite(start)
        } else {
            Level::Unbounded
        }),
        _ => {
            if above(start) == Some(true) {
                return Ok(Level::Finite(start));
            }
            // gallop to a bracket (lo, hi] with a*_lo <= u < a*_hi
            let mut lo = start;
            let mut step = 1usize;
            let hi = loop {
                let probe = start + step;
                if probe > MAX_QUERY_DEPTH {
                    return Ok(Level::Unbounded);
                }
                if above(probe) == Some(true) {
                    break probe;
                }
                lo = probe;
                step *= 2;
            };
            let (mut lo, mut hi) = (lo, hi);
            while hi - lo > 1 {
                let mid = lo + (hi - lo) / 2;
                if above(mid) == Some(true) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            Ok(Level::Finite(hi))
        }
    }
}
