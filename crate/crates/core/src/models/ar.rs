//! Binary autoregressions on `{-1, +1}`:
//! `P(+1 | w) = q(theta_0 + sum_k theta_k w_{-k})`.

use std::fmt;
use std::sync::Arc;

use crate::spec::{
    exact_threshold, Alphabet, ScheduleTail, Specification, Symbol, ThresholdSchedule,
};
use crate::{Error, Result};

/// Depth below which `r_k` is precomputed.
const REMAINDER_CACHE: usize = 512;

/// A strictly increasing, continuously differentiable `q: R -> (0, 1)`.
pub trait LinkFunction: Send + Sync {
    fn value(&self, x: f64) -> f64;
    /// `(min q', max q')` over `[lo, hi]`.
    fn derivative_extrema(&self, lo: f64, hi: f64) -> (f64, f64);
}

#[derive(Clone)]
pub enum Link {
    /// `q(x) = e^x / (2 cosh x) = 1 / (1 + e^{-2x})`.
    Logistic,
    /// `q(x) = (1 + x) / 2`.
    Linear,
    Custom(Arc<dyn LinkFunction>),
}

impl fmt::Debug for Link {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Link::Logistic => write!(f, "Logistic"),
            Link::Linear => write!(f, "Linear"),
            Link::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-2.0 * x).exp())
}

fn logistic_derivative(x: f64) -> f64 {
    let q = logistic(x);
    2.0 * q * (1.0 - q)
}

impl Link {
    pub fn q(&self, x: f64) -> f64 {
        match self {
            Link::Logistic => logistic(x),
            Link::Linear => (1.0 + x) / 2.0,
            Link::Custom(l) => l.value(x),
        }
    }

    /// `(C-, C+)`: min and max of `q'` over `[lo, hi]`.
    pub fn derivative_extrema(&self, lo: f64, hi: f64) -> (f64, f64) {
        match self {
            Link::Logistic => {
                // q' is even and decreasing in |x|
                let nearest = 0.0f64.clamp(lo, hi);
                let farthest = if lo.abs() > hi.abs() { lo } else { hi };
                (logistic_derivative(farthest), logistic_derivative(nearest))
            }
            Link::Linear => (0.5, 0.5),
            Link::Custom(l) => l.derivative_extrema(lo, hi),
        }
    }
}

/// Closed-form continuation of the coefficients past the explicit list.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoefficientTail {
    /// `theta_m = scale * m^(-exponent)`.
    Power { scale: f64, exponent: f64 },
    /// `theta_m = scale * ratio^m`.
    Geometric { scale: f64, ratio: f64 },
}

impl CoefficientTail {
    pub fn coefficient(&self, m: usize) -> f64 {
        match *self {
            Self::Power { scale, exponent } => scale * (m as f64).powf(-exponent),
            Self::Geometric { scale, ratio } => scale * ratio.powi(m as i32),
        }
    }

    /// `sum_{m >= from} |theta_m|`, `from >= 1`.
    pub fn abs_sum_from(&self, from: usize, k: usize) -> Result<f64> {
        match *self {
            Self::Power { scale, exponent } => {
                if exponent <= 1.0 {
                    return Err(Error::TailUnavailable {
                        k,
                        reason: format!("power tail exponent {exponent} <= 1 diverges"),
                    });
                }
                Ok(scale.abs() * hurwitz_zeta(exponent, from))
            }
            Self::Geometric { scale, ratio } => {
                let r = ratio.abs();
                if r >= 1.0 {
                    return Err(Error::TailUnavailable {
                        k,
                        reason: format!("geometric tail ratio {ratio} not in (-1, 1)"),
                    });
                }
                Ok(scale.abs() * r.powi(from as i32) / (1.0 - r))
            }
        }
    }
}

/// `sum_{m >= n} m^{-s}` for `s > 1`, `n >= 1`: direct sum up to 32 terms
/// past `n`, then Euler-Maclaurin.
pub fn hurwitz_zeta(s: f64, n: usize) -> f64 {
    let n0 = n.max(1);
    let cut = n0 + 32;
    let head: f64 = (n0..cut).map(|m| (m as f64).powf(-s)).sum();
    let x = cut as f64;
    let tail = x.powf(1.0 - s) / (s - 1.0) + 0.5 * x.powf(-s) + s * x.powf(-s - 1.0) / 12.0
        - s * (s + 1.0) * (s + 2.0) * x.powf(-s - 3.0) / 720.0
        + s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * x.powf(-s - 5.0) / 30240.0;
    head + tail
}

#[derive(Debug, Clone)]
struct Coefficients {
    explicit: Vec<f64>,
    tail: Option<CoefficientTail>,
    remainders: Vec<f64>,
}

impl Coefficients {
    fn new(explicit: Vec<f64>, tail: Option<CoefficientTail>) -> Result<Self> {
        let mut c = Self {
            explicit,
            tail,
            remainders: Vec::new(),
        };
        let upto = REMAINDER_CACHE.max(c.explicit.len() + 1);
        let mut r = Vec::with_capacity(upto);
        for k in 0..upto {
            r.push(c.remainder_uncached(k)?);
        }
        c.remainders = r;
        Ok(c)
    }

    fn theta(&self, m: usize) -> f64 {
        debug_assert!(m >= 1);
        match self.explicit.get(m - 1) {
            Some(&t) => t,
            None => self.tail.map_or(0.0, |t| t.coefficient(m)),
        }
    }

    fn remainder_uncached(&self, k: usize) -> Result<f64> {
        let len = self.explicit.len();
        let tail = match self.tail {
            Some(t) => t.abs_sum_from(len.max(k) + 1, k)?,
            None => 0.0,
        };
        let explicit: f64 = self.explicit.iter().skip(k).map(|t| t.abs()).sum();
        Ok(explicit + tail)
    }

    fn remainder(&self, k: usize) -> Result<f64> {
        match self.remainders.get(k) {
            Some(&r) => Ok(r),
            None => self.remainder_uncached(k),
        }
    }

    /// True when `r_k = 0` for every `k >= len` of the explicit list.
    fn finite(&self) -> bool {
        self.tail.is_none()
    }

    /// First `k` with `r_k = 0`, if the coefficients are finitely supported.
    fn support_end(&self) -> Option<usize> {
        if !self.finite() {
            return None;
        }
        let last = self.explicit.iter().rposition(|t| *t != 0.0);
        Some(last.map_or(0, |i| i + 1))
    }
}

/// Binary autoregressive specification.
#[derive(Debug, Clone)]
pub struct BinaryArSpec {
    alphabet: Alphabet,
    theta0: f64,
    coefficients: Arc<Coefficients>,
    link: Link,
    k0: Option<usize>,
    k_enum: usize,
}

pub const DEFAULT_K_ENUM: usize = 16;

impl BinaryArSpec {
    pub fn new(
        theta0: f64,
        theta: Vec<f64>,
        tail: Option<CoefficientTail>,
        link: Link,
    ) -> Result<Self> {
        if !theta0.is_finite() || theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidSpecification("non-finite coefficient".into()));
        }
        let coefficients = Coefficients::new(theta, tail)?;
        let spec = Self {
            alphabet: Alphabet::binary_signs(),
            theta0,
            coefficients: Arc::new(coefficients),
            link,
            k0: None,
            k_enum: DEFAULT_K_ENUM,
        };
        if matches!(spec.link, Link::Linear) {
            let total = theta0.abs() + spec.remainder(0)?;
            if total >= 1.0 {
                return Err(Error::InvalidSpecification(format!(
                    "linear link needs |theta_0| + sum |theta_m| < 1, got {total}"
                )));
            }
        }
        Ok(spec)
    }

    pub fn linear(theta0: f64, theta: Vec<f64>) -> Result<Self> {
        Self::new(theta0, theta, None, Link::Linear)
    }

    pub fn logistic(theta0: f64, theta: Vec<f64>) -> Result<Self> {
        Self::new(theta0, theta, None, Link::Logistic)
    }

    pub fn with_k0(mut self, k0: Option<usize>) -> Self {
        self.k0 = k0;
        self
    }

    pub fn with_k_enum(mut self, k_enum: usize) -> Self {
        self.k_enum = k_enum;
        self
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    /// `theta_m` for `m >= 1`.
    pub fn theta(&self, m: usize) -> f64 {
        self.coefficients.theta(m)
    }

    pub fn link(&self) -> &Link {
        &self.link
    }

    pub fn k_enum(&self) -> usize {
        self.k_enum
    }

    /// `r_k = sum_{m > k} |theta_m|`.
    pub fn remainder(&self, k: usize) -> Result<f64> {
        self.coefficients.remainder(k)
    }

    /// `(C-, C+)`: extrema of `q'` over `[theta_0 - r_0, theta_0 + r_0]`.
    pub fn derivative_bounds(&self) -> (f64, f64) {
        let r0 = self.coefficients.remainders[0];
        self.link
            .derivative_extrema(self.theta0 - r0, self.theta0 + r0)
    }

    fn drift(&self, history: &[Symbol]) -> f64 {
        let mut s = self.theta0;
        for (j, g) in history.iter().enumerate() {
            let w = if g.index() == 1 { 1.0 } else { -1.0 };
            s += self.coefficients.theta(j + 1) * w;
        }
        s
    }

    /// `a_k` by enumerating all `2^k` histories.
    pub fn exact_threshold(&self, k: usize) -> f64 {
        exact_threshold(self, k)
    }

    fn k0_admissible(&self, k0: usize, c_plus: f64) -> Result<bool> {
        Ok(k0 <= self.k_enum && 2.0 * c_plus * self.remainder(k0)? < 1.0)
    }

    /// Threshold schedule built from exact enumeration below `k0` and the
    /// bound `1 - 2 C+ r_k` from `k0` on. Linear links use `a_k = 1 - r_k`,
    /// which holds for every history.
    pub fn schedule(&self) -> Result<ThresholdSchedule> {
        if matches!(self.link, Link::Linear) {
            return self.gap_schedule(0, 1.0, Vec::new());
        }
        let (_, c_plus) = self.derivative_bounds();
        let k0 = match self.k0 {
            Some(k0) => k0,
            None => match self.coefficients.support_end() {
                Some(end) => end.min(self.k_enum),
                None => self.k_enum,
            },
        };
        if !self.k0_admissible(k0, c_plus)? {
            return Err(Error::InfeasibleK0 {
                k_enum: self.k_enum,
            });
        }
        let cap = 1.0 - 2.0 * c_plus * self.remainder(k0)?;
        let mut prefix = Vec::with_capacity(k0);
        for k in 0..k0 {
            let a = self.exact_threshold(k).min(cap);
            if a >= 1.0 {
                // rounding put a_k at one: the remaining memory is below resolution
                return ThresholdSchedule::new(prefix, ScheduleTail::Degenerate);
            }
            prefix.push(a);
        }
        self.gap_schedule(k0, 2.0 * c_plus, prefix)
    }

    /// Appends `a*_k = 1 - factor * r_k` for `k >= from` to `prefix`.
    fn gap_schedule(
        &self,
        from: usize,
        factor: f64,
        mut prefix: Vec<f64>,
    ) -> Result<ThresholdSchedule> {
        if let Some(end) = self.coefficients.support_end() {
            for k in from..end.max(from) {
                prefix.push(1.0 - factor * self.remainder(k)?);
            }
            return ThresholdSchedule::new(prefix, ScheduleTail::Degenerate);
        }
        let coefficients = Arc::clone(&self.coefficients);
        let tail = ScheduleTail::Custom(Arc::new(move |k| {
            1.0 - factor
                * coefficients
                    .remainder(k)
                    .expect("tail sum validated at construction")
        }));
        ThresholdSchedule::new(prefix, tail)
    }
}

impl Specification for BinaryArSpec {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn minorant(&self, g: Symbol, history: &[Symbol]) -> f64 {
        let s = self.drift(history);
        let r = self
            .coefficients
            .remainder(history.len())
            .expect("tail sum validated at construction");
        if g.index() == 1 {
            self.link.q(s - r)
        } else {
            1.0 - self.link.q(s + r)
        }
    }
}
