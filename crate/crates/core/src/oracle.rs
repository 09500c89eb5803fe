//! Reference implementations for testing the sampler.
//!
//! Everything here is written independently of [`crate::partition`] and
//! [`crate::engine`]: thresholds are scanned directly and partitions are laid
//! out naively, so a bug in one side is unlikely to be mirrored in the other.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::models::{context_index, FiniteOrderSpec};
use crate::spec::{Alphabet, Specification, Symbol, ThresholdSchedule};
use crate::uniform::ExplicitUniforms;
use crate::{Error, Result};

/// Stationary law of an order-`m` chain as a distribution over its
/// contexts `(w_{-1}, ..., w_{-m})`.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryLaw {
    pub order: usize,
    /// Indexed like [`context_index`].
    pub probs: Vec<f64>,
    /// `max |pi T - pi|`.
    pub residual: f64,
    table: Vec<Vec<f64>>,
    symbols: usize,
}

impl StationaryLaw {
    /// Probability that `x_1, ..., x_L` (in time order) appear at
    /// consecutive times.
    pub fn word_probability(&self, word: &[Symbol]) -> f64 {
        let (n, m) = (self.symbols, self.order);
        let head = word.len().min(m);
        // contexts whose `head` most recent symbols are word[..head]
        let mut p = 0.0;
        for (ctx, &pc) in self.probs.iter().enumerate() {
            let mut c = ctx;
            let mut ok = true;
            for j in 0..head {
                if c % n != word[head - 1 - j].index() {
                    ok = false;
                    break;
                }
                c /= n;
            }
            if ok {
                p += pc;
            }
        }
        for i in head..word.len() {
            let history: Vec<Symbol> = word[i - m..i].iter().rev().copied().collect();
            p *= self.table[context_index(n, &history)][word[i].index()];
        }
        p
    }

    /// Single-site marginal in alphabet order.
    pub fn marginal(&self) -> Vec<f64> {
        (0..self.symbols)
            .map(|g| self.word_probability(&[Symbol(g as u32)]))
            .collect()
    }
}

/// Solves `pi T = pi`, `sum pi = 1` on the context space by LU
/// decomposition.
pub fn exact_stationary(spec: &FiniteOrderSpec) -> Result<StationaryLaw> {
    let n = spec.alphabet().len();
    let m = spec.order();
    let table = spec.table().to_vec();
    let size = table.len();
    let low = if m == 0 { 1 } else { n.pow(m as u32 - 1) };
    // T[c][c'] for c = (w_{-1}, ..., w_{-m}) -> c' = (g, w_{-1}, ..., w_{-m+1})
    let mut t = DMatrix::<f64>::zeros(size, size);
    for c in 0..size {
        for g in 0..n {
            let next = if m == 0 { 0 } else { g + n * (c % low) };
            t[(c, next)] += table[c][g];
        }
    }
    let mut a = t.transpose() - DMatrix::<f64>::identity(size, size);
    for j in 0..size {
        a[(size - 1, j)] = 1.0;
    }
    let mut b = DVector::<f64>::zeros(size);
    b[size - 1] = 1.0;
    let pi = a.lu().solve(&b).ok_or(Error::Reducible)?;
    if pi.iter().any(|p| !p.is_finite() || *p < -1e-12) {
        return Err(Error::Reducible);
    }
    let probs: Vec<f64> = pi.iter().map(|p| p.max(0.0)).collect();
    let moved = t.transpose() * DVector::from_vec(probs.clone());
    let residual = moved
        .iter()
        .zip(&probs)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    Ok(StationaryLaw {
        order: m,
        probs,
        residual,
        table,
        symbols: n,
    })
}

/// Regeneration time from the definition: the largest `m <= s` with
/// `u_k < a*_{k-m}` for every `k` in `[m, t]`, searching down to the first
/// index of `u`.
fn naive_tau(u: &ExplicitUniforms, schedule: &ThresholdSchedule, s: i64, t: i64) -> Option<i64> {
    if u.get(t).is_none() || u.get(s).is_none() {
        return None;
    }
    let mut m = s;
    while m >= u.start {
        let good = (m..=t).all(|k| match schedule.value((k - m) as usize) {
            Some(a) => u.get(k).unwrap() < a,
            None => false,
        });
        if good {
            return Some(m);
        }
        m -= 1;
    }
    None
}

/// The symbol whose cell in the full layered partition contains `u`.
/// Cells are laid out level by level, alphabet order within a level, each
/// of length `a_l(g | w) - a_{l-1}(g | w)`.
fn naive_symbol<S: Specification + ?Sized>(spec: &S, u: f64, past: &[Symbol]) -> Option<Symbol> {
    let n = spec.alphabet().len();
    let mut pos = 0.0;
    let mut prev = vec![0.0; n];
    let mut last_nonempty = None;
    for level in 0..=past.len() {
        let history: Vec<Symbol> = past.iter().rev().take(level).copied().collect();
        for g in 0..n {
            let a = spec.minorant(Symbol(g as u32), &history);
            let width = a - prev[g];
            prev[g] = a;
            pos += width;
            if width > 0.0 {
                last_nonempty = Some(Symbol(g as u32));
                if u < pos {
                    return last_nonempty;
                }
            }
        }
        // numerically the last level may close a hair below one
        if level == past.len() && u < 1.0 && pos > 1.0 - 1e-9 {
            return last_nonempty;
        }
    }
    None
}

/// Literal forward construction from the regeneration time: `x_tau`,
/// `x_{tau+1}`, ... are read off the partition with all history from `tau`
/// on. Returns `x_s, ..., x_t`, or `None` when `u` is too short to find the
/// regeneration time.
pub fn brute_force_phi<S: Specification + ?Sized>(
    u: &ExplicitUniforms,
    spec: &S,
    schedule: &ThresholdSchedule,
    s: i64,
    t: i64,
) -> Option<Vec<Symbol>> {
    let tau = naive_tau(u, schedule, s, t)?;
    let mut x: Vec<Symbol> = Vec::new();
    for j in tau..=t {
        let g = naive_symbol(spec, u.get(j)?, &x)?;
        x.push(g);
    }
    Some(x.split_off((s - tau) as usize))
}

/// Empirical total variation against a reference law.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub tv: f64,
    /// `1/2 sum_g sqrt(p_g (1 - p_g) / N)`, a scale for the noise in `tv`.
    pub stderr: f64,
    pub samples: u64,
    pub pass: bool,
}

/// Compares category counts with `reference`; passes when `tv <= tol`.
pub fn compare_counts(counts: &[u64], reference: &[f64], tol: f64) -> Comparison {
    assert_eq!(counts.len(), reference.len(), "category count mismatch");
    let total: u64 = counts.iter().sum();
    assert!(total > 0, "no samples");
    let nf = total as f64;
    let tv = 0.5
        * counts
            .iter()
            .zip(reference)
            .map(|(&c, &p)| (c as f64 / nf - p).abs())
            .sum::<f64>();
    let stderr = 0.5
        * reference
            .iter()
            .map(|&p| (p * (1.0 - p) / nf).sqrt())
            .sum::<f64>();
    Comparison {
        tv,
        stderr,
        samples: total,
        pass: tv <= tol,
    }
}

/// As [`compare_counts`], with samples given as category indices.
pub fn compare_distributions(samples: &[usize], reference: &[f64], tol: f64) -> Comparison {
    let mut counts = vec![0u64; reference.len()];
    for &i in samples {
        counts[i] += 1;
    }
    compare_counts(&counts, reference, tol)
}

/// A small random order-`m` specification with a positive history-free
/// threshold.
#[derive(Debug, Clone)]
pub struct RandomInstance {
    pub spec: FiniteOrderSpec,
    pub s: i64,
    pub t: i64,
    pub field_seed: u64,
}

/// Random instances with `|G| <= max_symbols`, order `<= max_order` and
/// window length `<= max_window`. Seeded separately from any
/// [`crate::UniformField`].
pub struct InstanceGenerator {
    rng: ChaCha8Rng,
    max_symbols: usize,
    max_order: usize,
    max_window: usize,
}

impl InstanceGenerator {
    pub fn new(seed: u64, max_symbols: usize, max_order: usize, max_window: usize) -> Self {
        assert!(max_symbols >= 1 && max_window >= 1);
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            max_symbols,
            max_order,
            max_window,
        }
    }

    /// Rows with `|G| = n` whose entries all exceed `floor / n`.
    pub fn random_table(&mut self, n: usize, order: usize, floor: f64) -> Vec<Vec<f64>> {
        (0..n.pow(order as u32))
            .map(|_| {
                let raw: Vec<f64> = (0..n).map(|_| floor + self.rng.random::<f64>()).collect();
                let sum: f64 = raw.iter().sum();
                let mut row: Vec<f64> = raw.iter().map(|r| r / sum).collect();
                // make the row sum to one exactly in floating point
                let rest: f64 = row[..n - 1].iter().sum();
                row[n - 1] = 1.0 - rest;
                row
            })
            .collect()
    }

    pub fn next_instance(&mut self) -> RandomInstance {
        let n = self.rng.random_range(1..=self.max_symbols);
        let order = self.rng.random_range(0..=self.max_order);
        let floor = self.rng.random_range(0.05..1.0);
        let table = self.random_table(n, order, floor);
        let labels: Vec<i64> = (0..n as i64).collect();
        let spec = FiniteOrderSpec::new(
            Alphabet::new(labels).expect("distinct labels"),
            order,
            table,
        )
        .expect("rows are normalized");
        let len = self.rng.random_range(1..=self.max_window) as i64;
        let s = self.rng.random_range(-20..=20);
        RandomInstance {
            spec,
            s,
            t: s + len - 1,
            field_seed: self.rng.random(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nine_fourteen() -> FiniteOrderSpec {
        FiniteOrderSpec::new(
            Alphabet::binary_signs(),
            1,
            vec![vec![0.55, 0.45], vec![0.25, 0.75]],
        )
        .unwrap()
    }

    #[test]
    fn two_state_chain() {
        let law = exact_stationary(&nine_fourteen()).unwrap();
        assert!((law.probs[1] - 9.0 / 14.0).abs() < 1e-14);
        assert!(law.residual <= 1e-12);
        assert!((law.marginal()[1] - 9.0 / 14.0).abs() < 1e-14);
        // P(+, +) = pi(+) P(+|+)
        assert!((law.word_probability(&[Symbol(1), Symbol(1)]) - 9.0 / 14.0 * 0.75).abs() < 1e-14);
    }

    #[test]
    fn symmetric_chain_is_uniform() {
        let spec = FiniteOrderSpec::new(
            Alphabet::binary_signs(),
            1,
            vec![vec![0.8, 0.2], vec![0.2, 0.8]],
        )
        .unwrap();
        let law = exact_stationary(&spec).unwrap();
        assert!(law.probs.iter().all(|p| (p - 0.5).abs() < 1e-14));
    }

    #[test]
    fn iid_rows() {
        let spec = FiniteOrderSpec::iid(Alphabet::range(3).unwrap(), vec![0.2, 0.3, 0.5]).unwrap();
        let law = exact_stationary(&spec).unwrap();
        assert!((law.marginal()[2] - 0.5).abs() < 1e-15);
        assert!((law.word_probability(&[Symbol(0), Symbol(2)]) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn reducible_chain() {
        let spec = FiniteOrderSpec::new(
            Alphabet::binary_signs(),
            1,
            vec![vec![1.0, 0.0], vec![0.0, 1.0]],
        )
        .unwrap();
        assert_eq!(exact_stationary(&spec), Err(Error::Reducible));
    }

    #[test]
    fn order_two_words_sum_to_one() {
        let mut gen = InstanceGenerator::new(1, 3, 2, 4);
        let table = gen.random_table(3, 2, 0.2);
        let spec = FiniteOrderSpec::new(Alphabet::range(3).unwrap(), 2, table).unwrap();
        let law = exact_stationary(&spec).unwrap();
        assert!(law.residual <= 1e-12);
        let mut total = 0.0;
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    total += law.word_probability(&[Symbol(a), Symbol(b), Symbol(c)]);
                }
            }
        }
        assert!((total - 1.0).abs() < 1e-12);
        // stationarity: marginal of the last of two equals marginal of the first
        for g in 0..3 {
            let first: f64 = (0..3)
                .map(|h| law.word_probability(&[Symbol(g), Symbol(h)]))
                .sum();
            let last: f64 = (0..3)
                .map(|h| law.word_probability(&[Symbol(h), Symbol(g)]))
                .sum();
            assert!((first - last).abs() < 1e-12);
        }
    }

    #[test]
    fn phi_one_symbol() {
        let spec = FiniteOrderSpec::iid(Alphabet::new(vec![4]).unwrap(), vec![1.0]).unwrap();
        let u = ExplicitUniforms::new(0, vec![0.3, 0.99, 0.5]);
        let out = brute_force_phi(&u, &spec, &spec.schedule().unwrap(), 0, 2).unwrap();
        assert_eq!(out, vec![Symbol(0); 3]);
    }

    #[test]
    fn phi_undefined_when_short() {
        let spec = nine_fourteen();
        let schedule = spec.schedule().unwrap();
        // u_0 = 0.9 >= a*_0 = 0.7, and nothing before it
        let u = ExplicitUniforms::new(0, vec![0.9]);
        assert_eq!(brute_force_phi(&u, &spec, &schedule, 0, 0), None);
        let u = ExplicitUniforms::new(-1, vec![0.1, 0.9]);
        // x_{-1} = -1 (u < 0.25); given -1, level 1 is [0.7, 1) for -1 alone
        assert_eq!(
            brute_force_phi(&u, &spec, &schedule, 0, 0),
            Some(vec![Symbol(0)])
        );
    }

    #[test]
    fn comparison_scale() {
        let c = compare_counts(&[1000, 0], &[0.5, 0.5], 0.01);
        assert!((c.tv - 0.5).abs() < 1e-15);
        assert!(!c.pass);
        let c = compare_distributions(&[0, 1, 0, 1], &[0.5, 0.5], 0.01);
        assert_eq!(c.tv, 0.0);
        assert!(c.pass);
    }
}
