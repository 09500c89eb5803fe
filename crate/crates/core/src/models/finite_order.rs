//! Order-`m` Markov specifications given by an explicit transition table.

use crate::spec::{
    exact_threshold, Alphabet, ScheduleTail, Specification, Symbol, ThresholdSchedule,
};
use crate::{Error, Result};

/// `P(g | w_{-1}, ..., w_{-m})` stored row-per-context.
///
/// Context index of `(w_{-1}, ..., w_{-m})` is `sum_j w_{-j} * n^{j-1}`,
/// so `w_{-1}` is the fastest-varying digit.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteOrderSpec {
    alphabet: Alphabet,
    order: usize,
    table: Vec<Vec<f64>>,
    /// `mins[k][ctx_k][g] = a_k(g | ctx_k)` for `k < order`.
    mins: Vec<Vec<Vec<f64>>>,
}

pub fn context_index(n: usize, history: &[Symbol]) -> usize {
    history.iter().rev().fold(0, |acc, g| acc * n + g.index())
}

pub fn context_of(n: usize, order: usize, mut index: usize) -> Vec<Symbol> {
    (0..order)
        .map(|_| {
            let g = Symbol((index % n) as u32);
            index /= n;
            g
        })
        .collect()
}

impl FiniteOrderSpec {
    pub fn new(alphabet: Alphabet, order: usize, table: Vec<Vec<f64>>) -> Result<Self> {
        let n = alphabet.len();
        let rows = n
            .checked_pow(order as u32)
            .ok_or_else(|| Error::InvalidSpecification("context space too large".into()))?;
        if table.len() != rows {
            return Err(Error::InvalidSpecification(format!(
                "expected {rows} rows, got {}",
                table.len()
            )));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidSpecification(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if row.iter().any(|p| !(*p >= 0.0 && *p <= 1.0)) {
                return Err(Error::InvalidSpecification(format!(
                    "row {i} has an entry outside [0, 1]"
                )));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidSpecification(format!(
                    "row {i} sums to {sum}"
                )));
            }
        }
        let mut mins = Vec::with_capacity(order);
        for k in 0..order {
            let span = n.pow((order - k) as u32);
            let prefixes = n.pow(k as u32);
            let level: Vec<Vec<f64>> = (0..prefixes)
                .map(|ctx| {
                    (0..n)
                        .map(|g| {
                            // full contexts whose k most recent symbols match ctx
                            (0..span)
                                .map(|ext| table[ctx + prefixes * ext][g])
                                .fold(f64::INFINITY, f64::min)
                        })
                        .collect()
                })
                .collect();
            mins.push(level);
        }
        Ok(Self {
            alphabet,
            order,
            table,
            mins,
        })
    }

    /// Order-0 (i.i.d.) specification.
    pub fn iid(alphabet: Alphabet, probabilities: Vec<f64>) -> Result<Self> {
        Self::new(alphabet, 0, vec![probabilities])
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn table(&self) -> &[Vec<f64>] {
        &self.table
    }

    /// `P(g | history)`, reading the `order` most recent symbols.
    pub fn transition(&self, g: Symbol, history: &[Symbol]) -> f64 {
        let ctx = context_index(self.alphabet.len(), &history[..self.order]);
        self.table[ctx][g.index()]
    }

    /// Exact thresholds below the order, `a*_k = 1` from the order on.
    pub fn schedule(&self) -> Result<ThresholdSchedule> {
        let mut prefix = Vec::with_capacity(self.order);
        for k in 0..self.order {
            let a = exact_threshold(self, k);
            if a >= 1.0 {
                break;
            }
            prefix.push(a);
        }
        if prefix.first() == Some(&0.0) {
            return Err(Error::InvalidSchedule(
                "a_0 = 0: no symbol has a history-free lower bound".into(),
            ));
        }
        ThresholdSchedule::new(prefix, ScheduleTail::Degenerate)
    }
}

impl Specification for FiniteOrderSpec {
    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn minorant(&self, g: Symbol, history: &[Symbol]) -> f64 {
        let n = self.alphabet.len();
        let k = history.len();
        if k >= self.order {
            self.table[context_index(n, &history[..self.order])][g.index()]
        } else {
            self.mins[k][context_index(n, history)][g.index()]
        }
    }
}
