//! Layered interval partition of `[0, 1)`.
//!
//! For a history `w`, level `l` holds one interval per symbol `g` of length
//! `b_l(g | w) = a_l(g | w) - a_{l-1}(g | w)` (with `b_0(g) = a_0(g)`),
//! laid out consecutively in (level, symbol) order starting at 0. Levels
//! `0..=l` together cover `[0, c_l)` with `c_l = sum_g a_l(g | w)`.

use crate::spec::{level_mass, Specification, Symbol};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub level: usize,
    pub symbol: Symbol,
    /// Left-closed.
    pub start: f64,
    /// Right-open.
    pub end: f64,
}

impl Interval {
    pub fn len(&self) -> f64 {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }

    pub fn contains(&self, u: f64) -> bool {
        self.start <= u && u < self.end
    }
}

/// The partition for one history, materialized down to a fixed depth.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerLayout {
    /// In layout order: level-major, then alphabet order.
    pub intervals: Vec<Interval>,
    /// `c_l` for `l = 0..=depth`.
    pub boundaries: Vec<f64>,
}

impl LayerLayout {
    pub fn depth(&self) -> usize {
        self.boundaries.len() - 1
    }

    pub fn level(&self, l: usize) -> &[Interval] {
        let n = self.intervals.len() / self.boundaries.len();
        &self.intervals[l * n..(l + 1) * n]
    }

    /// Total length assigned to `g` over all materialized levels.
    pub fn symbol_mass(&self, g: Symbol) -> f64 {
        self.intervals
            .iter()
            .filter(|iv| iv.symbol == g)
            .map(Interval::len)
            .sum()
    }
}

/// Builds levels `0..=depth` for `history` (most recent first; at least
/// `depth` symbols long).
pub fn layer_layout<S: Specification + ?Sized>(
    spec: &S,
    history: &[Symbol],
    depth: usize,
) -> LayerLayout {
    assert!(history.len() >= depth, "history shorter than layout depth");
    let n = spec.alphabet().len();
    let mut prev = vec![0.0; n];
    let mut intervals = Vec::with_capacity(n * (depth + 1));
    let mut boundaries = Vec::with_capacity(depth + 1);
    let mut lower = 0.0;
    for level in 0..=depth {
        let w = &history[..level];
        let mut pos = lower;
        for g in spec.alphabet().symbols() {
            let a = spec.minorant(g, w);
            let start = pos;
            pos += a - prev[g.index()];
            intervals.push(Interval {
                level,
                symbol: g,
                start,
                end: pos,
            });
            prev[g.index()] = a;
        }
        lower = level_mass(spec, w);
        // close the level exactly on c_l
        if let Some(last) = intervals.last_mut() {
            last.end = lower;
        }
        boundaries.push(lower);
    }
    LayerLayout {
        intervals,
        boundaries,
    }
}

/// Where a uniform landed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Located {
    pub level: usize,
    pub symbol: Symbol,
}

/// Resolves `u` to the unique `(l, g)` with `u` in `B_l(g | w)`, building
/// levels lazily and asking `history(d)` for `w_{-d}` only when level `d`
/// is needed. Levels beyond `cap` are never built.
pub fn locate<S, F>(u: f64, mut history: F, spec: &S, cap: usize) -> Result<Located>
where
    S: Specification + ?Sized,
    F: FnMut(usize) -> Symbol,
{
    let n = spec.alphabet().len();
    let mut prev = vec![0.0; n];
    let mut cur = vec![0.0; n];
    let mut w: Vec<Symbol> = Vec::new();
    let mut lower = 0.0;
    for level in 0..=cap {
        if level > 0 {
            w.push(history(level));
        }
        let mut mass = 0.0;
        for g in spec.alphabet().symbols() {
            let a = spec.minorant(g, &w);
            cur[g.index()] = a;
            mass += a;
        }
        if u < mass {
            let mut pos = lower;
            let mut last_nonempty = None;
            for g in spec.alphabet().symbols() {
                let b = cur[g.index()] - prev[g.index()];
                if b > 0.0 {
                    last_nonempty = Some(g);
                }
                pos += b;
                if u < pos {
                    return Ok(Located { level, symbol: g });
                }
            }
            // u sits in the rounding sliver between the running sum and c_l
            let symbol = last_nonempty.unwrap_or(Symbol(n as u32 - 1));
            return Ok(Located { level, symbol });
        }
        lower = mass;
        std::mem::swap(&mut prev, &mut cur);
    }
    Err(Error::DominanceViolation {
        u,
        cap,
        boundary: lower,
    })
}
