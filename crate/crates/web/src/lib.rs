//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Three operations are exported: the return-probability curve of a
//! threshold family, a perfect sample path of a binary autoregression, and
//! a histogram of perfect samples of the binary interval chain.

use regensim::engine::sample_window;
use regensim::house_of_cards::rho_table;
use regensim::models::{
    dary_perfect_marginal, BinaryArSpec, CoefficientTail, FiniteOrderSpec, Link,
};
use regensim::uniform::derive_seed;
use regensim::{Alphabet, ThresholdSchedule, UniformField};
use wasm_bindgen::prelude::*;

const MAX_DEPTH: usize = 1_000_000;

/// Threshold family by name: `constant` (`a`), `geometric`
/// (`1 - a b^k`) or `power` (`1 - a (k+1)^-b`).
pub fn family(name: &str, a: f64, b: f64) -> Result<ThresholdSchedule, String> {
    let s = match name {
        "constant" => ThresholdSchedule::constant(a),
        "geometric" => ThresholdSchedule::geometric(a, b),
        "power" => ThresholdSchedule::power(a, b),
        other => return Err(format!("unknown family {other:?}")),
    };
    s.map_err(|e| e.to_string())
}

/// `[beta_0..=beta_N, rho_0..=rho_N]`.
pub fn rho_curve_values(name: &str, a: f64, b: f64, horizon: usize) -> Result<Vec<f64>, String> {
    let schedule = family(name, a, b)?;
    let t = rho_table(&schedule, horizon.max(1)).map_err(|e| e.to_string())?;
    Ok(t.beta.into_iter().chain(t.rho).collect())
}

/// Symbols of a sampled window and its regeneration time.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    pub symbols: Vec<i32>,
    pub tau: i64,
}

/// A sample path on `[0, len - 1]` of the autoregression with drift
/// `theta0 + sum_m theta_m w_{-m}`, explicit coefficients followed by
/// `tail_scale * tail_ratio^m` when `tail_scale != 0`.
pub fn ar_path_values(
    theta0: f64,
    theta: Vec<f64>,
    tail_scale: f64,
    tail_ratio: f64,
    logistic: bool,
    len: usize,
    seed: u32,
) -> Result<Path, String> {
    let tail = (tail_scale != 0.0).then_some(CoefficientTail::Geometric {
        scale: tail_scale,
        ratio: tail_ratio,
    });
    let link = if logistic {
        Link::Logistic
    } else {
        Link::Linear
    };
    // keep the demo responsive: enumerate exact thresholds only a few levels deep
    let spec = BinaryArSpec::new(theta0, theta, tail, link)
        .map_err(|e| e.to_string())?
        .with_k_enum(10);
    let schedule = spec.schedule().map_err(|e| e.to_string())?;
    let field = UniformField::new(seed as u64);
    let w = sample_window(
        0,
        len.max(1) as i64 - 1,
        &field,
        &spec,
        &schedule,
        MAX_DEPTH,
    )
    .map_err(|e| e.to_string())?;
    Ok(Path {
        symbols: w
            .symbols
            .iter()
            .map(|g| if g.0 == 1 { 1 } else { -1 })
            .collect(),
        tau: w.record.tau,
    })
}

/// Cell counts of `samples` perfect draws of the binary interval chain at
/// `resolution`, for digits with `P(1 | 0) = p10` and `P(1 | 1) = p11`.
pub fn dary_histogram_values(
    p10: f64,
    p11: f64,
    resolution: usize,
    samples: u32,
    seed: u32,
) -> Result<Vec<u32>, String> {
    if !(1..=12).contains(&resolution) {
        return Err("resolution must be between 1 and 12".into());
    }
    let rows = vec![vec![1.0 - p10, p10], vec![1.0 - p11, p11]];
    let alphabet = Alphabet::range(2).map_err(|e| e.to_string())?;
    let spec = FiniteOrderSpec::new(alphabet, 1, rows).map_err(|e| e.to_string())?;
    let schedule = spec.schedule().map_err(|e| e.to_string())?;
    let mut counts = vec![0u32; 1 << resolution];
    for i in 0..samples {
        let field = UniformField::new(derive_seed(seed as u64, i as u64));
        let (state, _) = dary_perfect_marginal(&spec, &schedule, resolution, &field, MAX_DEPTH)
            .map_err(|e| e.to_string())?;
        counts[state.cell() as usize] += 1;
    }
    Ok(counts)
}

#[wasm_bindgen]
pub fn rho_curve(family: &str, a: f64, b: f64, horizon: usize) -> Result<Vec<f64>, JsError> {
    rho_curve_values(family, a, b, horizon).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub struct ArPath {
    symbols: Vec<i32>,
    tau: i64,
}

#[wasm_bindgen]
impl ArPath {
    #[wasm_bindgen(getter)]
    pub fn symbols(&self) -> Vec<i32> {
        self.symbols.clone()
    }

    /// Regeneration time of the window (a negative integer or 0).
    #[wasm_bindgen(getter)]
    pub fn tau(&self) -> f64 {
        self.tau as f64
    }
}

#[wasm_bindgen]
pub fn ar_path(
    theta0: f64,
    theta: Vec<f64>,
    tail_scale: f64,
    tail_ratio: f64,
    logistic: bool,
    len: usize,
    seed: u32,
) -> Result<ArPath, JsError> {
    let p = ar_path_values(theta0, theta, tail_scale, tail_ratio, logistic, len, seed)
        .map_err(|e| JsError::new(&e))?;
    Ok(ArPath {
        symbols: p.symbols,
        tau: p.tau,
    })
}

#[wasm_bindgen]
pub fn dary_histogram(
    p10: f64,
    p11: f64,
    resolution: usize,
    samples: u32,
    seed: u32,
) -> Result<Vec<u32>, JsError> {
    dary_histogram_values(p10, p11, resolution, samples, seed).map_err(|e| JsError::new(&e))
}
