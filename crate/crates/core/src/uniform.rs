//! Stateless indexed uniforms.
//!
//! The regeneration search reads `U_i` backwards in time and overlapping
//! windows must see the same values, so the uniform at index `i` is a pure
//! keyed hash of `(seed, i)` rather than the next draw of a stream.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
const KEY_SALT: u64 = 0xD1B5_4A32_D192_ED03;
const SEED_SALT: u64 = 0x5851_F42D_4C95_7F2D;
const INV_2_53: f64 = 1.0 / (1u64 << 53) as f64;

/// SplitMix64 finalizer. A bijection on `u64` with full avalanche.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of replicate `index` under master seed `master`.
///
/// `derive_seed(m, r) = mix64(mix64(m ^ 0x5851F42D4C957F2D) + (r + 1) * 0x9E3779B97F4A7C15)`
/// with wrapping arithmetic. Each replicate can be regenerated on its own.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    mix64(mix64(master ^ SEED_SALT).wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN)))
}

/// Anything that can serve the uniform at a time index.
///
/// `None` means the value is not available (a truncated source); the engine
/// treats that as running out of past and aborts.
pub trait UniformSource {
    fn uniform(&self, i: i64) -> Option<f64>;

    fn seed(&self) -> Option<u64> {
        None
    }
}

impl<T: UniformSource + ?Sized> UniformSource for &T {
    fn uniform(&self, i: i64) -> Option<f64> {
        (**self).uniform(i)
    }

    fn seed(&self) -> Option<u64> {
        (**self).seed()
    }
}

/// The i.i.d. uniform sequence `(U_i : i in Z)` for one seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UniformField {
    seed: u64,
    key0: u64,
    key1: u64,
}

impl UniformField {
    pub fn new(seed: u64) -> Self {
        let key0 = mix64(seed);
        let key1 = mix64(seed ^ KEY_SALT);
        Self { seed, key0, key1 }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    #[inline]
    pub fn bits(&self, i: i64) -> u64 {
        let x = mix64((i as u64).wrapping_mul(GOLDEN) ^ self.key0);
        mix64(x.wrapping_add(self.key1))
    }

    /// `U_i` in `[0, 1)` with 53 bits of resolution.
    #[inline]
    pub fn uniform_at(&self, i: i64) -> f64 {
        (self.bits(i) >> 11) as f64 * INV_2_53
    }

    /// Uniforms for the inclusive range `[from, to]`.
    pub fn batch(&self, from: i64, to: i64) -> Vec<f64> {
        (from..=to).map(|i| self.uniform_at(i)).collect()
    }
}

impl UniformSource for UniformField {
    #[inline]
    fn uniform(&self, i: i64) -> Option<f64> {
        Some(self.uniform_at(i))
    }

    fn seed(&self) -> Option<u64> {
        Some(self.seed)
    }
}

/// A finite, explicit stretch of uniforms `u_start, ..., u_{start+len-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplicitUniforms {
    pub start: i64,
    pub values: Vec<f64>,
}

impl ExplicitUniforms {
    pub fn new(start: i64, values: Vec<f64>) -> Self {
        Self { start, values }
    }

    /// Copies `[from, to]` out of a field.
    pub fn from_field(field: &UniformField, from: i64, to: i64) -> Self {
        Self::new(from, field.batch(from, to))
    }

    /// Last index covered, or `start - 1` when empty.
    pub fn end(&self) -> i64 {
        self.start + self.values.len() as i64 - 1
    }

    pub fn get(&self, i: i64) -> Option<f64> {
        if i < self.start {
            return None;
        }
        self.values.get((i - self.start) as usize).copied()
    }

    pub fn set(&mut self, i: i64, u: f64) {
        let idx = (i - self.start) as usize;
        self.values[idx] = u;
    }
}

impl UniformSource for ExplicitUniforms {
    fn uniform(&self, i: i64) -> Option<f64> {
        self.get(i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_lookup() {
        let f = UniformField::new(7);
        assert_eq!(f.uniform_at(0).to_bits(), f.uniform_at(0).to_bits());
        assert_eq!(f.uniform_at(0), UniformField::new(7).uniform_at(0));
    }

    #[test]
    fn seeds_separate() {
        assert_ne!(
            UniformField::new(7).uniform_at(0),
            UniformField::new(8).uniform_at(0)
        );
    }

    #[test]
    fn batch_matches_single_lookup() {
        let f = UniformField::new(7);
        let batch = f.batch(-10_000, 0);
        assert_eq!(batch[(-5 + 10_000) as usize], f.uniform_at(-5));
        // reverse order, non-contiguous
        for i in [-3i64, -9_999, -1, -4_321] {
            assert_eq!(f.uniform_at(i), batch[(i + 10_000) as usize]);
        }
    }

    #[test]
    fn values_in_unit_interval() {
        let f = UniformField::new(0);
        for i in -1000..1000 {
            let u = f.uniform_at(i);
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn frozen_values() {
        // pins the construction; changing it would change every sample
        let f = UniformField::new(7);
        assert_eq!(
            f.bits(0),
            mix64(mix64(mix64(7)).wrapping_add(mix64(7 ^ KEY_SALT)))
        );
        assert_eq!(mix64(0), 0);
        assert_eq!(mix64(1), 0x5692_161D_100B_05E5);
    }

    #[test]
    fn explicit_source_truncates() {
        let f = UniformField::new(3);
        let e = ExplicitUniforms::from_field(&f, -4, 2);
        assert_eq!(e.end(), 2);
        assert_eq!(e.uniform(-4), Some(f.uniform_at(-4)));
        assert_eq!(e.uniform(-5), None);
        assert_eq!(e.uniform(3), None);
    }

    #[test]
    fn derived_seeds_distinct() {
        let seeds: std::collections::HashSet<u64> =
            (0..10_000).map(|r| derive_seed(42, r)).collect();
        assert_eq!(seeds.len(), 10_000);
        assert_eq!(derive_seed(42, 5), derive_seed(42, 5));
    }
}
