//! Seeded generator used for every randomized corpus.
//!
//! The generator is SplitMix64, fully specified here so that any
//! implementation can reproduce the same corpora:
//!
//! ```text
//! state  <- state + 0x9E3779B97F4A7C15            (mod 2^64)
//! z      <- state
//! z      <- (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9  (mod 2^64)
//! z      <- (z ^ (z >> 27)) * 0x94D049BB133111EB  (mod 2^64)
//! output    z ^ (z >> 31)
//! ```
//!
//! Derived draws:
//!
//! * uniform on `[0, 1)`: `(output >> 11) · 2^-53`;
//! * standard normal: Box–Muller with `u1 = 1 − uniform`, `u2 = uniform`
//!   (drawn in that order), returning `sqrt(−2 ln u1) · cos(2π u2)`; the
//!   sine branch is discarded;
//! * per-trial streams: trial `k` of a run seeded with `s` starts from
//!   state `mix(s ^ mix(k + 0x9E3779B97F4A7C15))`, where `mix` is the
//!   three-line output finalizer above applied to its argument.
//!
//! Per-trial streams make corpus contents independent of evaluation order,
//! so parallel runs reproduce serial ones byte for byte.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    /// Independent stream for trial `trial` of a run seeded with `seed`.
    pub fn for_trial(seed: u64, trial: u64) -> Self {
        Self::new(mix64(seed ^ mix64(trial.wrapping_add(GOLDEN))))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix64(self.state)
    }

    /// Uniform on `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform integer in `lo..=hi`.
    pub fn int_in(&mut self, lo: usize, hi: usize) -> usize {
        debug_assert!(lo <= hi);
        let span = (hi - lo + 1) as u64;
        lo + (self.next_u64() % span) as usize
    }

    pub fn normal(&mut self) -> f64 {
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}
