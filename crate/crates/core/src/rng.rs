//! Seed derivation and per-trial random streams.
//!
//! Every Monte Carlo trial draws from its own ChaCha8 stream: the 256-bit key
//! is derived from the point seed, and the 64-bit stream id is the trial
//! index. A trial's randomness therefore depends only on
//! `(point seed, trial index)`, never on how trials are grouped into chunks or
//! spread across workers.
//!
//! Point seeds are derived from the master seed and the operating point
//! `(alpha, Eb/N0)` with SplitMix64 finalizers over the IEEE-754 bit patterns
//! of the two values.
//!
//! Gaussian variates use the polar form of Box-Muller: a circularly-symmetric
//! complex Gaussian of unit variance is `sqrt(-ln u1) * exp(j 2 pi u2)` with
//! `u1, u2` uniform on `(0, 1]`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Identifier written to output metadata.
pub const RNG_ALGORITHM: &str =
    "chacha8/stream-per-trial;seed=splitmix64(master,alpha,ebn0);normal=box-muller";

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a sequence of words into a 64-bit seed.
pub fn mix_seed(master: u64, words: &[u64]) -> u64 {
    words.iter().fold(splitmix64(master), |acc, &w| {
        splitmix64(acc ^ splitmix64(w))
    })
}

/// Seed for the operating point `(alpha, ebn0_db)`.
pub fn point_seed(master: u64, alpha: f64, ebn0_db: f64) -> u64 {
    mix_seed(master, &[alpha.to_bits(), ebn0_db.to_bits()])
}

/// Factory for the per-trial streams of one operating point.
#[derive(Debug, Clone)]
pub struct TrialStreams {
    key: <ChaCha8Rng as SeedableRng>::Seed,
}

impl TrialStreams {
    pub fn new(point_seed: u64) -> Self {
        TrialStreams {
            key: ChaCha8Rng::seed_from_u64(point_seed).get_seed(),
        }
    }

    pub fn trial(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::from_seed(self.key);
        rng.set_stream(index);
        rng
    }
}

/// Uniform variate on `(0, 1]` with 53 bits of resolution.
pub fn uniform_open0<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Circularly-symmetric complex Gaussian with `E|z|^2 = 1`.
pub fn complex_normal<R: RngCore + ?Sized>(rng: &mut R) -> Complex64 {
    let radius = (-uniform_open0(rng).ln()).sqrt();
    let phase = TAU * uniform_open0(rng);
    Complex64::from_polar(radius, phase)
}

/// Uniform index in `0..size` for a power-of-two `size`.
pub fn uniform_index<R: RngCore + ?Sized>(rng: &mut R, size: usize) -> usize {
    debug_assert!(size.is_power_of_two());
    (rng.next_u64() & (size as u64 - 1)) as usize
}
