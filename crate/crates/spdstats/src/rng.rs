//! Deterministic seeded random streams.
//!
//! Every randomized pipeline in this crate draws from a ChaCha stream keyed
//! by a user seed and a stream index, so replications can run in parallel
//! and still produce bit-identical results in any schedule.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent generator for `(seed, stream)`; same pair, same bytes.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut state = seed ^ stream.wrapping_mul(0xA076_1D64_78BD_642F);
    let mut key = [0u8; 32];
    for chunk in key.chunks_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Mix an identifying tag into a seed, for deriving per-configuration seeds.
pub fn mix_seed(seed: u64, tag: u64) -> u64 {
    let mut state = seed ^ tag.wrapping_mul(0xD6E8_FEB8_6659_FD93);
    splitmix64(&mut state)
}

/// One Box-Muller pair of independent standard normals.
pub fn normal_pair<R: Rng>(rng: &mut R) -> (f64, f64) {
    let u1: f64 = 1.0 - rng.gen::<f64>(); // (0, 1]
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = 2.0 * std::f64::consts::PI * u2;
    (r * theta.cos(), r * theta.sin())
}

/// Fill a slice with independent N(0, sigma²) draws.
pub fn fill_normal<R: Rng>(rng: &mut R, out: &mut [f64], sigma: f64) {
    let mut i = 0;
    while i + 1 < out.len() {
        let (a, b) = normal_pair(rng);
        out[i] = sigma * a;
        out[i + 1] = sigma * b;
        i += 2;
    }
    if i < out.len() {
        let (a, _) = normal_pair(rng);
        out[i] = sigma * a;
    }
}

/// A Student's t variate with 3 degrees of freedom: z / √(χ²₃ / 3), built
/// from four normals so the stream stays rejection-free.
pub fn student_t3<R: Rng>(rng: &mut R) -> f64 {
    let (z0, z1) = normal_pair(rng);
    let (z2, z3) = normal_pair(rng);
    z0 / ((z1 * z1 + z2 * z2 + z3 * z3) / 3.0).sqrt()
}
