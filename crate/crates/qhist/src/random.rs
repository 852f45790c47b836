//! Seeded random states for the validation suites.

use qhist_core::dyadic::DyadicWave;
use qhist_core::hybrid::HybridState;
use qhist_core::{Result, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Generator for suite number `suite`: one stream per suite, so adding or
/// reordering trials in one suite leaves the others untouched.
pub fn suite_rng(seed: u64, suite: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(suite);
    rng
}

pub fn amp(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Normalized `(α, β)`.
pub fn pair(rng: &mut ChaCha8Rng) -> (C64, C64) {
    loop {
        let (a, b) = (amp(rng), amp(rng));
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if n > 1e-3 {
            return (a / n, b / n);
        }
    }
}

/// Wave at `level` on a random sub-range of `[lo, hi)`.
pub fn wave_in(rng: &mut ChaCha8Rng, level: u32, lo: i64, hi: i64) -> Result<DyadicWave> {
    let scale = 1i64 << level;
    let (a, b) = (lo * scale, hi * scale);
    let start = rng.gen_range(a..b);
    let end = rng.gen_range(start + 1..=b);
    let coeffs = (start..end).map(|_| amp(rng)).collect();
    DyadicWave::new(level, start, coeffs)
}

/// Normalized joint state of `n` qubits with every row inside `[lo, hi)`.
pub fn hybrid(rng: &mut ChaCha8Rng, n: usize, level: u32, lo: i64, hi: i64) -> Result<HybridState> {
    let rows = (0..1 << n)
        .map(|_| wave_in(rng, level, lo, hi))
        .collect::<Result<Vec<_>>>()?;
    let norm = rows.iter().map(DyadicWave::norm2).sum::<f64>().sqrt();
    let rows: Vec<_> = rows
        .iter()
        .map(|r| r.scale(C64::new(1.0 / norm, 0.0)))
        .collect();
    HybridState::from_rows(&rows)
}
