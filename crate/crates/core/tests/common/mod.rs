#![allow(dead_code)]

use qhist_core::dyadic::DyadicWave;
use qhist_core::hybrid::HybridState;
use qhist_core::C64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn random_amp(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Random normalized `(α, β)`.
pub fn random_pair(rng: &mut ChaCha8Rng) -> (C64, C64) {
    let (a, b) = (random_amp(rng), random_amp(rng));
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    (a / n, b / n)
}

/// Random wave at `level` whose cells are a random sub-range of
/// `[lo, hi)` (integer x-units).
pub fn random_wave_in(rng: &mut ChaCha8Rng, level: u32, lo: i64, hi: i64) -> DyadicWave {
    let scale = 1i64 << level;
    let (a, b) = (lo * scale, hi * scale);
    let start = rng.gen_range(a..b);
    let end = rng.gen_range(start + 1..=b);
    let coeffs = (start..end).map(|_| random_amp(rng)).collect();
    DyadicWave::new(level, start, coeffs).unwrap()
}

pub fn normalize_rows(rows: Vec<DyadicWave>) -> Vec<DyadicWave> {
    let n: f64 = rows.iter().map(DyadicWave::norm2).sum::<f64>().sqrt();
    rows.iter().map(|r| r.scale(c(1.0 / n))).collect()
}

/// Random normalized joint state, rows supported in `[lo, hi)`.
pub fn random_hybrid(rng: &mut ChaCha8Rng, n: usize, level: u32, lo: i64, hi: i64) -> HybridState {
    let rows = (0..1 << n)
        .map(|_| random_wave_in(rng, level, lo, hi))
        .collect();
    HybridState::from_rows(&normalize_rows(rows)).unwrap()
}
