//! Uniform-grid backend for the continuous variable.
//!
//! Wavefunctions are sampled on a periodic window `[x_min, x_min + N·h)`
//! with `N` a power of two. Translation comes in two forms: an exact
//! circular index shift (when the shift is a whole number of samples) and
//! the momentum exponential `e^{-i a p̂}` applied through the FFT. The
//! squeeze comes as decimation (exact for piecewise-constant input aligned
//! to the grid) and as the exponential of the dilation generator
//! `(x̂p̂ + p̂x̂)/2`, with ħ = 1 throughout.

use std::f64::consts::{LN_2, PI, SQRT_2};
use std::sync::Arc;

use qhist_core::dyadic::DyadicWave;
use qhist_core::hybrid::FlipVariant;
use qhist_core::qubit::RegisterState;
use qhist_core::{Error, Result, C64};
use rustfft::{Fft, FftPlanner};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Relative slack when deciding that a real ratio is an integer.
const INTEGER_SLACK: f64 = 1e-9;

fn as_integer(v: f64) -> Option<i64> {
    let r = v.round();
    ((v - r).abs() <= INTEGER_SLACK * v.abs().max(1.0)).then_some(r as i64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridWave {
    x_min: f64,
    h: f64,
    samples: Vec<C64>,
}

impl GridWave {
    pub fn new(x_min: f64, h: f64, samples: Vec<C64>) -> Result<Self> {
        if !x_min.is_finite() || !h.is_finite() || h <= 0.0 {
            return Err(Error::Validation(format!(
                "grid needs finite x_min and h > 0 (got x_min = {x_min}, h = {h})"
            )));
        }
        if !samples.len().is_power_of_two() {
            return Err(Error::Validation(format!(
                "sample count {} is not a power of two",
                samples.len()
            )));
        }
        if let Some(j) = samples
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::Validation(format!("sample {j} is not finite")));
        }
        Ok(Self { x_min, h, samples })
    }

    pub fn zeros(x_min: f64, h: f64, n: usize) -> Result<Self> {
        Self::new(x_min, h, vec![ZERO; n])
    }

    /// `samples[j] = f(x_min + j·h)`.
    pub fn sample_function<F>(f: F, x_min: f64, h: f64, n: usize) -> Result<Self>
    where
        F: Fn(f64) -> C64,
    {
        let samples = (0..n).map(|j| f(x_min + j as f64 * h)).collect();
        Self::new(x_min, h, samples)
    }

    /// Samples `w` under the half-open cell convention.
    pub fn from_dyadic(w: &DyadicWave, x_min: f64, h: f64, n: usize) -> Result<Self> {
        Self::sample_function(|x| w.value_at(x), x_min, h, n)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn window(&self) -> (f64, f64) {
        (self.x_min, self.x_min + self.len() as f64 * self.h)
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.h
    }

    pub fn samples(&self) -> &[C64] {
        &self.samples
    }

    /// Riemann-sum norm `h Σ |ψ_j|²`.
    pub fn norm2(&self) -> f64 {
        self.h * self.samples.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }

    pub fn is_zero(&self) -> bool {
        self.samples.iter().all(|z| *z == ZERO)
    }

    /// `[x_first, x_last + h)` of the nonzero samples.
    pub fn support(&self) -> Option<(f64, f64)> {
        let first = self.samples.iter().position(|z| *z != ZERO)?;
        let last = self.samples.iter().rposition(|z| *z != ZERO)?;
        Some((self.x(first), self.x(last) + self.h))
    }

    /// Like [`support`](Self::support), ignoring samples with `|ψ_j| ≤ floor`.
    pub fn support_above(&self, floor: f64) -> Option<(f64, f64)> {
        let first = self.samples.iter().position(|z| z.norm() > floor)?;
        let last = self.samples.iter().rposition(|z| z.norm() > floor)?;
        Some((self.x(first), self.x(last) + self.h))
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn with_samples(&self, samples: Vec<C64>) -> Self {
        Self {
            x_min: self.x_min,
            h: self.h,
            samples,
        }
    }

    /// Samples per unit of x, when `1/h` is an integer.
    pub fn samples_per_unit(&self) -> Option<i64> {
        as_integer(1.0 / self.h).filter(|&s| s > 0)
    }

    /// `ψ(x) ↦ ψ(x − t)` as a circular shift by `t/h` samples.
    pub fn translate_shift(&self, t: i64) -> Result<Self> {
        let per_unit = self.samples_per_unit().ok_or_else(|| {
            Error::Domain(format!(
                "integer translation needs 1/h to be an integer (h = {})",
                self.h
            ))
        })?;
        let n = self.len() as i64;
        let shift = (t * per_unit).rem_euclid(n) as usize;
        let mut samples = self.samples.clone();
        samples.rotate_right(shift);
        Ok(self.with_samples(samples))
    }

    /// `e^{-i a p̂}`: multiplies the DFT by `e^{-i k_j a}` with the standard
    /// periodic wavenumbers and transforms back.
    pub fn translate_spectral(&self, a: f64) -> Self {
        let spectral = Spectral::new(self.len());
        let k = wavenumbers(self.len(), self.h);
        let mut buf = self.samples.clone();
        spectral.forward(&mut buf);
        for (z, &kj) in buf.iter_mut().zip(&k) {
            *z *= C64::from_polar(1.0, -kj * a);
        }
        spectral.inverse(&mut buf);
        self.with_samples(buf)
    }

    /// Keeps samples with `x ∈ [a, b)` and zeroes the rest.
    pub fn project_grid(&self, a: f64, b: f64) -> Result<Self> {
        if a >= b || a.is_nan() || b.is_nan() {
            return Err(Error::Domain(format!("empty interval [{a}, {b})")));
        }
        let samples = self
            .samples
            .iter()
            .enumerate()
            .map(|(j, &z)| {
                let x = self.x(j);
                if x >= a && x < b {
                    z
                } else {
                    ZERO
                }
            })
            .collect();
        Ok(self.with_samples(samples))
    }

    /// `ψ(x) ↦ √2 ψ(2x)` on the same window by reading the sample at `2x`.
    ///
    /// Needs `x_min/h` to be an integer so that `2x_j` is a grid point.
    /// Samples never read (odd offsets) are dropped, which is exact when
    /// the input is constant on pairs of samples. Input above the noise
    /// floor whose image would leave the window is a domain error.
    pub fn squeeze_resample(&self) -> Result<Self> {
        let origin = as_integer(self.x_min / self.h).ok_or_else(|| {
            Error::Domain(format!(
                "decimating squeeze needs x_min/h to be an integer (x_min = {}, h = {})",
                self.x_min, self.h
            ))
        })?;
        let n = self.len() as i64;
        let floor = NOISE_FLOOR * self.max_abs();
        for (i, z) in self.samples.iter().enumerate() {
            // x_i / 2 sits at index (i − origin)/2
            let half = (i as i64 - origin) as f64 / 2.0;
            if z.norm() > floor && (half < 0.0 || half >= n as f64) {
                return Err(Error::Domain(format!(
                    "sample at x = {} would land outside the window after squeezing",
                    self.x(i)
                )));
            }
        }
        let samples = (0..n)
            .map(|j| {
                let src = 2 * j + origin;
                if (0..n).contains(&src) {
                    self.samples[src as usize] * SQRT_2
                } else {
                    ZERO
                }
            })
            .collect();
        Ok(self.with_samples(samples))
    }

    /// `exp(i ln2/2 · (XP + PX))` with `X` the diagonal of sample positions
    /// and `P` the spectral momentum, approximating `√2 ψ(2x)`.
    ///
    /// Accurate only for smooth `ψ` supported well inside the window; this
    /// is not checked.
    pub fn dilation_generator(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let generator = DilationGenerator::new(self);
        let theta = LN_2 / 2.0;
        // substeps small enough that each Taylor series converges fast
        let substeps = (theta * generator.norm_bound()).ceil().max(1.0) as usize;
        let dt = theta / substeps as f64;
        let mut psi = self.samples.clone();
        for _ in 0..substeps {
            psi = generator.taylor_step(&psi, dt);
        }
        self.with_samples(psi)
    }

    /// Pointwise comparison against `w` at every sample position.
    pub fn compare_to_dyadic(&self, w: &DyadicWave) -> Result<Comparison> {
        if self.h > w.cell_width() {
            return Err(Error::Domain(format!(
                "grid step {} is coarser than the cell width {}",
                self.h,
                w.cell_width()
            )));
        }
        let mut max_abs_err: f64 = 0.0;
        let mut sq = 0.0;
        for (j, z) in self.samples.iter().enumerate() {
            let d = (z - w.value_at(self.x(j))).norm();
            max_abs_err = max_abs_err.max(d);
            sq += d * d;
        }
        Ok(Comparison {
            max_abs_err,
            l2_err: (self.h * sq).sqrt(),
        })
    }

    /// `sqrt(h Σ |a − b|²)` for waves on the same grid.
    pub fn l2_distance(&self, other: &GridWave) -> f64 {
        assert_eq!(self.len(), other.len(), "grid size mismatch");
        let s: f64 = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        (self.h * s).sqrt()
    }

    pub fn max_abs_diff(&self, other: &GridWave) -> f64 {
        assert_eq!(self.len(), other.len(), "grid size mismatch");
        self.samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, c: C64) -> Self {
        self.with_samples(self.samples.iter().map(|z| z * c).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparison {
    pub max_abs_err: f64,
    pub l2_err: f64,
}

/// Standard periodic wavenumbers `2π f_j / L` with `f_j` in
/// `[-N/2, N/2)` order as laid out by the DFT.
fn wavenumbers(n: usize, h: f64) -> Vec<f64> {
    let length = n as f64 * h;
    (0..n)
        .map(|j| {
            let f = if j < n / 2 {
                j as f64
            } else {
                j as f64 - n as f64
            };
            2.0 * PI * f / length
        })
        .collect()
}

struct Spectral {
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    scale: f64,
}

impl Spectral {
    fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
            scale: 1.0 / n as f64,
        }
    }

    fn forward(&self, buf: &mut [C64]) {
        self.fwd.process(buf);
    }

    fn inverse(&self, buf: &mut [C64]) {
        self.inv.process(buf);
        buf.iter_mut().for_each(|z| *z *= self.scale);
    }
}

/// `G = XP + PX` on one grid, applied matrix-free.
struct DilationGenerator {
    spectral: Spectral,
    x: Vec<f64>,
    k: Vec<f64>,
}

impl DilationGenerator {
    fn new(g: &GridWave) -> Self {
        Self {
            spectral: Spectral::new(g.len()),
            x: (0..g.len()).map(|j| g.x(j)).collect(),
            k: wavenumbers(g.len(), g.h),
        }
    }

    fn norm_bound(&self) -> f64 {
        let x = self.x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let k = self.k.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        2.0 * x * k
    }

    fn momentum(&self, v: &[C64]) -> Vec<C64> {
        let mut buf = v.to_vec();
        self.spectral.forward(&mut buf);
        for (z, &kj) in buf.iter_mut().zip(&self.k) {
            *z *= kj;
        }
        self.spectral.inverse(&mut buf);
        buf
    }

    fn apply(&self, v: &[C64]) -> Vec<C64> {
        let xv: Vec<C64> = v.iter().zip(&self.x).map(|(z, &x)| z * x).collect();
        let pxv = self.momentum(&xv);
        let pv = self.momentum(v);
        pv.iter()
            .zip(&self.x)
            .zip(&pxv)
            .map(|((p, &x), px)| p * x + px)
            .collect()
    }

    /// `exp(i dt G) v` by its Taylor series.
    fn taylor_step(&self, v: &[C64], dt: f64) -> Vec<C64> {
        let mut out = v.to_vec();
        let mut term = v.to_vec();
        let scale = |t: &[C64]| t.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let base = scale(v);
        for m in 1..=60 {
            let factor = C64::new(0.0, dt / m as f64);
            term = self.apply(&term).into_iter().map(|z| z * factor).collect();
            for (o, t) in out.iter_mut().zip(&term) {
                *o += t;
            }
            if scale(&term) <= 1e-18 * base {
                break;
            }
        }
        out
    }
}

/// Samples below this fraction of the largest joint amplitude count as
/// round-off, not support, when checking wrap-around and the erase
/// precondition. Spectral translation leaves noise of order 1e-16 across
/// the whole window.
pub const NOISE_FLOOR: f64 = 1e-12;

/// How the grid backend realizes the conditional translation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TranslateMethod {
    Shift,
    Spectral,
}

/// Joint qubit ⊗ grid state: one sampled CV row per qubit basis state.
#[derive(Debug, Clone, PartialEq)]
pub struct GridHybrid {
    n_qubits: usize,
    rows: Vec<GridWave>,
    method: TranslateMethod,
}

impl GridHybrid {
    pub fn lift(reg: &RegisterState, g: &GridWave, method: TranslateMethod) -> Self {
        Self {
            n_qubits: reg.n_qubits(),
            rows: reg.amps().iter().map(|&a| g.scale(a)).collect(),
            method,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn row(&self, q: usize) -> &GridWave {
        &self.rows[q]
    }

    pub fn rows(&self) -> &[GridWave] {
        &self.rows
    }

    pub fn norm2(&self) -> f64 {
        self.rows.iter().map(GridWave::norm2).sum()
    }

    pub fn weight_where(&self, mask: usize) -> f64 {
        self.rows
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .map(|(_, r)| r.norm2())
            .sum()
    }

    fn noise_floor(&self) -> f64 {
        NOISE_FLOOR * self.rows.iter().map(GridWave::max_abs).fold(0.0, f64::max)
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.n_qubits {
            return Err(Error::Domain(format!(
                "qubit {q} out of range for {} qubits",
                self.n_qubits
            )));
        }
        Ok(())
    }

    /// Shifts rows with bit `q` set by `t`. Refuses shifts that would wrap
    /// support around the periodic window.
    pub fn cond_translate(&self, q: usize, t: i64) -> Result<Self> {
        self.check_qubit(q)?;
        let floor = self.noise_floor();
        let mut rows = self.rows.clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i & 1 << q == 0 {
                continue;
            }
            if let Some((a, b)) = row.support_above(floor) {
                let (lo, hi) = row.window();
                let shift = t as f64;
                if a + shift < lo || b + shift > hi {
                    return Err(Error::Domain(format!(
                        "translating support [{a}, {b}) by {t} would wrap around the window [{lo}, {hi})"
                    )));
                }
            }
            *row = match self.method {
                TranslateMethod::Shift => row.translate_shift(t)?,
                TranslateMethod::Spectral => row.translate_spectral(t as f64),
            };
        }
        Ok(Self {
            rows,
            ..self.clone()
        })
    }

    pub fn cond_flip(&self, q: usize, variant: FlipVariant) -> Result<Self> {
        self.check_qubit(q)?;
        let mut rows = self.rows.clone();
        for i in (0..rows.len()).filter(|i| i & 1 << q == 0) {
            let j = i | 1 << q;
            for s in 0..rows[i].len() {
                let x = rows[i].x(s);
                let flip = match variant {
                    FlipVariant::OutsideUnit => !(0.0..1.0).contains(&x),
                    FlipVariant::InsideOneTwo => (1.0..2.0).contains(&x),
                };
                if flip {
                    let (a, b) = (rows[i].samples[s], rows[j].samples[s]);
                    rows[i].samples[s] = b;
                    rows[j].samples[s] = a;
                }
            }
        }
        Ok(Self {
            rows,
            ..self.clone()
        })
    }

    pub fn squeeze_all(&self) -> Result<Self> {
        let rows = self
            .rows
            .iter()
            .map(GridWave::squeeze_resample)
            .collect::<Result<_>>()?;
        Ok(Self {
            rows,
            ..self.clone()
        })
    }

    pub fn tft(&self, q: usize) -> Result<Self> {
        self.cond_translate(q, 1)?
            .cond_flip(q, FlipVariant::OutsideUnit)?
            .cond_translate(q, -1)
    }

    pub fn erase(&self, q: usize) -> Result<Self> {
        self.check_qubit(q)?;
        let floor = self.noise_floor();
        for (i, row) in self.rows.iter().enumerate() {
            if let Some((a, b)) = row.support_above(floor) {
                if a < 0.0 || b > 1.0 {
                    return Err(Error::Contract(format!(
                        "erase needs every row supported in [0, 1); row {i} covers [{a}, {b})"
                    )));
                }
            }
        }
        self.tft(q)?.squeeze_all()
    }

    /// `(⟨reg| ⊗ 1)` applied to the joint state.
    pub fn project_qubits(&self, reg: &RegisterState) -> Result<GridWave> {
        if reg.n_qubits() != self.n_qubits {
            return Err(Error::Validation(format!(
                "register has {} qubits, state has {}",
                reg.n_qubits(),
                self.n_qubits
            )));
        }
        let first = &self.rows[0];
        let mut samples = vec![ZERO; first.len()];
        for (row, a) in self.rows.iter().zip(reg.amps()) {
            let a = a.conj();
            for (s, z) in samples.iter_mut().zip(&row.samples) {
                *s += a * z;
            }
        }
        Ok(first.with_samples(samples))
    }

    /// L² distance to a dyadic joint state, summed over rows.
    pub fn l2_distance_to(&self, h: &qhist_core::hybrid::HybridState) -> Result<f64> {
        if h.n_qubits() != self.n_qubits {
            return Err(Error::Validation("qubit counts differ".into()));
        }
        let mut sq = 0.0;
        for (i, row) in self.rows.iter().enumerate() {
            let d = row.compare_to_dyadic(&h.row(i))?.l2_err;
            sq += d * d;
        }
        Ok(sq.sqrt())
    }
}
