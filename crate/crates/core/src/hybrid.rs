//! Joint states of a qubit register and one dyadic CV mode, and the
//! operators that erase a qubit into that mode.
//!
//! The erasure of qubit `q` is the gate sequence
//!
//! 1. conditional translation `T` (shift the CV by +1 where qubit `q` is 1),
//! 2. conditional flip `F` (flip qubit `q` on cells outside `[0, 1)`),
//! 3. the inverse translation `T*`,
//! 4. the squeeze `S` on the CV.
//!
//! Applied in that temporal order to `(α|0⟩ + β|1⟩) ⊗ ψ(x)` with `ψ`
//! supported in `[0, 1)`, steps 1–3 give `|0⟩ ⊗ (αψ(x) + βψ(x − 1))` and
//! step 4 gives `|0⟩ ⊗ √2(αψ(2x) + βψ(2x − 1))`, again supported in
//! `[0, 1)`.

use alloc::{format, vec, vec::Vec};
use core::f64::consts::SQRT_2;

use crate::dyadic::{self, cell_width, DyadicWave};
use crate::qubit::{
    BasisPermutation, DensityMatrix, QubitSplit, RegisterState, Unitary2, MAX_QUBITS,
};
use crate::{Error, Result, C64, DEFAULT_MAX_AMPLITUDES, DEFAULT_MAX_LEVEL};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Which cells the conditional flip acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FlipVariant {
    /// Flip on every cell outside `[0, 1)`, identity inside.
    OutsideUnit,
    /// Flip on cells inside `[1, 2)`, identity elsewhere.
    InsideOneTwo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_level: u32,
    /// Bound on `2^n · K`, the number of stored joint amplitudes.
    pub max_amplitudes: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_level: DEFAULT_MAX_LEVEL,
            max_amplitudes: DEFAULT_MAX_AMPLITUDES,
        }
    }
}

/// Joint amplitude table `A[q][k]` over qubit basis states `q` and CV cells
/// `k`, all sharing one cell geometry.
///
/// Storage is cell-major: the qubit vector of each cell is contiguous.
#[derive(Debug, Clone)]
pub struct HybridState {
    n_qubits: usize,
    level: u32,
    offset: i64,
    cells: usize,
    amps: Vec<C64>,
    limits: Limits,
}

impl PartialEq for HybridState {
    fn eq(&self, other: &Self) -> bool {
        self.n_qubits == other.n_qubits
            && self.level == other.level
            && self.offset == other.offset
            && self.cells == other.cells
            && self.amps == other.amps
    }
}

/// One entry of an erasure trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EraseStep {
    /// 1-based step number.
    pub step: usize,
    pub qubit: usize,
    pub level: u32,
    pub norm2: f64,
    /// Probability weight left on the erased qubit's `|1⟩` rows.
    pub ancilla_residual: f64,
}

impl HybridState {
    /// Product state `reg ⊗ w`.
    pub fn lift(reg: &RegisterState, w: &DyadicWave) -> Result<Self> {
        let cells = w.coeffs().len();
        let mut amps = Vec::with_capacity(reg.dim() * cells);
        for &c in w.coeffs() {
            amps.extend(reg.amps().iter().map(|a| a * c));
        }
        let out = Self {
            n_qubits: reg.n_qubits(),
            level: w.level(),
            offset: w.offset(),
            cells,
            amps,
            limits: Limits::default(),
        };
        out.check_limits()?;
        Ok(out.trimmed())
    }

    /// Joint state whose row for qubit basis state `q` is `rows[q]`.
    pub fn from_rows(rows: &[DyadicWave]) -> Result<Self> {
        let dim = rows.len();
        if !dim.is_power_of_two() {
            return Err(Error::Validation(format!(
                "{dim} rows is not a power of two"
            )));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        if n_qubits > MAX_QUBITS {
            return Err(Error::Resource(format!("{n_qubits} qubits is too many")));
        }
        let level = rows.iter().map(DyadicWave::level).max().unwrap_or(0);
        let rows: Vec<DyadicWave> = rows
            .iter()
            .map(|r| r.refine(level))
            .collect::<Result<_>>()?;
        let live = rows.iter().filter(|r| !r.is_zero());
        let start = live.clone().map(DyadicWave::offset).min().unwrap_or(0);
        let end = live.map(|r| r.cell_range().1).max().unwrap_or(1);
        let cells = (end - start) as usize;
        if cells.saturating_mul(dim) > Limits::default().max_amplitudes {
            return Err(Error::Resource("joint table too large".into()));
        }
        let mut amps = vec![ZERO; cells * dim];
        for (q, r) in rows.iter().enumerate() {
            if r.is_zero() {
                continue;
            }
            let at = (r.offset() - start) as usize;
            for (k, &c) in r.coeffs().iter().enumerate() {
                amps[(at + k) * dim + q] = c;
            }
        }
        Ok(Self {
            n_qubits,
            level,
            offset: start,
            cells,
            amps,
            limits: Limits::default(),
        }
        .trimmed())
    }

    pub fn with_limits(mut self, limits: Limits) -> Result<Self> {
        self.limits = limits;
        self.check_limits()?;
        Ok(self)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    /// Number of stored joint amplitudes, `2^n · K`.
    pub fn joint_cells(&self) -> usize {
        self.amps.len()
    }

    pub fn amp(&self, q: usize, k: usize) -> C64 {
        self.amps[k * self.dim() + q]
    }

    /// The CV row attached to qubit basis state `q`.
    pub fn row(&self, q: usize) -> DyadicWave {
        let dim = self.dim();
        let coeffs = (0..self.cells).map(|k| self.amps[k * dim + q]).collect();
        DyadicWave::canonical(self.level, self.offset, coeffs)
    }

    /// `⟨reg| ⊗ 1` applied to the joint state: the CV wave left after
    /// contracting the qubits with `reg`.
    pub fn project_qubits(&self, reg: &RegisterState) -> Result<DyadicWave> {
        if reg.n_qubits() != self.n_qubits {
            return Err(Error::Validation(format!(
                "register has {} qubits, joint state has {}",
                reg.n_qubits(),
                self.n_qubits
            )));
        }
        let coeffs = self
            .amps
            .chunks_exact(self.dim())
            .map(|col| col.iter().zip(reg.amps()).map(|(a, r)| r.conj() * a).sum())
            .collect();
        Ok(DyadicWave::canonical(self.level, self.offset, coeffs))
    }

    pub fn norm2(&self) -> f64 {
        cell_width(self.level) * self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }

    /// Probability weight on rows where any qubit in `mask` is 1.
    pub fn weight_where(&self, mask: usize) -> f64 {
        let dim = self.dim();
        let s: f64 = self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| (i % dim) & mask != 0)
            .map(|(_, z)| z.norm_sqr())
            .sum();
        cell_width(self.level) * s
    }

    /// True when every nonzero cell lies in the integer interval `[a, b)`.
    pub fn is_supported_in(&self, a: i64, b: i64) -> bool {
        if self.amps.iter().all(|z| *z == ZERO) {
            return true;
        }
        let scale = 1i128 << self.level;
        self.offset as i128 >= a as i128 * scale
            && (self.offset + self.cells as i64) as i128 <= b as i128 * scale
    }

    pub fn apply_single_qubit(&self, q: usize, u: &Unitary2) -> Result<Self> {
        self.check_qubit(q)?;
        let mut out = self.clone();
        let dim = self.dim();
        for col in out.amps.chunks_exact_mut(dim) {
            u.apply_in_place(col, q);
        }
        Ok(out.trimmed())
    }

    pub fn apply_permutation(&self, p: &BasisPermutation) -> Result<Self> {
        if p.len() != self.dim() {
            return Err(Error::Validation(format!(
                "permutation acts on {} indices, register has {}",
                p.len(),
                self.dim()
            )));
        }
        let mut out = self.clone();
        for (src, dst) in self
            .amps
            .chunks_exact(self.dim())
            .zip(out.amps.chunks_exact_mut(p.len()))
        {
            p.scatter(src, dst);
        }
        Ok(out)
    }

    /// `|1⟩⟨1|_q ⊗ e^{-i t p̂} + |0⟩⟨0|_q ⊗ 1`: rows with bit `q` set move by
    /// `t` units of x. `t = 1` is `T`, `t = -1` is `T*`.
    pub fn cond_translate(&self, q: usize, t: i64) -> Result<Self> {
        self.check_qubit(q)?;
        let bit = 1usize << q;
        let shift = t
            .checked_mul(1i64 << self.level)
            .ok_or_else(|| Error::Resource(format!("translation by {t} overflows the offset")))?;
        if shift == 0 {
            return Ok(self.clone());
        }
        let dim = self.dim();
        let span = |set: bool| -> Option<(i64, i64)> {
            let live = |k: &usize| {
                self.amps[k * dim..(k + 1) * dim]
                    .iter()
                    .enumerate()
                    .any(|(i, z)| (i & bit != 0) == set && *z != ZERO)
            };
            let first = (0..self.cells).find(live)?;
            let last = (0..self.cells).rev().find(live)?;
            Some((self.offset + first as i64, self.offset + last as i64 + 1))
        };
        let still = span(false);
        let moved = span(true).map(|(a, b)| (a + shift, b + shift));
        let (start, end) = match (still, moved) {
            (None, None) => return Ok(self.clone()),
            (Some(r), None) | (None, Some(r)) => r,
            (Some((a0, b0)), Some((a1, b1))) => (a0.min(a1), b0.max(b1)),
        };
        let cells = usize::try_from(end - start).unwrap_or(usize::MAX);
        if cells.saturating_mul(dim) > self.limits.max_amplitudes {
            return Err(Error::Resource(format!(
                "translated state spans {cells} cells at level {}, exceeding {} joint amplitudes",
                self.level, self.limits.max_amplitudes
            )));
        }
        let mut amps = vec![ZERO; cells * dim];
        for k in 0..self.cells {
            let j = self.offset + k as i64;
            for i in 0..dim {
                let z = self.amps[k * dim + i];
                if z == ZERO {
                    continue;
                }
                let dest = if i & bit != 0 { j + shift } else { j };
                amps[(dest - start) as usize * dim + i] = z;
            }
        }
        Ok(Self {
            offset: start,
            cells,
            amps,
            ..*self
        }
        .trimmed())
    }

    /// `(|1⟩⟨0| + |0⟩⟨1|)_q ⊗ (1 − Π) + 1 ⊗ Π` with `Π` the projector of the
    /// variant: X on qubit `q` wherever the variant says flip.
    pub fn cond_flip(&self, q: usize, variant: FlipVariant) -> Result<Self> {
        self.check_qubit(q)?;
        let bit = 1usize << q;
        let unit = 1i128 << self.level;
        let dim = self.dim();
        let mut out = self.clone();
        for (k, col) in out.amps.chunks_exact_mut(dim).enumerate() {
            let j = (self.offset + k as i64) as i128;
            let flip = match variant {
                FlipVariant::OutsideUnit => !(0..unit).contains(&j),
                FlipVariant::InsideOneTwo => (unit..2 * unit).contains(&j),
            };
            if flip {
                for i in (0..dim).filter(|i| i & bit == 0) {
                    col.swap(i, i | bit);
                }
            }
        }
        Ok(out)
    }

    /// `1 ⊗ S` with `S: ψ(x) ↦ √2 ψ(2x)`.
    pub fn squeeze_all(&self) -> Result<Self> {
        let level = self.level + 1;
        if level > self.limits.max_level.min(dyadic::LEVEL_CAP) {
            return Err(Error::Resource(format!(
                "squeeze would raise the CV level to {level}, above the limit of {}",
                self.limits.max_level
            )));
        }
        Ok(Self {
            level,
            amps: self.amps.iter().map(|z| z * SQRT_2).collect(),
            ..*self
        })
    }

    /// `T`, then `F`, then `T*` on qubit `q`, with the standard flip.
    pub fn tft(&self, q: usize) -> Result<Self> {
        self.tft_with(q, FlipVariant::OutsideUnit)
    }

    pub fn tft_with(&self, q: usize, variant: FlipVariant) -> Result<Self> {
        self.cond_translate(q, 1)?
            .cond_flip(q, variant)?
            .cond_translate(q, -1)
    }

    /// Erases qubit `q` into the CV mode: `T`, `F`, `T*`, then `S`.
    ///
    /// Requires every nonzero cell to lie in `[0, 1)`; afterwards qubit `q`
    /// is exactly `|0⟩` and the CV is again supported in `[0, 1)`, one
    /// level finer.
    pub fn erase(&self, q: usize) -> Result<Self> {
        self.check_qubit(q)?;
        if !self.is_supported_in(0, 1) {
            let w = cell_width(self.level);
            let (s, e) = (self.offset, self.offset + self.cells as i64);
            return Err(Error::Contract(format!(
                "erase needs the CV supported in [0, 1); cells {s}..{e} at level {} cover [{}, {})",
                self.level,
                s as f64 * w,
                e as f64 * w
            )));
        }
        if self.level + 1 > self.limits.max_level {
            return Err(Error::Resource(format!(
                "erasing at level {} would exceed the level limit of {}",
                self.level, self.limits.max_level
            )));
        }
        self.tft(q)?.squeeze_all()
    }

    /// Erases the listed qubits in order, returning the per-step trace.
    pub fn erase_sequence(&self, qubits: &[usize]) -> Result<(Self, Vec<EraseStep>)> {
        let mut trace = Vec::with_capacity(qubits.len());
        let out = self.erase_sequence_with(qubits, |step, _| trace.push(*step))?;
        Ok((out, trace))
    }

    /// Like [`erase_sequence`](Self::erase_sequence), handing each step and
    /// the state after it to `observe`.
    pub fn erase_sequence_with<F>(&self, qubits: &[usize], mut observe: F) -> Result<Self>
    where
        F: FnMut(&EraseStep, &Self),
    {
        let mut state = self.clone();
        for (i, &q) in qubits.iter().enumerate() {
            state = state.erase(q)?;
            let step = EraseStep {
                step: i + 1,
                qubit: q,
                level: state.level,
                norm2: state.norm2(),
                ancilla_residual: state.weight_where(1 << q),
            };
            observe(&step, &state);
        }
        Ok(state)
    }

    /// Reduced density matrix of the qubits in `keep` with the CV mode and
    /// all other qubits traced out.
    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let split = QubitSplit::new(self.n_qubits, keep)?;
        let d = split.kept_dim();
        let mut rho = vec![ZERO; d * d];
        let w = cell_width(self.level);
        for col in self.amps.chunks_exact(self.dim()) {
            split.accumulate(col, w, &mut rho);
        }
        DensityMatrix::new(d, rho)
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

    fn check_limits(&self) -> Result<()> {
        if self.level > self.limits.max_level {
            return Err(Error::Resource(format!(
                "CV level {} exceeds the limit of {}",
                self.level, self.limits.max_level
            )));
        }
        if self.amps.len() > self.limits.max_amplitudes {
            return Err(Error::Resource(format!(
                "{} joint amplitudes exceeds the limit of {}",
                self.amps.len(),
                self.limits.max_amplitudes
            )));
        }
        Ok(())
    }

    /// Drops all-zero cell columns at both ends.
    fn trimmed(mut self) -> Self {
        let dim = self.dim();
        let live = |col: &[C64]| col.iter().any(|z| *z != ZERO);
        let Some(first) = self.amps.chunks_exact(dim).position(live) else {
            self.offset = 0;
            self.cells = 1;
            self.amps = vec![ZERO; dim];
            return self;
        };
        let last = self.amps.chunks_exact(dim).rposition(live).unwrap_or(first);
        self.amps.truncate((last + 1) * dim);
        self.amps.drain(..first * dim);
        self.offset += first as i64;
        self.cells = last + 1 - first;
        self
    }
}

/// Closed form of iterated erasure starting from `base` (supported in
/// `[0, 1)` at level `ℓ₀`).
///
/// After erasing qubits prepared as `α_i|0⟩ + β_i|1⟩` for `i = 1..n`, the CV
/// sits at level `ℓ₀ + n` and cell `k = j·2^ℓ₀ + m` holds
/// `2^{n/2} · Π_i c_i(bit_{i−1}(j)) · base[m]` with `c_i(0) = α_i`,
/// `c_i(1) = β_i`. The most recent step is the most significant fractional
/// digit.
pub fn tensor_oracle(pairs: &[(C64, C64)], base: &DyadicWave) -> Result<DyadicWave> {
    if !base.is_supported_in(0, 1) {
        return Err(Error::Contract(
            "oracle base must be supported in [0, 1)".into(),
        ));
    }
    let n = pairs.len();
    let base_level = base.level();
    let level = base_level as usize + n;
    if level > dyadic::LEVEL_CAP as usize || level >= usize::BITS as usize - 1 {
        return Err(Error::Resource(format!("oracle level {level} is too deep")));
    }
    let cells = 1usize << level;
    if cells > dyadic::MAX_CELLS {
        return Err(Error::Resource(format!("oracle needs {cells} cells")));
    }
    let base_cells = 1usize << base_level;
    let mut base_full = vec![ZERO; base_cells];
    for (k, &c) in base.coeffs().iter().enumerate() {
        let j = base.offset() + k as i64;
        if (0..base_cells as i64).contains(&j) {
            base_full[j as usize] = c;
        }
    }
    let mut gain = libm::ldexp(1.0, (n / 2) as i32);
    if n % 2 == 1 {
        gain *= SQRT_2;
    }
    let mut coeffs = Vec::with_capacity(cells);
    for j in 0..1usize << n {
        let mut amp = C64::new(gain, 0.0);
        for (i, &(alpha, beta)) in pairs.iter().enumerate() {
            amp *= if j >> i & 1 == 0 { alpha } else { beta };
        }
        coeffs.extend(base_full.iter().map(|b| amp * b));
    }
    DyadicWave::new(level as u32, 0, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn wave(level: u32, offset: i64, values: &[f64]) -> DyadicWave {
        DyadicWave::new(level, offset, values.iter().map(|&v| c(v)).collect()).unwrap()
    }

    fn qubit(alpha: f64, beta: f64) -> RegisterState {
        RegisterState::qubit(c(alpha), c(beta)).unwrap()
    }

    fn unit() -> DyadicWave {
        DyadicWave::indicator_unit(0).unwrap()
    }

    #[test]
    fn lift_examples() {
        let h = HybridState::lift(&qubit(1.0, 0.0), &unit()).unwrap();
        assert_eq!((h.amp(0, 0), h.amp(1, 0)), (c(1.0), c(0.0)));
        let r = FRAC_1_SQRT_2;
        let h = HybridState::lift(&qubit(r, r), &unit()).unwrap();
        assert_eq!((h.amp(0, 0), h.amp(1, 0)), (c(r), c(r)));
        assert!((h.norm2() - 1.0).abs() < 1e-15);
        let h = HybridState::lift(&qubit(0.0, 1.0), &wave(1, 0, &[SQRT_2, 0.0])).unwrap();
        assert_eq!(h.row(1), wave(1, 0, &[SQRT_2]));
        assert!(h.row(0).is_zero());
    }

    #[test]
    fn cond_translate_examples() {
        let one = HybridState::lift(&qubit(0.0, 1.0), &unit()).unwrap();
        let moved = one.cond_translate(0, 1).unwrap();
        assert_eq!(
            moved,
            HybridState::lift(&qubit(0.0, 1.0), &wave(0, 1, &[1.0])).unwrap()
        );

        let zero = HybridState::lift(&qubit(1.0, 0.0), &wave(2, -3, &[0.5, 1.0, -0.5])).unwrap();
        for t in [-3, -1, 1, 5] {
            assert_eq!(zero.cond_translate(0, t).unwrap(), zero);
        }

        let r = FRAC_1_SQRT_2;
        let plus = HybridState::lift(&qubit(r, r), &unit()).unwrap();
        let out = plus.cond_translate(0, 1).unwrap();
        assert_eq!(out.row(0), wave(0, 0, &[r]));
        assert_eq!(out.row(1), wave(0, 1, &[r]));
        assert_eq!((out.offset(), out.cells()), (0, 2));

        assert!(matches!(plus.cond_translate(1, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn cond_flip_examples() {
        let one_right = HybridState::lift(&qubit(0.0, 1.0), &wave(0, 1, &[1.0])).unwrap();
        let zero_right = HybridState::lift(&qubit(1.0, 0.0), &wave(0, 1, &[1.0])).unwrap();
        assert_eq!(
            one_right.cond_flip(0, FlipVariant::OutsideUnit).unwrap(),
            zero_right
        );

        let one_unit = HybridState::lift(&qubit(0.0, 1.0), &unit()).unwrap();
        assert_eq!(
            one_unit.cond_flip(0, FlipVariant::OutsideUnit).unwrap(),
            one_unit
        );

        let r = FRAC_1_SQRT_2;
        let spread = HybridState::from_rows(&[wave(0, 0, &[r, r]), DyadicWave::zero(0)]).unwrap();
        let out = spread.cond_flip(0, FlipVariant::OutsideUnit).unwrap();
        assert_eq!(out.row(0), wave(0, 0, &[r]));
        assert_eq!(out.row(1), wave(0, 1, &[r]));

        // footnote variant only touches [1, 2)
        let far = HybridState::from_rows(&[wave(0, 2, &[1.0]), DyadicWave::zero(0)]).unwrap();
        assert_eq!(far.cond_flip(0, FlipVariant::InsideOneTwo).unwrap(), far);
        let mid = HybridState::from_rows(&[wave(0, 1, &[1.0]), DyadicWave::zero(0)]).unwrap();
        assert_eq!(
            mid.cond_flip(0, FlipVariant::InsideOneTwo).unwrap().row(1),
            wave(0, 1, &[1.0])
        );
    }

    #[test]
    fn squeeze_all_examples() {
        let h = HybridState::lift(&qubit(1.0, 0.0), &unit()).unwrap();
        let s = h.squeeze_all().unwrap();
        assert_eq!(s.row(0), wave(1, 0, &[SQRT_2]));
        assert_eq!(s.row(0).support(), (0.0, 0.5));

        let tight = h
            .with_limits(Limits {
                max_level: 0,
                ..Limits::default()
            })
            .unwrap();
        assert!(matches!(tight.squeeze_all(), Err(Error::Resource(_))));
    }

    #[test]
    fn tft_examples() {
        let h = HybridState::lift(&qubit(0.6, 0.8), &unit()).unwrap();
        let out = h.tft(0).unwrap();
        assert_eq!(out.row(0), wave(0, 0, &[0.6, 0.8]));
        assert!(out.row(1).is_zero());
        assert!((out.norm2() - 1.0).abs() < 1e-15);

        let h = HybridState::lift(&qubit(1.0, 0.0), &wave(2, 1, &[0.3, -0.7])).unwrap();
        assert_eq!(h.tft(0).unwrap(), h);

        // α = β = 1/√2, ψ = √2 on [0, ½)
        let r = FRAC_1_SQRT_2;
        let h = HybridState::lift(&qubit(r, r), &wave(1, 0, &[SQRT_2, 0.0])).unwrap();
        let out = h.tft(0).unwrap();
        let expected = wave(1, 0, &[1.0, 0.0, 1.0]);
        assert!(out.row(0).max_abs_diff(&expected).unwrap() < 1e-15);
        assert!(out.row(1).is_zero());
    }

    #[test]
    fn erase_examples() {
        let r = FRAC_1_SQRT_2;
        let out = HybridState::lift(&qubit(r, r), &unit())
            .unwrap()
            .erase(0)
            .unwrap();
        assert_eq!(out.level(), 1);
        assert!(out.row(1).is_zero());
        assert!(out.row(0).max_abs_diff(&wave(1, 0, &[1.0, 1.0])).unwrap() < 1e-15);

        let out = HybridState::lift(&qubit(1.0, 0.0), &unit())
            .unwrap()
            .erase(0)
            .unwrap();
        assert_eq!(out.row(0), wave(1, 0, &[SQRT_2]));

        let out = HybridState::lift(&qubit(0.0, 1.0), &unit())
            .unwrap()
            .erase(0)
            .unwrap();
        assert_eq!(out.row(0), wave(1, 1, &[SQRT_2]));
        assert_eq!(out.row(0).support(), (0.5, 1.0));
        assert_eq!(out.weight_where(1), 0.0);
    }

    #[test]
    fn erase_rejects_support_outside_unit_interval() {
        let h = HybridState::lift(&qubit(0.6, 0.8), &wave(1, 1, &[1.0, 1.0])).unwrap();
        let err = h.erase(0).unwrap_err();
        assert!(matches!(&err, Error::Contract(m) if m.contains("cells 1..3")));
        let h = HybridState::lift(&qubit(0.6, 0.8), &wave(0, -1, &[1.0])).unwrap();
        assert!(matches!(h.erase(0), Err(Error::Contract(_))));
    }

    #[test]
    fn erase_sequence_examples() {
        let reg = qubit(1.0, 0.0).tensor(&qubit(0.0, 1.0)).unwrap();
        let h = HybridState::lift(&reg, &unit()).unwrap();
        let (out, trace) = h.erase_sequence(&[0, 1]).unwrap();
        assert!(out.row(0).max_abs_diff(&wave(2, 2, &[2.0])).unwrap() < 1e-15);
        assert_eq!(out.row(0).cell_range(), (2, 3));
        for q in 1..4 {
            assert!(out.row(q).is_zero());
        }
        assert_eq!(trace.len(), 2);
        assert_eq!((trace[0].step, trace[0].qubit, trace[0].level), (1, 0, 1));
        assert_eq!((trace[1].step, trace[1].qubit, trace[1].level), (2, 1, 2));
        assert!(trace.iter().all(|s| s.ancilla_residual == 0.0));

        let n = 5;
        let zeros = RegisterState::basis_state(n, 0).unwrap();
        let h = HybridState::lift(&zeros, &unit()).unwrap();
        let qs: Vec<usize> = (0..n).collect();
        let (out, _) = h.erase_sequence(&qs).unwrap();
        let w = out.row(0);
        assert_eq!((w.level(), w.offset(), w.coeffs().len()), (5, 0, 1));
        assert!((w.coeffs()[0] - c(libm::pow(2.0, 2.5))).norm() < 1e-13);

        let (same, trace) = h.erase_sequence(&[]).unwrap();
        assert_eq!(same, h);
        assert!(trace.is_empty());
    }

    #[test]
    fn tensor_oracle_examples() {
        let one = (c(1.0), c(0.0));
        let zero_one = (c(0.0), c(1.0));
        assert_eq!(
            tensor_oracle(&[one], &unit()).unwrap(),
            wave(1, 0, &[SQRT_2])
        );
        let w = tensor_oracle(&[one, zero_one], &unit()).unwrap();
        assert_eq!(w, wave(2, 2, &[2.0]));
        assert_eq!(tensor_oracle(&[], &unit()).unwrap(), unit());
        assert!(tensor_oracle(&[one], &wave(0, 1, &[1.0])).is_err());
    }

    #[test]
    fn reduced_density_examples() {
        let r = FRAC_1_SQRT_2;
        let reg = qubit(0.6, 0.8).tensor(&qubit(r, r)).unwrap();
        let w = wave(2, 0, &[1.0, 1.0, 1.0, 1.0]);
        let h = HybridState::lift(&reg, &w).unwrap();
        for keep in [&[0][..], &[1], &[0, 1], &[1, 0]] {
            let a = h.reduced_density(keep).unwrap();
            let b = reg.reduced_density(keep).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-15);
        }

        // data |+⟩ on qubit 0, ancilla copy on qubit 1
        let bell = RegisterState::new(2, vec![c(r), c(0.0), c(0.0), c(r)]).unwrap();
        let h = HybridState::lift(&bell, &unit()).unwrap();
        assert!((h.reduced_density(&[0, 1]).unwrap().purity() - 1.0).abs() < 1e-12);
        let erased = h.erase(1).unwrap();
        let rho = erased.reduced_density(&[0]).unwrap();
        assert!(
            rho.max_abs_diff(&crate::qubit::DensityMatrix::diagonal(&[0.5, 0.5]).unwrap()) < 1e-12
        );
        assert!(h.reduced_density(&[]).is_err());
    }

    #[test]
    fn project_qubits_recovers_factor() {
        let reg = qubit(0.6, 0.8);
        let w = wave(3, 2, &[0.5, -1.0, 2.0]);
        let h = HybridState::lift(&reg, &w).unwrap();
        let back = h.project_qubits(&reg).unwrap();
        assert!(back.max_abs_diff(&w).unwrap() < 1e-15);
    }
}
