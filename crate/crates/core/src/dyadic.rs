//! Piecewise-constant wavefunctions on dyadic cells.
//!
//! A [`DyadicWave`] at level `ℓ` stores the value of `ψ` on consecutive cells
//! `[(o+k)·2^-ℓ, (o+k+1)·2^-ℓ)`. Integer translations, projections onto
//! integer intervals and the squeeze `ψ(x) ↦ √2 ψ(2x)` are all exact on this
//! class, which is why it serves as the reference backend.

use alloc::{format, vec, vec::Vec};
use core::f64::consts::SQRT_2;

use crate::{is_finite, Error, Result, C64};

/// Hard cap on the level so that cell edges stay exact in `f64` and offsets
/// fit comfortably in `i64`.
pub const LEVEL_CAP: u32 = 48;

/// Largest number of cells a single wave may hold.
pub const MAX_CELLS: usize = 1 << 28;

const ZERO: C64 = C64::new(0.0, 0.0);

/// `2^-level`, exact.
pub fn cell_width(level: u32) -> f64 {
    libm::ldexp(1.0, -(level as i32))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DyadicWave {
    level: u32,
    offset: i64,
    coeffs: Vec<C64>,
}

impl DyadicWave {
    /// Builds a wave and brings it to canonical form (zero cells at both
    /// ends trimmed; the zero function is a single zero cell at offset 0).
    pub fn new(level: u32, offset: i64, coeffs: Vec<C64>) -> Result<Self> {
        check_level(level)?;
        if coeffs.is_empty() {
            return Err(Error::Validation("a wave needs at least one cell".into()));
        }
        if coeffs.len() > MAX_CELLS {
            return Err(Error::Resource(format!(
                "{} cells exceeds the limit of {MAX_CELLS}",
                coeffs.len()
            )));
        }
        if let Some(k) = coeffs.iter().position(|z| !is_finite(*z)) {
            return Err(Error::Validation(format!("cell {k} is not finite")));
        }
        Ok(Self::canonical(level, offset, coeffs))
    }

    pub(crate) fn canonical(level: u32, offset: i64, mut coeffs: Vec<C64>) -> Self {
        let Some(first) = coeffs.iter().position(|z| *z != ZERO) else {
            return Self::zero(level);
        };
        let last = coeffs.iter().rposition(|z| *z != ZERO).unwrap_or(first);
        coeffs.truncate(last + 1);
        coeffs.drain(..first);
        Self {
            level,
            offset: offset + first as i64,
            coeffs,
        }
    }

    pub fn zero(level: u32) -> Self {
        Self {
            level,
            offset: 0,
            coeffs: vec![ZERO],
        }
    }

    /// Normalized indicator of `[0, 1)` resolved into `2^level` cells.
    pub fn indicator_unit(level: u32) -> Result<Self> {
        check_level(level)?;
        let cells = checked_cells(level)?;
        Ok(Self {
            level,
            offset: 0,
            coeffs: vec![C64::new(1.0, 0.0); cells],
        })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn cell_width(&self) -> f64 {
        cell_width(self.level)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|z| *z == ZERO)
    }

    /// Absolute cell index range `[start, end)` of the stored cells.
    pub fn cell_range(&self) -> (i64, i64) {
        (self.offset, self.offset + self.coeffs.len() as i64)
    }

    /// `[x_left, x_right)` of the stored cells.
    pub fn support(&self) -> (f64, f64) {
        let (s, e) = self.cell_range();
        let w = self.cell_width();
        (s as f64 * w, e as f64 * w)
    }

    pub fn support_measure(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        self.coeffs.len() as f64 * self.cell_width()
    }

    /// True when every nonzero cell lies inside the integer interval `[a, b)`.
    pub fn is_supported_in(&self, a: i64, b: i64) -> bool {
        if self.is_zero() {
            return true;
        }
        let (s, e) = self.cell_range();
        let scale = 1i128 << self.level;
        s as i128 >= a as i128 * scale && e as i128 <= b as i128 * scale
    }

    pub fn refine(&self, target: u32) -> Result<Self> {
        if target < self.level {
            return Err(Error::Domain(format!(
                "cannot coarsen from level {} to {target}",
                self.level
            )));
        }
        check_level(target)?;
        if self.is_zero() {
            return Ok(Self::zero(target));
        }
        let factor = 1usize << (target - self.level);
        let cells = self
            .coeffs
            .len()
            .checked_mul(factor)
            .filter(|&n| n <= MAX_CELLS)
            .ok_or_else(|| {
                Error::Resource(format!(
                    "refining to level {target} exceeds {MAX_CELLS} cells"
                ))
            })?;
        let mut coeffs = Vec::with_capacity(cells);
        for &c in &self.coeffs {
            coeffs.extend(core::iter::repeat_n(c, factor));
        }
        Ok(Self {
            level: target,
            offset: self.offset * factor as i64,
            coeffs,
        })
    }

    /// `ψ(x) ↦ ψ(x − t)`.
    pub fn translate_int(&self, t: i64) -> Result<Self> {
        let offset = t
            .checked_mul(1i64 << self.level)
            .and_then(|s| s.checked_add(self.offset))
            .ok_or_else(|| Error::Resource(format!("translation by {t} overflows the offset")))?;
        Ok(Self {
            level: self.level,
            offset,
            coeffs: self.coeffs.clone(),
        })
    }

    /// Keeps the cells inside the integer interval `[a, b)` and zeroes the
    /// rest. Integer endpoints always fall on cell boundaries.
    pub fn project(&self, a: i64, b: i64) -> Result<Self> {
        if a >= b {
            return Err(Error::Domain(format!("empty interval [{a}, {b})")));
        }
        let scale = 1i128 << self.level;
        let (lo, hi) = (a as i128 * scale, b as i128 * scale);
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| {
                let j = (self.offset + k as i64) as i128;
                if j >= lo && j < hi {
                    c
                } else {
                    ZERO
                }
            })
            .collect();
        Ok(Self::canonical(self.level, self.offset, coeffs))
    }

    /// `ψ(x) ↦ √2 ψ(2x)`: same cells one level finer, values scaled by `√2`.
    pub fn squeeze(&self) -> Result<Self> {
        check_level(self.level + 1)?;
        Ok(Self {
            level: self.level + 1,
            offset: self.offset,
            coeffs: self.coeffs.iter().map(|c| c * SQRT_2).collect(),
        })
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self::canonical(
            self.level,
            self.offset,
            self.coeffs.iter().map(|c| c * factor).collect(),
        )
    }

    /// Pointwise sum, evaluated at the finer of the two levels.
    pub fn add(&self, other: &DyadicWave) -> Result<Self> {
        let (level, start, a, b) = align(self, other)?;
        let coeffs = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        Ok(Self::canonical(level, start, coeffs))
    }

    /// `2^-ℓ Σ |c_k|²`.
    pub fn norm2(&self) -> f64 {
        self.cell_width() * self.coeffs.iter().map(|z| z.norm_sqr()).sum::<f64>()
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &DyadicWave) -> Result<C64> {
        let (level, _, a, b) = align(self, other)?;
        let s: C64 = a.iter().zip(&b).map(|(x, y)| x.conj() * y).sum();
        Ok(s * cell_width(level))
    }

    /// Largest pointwise `|self − other|`.
    pub fn max_abs_diff(&self, other: &DyadicWave) -> Result<f64> {
        let (_, _, a, b) = align(self, other)?;
        Ok(a.iter()
            .zip(&b)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max))
    }

    /// Value at `x` under the half-open cell convention.
    pub fn value_at(&self, x: f64) -> C64 {
        let j = libm::floor(libm::ldexp(x, self.level as i32));
        let k = j - self.offset as f64;
        if k >= 0.0 && k < self.coeffs.len() as f64 {
            self.coeffs[k as usize]
        } else {
            ZERO
        }
    }

    /// Stored cells as `(x_left, x_right, value)`.
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, C64)> + '_ {
        let w = self.cell_width();
        self.coeffs.iter().enumerate().map(move |(k, &c)| {
            let j = self.offset + k as i64;
            (j as f64 * w, (j + 1) as f64 * w, c)
        })
    }

    /// Step-function samples, `pts_per_cell` evenly spaced points per stored
    /// cell starting at each left edge.
    pub fn samples(&self, pts_per_cell: usize) -> Result<Vec<(f64, C64)>> {
        if pts_per_cell == 0 {
            return Err(Error::Domain("need at least one point per cell".into()));
        }
        let step = self.cell_width() / pts_per_cell as f64;
        let mut out = Vec::with_capacity(self.coeffs.len() * pts_per_cell);
        for (left, _, c) in self.cells() {
            out.extend((0..pts_per_cell).map(|p| (left + p as f64 * step, c)));
        }
        Ok(out)
    }
}

fn check_level(level: u32) -> Result<()> {
    if level > LEVEL_CAP {
        return Err(Error::Resource(format!(
            "level {level} exceeds the cap of {LEVEL_CAP}"
        )));
    }
    Ok(())
}

fn checked_cells(level: u32) -> Result<usize> {
    let cells = 1usize
        .checked_shl(level)
        .filter(|&n| n <= MAX_CELLS)
        .ok_or_else(|| {
            Error::Resource(format!("level {level} needs more than {MAX_CELLS} cells"))
        })?;
    Ok(cells)
}

/// Refines both waves to the common level and lays them out over the union
/// of their cell ranges.
fn align(a: &DyadicWave, b: &DyadicWave) -> Result<(u32, i64, Vec<C64>, Vec<C64>)> {
    let level = a.level.max(b.level);
    let a = a.refine(level)?;
    let b = b.refine(level)?;
    let start = a.offset.min(b.offset);
    let end = a.cell_range().1.max(b.cell_range().1);
    let len = usize::try_from(end - start)
        .ok()
        .filter(|&n| n <= MAX_CELLS)
        .ok_or_else(|| Error::Resource("aligned supports are too far apart".into()))?;
    let lay = |w: &DyadicWave| {
        let mut v = vec![ZERO; len];
        let at = (w.offset - start) as usize;
        v[at..at + w.coeffs.len()].copy_from_slice(&w.coeffs);
        v
    };
    Ok((level, start, lay(&a), lay(&b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn wave(level: u32, offset: i64, values: &[f64]) -> DyadicWave {
        DyadicWave::new(level, offset, values.iter().map(|&v| c(v)).collect()).unwrap()
    }

    fn arb_wave() -> impl Strategy<Value = DyadicWave> {
        (
            0u32..6,
            -20i64..20,
            prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..12),
        )
            .prop_map(|(level, offset, v)| {
                let coeffs = v.into_iter().map(|(re, im)| C64::new(re, im)).collect();
                DyadicWave::new(level, offset, coeffs).unwrap()
            })
    }

    #[test]
    fn indicator_examples() {
        assert_eq!(DyadicWave::indicator_unit(0).unwrap(), wave(0, 0, &[1.0]));
        let one = DyadicWave::indicator_unit(1).unwrap();
        assert_eq!(one, wave(1, 0, &[1.0, 1.0]));
        assert_eq!(one.norm2(), 1.0);
        let two = DyadicWave::indicator_unit(2).unwrap();
        assert_eq!(two.coeffs().len(), 4);
        assert_eq!(two.support(), (0.0, 1.0));
        for l in 0..12 {
            assert_eq!(DyadicWave::indicator_unit(l).unwrap().norm2(), 1.0);
        }
    }

    #[test]
    fn canonical_trimming() {
        let w = wave(1, 3, &[0.0, 0.0, 2.0, 0.0, 1.0, 0.0]);
        assert_eq!(w.offset(), 5);
        assert_eq!(w.coeffs(), &[c(2.0), c(0.0), c(1.0)]);
        assert_eq!(wave(3, -7, &[0.0, 0.0]), DyadicWave::zero(3));
        assert!(DyadicWave::new(0, 0, vec![]).is_err());
        assert!(DyadicWave::new(0, 0, vec![C64::new(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn refine_examples() {
        assert_eq!(
            wave(0, 0, &[1.0]).refine(1).unwrap(),
            wave(1, 0, &[1.0, 1.0])
        );
        let w = wave(2, 1, &[0.5, -0.5]);
        assert_eq!(w.refine(2).unwrap(), w);
        let a = C64::new(0.3, -0.2);
        let half = DyadicWave::new(1, 1, vec![a]).unwrap();
        assert_eq!(
            half.refine(2).unwrap(),
            DyadicWave::new(2, 2, vec![a, a]).unwrap()
        );
        assert!(matches!(w.refine(1), Err(Error::Domain(_))));
    }

    #[test]
    fn translate_examples() {
        let w = wave(1, 0, &[0.6, 0.8]);
        assert_eq!(w.translate_int(0).unwrap(), w);
        let moved = DyadicWave::indicator_unit(0)
            .unwrap()
            .translate_int(1)
            .unwrap();
        assert_eq!(moved, wave(0, 1, &[1.0]));
        assert_eq!(moved.support(), (1.0, 2.0));
        let left = w.translate_int(-1).unwrap();
        assert_eq!(left, wave(1, -2, &[0.6, 0.8]));
        assert_eq!(left.support(), (-1.0, 0.0));
    }

    #[test]
    fn project_examples() {
        let ind = DyadicWave::indicator_unit(1).unwrap();
        assert_eq!(ind.project(0, 1).unwrap(), ind);
        let w = wave(0, 0, &[0.6, 0.8]);
        assert_eq!(w.project(0, 1).unwrap(), wave(0, 0, &[0.6]));
        assert_eq!(w.project(1, 3).unwrap(), wave(0, 1, &[0.8]));
        assert_eq!(w.project(5, 6).unwrap(), DyadicWave::zero(0));
        assert!(w.project(1, 1).is_err());
    }

    #[test]
    fn squeeze_examples() {
        let s = wave(0, 0, &[1.0]).squeeze().unwrap();
        assert_eq!(s, wave(1, 0, &[SQRT_2]));
        assert_eq!(s.support(), (0.0, 0.5));
        let s = wave(0, 0, &[0.6, 0.8]).squeeze().unwrap();
        assert_eq!(s, wave(1, 0, &[0.6 * SQRT_2, 0.8 * SQRT_2]));
        assert_eq!(s.support(), (0.0, 1.0));
        // pointwise √2 ψ(2x)
        let psi = wave(0, 0, &[0.6, 0.8]);
        for x in [0.1, 0.4, 0.6, 0.99] {
            assert_eq!(s.value_at(x), psi.value_at(2.0 * x) * SQRT_2);
        }
    }

    #[test]
    fn inner_products() {
        let unit = DyadicWave::indicator_unit(0).unwrap();
        let next = unit.translate_int(1).unwrap();
        assert_eq!(unit.inner(&next).unwrap(), c(0.0));
        let left = wave(1, 0, &[SQRT_2, 0.0]);
        let ip = left.inner(&DyadicWave::indicator_unit(1).unwrap()).unwrap();
        assert!((ip - c(core::f64::consts::FRAC_1_SQRT_2)).norm() < 1e-16);
        let a = DyadicWave::new(1, 0, vec![C64::new(0.0, 1.0), c(1.0)]).unwrap();
        let b = DyadicWave::indicator_unit(1).unwrap();
        // conjugate-linear in the first slot
        assert_eq!(a.inner(&b).unwrap(), C64::new(0.5, -0.5));
    }

    #[test]
    fn samples_examples() {
        let unit = DyadicWave::indicator_unit(0).unwrap();
        assert_eq!(unit.samples(2).unwrap(), vec![(0.0, c(1.0)), (0.5, c(1.0))]);
        let s = unit.squeeze().unwrap();
        assert_eq!(s.samples(1).unwrap(), vec![(0.0, c(SQRT_2))]);
        // trimmed zero cells never appear
        let w = wave(0, 0, &[0.0, 1.0, 0.0]);
        assert_eq!(w.samples(1).unwrap(), vec![(1.0, c(1.0))]);
        assert!(unit.samples(0).is_err());
    }

    #[test]
    fn value_at_half_open() {
        let w = wave(1, 0, &[1.0, 2.0]);
        assert_eq!(w.value_at(0.0), c(1.0));
        assert_eq!(w.value_at(0.5), c(2.0));
        assert_eq!(w.value_at(1.0), c(0.0));
        assert_eq!(w.value_at(-1e-9), c(0.0));
    }

    proptest! {
        #[test]
        fn translate_and_squeeze_preserve_norm(w in arb_wave(), t in -8i64..8) {
            let n = w.norm2();
            prop_assert!((w.translate_int(t).unwrap().norm2() - n).abs() <= 1e-15 * n.max(1.0));
            prop_assert!((w.squeeze().unwrap().norm2() - n).abs() <= 1e-15 * n.max(1.0));
            prop_assert!(w.project(-1, 2).unwrap().norm2() <= n);
        }

        #[test]
        fn translate_inverse_is_identity(w in arb_wave(), t in -50i64..50) {
            prop_assert_eq!(w.translate_int(t).unwrap().translate_int(-t).unwrap(), w);
        }

        #[test]
        fn refine_commutes(w in arb_wave(), extra in 0u32..=3, t in -4i64..4, a in -3i64..3, len in 1i64..4) {
            let target = w.level() + extra;
            let r = w.refine(target).unwrap();
            prop_assert_eq!(
                r.translate_int(t).unwrap(),
                w.translate_int(t).unwrap().refine(target).unwrap()
            );
            prop_assert_eq!(
                r.project(a, a + len).unwrap(),
                w.project(a, a + len).unwrap().refine(target).unwrap()
            );
            prop_assert_eq!(
                r.squeeze().unwrap(),
                w.squeeze().unwrap().refine(target + 1).unwrap()
            );
        }

        #[test]
        fn project_is_idempotent(w in arb_wave(), a in -3i64..3, len in 1i64..4) {
            let once = w.project(a, a + len).unwrap();
            prop_assert_eq!(once.project(a, a + len).unwrap(), once);
        }

        #[test]
        fn squeeze_halves_support(w in arb_wave()) {
            prop_assert_eq!(w.squeeze().unwrap().support_measure(), 0.5 * w.support_measure());
        }
    }
}
