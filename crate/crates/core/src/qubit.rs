//! Dense state vectors over `n` qubits.
//!
//! Basis index bit `q` is the value of qubit `q` (qubit 0 is the least
//! significant bit).

use alloc::{format, vec, vec::Vec};
use core::fmt;

use crate::{is_finite, Error, Result, C64};

/// Largest register handled densely.
pub const MAX_QUBITS: usize = 24;

const UNITARITY_TOL: f64 = 1e-12;

/// A 2×2 unitary, validated once at construction.
#[derive(Clone, Copy, PartialEq)]
pub struct Unitary2 {
    m: [[C64; 2]; 2],
}

impl fmt::Debug for Unitary2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.m.iter()).finish()
    }
}

impl Unitary2 {
    pub fn new(m: [[C64; 2]; 2]) -> Result<Self> {
        if !m.iter().flatten().all(|z| is_finite(*z)) {
            return Err(Error::Validation("gate has non-finite entries".into()));
        }
        // (U†U)_{ij} = Σ_k conj(U_ki) U_kj
        let mut dev: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let s = m[0][i].conj() * m[0][j] + m[1][i].conj() * m[1][j];
                let target = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((s - target).norm());
            }
        }
        if dev > UNITARITY_TOL {
            return Err(Error::Validation(format!(
                "gate is not unitary (|U†U - I| = {dev:e})"
            )));
        }
        Ok(Self { m })
    }

    /// Unitary whose first column is `(alpha, beta)`, i.e. it prepares
    /// `α|0⟩ + β|1⟩` from `|0⟩`.
    pub fn preparing(alpha: C64, beta: C64) -> Result<Self> {
        Self::new([[alpha, -beta.conj()], [beta, alpha.conj()]])
    }

    pub fn matrix(&self) -> &[[C64; 2]; 2] {
        &self.m
    }

    pub fn x() -> Self {
        let (o, l) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
        Self {
            m: [[o, l], [l, o]],
        }
    }

    pub fn y() -> Self {
        let (o, i) = (C64::new(0.0, 0.0), C64::new(0.0, 1.0));
        Self {
            m: [[o, -i], [i, o]],
        }
    }

    pub fn z() -> Self {
        let (o, l) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
        Self {
            m: [[l, o], [o, -l]],
        }
    }

    pub fn h() -> Self {
        let r = C64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self {
            m: [[r, r], [r, -r]],
        }
    }

    pub fn s() -> Self {
        let (o, l) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
        Self {
            m: [[l, o], [o, C64::new(0.0, 1.0)]],
        }
    }

    pub fn t() -> Self {
        let (o, l) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
        let r = core::f64::consts::FRAC_1_SQRT_2;
        Self {
            m: [[l, o], [o, C64::new(r, r)]],
        }
    }

    /// Applies the gate to slot `q` of a contiguous amplitude vector.
    pub(crate) fn apply_in_place(&self, amps: &mut [C64], q: usize) {
        let stride = 1usize << q;
        let [[a, b], [c, d]] = self.m;
        for base in (0..amps.len()).step_by(stride << 1) {
            for i in base..base + stride {
                let (x0, x1) = (amps[i], amps[i + stride]);
                amps[i] = a * x0 + b * x1;
                amps[i + stride] = c * x0 + d * x1;
            }
        }
    }
}

/// A bijection on basis indices `[0, len)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisPermutation {
    map: Vec<usize>,
}

impl BasisPermutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; map.len()];
        for (i, &j) in map.iter().enumerate() {
            if j >= map.len() {
                return Err(Error::Validation(format!(
                    "permutation maps {i} to {j}, outside [0, {})",
                    map.len()
                )));
            }
            if core::mem::replace(&mut seen[j], true) {
                return Err(Error::Validation(format!(
                    "permutation is not injective: {j} is hit twice"
                )));
            }
        }
        Ok(Self { map })
    }

    pub fn identity(len: usize) -> Self {
        Self {
            map: (0..len).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn image(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (i, &j) in self.map.iter().enumerate() {
            inv[j] = i;
        }
        Self { map: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Writes `out[p(i)] = src[i]`.
    pub(crate) fn scatter(&self, src: &[C64], out: &mut [C64]) {
        for (i, &j) in self.map.iter().enumerate() {
            out[j] = src[i];
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegisterState {
    n_qubits: usize,
    amps: Vec<C64>,
}

impl RegisterState {
    pub fn new(n_qubits: usize, amps: Vec<C64>) -> Result<Self> {
        if n_qubits > MAX_QUBITS {
            return Err(Error::Resource(format!(
                "{n_qubits} qubits exceeds the dense limit of {MAX_QUBITS}"
            )));
        }
        if amps.len() != 1 << n_qubits {
            return Err(Error::Validation(format!(
                "expected {} amplitudes for {n_qubits} qubits, got {}",
                1usize << n_qubits,
                amps.len()
            )));
        }
        if let Some(i) = amps.iter().position(|z| !is_finite(*z)) {
            return Err(Error::Validation(format!("amplitude {i} is not finite")));
        }
        Ok(Self { n_qubits, amps })
    }

    pub fn basis_state(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits > MAX_QUBITS {
            return Err(Error::Resource(format!(
                "{n_qubits} qubits exceeds the dense limit of {MAX_QUBITS}"
            )));
        }
        if index >= 1 << n_qubits {
            return Err(Error::Domain(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n_qubits];
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    /// Single-qubit state `α|0⟩ + β|1⟩`.
    pub fn qubit(alpha: C64, beta: C64) -> Result<Self> {
        Self::new(1, vec![alpha, beta])
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm2(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm2() - 1.0).abs() <= tol
    }

    /// `self ⊗ high`, with `high` occupying the more significant qubits.
    pub fn tensor(&self, high: &RegisterState) -> Result<Self> {
        let n = self.n_qubits + high.n_qubits;
        if n > MAX_QUBITS {
            return Err(Error::Resource(format!(
                "{n} qubits exceeds the dense limit of {MAX_QUBITS}"
            )));
        }
        let mut amps = Vec::with_capacity(1 << n);
        for h in &high.amps {
            amps.extend(self.amps.iter().map(|l| l * h));
        }
        Ok(Self { n_qubits: n, amps })
    }

    pub fn apply_single_qubit(&self, q: usize, u: &Unitary2) -> Result<Self> {
        self.check_qubit(q)?;
        let mut amps = self.amps.clone();
        u.apply_in_place(&mut amps, q);
        Ok(Self {
            n_qubits: self.n_qubits,
            amps,
        })
    }

    pub fn apply_permutation(&self, p: &BasisPermutation) -> Result<Self> {
        if p.len() != self.dim() {
            return Err(Error::Validation(format!(
                "permutation acts on {} indices, register has {}",
                p.len(),
                self.dim()
            )));
        }
        let mut amps = vec![C64::new(0.0, 0.0); self.dim()];
        p.scatter(&self.amps, &mut amps);
        Ok(Self {
            n_qubits: self.n_qubits,
            amps,
        })
    }

    /// Partial trace onto `keep`; bit `i` of the reduced index is qubit
    /// `keep[i]`.
    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let split = QubitSplit::new(self.n_qubits, keep)?;
        let mut rho = vec![C64::new(0.0, 0.0); split.kept_dim() * split.kept_dim()];
        split.accumulate(&self.amps, 1.0, &mut rho);
        Ok(DensityMatrix {
            dim: split.kept_dim(),
            entries: rho,
        })
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
}

/// Index bookkeeping for a partial trace over the complement of `keep`.
pub(crate) struct QubitSplit {
    kept_offsets: Vec<usize>,
    rest_offsets: Vec<usize>,
}

impl QubitSplit {
    pub(crate) fn new(n_qubits: usize, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::Domain("keep set is empty".into()));
        }
        let mut mask = 0usize;
        for &q in keep {
            if q >= n_qubits {
                return Err(Error::Domain(format!(
                    "qubit {q} out of range for {n_qubits} qubits"
                )));
            }
            if mask & (1 << q) != 0 {
                return Err(Error::Domain(format!("qubit {q} listed twice in keep set")));
            }
            mask |= 1 << q;
        }
        let rest: Vec<usize> = (0..n_qubits).filter(|q| mask & (1 << q) == 0).collect();
        Ok(Self {
            kept_offsets: offsets(keep),
            rest_offsets: offsets(&rest),
        })
    }

    pub(crate) fn kept_dim(&self) -> usize {
        self.kept_offsets.len()
    }

    /// `rho += weight · Σ_rest v_rest v_rest†` for one amplitude vector.
    pub(crate) fn accumulate(&self, amps: &[C64], weight: f64, rho: &mut [C64]) {
        let d = self.kept_dim();
        let mut v = vec![C64::new(0.0, 0.0); d];
        for &r in &self.rest_offsets {
            for (slot, &a) in v.iter_mut().zip(&self.kept_offsets) {
                *slot = amps[a | r];
            }
            for i in 0..d {
                if v[i] == C64::new(0.0, 0.0) {
                    continue;
                }
                let vi = v[i] * weight;
                for j in 0..d {
                    rho[i * d + j] += vi * v[j].conj();
                }
            }
        }
    }
}

/// All basis offsets spanned by the given qubits, ordered by the sub-index
/// whose bit `i` is `qubits[i]`.
fn offsets(qubits: &[usize]) -> Vec<usize> {
    (0..1usize << qubits.len())
        .map(|sub| {
            qubits
                .iter()
                .enumerate()
                .filter(|(i, _)| sub >> i & 1 == 1)
                .fold(0, |acc, (_, &q)| acc | 1 << q)
        })
        .collect()
}

/// Row-major `dim × dim` density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    entries: Vec<C64>,
}

impl DensityMatrix {
    /// Checks shape, finiteness, hermiticity and unit trace (both within
    /// `1e-12`).
    pub fn new(dim: usize, entries: Vec<C64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::Validation(format!(
                "expected {} entries for dimension {dim}, got {}",
                dim * dim,
                entries.len()
            )));
        }
        if !entries.iter().all(|z| is_finite(*z)) {
            return Err(Error::Validation(
                "density matrix has non-finite entries".into(),
            ));
        }
        let rho = Self { dim, entries };
        if rho.hermiticity_defect() > 1e-12 {
            return Err(Error::Validation("density matrix is not Hermitian".into()));
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > 1e-12 || tr.im.abs() > 1e-12 {
            return Err(Error::Validation(format!("trace is {tr}, expected 1")));
        }
        Ok(rho)
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let d = values.len();
        let mut entries = vec![C64::new(0.0, 0.0); d * d];
        for (i, &v) in values.iter().enumerate() {
            entries[i * d + i] = C64::new(v, 0.0);
        }
        Self::new(d, entries)
    }

    /// `|ψ⟩⟨ψ|` for a normalized register state.
    pub fn pure(state: &RegisterState) -> Self {
        let a = state.amps();
        let d = a.len();
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            entries.extend(a.iter().map(|aj| a[i] * aj.conj()));
        }
        Self { dim: d, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// `Tr ρ²`, which for Hermitian `ρ` is the squared Frobenius norm.
    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Largest entrywise deviation from `other`.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Cholesky test on `ρ + tol·I`: succeeds iff every eigenvalue of `ρ`
    /// exceeds `-tol` (up to rounding).
    pub fn is_positive_semidefinite(&self, tol: f64) -> bool {
        let d = self.dim;
        let mut l = vec![C64::new(0.0, 0.0); d * d];
        for j in 0..d {
            let mut diag = self.get(j, j).re + tol;
            for k in 0..j {
                diag -= l[j * d + k].norm_sqr();
            }
            if diag <= 0.0 {
                return false;
            }
            let ljj = libm::sqrt(diag);
            l[j * d + j] = C64::new(ljj, 0.0);
            for i in j + 1..d {
                let mut s = self.get(i, j);
                for k in 0..j {
                    s -= l[i * d + k] * l[j * d + k].conj();
                }
                l[i * d + j] = s / ljj;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::FRAC_1_SQRT_2;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn random_state(rng: &mut ChaCha8Rng, n: usize) -> RegisterState {
        let mut amps: Vec<C64> = (0..1 << n)
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|z| *z /= norm);
        RegisterState::new(n, amps).unwrap()
    }

    fn random_unitary(rng: &mut ChaCha8Rng) -> Unitary2 {
        let (a, b, g, d) = (
            rng.gen_range(0.0..6.3),
            rng.gen_range(0.0..6.3),
            rng.gen_range(0.0..6.3),
            rng.gen_range(0.0..6.3),
        );
        let e = |t: f64| C64::from_polar(1.0, t);
        let (cs, sn) = (libm::cos(g), libm::sin(g));
        Unitary2::new([
            [e(a) * cs, -e(a + b) * sn],
            [e(a + d) * sn, e(a + b + d) * cs],
        ])
        .unwrap()
    }

    #[test]
    fn basis_states() {
        assert_eq!(
            RegisterState::basis_state(1, 0).unwrap().amps(),
            &[c(1.0), c(0.0)]
        );
        assert_eq!(
            RegisterState::basis_state(2, 3).unwrap().amps(),
            &[c(0.0), c(0.0), c(0.0), c(1.0)]
        );
        let s = RegisterState::basis_state(3, 5).unwrap();
        assert_eq!(s.dim(), 8);
        assert_eq!(s.amps()[5], c(1.0));
        assert_eq!(s.norm2(), 1.0);
        assert!(matches!(
            RegisterState::basis_state(2, 4),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn named_gates() {
        let zero = RegisterState::basis_state(1, 0).unwrap();
        let one = zero.apply_single_qubit(0, &Unitary2::x()).unwrap();
        assert_eq!(one.amps(), &[c(0.0), c(1.0)]);
        let plus = zero.apply_single_qubit(0, &Unitary2::h()).unwrap();
        assert!((plus.amps()[0] - c(FRAC_1_SQRT_2)).norm() < 1e-16);
        assert!((plus.amps()[1] - c(FRAC_1_SQRT_2)).norm() < 1e-16);
    }

    #[test]
    fn x_on_bell_state() {
        let r = c(FRAC_1_SQRT_2);
        let bell = RegisterState::new(2, vec![r, c(0.0), c(0.0), r]).unwrap();
        let out = bell.apply_single_qubit(0, &Unitary2::x()).unwrap();
        assert_eq!(out.amps(), &[c(0.0), r, r, c(0.0)]);
    }

    #[test]
    fn non_unitary_rejected() {
        let m = [[c(1.0), c(1.0)], [c(0.0), c(1.0)]];
        assert!(matches!(Unitary2::new(m), Err(Error::Validation(_))));
        assert!(Unitary2::preparing(c(0.6), c(0.8)).is_ok());
        assert!(Unitary2::preparing(c(0.6), c(0.6)).is_err());
    }

    #[test]
    fn qubit_out_of_range() {
        let s = RegisterState::basis_state(2, 0).unwrap();
        assert!(matches!(
            s.apply_single_qubit(2, &Unitary2::x()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn permutations() {
        let s = RegisterState::new(1, vec![c(0.6), c(0.8)]).unwrap();
        let id = BasisPermutation::identity(2);
        assert_eq!(s.apply_permutation(&id).unwrap(), s);
        let swap = BasisPermutation::new(vec![1, 0]).unwrap();
        assert_eq!(
            s.apply_permutation(&swap).unwrap().amps(),
            &[c(0.8), c(0.6)]
        );

        // CNOT, control qubit 1, target qubit 0
        let cnot: Vec<usize> = (0..4).map(|i| if i & 2 != 0 { i ^ 1 } else { i }).collect();
        let cnot = BasisPermutation::new(cnot).unwrap();
        let ten = RegisterState::basis_state(2, 0b10).unwrap();
        assert_eq!(
            ten.apply_permutation(&cnot).unwrap(),
            RegisterState::basis_state(2, 0b11).unwrap()
        );

        assert!(BasisPermutation::new(vec![0, 0]).is_err());
        assert!(BasisPermutation::new(vec![0, 2]).is_err());
        assert!(s.apply_permutation(&BasisPermutation::identity(4)).is_err());
    }

    #[test]
    fn reduced_density_examples() {
        // |01⟩: qubit 0 = 1
        let s = RegisterState::basis_state(2, 0b01).unwrap();
        let rho = s.reduced_density(&[0]).unwrap();
        assert_eq!(rho, DensityMatrix::diagonal(&[0.0, 1.0]).unwrap());

        let r = c(FRAC_1_SQRT_2);
        let bell = RegisterState::new(2, vec![r, c(0.0), c(0.0), r]).unwrap();
        let rho = bell.reduced_density(&[0]).unwrap();
        assert!(rho.max_abs_diff(&DensityMatrix::diagonal(&[0.5, 0.5]).unwrap()) < 1e-15);
        assert!((rho.purity() - 0.5).abs() < 1e-15);

        let plus0 = RegisterState::new(2, vec![r, r, c(0.0), c(0.0)]).unwrap();
        let rho = plus0.reduced_density(&[0]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((rho.get(i, j) - c(0.5)).norm() < 1e-15);
            }
        }

        assert!(matches!(bell.reduced_density(&[]), Err(Error::Domain(_))));
        assert!(bell.reduced_density(&[2]).is_err());
        assert!(bell.reduced_density(&[0, 0]).is_err());
    }

    #[test]
    fn keep_order_defines_reduced_bits() {
        let s = RegisterState::basis_state(3, 0b001).unwrap();
        let rho = s.reduced_density(&[2, 0]).unwrap();
        // qubit 2 → bit 0 (value 0), qubit 0 → bit 1 (value 1)
        assert_eq!(rho.get(2, 2), c(1.0));
    }

    #[test]
    fn purity_examples() {
        assert_eq!(DensityMatrix::diagonal(&[1.0, 0.0]).unwrap().purity(), 1.0);
        assert_eq!(DensityMatrix::diagonal(&[0.5, 0.5]).unwrap().purity(), 0.5);
        assert_eq!(
            DensityMatrix::diagonal(&[0.25, 0.75]).unwrap().purity(),
            0.625
        );
    }

    #[test]
    fn density_validation() {
        assert!(DensityMatrix::diagonal(&[0.5, 0.6]).is_err());
        let bad = vec![c(0.5), C64::new(0.0, 0.1), C64::new(0.0, 0.1), c(0.5)];
        assert!(DensityMatrix::new(2, bad).is_err());
        assert!(DensityMatrix::diagonal(&[0.5, 0.5])
            .unwrap()
            .is_positive_semidefinite(1e-10));
        assert!(!DensityMatrix::diagonal(&[1.5, -0.5])
            .unwrap()
            .is_positive_semidefinite(1e-10));
    }

    #[test]
    fn norm_preservation_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let n = rng.gen_range(1..=6);
            let s = random_state(&mut rng, n);
            let q = rng.gen_range(0..n);
            let out = s.apply_single_qubit(q, &random_unitary(&mut rng)).unwrap();
            assert!((out.norm2() - 1.0).abs() <= 1e-12);

            let mut map: Vec<usize> = (0..1 << n).collect();
            for i in (1..map.len()).rev() {
                map.swap(i, rng.gen_range(0..=i));
            }
            let p = BasisPermutation::new(map).unwrap();
            let moved = s.apply_permutation(&p).unwrap();
            assert!((moved.norm2() - 1.0).abs() <= 1e-12);
            let back = moved.apply_permutation(&p.inverse()).unwrap();
            assert_eq!(back, s);
        }
    }

    #[test]
    fn full_reduction_is_pure_projector() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=5 {
            let s = random_state(&mut rng, n);
            let all: Vec<usize> = (0..n).collect();
            let rho = s.reduced_density(&all).unwrap();
            assert!(rho.max_abs_diff(&DensityMatrix::pure(&s)) < 1e-15);
            assert!((rho.purity() - 1.0).abs() < 1e-12);

            let part = s.reduced_density(&[0]).unwrap();
            assert!(part.hermiticity_defect() < 1e-12);
            assert!((part.trace().re - 1.0).abs() < 1e-12);
            assert!(part.is_positive_semidefinite(1e-10));
            let p = part.purity();
            assert!((0.5 - 1e-10..=1.0 + 1e-10).contains(&p));
        }
    }

    #[test]
    fn tensor_places_high_register_above() {
        let low = RegisterState::basis_state(1, 1).unwrap();
        let high = RegisterState::basis_state(2, 2).unwrap();
        let s = low.tensor(&high).unwrap();
        assert_eq!(s, RegisterState::basis_state(3, 0b101).unwrap());
    }
}
