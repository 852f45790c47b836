//! Reversible lifts of classical functions.
//!
//! An arbitrary `f: {0,1}^n → {0,1}^m` becomes the bijection
//! `(x, y) ↦ (x, f(x) ⊖ y)` on `n + m` bits, where `⊖` is bitwise XOR or
//! subtraction modulo `2^m`. Both choices are involutions, and on `y = 0`
//! the lift writes `f(x)` into the output field.

use alloc::{format, vec, vec::Vec};

use crate::qubit::BasisPermutation;
use crate::{Error, Result};

/// Upper bound on `n_in + m_out` for exhaustive construction.
pub const MAX_PAIR_BITS: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `y' = f(x) XOR y`
    Xor,
    /// `y' = (f(x) − y) mod 2^m`
    ModSub,
}

impl Mode {
    fn combine(self, fx: u64, y: u64, m_out: u32) -> u64 {
        match self {
            Mode::Xor => fx ^ y,
            Mode::ModSub => fx.wrapping_sub(y) & mask(m_out),
        }
    }
}

fn mask(bits: u32) -> u64 {
    if bits >= 64 {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    n_in: u32,
    m_out: u32,
    outputs: Vec<u64>,
}

impl TruthTable {
    pub fn new(n_in: u32, m_out: u32, outputs: Vec<u64>) -> Result<Self> {
        if n_in > MAX_PAIR_BITS || m_out > MAX_PAIR_BITS {
            return Err(Error::Resource(format!(
                "table shape {n_in}→{m_out} exceeds {MAX_PAIR_BITS} bits per side"
            )));
        }
        if m_out == 0 {
            return Err(Error::Validation("m_out must be at least 1".into()));
        }
        let rows = 1usize << n_in;
        if outputs.len() != rows {
            return Err(Error::Validation(format!(
                "outputs has {} entries, expected 2^{n_in} = {rows}",
                outputs.len()
            )));
        }
        if let Some(i) = outputs.iter().position(|&v| v > mask(m_out)) {
            return Err(Error::Validation(format!(
                "outputs[{i}] = {} does not fit in {m_out} bits",
                outputs[i]
            )));
        }
        Ok(Self {
            n_in,
            m_out,
            outputs,
        })
    }

    pub fn from_fn(n_in: u32, m_out: u32, f: impl FnMut(u64) -> u64) -> Result<Self> {
        if n_in > MAX_PAIR_BITS {
            return Err(Error::Resource(format!("{n_in} input bits is too many")));
        }
        Self::new(n_in, m_out, (0..1u64 << n_in).map(f).collect())
    }

    pub fn and() -> Self {
        Self::new(2, 1, vec![0, 0, 0, 1]).unwrap()
    }

    pub fn or() -> Self {
        Self::new(2, 1, vec![0, 1, 1, 1]).unwrap()
    }

    pub fn xor() -> Self {
        Self::new(2, 1, vec![0, 1, 1, 0]).unwrap()
    }

    /// `k`-bit adder: input `a | b << k`, output `a + b` on `k + 1` bits.
    pub fn adder(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::Validation("adder width must be at least 1".into()));
        }
        Self::from_fn(2 * k, k + 1, |x| (x & mask(k)) + (x >> k))
    }

    pub fn constant(n_in: u32, m_out: u32, value: u64) -> Result<Self> {
        Self::from_fn(n_in, m_out, |_| value)
    }

    pub fn n_in(&self) -> u32 {
        self.n_in
    }

    pub fn m_out(&self) -> u32 {
        self.m_out
    }

    pub fn outputs(&self) -> &[u64] {
        &self.outputs
    }

    pub fn eval(&self, x: u64) -> Result<u64> {
        self.outputs
            .get(usize::try_from(x).unwrap_or(usize::MAX))
            .copied()
            .ok_or_else(|| Error::Domain(format!("input {x} out of range for {} bits", self.n_in)))
    }
}

/// Direct arithmetic evaluation of `(x, y) ↦ (x, f(x) ⊖ y)`.
pub fn eval_forward(tt: &TruthTable, mode: Mode, x: u64, y: u64) -> Result<(u64, u64)> {
    if y > mask(tt.m_out) {
        return Err(Error::Domain(format!(
            "y = {y} out of range for {} bits",
            tt.m_out
        )));
    }
    let fx = tt.eval(x)?;
    Ok((x, mode.combine(fx, y, tt.m_out)))
}

/// Outcome of an involution check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Involution {
    Holds,
    /// `p(p(x, y)) ≠ (x, y)` for this pair.
    Violated {
        x: u64,
        y: u64,
    },
}

impl Involution {
    pub fn holds(self) -> bool {
        self == Involution::Holds
    }
}

/// A bijection on pairs `(x, y)` that leaves `x` fixed. Pair `(x, y)` is
/// stored at index `x | y << n_in`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReversiblePermutation {
    n_in: u32,
    m_out: u32,
    /// `None` for hand-built maps.
    mode: Option<Mode>,
    map: Vec<u32>,
}

impl ReversiblePermutation {
    pub fn build(tt: &TruthTable, mode: Mode) -> Result<Self> {
        let bits = tt.n_in + tt.m_out;
        if bits > MAX_PAIR_BITS {
            return Err(Error::Resource(format!(
                "{bits} pair bits exceeds the exhaustive limit of {MAX_PAIR_BITS}"
            )));
        }
        let mut map = Vec::with_capacity(1 << bits);
        for y in 0..1u64 << tt.m_out {
            for (x, &fx) in tt.outputs.iter().enumerate() {
                let y2 = mode.combine(fx, y, tt.m_out);
                map.push((x as u64 | y2 << tt.n_in) as u32);
            }
        }
        Self::checked(tt.n_in, tt.m_out, Some(mode), map)
    }

    /// Wraps an explicit map, checking bijectivity and that `x` is fixed.
    pub fn from_map(n_in: u32, m_out: u32, map: Vec<u32>) -> Result<Self> {
        if n_in + m_out > MAX_PAIR_BITS {
            return Err(Error::Resource(format!(
                "{} pair bits exceeds {MAX_PAIR_BITS}",
                n_in + m_out
            )));
        }
        if map.len() != 1 << (n_in + m_out) {
            return Err(Error::Validation(format!(
                "map has {} entries, expected {}",
                map.len(),
                1u64 << (n_in + m_out)
            )));
        }
        Self::checked(n_in, m_out, None, map)
    }

    fn checked(n_in: u32, m_out: u32, mode: Option<Mode>, map: Vec<u32>) -> Result<Self> {
        let xmask = mask(n_in) as u32;
        let mut seen = vec![false; map.len()];
        for (i, &j) in map.iter().enumerate() {
            if j as usize >= map.len() || core::mem::replace(&mut seen[j as usize], true) {
                return Err(Error::Validation(format!(
                    "map is not a bijection at index {i}"
                )));
            }
            if j & xmask != i as u32 & xmask {
                return Err(Error::Validation(format!(
                    "map changes the x field at index {i}"
                )));
            }
        }
        Ok(Self {
            n_in,
            m_out,
            mode,
            map,
        })
    }

    pub fn n_in(&self) -> u32 {
        self.n_in
    }

    pub fn m_out(&self) -> u32 {
        self.m_out
    }

    pub fn mode(&self) -> Option<Mode> {
        self.mode
    }

    pub fn apply(&self, x: u64, y: u64) -> (u64, u64) {
        let j = self.map[(x | y << self.n_in) as usize] as u64;
        (j & mask(self.n_in), j >> self.n_in)
    }

    /// Exhaustive check of `p ∘ p = id`, reporting the first failing pair.
    pub fn check_involution(&self) -> Involution {
        for (i, &j) in self.map.iter().enumerate() {
            if self.map[j as usize] as usize != i {
                return Involution::Violated {
                    x: i as u64 & mask(self.n_in),
                    y: i as u64 >> self.n_in,
                };
            }
        }
        Involution::Holds
    }

    /// Embeds the map into an `n_total`-qubit register: bit `i` of `x` is
    /// qubit `x_qubits[i]`, bit `i` of `y` is qubit `y_qubits[i]`, and every
    /// other qubit is left alone.
    pub fn as_register_permutation(
        &self,
        x_qubits: &[usize],
        y_qubits: &[usize],
        n_total: usize,
    ) -> Result<BasisPermutation> {
        if x_qubits.len() != self.n_in as usize || y_qubits.len() != self.m_out as usize {
            return Err(Error::Validation(format!(
                "expected {} x qubits and {} y qubits, got {} and {}",
                self.n_in,
                self.m_out,
                x_qubits.len(),
                y_qubits.len()
            )));
        }
        if n_total > crate::qubit::MAX_QUBITS {
            return Err(Error::Resource(format!("{n_total} qubits is too many")));
        }
        let mut used = 0usize;
        for &q in x_qubits.iter().chain(y_qubits) {
            if q >= n_total {
                return Err(Error::Validation(format!(
                    "qubit {q} out of range for {n_total} qubits"
                )));
            }
            if used & 1 << q != 0 {
                return Err(Error::Validation(format!("qubit {q} is used twice")));
            }
            used |= 1 << q;
        }
        let gather = |idx: usize, qs: &[usize]| {
            qs.iter()
                .enumerate()
                .fold(0u64, |acc, (i, &q)| acc | ((idx >> q & 1) as u64) << i)
        };
        let scatter = |v: u64, qs: &[usize]| {
            qs.iter()
                .enumerate()
                .fold(0usize, |acc, (i, &q)| acc | ((v >> i & 1) as usize) << q)
        };
        let map = (0..1usize << n_total)
            .map(|idx| {
                let (x, y) = self.apply(gather(idx, x_qubits), gather(idx, y_qubits));
                (idx & !used) | scatter(x, x_qubits) | scatter(y, y_qubits)
            })
            .collect();
        BasisPermutation::new(map)
    }
}
