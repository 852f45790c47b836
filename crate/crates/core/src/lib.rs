//! Exact simulation of ancilla erasure into a continuous history variable.
//!
//! A qubit register is joined to one continuous-variable (CV) mode whose
//! wavefunction is piecewise constant on dyadic cells. In that class the
//! conditional translation, conditional flip and squeeze operators act
//! without approximation, so the erasure
//! `(α|0⟩ + β|1⟩) ⊗ ψ(x) ↦ |0⟩ ⊗ √2(αψ(2x) + βψ(2x − 1))`
//! can be checked cell by cell.
//!
//! Basis ordering everywhere: qubit 0 is the least significant bit of a
//! basis index.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod dyadic;
mod error;
pub mod hybrid;
pub mod processor;
pub mod qubit;
pub mod revcomp;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// Default bound on the dyadic level of the CV mode.
pub const DEFAULT_MAX_LEVEL: u32 = 24;

/// Default bound on the number of stored joint amplitudes (`2^n · K`).
pub const DEFAULT_MAX_AMPLITUDES: usize = 1 << 26;

#[inline]
pub(crate) fn is_finite(z: C64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
