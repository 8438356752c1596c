//! Exact chain-level algebraic surgery.
//!
//! Chain complexes of f.g. free modules over ℤ, ℚ and ℤ[ℤ/k] carrying
//! symmetric or quadratic Poincaré structures; the surgery effect and trace;
//! the cobordism-to-surgery-data construction; and the forms, lagrangians and
//! Witt invariants that surgery obstructions live in.
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the
//! command-line front end live in the companion `algsurg` crate.
#![no_std]
#![allow(clippy::needless_range_loop)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod complex;
pub mod error;
pub mod fixtures;
pub mod forms;
pub mod intmat;
pub mod matrix;
pub mod ring;
pub mod sampler;
pub mod structure;
pub mod surgery;

pub use complex::{ChainComplex, ChainHomotopy, ChainMap, Homology, Report};
pub use error::{Error, Result};
pub use forms::{EpsQuadraticForm, Formation, TrivialWitness, WittClassZ};
pub use matrix::Matrix;
pub use ring::{Parity, QClass, Ring, RingElem};
pub use structure::{
    Family, Kind, QuadraticCobordism, QuadraticComplex, QuadraticPair, SymmetricCobordism, SymmetricComplex,
    SymmetricPair,
};
pub use surgery::{RoundTrip, SurgeryOutcome};

/// `(−1)^e`.
#[inline]
pub(crate) fn sgn(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}
