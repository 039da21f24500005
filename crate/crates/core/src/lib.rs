//! Quantum data locking with Clifford-only pseudo-random circuits.
//!
//! An `n`-bit message `x` is encrypted as the stabilizer state `C_k|x>`,
//! where `C_k` is one of `K` public Clifford circuits and `k` is the
//! secret key. The crate provides:
//!
//! * [`stabilizer`]: a bit-packed tableau simulator with postselected
//!   measurement,
//! * [`dense`]: exact small-register linear algebra used for
//!   cross-checking and density-matrix analysis,
//! * [`sampling`]: two-qubit and `n`-qubit uniform Clifford draws and
//!   approximate 2-design circuits,
//! * [`design`]: moment estimation and design certification,
//! * [`protocol`]: codebooks, keys, encryption and decryption,
//! * [`security`]: tail bounds, key-length formulas and empirical checks.

pub mod bits;
pub mod dense;
pub mod design;
pub mod error;
pub mod fmt;
pub mod protocol;
pub mod sampling;
pub mod security;
pub mod stabilizer;

pub use bits::BitString;
pub use error::{Error, Result};
