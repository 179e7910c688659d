//! Exact computation and verification of determinants with Jacobi-symbol
//! entries and the character sums behind them.

pub mod charmatrix;
pub mod error;
pub mod exactla;
pub mod finitefield;
pub mod modarith;
pub mod polyalg;
pub mod quadforms;
pub mod quintic;
pub mod repcong;
pub mod verify;

pub use error::{Error, Result};

/// Serializes arbitrary-precision integers as exact decimal strings.
pub(crate) mod decimal {
    use num_bigint::BigInt;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(v)
    }
}
