//! Shift and differential operator algebras and the maps between them.

pub mod diff;
pub mod iso;
pub mod lclm;
pub mod shift;

pub use diff::{DiffOp, Laurent};
pub use iso::{gauge_transform, hyperexp_series, iso_r, iso_rinv, symmetric_product_diff};
pub use lclm::{hadamard, lclm};
pub use shift::ShiftOp;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OreError {
    #[error("coefficient has a pole at n = {0}")]
    PoleAtIndex(i64),
    #[error("index {0} lies outside the available terms")]
    OutOfRange(i64),
}
