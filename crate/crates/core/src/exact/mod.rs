//! Exact arithmetic over the rationals: numbers, polynomials, rational
//! functions, root finding, partial fractions and small linear algebra.

pub mod linalg;
mod modgcd;
pub mod partial;
pub mod poly;
pub mod rat;
pub mod ratfun;
pub mod roots;

pub use partial::{partial_fractions, PartialFractionForm};
pub use poly::Poly;
pub use rat::{falling_power, frac, rat, Rat};
pub use ratfun::RatFun;
pub use roots::rational_roots;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("zero polynomial has no finite root set")]
    ZeroPolynomial,
    #[error("denominator {0} does not split into rational linear factors")]
    IrreducibleDenominator(String),
}
