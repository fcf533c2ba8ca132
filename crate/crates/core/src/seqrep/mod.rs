//! Symbolic sequence representations, their exact evaluation and the
//! rewriting into nested sums of atoms.

pub mod atoms;
pub mod eval;
pub mod expr;
pub mod normalize;
pub mod series;

pub use atoms::{msect_atom, msect_seq};
pub use eval::Evaluator;
pub use expr::*;
pub use normalize::{flatten, normalize_from, normalize_to_regular, zeta_adjust, zeta_adjust_from, Normalized};
pub use series::{gseries, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeqError {
    #[error("term {0} is undefined")]
    UndefinedTerm(u64),
    #[error("invalid atom: {0}")]
    InvalidAtom(String),
    #[error("unsupported representation: {0}")]
    Unsupported(String),
}
