//! Closed forms for convolutions of d'Alembertian and Liouvillian sequences.

pub mod driver;
pub mod factored;
pub mod main_step;
pub mod typed;

pub use driver::{conv_dalembert, conv_liouvillian, ConvResult};
pub use factored::FactoredAnnihilator;
pub use main_step::{solve_first_order, unshift_conv, CaseTag, ConvPiece, ConvSolver, MainStepResult};
pub use typed::{hyper_tail, phi_tail, HyperAtom, HyperNest, Phi, PhiNest};

use crate::exact::ExactError;
use crate::seqrep::SeqError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConvError {
    #[error("neither operand is rationally d'Alembertian: {0}")]
    NotRationallyDAlembertian(String),
    #[error("leading coefficient vanishes on the naturals: {0}")]
    SingularLeading(String),
    #[error("irregular input: {0}")]
    IrregularInput(String),
    #[error("{0}")]
    IrreducibleDenominator(String),
    #[error(transparent)]
    Seq(#[from] SeqError),
}

impl From<ExactError> for ConvError {
    fn from(e: ExactError) -> Self {
        ConvError::IrreducibleDenominator(e.to_string())
    }
}
