use num_traits::Zero;

use crate::exact::Rat;

use super::eval::{cauchy, Evaluator};
use super::expr::Seq;
use super::SeqError;

/// Power series prefix `Σ_{k ≤ N} c_k x^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    pub coeffs: Vec<Rat>,
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<Rat>) -> Self {
        assert!(!coeffs.is_empty(), "series keeps at least the constant term");
        TruncatedSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().min(o.coeffs.len());
        TruncatedSeries::new((0..n).map(|k| &self.coeffs[k] + &o.coeffs[k]).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        TruncatedSeries::new(cauchy(&self.coeffs, &o.coeffs))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        TruncatedSeries::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `x^k · g`, same truncation order.
    pub fn mul_x_pow(&self, k: usize) -> Self {
        let n = self.coeffs.len();
        TruncatedSeries::new((0..n).map(|i| if i < k { Rat::zero() } else { self.coeffs[i - k].clone() }).collect())
    }

    /// `g(x^m)`, same truncation order.
    pub fn subs_x_pow(&self, m: usize) -> Self {
        let n = self.coeffs.len();
        TruncatedSeries::new((0..n).map(|i| if i % m == 0 { self.coeffs[i / m].clone() } else { Rat::zero() }).collect())
    }
}

/// Truncated generating series of `e` up to `x^n`.
pub fn gseries(e: &Seq, n: usize) -> Result<TruncatedSeries, SeqError> {
    Ok(TruncatedSeries::new(Evaluator::new().prefix(e, n + 1)?))
}
