//! Convolution factors for a hyperexponential left operand.

use std::fmt;

use crate::exact::{Poly, RatFun};
use crate::ore::{gauge_transform, iso_r, iso_rinv, DiffOp, ShiftOp};

/// Logarithmic derivative `g'/g` of the generating series of the left operand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperExpRate(pub RatFun);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HyperExpError {
    #[error("operator order {0} is below 2")]
    OrderTooSmall(usize),
}

/// Image of `L` under the isomorphism, followed by the gauge `D ↦ D + r`.
pub fn gauged_diff(l: &ShiftOp, r: &HyperExpRate) -> DiffOp {
    gauge_transform(&iso_r(l), &r.0)
}

/// `L'` with `L(ζ(a*b)) = 0 ⟺ L'(ζ(b)) = 0` whenever `g_a' = r g_a`.
pub fn hyperexp_factor(l: &ShiftOp, r: &HyperExpRate) -> Result<ShiftOp, HyperExpError> {
    let ord = l.order();
    if ord < 2 {
        return Err(HyperExpError::OrderTooSmall(ord));
    }
    Ok(iso_rinv(&gauged_diff(l, r)).canonical())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    /// Power of `E` pulled out on the left.
    pub e_power: i64,
    /// Polynomial content cancelled after removing the `E` power.
    pub content: Poly,
    pub reduced: ShiftOp,
    /// Integers where the cancelled content vanishes.
    pub affected: Vec<i64>,
    /// Indices `n ≥ 0` where the reduced leading coefficient vanishes.
    pub singular: Vec<u64>,
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E^{} * ({}) * [{}]", self.e_power, self.content, self.reduced)
    }
}

/// Strips the left `E` power and the polynomial content of `lp`.
pub fn reduce_padded(lp: &ShiftOp) -> Reduction {
    assert!(!lp.is_zero(), "reduce_padded on the zero operator");
    let e_power = lp.min_exp();
    let stripped = (&ShiftOp::e(-e_power) * lp).clear_denominators();
    let content = stripped.poly_content();
    let reduced = if content.is_constant() {
        stripped.canonical()
    } else {
        stripped.lmul(&RatFun::new(Poly::one(), content.clone())).canonical()
    };
    let mut affected = if content.is_constant() { Vec::new() } else { crate::exact::roots::integer_roots(&content) };
    affected.sort_unstable();
    affected.dedup();
    let lead = reduced.lead();
    let lead = lead.num().shift_i(-reduced.min_exp());
    let singular = crate::exact::roots::natural_roots(&lead);
    Reduction { e_power, content, reduced, affected, singular }
}
