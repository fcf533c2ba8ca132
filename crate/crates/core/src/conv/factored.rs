use std::fmt;

use num_traits::Zero;

use crate::exact::{rat, Poly, RatFun};
use crate::ore::ShiftOp;
use crate::seqrep::{Evaluator, Seq, SeqError};

/// Product `F_1 F_2 ⋯ F_r` of first-order operators that annihilates a
/// sequence for all `n ≥ valid_from`. No factors means the identity, which
/// only annihilates the zero sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredAnnihilator {
    pub factors: Vec<ShiftOp>,
    pub valid_from: u64,
}

fn pole_bound(l: &ShiftOp) -> u64 {
    l.terms().values().filter_map(|c| c.max_natural_pole()).map(|p| p + 1).max().unwrap_or(0)
}

impl FactoredAnnihilator {
    pub fn identity() -> Self {
        FactoredAnnihilator { factors: Vec::new(), valid_from: 0 }
    }

    pub fn first_order(l: ShiftOp, valid_from: u64) -> Self {
        assert!(l.max_exp() == 1 && l.min_exp() >= 0, "factor of order one expected");
        let v = valid_from.max(pole_bound(&l));
        FactoredAnnihilator { factors: vec![l], valid_from: v }
    }

    pub fn order(&self) -> usize {
        self.factors.len()
    }

    pub fn compose(&self) -> ShiftOp {
        self.factors.iter().fold(ShiftOp::one(), |acc, f| &acc * f)
    }

    fn with_bound(mut self) -> Self {
        for f in &self.factors {
            self.valid_from = self.valid_from.max(pole_bound(f));
        }
        self
    }

    /// Annihilator of `E^k x` for `k ≥ 0`, or of `E_0^{-1} x` for `k = -1`.
    pub fn shift(&self, k: i64) -> Self {
        assert!(k >= -1);
        let factors = self.factors.iter().map(|f| f.shift_coeffs(k)).collect();
        let v = if k >= 0 { self.valid_from.saturating_sub(k as u64) } else { self.valid_from + 1 };
        FactoredAnnihilator { factors, valid_from: v }.with_bound()
    }

    /// `E_0^{-k} x`.
    pub fn inv_shift_zero(&self, k: u64) -> Self {
        (0..k).fold(self.clone(), |acc, _| acc.shift(-1))
    }

    /// Annihilator of the partial sums of `x`.
    pub fn psum(&self) -> Self {
        let mut factors: Vec<ShiftOp> = self.factors.iter().map(|f| f.shift_coeffs(1)).collect();
        factors.push(&ShiftOp::e(1) - &ShiftOp::one());
        FactoredAnnihilator { factors, valid_from: self.valid_from.saturating_sub(1) }.with_bound()
    }

    /// Annihilator of `f·x` where `f_{n+1} = ratio(n) f_n` and `f_n ≠ 0`
    /// for `n ≥ nonzero_from`.
    pub fn conj(&self, ratio: &RatFun, nonzero_from: u64) -> Self {
        if self.factors.is_empty() {
            return self.clone();
        }
        let factors = self
            .factors
            .iter()
            .map(|f| ShiftOp::from_terms([(0, f.coeff(0)), (1, &f.coeff(1) / ratio)]))
            .collect();
        let mut v = self.valid_from.max(nonzero_from);
        if let Some(p) = ratio.max_natural_pole() {
            v = v.max(p + 1);
        }
        if let Some(z) = ratio.num().max_natural_root() {
            v = v.max(z + 1);
        }
        FactoredAnnihilator { factors, valid_from: v }.with_bound()
    }

    /// Annihilator of `g(n)·x` for a polynomial `g`.
    pub fn times_poly(&self, g: &Poly) -> Self {
        if g.is_constant() {
            return self.clone();
        }
        self.conj(&RatFun::new(g.shift_i(1), g.clone()), g.natural_root_bound())
    }

    /// Factored annihilator of sums `x + y`: `M_1 ⋯ M_r · B` where `B` is the
    /// operand of larger order and `M_k` are monic first-order factors.
    pub fn lclm(&self, o: &Self) -> Self {
        if self.factors.is_empty() {
            return FactoredAnnihilator { factors: o.factors.clone(), valid_from: o.valid_from.max(self.valid_from) };
        }
        if o.factors.is_empty() {
            return FactoredAnnihilator { factors: self.factors.clone(), valid_from: o.valid_from.max(self.valid_from) };
        }
        let (big, small) = if self.order() >= o.order() { (self, o) } else { (o, self) };
        if big.factors.ends_with(&small.factors) {
            return FactoredAnnihilator { factors: big.factors.clone(), valid_from: big.valid_from.max(small.valid_from) };
        }
        // lclm(A_k ⋯ A_r, B) = V_k ⋯ V_r B, peeling one factor of A at a time:
        // lclm(A_k, U) = V U = W A_k, then U ← W.
        let mut u = big.compose();
        let mut fs = Vec::new();
        for a in small.factors.iter().rev() {
            let (q, r) = u.right_divrem(a);
            if r.is_zero() {
                u = q;
                continue;
            }
            let rc = r.coeff(0);
            let c = -&(&(&rc.shift_i(1) * &a.coeff(0)) / &(&a.coeff(1) * &rc));
            let v = ShiftOp::first_order(RatFun::one(), c);
            let (w, rem) = (&v * &u).right_divrem(a);
            debug_assert!(rem.is_zero());
            fs.push(v);
            u = w;
        }
        fs.reverse();
        let mut factors = fs;
        factors.extend(big.factors.iter().cloned());
        let mut out = FactoredAnnihilator { factors, valid_from: big.valid_from.max(small.valid_from) }.with_bound();
        out.valid_from = out.valid_from.max(pole_bound(&u));
        out
    }

    /// Makes the annihilator valid from `n = 0` by clearing denominators and
    /// left-multiplying the first factor by `Π (n - n0)` over the failing
    /// indices below `valid_from`.
    pub fn finalize(&self, e: &Seq) -> Result<Self, SeqError> {
        if self.factors.is_empty() {
            return Ok(self.clone());
        }
        let l = self.compose();
        let d = l.common_denominator();
        let lc = l.lmul(&RatFun::from(d.clone()));
        let top = lc.max_exp().max(0) as usize;
        let vals = Evaluator::new().prefix(e, self.valid_from as usize + top + 1)?;
        let mut fix = d;
        for n in 0..self.valid_from as i64 {
            let v = lc.apply_padded(&vals, n).map_err(|_| SeqError::UndefinedTerm(n as u64))?;
            if !v.is_zero() {
                fix = &fix * &Poly::linear_root(&rat(n));
            }
        }
        let mut factors = self.factors.clone();
        factors[0] = factors[0].lmul(&RatFun::from(fix));
        Ok(FactoredAnnihilator { factors, valid_from: 0 })
    }

    /// First-order factors up to left units, for comparisons.
    pub fn eq_factors_up_to_unit(&self, other: &[ShiftOp]) -> bool {
        self.factors.len() == other.len() && self.factors.iter().zip(other).all(|(a, b)| a.eq_up_to_unit(b))
    }
}

impl fmt::Display for FactoredAnnihilator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.factors.iter().map(|x| format!("({x})")).collect();
        f.write_str(&parts.join("*"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::first_violation;
    use crate::exact::Rat;
    use crate::seqrep::*;

    fn geo(c: i64) -> FactoredAnnihilator {
        FactoredAnnihilator::first_order(ShiftOp::first_order(RatFun::one(), RatFun::from_int(c)), 0)
    }

    #[test]
    fn factored_lclm_annihilates_sums() {
        let f = FactoredAnnihilator::first_order(
            ShiftOp::first_order(RatFun::one(), RatFun::from(Poly::from_ints(&[1, 1]))),
            0,
        );
        let a = f.psum();
        let s = a.lclm(&geo(3));
        assert_eq!(s.order(), 3);
        let fact = hyper(Poly::from_ints(&[1, 1]), Poly::one(), vec![rat(1)]);
        let e = add(psum(fact), hyper(Poly::constant(rat(3)), Poly::one(), vec![rat(2)]));
        let s = s.finalize(&e).unwrap();
        assert!(first_violation(&s.compose(), &e, 0, 40).unwrap().is_none());
        assert!(s.factors.iter().all(|x| x.max_exp() == 1));
    }

    #[test]
    fn conjugation_and_shifts() {
        let h = psum(rational(RatFun::new(Poly::one(), Poly::from_ints(&[1, 1])), vec![]));
        let fa = FactoredAnnihilator::first_order(
            ShiftOp::first_order(RatFun::from(Poly::from_ints(&[2, 1])), RatFun::from(Poly::from_ints(&[1, 1]))),
            0,
        )
        .psum();
        let g = Poly::from_ints(&[-3, 1]);
        let e = product(poly_seq(g.clone()), h.clone());
        let t = fa.times_poly(&g).finalize(&e).unwrap();
        assert!(first_violation(&t.compose(), &e, 0, 30).unwrap().is_none());
        let e2 = inv_shift_zero(h.clone(), 3);
        let t2 = fa.inv_shift_zero(3).finalize(&e2).unwrap();
        assert!(first_violation(&t2.compose(), &e2, 0, 30).unwrap().is_none());
        let e3 = shift(h, 2);
        let t3 = fa.shift(2).finalize(&e3).unwrap();
        assert!(first_violation(&t3.compose(), &e3, 0, 30).unwrap().is_none());
        let _ = Rat::zero();
    }
}
