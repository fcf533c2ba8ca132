use num_traits::{One, Zero};

use crate::exact::rat::{binomial, from_big, pow_i, rat};
use crate::exact::{partial_fractions, Poly, Rat, RatFun};
use crate::ore::ShiftOp;
use crate::seqrep::atoms::{msect_seq, quasi_rational_view};
use crate::seqrep::*;

use super::ConvError;

/// Regular hypergeometric atom: `q(n) h_{n+1} = p(n) h_n` with `q` free of
/// roots in ℕ, starting at `h0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HyperAtom {
    pub p: Poly,
    pub q: Poly,
    pub h0: Rat,
}

impl HyperAtom {
    pub fn new(p: Poly, q: Poly, h0: Rat) -> HyperAtom {
        if h0.is_zero() {
            return HyperAtom { p: Poly::zero(), q: Poly::one(), h0 };
        }
        let g = p.gcd(&q);
        let (p, q) = if g.is_constant() { (p, q) } else { (p.div_exact(&g).unwrap(), q.div_exact(&g).unwrap()) };
        let l = q.lead().recip();
        HyperAtom { p: p.scale(&l), q: q.scale(&l), h0 }
    }

    pub fn is_zero(&self) -> bool {
        self.h0.is_zero()
    }

    pub fn to_seq(&self) -> Seq {
        hyper(self.p.clone(), self.q.clone(), vec![self.h0.clone()])
    }

    pub fn ratio(&self) -> RatFun {
        RatFun::new(self.p.clone(), self.q.clone())
    }

    pub fn ann(&self) -> ShiftOp {
        ShiftOp::first_order(RatFun::from(self.q.clone()), RatFun::from(self.p.clone()))
    }

    /// First index from which all terms are nonzero.
    pub fn nonzero_from(&self) -> u64 {
        self.p.natural_root_bound()
    }

    pub fn value(&self, n: u64) -> Rat {
        let mut h = self.h0.clone();
        for k in 0..n as i64 {
            if h.is_zero() {
                break;
            }
            h = h * self.p.eval_i(k) / self.q.eval_i(k);
        }
        h
    }

    /// `h_{n+s}`
    pub fn shifted(&self, s: u64) -> HyperAtom {
        let c = rat(s as i64);
        HyperAtom::new(self.p.shift(&c), self.q.shift(&c), self.value(s))
    }

    pub fn mul(&self, o: &HyperAtom) -> HyperAtom {
        HyperAtom::new(&self.p * &o.p, &self.q * &o.q, &self.h0 * &o.h0)
    }

    /// Multiplies by the polynomial `g` with `g(n+s) ≠ 0` on ℕ: the atom
    /// `g(n+s) h_n`.
    pub fn times_poly(&self, g: &Poly) -> HyperAtom {
        HyperAtom::new(&self.p * &g.shift_i(1), &self.q * g, &self.h0 * g.eval_i(0))
    }
}

/// `α^n n^j` or `α^n (n - β)^{-j}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Phi {
    pub alpha: Rat,
    pub form: QuasiForm,
}

impl Phi {
    pub fn to_seq(&self) -> Seq {
        quasi(self.alpha.clone(), self.form.clone())
    }

    pub fn ann(&self) -> ShiftOp {
        let (lead, tail) = match &self.form {
            QuasiForm::PolyPower(j) => (Poly::var().pow(*j), Poly::from_ints(&[1, 1]).pow(*j)),
            QuasiForm::PolePower(b, j) => {
                let x = Poly::linear_root(b);
                (x.shift_i(1).pow(*j), x.pow(*j))
            }
        };
        ShiftOp::first_order(RatFun::from(lead), RatFun::from(tail.scale(&self.alpha)))
    }

    pub fn ratio(&self) -> RatFun {
        let l = self.ann();
        &(-&l.coeff(0)) / &l.coeff(1)
    }

    pub fn nonzero_from(&self) -> u64 {
        match self.form {
            QuasiForm::PolyPower(j) if j > 0 => 1,
            _ => 0,
        }
    }

    pub fn degree(&self) -> u32 {
        match self.form {
            QuasiForm::PolyPower(j) | QuasiForm::PolePower(_, j) => j,
        }
    }

    /// `φ(n+s)` as a combination of forms with the same base.
    pub fn shifted(&self, s: u64) -> Vec<(Rat, Phi)> {
        let a_s = pow_i(&self.alpha, s as i64);
        match &self.form {
            QuasiForm::PolyPower(j) => (0..=*j)
                .map(|i| {
                    let c = &a_s * from_big(binomial(*j as u64, i as u64)) * pow_i(&rat(s as i64), (*j - i) as i64);
                    (c, Phi { alpha: self.alpha.clone(), form: QuasiForm::PolyPower(i) })
                })
                .filter(|(c, _)| !c.is_zero())
                .collect(),
            QuasiForm::PolePower(b, j) => {
                vec![(a_s, Phi { alpha: self.alpha.clone(), form: QuasiForm::PolePower(b - rat(s as i64), *j) })]
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HyperNest {
    pub atoms: Vec<HyperAtom>,
    pub offsets: Vec<u64>,
}

impl HyperNest {
    pub fn depth(&self) -> usize {
        self.atoms.len()
    }

    pub fn to_seq(&self) -> Seq {
        nested(self.atoms.iter().map(|a| a.to_seq()).collect(), self.offsets.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.iter().any(|a| a.is_zero())
    }

    /// `E(a)`: the first atom shifted, the first upper limit raised.
    pub fn shift1(&self) -> HyperNest {
        let mut atoms = self.atoms.clone();
        atoms[0] = atoms[0].shifted(1);
        let mut offsets = self.offsets.clone();
        if let Some(o) = offsets.first_mut() {
            *o += 1;
        }
        HyperNest { atoms, offsets }
    }

    /// Inner nest `ã` (`None` stands for `δ`).
    pub fn inner(&self) -> Option<HyperNest> {
        (self.depth() > 1).then(|| HyperNest { atoms: self.atoms[1..].to_vec(), offsets: self.offsets[1..].to_vec() })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PhiNest {
    pub phis: Vec<Phi>,
    pub offsets: Vec<u64>,
}

impl PhiNest {
    pub fn depth(&self) -> usize {
        self.phis.len()
    }

    pub fn to_seq(&self) -> Seq {
        nested(self.phis.iter().map(|a| a.to_seq()).collect(), self.offsets.clone())
    }

    pub fn inner(&self) -> Option<PhiNest> {
        (self.depth() > 1).then(|| PhiNest { phis: self.phis[1..].to_vec(), offsets: self.offsets[1..].to_vec() })
    }

    pub fn valuation(&self) -> u32 {
        self.phis.iter().map(|p| p.degree()).sum()
    }
}

fn not_rational(f: &Seq) -> ConvError {
    ConvError::NotRationallyDAlembertian(format!("{f} is not quasi-rational"))
}

/// Tail `E^N f` of an atom-like factor as a combination of regular
/// hypergeometric atoms (empty when the tail vanishes).
pub fn hyper_tail(f: &Seq, n: u64) -> Result<Vec<(Rat, HyperAtom)>, ConvError> {
    let nq = rat(n as i64);
    let one = |a: HyperAtom| if a.is_zero() { Vec::new() } else { vec![(Rat::one(), a)] };
    Ok(match &**f {
        SeqExpr::Hypergeom { p, q, .. } => {
            let hn = Evaluator::new().eval(f, n as usize)?;
            one(HyperAtom::new(p.shift(&nq), q.shift(&nq), hn))
        }
        SeqExpr::Rational { r, .. } => {
            if r.is_zero() {
                return Ok(Vec::new());
            }
            let (pp, qq) = (r.num().shift(&nq), r.den().shift(&nq));
            let p = &pp.shift_i(1) * &qq;
            let q = &pp * &qq.shift_i(1);
            let h0 = r.eval(&nq).ok_or(ConvError::IrregularInput(format!("{f} has a pole at {n}")))?;
            if h0.is_zero() || pp.natural_root_bound() > 0 || qq.natural_root_bound() > 0 {
                return Err(ConvError::IrregularInput(format!("{f} vanishes or has a pole beyond {n}")));
            }
            one(HyperAtom::new(p, q, h0))
        }
        SeqExpr::Quasi { alpha, form } => {
            let an = pow_i(alpha, n as i64);
            let (p, q, h0) = match form {
                QuasiForm::PolyPower(j) => {
                    let x = Poly::from_ints(&[n as i64, 1]);
                    (x.shift_i(1).pow(*j).scale(alpha), x.pow(*j), an * pow_i(&nq, *j as i64))
                }
                QuasiForm::PolePower(b, j) => {
                    let x = Poly::linear_root(&(b - &nq));
                    (x.pow(*j).scale(alpha), x.shift_i(1).pow(*j), an * pow_i(&(&nq - b), -(*j as i64)))
                }
            };
            one(HyperAtom::new(p, q, h0))
        }
        SeqExpr::Delta | SeqExpr::FinSupport(_) => Vec::new(),
        SeqExpr::Shift { inner, k } => hyper_tail(inner, n + k)?,
        SeqExpr::InvShift { inner, .. } => {
            if n == 0 {
                return Err(ConvError::IrregularInput(format!("{f} needs a positive threshold")));
            }
            hyper_tail(inner, n - 1)?
        }
        SeqExpr::Multisect { inner, m, r } => hyper_tail(&msect_seq(inner, *m, *r)?, n)?,
        SeqExpr::Product(a, b) => {
            let (x, y) = (hyper_tail(a, n)?, hyper_tail(b, n)?);
            let mut out = Vec::new();
            for (c, u) in &x {
                for (d, v) in &y {
                    let w = u.mul(v);
                    if !w.is_zero() {
                        out.push((c * d, w));
                    }
                }
            }
            out
        }
        SeqExpr::LinComb { coeffs, terms } => {
            let mut out = Vec::new();
            for (c, t) in coeffs.iter().zip(terms) {
                out.extend(hyper_tail(t, n)?.into_iter().map(|(d, a)| (c * d, a)));
            }
            out
        }
        _ => return Err(ConvError::IrregularInput(format!("{f} is not an atom"))),
    })
}

/// `E^N f` as `Σ α^n R(n)`.
fn quasi_rational_tail(f: &Seq, n: u64) -> Result<Vec<(Rat, RatFun)>, ConvError> {
    let nq = rat(n as i64);
    Ok(match &**f {
        SeqExpr::Delta | SeqExpr::FinSupport(_) => Vec::new(),
        SeqExpr::Shift { inner, k } => quasi_rational_tail(inner, n + k)?,
        SeqExpr::InvShift { inner, .. } => {
            if n == 0 {
                return Err(ConvError::IrregularInput(format!("{f} needs a positive threshold")));
            }
            quasi_rational_tail(inner, n - 1)?
        }
        SeqExpr::Multisect { inner, m, r } => quasi_rational_tail(&msect_seq(inner, *m, *r)?, n)?,
        SeqExpr::Product(a, b) => {
            let (x, y) = (quasi_rational_tail(a, n)?, quasi_rational_tail(b, n)?);
            let mut out = Vec::new();
            for (a1, r1) in &x {
                for (a2, r2) in &y {
                    out.push((a1 * a2, r1 * r2));
                }
            }
            out
        }
        SeqExpr::LinComb { coeffs, terms } => {
            let mut out = Vec::new();
            for (c, t) in coeffs.iter().zip(terms) {
                out.extend(quasi_rational_tail(t, n)?.into_iter().map(|(a, r)| (a, r.scale(c))));
            }
            out
        }
        SeqExpr::Hypergeom { p, .. } if p.is_zero() => Vec::new(),
        e => {
            let (alpha, r) = quasi_rational_view(e).ok_or_else(|| not_rational(f))?;
            if alpha.is_zero() {
                return Ok(Vec::new());
            }
            vec![(alpha.clone(), r.shift(&nq).scale(&pow_i(&alpha, n as i64)))]
        }
    })
}

/// Tail `E^N f` of a quasi-rational factor in partial-fraction form.
pub fn phi_tail(f: &Seq, n: u64) -> Result<Vec<(Rat, Phi)>, ConvError> {
    let mut out = Vec::new();
    for (alpha, r) in quasi_rational_tail(f, n)? {
        let pf = partial_fractions(&r)?;
        for (j, c) in pf.poly_part.coeffs().iter().enumerate() {
            if !c.is_zero() {
                out.push((c.clone(), Phi { alpha: alpha.clone(), form: QuasiForm::PolyPower(j as u32) }));
            }
        }
        for (b, j, c) in pf.pole_terms {
            if !c.is_zero() {
                out.push((c, Phi { alpha: alpha.clone(), form: QuasiForm::PolePower(b, j) }));
            }
        }
    }
    Ok(out)
}

/// True when every factor admits a quasi-rational tail.
pub fn is_quasi_rational_factor(f: &Seq) -> bool {
    quasi_rational_tail(f, 64).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vals(e: &Seq, n: usize) -> Vec<Rat> {
        Evaluator::new().prefix(e, n).unwrap()
    }

    fn combo<T>(ts: &[(Rat, T)], f: impl Fn(&T) -> Seq) -> Seq {
        lincomb(ts.iter().map(|(c, _)| c.clone()).collect(), ts.iter().map(|(_, t)| f(t)).collect())
    }

    #[test]
    fn tails_match_shifted_values() {
        let fs = vec![
            rational(RatFun::new(Poly::from_ints(&[-3, 1]), Poly::from_ints(&[-2, 1]).pow(2)), vec![rat(1), rat(2), rat(3)]),
            quasi(rat(2), QuasiForm::PolyPower(2)),
            quasi(crate::exact::frac(1, 3), QuasiForm::PolePower(crate::exact::frac(-1, 2), 2)),
            hyper(Poly::from_ints(&[1, 1]), Poly::from_ints(&[3, 1]), vec![rat(5)]),
            product(inv_shift(quasi(rat(3), QuasiForm::PolyPower(1)), rat(9)), rational(RatFun::new(Poly::one(), Poly::from_ints(&[1, 1])), vec![])),
        ];
        for f in &fs {
            for n in [4u64, 6] {
                let want = vals(&shift(f.clone(), n), 12);
                let h = hyper_tail(f, n).unwrap();
                assert_eq!(vals(&combo(&h, |a| a.to_seq()), 12), want, "{f}");
                if !matches!(**f, SeqExpr::Hypergeom { .. }) {
                    let p = phi_tail(f, n).unwrap();
                    assert_eq!(vals(&combo(&p, |a| a.to_seq()), 12), want, "{f}");
                }
            }
        }
    }

    #[test]
    fn hypergeometric_is_not_quasi_rational() {
        let f = hyper(Poly::from_ints(&[1, 1]), Poly::one(), vec![rat(1)]);
        assert!(!is_quasi_rational_factor(&f));
        assert!(matches!(phi_tail(&f, 0), Err(ConvError::NotRationallyDAlembertian(_))));
        let g = hyper(Poly::constant(rat(3)), Poly::constant(rat(2)), vec![rat(4)]);
        assert!(is_quasi_rational_factor(&g));
    }

    #[test]
    fn phi_shifts() {
        for phi in [
            Phi { alpha: rat(-2), form: QuasiForm::PolyPower(3) },
            Phi { alpha: rat(5), form: QuasiForm::PolePower(crate::exact::frac(7, 3), 2) },
        ] {
            let want = vals(&shift(phi.to_seq(), 4), 10);
            assert_eq!(vals(&combo(&phi.shifted(4), |a| a.to_seq()), 10), want);
            let l = phi.ann();
            let v = vals(&phi.to_seq(), 12);
            for n in 0..10 {
                assert!(l.apply_padded(&v, n).unwrap().is_zero());
            }
        }
    }
}
