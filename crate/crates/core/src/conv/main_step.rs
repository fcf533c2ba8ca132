use std::collections::HashMap;
use std::fmt;
use std::rc::Rc;

use num_traits::{One, Zero};

use crate::exact::rat::{binomial, from_big, rat};
use crate::exact::{Poly, Rat, RatFun};
use crate::ore::ShiftOp;
use crate::seqrep::*;

use super::factored::FactoredAnnihilator;
use super::typed::{HyperAtom, HyperNest, Phi, PhiNest};
use super::ConvError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CaseTag {
    Zero,
    /// `φ = α^n`
    Geometric,
    /// `φ = α^n n^j`
    PolyWeight(u32),
    /// `φ = α^n (n - β)^{-j}`
    Pole(Rat, u32),
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseTag::Zero => f.write_str("zero"),
            CaseTag::Geometric => f.write_str("case 1 (geometric)"),
            CaseTag::PolyWeight(j) => write!(f, "case 2 (polynomial weight, j = {j})"),
            CaseTag::Pole(b, j) => write!(f, "case 3 (pole at {}, j = {j})", crate::exact::rat::fmt_rat(b)),
        }
    }
}

/// `L0(a * b) = rhs` for the operator chosen by the case split.
#[derive(Clone, Debug)]
pub struct MainStepResult {
    pub l0: ShiftOp,
    pub rhs: Seq,
    pub case_tag: CaseTag,
}

/// A sequence with a factored annihilator.
#[derive(Clone, Debug)]
pub struct ConvPiece {
    pub seq: Seq,
    pub ann: FactoredAnnihilator,
}

impl ConvPiece {
    pub fn zero() -> Self {
        ConvPiece { seq: zero_seq(), ann: FactoredAnnihilator::identity() }
    }

    fn times(&self, c: &Rat, g: &Poly) -> ConvPiece {
        let g = g.scale(c);
        if g.is_zero() {
            return ConvPiece::zero();
        }
        let seq = if g.is_constant() {
            scale(g.coeff(0), self.seq.clone())
        } else {
            product(poly_seq(g.clone()), self.seq.clone())
        };
        ConvPiece { seq, ann: self.ann.times_poly(&g) }
    }

    fn inv_shift_zero(&self, k: u64) -> ConvPiece {
        ConvPiece { seq: inv_shift_zero(self.seq.clone(), k), ann: self.ann.inv_shift_zero(k) }
    }
}

fn sum_pieces(ps: Vec<ConvPiece>) -> ConvPiece {
    let ps: Vec<ConvPiece> = ps.into_iter().filter(|p| !p.ann.factors.is_empty()).collect();
    if ps.is_empty() {
        return ConvPiece::zero();
    }
    let mut ann = FactoredAnnihilator::identity();
    let mut terms = Vec::new();
    for p in &ps {
        ann = ann.lclm(&p.ann);
        terms.push(p.seq.clone());
    }
    let seq = if terms.len() == 1 { terms.pop().unwrap() } else { lincomb(vec![Rat::one(); terms.len()], terms) };
    ConvPiece { seq, ann }
}

fn nest_ann(levels: Vec<(ShiftOp, RatFun, u64)>, offsets: &[u64]) -> FactoredAnnihilator {
    let d = levels.len();
    let leaf = |(l, r, _): &(ShiftOp, RatFun, u64)| {
        if r.is_zero() {
            FactoredAnnihilator::first_order(ShiftOp::e(1), 0)
        } else {
            FactoredAnnihilator::first_order(l.clone(), 0)
        }
    };
    let mut f = leaf(&levels[d - 1]);
    for i in (0..d - 1).rev() {
        let (_, r, nz) = &levels[i];
        if r.is_zero() {
            f = leaf(&levels[i]);
            continue;
        }
        f = f.psum().shift(offsets[i] as i64).conj(r, *nz);
    }
    f
}

pub fn hyper_nest_ann(a: &HyperNest) -> FactoredAnnihilator {
    if a.is_zero() || a.depth() == 0 {
        return FactoredAnnihilator::identity();
    }
    nest_ann(a.atoms.iter().map(|h| (h.ann(), h.ratio(), h.nonzero_from())).collect(), &a.offsets)
}

pub fn phi_nest_ann(b: &PhiNest) -> FactoredAnnihilator {
    if b.depth() == 0 {
        return FactoredAnnihilator::identity();
    }
    nest_ann(b.phis.iter().map(|h| (h.ann(), h.ratio(), h.nonzero_from())).collect(), &b.offsets)
}

fn value0(e: &Seq) -> Result<Rat, ConvError> {
    Ok(Evaluator::new().eval(e, 0)?)
}

/// Solution of `q(n) y_{n+1} - p(n) y_n = f_n` with `y_0 = y0`.
pub fn solve_first_order(q: &Poly, p: &Poly, f: &Seq, y0: Rat) -> Result<Seq, ConvError> {
    if let Some(r) = q.max_natural_root() {
        return Err(ConvError::SingularLeading(format!("{q} vanishes at n = {r}")));
    }
    if p.is_zero() {
        let w = rational(RatFun::new(Poly::one(), q.clone()), vec![]);
        return Ok(inv_shift(product(w, f.clone()), y0));
    }
    match p.max_natural_root() {
        None => {
            let h = hyper(p.clone(), q.clone(), vec![Rat::one()]);
            let w = hyper(q.clone(), p.shift_i(1), vec![p.eval_i(0).recip()]);
            Ok(nested(vec![h, inv_shift(product(w, f.clone()), y0)], vec![0]))
        }
        Some(r) => {
            let n1 = r + 1;
            let fv = Evaluator::new().prefix(f, n1 as usize)?;
            let mut ys = vec![y0];
            for (n, fv) in fv.iter().enumerate() {
                let y = (fv + p.eval_i(n as i64) * &ys[n]) / q.eval_i(n as i64);
                ys.push(y);
            }
            let yn = ys.pop().unwrap();
            let z = solve_first_order(&q.shift_i(n1 as i64), &p.shift_i(n1 as i64), &shift(f.clone(), n1), yn)?;
            Ok(add(fin(ys), inv_shift_zero(z, n1)))
        }
    }
}

/// Recovers `a * b` from `X = E(a) * E(b)`.
pub fn unshift_conv(x: &Seq, a: &Seq, b: &Seq) -> Result<Seq, SeqError> {
    let mut ev = Evaluator::new();
    let av = ev.prefix(a, 2)?;
    let bv = ev.prefix(b, 2)?;
    let c0 = &av[0] * &bv[0];
    let c1 = &av[0] * &bv[1] + &av[1] * &bv[0];
    let inner = lincomb(
        vec![Rat::one(), av[0].clone(), bv[0].clone()],
        vec![x.clone(), shift(b.clone(), 2), shift(a.clone(), 2)],
    );
    Ok(inv_shift(inv_shift(inner, c1), c0))
}

/// `E^1` of the first atom of a nest, with the leading multiplier `g(n)`
/// applied after the shift: the nest `g(n+1) h_{n+1} Σ_{k ≤ n+1+η} …`.
fn shifted_head(a: &HyperNest, atom: HyperAtom) -> HyperNest {
    let mut offsets = a.offsets.clone();
    if let Some(o) = offsets.first_mut() {
        *o += 1;
    }
    let mut atoms = a.atoms.clone();
    atoms[0] = atom;
    HyperNest { atoms, offsets }
}

fn pow_var_shift(i: u32, s: i64) -> Poly {
    Poly::from_ints(&[s, 1]).pow(i)
}

type MemoEntry = Rc<(ConvPiece, MainStepResult)>;

/// Convolution of regular nests, memoized on the operand pair.
#[derive(Default)]
pub struct ConvSolver {
    memo: HashMap<(HyperNest, PhiNest), MemoEntry>,
}

impl ConvSolver {
    pub fn new() -> Self {
        ConvSolver::default()
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    pub fn conv_regular(&mut self, a: &HyperNest, b: &PhiNest) -> Result<MemoEntry, ConvError> {
        let key = (a.clone(), b.clone());
        if let Some(hit) = self.memo.get(&key) {
            return Ok(hit.clone());
        }
        let out = Rc::new(self.step(a, b)?);
        self.memo.insert(key, out.clone());
        Ok(out)
    }

    fn piece(&mut self, a: &HyperNest, b: &PhiNest) -> Result<ConvPiece, ConvError> {
        Ok(self.conv_regular(a, b)?.0.clone())
    }

    fn step(&mut self, a: &HyperNest, b: &PhiNest) -> Result<(ConvPiece, MainStepResult), ConvError> {
        if a.is_zero() || a.depth() == 0 || b.depth() == 0 {
            let main = MainStepResult { l0: ShiftOp::one(), rhs: zero_seq(), case_tag: CaseTag::Zero };
            return Ok((ConvPiece::zero(), main));
        }
        for h in &a.atoms {
            if let Some(r) = h.q.max_natural_root() {
                return Err(ConvError::IrregularInput(format!("atom denominator {} vanishes at {r}", h.q)));
            }
        }
        let y0 = value0(&a.to_seq())? * value0(&b.to_seq())?;
        let phi = &b.phis[0];
        let alpha = phi.alpha.clone();
        let xi = b.offsets.first().copied().unwrap_or(0);
        let h = &a.atoms[0];
        match phi.form.clone() {
            QuasiForm::PolyPower(0) => {
                let mut terms = Vec::new();
                let k = match b.inner() {
                    None => Rat::one(),
                    Some(inner) => Evaluator::new().prefix(&inner.to_seq(), xi as usize + 1)?.iter().sum(),
                };
                if !k.is_zero() {
                    let ea = ConvPiece { seq: shift(a.to_seq(), 1), ann: hyper_nest_ann(a).shift(1) };
                    terms.push(ea.times(&k, &Poly::one()));
                }
                if let Some(inner) = b.inner() {
                    let mut offsets = inner.offsets.clone();
                    if let Some(o) = offsets.first_mut() {
                        *o += xi + 1;
                    }
                    for (c, p2) in inner.phis[0].shifted(xi + 1) {
                        let mut phis = inner.phis.clone();
                        phis[0] = Phi { alpha: &alpha * &p2.alpha, form: p2.form };
                        let bp = PhiNest { phis, offsets: offsets.clone() };
                        terms.push(self.piece(a, &bp)?.times(&(&alpha * &c), &Poly::one()));
                    }
                }
                let rhs = sum_pieces(terms);
                let q0 = Poly::one();
                let p0 = Poly::constant(alpha.clone());
                self.finish(rhs, &q0, &p0, y0, CaseTag::Geometric)
            }
            QuasiForm::PolyPower(j) => {
                let mut phis = b.phis.clone();
                phis[0] = Phi { alpha: alpha.clone(), form: QuasiForm::PolyPower(0) };
                let c = PhiNest { phis, offsets: b.offsets.clone() };
                let h1 = h.value(1);
                let mut terms = Vec::new();
                for i in 0..=j {
                    let sign = if i % 2 == 0 { rat(1) } else { rat(-1) };
                    let coef = sign * from_big(binomial(j as u64, i as u64));
                    let g = Poly::var().pow(j - i);
                    let piece = if i == 0 {
                        self.piece(a, &c)?
                    } else {
                        let atom = HyperAtom::new(
                            &pow_var_shift(i, 2) * &h.p.shift_i(1),
                            &pow_var_shift(i, 1) * &h.q.shift_i(1),
                            h1.clone(),
                        );
                        self.piece(&shifted_head(a, atom), &c)?.inv_shift_zero(1)
                    };
                    terms.push(piece.times(&coef, &g));
                }
                let y = sum_pieces(terms);
                let main = MainStepResult { l0: ShiftOp::one(), rhs: y.seq.clone(), case_tag: CaseTag::PolyWeight(j) };
                Ok((y, main))
            }
            QuasiForm::PolePower(beta, j) => {
                let nb = -beta.clone();
                let pt = h.p.shift(&nb);
                let qt = h.q.shift(&nb);
                if let Some(r) = qt.max_natural_root() {
                    return Err(ConvError::SingularLeading(format!("{qt} vanishes at n = {r}")));
                }
                let mut terms = Vec::new();
                let a0 = value0(&a.to_seq())?;
                if !a0.is_zero() {
                    let mut phis = b.phis.clone();
                    phis[0] = Phi { alpha: alpha.clone(), form: QuasiForm::PolePower(&beta - rat(1), j) };
                    let mut offsets = b.offsets.clone();
                    if let Some(o) = offsets.first_mut() {
                        *o += 1;
                    }
                    let eb = PhiNest { phis, offsets };
                    let piece = ConvPiece { seq: eb.to_seq(), ann: phi_nest_ann(&eb) };
                    terms.push(piece.times(&(&a0 * &alpha), &qt));
                }
                if a.depth() >= 2 {
                    let eta = a.offsets[0];
                    let head = h.shifted(1).mul(&a.atoms[1].shifted(1 + eta));
                    let mut atoms = vec![head];
                    atoms.extend(a.atoms[2..].iter().cloned());
                    let mut offsets = a.offsets[1..].to_vec();
                    if let Some(o) = offsets.first_mut() {
                        *o += 1 + eta;
                    }
                    let ap = HyperNest { atoms, offsets };
                    terms.push(self.piece(&ap, b)?.times(&Rat::one(), &qt));
                }
                // P(k) = q(n-β) p(k) - p(n-β) q(k) = (k - t) Q(k), t = n - β
                let deg = h.p.degree().unwrap_or(0).max(h.q.degree().unwrap_or(0));
                let pk: Vec<Poly> = (0..=deg)
                    .map(|m| &qt.scale(&h.p.coeff(m)) - &pt.scale(&h.q.coeff(m)))
                    .collect();
                let t = &Poly::var() - &Poly::constant(beta.clone());
                let mut qk = vec![Poly::zero(); deg.max(1)];
                if deg >= 1 {
                    qk[deg - 1] = pk[deg].clone();
                    for m in (1..deg).rev() {
                        qk[m - 1] = &pk[m] + &(&t * &qk[m]);
                    }
                    debug_assert!((&pk[0] + &(&t * &qk[0])).is_zero());
                }
                let mut phis = b.phis.clone();
                let form = if j == 1 { QuasiForm::PolyPower(0) } else { QuasiForm::PolePower(beta.clone(), j - 1) };
                phis[0] = Phi { alpha: alpha.clone(), form };
                let bp = PhiNest { phis, offsets: b.offsets.clone() };
                let q0 = h.q.eval_i(0);
                let h1 = h.value(1);
                for (i, qi) in qk.iter().enumerate() {
                    let ci = -qi;
                    if ci.is_zero() {
                        continue;
                    }
                    let piece = if i == 0 {
                        let atom = HyperAtom::new(h.p.clone(), h.q.shift_i(1), &h.h0 / &q0);
                        let mut atoms = a.atoms.clone();
                        atoms[0] = atom;
                        self.piece(&HyperNest { atoms, offsets: a.offsets.clone() }, &bp)?
                    } else {
                        let atom = HyperAtom::new(
                            &pow_var_shift(i as u32, 2) * &h.p.shift_i(1),
                            &pow_var_shift(i as u32, 1) * &h.q.shift_i(2),
                            &h1 / h.q.eval_i(1),
                        );
                        self.piece(&shifted_head(a, atom), &bp)?.inv_shift_zero(1)
                    };
                    terms.push(piece.times(&Rat::one(), &ci));
                }
                let rhs = sum_pieces(terms);
                self.finish(rhs, &qt, &pt, y0, CaseTag::Pole(beta, j))
            }
        }
    }

    fn finish(
        &mut self,
        rhs: ConvPiece,
        q: &Poly,
        p: &Poly,
        y0: Rat,
        tag: CaseTag,
    ) -> Result<(ConvPiece, MainStepResult), ConvError> {
        let l0 = ShiftOp::first_order(RatFun::from(q.clone()), RatFun::from(p.clone()));
        let seq = solve_first_order(q, p, &rhs.seq, y0)?;
        let mut factors = rhs.ann.factors.clone();
        factors.push(l0.clone());
        let ann = FactoredAnnihilator { factors, valid_from: rhs.ann.valid_from };
        let main = MainStepResult { l0, rhs: rhs.seq.clone(), case_tag: tag };
        Ok((ConvPiece { seq, ann }, main))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::frac;
    use crate::seqrep::eval::cauchy;

    fn vals(e: &Seq, n: usize) -> Vec<Rat> {
        Evaluator::new().prefix(e, n).unwrap()
    }

    fn check(a: &HyperNest, b: &PhiNest, n: usize) -> (ConvPiece, MainStepResult) {
        let mut s = ConvSolver::new();
        let out = s.conv_regular(a, b).unwrap();
        let (piece, main) = (out.0.clone(), out.1.clone());
        let want = cauchy(&vals(&a.to_seq(), n), &vals(&b.to_seq(), n));
        assert_eq!(vals(&piece.seq, n), want);
        let fin_ann = piece.ann.finalize(&piece.seq).unwrap();
        let l = fin_ann.compose();
        let top = l.max_exp() as usize;
        let v = cauchy(&vals(&a.to_seq(), n + top), &vals(&b.to_seq(), n + top));
        for k in 0..n as i64 {
            assert!(l.apply_padded(&v, k).unwrap().is_zero(), "annihilator fails at {k}");
        }
        (piece, main)
    }

    fn lin(c0: Rat, c1: Rat) -> RatFun {
        RatFun::from(Poly::new(vec![c0, c1]))
    }

    #[test]
    fn pole_case_reproduces_worked_example() {
        let a = HyperNest { atoms: vec![HyperAtom::new(Poly::from_ints(&[2, 2]), Poly::one(), frac(1, 2))], offsets: vec![] };
        let b = PhiNest { phis: vec![Phi { alpha: rat(1), form: QuasiForm::PolePower(frac(-1, 2), 1) }], offsets: vec![] };
        let (piece, main) = check(&a, &b, 14);
        assert_eq!(main.case_tag, CaseTag::Pole(frac(-1, 2), 1));
        assert!(main.l0.eq_up_to_unit(&ShiftOp::first_order(RatFun::one(), lin(rat(3), rat(2)))));
        // 1/(2n+3) - Σ (2k)!!
        let dfact = hyper(Poly::from_ints(&[2, 2]), Poly::one(), vec![rat(1)]);
        let want = add(rational(RatFun::new(Poly::one(), Poly::from_ints(&[3, 2])), vec![]), scale(rat(-1), psum(dfact)));
        assert_eq!(vals(&main.rhs, 12), vals(&want, 12));
        let m = RatFun::new(
            &Poly::from_ints(&[3, 2]) * &Poly::from_ints(&[7, 2]).pow(2),
            &Poly::from_ints(&[5, 2]).pow(2) * &Poly::from_ints(&[9, 2]),
        );
        let expect = [
            ShiftOp::first_order(RatFun::one(), m),
            ShiftOp::first_order(RatFun::one(), lin(rat(4), rat(2))),
            ShiftOp::first_order(RatFun::one(), RatFun::one()),
            ShiftOp::first_order(RatFun::one(), lin(rat(3), rat(2))),
        ];
        assert!(piece.ann.eq_factors_up_to_unit(&expect), "{}", piece.ann);
    }

    #[test]
    fn geometric_and_polynomial_weights() {
        let fact = HyperAtom::new(Poly::from_ints(&[1, 1]), Poly::one(), rat(1));
        let recip = HyperAtom::new(Poly::one(), Poly::from_ints(&[1, 1]), rat(1));
        let deep = HyperNest { atoms: vec![fact.clone(), recip.clone()], offsets: vec![1] };
        let flat = HyperNest { atoms: vec![recip], offsets: vec![] };
        let single = |form: QuasiForm| PhiNest { phis: vec![Phi { alpha: rat(2), form }], offsets: vec![] };
        let double = |form: QuasiForm| PhiNest {
            phis: vec![Phi { alpha: rat(2), form }, Phi { alpha: frac(1, 2), form: QuasiForm::PolePower(rat(-1), 1) }],
            offsets: vec![2],
        };
        check(&deep, &single(QuasiForm::PolyPower(0)), 10);
        check(&deep, &single(QuasiForm::PolePower(frac(-1, 3), 1)), 10);
        check(&flat, &single(QuasiForm::PolyPower(1)), 10);
        check(&flat, &single(QuasiForm::PolePower(frac(-1, 3), 2)), 10);
        check(&flat, &double(QuasiForm::PolyPower(0)), 10);
    }

    #[test]
    fn singular_roots_in_the_trailing_coefficient() {
        // q(n-β) E - p(n-β) with p(n-β) vanishing at n = 2
        let h = HyperAtom::new(Poly::from_ints(&[3, 1]), Poly::from_ints(&[1, 1]), rat(1));
        let a = HyperNest { atoms: vec![h], offsets: vec![] };
        let b = PhiNest { phis: vec![Phi { alpha: rat(1), form: QuasiForm::PolePower(rat(-5), 1) }], offsets: vec![] };
        check(&a, &b, 12);
    }

    #[test]
    fn first_order_solver() {
        let f = rational(RatFun::new(Poly::one(), Poly::from_ints(&[1, 1])), vec![]);
        let (q, p) = (Poly::from_ints(&[2, 1]), Poly::from_ints(&[-3, 1]));
        let y = solve_first_order(&q, &p, &f, rat(7)).unwrap();
        let v = vals(&y, 12);
        let fv = vals(&f, 12);
        assert_eq!(v[0], rat(7));
        for n in 0..11 {
            assert_eq!(q.eval_i(n as i64) * &v[n + 1] - p.eval_i(n as i64) * &v[n], fv[n]);
        }
        assert!(matches!(solve_first_order(&Poly::from_ints(&[-1, 1]), &p, &f, rat(0)), Err(ConvError::SingularLeading(_))));
    }

    #[test]
    fn unshift_recovers_convolution() {
        let a = hyper(Poly::from_ints(&[1, 1]), Poly::one(), vec![rat(1)]);
        let b = poly_seq(Poly::from_ints(&[1, 1]));
        let x = conv(shift(a.clone(), 1), shift(b.clone(), 1));
        let y = unshift_conv(&x, &a, &b).unwrap();
        assert_eq!(vals(&y, 10), vals(&conv(a, b), 10));
    }
}
