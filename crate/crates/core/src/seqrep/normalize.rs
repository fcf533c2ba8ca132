use num_traits::{One, Zero};

use crate::exact::{Poly, Rat, RatFun};
use crate::ore::ShiftOp;

use super::atoms::{is_atom_like, msect_atom, msect_seq};
use super::eval::Evaluator;
use super::expr::*;
use super::SeqError;

/// `coeff · nest(factors)` with every offset zero and atom-like factors.
#[derive(Clone, Debug)]
pub struct FlatNest {
    pub coeff: Rat,
    pub factors: Vec<Seq>,
}

/// `Σ nests + fin(fin)`.
#[derive(Clone, Debug, Default)]
pub struct Flat {
    pub nests: Vec<FlatNest>,
    pub fin: Vec<Rat>,
}

impl Flat {
    fn single(f: Seq) -> Flat {
        Flat { nests: vec![FlatNest { coeff: Rat::one(), factors: vec![f] }], fin: Vec::new() }
    }

    fn finite(v: Vec<Rat>) -> Flat {
        Flat { nests: Vec::new(), fin: v }
    }

    fn scaled(mut self, c: &Rat) -> Flat {
        for n in &mut self.nests {
            n.coeff = &n.coeff * c;
        }
        for v in &mut self.fin {
            *v = &*v * c;
        }
        self
    }

    fn extend(&mut self, o: Flat) {
        self.nests.extend(o.nests);
        add_into(&mut self.fin, &o.fin);
    }

    pub fn to_seq(&self) -> Seq {
        let mut cs = Vec::new();
        let mut ts = Vec::new();
        for n in &self.nests {
            cs.push(n.coeff.clone());
            ts.push(nest(n.factors.clone()));
        }
        if self.fin.iter().any(|v| !v.is_zero()) {
            cs.push(Rat::one());
            ts.push(fin(self.fin.clone()));
        }
        if ts.is_empty() {
            return zero_seq();
        }
        lincomb(cs, ts)
    }
}

fn add_into(acc: &mut Vec<Rat>, v: &[Rat]) {
    if acc.len() < v.len() {
        acc.resize(v.len(), Rat::zero());
    }
    for (a, b) in acc.iter_mut().zip(v) {
        *a += b;
    }
}

fn nest_values(ev: &mut Evaluator, factors: &[Seq], len: usize) -> Result<Vec<Rat>, SeqError> {
    ev.prefix(&nest(factors.to_vec()), len)
}

/// `E^s nest(g_1, …, g_k) = Σ_i C_i nest(E^s g_1, …, E^s g_i)`.
pub fn shift_nest(ev: &mut Evaluator, factors: &[Seq], s: u64) -> Result<Vec<(Rat, Vec<Seq>)>, SeqError> {
    let k = factors.len();
    let shifted: Vec<Seq> = factors.iter().map(|f| shift(f.clone(), s)).collect();
    let mut cs = vec![Rat::zero(); k];
    cs[k - 1] = Rat::one();
    for j in (0..k - 1).rev() {
        let v = nest_values(ev, &factors[j + 1..], s as usize)?;
        cs[j] = v.iter().fold(Rat::zero(), |a, b| a + b);
    }
    Ok(cs
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (c, shifted[..=i].to_vec()))
        .collect())
}

fn shift_flat(ev: &mut Evaluator, x: Flat, s: u64) -> Result<Flat, SeqError> {
    if s == 0 {
        return Ok(x);
    }
    let mut out = Flat::finite(x.fin.iter().skip(s as usize).cloned().collect());
    for n in x.nests {
        for (c, fs) in shift_nest(ev, &n.factors, s)? {
            out.nests.push(FlatNest { coeff: &n.coeff * c, factors: fs });
        }
    }
    Ok(out)
}

/// `g · psum(x)` for flat `g` whose nests all have depth one.
fn mul_psum(ev: &mut Evaluator, g: Flat, x: Flat) -> Result<Flat, SeqError> {
    let mut out = Flat::default();
    let total: Rat = x.fin.iter().fold(Rat::zero(), |a, b| a + b);
    let mut partial = Vec::with_capacity(x.fin.len());
    let mut acc = Rat::zero();
    for v in &x.fin {
        acc += v;
        partial.push(&acc - &total);
    }
    for gn in &g.nests {
        if gn.factors.len() != 1 {
            return Err(SeqError::Unsupported("nested sum factor is itself a nested sum".into()));
        }
        let gf = &gn.factors[0];
        for xn in &x.nests {
            let mut fs = vec![gf.clone()];
            fs.extend(xn.factors.iter().cloned());
            out.nests.push(FlatNest { coeff: &gn.coeff * &xn.coeff, factors: fs });
        }
        if !total.is_zero() {
            out.nests.push(FlatNest { coeff: &gn.coeff * &total, factors: vec![gf.clone()] });
        }
        let gv = ev.prefix(gf, partial.len())?;
        let corr: Vec<Rat> = gv.iter().zip(&partial).map(|(a, b)| &gn.coeff * a * b).collect();
        add_into(&mut out.fin, &corr);
    }
    if !g.fin.is_empty() {
        let s = ev.prefix(&x.to_seq(), g.fin.len())?;
        let mut acc = Rat::zero();
        let corr: Vec<Rat> = g
            .fin
            .iter()
            .zip(&s)
            .map(|(a, b)| {
                acc += b;
                a * &acc
            })
            .collect();
        add_into(&mut out.fin, &corr);
    }
    Ok(out)
}

/// Rewrites `e` as a linear combination of zero-offset nested sums of
/// atom-like factors plus a finitely supported part.
pub fn flatten(e: &Seq) -> Result<Flat, SeqError> {
    flatten_with(&mut Evaluator::new(), e)
}

fn flatten_with(ev: &mut Evaluator, e: &Seq) -> Result<Flat, SeqError> {
    if is_atom_like(e) {
        return Ok(Flat::single(e.clone()));
    }
    match &**e {
        SeqExpr::Delta => Ok(Flat::finite(vec![Rat::one()])),
        SeqExpr::FinSupport(v) => Ok(Flat::finite(v.clone())),
        SeqExpr::LinComb { coeffs, terms } => {
            let mut out = Flat::default();
            for (c, t) in coeffs.iter().zip(terms) {
                out.extend(flatten_with(ev, t)?.scaled(c));
            }
            Ok(out)
        }
        SeqExpr::NestedSum { factors, offsets } => {
            let d = factors.len();
            let mut cur = flatten_with(ev, &factors[d - 1])?;
            for i in (0..d - 1).rev() {
                let g = flatten_with(ev, &factors[i])?;
                let eta = offsets[i];
                let fin_head: Rat = if eta > 0 {
                    ev.prefix(&cur.to_seq(), eta as usize)?.iter().fold(Rat::zero(), |a, b| a + b)
                } else {
                    Rat::zero()
                };
                let tail = shift_flat(ev, cur, eta)?;
                let mut next = mul_psum(ev, g.clone(), tail)?;
                if !fin_head.is_zero() {
                    next.extend(g.scaled(&fin_head));
                }
                cur = next;
            }
            Ok(cur)
        }
        SeqExpr::PartialSum(x) => {
            let x = flatten_with(ev, x)?;
            mul_psum(ev, Flat::single(constant(Rat::one())), x)
        }
        SeqExpr::Shift { inner, k } => {
            let x = flatten_with(ev, inner)?;
            shift_flat(ev, x, *k)
        }
        SeqExpr::InvShift { inner, lambda } => {
            let x = flatten_with(ev, inner)?;
            let mut fv = vec![lambda.clone()];
            fv.extend(x.fin.iter().cloned());
            let nests = x
                .nests
                .into_iter()
                .map(|n| FlatNest { coeff: n.coeff, factors: n.factors.into_iter().map(|f| inv_shift(f, Rat::zero())).collect() })
                .collect();
            Ok(Flat { nests, fin: fv })
        }
        SeqExpr::Product(a, b) => {
            let fa = flatten_with(ev, a)?;
            let fb = flatten_with(ev, b)?;
            let (short, long) = if fa.nests.iter().all(|n| n.factors.len() == 1) { (fa, fb) } else { (fb, fa) };
            if !short.nests.iter().all(|n| n.factors.len() == 1) {
                return Err(SeqError::Unsupported("product of two nested sums".into()));
            }
            let mut out = Flat::default();
            for s in &short.nests {
                for l in &long.nests {
                    let mut fs = l.factors.clone();
                    fs[0] = product(s.factors[0].clone(), fs[0].clone());
                    out.nests.push(FlatNest { coeff: &s.coeff * &l.coeff, factors: fs });
                }
            }
            let len = short.fin.len().max(long.fin.len());
            if len > 0 {
                let va = ev.prefix(a, len)?;
                let vb = ev.prefix(b, len)?;
                let sn = ev.prefix(&Flat { nests: short.nests.clone(), fin: Vec::new() }.to_seq(), len)?;
                let ln = ev.prefix(&Flat { nests: long.nests.clone(), fin: Vec::new() }.to_seq(), len)?;
                let corr: Vec<Rat> = (0..len).map(|n| &va[n] * &vb[n] - &sn[n] * &ln[n]).collect();
                add_into(&mut out.fin, &corr);
            }
            Ok(out)
        }
        SeqExpr::Multisect { inner, m, r } => {
            let rep = multisect_rep(ev, inner, *m, *r)?;
            flatten_with(ev, &rep)
        }
        _ => Err(SeqError::Unsupported(format!("cannot flatten {e}"))),
    }
}

/// Section `e_{mn+r}` rewritten so that sections act only on atoms.
pub fn multisect_rep(ev: &mut Evaluator, e: &Seq, m: u64, r: u64) -> Result<Seq, SeqError> {
    if m == 1 {
        return Ok(e.clone());
    }
    if is_atom_like(e) {
        return msect_seq(e, m, r);
    }
    match &**e {
        SeqExpr::NestedSum { factors, offsets } if offsets.iter().all(|o| *o == 0) => {
            let g1 = msect_atom_or_rep(ev, &factors[0], m, r)?;
            if factors.len() == 1 {
                return Ok(g1);
            }
            let t2 = nest(factors[1..].to_vec());
            let mut cs = Vec::new();
            let mut ts = Vec::new();
            for i in 0..m {
                let s = multisect_rep(ev, &t2, m, i)?;
                cs.push(Rat::one());
                ts.push(if i <= r { s } else { inv_shift(s, Rat::zero()) });
            }
            Ok(product(g1, psum(lincomb(cs, ts))))
        }
        SeqExpr::LinComb { coeffs, terms } => {
            let ts = terms.iter().map(|t| multisect_rep(ev, t, m, r)).collect::<Result<Vec<_>, _>>()?;
            Ok(lincomb(coeffs.clone(), ts))
        }
        SeqExpr::Delta | SeqExpr::FinSupport(_) => msect_seq(e, m, r),
        _ => {
            let f = flatten_with(ev, e)?;
            if f.nests.len() == 1 && f.nests[0].factors.len() == 1 && f.nests[0].coeff.is_one() && f.fin.is_empty() {
                return msect_seq(&f.nests[0].factors[0], m, r);
            }
            multisect_rep(ev, &f.to_seq(), m, r)
        }
    }
}

fn msect_atom_or_rep(ev: &mut Evaluator, f: &Seq, m: u64, r: u64) -> Result<Seq, SeqError> {
    if is_atom_like(f) {
        match &**f {
            SeqExpr::Hypergeom { .. } | SeqExpr::Rational { .. } | SeqExpr::Quasi { .. } => msect_atom(f, m, r),
            _ => msect_seq(f, m, r),
        }
    } else {
        multisect_rep(ev, f, m, r)
    }
}

/// Index from which the tail `E^N f` of an atom-like factor is a regular
/// first-order atom (nonvanishing leading coefficient on the naturals, nonzero
/// start unless the tail vanishes).
pub fn atom_threshold(f: &Seq) -> Result<u64, SeqError> {
    Ok(match &**f {
        SeqExpr::Hypergeom { q, .. } => q.natural_root_bound(),
        SeqExpr::Rational { r, prefix } => {
            if r.is_zero() {
                prefix.len() as u64
            } else {
                (prefix.len() as u64).max(r.den().natural_root_bound()).max(r.num().natural_root_bound())
            }
        }
        SeqExpr::Quasi { form, .. } => match form {
            QuasiForm::PolyPower(j) if *j > 0 => 1,
            _ => 0,
        },
        SeqExpr::Delta => 1,
        SeqExpr::FinSupport(v) => v.len() as u64,
        SeqExpr::Shift { inner, k } => atom_threshold(inner)?.saturating_sub(*k),
        SeqExpr::InvShift { inner, .. } => atom_threshold(inner)? + 1,
        SeqExpr::Multisect { inner, m, r } => atom_threshold(&msect_seq(inner, *m, *r)?)?,
        SeqExpr::Product(a, b) => atom_threshold(a)?.max(atom_threshold(b)?),
        SeqExpr::LinComb { terms, .. } => {
            let mut t = 0;
            for x in terms {
                t = t.max(atom_threshold(x)?);
            }
            t
        }
        _ => return Err(SeqError::Unsupported(format!("{f} is not an atom"))),
    })
}

#[derive(Clone, Debug)]
pub struct NormNest {
    pub coeff: Rat,
    pub factors: Vec<Seq>,
    /// `c_1, …, c_d`: weight of the padded nest of depth `i`.
    pub constants: Vec<Rat>,
}

/// `e = Σ coeff Σ_i c_i E_0^{-N} nest(E^N f_1, …, E^N f_i) + fin(correction)`.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub threshold: u64,
    pub nests: Vec<NormNest>,
    pub correction: Vec<Rat>,
}

impl Normalized {
    /// `nest(E^N f_1, …, E^N f_depth)` of nest `i`.
    pub fn tail_nest(&self, i: usize, depth: usize) -> Seq {
        let n = self.threshold;
        nest(self.nests[i].factors[..depth].iter().map(|f| shift(f.clone(), n)).collect())
    }

    pub fn reconstruct(&self) -> Seq {
        let mut cs = Vec::new();
        let mut ts = Vec::new();
        for (i, nn) in self.nests.iter().enumerate() {
            for (d, c) in nn.constants.iter().enumerate() {
                if !c.is_zero() {
                    cs.push(&nn.coeff * c);
                    ts.push(inv_shift_zero(self.tail_nest(i, d + 1), self.threshold));
                }
            }
        }
        cs.push(Rat::one());
        ts.push(fin(self.correction.clone()));
        lincomb(cs, ts)
    }
}

pub fn normalize_to_regular(e: &Seq) -> Result<Normalized, SeqError> {
    normalize_from(e, 0)
}

/// Normalization with threshold at least `min_n`.
pub fn normalize_from(e: &Seq, min_n: u64) -> Result<Normalized, SeqError> {
    let mut ev = Evaluator::new();
    let flat = flatten_with(&mut ev, e)?;
    let mut n = min_n.max(flat.fin.len() as u64);
    for fnest in &flat.nests {
        for f in &fnest.factors {
            n = n.max(atom_threshold(f)?);
        }
    }
    let mut nests = Vec::new();
    for fnest in flat.nests {
        let constants = shift_nest(&mut ev, &fnest.factors, n)?
            .into_iter()
            .fold(vec![Rat::zero(); fnest.factors.len()], |mut acc, (c, fs)| {
                acc[fs.len() - 1] = c;
                acc
            });
        nests.push(NormNest { coeff: fnest.coeff, factors: fnest.factors, constants });
    }
    let correction = ev.prefix(e, n as usize)?;
    Ok(Normalized { threshold: n, nests, correction })
}

/// Left multiple of `l` (denominators cleared) that annihilates the
/// zero-padded sequence `e` at every integer index, given that `l`
/// annihilates `e` for all `n ≥ 0`.
pub fn zeta_adjust(l: &ShiftOp, e: &Seq) -> Result<ShiftOp, SeqError> {
    zeta_adjust_from(l, e, 0)
}

/// As [`zeta_adjust`] when `l` is only known to annihilate from `valid_from` on.
pub fn zeta_adjust_from(l: &ShiftOp, e: &Seq, valid_from: u64) -> Result<ShiftOp, SeqError> {
    let m = l.min_exp();
    let valid_from = if m >= 0 { valid_from + m as u64 } else { valid_from.saturating_sub((-m) as u64) };
    let l = l.canonical();
    let top = l.max_exp();
    let vals = Evaluator::new().prefix(e, (valid_from as i64 + top).max(0) as usize + 1)?;
    let mut fix = Poly::one();
    for n in -top..valid_from as i64 {
        let v = l.apply_padded(&vals, n).map_err(|_| SeqError::UndefinedTerm(n.max(0) as u64))?;
        if !v.is_zero() {
            fix = &fix * &Poly::linear_root(&crate::exact::rat(n));
        }
    }
    Ok(l.lmul(&RatFun::from(fix)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{frac, rat};

    fn vals(e: &Seq, n: usize) -> Vec<Rat> {
        Evaluator::new().prefix(e, n).unwrap()
    }

    fn harmonic_like() -> Seq {
        // nsum(1/(n+1)!, (n-1)) style mix with a singular rational
        nested(
            vec![
                hyper(Poly::one(), Poly::from_ints(&[1, 1]), vec![rat(1)]),
                rational(RatFun::new(Poly::one(), Poly::from_ints(&[-2, 1])), vec![rat(0), rat(1), rat(5)]),
                constant(rat(3)),
            ],
            vec![1, 2],
        )
    }

    #[test]
    fn flatten_preserves_values() {
        let es = vec![
            harmonic_like(),
            psum(psum(poly_seq(Poly::var()))),
            shift(nest(vec![poly_seq(Poly::from_ints(&[1, 1])), quasi(rat(2), QuasiForm::PolyPower(1))]), 3),
            inv_shift(psum(constant(rat(1))), rat(7)),
            product(hyper(Poly::from_ints(&[1, 1]), Poly::one(), vec![rat(1)]), psum(fin(vec![rat(1), rat(-2)]))),
            multisect(nest(vec![constant(rat(1)), hyper(Poly::from_ints(&[1, 1]), Poly::one(), vec![rat(1)])]), 3, 1),
        ];
        for e in es {
            let f = flatten(&e).unwrap();
            assert_eq!(vals(&f.to_seq(), 14), vals(&e, 14), "{e}");
        }
    }

    #[test]
    fn normalization_reconstructs() {
        for e in [harmonic_like(), psum(rational(RatFun::new(Poly::one(), Poly::var()), vec![rat(0)]))] {
            let nz = normalize_to_regular(&e).unwrap();
            assert_eq!(vals(&nz.reconstruct(), 16), vals(&e, 16));
            assert!(nz.threshold >= 1);
        }
    }

    #[test]
    fn harmonic_number() {
        let h = psum(rational(RatFun::new(Poly::one(), Poly::var()), vec![rat(0)]));
        assert_eq!(vals(&h, 4)[3], frac(11, 6));
    }

    #[test]
    fn zeta_of_constant_sequence() {
        let l = ShiftOp::first_order(RatFun::one(), RatFun::one());
        let z = zeta_adjust(&l, &constant(rat(1))).unwrap();
        let want = l.lmul(&RatFun::from(Poly::from_ints(&[1, 1])));
        assert_eq!(z, want);
    }
}
