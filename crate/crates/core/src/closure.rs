//! Closure operations on representations and on annihilators.

use num_traits::{One, Zero};

use crate::exact::{Poly, Rat, RatFun};
use crate::ore::lclm::{hadamard_raw, lclm_raw, shift_remainders};
use crate::ore::{hadamard, iso_r, iso_rinv, lclm, symmetric_product_diff, ShiftOp};
use crate::seqrep::normalize::multisect_rep;
use crate::seqrep::*;

/// A sequence together with an operator annihilating it from `valid_from` on.
#[derive(Clone, Debug)]
pub struct AnnihilatedSeq {
    pub expr: Seq,
    pub ann: Option<ShiftOp>,
    pub valid_from: u64,
}

impl AnnihilatedSeq {
    pub fn new(expr: Seq, ann: Option<ShiftOp>, valid_from: u64) -> Self {
        AnnihilatedSeq { expr, ann, valid_from }
    }

    /// First index in `valid_from..=to` where the annihilator fails.
    pub fn first_violation(&self, to: u64) -> Result<Option<(u64, Rat)>, SeqError> {
        let Some(l) = &self.ann else { return Ok(None) };
        first_violation(l, &self.expr, self.valid_from, to)
    }
}

/// First `n` in `from..=to` with `l(e)(n) ≠ 0`, and that value.
pub fn first_violation(l: &ShiftOp, e: &Seq, from: u64, to: u64) -> Result<Option<(u64, Rat)>, SeqError> {
    let l = l.clear_denominators();
    let len = to as i64 + l.max_exp() + 1;
    let vals = Evaluator::new().prefix(e, len.max(1) as usize)?;
    for n in from..=to {
        let v = l.apply_padded(&vals, n as i64).map_err(|_| SeqError::UndefinedTerm(n))?;
        if !v.is_zero() {
            return Ok(Some((n, v)));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UnaryKind {
    Shift,
    InvShift(Rat),
    Difference,
    PartialSum,
    Multisect(u64, u64),
}

pub fn op_unary(kind: UnaryKind, s: &AnnihilatedSeq) -> AnnihilatedSeq {
    let e = s.expr.clone();
    let v = s.valid_from;
    let (expr, ann) = match kind {
        UnaryKind::Shift => (shift(e, 1), s.ann.as_ref().map(|l| shift_ann(l, v, 1))),
        UnaryKind::InvShift(lambda) => (inv_shift(e, lambda), s.ann.as_ref().map(|l| inv_shift_ann(l, v))),
        UnaryKind::Difference => {
            let expr = lincomb(vec![Rat::one(), -Rat::one()], vec![shift(e.clone(), 1), e]);
            let ann = s.ann.as_ref().map(|l| {
                let (l0, v0) = canon(l, v);
                let (l1, v1) = shift_ann(&l0, v0, 1);
                add_ann(&[(l1, v1), (l0, v0)])
            });
            (expr, ann)
        }
        UnaryKind::PartialSum => (psum(e), s.ann.as_ref().map(|l| psum_ann(l, v))),
        UnaryKind::Multisect(m, r) => (multisect(e, m, r), None),
    };
    match ann {
        Some((l, v)) => {
            let (l, v) = canon(&l, v);
            AnnihilatedSeq::new(expr, Some(l), v)
        }
        None => AnnihilatedSeq::new(expr, None, 0),
    }
}

/// Canonical form of `l` with the validity index moved along with the
/// stripped power of `E`.
fn canon(l: &ShiftOp, v: u64) -> (ShiftOp, u64) {
    if l.is_zero() {
        return (ShiftOp::zero(), v);
    }
    let m = l.min_exp();
    let v = if m >= 0 { v + m as u64 } else { v.saturating_sub((-m) as u64) };
    (l.canonical(), v)
}

fn shift_ann(l: &ShiftOp, v: u64, k: u64) -> (ShiftOp, u64) {
    (l.shift_coeffs(k as i64), v.saturating_sub(k))
}

fn inv_shift_ann(l: &ShiftOp, v: u64) -> (ShiftOp, u64) {
    (l * &ShiftOp::e(1), v)
}

fn psum_ann(l: &ShiftOp, v: u64) -> (ShiftOp, u64) {
    let (l, v) = canon(l, v);
    (&l.shift_coeffs(1) * &(&ShiftOp::e(1) - &ShiftOp::one()), v.saturating_sub(1))
}

fn add_ann(parts: &[(ShiftOp, u64)]) -> (ShiftOp, u64) {
    let parts: Vec<(ShiftOp, u64)> = parts.iter().map(|(l, v)| canon(l, *v)).collect();
    let mut acc = parts[0].0.clone();
    for (l, _) in &parts[1..] {
        acc = lclm_raw(&acc, l);
    }
    if parts.len() == 1 {
        return parts[0].clone();
    }
    let k = acc.max_exp() as usize;
    let vf = parts.iter().map(|(l, v)| remainder_validity(l, k, *v)).max().unwrap_or(0);
    (acc, vf)
}

fn hadamard_ann(a: &(ShiftOp, u64), b: &(ShiftOp, u64)) -> (ShiftOp, u64) {
    let (la, va) = canon(&a.0, a.1);
    let (lb, vb) = canon(&b.0, b.1);
    let l = hadamard_raw(&la, &lb);
    let k = l.max_exp() as usize;
    let vf = remainder_validity(&la, k, va).max(remainder_validity(&lb, k, vb));
    (l, vf)
}

/// Index from which reducing `E^k` modulo `l` (`k ≤ kmax`) is valid on
/// sequences that `l` annihilates from `v` on.
fn remainder_validity(l: &ShiftOp, kmax: usize, v: u64) -> u64 {
    if l.order() == 0 {
        return v;
    }
    let mut out = v;
    for row in shift_remainders(&l, kmax) {
        for c in row {
            if let Some(p) = c.max_natural_pole() {
                out = out.max(p + 1);
            }
        }
    }
    out
}

pub fn ann_add(l1: &ShiftOp, l2: &ShiftOp) -> ShiftOp {
    lclm(l1, l2)
}

pub fn ann_hadamard(l1: &ShiftOp, l2: &ShiftOp) -> ShiftOp {
    hadamard(l1, l2)
}

/// Annihilator of the zero-padded convolution via the generating-function
/// transfer, for `l1(a) = 0` and `l2(b) = 0` on all `n ≥ 0`.
pub fn conv_annihilator_via_gf(l1: &ShiftOp, l2: &ShiftOp, a: &Seq, b: &Seq) -> Result<ShiftOp, SeqError> {
    conv_annihilator_from(l1, 0, l2, 0, a, b)
}

fn conv_annihilator_from(l1: &ShiftOp, v1: u64, l2: &ShiftOp, v2: u64, a: &Seq, b: &Seq) -> Result<ShiftOp, SeqError> {
    let z1 = zeta_adjust_from(l1, a, v1)?;
    let z2 = zeta_adjust_from(l2, b, v2)?;
    let m = symmetric_product_diff(&iso_r(&z1), &iso_r(&z2));
    Ok(iso_rinv(&m).canonical())
}

pub fn op_interlace(parts: &[AnnihilatedSeq]) -> AnnihilatedSeq {
    if parts.len() == 1 {
        return parts[0].clone();
    }
    AnnihilatedSeq::new(interlace(parts.iter().map(|p| p.expr.clone()).collect()), None, 0)
}

/// Section `e_{mn+r}` of a d'Alembertian representation, again as a
/// combination of nested sums of atoms.
pub fn op_multisect_rep(e: &Seq, m: u64, r: u64) -> Result<Seq, SeqError> {
    multisect_rep(&mut Evaluator::new(), e, m, r)
}

/// Smallest `v' ≤ v` such that `l` annihilates `e` on `v'..`, given that it
/// does on `v..`.
fn tighten(l: &ShiftOp, e: &Seq, v: u64) -> Result<u64, SeqError> {
    if v == 0 {
        return Ok(0);
    }
    let vals = Evaluator::new().prefix(e, (v as i64 + l.max_exp()).max(1) as usize)?;
    for n in (0..v).rev() {
        let ok = matches!(l.apply_padded(&vals, n as i64), Ok(x) if x.is_zero());
        if !ok {
            return Ok(n + 1);
        }
    }
    Ok(0)
}

/// Operator `q(n)E - p(n)` with `r(n+1)/r(n) = p/q` for a rational function.
pub fn rational_ann(r: &RatFun) -> ShiftOp {
    if r.is_zero() {
        return ShiftOp::one();
    }
    let (p, q) = (r.num(), r.den());
    let lead = p * &q.shift_i(1);
    let tail = &p.shift_i(1) * q;
    ShiftOp::first_order(RatFun::from(lead), RatFun::from(tail)).canonical()
}

/// Annihilator of a representation, built compositionally.
pub fn annihilate(e: &Seq) -> Result<AnnihilatedSeq, SeqError> {
    let (ann, v) = match ann_rec(e)? {
        Some((l, v)) => {
            let (l, v) = canon(&l, v);
            let v = tighten(&l, e, v)?;
            (Some(l), v)
        }
        None => (None, 0),
    };
    Ok(AnnihilatedSeq::new(e.clone(), ann, v))
}

type Ann = Option<(ShiftOp, u64)>;

fn ann_rec(e: &Seq) -> Result<Ann, SeqError> {
    Ok(match &**e {
        SeqExpr::Hypergeom { p, q, .. } => {
            Some((ShiftOp::first_order(RatFun::from(q.clone()), RatFun::from(p.clone())), q.natural_root_bound()))
        }
        SeqExpr::Rational { r, prefix } => {
            let v = (prefix.len() as u64).max(r.den().natural_root_bound());
            let v = if r.is_zero() { v } else { v.max(r.num().natural_root_bound()) };
            Some((rational_ann(r), v))
        }
        SeqExpr::Quasi { alpha, form } => {
            let (lead, tail) = match form {
                QuasiForm::PolyPower(j) => (Poly::var().pow(*j), Poly::from_ints(&[1, 1]).pow(*j)),
                QuasiForm::PolePower(b, j) => {
                    let x = Poly::linear_root(b);
                    (x.shift_i(1).pow(*j), x.pow(*j))
                }
            };
            Some((ShiftOp::first_order(RatFun::from(lead), RatFun::from(tail.scale(alpha))), 0))
        }
        SeqExpr::Delta => Some((ShiftOp::e(1), 0)),
        SeqExpr::FinSupport(v) => Some((ShiftOp::e(1), (v.len() as u64).saturating_sub(1))),
        SeqExpr::LinComb { coeffs, terms } => {
            let mut parts = Vec::new();
            for (c, t) in coeffs.iter().zip(terms) {
                if c.is_zero() {
                    continue;
                }
                let Some(a) = ann_rec(t)? else { return Ok(None) };
                parts.push(a);
            }
            if parts.is_empty() {
                Some((ShiftOp::one(), 0))
            } else {
                Some(add_ann(&parts))
            }
        }
        SeqExpr::Shift { inner, k } => ann_rec(inner)?.map(|(l, v)| shift_ann(&l, v, *k)),
        SeqExpr::InvShift { inner, .. } => ann_rec(inner)?.map(|(l, v)| inv_shift_ann(&l, v)),
        SeqExpr::PartialSum(inner) => ann_rec(inner)?.map(|(l, v)| psum_ann(&l, v)),
        SeqExpr::Product(a, b) => {
            let (Some(x), Some(y)) = (ann_rec(a)?, ann_rec(b)?) else { return Ok(None) };
            Some(hadamard_ann(&x, &y))
        }
        SeqExpr::Conv(a, b) => {
            let (Some(x), Some(y)) = (ann_rec(a)?, ann_rec(b)?) else { return Ok(None) };
            let (la, va) = canon(&x.0, x.1);
            let (lb, vb) = canon(&y.0, y.1);
            let va = tighten(&la, a, va)?;
            let vb = tighten(&lb, b, vb)?;
            Some((conv_annihilator_from(&la, va, &lb, vb, a, b)?, 0))
        }
        SeqExpr::NestedSum { factors, offsets } => {
            let d = factors.len();
            let mut cur = factors[d - 1].clone();
            for i in (0..d - 1).rev() {
                cur = product(factors[i].clone(), shift(psum(cur), offsets[i]));
            }
            ann_rec(&cur)?
        }
        SeqExpr::Multisect { inner, m, r } => {
            let s = msect_seq(inner, *m, *r)?;
            if matches!(*s, SeqExpr::Multisect { .. }) {
                None
            } else {
                ann_rec(&s)?
            }
        }
        SeqExpr::Interlace(parts) if parts.len() == 1 => ann_rec(&parts[0])?,
        SeqExpr::ZeroInterlace { inner, m } if *m == 1 => ann_rec(inner)?,
        _ => None,
    })
}
