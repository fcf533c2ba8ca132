use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::exact::Rat;
use crate::ore::ShiftOp;
use crate::seqrep::normalize::{multisect_rep, Flat};
use crate::seqrep::*;

use super::factored::FactoredAnnihilator;
use super::main_step::{hyper_nest_ann, phi_nest_ann, ConvPiece, ConvSolver, MainStepResult};
use super::typed::{hyper_tail, is_quasi_rational_factor, phi_tail, HyperNest, PhiNest};
use super::ConvError;

/// Explicit representation of a convolution with a factored annihilator
/// valid from `n = 0`.
#[derive(Clone, Debug)]
pub struct ConvResult {
    pub seq: Seq,
    pub ann: FactoredAnnihilator,
    /// First main step on the regular parts, if any.
    pub main: Option<MainStepResult>,
    /// Normalization threshold used for both operands.
    pub threshold: u64,
    /// True when the operands were exchanged so that the second one is
    /// quasi-rational.
    pub swapped: bool,
}

struct Side<T> {
    terms: Vec<(Rat, T)>,
    correction: Vec<Rat>,
}

fn expand<A: Clone, T: Clone + PartialEq>(
    norm: &Normalized,
    tail: impl Fn(&Seq, u64) -> Result<Vec<(Rat, A)>, ConvError>,
    build: impl Fn(Vec<A>) -> T,
) -> Result<Side<T>, ConvError> {
    let n = norm.threshold;
    let mut acc: Vec<(T, Rat)> = Vec::new();
    for nn in &norm.nests {
        for (d, c) in nn.constants.iter().enumerate() {
            let w = &nn.coeff * c;
            if w.is_zero() {
                continue;
            }
            let mut combos: Vec<(Rat, Vec<A>)> = vec![(w, Vec::new())];
            for f in &nn.factors[..=d] {
                let t = tail(f, n)?;
                let mut next = Vec::new();
                for (c0, atoms) in &combos {
                    for (c1, a) in &t {
                        let mut v = atoms.clone();
                        v.push(a.clone());
                        next.push((c0 * c1, v));
                    }
                }
                combos = next;
            }
            for (c, atoms) in combos {
                let t = build(atoms);
                match acc.iter_mut().find(|(u, _)| *u == t) {
                    Some((_, e)) => *e += c,
                    None => acc.push((t, c)),
                }
            }
        }
    }
    Ok(Side { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(t, c)| (c, t)).collect(), correction: norm.correction.clone() })
}

fn fin_ann(v: &[Rat]) -> FactoredAnnihilator {
    match v.iter().rposition(|x| !x.is_zero()) {
        None => FactoredAnnihilator::identity(),
        Some(last) => FactoredAnnihilator::first_order(ShiftOp::e(1), last as u64),
    }
}

fn side_ann<T>(side: &Side<T>, n: u64, ann: impl Fn(&T) -> FactoredAnnihilator) -> FactoredAnnihilator {
    let mut f = fin_ann(&side.correction);
    for (_, t) in &side.terms {
        f = f.lclm(&ann(t).inv_shift_zero(n));
    }
    f
}

fn sum(pieces: Vec<ConvPiece>) -> ConvPiece {
    let mut ann = FactoredAnnihilator::identity();
    let mut ts = Vec::new();
    for p in pieces {
        if p.ann.factors.is_empty() {
            continue;
        }
        ann = ann.lclm(&p.ann);
        ts.push(p.seq);
    }
    let seq = match ts.len() {
        0 => zero_seq(),
        1 => ts.pop().unwrap(),
        k => lincomb(vec![Rat::one(); k], ts),
    };
    ConvPiece { seq, ann }
}

fn rationally_dalembertian(f: &Flat) -> bool {
    f.nests.iter().all(|n| n.factors.iter().all(is_quasi_rational_factor))
}

/// `a * b` for `a` d'Alembertian and `b` (quasi-)rationally d'Alembertian;
/// the operands are exchanged when only `a` is quasi-rational.
pub fn conv_dalembert(a: &Seq, b: &Seq) -> Result<ConvResult, ConvError> {
    let (fa, fb) = (flatten(a)?, flatten(b)?);
    let (a, b, swapped) = if rationally_dalembertian(&fb) {
        (a, b, false)
    } else if rationally_dalembertian(&fa) {
        (b, a, true)
    } else {
        return Err(ConvError::NotRationallyDAlembertian(format!("neither {a} nor {b} is quasi-rationally d'Alembertian")));
    };
    let mut min_n = 0;
    for _ in 0..64 {
        match conv_at(a, b, min_n) {
            Ok(mut r) => {
                r.swapped = swapped;
                return Ok(r);
            }
            Err((ConvError::SingularLeading(_), n)) => min_n = n + 1,
            Err((e, _)) => return Err(e),
        }
    }
    Err(ConvError::SingularLeading("no admissible threshold found".into()))
}

fn conv_at(a: &Seq, b: &Seq, min_n: u64) -> Result<ConvResult, (ConvError, u64)> {
    let na = normalize_from(a, min_n).map_err(|e| (e.into(), min_n))?;
    let nb = normalize_from(b, min_n).map_err(|e| (e.into(), min_n))?;
    let n = na.threshold.max(nb.threshold);
    let err = |e: ConvError| (e, n);
    let na = normalize_from(a, n).map_err(|e| err(e.into()))?;
    let nb = normalize_from(b, n).map_err(|e| err(e.into()))?;
    let sa = expand(&na, hyper_tail, |atoms| HyperNest { offsets: vec![0; atoms.len().saturating_sub(1)], atoms }).map_err(err)?;
    let sb = expand(&nb, phi_tail, |phis| PhiNest { offsets: vec![0; phis.len().saturating_sub(1)], phis }).map_err(err)?;

    let mut solver = ConvSolver::new();
    let mut main = None;
    let mut pieces = Vec::new();
    for (ca, ta) in &sa.terms {
        for (cb, tb) in &sb.terms {
            let out = solver.conv_regular(ta, tb).map_err(err)?;
            if main.is_none() {
                main = Some(out.1.clone());
            }
            let p = &out.0;
            let c = ca * cb;
            pieces.push(ConvPiece { seq: scale(c, inv_shift_zero(p.seq.clone(), 2 * n)), ann: p.ann.inv_shift_zero(2 * n) });
        }
    }
    let ann_a = side_ann(&sa, n, hyper_nest_ann);
    let ann_b = side_ann(&sb, n, phi_nest_ann);
    for (k, c) in sb.correction.iter().enumerate() {
        if !c.is_zero() {
            pieces.push(ConvPiece { seq: scale(c.clone(), inv_shift_zero(a.clone(), k as u64)), ann: ann_a.inv_shift_zero(k as u64) });
        }
    }
    for (k, c) in sa.correction.iter().enumerate() {
        if !c.is_zero() {
            pieces.push(ConvPiece { seq: scale(c.clone(), inv_shift_zero(b.clone(), k as u64)), ann: ann_b.inv_shift_zero(k as u64) });
        }
    }
    let mut ee = vec![Rat::zero(); sa.correction.len() + sb.correction.len()];
    for (i, x) in sa.correction.iter().enumerate() {
        for (j, y) in sb.correction.iter().enumerate() {
            ee[i + j] += x * y;
        }
    }
    if ee.iter().any(|x| !x.is_zero()) {
        let neg: Vec<Rat> = ee.iter().map(|x| -x).collect();
        pieces.push(ConvPiece { ann: fin_ann(&neg), seq: fin(neg) });
    }
    let total = sum(pieces);
    let ann = total.ann.finalize(&total.seq).map_err(|e| err(e.into()))?;
    Ok(ConvResult { seq: total.seq, ann, main, threshold: n, swapped: false })
}

fn parts(e: &Seq) -> Vec<Seq> {
    match &**e {
        SeqExpr::Interlace(ps) => ps.clone(),
        _ => vec![e.clone()],
    }
}

/// Section `e_{ℓn+r}` of an interlacing of `m | ℓ` parts.
fn section(ps: &[Seq], l: u64, r: u64) -> Result<Seq, ConvError> {
    let m = ps.len() as u64;
    let part = &ps[(r % m) as usize];
    Ok(multisect_rep(&mut Evaluator::new(), part, l / m, r / m)?)
}

/// Convolution of interlacings: `u` with d'Alembertian parts and `v` with
/// (quasi-)rationally d'Alembertian parts. Returns the interlacing of the
/// `ℓ = lcm(m, k)` parts together with each part's result.
pub fn conv_liouvillian(u: &Seq, v: &Seq) -> Result<(Seq, Vec<ConvResult>), ConvError> {
    let (pu, pv) = (parts(u), parts(v));
    let l = (pu.len() as u64).lcm(&(pv.len() as u64));
    let a: Vec<Seq> = (0..l).map(|r| section(&pu, l, r)).collect::<Result<_, _>>()?;
    let b: Vec<Seq> = (0..l).map(|r| section(&pv, l, r)).collect::<Result<_, _>>()?;
    let mut cache: BTreeMap<(usize, usize), ConvResult> = BTreeMap::new();
    let mut out = Vec::new();
    for r in 0..l as usize {
        let mut direct = Vec::new();
        let mut wrapped = Vec::new();
        for j in 0..l as usize {
            let k = if j <= r { r - j } else { r + l as usize - j };
            if !cache.contains_key(&(j, k)) {
                cache.insert((j, k), conv_dalembert(&a[j], &b[k])?);
            }
            let c = cache[&(j, k)].clone();
            if j <= r {
                direct.push(ConvPiece { seq: c.seq, ann: c.ann });
            } else {
                wrapped.push(ConvPiece { seq: c.seq, ann: c.ann });
            }
        }
        let w = sum(wrapped);
        let mut all = direct;
        if !w.ann.factors.is_empty() {
            all.push(ConvPiece { seq: inv_shift_zero(w.seq, 1), ann: w.ann.inv_shift_zero(1) });
        }
        let g = sum(all);
        let ann = g.ann.finalize(&g.seq)?;
        out.push(ConvResult { seq: g.seq, ann, main: None, threshold: 0, swapped: false });
    }
    let seq = if out.len() == 1 { out[0].seq.clone() } else { interlace(out.iter().map(|r| r.seq.clone()).collect()) };
    Ok((seq, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::first_violation;
    use crate::exact::{frac, rat, Poly, RatFun};
    use crate::seqrep::eval::cauchy;

    fn vals(e: &Seq, n: usize) -> Vec<Rat> {
        Evaluator::new().prefix(e, n).unwrap()
    }

    fn harmonic() -> Seq {
        psum(rational(RatFun::new(Poly::one(), Poly::var()), vec![rat(0)]))
    }

    fn factorial() -> Seq {
        hyper(Poly::from_ints(&[1, 1]), Poly::one(), vec![rat(1)])
    }

    fn check(a: &Seq, b: &Seq, n: usize) -> ConvResult {
        let r = conv_dalembert(a, b).unwrap();
        let want = cauchy(&vals(a, n), &vals(b, n));
        assert_eq!(vals(&r.seq, n), want);
        assert!(first_violation(&r.ann.compose(), &r.seq, 0, n as u64).unwrap().is_none(), "{}", r.ann);
        assert!(r.ann.factors.iter().all(|f| f.max_exp() == 1));
        r
    }

    #[test]
    fn worked_example_through_the_driver() {
        let a = hyper(Poly::from_ints(&[2, 2]), Poly::one(), vec![frac(1, 2)]);
        let b = rational(RatFun::new(Poly::one(), Poly::new(vec![frac(1, 2), rat(1)])), vec![]);
        let r = check(&a, &b, 30);
        assert_eq!(r.threshold, 0);
        assert_eq!(r.ann.order(), 4);
    }

    #[test]
    fn delta_is_the_identity() {
        let b = rational(RatFun::new(Poly::one(), Poly::from_ints(&[3, 1])), vec![]);
        let r = check(&delta(), &b, 20);
        assert_eq!(vals(&r.seq, 20), vals(&b, 20));
    }

    #[test]
    fn harmonic_convolutions() {
        let h = harmonic();
        let r = check(&h, &h, 30);
        let expected = {
            let f = ShiftOp::first_order(RatFun::from(Poly::from_ints(&[3, 1])), RatFun::from(Poly::from_ints(&[2, 1])));
            let g = &ShiftOp::e(1) - &ShiftOp::one();
            &(&(&f * &f) * &g) * &g
        };
        assert!(first_violation(&expected, &r.seq, 0, 30).unwrap().is_none());
        check(&factorial(), &h, 25);
    }

    #[test]
    fn swaps_and_refuses() {
        let b = rational(RatFun::new(Poly::one(), Poly::from_ints(&[1, 1])), vec![]);
        let r = check(&b, &factorial(), 20);
        assert!(r.swapped);
        let inv = hyper(Poly::one(), Poly::from_ints(&[1, 1]), vec![rat(1)]);
        assert!(matches!(conv_dalembert(&factorial(), &inv), Err(ConvError::NotRationallyDAlembertian(_))));
    }

    #[test]
    fn thresholds_and_corrections() {
        let a = add(factorial(), fin(vec![rat(3), rat(-1)]));
        let b = rational(RatFun::new(Poly::one(), Poly::from_ints(&[-1, 1])), vec![rat(5), rat(7)]);
        let r = check(&a, &b, 20);
        assert_eq!(r.threshold, 2);
    }

    #[test]
    fn interlaced_double_factorial() {
        let even = hyper(Poly::from_ints(&[2, 2]), Poly::one(), vec![rat(1)]);
        let odd = hyper(Poly::from_ints(&[3, 2]), Poly::one(), vec![rat(1)]);
        let u = interlace(vec![even, odd]);
        let v = rational(RatFun::new(Poly::one(), Poly::from_ints(&[1, 1])), vec![]);
        let (seq, parts) = conv_liouvillian(&u, &v).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(vals(&seq, 30), cauchy(&vals(&u, 30), &vals(&v, 30)));
        for p in &parts {
            assert!(first_violation(&p.ann.compose(), &p.seq, 0, 15).unwrap().is_none());
        }
    }
}
