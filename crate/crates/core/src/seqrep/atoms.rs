use num_traits::{One, Zero};

use crate::exact::rat::{binomial, from_big, pow_i, rat};
use crate::exact::{Poly, Rat, RatFun};

use super::eval::Evaluator;
use super::expr::*;
use super::SeqError;

/// True for the leaf forms and the structural wrappers that keep a single
/// atom an atom (shifts, inverse shifts, sections, termwise products).
pub fn is_atom_like(e: &SeqExpr) -> bool {
    match e {
        SeqExpr::Hypergeom { .. } | SeqExpr::Rational { .. } | SeqExpr::Quasi { .. } => true,
        SeqExpr::Shift { inner, .. } | SeqExpr::InvShift { inner, .. } | SeqExpr::Multisect { inner, .. } => {
            is_atom_like(inner)
        }
        SeqExpr::Product(a, b) => is_atom_like(a) && is_atom_like(b),
        _ => false,
    }
}

/// Section `a_{mn+r}` of an atom, as an atom of the same class (quasi-rational
/// powers come back as a linear combination of quasi-rational atoms).
pub fn msect_atom(a: &Seq, m: u64, r: u64) -> Result<Seq, SeqError> {
    if m == 0 || r >= m {
        return Err(SeqError::InvalidAtom(format!("bad section ({m}, {r})")));
    }
    if m == 1 {
        return Ok(a.clone());
    }
    let (mq, rq) = (rat(m as i64), rat(r as i64));
    Ok(match &**a {
        SeqExpr::Hypergeom { p, q, .. } => {
            let mut p2 = Poly::one();
            let mut q2 = Poly::one();
            for i in 0..m {
                let off = rat((r + i) as i64);
                p2 = &p2 * &p.compose_affine(&mq, &off);
                q2 = &q2 * &q.compose_affine(&mq, &off);
            }
            let need = q2.max_natural_root().map_or(1, |x| x as usize + 2);
            let vals = Evaluator::new().prefix(a, (need - 1) * m as usize + r as usize + 1)?;
            let init = (0..need).map(|n| vals[n * m as usize + r as usize].clone()).collect();
            hyper(p2, q2, init)
        }
        SeqExpr::Rational { r: f, prefix } => {
            let g = f.compose_affine(&mq, &rq);
            let mut len = 0usize;
            let pole = f.max_natural_pole().map_or(0, |x| x as usize + 1);
            let bound = prefix.len().max(pole);
            while len * (m as usize) + (r as usize) < bound {
                len += 1;
            }
            let vals = if len > 0 {
                Evaluator::new().prefix(a, (len - 1) * m as usize + r as usize + 1)?
            } else {
                Vec::new()
            };
            let pre = (0..len).map(|n| vals[n * m as usize + r as usize].clone()).collect();
            rational(g, pre)
        }
        SeqExpr::Quasi { alpha, form } => {
            let am = pow_i(alpha, m as i64);
            let ar = pow_i(alpha, r as i64);
            match form {
                QuasiForm::PolyPower(j) => {
                    // (mn + r)^j = Σ_i C(j,i) m^i r^{j-i} n^i
                    let mut cs = Vec::new();
                    let mut ts = Vec::new();
                    for i in 0..=*j {
                        let c = from_big(binomial(*j as u64, i as u64))
                            * pow_i(&mq, i as i64)
                            * pow_i(&rq, (*j - i) as i64)
                            * &ar;
                        if !c.is_zero() {
                            cs.push(c);
                            ts.push(quasi(am.clone(), QuasiForm::PolyPower(i)));
                        }
                    }
                    lincomb(cs, ts)
                }
                QuasiForm::PolePower(beta, j) => {
                    let b2 = (beta - &rq) / &mq;
                    let c = ar * pow_i(&mq, -(*j as i64));
                    scale(c, quasi(am, QuasiForm::PolePower(b2, *j)))
                }
            }
        }
        _ => msect_seq(a, m, r)?,
    })
}

/// Structural section of any expression; atoms go through [`msect_atom`].
pub fn msect_seq(e: &Seq, m: u64, r: u64) -> Result<Seq, SeqError> {
    if m == 1 {
        return Ok(e.clone());
    }
    Ok(match &**e {
        SeqExpr::Hypergeom { .. } | SeqExpr::Rational { .. } | SeqExpr::Quasi { .. } => msect_atom(e, m, r)?,
        SeqExpr::Delta => {
            if r == 0 {
                delta()
            } else {
                zero_seq()
            }
        }
        SeqExpr::FinSupport(v) => {
            let out: Vec<Rat> = (0..)
                .map(|n: usize| n * m as usize + r as usize)
                .take_while(|&i| i < v.len())
                .map(|i| v[i].clone())
                .collect();
            fin(out)
        }
        SeqExpr::Shift { inner, k } => {
            let t = r + k;
            shift(msect_seq(inner, m, t % m)?, t / m)
        }
        SeqExpr::InvShift { inner, lambda } => {
            if r >= 1 {
                msect_seq(inner, m, r - 1)?
            } else {
                inv_shift(msect_seq(inner, m, m - 1)?, lambda.clone())
            }
        }
        SeqExpr::Multisect { inner, m: m1, r: r1 } => msect_seq(inner, m1 * m, m1 * r + r1)?,
        SeqExpr::Product(a, b) => product(msect_seq(a, m, r)?, msect_seq(b, m, r)?),
        SeqExpr::LinComb { coeffs, terms } => {
            let ts = terms.iter().map(|t| msect_seq(t, m, r)).collect::<Result<Vec<_>, _>>()?;
            lincomb(coeffs.clone(), ts)
        }
        SeqExpr::Interlace(parts) => {
            let k = parts.len() as u64;
            // c_{mn+r} with c_j = parts[j mod k]_{j div k}
            if m % k == 0 {
                let part = &parts[(r % k) as usize];
                msect_seq(part, m / k, r / k)?
            } else {
                multisect(e.clone(), m, r)
            }
        }
        _ => multisect(e.clone(), m, r),
    })
}

/// `α^n R(n)` view of a quasi-rational atom, if it is one.
pub fn quasi_rational_view(e: &SeqExpr) -> Option<(Rat, RatFun)> {
    match e {
        SeqExpr::Rational { r, .. } => Some((Rat::one(), r.clone())),
        SeqExpr::Quasi { alpha, form } => {
            let r = match form {
                QuasiForm::PolyPower(j) => RatFun::from(Poly::var().pow(*j)),
                QuasiForm::PolePower(b, j) => RatFun::new(Poly::one(), Poly::linear_root(b).pow(*j)),
            };
            Some((alpha.clone(), r))
        }
        SeqExpr::Hypergeom { p, q, initial } if p.is_constant() && q.is_constant() => {
            let alpha = p.coeff(0) / q.coeff(0);
            let h0 = initial.first().cloned().unwrap_or_else(Rat::zero);
            Some((alpha, RatFun::constant(h0)))
        }
        _ => None,
    }
}
