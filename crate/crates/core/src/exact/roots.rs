use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::poly::Poly;
use super::rat::{as_natural, divisors, from_big, Rat};
use super::ExactError;

/// Rational roots of `p` with multiplicities, sorted by root.
/// Irrational and complex roots are not reported.
pub fn rational_roots(p: &Poly) -> Result<Vec<(Rat, u32)>, ExactError> {
    if p.is_zero() {
        return Err(ExactError::ZeroPolynomial);
    }
    let mut ints = p.integer_coeffs();
    let mut out = Vec::new();

    let mut zero_mult = 0;
    while ints.len() > 1 && ints[0].is_zero() {
        ints.remove(0);
        zero_mult += 1;
    }
    if zero_mult > 0 {
        out.push((Rat::zero(), zero_mult));
    }
    if ints.len() <= 1 {
        return Ok(out);
    }

    let mut cur = Poly::new(ints.iter().cloned().map(from_big).collect());
    let nums = divisors(&ints[0]);
    let dens = divisors(ints.last().unwrap());
    let mut candidates: Vec<Rat> = Vec::new();
    for d in &dens {
        for n in &nums {
            let r = Rat::new(n.clone(), d.clone());
            candidates.push(r.clone());
            candidates.push(-r);
        }
    }
    candidates.sort();
    candidates.dedup();

    for r in candidates {
        if cur.degree().unwrap_or(0) == 0 {
            break;
        }
        let mut mult = 0;
        while cur.degree().unwrap_or(0) > 0 && cur.eval(&r).is_zero() {
            cur = cur.div_exact(&Poly::linear_root(&r)).expect("root divides");
            mult += 1;
        }
        if mult > 0 {
            out.push((r, mult));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// Nonnegative integer roots (without multiplicity). Candidates are the
/// divisors of the trailing coefficient below a Fujiwara root bound.
pub fn natural_roots(p: &Poly) -> Vec<u64> {
    if p.is_zero() {
        return Vec::new();
    }
    let ints = p.integer_coeffs();
    let mut out = Vec::new();
    let mut start = 0;
    while start < ints.len() - 1 && ints[start].is_zero() {
        start += 1;
    }
    if start > 0 {
        out.push(0);
    }
    let cs = &ints[start..];
    if cs.len() <= 1 {
        return out;
    }
    let d = cs.len() - 1;
    let lead = cs[d].abs();
    let mut bound = BigInt::zero();
    for i in 1..=d {
        let a = cs[d - i].abs();
        if a.is_zero() {
            continue;
        }
        let ratio = (&a + &lead - BigInt::one()) / &lead;
        let r = ratio.nth_root(i as u32) + BigInt::one();
        if r > bound {
            bound = r;
        }
    }
    bound *= 2;
    let trailing = &cs[0];
    match u64::try_from(&bound) {
        Ok(b) if b <= 1_000_000 => {
            for r in 1..=b {
                let rb = BigInt::from(r);
                if !(trailing % &rb).is_zero() {
                    continue;
                }
                let mut acc = BigInt::zero();
                for c in cs.iter().rev() {
                    acc = acc * &rb + c;
                }
                if acc.is_zero() {
                    out.push(r);
                }
            }
        }
        _ => {
            for (r, _) in rational_roots(p).unwrap_or_default() {
                if let Some(v) = as_natural(&r) {
                    if v > 0 {
                        out.push(v);
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// All integer roots (positive, zero and negative).
pub fn integer_roots(p: &Poly) -> Vec<i64> {
    rational_roots(p)
        .unwrap_or_default()
        .into_iter()
        .filter(|(r, _)| r.denom().is_one())
        .filter_map(|(r, _)| i64::try_from(r.numer().clone()).ok())
        .collect()
}
