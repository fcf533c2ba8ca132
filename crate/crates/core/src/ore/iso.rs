use crate::exact::linalg::nullspace;
use crate::exact::rat::{binomial, from_big};
use crate::exact::{Poly, Rat, RatFun};

use super::diff::{ratdiff_mul, DiffOp, Laurent};
use super::ShiftOp;

/// Image under `n ↦ xD`, `E ↦ x⁻¹`, `E⁻¹ ↦ x`. Rational coefficients are
/// first cleared by a left polynomial factor.
pub fn iso_r(l: &ShiftOp) -> DiffOp {
    let l = if l.terms().values().all(|c| c.is_poly()) { l.clone() } else { l.clear_denominators() };
    let theta = &DiffOp::x_pow(1) * &DiffOp::d(1);
    let mut acc = DiffOp::zero();
    for (k, c) in l.terms() {
        let p = c.as_poly().expect("polynomial coefficient");
        let mut ptheta = DiffOp::zero();
        for a in p.coeffs().iter().rev() {
            ptheta = &(&ptheta * &theta) + &DiffOp::coef(Laurent::constant(a.clone()));
        }
        acc = &acc + &(&ptheta * &DiffOp::x_pow(-k));
    }
    acc
}

/// Inverse image under `x ↦ E⁻¹`, `x⁻¹ ↦ E`, `D ↦ (n+1)E`.
pub fn iso_rinv(m: &DiffOp) -> ShiftOp {
    let mut acc = ShiftOp::zero();
    for (i, c) in m.terms() {
        let i = *i as i64;
        // ((n+1)E)^i = (n+1)(n+2)…(n+i) E^i
        let mut rising = Poly::one();
        for t in 1..=i {
            rising = &rising * &Poly::from_ints(&[t, 1]);
        }
        for (mm, a) in c.terms() {
            let coef = RatFun::from(rising.shift_i(-mm).scale(a));
            acc = &acc + &ShiftOp::from_terms([(i - mm, coef)]);
        }
    }
    acc
}

/// `Σ c_i(x) (D + r)^i`, cleared to Laurent coefficients with content removed.
pub fn gauge_transform(m: &DiffOp, r: &RatFun) -> DiffOp {
    if r.is_zero() {
        return m.clone();
    }
    let cs = m.to_ratfuns();
    let step = vec![r.clone(), RatFun::one()];
    let mut pow = vec![RatFun::one()];
    let mut acc: Vec<RatFun> = Vec::new();
    for (i, c) in cs.iter().enumerate() {
        if i > 0 {
            pow = ratdiff_mul(&pow, &step);
        }
        if c.is_zero() {
            continue;
        }
        let term: Vec<RatFun> = pow.iter().map(|p| c * p).collect();
        if acc.len() < term.len() {
            acc.resize(term.len(), RatFun::zero());
        }
        for (j, t) in term.into_iter().enumerate() {
            acc[j] = &acc[j] + &t;
        }
    }
    DiffOp::from_ratfuns(&acc)
}

/// Remainders of `D^0..D^kmax` modulo the left ideal of `m` over ℚ(x).
fn diff_remainders(m: &[RatFun], kmax: usize) -> Vec<Vec<RatFun>> {
    let r = m.len() - 1;
    let lead = &m[r];
    let red: Vec<RatFun> = (0..r).map(|i| -&(&m[i] / lead)).collect();
    let mut cur: Vec<RatFun> = (0..r).map(|i| if i == 0 { RatFun::one() } else { RatFun::zero() }).collect();
    let mut out = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax {
        if k > 0 {
            // D · Σ v_i D^i = Σ v_i' D^i + v_i D^{i+1}
            let mut next: Vec<RatFun> = cur.iter().map(|v| v.derivative()).collect();
            for i in 0..r - 1 {
                next[i + 1] = &next[i + 1] + &cur[i];
            }
            let top = &cur[r - 1];
            if !top.is_zero() {
                for i in 0..r {
                    next[i] = &next[i] + &(top * &red[i]);
                }
            }
            cur = next;
        }
        out.push(cur.clone());
    }
    out
}

/// Annihilator of `u·v` for every `u` with `m1(u) = 0` and `v` with `m2(v) = 0`.
pub fn symmetric_product_diff(m1: &DiffOp, m2: &DiffOp) -> DiffOp {
    let a = m1.to_ratfuns();
    let b = m2.to_ratfuns();
    let (r1, r2) = (a.len() - 1, b.len() - 1);
    if r1 == 0 || r2 == 0 {
        return DiffOp::one();
    }
    let kmax = r1 * r2;
    let ra = diff_remainders(&a, kmax);
    let rb = diff_remainders(&b, kmax);
    let cols: Vec<Vec<RatFun>> = (0..=kmax)
        .map(|k| {
            let mut v = vec![RatFun::zero(); r1 * r2];
            for t in 0..=k {
                let c = RatFun::constant(from_big(binomial(k as u64, t as u64)));
                for (i, x) in ra[t].iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let cx = &c * x;
                    for (j, y) in rb[k - t].iter().enumerate() {
                        v[i * r2 + j] = &v[i * r2 + j] + &(&cx * y);
                    }
                }
            }
            v
        })
        .collect();
    let dim = r1 * r2;
    for kk in 1..=kmax {
        let rows: Vec<Vec<RatFun>> = (0..dim).map(|i| (0..=kk).map(|k| cols[k][i].clone()).collect()).collect();
        if let Some(v) = nullspace(&rows, kk + 1).into_iter().find(|v| !v[kk].is_zero()) {
            return DiffOp::from_ratfuns(&v);
        }
    }
    unreachable!("symmetric product exists within ord M1 · ord M2")
}

/// Exact series solution prefix `g(0) = 1`, `g' = r g`.
pub fn hyperexp_series(r: &RatFun, n: usize) -> Vec<Rat> {
    // q g' = p g with r = p/q, solved coefficientwise.
    let p = r.num();
    let q = r.den();
    let q0 = q.coeff(0);
    assert!(!num_traits::Zero::is_zero(&q0), "rate must be regular at 0");
    let mut g: Vec<Rat> = vec![crate::exact::rat(1)];
    for k in 0..n {
        // coefficient of x^k: Σ_i q_i (k-i+1) g_{k-i+1} = Σ_i p_i g_{k-i}
        let mut rhs = Rat::from_integer(0.into());
        for (i, pi) in p.coeffs().iter().enumerate() {
            if i <= k {
                rhs += pi * &g[k - i];
            }
        }
        for (i, qi) in q.coeffs().iter().enumerate().skip(1) {
            if i <= k {
                rhs -= qi * crate::exact::rat((k - i + 1) as i64) * &g[k - i + 1];
            }
        }
        g.push(rhs / (&q0 * crate::exact::rat(k as i64 + 1)));
    }
    g
}
