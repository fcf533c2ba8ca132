use crate::exact::linalg::nullspace;
use crate::exact::RatFun;

use super::ShiftOp;

/// Remainders of `E^0, E^1, …, E^kmax` modulo the left ideal generated by `l`,
/// each as a coefficient vector of length `ord l` in the basis `1, E, …`.
pub(crate) fn shift_remainders(l: &ShiftOp, kmax: usize) -> Vec<Vec<RatFun>> {
    let l = l.canonical();
    let r = l.order();
    let lead = l.lead();
    let red: Vec<RatFun> = (0..r).map(|i| -&(&l.coeff(i as i64) / &lead)).collect();
    let mut out = Vec::with_capacity(kmax + 1);
    let mut cur: Vec<RatFun> = (0..r).map(|i| if i == 0 { RatFun::one() } else { RatFun::zero() }).collect();
    for k in 0..=kmax {
        if k > 0 {
            // E · Σ v_i E^i = Σ v_i(n+1) E^{i+1}
            let mut next = vec![RatFun::zero(); r];
            let top = cur[r - 1].shift_i(1);
            for i in 0..r - 1 {
                next[i + 1] = cur[i].shift_i(1);
            }
            if !top.is_zero() {
                for i in 0..r {
                    next[i] = &next[i] + &(&top * &red[i]);
                }
            }
            cur = next;
        }
        out.push(cur.clone());
    }
    out
}

/// Finds the smallest `K` in `lo..=hi` such that the columns `0..=K` of
/// `rows(k)` are dependent, and returns the dependency as an operator.
fn first_dependency(cols: &[Vec<RatFun>], lo: usize) -> Option<ShiftOp> {
    let dim = cols[0].len();
    for kk in lo..cols.len() {
        let rows: Vec<Vec<RatFun>> = (0..dim).map(|i| (0..=kk).map(|k| cols[k][i].clone()).collect()).collect();
        let ns = nullspace(&rows, kk + 1);
        if let Some(v) = ns.into_iter().find(|v| !v[kk].is_zero()) {
            let op = ShiftOp::from_terms(v.into_iter().enumerate().map(|(k, c)| (k as i64, c)));
            let m = op.min_exp();
            return Some(&ShiftOp::e(m) * &op.canonical());
        }
    }
    None
}

/// Least common left multiple of two recurrence operators.
pub fn lclm(l1: &ShiftOp, l2: &ShiftOp) -> ShiftOp {
    lclm_raw(l1, l2).canonical()
}

/// Annihilator of termwise products `a·b` with `l1(a) = 0`, `l2(b) = 0`.
pub fn hadamard(l1: &ShiftOp, l2: &ShiftOp) -> ShiftOp {
    hadamard_raw(l1, l2).canonical()
}

/// The dependency `Σ_{k ≥ 0} c_k E^k` found for the lclm, before any
/// leading `E` power is stripped.
pub(crate) fn lclm_raw(l1: &ShiftOp, l2: &ShiftOp) -> ShiftOp {
    let a = l1.canonical();
    let b = l2.canonical();
    let (r1, r2) = (a.order(), b.order());
    if r1 == 0 {
        return b;
    }
    if r2 == 0 {
        return a;
    }
    let kmax = r1 + r2;
    let ra = shift_remainders(&a, kmax);
    let rb = shift_remainders(&b, kmax);
    let cols: Vec<Vec<RatFun>> = ra.into_iter().zip(rb).map(|(mut x, y)| {
        x.extend(y);
        x
    })
    .collect();
    first_dependency(&cols, r1.max(r2)).expect("lclm exists within ord L1 + ord L2")
}

pub(crate) fn hadamard_raw(l1: &ShiftOp, l2: &ShiftOp) -> ShiftOp {
    let a = l1.canonical();
    let b = l2.canonical();
    let (r1, r2) = (a.order(), b.order());
    if r1 == 0 || r2 == 0 {
        return ShiftOp::one();
    }
    let kmax = r1 * r2;
    let ra = shift_remainders(&a, kmax);
    let rb = shift_remainders(&b, kmax);
    let cols: Vec<Vec<RatFun>> = ra
        .iter()
        .zip(&rb)
        .map(|(x, y)| {
            let mut v = Vec::with_capacity(r1 * r2);
            for xi in x {
                for yj in y {
                    v.push(xi * yj);
                }
            }
            v
        })
        .collect();
    first_dependency(&cols, 1).expect("product annihilator exists within ord L1 · ord L2")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, Poly, Rat};

    fn geo(c: i64) -> ShiftOp {
        ShiftOp::first_order(RatFun::one(), RatFun::from_int(c))
    }

    #[test]
    fn lclm_of_geometric_operators() {
        let l = lclm(&geo(1), &geo(2));
        assert_eq!(l.order(), 2);
        assert!(l.right_divides(&geo(1)) && l.right_divides(&geo(2)));
        for n in 0..30 {
            let v = l.apply_at(|i| rat(1) + Rat::from_integer(num_bigint::BigInt::from(2).pow(i as u32)), n);
            assert_eq!(v.unwrap(), rat(0));
        }
        assert!(lclm(&geo(3), &geo(3)).eq_up_to_unit(&geo(3)));
    }

    #[test]
    fn hadamard_of_geometric() {
        assert!(hadamard(&geo(2), &geo(3)).eq_up_to_unit(&geo(6)));
        let fact = ShiftOp::first_order(RatFun::one(), RatFun::from(Poly::from_ints(&[1, 1])));
        assert!(hadamard(&fact, &geo(1)).eq_up_to_unit(&fact));
    }
}
