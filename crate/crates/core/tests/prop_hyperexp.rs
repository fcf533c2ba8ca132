mod common;

use common::*;
use num_traits::Zero;
use proptest::prelude::*;
use seqconv::closure::{annihilate, conv_annihilator_via_gf};
use seqconv::exact::{rat, Poly, Rat, RatFun};
use seqconv::hyperexp::{hyperexp_factor, HyperExpRate};
use seqconv::ore::ShiftOp;
use seqconv::seqrep::*;

const N: i64 = 30;

/// Taylor coefficients of `g` with `g' = r g`, `g(0) = 1`.
fn rate_series(r: &RatFun, n: usize) -> Vec<Rat> {
    let (p, q) = (r.num(), r.den());
    let q0 = q.coeff(0).recip();
    let mut rs: Vec<Rat> = Vec::with_capacity(n);
    for k in 0..n {
        let mut c = p.coeff(k);
        for j in 1..=k.min(q.degree().unwrap_or(0)) {
            c -= q.coeff(j) * &rs[k - j];
        }
        rs.push(c * &q0);
    }
    let mut g = vec![rat(1)];
    for m in 0..n - 1 {
        let s: Rat = (0..=m).map(|k| &rs[k] * &g[m - k]).sum();
        g.push(s / rat(m as i64 + 1));
    }
    g
}

fn padded_zero(l: &ShiftOp, v: &[Rat]) -> bool {
    (-(l.order() as i64)..=N).all(|n| l.apply_padded(v, n).unwrap().is_zero())
}

fn rates() -> impl Strategy<Value = (RatFun, Seq)> {
    prop_oneof![
        Just((RatFun::one(), hyper(Poly::one(), Poly::from_ints(&[1, 1]), vec![rat(1)]))),
        Just((RatFun::from_int(2), hyper(Poly::from_ints(&[2]), Poly::from_ints(&[1, 1]), vec![rat(1)]))),
        Just((RatFun::new(Poly::one(), Poly::from_ints(&[1, -1])), rational(RatFun::one(), vec![]))),
    ]
}

fn cofactor() -> impl Strategy<Value = Seq> {
    let lin = (1i64..=2, 1i64..=3).prop_map(|(k, c)| Poly::from_ints(&[c, k]));
    prop_oneof![
        (lin.clone(), lin.clone(), nonzero_rat()).prop_map(|(p, q, c)| hyper(p, q, vec![c])),
        (small_poly(1), lin).prop_map(|(p, q)| rational(RatFun::new(p, q), vec![])),
        (nonzero_rat(), 0u32..=2).prop_map(|(a, j)| quasi(a, QuasiForm::PolyPower(j))),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn zero_rate_round_trip(l in poly_shift_op(2, 4, 2).prop_filter("order at least 2", |l| l.order() >= 2)) {
        prop_assert_eq!(hyperexp_factor(&l, &HyperExpRate(RatFun::zero())).unwrap(), l.canonical());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn kernels_correspond(
        (r, a) in rates(),
        b in cofactor(),
        perturb in prop::option::of((0usize..4, nonzero_rat())),
    ) {
        let la = annihilate(&a).unwrap();
        let lb = annihilate(&b).unwrap();
        prop_assume!(la.valid_from == 0 && lb.valid_from == 0);
        let l = conv_annihilator_via_gf(la.ann.as_ref().unwrap(), lb.ann.as_ref().unwrap(), &a, &b).unwrap().canonical();
        prop_assume!(l.order() >= 2);
        let lp = hyperexp_factor(&l, &HyperExpRate(r.clone())).unwrap();

        let len = (N + 1) as usize + l.max_exp().max(lp.max_exp()) as usize;
        let mut bv = values(&b, len);
        if let Some((k, c)) = &perturb {
            bv[*k] += c;
        }
        let av = rate_series(&r, len);
        prop_assert_eq!(&av[..len.min(20)], &values(&a, len.min(20))[..]);
        let abv = brute_conv(&av, &bv);
        let lhs = padded_zero(&l, &abv);
        let rhs = padded_zero(&lp, &bv);
        prop_assert_eq!(lhs, rhs, "L = {}, L' = {}", l, lp);
        if perturb.is_none() {
            prop_assert!(lhs, "L = {} misses a*b", l);
        }
    }
}
