mod common;

use common::*;
use proptest::prelude::*;
use seqconv::closure::{annihilate, conv_annihilator_via_gf, op_multisect_rep};
use seqconv::exact::{frac, rat, Poly, RatFun};
use seqconv::seqrep::*;

fn atom() -> impl Strategy<Value = Seq> {
    prop_oneof![hyper_seq(), rational_seq(), quasi_seq()]
}

fn linear_factor() -> impl Strategy<Value = Poly> {
    prop_oneof![Just(Poly::one()), (1i64..=2, 1i64..=4).prop_map(|(k, c)| Poly::from_ints(&[c, k]))]
}

fn light_hyper() -> impl Strategy<Value = Seq> {
    (linear_factor(), linear_factor(), nonzero_rat()).prop_map(|(p, q, a0)| hyper(p, q, vec![a0]))
}

fn light_atom() -> impl Strategy<Value = Seq> {
    prop_oneof![
        light_hyper(),
        (small_poly(1), linear_factor()).prop_map(|(p, q)| rational(RatFun::new(p, q), vec![])),
        (nonzero_rat(), 0u32..=1).prop_map(|(a, k)| quasi(a, QuasiForm::PolyPower(k))),
        (nonzero_rat(), prop::sample::select(vec![frac(-1, 1), frac(-1, 2)]))
            .prop_map(|(a, b)| quasi(a, QuasiForm::PolePower(b, 1))),
    ]
}

/// Linear combinations of nested sums of atoms, depth ≤ 3.
pub fn dalembert_seq() -> impl Strategy<Value = Seq> {
    let nest_s = (prop::collection::vec(atom(), 1..=3), prop::collection::vec(0u64..=1, 2))
        .prop_map(|(fs, os)| {
            let k = fs.len() - 1;
            nested(fs, os[..k].to_vec())
        });
    prop::collection::vec((nonzero_rat(), nest_s), 1..=2).prop_map(|ts| {
        let (cs, es): (Vec<_>, Vec<_>) = ts.into_iter().unzip();
        lincomb(cs, es)
    })
}

fn small_expr() -> impl Strategy<Value = Seq> {
    leaf_seq().prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            (small_rat(), inner.clone(), small_rat(), inner.clone())
                .prop_map(|(c, a, d, b)| lincomb(vec![c, d], vec![a, b])),
            inner.clone().prop_map(psum),
            (inner.clone(), 1u64..=2).prop_map(|(a, k)| shift(a, k)),
            (inner.clone(), small_rat()).prop_map(|(a, l)| inv_shift(a, l)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn annihilators_hold_from_their_threshold(e in small_expr()) {
        let s = annihilate(&e).unwrap();
        let l = s.ann.expect("annihilator for closure expressions");
        let v = s.valid_from as i64;
        let vals = values(&e, (v + 52 + l.max_exp()) as usize);
        prop_assert!(annihilates(&l, &vals, v, v + 50), "{} for {}", l, e);
    }

    #[test]
    fn products_and_convolutions_of_atoms(a in light_atom(), b in light_atom(), hadamard in any::<bool>()) {
        let e = if hadamard { product(a.clone(), b.clone()) } else { conv(a.clone(), b.clone()) };
        let s = annihilate(&e).unwrap();
        let l = s.ann.unwrap();
        let la = annihilate(&a).unwrap().ann.unwrap();
        let lb = annihilate(&b).unwrap().ann.unwrap();
        if hadamard {
            prop_assert!(l.order() <= la.order() * lb.order());
        }
        let v = s.valid_from as i64;
        let vals = values(&e, (v + 52 + l.max_exp()) as usize);
        prop_assert!(annihilates(&l, &vals, v, v + 50));
    }

    #[test]
    fn sums_have_bounded_order(a in atom(), b in atom()) {
        let la = annihilate(&a).unwrap().ann.unwrap();
        let lb = annihilate(&b).unwrap().ann.unwrap();
        let s = annihilate(&add(a, b)).unwrap().ann.unwrap();
        prop_assert!(s.order() <= la.order() + lb.order());
    }

    #[test]
    fn sections_of_nested_sums(e in dalembert_seq(), m in 1u64..=3, r in 0u64..=2) {
        let r = r % m;
        let sec = op_multisect_rep(&e, m, r).unwrap();
        let direct = values(&e, (m * 31) as usize);
        let got = values(&sec, 31);
        for n in 0..=30usize {
            prop_assert_eq!(&got[n], &direct[m as usize * n + r as usize]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn generating_function_oracle(a in light_hyper(), b in prop_oneof![light_hyper(), light_atom()]) {
        let la = annihilate(&a).unwrap();
        let lb = annihilate(&b).unwrap();
        prop_assume!(la.valid_from == 0 && lb.valid_from == 0);
        let l = conv_annihilator_via_gf(la.ann.as_ref().unwrap(), lb.ann.as_ref().unwrap(), &a, &b).unwrap();
        let vals = values(&conv(a, b), 45 + l.max_exp().max(0) as usize);
        prop_assert!(annihilates(&l, &vals, 0, 40));
        let _ = rat(0);
    }
}
