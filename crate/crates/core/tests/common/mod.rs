#![allow(dead_code)]

use proptest::prelude::*;
use seqconv::exact::{frac, rat, Poly, Rat, RatFun};
use seqconv::ore::{DiffOp, Laurent, ShiftOp};
use seqconv::seqrep::*;

pub fn small_rat() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| frac(n, d))
}

pub fn nonzero_rat() -> impl Strategy<Value = Rat> {
    (1i64..=6, 1i64..=4, any::<bool>()).prop_map(|(n, d, s)| frac(if s { n } else { -n }, d))
}

pub fn small_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(-4i64..=4, 1..=max_deg + 1).prop_map(|cs| Poly::from_ints(&cs))
}

pub fn nonzero_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    small_poly(max_deg).prop_map(|p| if p.is_zero() { Poly::one() } else { p })
}

/// Products of `(k n + c)` with `c > 0`: no roots in ℕ.
pub fn root_free_poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((1i64..=2, 1i64..=5), 0..=2).prop_map(|fs| {
        fs.iter().fold(Poly::one(), |acc, (k, c)| &acc * &Poly::from_ints(&[*c, *k]))
    })
}

pub fn hyper_seq() -> impl Strategy<Value = Seq> {
    (root_free_poly(), root_free_poly(), nonzero_rat(), any::<bool>())
        .prop_map(|(p, q, a0, neg)| hyper(if neg { -&p } else { p }, q, vec![a0]))
}

pub fn rational_seq() -> impl Strategy<Value = Seq> {
    (small_poly(1), root_free_poly()).prop_map(|(p, q)| rational(RatFun::new(p, q), vec![]))
}

pub fn quasi_form() -> impl Strategy<Value = QuasiForm> {
    prop_oneof![
        (0u32..=2).prop_map(QuasiForm::PolyPower),
        (prop::sample::select(vec![frac(-1, 1), frac(-1, 2), frac(-3, 2), frac(-2, 1), frac(1, 3)]), 1u32..=2)
            .prop_map(|(b, j)| QuasiForm::PolePower(b, j)),
    ]
}

pub fn quasi_seq() -> impl Strategy<Value = Seq> {
    (nonzero_rat(), quasi_form()).prop_map(|(a, f)| quasi(a, f))
}

pub fn fin_values() -> impl Strategy<Value = Vec<Rat>> {
    prop::collection::vec(small_rat(), 0..=4)
}

pub fn leaf_seq() -> impl Strategy<Value = Seq> {
    prop_oneof![hyper_seq(), rational_seq(), quasi_seq(), fin_values().prop_map(fin), Just(delta())]
}

/// Random representation tree of bounded size.
pub fn seq_expr() -> impl Strategy<Value = Seq> {
    leaf_seq().prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            (small_rat(), inner.clone(), small_rat(), inner.clone())
                .prop_map(|(c, a, d, b)| lincomb(vec![c, d], vec![a, b])),
            inner.clone().prop_map(psum),
            (inner.clone(), inner.clone(), 0u64..=2).prop_map(|(a, b, k)| nested(vec![a, b], vec![k])),
            (inner.clone(), 1u64..=2).prop_map(|(a, k)| shift(a, k)),
            (inner.clone(), small_rat()).prop_map(|(a, l)| inv_shift(a, l)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| product(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| conv(a, b)),
        ]
    })
}

/// Trees that also use interlacing, zero-interlacing and multisection.
pub fn seq_expr_wide() -> impl Strategy<Value = Seq> {
    prop_oneof![
        seq_expr(),
        prop::collection::vec(seq_expr(), 1..=3).prop_map(interlace),
        (seq_expr(), 1u64..=3).prop_map(|(a, m)| zero_interlace(a, m)),
        (seq_expr(), 1u64..=3, 0u64..=2).prop_map(|(a, m, r)| multisect(a, m, r % m)),
    ]
}

pub fn ratfun_coef() -> impl Strategy<Value = RatFun> {
    prop_oneof![
        3 => small_poly(2).prop_map(RatFun::from),
        1 => (small_poly(1), root_free_poly()).prop_map(|(p, q)| RatFun::new(p, q)),
    ]
}

pub fn shift_op() -> impl Strategy<Value = ShiftOp> {
    prop::collection::vec((-2i64..=3, ratfun_coef()), 1..=4).prop_map(ShiftOp::from_terms)
}

/// Polynomial coefficients, exponents `0..=ord`, nonzero leading term.
pub fn poly_shift_op(min_ord: usize, max_ord: usize, deg: usize) -> impl Strategy<Value = ShiftOp> {
    (min_ord..=max_ord)
        .prop_flat_map(move |ord| (prop::collection::vec(small_poly(deg), ord..=ord), nonzero_poly(deg)))
        .prop_map(|(mut cs, lead)| {
            cs.push(lead);
            ShiftOp::from_polys(&cs)
        })
}

pub fn laurent() -> impl Strategy<Value = Laurent> {
    prop::collection::vec((-2i64..=2, small_rat()), 1..=3).prop_map(|ts| {
        ts.into_iter().fold(Laurent::default(), |acc, (m, c)| &acc + &Laurent::monomial(c, m))
    })
}

pub fn diff_op() -> impl Strategy<Value = DiffOp> {
    prop::collection::vec((0u32..=3, laurent()), 1..=3).prop_map(DiffOp::from_terms)
}

pub fn values(e: &Seq, n: usize) -> Vec<Rat> {
    Evaluator::new().prefix(e, n).expect("defined terms")
}

pub fn brute_conv(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    (0..a.len().min(b.len()))
        .map(|n| (0..=n).fold(rat(0), |acc, k| acc + &a[k] * &b[n - k]))
        .collect()
}

/// True when `l` annihilates the padded sequence `v` at every `n` in `from..=to`.
pub fn annihilates(l: &ShiftOp, v: &[Rat], from: i64, to: i64) -> bool {
    (from..=to).all(|n| matches!(l.apply_padded(v, n), Ok(x) if x == rat(0)))
}
