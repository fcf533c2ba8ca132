mod common;

use common::*;
use num_traits::{One, Zero};
use proptest::prelude::*;
use seqconv::exact::{partial_fractions, Poly, RatFun};

fn split_den() -> impl Strategy<Value = Poly> {
    prop::collection::vec((-3i64..=3, 1i64..=2), 1..=3)
        .prop_map(|fs| fs.iter().fold(Poly::one(), |acc, (c, k)| &acc * &Poly::from_ints(&[*c, *k])))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn field_axioms(a in small_rat(), b in small_rat(), c in small_rat()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a + &(-&a)).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.recip()).is_one());
        }
    }

    #[test]
    fn partial_fractions_recombine(p in small_poly(4), d in split_den()) {
        let r = RatFun::new(p, d);
        let pf = partial_fractions(&r).unwrap();
        prop_assert_eq!(pf.recombine(), r);
    }

    #[test]
    fn division_with_remainder(p in small_poly(5), d in nonzero_poly(3)) {
        let (q, rem) = p.div_rem(&d);
        prop_assert_eq!(&(&q * &d) + &rem, p);
        if !rem.is_zero() {
            prop_assert!(rem.degree() < d.degree());
        }
    }
}
