mod common;

use common::*;
use nilpotent::{normal_form, Coords, ExpWord, MalcevGroup, QuotientPresentation};
use num_bigint::BigInt;
use proptest::prelude::*;

fn group(seed: u64) -> QuotientPresentation {
    let mut r = rng(seed);
    let (cl, rank) = [(1, 2), (2, 2), (3, 2), (2, 3)][(seed % 4) as usize];
    random_quotient(&mut r, cl, rank)
}

fn arb_word(letters: usize) -> impl Strategy<Value = ExpWord> {
    prop::collection::vec((0..letters, -1000i64..=1000), 0..12)
        .prop_map(|f| ExpWord::from_factors(f.into_iter().map(|(l, e)| (l, BigInt::from(e)))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normal_form_is_a_homomorphism(seed in 0u64..200, w1 in arb_word(2), w2 in arb_word(2)) {
        let p = group(seed);
        let joined = w1.concat(&w2);
        let lhs = normal_form(&p, &joined).unwrap();
        let rhs = p.mul(&normal_form(&p, &w1).unwrap(), &normal_form(&p, &w2).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn multiplication_is_associative(seed in 0u64..200, s in 0u64..1000) {
        let p = group(seed);
        let mut r = rng(s);
        let [x, y, z]: [Coords; 3] = std::array::from_fn(|_| random_element(&mut r, &p, 30));
        prop_assert_eq!(p.mul(&p.mul(&x, &y), &z), p.mul(&x, &p.mul(&y, &z)));
    }

    #[test]
    fn reduction_is_idempotent_and_inverse_cancels(seed in 0u64..200, s in 0u64..1000) {
        let p = group(seed);
        let mut r = rng(s);
        let x = random_element(&mut r, &p, 50);
        prop_assert!(p.is_reduced(&x));
        prop_assert_eq!(p.reduce(&x), x.clone());
        prop_assert!(p.mul(&p.inv(&x), &x).is_identity());
    }

    #[test]
    fn powers_add(seed in 0u64..200, s in 0u64..1000, a in -40i64..=40, b in -40i64..=40) {
        let p = group(seed);
        let x = random_element(&mut rng(s), &p, 10);
        let lhs = p.pow(&x, &big(a + b));
        let rhs = p.mul(&p.pow(&x, &big(a)), &p.pow(&x, &big(b)));
        prop_assert_eq!(lhs, rhs);
    }
}
