use gdet::measure::{cyclic_measure_with, Strategy as Method};
use gdet::witness::{self, geom};
use gdet::{
    build_cayley, cayley_determinant, compose, cyclic_measure, dihedral_measure, exhaustive_min,
    lambda_lower_bound, translate, verify, Assignment, CyclicElem, DihedralElem, Factorization,
    GroupSpec, SearchConfig,
};
use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;

fn dihedral() -> impl Strategy<Value = DihedralElem> {
    (1u64..=6).prop_flat_map(|n| {
        let block = prop::collection::vec(-3i64..=3, n as usize);
        (block.clone(), block).prop_map(move |(a, b)| DihedralElem::from_i64(n, &a, &b).unwrap())
    })
}

fn via_cayley(e: &DihedralElem) -> BigInt {
    let t = build_cayley(&GroupSpec::Dihedral(e.n() as usize)).unwrap();
    cayley_determinant(&t, &e.to_assignment()).unwrap()
}

fn neg(e: &DihedralElem) -> DihedralElem {
    let m = BigInt::from(-1);
    DihedralElem::new(e.a.scale(&m), e.b.scale(&m)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn measure_agrees_with_cayley_determinant(e in dihedral()) {
        prop_assert_eq!(dihedral_measure(&e).unwrap(), via_cayley(&e));
    }

    #[test]
    fn swap_multiplies_by_parity_sign(e in dihedral()) {
        let n = e.n();
        let d = dihedral_measure(&e).unwrap();
        let s = via_cayley(&e.swapped());
        prop_assert_eq!(s, if n % 2 == 0 { d } else { -d });
    }

    #[test]
    fn single_block_is_a_signed_square(e in dihedral()) {
        let n = e.n();
        let c = cyclic_measure(&e.a).unwrap();
        let sq = &c * &c;
        let only_a = DihedralElem::new(e.a.clone(), CyclicElem::zero(n)).unwrap();
        let only_b = DihedralElem::new(CyclicElem::zero(n), e.a.clone()).unwrap();
        prop_assert_eq!(dihedral_measure(&only_a).unwrap(), sq.clone());
        let want = if n % 2 == 0 { sq } else { -sq };
        prop_assert_eq!(dihedral_measure(&only_b).unwrap(), want);
    }

    #[test]
    fn translation_preserves_magnitude(
        spec in prop_oneof![
            (1usize..=12).prop_map(GroupSpec::Cyclic),
            (1usize..=6).prop_map(GroupSpec::Dihedral),
            Just(GroupSpec::AbelianProduct(vec![2, 2])),
            Just(GroupSpec::AbelianProduct(vec![2, 3])),
            Just(GroupSpec::AbelianProduct(vec![2, 2, 3])),
        ],
        seed in prop::collection::vec(-3i64..=3, 12),
        h in 0usize..12,
    ) {
        let t = build_cayley(&spec).unwrap();
        let a = Assignment::from_i64(&seed[..t.order()]);
        let moved = translate(&t, &a, h % t.order()).unwrap();
        let d0 = cayley_determinant(&t, &a).unwrap();
        let d1 = cayley_determinant(&t, &moved).unwrap();
        prop_assert_eq!(d0.abs(), d1.abs());
    }

    #[test]
    fn strategies_agree_on_sparse_input(
        n in 1u64..=200,
        terms in prop::collection::vec((0i64..200, -4i64..=4), 1..6),
    ) {
        let f = CyclicElem::from_laurent(n, terms.into_iter().map(|(k, c)| (k, BigInt::from(c))));
        let direct = cyclic_measure_with(&f, Method::Direct).unwrap();
        prop_assert_eq!(cyclic_measure_with(&f, Method::Divisor).unwrap(), direct.clone());
        prop_assert_eq!(cyclic_measure(&f).unwrap(), direct);
    }

    #[test]
    fn search_symmetries_preserve_magnitude(e in dihedral(), i in -6i64..6, j in -6i64..6) {
        let d = via_cayley(&e).abs();
        let rotated = DihedralElem::new(e.a.shift(i), e.b.shift(j)).unwrap();
        prop_assert_eq!(via_cayley(&rotated).abs(), d.clone());
        prop_assert_eq!(via_cayley(&e.swapped()).abs(), d.clone());
        prop_assert_eq!(via_cayley(&neg(&e)).abs(), d);
    }

    #[test]
    fn composed_witnesses_verify(n in 1u64..=12, t1 in 0i64..5, t2 in 0i64..5) {
        let w1 = witness::odd_coprime(2 * t1 as u64 + 1, n);
        let w2 = witness::odd_coprime(2 * t2 as u64 + 1, n);
        if let (Ok(w1), Ok(w2)) = (w1, w2) {
            prop_assert!(verify(&w1) && verify(&w2));
            let c = compose(&[w1.clone(), w2.clone()]).unwrap();
            prop_assert!(verify(&c));
            prop_assert_eq!(c.claimed().unwrap(), &(w1.claimed().unwrap() * w2.claimed().unwrap()));
        }
    }

    #[test]
    fn product_measure_is_multiplicative(x in dihedral(), seed in prop::collection::vec(-2i64..=2, 12)) {
        let n = x.n() as usize;
        let y = DihedralElem::from_i64(x.n(), &seed[..n], &seed[6..6 + n]).unwrap();
        let xy = x.mul(&y).unwrap();
        prop_assert_eq!(
            dihedral_measure(&xy).unwrap(),
            dihedral_measure(&x).unwrap() * dihedral_measure(&y).unwrap()
        );
    }

    #[test]
    fn geometric_blocks_agree_across_strategies(n in 1u64..=40, len in -20i64..=20) {
        let g = geom(n, len);
        let direct = cyclic_measure_with(&g, Method::Divisor).unwrap();
        prop_assert_eq!(cyclic_measure(&g).unwrap(), direct);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn exhaustive_min_respects_lower_bound(n in 1u64..=4, hi in 1i64..=2) {
        let cfg = SearchConfig::new(n, -hi, hi).with_workers(2);
        let nf = Factorization::of(n).unwrap();
        if let Some(r) = exhaustive_min(&cfg).unwrap() {
            prop_assert!(r.value.abs() >= BigInt::from(lambda_lower_bound(&nf)));
            prop_assert_eq!(dihedral_measure(&r.elem).unwrap(), r.value);
        }
    }
}
