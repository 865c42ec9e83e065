use proptest::prelude::*;

use shiftlab::tuplespace::{
    binomial, enumerate_tuples, falling_factorial, kernel_of, GroundAtom, GroundSet, IndexSet, Tuple,
};

fn distinct(len: usize) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::btree_set(-20i64..20, len).prop_map(|s| s.into_iter().collect())
}

fn ints(v: &[i64]) -> Vec<GroundAtom> {
    v.iter().map(|&x| GroundAtom::Int(x)).collect()
}

proptest! {
    #[test]
    fn kernel_reverses_with_arguments(len in 1usize..6, seed_a in distinct(6), seed_b in distinct(6), shuffle in any::<u64>()) {
        let j = IndexSet::range(len);
        let mut a = seed_a[..len].to_vec();
        let b = seed_b[..len].to_vec();
        // a is injective but in arbitrary order
        a.rotate_left((shuffle % len as u64) as usize);
        let a = Tuple::injective(j.clone(), ints(&a)).unwrap();
        let b = Tuple::injective(j, ints(&b)).unwrap();
        prop_assert_eq!(kernel_of(&b, &a), kernel_of(&a, &b).inverse());
    }

    #[test]
    fn increasing_pairs_give_monotone_kernels(len in 1usize..6, a in distinct(6), b in distinct(6)) {
        let j = IndexSet::range(len);
        let a = Tuple::increasing(j.clone(), ints(&a[..len])).unwrap();
        let b = Tuple::increasing(j, ints(&b[..len])).unwrap();
        prop_assert!(kernel_of(&a, &b).is_order_preserving());
    }
}

#[test]
fn enumeration_counts() {
    for n in 0..=8 {
        let ground = GroundSet::range(n);
        for k in 0..=4 {
            let j = IndexSet::range(k);
            let inc = enumerate_tuples(&ground, &j, true).count() as u128;
            let inj = enumerate_tuples(&ground, &j, false).count() as u128;
            assert_eq!(inc, binomial(n, k), "increasing n={n} k={k}");
            assert_eq!(inj, falling_factorial(n, k), "injective n={n} k={k}");
        }
    }
}

#[test]
fn enumeration_is_sorted_and_increasing() {
    let ground = GroundSet::window(-2, 3);
    let j = IndexSet::range(3);
    let all: Vec<Tuple> = enumerate_tuples(&ground, &j, true).collect();
    assert!(all.iter().all(Tuple::is_increasing));
    assert!(all.windows(2).all(|w| w[0].values() < w[1].values()));
}
