use itertools::Itertools;

use super::{GroundSet, IndexSet, Tuple};

/// Position sequences of all injective (or strictly increasing) `k`-tuples
/// over `{0, .., n-1}`, in lexicographic order.
pub fn position_tuples(n: usize, k: usize, increasing: bool) -> Box<dyn Iterator<Item = Vec<u32>>> {
    let items = 0..n as u32;
    if increasing {
        Box::new(items.combinations(k))
    } else {
        Box::new(items.permutations(k))
    }
}

/// All injective (or increasing) tuples `j -> ground`, in lexicographic order
/// of their value sequences under the ground set's declared order.
///
/// `|j| > |ground|` yields nothing; an empty `j` yields the single empty tuple.
pub fn enumerate_tuples<'a>(
    ground: &'a GroundSet,
    j: &'a IndexSet,
    increasing: bool,
) -> impl Iterator<Item = Tuple> + 'a {
    position_tuples(ground.len(), j.len(), increasing).map(move |pos| {
        let values = pos.iter().map(|&p| ground.atom(p as usize).clone()).collect();
        Tuple::from_parts_unchecked(j.clone(), values, increasing)
    })
}

/// Falling factorial `n (n-1) ... (n-k+1)`.
pub fn falling_factorial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).map(|i| (n - i) as u128).product()
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    falling_factorial(n, k) / falling_factorial(k, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(t: &Tuple) -> Vec<i64> {
        t.int_values().unwrap()
    }

    #[test]
    fn increasing_pairs_of_three() {
        let g = GroundSet::range(3);
        let j = IndexSet::range(2);
        let all: Vec<_> = enumerate_tuples(&g, &j, true).map(|t| ints(&t)).collect();
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn injective_pairs_of_three() {
        let g = GroundSet::range(3);
        let j = IndexSet::range(2);
        let all: Vec<_> = enumerate_tuples(&g, &j, false).map(|t| ints(&t)).collect();
        assert_eq!(all.len(), 6);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted, "not lexicographic");
    }

    #[test]
    fn empty_index_and_oversized_index() {
        let g = GroundSet::range(3);
        assert_eq!(enumerate_tuples(&g, &IndexSet::range(0), true).count(), 1);
        assert_eq!(enumerate_tuples(&g, &IndexSet::range(0), false).count(), 1);
        assert_eq!(enumerate_tuples(&g, &IndexSet::range(4), false).count(), 0);
    }

    #[test]
    fn reversed_ground_follows_declared_order() {
        let g = GroundSet::range(3).reverse();
        let all: Vec<_> = enumerate_tuples(&g, &IndexSet::range(2), true).map(|t| ints(&t)).collect();
        assert_eq!(all, vec![vec![2, 1], vec![2, 0], vec![1, 0]]);
    }

    #[test]
    fn counts_match_formulas() {
        for n in 0..=8 {
            for k in 0..=4 {
                let g = GroundSet::range(n);
                let j = IndexSet::range(k);
                // brute force: filter all k-words by the defining predicate
                let words: Vec<Vec<usize>> = if k == 0 {
                    vec![vec![]]
                } else {
                    (0..k).map(|_| 0..n).multi_cartesian_product().collect()
                };
                let (mut inj, mut inc) = (0u128, 0u128);
                for w in words {
                    if w.iter().all_unique() {
                        inj += 1;
                        if w.windows(2).all(|p| p[0] < p[1]) {
                            inc += 1;
                        }
                    }
                }
                assert_eq!(enumerate_tuples(&g, &j, false).count() as u128, inj);
                assert_eq!(enumerate_tuples(&g, &j, true).count() as u128, inc);
                assert_eq!(inj, falling_factorial(n, k));
                assert_eq!(inc, binomial(n, k));
            }
        }
    }

    #[test]
    fn five_choose_three() {
        let g = GroundSet::range(5);
        assert_eq!(enumerate_tuples(&g, &IndexSet::range(3), true).count(), 10);
    }
}
