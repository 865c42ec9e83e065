use proptest::prelude::*;

use shiftlab::chroma::{
    chi_csp, chi_exact, chi_exact_with, chi_greedy, cycle_coloring, k_colorable, max_clique, validate, zorbit_coloring,
    GreedyOrder,
};
use shiftlab::families::{cyclic_sym, shift_graph};
use shiftlab::graph::Family;
use shiftlab::{Graph, Parallelism};

fn custom(n: usize, edges: Vec<(usize, usize)>) -> Graph {
    Graph::plain(Family::Custom { name: "test".into() }, n, edges).unwrap()
}

fn graph_strategy() -> impl Strategy<Value = Graph> {
    (1usize..=11).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        proptest::collection::vec(any::<bool>(), pairs.len()).prop_map(move |keep| {
            let edges = pairs.iter().zip(&keep).filter(|(_, &k)| k).map(|(&e, _)| e).collect();
            custom(n, edges)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn exact_sits_between_clique_and_greedy(g in graph_strategy()) {
        let r = chi_exact(&g, None).unwrap();
        prop_assert!(validate(&g, &r.witness).unwrap().is_empty());
        prop_assert!(r.chi >= max_clique(&g).len());
        for order in [GreedyOrder::Natural, GreedyOrder::Dsatur] {
            let c = chi_greedy(&g, order);
            prop_assert!(validate(&g, &c).unwrap().is_empty());
            prop_assert!(r.chi <= c.palette as usize);
        }
        let (csp, c) = chi_csp(&g, None).unwrap();
        prop_assert_eq!(csp, r.chi);
        prop_assert!(validate(&g, &c).unwrap().is_empty());
        prop_assert!(k_colorable(&g, r.chi.saturating_sub(1), None).unwrap().is_none() || r.chi == 0);
    }

    #[test]
    fn duplicating_vertices_keeps_chi(g in graph_strategy(), dup in proptest::collection::vec(0usize..11, 1..6)) {
        // each copy gets its original's neighbours, and no edge to the original
        let n = g.n();
        let copies: Vec<usize> = dup.into_iter().map(|d| d % n).collect();
        let original = |v: usize| if v < n { v } else { copies[v - n] };
        let total = n + copies.len();
        let edges = (0..total)
            .flat_map(|u| (u + 1..total).map(move |v| (u, v)))
            .filter(|&(u, v)| g.has_edge(original(u), original(v)))
            .collect();
        let h = custom(total, edges);
        prop_assert_eq!(chi_exact(&h, None).unwrap().chi, chi_exact(&g, None).unwrap().chi);
    }
}

#[test]
fn complete_graphs() {
    for n in 1..=8 {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let g = custom(n, edges);
        let r = chi_exact(&g, None).unwrap();
        assert_eq!(r.chi, n);
        assert_eq!(serde_json::to_value(&r.certificate).unwrap()["kind"], "clique_found");
    }
}

#[test]
fn reports_do_not_depend_on_parallelism() {
    for n in [5, 9, 12] {
        let g = shift_graph(2, n, false).unwrap();
        let a = chi_exact_with(&g, None, Parallelism::Sequential).unwrap();
        let b = chi_exact_with(&g, None, Parallelism::Parallel).unwrap();
        assert_eq!((a.chi, &a.witness, &a.certificate), (b.chi, &b.witness, &b.certificate));
    }
}

#[test]
fn timeouts_keep_bounds() {
    let g = shift_graph(2, 17, false).unwrap();
    match chi_exact(&g, Some(std::time::Duration::from_millis(20))) {
        Err(shiftlab::Error::Timeout { lower, upper }) => assert!(2 <= lower && lower <= upper && upper >= 5),
        other => panic!("{other:?}"),
    }
}

#[test]
fn cycle_and_orbit_colorings() {
    for r in 2..=6 {
        let g = cyclic_sym(r, r + 1).unwrap();
        let c = cycle_coloring(&g).unwrap();
        assert!(validate(&g, &c).unwrap().is_empty());
        assert_eq!(chi_exact(&g, None).unwrap().chi, c.palette as usize);
    }
    let succ = [Some(3), None, Some(1), Some(4), None];
    let c = zorbit_coloring(&succ).unwrap();
    for (v, s) in succ.iter().enumerate() {
        if let Some(s) = s {
            assert_ne!(c.colors[v], c.colors[*s]);
        }
    }
}

#[test]
fn dimacs_round_trip_keeps_chi() {
    let g = cyclic_sym(3, 4).unwrap();
    let h = Graph::from_dimacs(&g.to_dimacs()).unwrap();
    assert_eq!(h.edges(), g.edges());
    assert_eq!(chi_exact(&h, None).unwrap().chi, chi_exact(&g, None).unwrap().chi);
}
