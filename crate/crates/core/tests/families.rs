use std::collections::HashMap;

use shiftlab::families::{bounded_glued, cyclic_sym, directed_shift, graph_from_kernel, shift_graph};
use shiftlab::tuplespace::{binomial, falling_factorial, kernel_of, GroundSet, IndexSet, Kernel, Label};
use shiftlab::Side;

fn partial_injections(m: usize) -> Vec<Kernel> {
    fn go(i: usize, m: usize, used: &mut Vec<bool>, cur: &mut Vec<(i64, i64)>, out: &mut Vec<Kernel>) {
        if i == m {
            out.push(Kernel::from_ints(cur).unwrap());
            return;
        }
        go(i + 1, m, used, cur, out);
        for v in 0..m {
            if !used[v] {
                used[v] = true;
                cur.push((i as i64, v as i64));
                go(i + 1, m, used, cur, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(0, m, &mut vec![false; m], &mut Vec::new(), &mut out);
    out
}

#[test]
fn adjacency_depends_only_on_the_kernel() {
    let ground = GroundSet::range(5);
    for m in 1..=3 {
        let j = IndexSet::range(m);
        for f in partial_injections(m).into_iter().filter(|f| !f.is_identity_on(&j)) {
            for increasing in [true, false] {
                let g = graph_from_kernel(&ground, &j, &f, increasing, false).unwrap();
                let mut seen: HashMap<Kernel, bool> = HashMap::new();
                for u in 0..g.n() {
                    for v in 0..g.n() {
                        if u == v {
                            continue;
                        }
                        let k = kernel_of(g.vertex(u), g.vertex(v));
                        let adj = g.has_edge(u, v);
                        assert_eq!(*seen.entry(k).or_insert(adj), adj, "f={f:?} increasing={increasing}");
                    }
                }
            }
        }
    }
}

#[test]
fn kernel_graphs_have_the_kernel_edges() {
    let f = Kernel::from_ints(&[(0, 1)]).unwrap();
    let j = IndexSet::range(2);
    let g = graph_from_kernel(&GroundSet::range(4), &j, &f, true, true).unwrap();
    for &(u, v) in g.arcs().unwrap() {
        assert_eq!(kernel_of(g.vertex(u), g.vertex(v)), f);
    }
}

// finite windows always have isolated corners such as (0, n-1), so connect
// the vertices over n inside the larger window n + r - 1
#[test]
fn shift_graphs_connect_in_a_larger_window() {
    for r in 1..=4 {
        for n in r + 1..=10 {
            let g = shift_graph(r, n + r - 1, false).unwrap();
            let inside = |v: usize| g.vertex(v).int_values().unwrap().iter().all(|&x| x < n as i64);
            let comps = g.components();
            let holding: Vec<_> = comps.iter().filter(|c| c.iter().any(|&v| inside(v))).collect();
            assert_eq!(holding.len(), 1, "Sh_{r}({n})");
        }
    }
    assert_eq!(shift_graph(2, 5, false).unwrap().components().len(), 2);
}

#[test]
fn closed_form_counts() {
    for r in 1..=4 {
        for n in r..=8 {
            let g = shift_graph(r, n, false).unwrap();
            assert_eq!(g.n() as u128, binomial(n, r));
            assert_eq!(g.edges().len() as u128, binomial(n, r + 1));
            let s = shift_graph(r, n, true).unwrap();
            assert_eq!(s.n() as u128, falling_factorial(n, r));
            for side in [Side::Left, Side::Right].into_iter().filter(|_| r >= 2) {
                let d = directed_shift(r, n, side).unwrap();
                assert_eq!(d.arcs().unwrap().len() as u128, binomial(n, r + 1));
            }
        }
    }
    for r in 2..=5 {
        assert_eq!(cyclic_sym(r, r).unwrap().n() as u128, falling_factorial(r, r));
    }
    for (n_bar, n) in [(vec![1, 2], 5), (vec![2, 2, 1], 6)] {
        let g = bounded_glued(&n_bar, n).unwrap();
        let expected: u128 = n_bar.iter().map(|&ni| binomial(n, ni + 1)).product();
        assert_eq!(g.n() as u128, expected);
    }
}

#[test]
fn symmetric_shift_edges_are_shifts() {
    let g = shift_graph(2, 4, true).unwrap();
    for &(u, v) in g.edges() {
        let (a, b) = (g.vertex(u).int_values().unwrap(), g.vertex(v).int_values().unwrap());
        assert!(a[1] == b[0] || b[1] == a[0], "{a:?} {b:?}");
    }
    let l = Label::int;
    assert!(Kernel::new([(l(0), l(1)), (l(1), l(1))]).is_err());
}
