//! Constructors for the finite graph families: shift graphs and their
//! directed, symmetric, cyclic and glued variants, and kernel graphs `E_f`/`D_f`.

use std::collections::HashMap;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::graph::{Family, Graph, Side};
use crate::par::Parallelism;
use crate::tuplespace::{position_tuples, GroundAtom, GroundSet, IndexSet, Kernel, Tuple};

fn int_tuple(j: &IndexSet, pos: &[u32], increasing: bool) -> Tuple {
    Tuple::from_parts_unchecked(j.clone(), pos.iter().map(|&p| GroundAtom::Int(p as i64)).collect(), increasing)
}

fn check_shape(r: usize, n: usize) -> Result<()> {
    if r == 0 {
        return Err(Error::InvalidParameter("r must be at least 1".into()));
    }
    if n < r {
        return Err(Error::InvalidParameter(format!("ground size {n} is smaller than r = {r}")));
    }
    Ok(())
}

/// Arcs `s -> t` with `s(i) = t(i-1)` for `1 <= i < r`, over the listed tuples.
fn shift_arcs(tuples: &[Vec<u32>], n: usize, increasing: bool) -> Vec<(usize, usize)> {
    let index: HashMap<&[u32], usize> = tuples.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();
    let mut arcs = Vec::new();
    let mut buf = Vec::new();
    for (a, s) in tuples.iter().enumerate() {
        let tail = &s[1..];
        let lo = if increasing { tail.last().map_or(0, |&x| x + 1) } else { 0 };
        for x in lo..n as u32 {
            if tail.contains(&x) || (tail.is_empty() && x == s[0]) {
                continue;
            }
            buf.clear();
            buf.extend_from_slice(tail);
            buf.push(x);
            if let Some(&b) = index.get(buf.as_slice()) {
                arcs.push((a, b));
            }
        }
    }
    arcs
}

/// `Sh_r(n)` on increasing `r`-tuples over `{0..n-1}`, or `Sh_r^sym(n)` on
/// injective ones. `r = 1` gives `K_n`.
pub fn shift_graph(r: usize, n: usize, symmetric: bool) -> Result<Graph> {
    check_shape(r, n)?;
    let tuples: Vec<Vec<u32>> = position_tuples(n, r, !symmetric).collect();
    let arcs = shift_arcs(&tuples, n, !symmetric);
    let j = IndexSet::range(r);
    let vertices = tuples.iter().map(|t| int_tuple(&j, t, !symmetric)).collect();
    Graph::undirected(Family::Shift { r, n, symmetric }, vertices, arcs)
}

/// `Sh_r` or `Sh_r^sym` over an arbitrary ground set, in its declared order.
pub fn shift_graph_over(ground: &GroundSet, r: usize, symmetric: bool) -> Result<Graph> {
    let g = shift_graph(r, ground.len(), symmetric)?;
    let vertices = g
        .vertices()
        .iter()
        .map(|t| {
            let values = t.int_values().unwrap().iter().map(|&p| ground.atom(p as usize).clone()).collect();
            Tuple::from_parts_unchecked(t.index().clone(), values, !symmetric)
        })
        .collect();
    Graph::undirected(g.family().clone(), vertices, g.edges().to_vec())
}

/// `LSh_r(n)` (arcs realizing `{(i, i-1)}`) or `RSh_r(n)` (arcs realizing `{(i-1, i)}`).
pub fn directed_shift(r: usize, n: usize, side: Side) -> Result<Graph> {
    check_shape(r, n)?;
    let tuples: Vec<Vec<u32>> = position_tuples(n, r, true).collect();
    let mut arcs = shift_arcs(&tuples, n, true);
    if side == Side::Right {
        for a in &mut arcs {
            *a = (a.1, a.0);
        }
    }
    let j = IndexSet::range(r);
    let vertices = tuples.iter().map(|t| int_tuple(&j, t, true)).collect();
    Graph::directed(Family::DirectedShift { r, n, side }, vertices, arcs)
}

/// Injective `r`-tuples, each joined to its cyclic rotation
/// `(a_{r-1}, a_0, .., a_{r-2})`.
pub fn cyclic_sym(r: usize, n: usize) -> Result<Graph> {
    if r < 2 {
        return Err(Error::InvalidParameter("cyclic graphs need r >= 2".into()));
    }
    check_shape(r, n)?;
    let tuples: Vec<Vec<u32>> = position_tuples(n, r, false).collect();
    let index: HashMap<&[u32], usize> = tuples.iter().enumerate().map(|(i, t)| (t.as_slice(), i)).collect();
    let edges = tuples
        .iter()
        .enumerate()
        .map(|(a, t)| {
            let mut rot = t.clone();
            rot.rotate_right(1);
            (a, index[rot.as_slice()])
        })
        .collect();
    let j = IndexSet::range(r);
    let vertices = tuples.iter().map(|t| int_tuple(&j, t, false)).collect();
    Graph::undirected(Family::CyclicSym { r, n }, vertices, edges)
}

/// Encodes a glued vertex `(f_i)` as one tuple over `Pair(block, value)` atoms.
pub fn glued_tuple(blocks: &[Vec<u32>]) -> Tuple {
    let values: Vec<GroundAtom> = blocks
        .iter()
        .enumerate()
        .flat_map(|(i, f)| f.iter().map(move |&v| GroundAtom::pair(GroundAtom::Int(i as i64), GroundAtom::Int(v as i64))))
        .collect();
    Tuple::from_parts_unchecked(IndexSet::range(values.len()), values, true)
}

/// Decodes a tuple built by [`glued_tuple`] back into its blocks.
pub fn glued_blocks(t: &Tuple, n_bar: &[usize]) -> Option<Vec<Vec<i64>>> {
    let mut it = t.values().iter();
    n_bar
        .iter()
        .map(|&ni| {
            (0..=ni)
                .map(|_| match it.next()? {
                    GroundAtom::Pair(_, v) => v.as_int(),
                    _ => None,
                })
                .collect()
        })
        .collect()
}

/// The bounded glued shift graph `Sh_{n̄,b}(n)`: vertices are families of
/// increasing maps `f_i : [0, n_i] -> {0..n-1}`, and `f ~ g` when
/// `f_i(m) = g_i(m+1)` for every block and every `m < n_i` (or the reverse).
pub fn bounded_glued(n_bar: &[usize], n: usize) -> Result<Graph> {
    if n_bar.is_empty() {
        return Err(Error::InvalidParameter("n_bar must be nonempty".into()));
    }
    if n_bar.contains(&0) {
        return Err(Error::InvalidParameter("every n_i must be at least 1".into()));
    }
    let max = *n_bar.iter().max().unwrap();
    if n <= max {
        return Err(Error::GroundTooSmall { have: n, need: max + 1 });
    }
    let per_block: Vec<Vec<Vec<u32>>> = n_bar.iter().map(|&ni| position_tuples(n, ni + 1, true).collect()).collect();
    let vertices: Vec<Vec<Vec<u32>>> = per_block.iter().map(|b| b.iter()).multi_cartesian_product().map(|v| v.into_iter().cloned().collect()).collect();
    let index: HashMap<&[Vec<u32>], usize> = vertices.iter().enumerate().map(|(i, v)| (v.as_slice(), i)).collect();
    let mut edges = Vec::new();
    for (a, f) in vertices.iter().enumerate() {
        // g_i = (y_i, f_i(0), .., f_i(n_i - 1)) with y_i < f_i(0)
        let choices: Vec<Vec<u32>> = f.iter().map(|fi| (0..fi[0]).collect()).collect();
        if choices.iter().any(Vec::is_empty) {
            continue;
        }
        for ys in choices.iter().map(|c| c.iter()).multi_cartesian_product() {
            let g: Vec<Vec<u32>> = f
                .iter()
                .zip(&ys)
                .map(|(fi, &&y)| std::iter::once(y).chain(fi[..fi.len() - 1].iter().copied()).collect())
                .collect();
            edges.push((a, index[g.as_slice()]));
        }
    }
    let labels = vertices.iter().map(|v| glued_tuple(v)).collect();
    Graph::undirected(Family::BoundedGlued { n_bar: n_bar.to_vec(), n }, labels, edges)
}

/// `E_f` (or `D_f`) on all injective or increasing `j`-tuples over `ground`.
pub fn graph_from_kernel(ground: &GroundSet, j: &IndexSet, f: &Kernel, increasing: bool, directed: bool) -> Result<Graph> {
    graph_from_kernel_with(ground, j, f, increasing, directed, Parallelism::default())
}

pub fn graph_from_kernel_with(
    ground: &GroundSet,
    j: &IndexSet,
    f: &Kernel,
    increasing: bool,
    directed: bool,
    par: Parallelism,
) -> Result<Graph> {
    if let Err(l) = f.is_within(j) {
        return Err(Error::IndexMismatch(l));
    }
    if f.is_identity_on(j) {
        return Err(Error::IdentityKernel);
    }
    let vertices = crate::tuplespace::enumerate_tuples(ground, j, increasing).collect();
    let family = Family::Kernel {
        kernel: f.clone(),
        index: j.clone(),
        ground: ground.descriptor().clone(),
        increasing,
        directed,
    };
    Graph::from_kernel_on(family, vertices, j, f, directed, par)
}
