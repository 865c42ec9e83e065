//! Orbit structure of kernels: classification of domain points, the ordered
//! block decomposition, and the chain extension used by the intertwined embedding.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::Rational64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::tuplespace::{IndexSet, Kernel, Label};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Increasing,
    Decreasing,
    Unordered,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum OrbitClass {
    FixedPoint,
    FiniteCycle { len: usize },
    /// `n` is maximal with `f^{n-1}(β)` in the domain.
    FiniteShift { n: usize, direction: Direction },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub classes: BTreeMap<Label, OrbitClass>,
    /// `Dom(f) \ Rg(f)`, ascending.
    pub generators: Vec<Label>,
    /// `n_β` for each generator.
    pub lengths: BTreeMap<Label, usize>,
}

impl OrbitReport {
    pub fn has_cycle(&self) -> Option<Label> {
        self.classes
            .iter()
            .find(|(_, c)| matches!(c, OrbitClass::FiniteCycle { .. }))
            .map(|(&l, _)| l)
    }

    pub fn fixed_points(&self) -> Vec<Label> {
        self.classes.iter().filter(|(_, c)| **c == OrbitClass::FixedPoint).map(|(&l, _)| l).collect()
    }

    /// `max n_β`, or 0 without generators.
    pub fn max_length(&self) -> usize {
        self.lengths.values().copied().max().unwrap_or(0)
    }
}

/// `β, f(β), .., f^n(β)` where `f^n(β)` is the first point outside the domain.
/// Stops early (returning the partial orbit) if `β` lies on a cycle.
pub fn chain(f: &Kernel, beta: Label) -> Vec<Label> {
    let mut out = vec![beta];
    let mut cur = beta;
    while let Some(next) = f.get(cur) {
        if next == beta {
            break;
        }
        out.push(next);
        cur = next;
    }
    out
}

pub fn classify(f: &Kernel, _j: &IndexSet) -> OrbitReport {
    let range = f.range();
    let mut classes = BTreeMap::new();
    let mut lengths = BTreeMap::new();
    let mut generators = Vec::new();
    for (beta, image) in f.pairs() {
        if image == beta {
            classes.insert(beta, OrbitClass::FixedPoint);
            continue;
        }
        let c = chain(f, beta);
        let last = *c.last().unwrap();
        if f.get(last) == Some(beta) {
            classes.insert(beta, OrbitClass::FiniteCycle { len: c.len() });
            continue;
        }
        let n = c.len() - 1;
        // direction of the whole orbit, read from its generator
        let mut g = beta;
        let inverse = f.inverse();
        while let Some(p) = inverse.get(g) {
            g = p;
        }
        let full = chain(f, g);
        let direction = if full.windows(2).all(|w| w[0] < w[1]) {
            Direction::Increasing
        } else if full.windows(2).all(|w| w[0] > w[1]) {
            Direction::Decreasing
        } else {
            Direction::Unordered
        };
        classes.insert(beta, OrbitClass::FiniteShift { n, direction });
        if !range.contains(&beta) {
            generators.push(beta);
            lengths.insert(beta, n);
        }
    }
    OrbitReport { classes, generators, lengths }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockKind {
    Increasing,
    Decreasing,
    Constant,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Block {
    pub labels: IndexSet,
    pub kind: BlockKind,
    pub kernel: Kernel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockDecomposition {
    pub blocks: Vec<Block>,
}

impl BlockDecomposition {
    /// Checks the partition conditions against `f` on `j`; returns the first failure.
    pub fn check(&self, f: &Kernel, j: &IndexSet) -> std::result::Result<(), String> {
        let all: Vec<Label> = self.blocks.iter().flat_map(|b| b.labels.labels().iter().copied()).collect();
        if all != j.labels() {
            return Err("blocks are not consecutive convex pieces covering the index set".into());
        }
        let support = f.support();
        let mut union = Vec::new();
        for (n, b) in self.blocks.iter().enumerate() {
            if b.labels.is_empty() {
                return Err(format!("block {n} is empty"));
            }
            for (x, y) in f.pairs() {
                if b.labels.contains(x) && !b.labels.contains(y) {
                    return Err(format!("block {n} is not closed under f at {x}"));
                }
            }
            if b.kernel != f.restrict(&b.labels) {
                return Err(format!("block {n} carries the wrong restricted kernel"));
            }
            union.extend(b.kernel.pairs());
            let moving: Vec<_> = b.kernel.pairs().filter(|(x, y)| x != y).collect();
            let fixed: Vec<_> = b.kernel.pairs().filter(|(x, y)| x == y).map(|(x, _)| x).collect();
            match b.kind {
                BlockKind::Increasing if moving.iter().any(|(x, y)| y < x) || !fixed.is_empty() => {
                    return Err(format!("block {n} is not purely increasing"));
                }
                BlockKind::Decreasing if moving.iter().any(|(x, y)| y > x) || !fixed.is_empty() => {
                    return Err(format!("block {n} is not purely decreasing"));
                }
                BlockKind::Constant => {
                    if !moving.is_empty() {
                        return Err(format!("constant block {n} moves a label"));
                    }
                    let touched = b.labels.labels().iter().filter(|l| support.contains(**l)).count();
                    if !fixed.is_empty() && touched != 1 {
                        return Err(format!("constant block {n} has more than its fixed point in Dom ∪ Rg"));
                    }
                }
                _ => {}
            }
        }
        if Kernel::new(union).ok().as_ref() != Some(f) {
            return Err("restricted kernels do not reassemble f".into());
        }
        Ok(())
    }
}

/// Splits an order-preserving kernel into convex blocks of pure type.
///
/// Orbits with overlapping hulls are merged, adjacent moving components of
/// the same type are merged, and each fixed point is its own constant block.
/// Unused labels join the preceding block, or the following one when the
/// preceding block is constant.
pub fn decompose_ordered(f: &Kernel, j: &IndexSet) -> Result<BlockDecomposition> {
    if let Err(l) = f.is_within(j) {
        return Err(Error::IndexMismatch(l));
    }
    if let Some((a, b)) = f.order_violation() {
        return Err(Error::NotOrderPreserving(a, b));
    }
    let report = classify(f, j);
    // (lo, hi, kind) in label positions
    let pos = |l: Label| j.position(l).expect("checked within j");
    let mut comps: Vec<(usize, usize, BlockKind)> = Vec::new();
    for &beta in &report.generators {
        let c = chain(f, beta);
        let kind = if f.get(beta).unwrap() > beta { BlockKind::Increasing } else { BlockKind::Decreasing };
        let (lo, hi) = c.iter().map(|&l| pos(l)).fold((usize::MAX, 0), |(lo, hi), p| (lo.min(p), hi.max(p)));
        comps.push((lo, hi, kind));
    }
    for p in report.fixed_points() {
        comps.push((pos(p), pos(p), BlockKind::Constant));
    }
    comps.sort();
    let mut merged: Vec<(usize, usize, BlockKind)> = Vec::new();
    for c in comps {
        match merged.last_mut() {
            Some(last) if c.0 <= last.1 => {
                if last.2 != c.2 || c.2 == BlockKind::Constant {
                    return Err(Error::Invariant("orbits of different type overlap".into()));
                }
                last.1 = last.1.max(c.1);
            }
            Some(last) if last.2 == c.2 && c.2 != BlockKind::Constant => last.1 = c.1,
            _ => merged.push(c),
        }
    }
    if merged.is_empty() {
        let block = Block { labels: j.clone(), kind: BlockKind::Constant, kernel: f.clone() };
        return Ok(BlockDecomposition { blocks: vec![block] });
    }
    // distribute the gaps
    let m = merged.len();
    let mut bounds: Vec<(usize, usize)> = merged.iter().map(|c| (c.0, c.1)).collect();
    bounds[0].0 = 0;
    for b in 0..m {
        let gap_end = if b + 1 < m { merged[b + 1].0 } else { j.len() };
        if merged[b].2 == BlockKind::Constant && b + 1 < m {
            bounds[b + 1].0 = merged[b].1 + 1;
        } else {
            bounds[b].1 = gap_end - 1;
        }
    }
    let blocks = bounds
        .into_iter()
        .zip(merged)
        .map(|((lo, hi), (_, _, kind))| {
            let labels = IndexSet::new(j.labels()[lo..=hi].to_vec()).expect("slice of ascending labels");
            let kernel = f.restrict(&labels);
            Block { labels, kind, kernel }
        })
        .collect();
    Ok(BlockDecomposition { blocks })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelExtension {
    pub index: IndexSet,
    pub kernel: Kernel,
    pub beta0: Label,
    pub n_beta0: usize,
}

fn check_increasing(f: &Kernel) -> Result<()> {
    if f.is_empty() {
        return Err(Error::EmptyKernel);
    }
    if let Some(l) = f.non_increasing_point() {
        return Err(Error::NotIncreasingOrbits(l));
    }
    if let Some((a, b)) = f.order_violation() {
        return Err(Error::NotOrderPreserving(a, b));
    }
    Ok(())
}

fn next_above(set: &BTreeSet<Label>, x: Label) -> Option<Label> {
    use std::ops::Bound::{Excluded, Unbounded};
    set.range((Excluded(x), Unbounded)).next().copied()
}

/// Piecewise-linear increasing interpolation through the graph of `f`,
/// continued with slope 1 outside its domain hull.
fn interpolate(f: &Kernel, x: Label) -> Label {
    let pts: Vec<(Label, Label)> = f.pairs().collect();
    let (x0, y0) = pts[0];
    if x <= x0 {
        return Label(y0.0 - (x0.0 - x.0));
    }
    for w in pts.windows(2) {
        let ((xa, ya), (xb, yb)) = (w[0], w[1]);
        if x <= xb {
            let t = (x.0 - xa.0) / (xb.0 - xa.0);
            return Label(ya.0 + t * (yb.0 - ya.0));
        }
    }
    let (xm, ym) = *pts.last().unwrap();
    Label(ym.0 + (x.0 - xm.0))
}

/// Extends `f` (restricted to `Dom ∪ Rg`) by fresh rational labels until the
/// orbit of the least generator ends at the largest label. Fresh labels avoid
/// every label of `j`.
pub fn extend_star(f: &Kernel, j: &IndexSet) -> Result<KernelExtension> {
    check_increasing(f)?;
    if let Err(l) = f.is_within(j) {
        return Err(Error::IndexMismatch(l));
    }
    let report = classify(f, j);
    let beta0 = report.generators[0];
    let mut cur = f.clone();
    let mut labels: BTreeSet<Label> = f.support().labels().iter().copied().collect();
    let mut taken: BTreeSet<Label> = labels.iter().chain(j.labels()).copied().collect();
    let fresh_between = |taken: &BTreeSet<Label>, x: Label| match next_above(taken, x) {
        Some(y) => x.midpoint(y),
        None => Label(x.0 + Rational64::from_integer(1)),
    };
    for _ in 0..=4 * labels.len() + 4 {
        let end = *chain(&cur, beta0).last().unwrap();
        let max = *labels.iter().next_back().unwrap();
        if end == max {
            let n_beta0 = chain(&cur, beta0).len() - 1;
            return Ok(KernelExtension {
                index: IndexSet::from_unsorted(labels.into_iter().collect()),
                kernel: cur,
                beta0,
                n_beta0,
            });
        }
        let range = cur.range();
        let i = *range.iter().find(|&&x| x > end).expect("max label lies in the range");
        let pre = cur.inverse().get(i).unwrap();
        let mut e = end;
        if end < pre {
            let y = fresh_between(&taken, pre);
            cur.insert_unchecked(end, y);
            labels.insert(y);
            taken.insert(y);
            e = y;
        }
        let mut z = interpolate(&cur, e);
        if taken.contains(&z) {
            z = fresh_between(&taken, z);
        }
        cur.insert_unchecked(e, z);
        labels.insert(z);
        taken.insert(z);
    }
    Err(Error::Invariant("chain extension did not terminate".into()))
}
