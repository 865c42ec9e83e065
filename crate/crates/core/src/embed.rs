//! Homomorphisms from shift graphs into glued and kernel graphs, and a
//! verifier for vertex maps.

use std::collections::{BTreeSet, HashMap};

use num_rational::Rational64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::canon::{canonize, CanonOptions, CanonicalForm, FnOracle};
use crate::error::{Error, Result};
use crate::families::{bounded_glued, directed_shift, glued_tuple, shift_graph};
use crate::graph::{Family, Graph, Side};
use crate::kernel_analysis::{chain, classify, decompose_ordered, extend_star, BlockKind};
use crate::par::{self, Parallelism};
use crate::tuplespace::{GroundAtom, IndexSet, Kernel, Label, Tuple};

/// A map from the vertices of `source` to the vertices of `target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexMap {
    pub source: Graph,
    pub target: Graph,
    pub assignment: Vec<usize>,
}

impl VertexMap {
    pub fn new(source: Graph, target: Graph, assignment: Vec<usize>) -> Result<Self> {
        if assignment.len() != source.n() {
            return Err(Error::MissingVertex(assignment.len()));
        }
        if let Some(&v) = assignment.iter().find(|&&v| v >= target.n()) {
            return Err(Error::InvalidParameter(format!("target vertex {v} out of range")));
        }
        Ok(VertexMap { source, target, assignment })
    }

    /// Maps source vertex `i` to `images[i]`; the target is `E_f` (or `D_f`)
    /// induced on the distinct images, in order of first appearance.
    pub fn onto_kernel_image(
        source: Graph,
        images: Vec<Tuple>,
        j: &IndexSet,
        f: &Kernel,
        directed: bool,
        par: Parallelism,
    ) -> Result<Self> {
        let mut seen: HashMap<Tuple, usize> = HashMap::new();
        let mut vertices = Vec::new();
        let mut assignment = Vec::with_capacity(images.len());
        for t in images {
            let next = vertices.len();
            let id = *seen.entry(t.clone()).or_insert(next);
            if id == next {
                vertices.push(t);
            }
            assignment.push(id);
        }
        let family = Family::KernelImage { kernel: f.clone(), index: j.clone(), directed };
        let target = Graph::from_kernel_on(family, vertices, j, f, directed, par)?;
        VertexMap::new(source, target, assignment)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "assignment": self.assignment.iter().enumerate().map(|(i, &j)| [i, j]).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let source = Graph::from_json(v.get("source").ok_or_else(|| Error::Parse("missing `source`".into()))?)?;
        let target = Graph::from_json(v.get("target").ok_or_else(|| Error::Parse("missing `target`".into()))?)?;
        let pairs: Vec<(usize, usize)> = serde_json::from_value(v.get("assignment").cloned().unwrap_or(Value::Null))
            .map_err(|e| Error::Parse(format!("bad assignment: {e}")))?;
        let mut assignment = vec![usize::MAX; source.n()];
        for (i, j) in pairs {
            if i >= source.n() {
                return Err(Error::Parse(format!("source vertex {i} out of range")));
            }
            assignment[i] = j;
        }
        if let Some(i) = assignment.iter().position(|&j| j == usize::MAX) {
            return Err(Error::MissingVertex(i));
        }
        VertexMap::new(source, target, assignment)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Counterexample {
    /// A source edge (or arc `u -> v`) whose image is not an edge.
    EdgeNotPreserved { u: usize, v: usize },
    /// Two source vertices with the same image.
    Collision { u: usize, v: usize },
    /// A source non-edge whose image is an edge.
    NonEdgeMapped { u: usize, v: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbedReport {
    pub is_homomorphism: bool,
    pub is_injective: bool,
    pub is_induced: bool,
    /// At most 16 of each kind.
    pub counterexamples: Vec<Counterexample>,
}

const MAX_EXAMPLES: usize = 16;

pub fn verify_map(m: &VertexMap, directed: bool) -> EmbedReport {
    verify_map_with(m, directed, Parallelism::default())
}

/// Exhaustive check of edge preservation, injectivity and induced-ness. With
/// `directed`, arcs must map to arcs; an undirected source then counts each
/// edge in both directions.
pub fn verify_map_with(m: &VertexMap, directed: bool, par: Parallelism) -> EmbedReport {
    let a = &m.assignment;
    let (src, tgt) = (&m.source, &m.target);
    let pairs: Vec<(usize, usize)> = match (directed, src.arcs()) {
        (true, Some(arcs)) => arcs.to_vec(),
        (true, None) => src.edges().iter().flat_map(|&(u, v)| [(u, v), (v, u)]).collect(),
        (false, _) => src.edges().to_vec(),
    };
    let related = |g: &Graph, u: usize, v: usize| if directed { g.has_arc(u, v) } else { g.has_edge(u, v) };
    let broken: Vec<Counterexample> = par::flat_map_range(par, pairs.len(), |i| {
        let (u, v) = pairs[i];
        if related(tgt, a[u], a[v]) {
            vec![]
        } else {
            vec![Counterexample::EdgeNotPreserved { u, v }]
        }
    });
    let is_homomorphism = broken.is_empty();

    let mut by_image: Vec<(usize, usize)> = a.iter().enumerate().map(|(v, &x)| (x, v)).collect();
    by_image.sort_unstable();
    let collisions: Vec<Counterexample> = by_image
        .windows(2)
        .filter(|w| w[0].0 == w[1].0)
        .map(|w| Counterexample::Collision { u: w[0].1, v: w[1].1 })
        .collect();
    let is_injective = collisions.is_empty();

    let n = src.n();
    let extra: Vec<Counterexample> = if is_injective {
        par::flat_map_range(par, n, |u| {
            let others: Box<dyn Iterator<Item = usize>> = if directed { Box::new(0..n) } else { Box::new(u + 1..n) };
            others
                .filter(|&v| v != u && !related(src, u, v) && related(tgt, a[u], a[v]))
                .map(|v| Counterexample::NonEdgeMapped { u, v })
                .take(MAX_EXAMPLES)
                .collect()
        })
    } else {
        vec![]
    };
    let is_induced = is_homomorphism && is_injective && extra.is_empty();

    let counterexamples = [broken, collisions, extra].into_iter().flat_map(|c| c.into_iter().take(MAX_EXAMPLES)).collect();
    EmbedReport { is_homomorphism, is_injective, is_induced, counterexamples }
}

/// `u ↦ (f_u)` with `(f_u)_i(h) = u(h)`, from `Sh_{max+1}(n)` into the bounded
/// glued graph.
pub fn embed_bounded(n_bar: &[usize], n: usize) -> Result<VertexMap> {
    let target = bounded_glued(n_bar, n)?;
    let max = *n_bar.iter().max().unwrap();
    let source = shift_graph(max + 1, n, false)?;
    let index = target.vertex_index();
    let assignment = source
        .vertices()
        .iter()
        .map(|u| {
            let u: Vec<u32> = u.int_values().unwrap().iter().map(|&x| x as u32).collect();
            let blocks: Vec<Vec<u32>> = n_bar.iter().map(|&ni| u[..=ni].to_vec()).collect();
            index[&glued_tuple(&blocks)]
        })
        .collect();
    VertexMap::new(source, target, assignment)
}

fn check_intertwined(f: &Kernel) -> Result<()> {
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

fn labels_outside(j: &IndexSet, chain: &[Label]) -> Vec<Label> {
    j.labels().iter().copied().filter(|l| !chain.contains(l)).collect()
}

/// The least `k` for which [`embed_intertwined`] applies to `f`.
pub fn intertwined_threshold(f: &Kernel) -> Result<usize> {
    check_intertwined(f)?;
    let ext = extend_star(f, &f.support())?;
    let report = classify(&ext.kernel, &ext.index);
    let mut need = ext.n_beta0 + 2;
    need = need.max(report.max_length() + 2);
    let rest = labels_outside(&ext.index, &chain(&ext.kernel, ext.beta0));
    if !rest.is_empty() {
        need = need.max(intertwined_threshold(&ext.kernel.restrict(&IndexSet::new(rest)?))?);
    }
    Ok(need)
}

enum Slot {
    /// `f^h(β₀)`.
    Own(usize),
    /// A label off the `β₀` chain: the chain step below it and its position
    /// in the inner construction.
    Other(usize, usize),
}

/// Values `ψ_μ` on `Dom(f) ∪ Rg(f)` for each `μ`, as nested pair atoms
/// `φ(m, x) = Pair(m, x)` with `Neg` for the sentinel.
fn intertwined_rows(f: &Kernel, mus: &[Vec<i64>]) -> Result<(Vec<Label>, Vec<Vec<GroundAtom>>)> {
    let ext = extend_star(f, &f.support())?;
    let chain0 = chain(&ext.kernel, ext.beta0);
    let rest = labels_outside(&ext.index, &chain0);
    let (inner_labels, inner_rows) = if rest.is_empty() {
        (vec![], vec![vec![]; mus.len()])
    } else {
        intertwined_rows(&ext.kernel.restrict(&IndexSet::new(rest)?), mus)?
    };
    let hat: Vec<Label> = f.support().labels().to_vec();
    let slots: Vec<Slot> = hat
        .iter()
        .map(|x| match chain0.iter().position(|c| c == x) {
            Some(h) => Slot::Own(h),
            None => {
                let below = chain0.iter().rposition(|c| c < x).expect("β₀ is the least label");
                Slot::Other(below, inner_labels.iter().position(|l| l == x).expect("off-chain label is inner"))
            }
        })
        .collect();
    let rows = mus
        .iter()
        .zip(&inner_rows)
        .map(|(mu, inner)| {
            slots
                .iter()
                .map(|s| match *s {
                    Slot::Own(h) => GroundAtom::pair(GroundAtom::Int(mu[h]), GroundAtom::Neg),
                    Slot::Other(h, p) => GroundAtom::pair(GroundAtom::Int(mu[h]), inner[p].clone()),
                })
                .collect()
        })
        .collect();
    Ok((hat, rows))
}

/// Replaces the atoms of `rows` (indexed by `hat`) by their ranks, then fills
/// each label of `j` outside `hat` with a rational private to its row, strictly
/// between the neighbouring ranks.
fn realize(j: &IndexSet, hat: &[Label], rows: &[Vec<GroundAtom>]) -> Result<Vec<Vec<Rational64>>> {
    let atoms: BTreeSet<&GroundAtom> = rows.iter().flatten().collect();
    let rank: HashMap<&GroundAtom, i64> = atoms.into_iter().zip(0..).collect();
    enum Pos {
        Hat(usize),
        Free { run: i64, t: i64 },
    }
    let mut layout = Vec::with_capacity(j.len());
    let labels = j.labels();
    let mut i = 0;
    while i < labels.len() {
        if let Some(p) = hat.iter().position(|h| *h == labels[i]) {
            layout.push(Pos::Hat(p));
            i += 1;
            continue;
        }
        let run = labels[i..].iter().take_while(|l| !hat.contains(l)).count();
        layout.extend((0..run).map(|t| Pos::Free { run: run as i64, t: t as i64 }));
        i += run;
    }
    let v = rows.len() as i64;
    rows.iter()
        .enumerate()
        .map(|(u, row)| {
            let ranks: Vec<i64> = row.iter().map(|a| rank[a]).collect();
            if ranks.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Invariant(format!("row {u} is not increasing")));
            }
            let mut lo = ranks.first().map_or(0, |r| r - 1);
            let out = layout
                .iter()
                .map(|p| match *p {
                    Pos::Hat(p) => {
                        lo = ranks[p];
                        Rational64::from_integer(lo)
                    }
                    Pos::Free { run, t } => {
                        Rational64::from_integer(lo) + Rational64::new(u as i64 * run + t + 1, v * run + 1)
                    }
                })
                .collect();
            Ok(out)
        })
        .collect()
}

fn source_rows(source: &Graph) -> Vec<Vec<i64>> {
    source.vertices().iter().map(|t| t.int_values().unwrap()).collect()
}

/// A directed homomorphism from the shift digraph on increasing `k`-tuples
/// over `{0..window-1}` (arcs `μ -> ν` with `μ(h) = ν(h+1)`) into
/// `((ℚ^j)_<, D_f)`, for `f` order preserving with increasing orbits. The
/// target is `D_f` induced on the image.
pub fn embed_intertwined(f: &Kernel, j: &IndexSet, k: usize, window: usize) -> Result<VertexMap> {
    embed_intertwined_with(f, j, k, window, Parallelism::default())
}

pub fn embed_intertwined_with(f: &Kernel, j: &IndexSet, k: usize, window: usize, par: Parallelism) -> Result<VertexMap> {
    check_intertwined(f)?;
    if let Err(l) = f.is_within(j) {
        return Err(Error::IndexMismatch(l));
    }
    let min_k = intertwined_threshold(f)?;
    if k < min_k {
        return Err(Error::KTooSmall { k, min_k });
    }
    let source = directed_shift(k, window, Side::Right)?;
    let mus = source_rows(&source);
    let (hat, rows) = intertwined_rows(f, &mus)?;
    let images = realize(j, &hat, &rows)?
        .into_iter()
        .map(|row| Tuple::increasing(j.clone(), row.into_iter().map(GroundAtom::number).collect()))
        .collect::<Result<Vec<_>>>()?;
    VertexMap::onto_kernel_image(source, images, j, f, true, par)
}

fn phi(alpha: Label, m: GroundAtom, tail: GroundAtom) -> GroundAtom {
    GroundAtom::tagged("phi", vec![alpha.as_atom(), m, tail])
}

/// An injective homomorphism into `(A^λ, E_f)` for `f` without cycles, with
/// `A` a set of symbolic atoms. When `f` has generators the source is
/// `Sh_{n+1}(window)` with `n = max n_β`, routed through the bounded glued
/// graph; when `f` is the identity on a proper part of `λ` the source is the
/// complete graph `Sh_1(window)`.
pub fn embed_no_order(f: &Kernel, lambda: &IndexSet, window: usize) -> Result<VertexMap> {
    embed_no_order_with(f, lambda, window, Parallelism::default())
}

pub fn embed_no_order_with(f: &Kernel, lambda: &IndexSet, window: usize, par: Parallelism) -> Result<VertexMap> {
    if let Err(l) = f.is_within(lambda) {
        return Err(Error::IndexMismatch(l));
    }
    if f.is_identity_on(lambda) {
        return Err(Error::IdentityKernel);
    }
    let report = classify(f, lambda);
    if let Some(b) = report.has_cycle() {
        return Err(Error::CycleInKernel(b));
    }
    let zero = || GroundAtom::Int(0);
    let one = || GroundAtom::Int(1);
    if report.generators.is_empty() {
        let source = shift_graph(1, window, false)?;
        let images = (0..window as i64)
            .map(|x| {
                let mu = GroundAtom::tagged("mu", vec![GroundAtom::Int(x)]);
                let values = lambda
                    .labels()
                    .iter()
                    .map(|&a| if f.get(a).is_some() { phi(a, zero(), one()) } else { phi(a, zero(), mu.clone()) })
                    .collect();
                Tuple::injective(lambda.clone(), values)
            })
            .collect::<Result<Vec<_>>>()?;
        return VertexMap::onto_kernel_image(source, images, lambda, f, false, par);
    }
    // which generator and step each chain label belongs to
    let mut on_chain: HashMap<Label, (Label, usize)> = HashMap::new();
    for &beta in &report.generators {
        for (h, l) in chain(f, beta).into_iter().enumerate() {
            on_chain.insert(l, (beta, h));
        }
    }
    let n_bar: Vec<usize> = report.generators.iter().map(|b| report.lengths[b]).collect();
    let n = *n_bar.iter().max().unwrap();
    let source = shift_graph(n + 1, window, false)?;
    let images = source_rows(&source)
        .into_iter()
        .map(|u| {
            let blocks: Vec<Vec<u32>> = n_bar.iter().map(|&nb| u[..=nb].iter().map(|&x| x as u32).collect()).collect();
            let mu = GroundAtom::tagged("mu", glued_tuple(&blocks).values().to_vec());
            let values = lambda
                .labels()
                .iter()
                .map(|&a| match on_chain.get(&a) {
                    Some(&(beta, h)) => phi(beta, GroundAtom::Int(u[h]), zero()),
                    None if f.get(a) == Some(a) => phi(a, zero(), one()),
                    None => phi(a, zero(), mu.clone()),
                })
                .collect();
            Tuple::injective(lambda.clone(), values)
        })
        .collect::<Result<Vec<_>>>()?;
    VertexMap::onto_kernel_image(source, images, lambda, f, false, par)
}

fn negate(l: Label) -> Label {
    Label(-l.0)
}

/// The least `k` for which [`embed_ordered`] applies to `f` on `{0..m-1}`.
pub fn ordered_threshold(f: &Kernel, m: usize) -> Result<usize> {
    let j = IndexSet::range(m);
    if let Err(l) = f.is_within(&j) {
        return Err(Error::IndexMismatch(l));
    }
    if f.is_identity_on(&j) {
        return Err(Error::IdentityKernel);
    }
    let decomposition = decompose_ordered(f, &j)?;
    let mut need = 1;
    for b in &decomposition.blocks {
        need = need.max(match b.kind {
            BlockKind::Increasing => intertwined_threshold(&b.kernel)?,
            BlockKind::Decreasing => intertwined_threshold(&b.kernel.relabel(negate))?,
            BlockKind::Constant => 1,
        });
    }
    Ok(need)
}

fn triple(block: usize, q: Rational64, tail: GroundAtom) -> GroundAtom {
    GroundAtom::pair(GroundAtom::Int(block as i64), GroundAtom::pair(GroundAtom::number(q), tail))
}

/// A directed homomorphism from the shift digraph on increasing `k`-tuples
/// over `{0..window-1}` into `((A^m)_<, D_f)` for any order preserving
/// `f ≠ Id`, assembled block by block from the ordered decomposition of `f`.
pub fn embed_ordered(f: &Kernel, m: usize, k: usize, window: usize) -> Result<VertexMap> {
    embed_ordered_with(f, m, k, window, Parallelism::default())
}

pub fn embed_ordered_with(f: &Kernel, m: usize, k: usize, window: usize, par: Parallelism) -> Result<VertexMap> {
    let min_k = ordered_threshold(f, m)?;
    if k < min_k {
        return Err(Error::KTooSmall { k, min_k });
    }
    let j = IndexSet::range(m);
    let decomposition = decompose_ordered(f, &j)?;
    let source = directed_shift(k, window, Side::Right)?;
    let mus = source_rows(&source);
    let mut images: Vec<Vec<GroundAtom>> = vec![Vec::with_capacity(m); mus.len()];
    for (i, b) in decomposition.blocks.iter().enumerate() {
        match b.kind {
            BlockKind::Increasing => {
                let (hat, rows) = intertwined_rows(&b.kernel, &mus)?;
                for (img, row) in images.iter_mut().zip(realize(&b.labels, &hat, &rows)?) {
                    img.extend(row.into_iter().map(|q| triple(i, q, GroundAtom::Int(0))));
                }
            }
            BlockKind::Decreasing => {
                // run the increasing construction on the reversed orders
                let reversed = b.kernel.relabel(negate);
                let rj = IndexSet::from_unsorted(b.labels.labels().iter().map(|&l| negate(l)).collect());
                let (hat, rows) = intertwined_rows(&reversed, &mus)?;
                for (img, row) in images.iter_mut().zip(realize(&rj, &hat, &rows)?) {
                    img.extend(row.into_iter().rev().map(|q| triple(i, -q, GroundAtom::Int(0))));
                }
            }
            BlockKind::Constant => {
                for (img, mu) in images.iter_mut().zip(&mus) {
                    let tail = GroundAtom::tagged("mu", mu.iter().map(|&x| GroundAtom::Int(x)).collect());
                    img.extend(b.labels.labels().iter().map(|&a| {
                        let t = if f.get(a) == Some(a) { GroundAtom::Int(0) } else { tail.clone() };
                        triple(i, a.value(), t)
                    }));
                }
            }
        }
    }
    let images = images
        .into_iter()
        .map(|values| Tuple::increasing(j.clone(), values))
        .collect::<Result<Vec<_>>>()?;
    VertexMap::onto_kernel_image(source, images, &j, f, true, par)
}

/// The map `ā ↦ ā↾S₀` from `Sh_k(window)` onto `E_f` induced on the
/// projections, where `f` records which coordinates of `S₀` a shift carries
/// onto each other. For empty `S₀` the target is a single vertex.
pub fn planted_projection(k: usize, window: usize, s0: &[usize]) -> Result<VertexMap> {
    if s0.windows(2).any(|w| w[0] >= w[1]) || s0.last().is_some_and(|&x| x >= k) {
        return Err(Error::InvalidParameter(format!("{s0:?} is not an increasing subset of 0..{k}")));
    }
    let source = shift_graph(k, window, false)?;
    let j = IndexSet::new(s0.iter().map(|&i| Label::int(i as i64)).collect())?;
    if s0.is_empty() {
        let target = Graph::undirected(Family::Custom { name: "point".into() }, vec![Tuple::increasing(j, vec![])?], vec![])?;
        let n = source.n();
        return VertexMap::new(source, target, vec![0; n]);
    }
    let f = Kernel::new(
        s0.iter()
            .filter(|&&i| i > 0 && s0.contains(&(i - 1)))
            .map(|&i| (Label::int(i as i64), Label::int(i as i64 - 1))),
    )?;
    let images = source
        .vertices()
        .iter()
        .map(|t| Tuple::increasing(j.clone(), s0.iter().map(|&i| t.values()[i].clone()).collect()))
        .collect::<Result<Vec<_>>>()?;
    VertexMap::onto_kernel_image(source, images, &j, &f, false, Parallelism::default())
}

#[derive(Debug, Clone, Copy, Default)]
pub struct PipelineOptions {
    pub canon: CanonOptions,
    /// Caps the window of the output shift graph.
    pub out_window: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct PipelineResult {
    pub form: CanonicalForm,
    /// `max n_j`; the output source is `Sh_{n+1}(out_window)`.
    pub n: usize,
    pub out_window: usize,
    pub map: VertexMap,
}

/// From a homomorphism `t : Sh_k(window) -> G`, canonizes `t(ā) = t(b̄)`,
/// splits the coordinate set into maximal intervals and returns the injective
/// homomorphism `Sh_{n+1}(w) -> G`, `f ↦ t(η_f)`. The copies of `ℤ` are packed
/// into the witness set: copy `j` holds `w` values plus room for the free
/// coordinates after interval `j`, and copy 0 also holds the ones before the
/// first interval and one spare point at the bottom.
pub fn pipeline_hom_to_subgraphs(t: &VertexMap, opts: &PipelineOptions) -> Result<PipelineResult> {
    let (k, window) = match t.source.family() {
        Family::Shift { r, n, symmetric: false } => (*r, *n),
        other => return Err(Error::WrongFamily(format!("expected an increasing shift graph, got {other:?}"))),
    };
    let par = opts.canon.par;
    if !verify_map_with(t, false, par).is_homomorphism {
        return Err(Error::NotAHomomorphism);
    }
    let rows: Vec<Vec<u32>> =
        source_rows(&t.source).into_iter().map(|r| r.into_iter().map(|x| x as u32).collect()).collect();
    let index: HashMap<&[u32], usize> = rows.iter().enumerate().map(|(i, r)| (r.as_slice(), i)).collect();
    let image = |a: &[u32]| t.assignment[index[a]];
    let oracle = FnOracle { arity: k, ground: window, f: |a: &[u32], b: &[u32]| image(a) == image(b) };
    let mut form = None;
    for target in (k + 1..=window).rev() {
        if let Some(found) = canonize(&oracle, target, &opts.canon)? {
            form = Some(found);
            break;
        }
    }
    let form = form.ok_or(Error::CanonizationFailed(k + 1))?;
    let Some(iv) = form.intervals.clone() else {
        return Err(Error::AllEqualKernel);
    };
    let n = iv.max_length();
    let free = k - form.s.len();
    let copies = iv.starts.len();
    let room = form.n.len().saturating_sub(free + 1) / copies;
    let w = opts.out_window.map_or(room, |x| x.min(room));
    if w < n + 1 {
        return Err(Error::CanonizationFailed(form.n.len()));
    }
    // free coordinates after each interval, up to the next one (or the end)
    let ends: Vec<usize> = iv.intervals().iter().map(|&(_, e)| e).collect();
    let post: Vec<i64> = (0..copies)
        .map(|c| (*iv.starts.get(c + 1).unwrap_or(&k) - ends[c] - 1) as i64)
        .collect();
    let pre = iv.starts[0] as i64;
    let mut slots: Vec<(usize, i64)> = Vec::new();
    for (c, &after) in post.iter().enumerate() {
        let lo = if c == 0 { -pre - 1 } else { 0 };
        slots.extend((lo..w as i64 + after).map(|v| (c, v)));
    }
    let slot_of: HashMap<(usize, i64), usize> = slots.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let source = shift_graph(n + 1, w, false)?;
    let assignment = source_rows(&source)
        .iter()
        .map(|f| {
            let mut eta: Vec<Option<usize>> = vec![None; k];
            for (c, (&start, &len)) in iv.starts.iter().zip(&iv.lengths).enumerate() {
                for r in 0..=len {
                    eta[start + r] = Some(slot_of[&(c, f[r])]);
                }
            }
            let mut prev: Option<usize> = None;
            let mut tuple = Vec::with_capacity(k);
            for e in eta {
                let s = e.unwrap_or_else(|| prev.map_or(0, |p| p + 1));
                if prev.is_some_and(|p| p >= s) {
                    return Err(Error::Invariant("η is not increasing".into()));
                }
                prev = Some(s);
                tuple.push(form.n[s]);
            }
            Ok(image(&tuple))
        })
        .collect::<Result<Vec<_>>>()?;
    let map = VertexMap::new(source, t.target.clone(), assignment)?;
    let report = verify_map_with(&map, false, par);
    if !(report.is_homomorphism && report.is_injective) {
        return Err(Error::VerificationFailed(format!("{:?}", report.counterexamples)));
    }
    Ok(PipelineResult { form, n, out_window: w, map })
}
