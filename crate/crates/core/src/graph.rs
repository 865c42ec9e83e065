use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::par::{self, Parallelism};
use crate::tuplespace::{code_kernel, positional, Descriptor, GroundAtom, IndexSet, Kernel, Label, Tuple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// How a graph was built.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Family {
    Shift { r: usize, n: usize, symmetric: bool },
    DirectedShift { r: usize, n: usize, side: Side },
    CyclicSym { r: usize, n: usize },
    BoundedGlued { n_bar: Vec<usize>, n: usize },
    Kernel { kernel: Kernel, index: IndexSet, ground: Descriptor, increasing: bool, directed: bool },
    /// Finite induced piece of a kernel graph on an infinite ground set.
    KernelImage { kernel: Kernel, index: IndexSet, directed: bool },
    Dimacs,
    Custom { name: String },
}

/// A finite graph whose vertices carry tuple labels.
///
/// Undirected edges are stored as `(u, v)` with `u < v`. A directed graph also
/// stores its arcs; its `edges` are then the symmetric closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    family: Family,
    vertices: Vec<Tuple>,
    edges: Vec<(usize, usize)>,
    arcs: Option<Vec<(usize, usize)>>,
}

impl Graph {
    pub fn undirected(family: Family, vertices: Vec<Tuple>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = vertices.len();
        let mut norm = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u == v {
                return Err(Error::InvalidParameter(format!("loop at vertex {u}")));
            }
            if u >= n || v >= n {
                return Err(Error::InvalidParameter(format!("edge ({u},{v}) out of range")));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        norm.dedup();
        Ok(Graph { family, vertices, edges: norm, arcs: None })
    }

    pub fn directed(family: Family, vertices: Vec<Tuple>, mut arcs: Vec<(usize, usize)>) -> Result<Self> {
        arcs.sort_unstable();
        arcs.dedup();
        let mut g = Graph::undirected(family, vertices, arcs.clone())?;
        g.arcs = Some(arcs);
        Ok(g)
    }

    /// Vertices labelled by 1-tuples `(i)`.
    pub fn plain(family: Family, n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let j = IndexSet::range(1);
        let vertices = (0..n as i64)
            .map(|i| Tuple::from_parts_unchecked(j.clone(), vec![GroundAtom::Int(i)], true))
            .collect();
        Graph::undirected(family, vertices, edges)
    }

    /// The graph `E_f` (or `D_f` when `directed`) induced on `vertices`, which
    /// must all share the index set `j`.
    pub fn from_kernel_on(
        family: Family,
        vertices: Vec<Tuple>,
        j: &IndexSet,
        f: &Kernel,
        directed: bool,
        par: Parallelism,
    ) -> Result<Self> {
        if let Err(l) = f.is_within(j) {
            return Err(Error::IndexMismatch(l));
        }
        if f.is_identity_on(j) {
            return Err(Error::IdentityKernel);
        }
        let mut intern: HashMap<&GroundAtom, u32> = HashMap::new();
        let mut codes = Vec::with_capacity(vertices.len());
        for t in &vertices {
            if t.index() != j {
                let l = t.index().labels().iter().find(|l| !j.contains(**l)).or(j.labels().first());
                return Err(Error::IndexMismatch(l.copied().unwrap_or(Label::int(0))));
            }
            let row: Vec<u32> = t
                .values()
                .iter()
                .map(|a| {
                    let next = intern.len() as u32;
                    *intern.entry(a).or_insert(next)
                })
                .collect();
            codes.push(row);
        }
        let arcs = kernel_arcs(&codes, &positional(f, j), par);
        if directed {
            Graph::directed(family, vertices, arcs)
        } else {
            Graph::undirected(family, vertices, arcs)
        }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn vertices(&self) -> &[Tuple] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &Tuple {
        &self.vertices[i]
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn arcs(&self) -> Option<&[(usize, usize)]> {
        self.arcs.as_deref()
    }

    pub fn is_directed(&self) -> bool {
        self.arcs.is_some()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    /// Arc test; an undirected graph has both orientations of every edge.
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        match &self.arcs {
            Some(a) => a.binary_search(&(u, v)).is_ok(),
            None => self.has_edge(u, v),
        }
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n()];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }

    /// Connected components, each sorted, in order of their least vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn vertex_index(&self) -> HashMap<&Tuple, usize> {
        self.vertices.iter().enumerate().map(|(i, t)| (t, i)).collect()
    }

    /// The induced subgraph on `keep` (in the given order).
    pub fn induced(&self, keep: &[usize], family: Family) -> Result<Graph> {
        let mut pos = vec![usize::MAX; self.n()];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
        }
        let vertices = keep.iter().map(|&v| self.vertices[v].clone()).collect();
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| pos[u] != usize::MAX && pos[v] != usize::MAX)
            .map(|&(u, v)| (pos[u], pos[v]))
            .collect();
        Graph::undirected(family, vertices, edges)
    }

    pub fn to_json(&self) -> Value {
        let edges: Vec<_> = match &self.arcs {
            Some(a) => a.iter().map(|&(u, v)| json!([u, v])).collect(),
            None => self.edges.iter().map(|&(u, v)| json!([u, v])).collect(),
        };
        json!({
            "family": serde_json::to_value(&self.family).expect("family serializes"),
            "vertices": serde_json::to_value(&self.vertices).expect("tuples serialize"),
            "edges": edges,
            "directed": self.is_directed(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("graph: {m}"));
        let family: Family =
            serde_json::from_value(v.get("family").cloned().ok_or_else(|| bad("missing family"))?)
                .map_err(|e| bad(&e.to_string()))?;
        let vertices: Vec<Tuple> =
            serde_json::from_value(v.get("vertices").cloned().ok_or_else(|| bad("missing vertices"))?)
                .map_err(|e| bad(&e.to_string()))?;
        let edges: Vec<(usize, usize)> =
            serde_json::from_value(v.get("edges").cloned().ok_or_else(|| bad("missing edges"))?)
                .map_err(|e| bad(&e.to_string()))?;
        let directed = v.get("directed").and_then(Value::as_bool).unwrap_or(false);
        if directed {
            Graph::directed(family, vertices, edges)
        } else {
            Graph::undirected(family, vertices, edges)
        }
    }

    /// DIMACS `.col`: `p edge V E` then one `e u v` line per edge, 1-based.
    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p edge {} {}\n", self.n(), self.edges.len());
        for &(u, v) in &self.edges {
            s.push_str(&format!("e {} {}\n", u + 1, v + 1));
        }
        s
    }

    /// Parses DIMACS `.col`. Comment lines start with `c`; duplicate edges are merged.
    pub fn from_dimacs(text: &str) -> Result<Self> {
        let mut n = None;
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let mut it = line.split_whitespace();
            let bad = || Error::Parse(format!("dimacs line {}: {line}", lineno + 1));
            match it.next() {
                None | Some("c") => {}
                Some("p") => {
                    let _fmt = it.next().ok_or_else(bad)?;
                    n = Some(it.next().and_then(|x| x.parse::<usize>().ok()).ok_or_else(bad)?);
                }
                Some("e") => {
                    let u: usize = it.next().and_then(|x| x.parse().ok()).ok_or_else(bad)?;
                    let v: usize = it.next().and_then(|x| x.parse().ok()).ok_or_else(bad)?;
                    if u == 0 || v == 0 {
                        return Err(bad());
                    }
                    if u != v {
                        edges.push((u - 1, v - 1));
                    }
                }
                Some(_) => return Err(bad()),
            }
        }
        let n = n.ok_or_else(|| Error::Parse("dimacs: missing problem line".into()))?;
        Graph::plain(Family::Dimacs, n, edges)
    }
}

/// Ordered pairs `(a, b)` with positional kernel equal to `f`.
pub(crate) fn kernel_arcs(codes: &[Vec<u32>], f: &[Option<u8>], par: Parallelism) -> Vec<(usize, usize)> {
    let width = f.len();
    par::flat_map_range(par, codes.len(), |a| {
        let mut buf = vec![None; width];
        let mut out = Vec::new();
        for (b, cb) in codes.iter().enumerate() {
            if a == b {
                continue;
            }
            code_kernel(&codes[a], cb, &mut buf);
            if buf == f {
                out.push((a, b));
            }
        }
        out
    })
}
