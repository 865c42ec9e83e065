use std::time::{Duration, Instant};

use serde::Serialize;

use super::Coloring;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::par::{self, Parallelism};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// A clique of size `chi`.
    CliqueFound { vertices: Vec<usize> },
    /// The search refuted every `k`-coloring of one component.
    ExhaustionProof { k: usize, nodes: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub nodes: u64,
    pub elapsed_ms: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveReport {
    pub chi: usize,
    pub witness: Coloring,
    pub certificate: Certificate,
    pub stats: Stats,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GreedyOrder {
    Natural,
    Dsatur,
    /// Vertices in this order; any vertex not listed follows in index order.
    Given(Vec<usize>),
}

struct Deadline(Option<Instant>);

impl Deadline {
    fn new(budget: Option<Duration>) -> Self {
        Deadline(budget.map(|b| Instant::now() + b))
    }

    fn passed(&self) -> bool {
        self.0.is_some_and(|d| Instant::now() >= d)
    }
}

/// A connected component with local indices.
struct Component {
    global: Vec<usize>,
    adj: Vec<Vec<usize>>,
}

fn components(g: &Graph) -> Vec<Component> {
    let adj = g.adjacency();
    let mut local = vec![0usize; g.n()];
    g.components()
        .into_iter()
        .map(|global| {
            for (i, &v) in global.iter().enumerate() {
                local[v] = i;
            }
            let adj = global.iter().map(|&v| adj[v].iter().map(|&u| local[u]).collect()).collect();
            Component { global, adj }
        })
        .collect()
}

fn greedy_local(adj: &[Vec<usize>], order: &[usize]) -> Vec<u32> {
    let mut colors = vec![u32::MAX; adj.len()];
    let mut used = Vec::new();
    for &v in order {
        used.clear();
        used.extend(adj[v].iter().map(|&u| colors[u]).filter(|&c| c != u32::MAX));
        used.sort_unstable();
        used.dedup();
        let c = used.iter().enumerate().find(|&(i, &c)| i as u32 != c).map_or(used.len(), |(i, _)| i);
        colors[v] = c as u32;
    }
    colors
}

fn dsatur_local(adj: &[Vec<usize>]) -> Vec<u32> {
    let n = adj.len();
    let mut colors = vec![u32::MAX; n];
    let mut seen: Vec<Vec<bool>> = vec![Vec::new(); n];
    let mut sat = vec![0usize; n];
    let mut udeg: Vec<usize> = adj.iter().map(Vec::len).collect();
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| colors[v] == u32::MAX)
            .max_by(|&a, &b| (sat[a], udeg[a]).cmp(&(sat[b], udeg[b])).then(b.cmp(&a)))
            .unwrap();
        let c = (0..).find(|&c| seen[v].get(c).is_none_or(|s| !s)).unwrap();
        colors[v] = c as u32;
        for &u in &adj[v] {
            udeg[u] -= 1;
            if seen[u].len() <= c {
                seen[u].resize(c + 1, false);
            }
            if !seen[u][c] {
                seen[u][c] = true;
                sat[u] += 1;
            }
        }
    }
    colors
}

pub fn chi_greedy(g: &Graph, order: GreedyOrder) -> Coloring {
    let adj = g.adjacency();
    let colors = match order {
        GreedyOrder::Natural => greedy_local(&adj, &(0..g.n()).collect::<Vec<_>>()),
        GreedyOrder::Dsatur => dsatur_local(&adj),
        GreedyOrder::Given(mut o) => {
            let mut listed = vec![false; g.n()];
            o.retain(|&v| v < g.n() && !std::mem::replace(&mut listed[v], true));
            o.extend((0..g.n()).filter(|&v| !listed[v]));
            greedy_local(&adj, &o)
        }
    };
    Coloring::tight(colors)
}

/// Bitset over component-local vertices.
#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn has(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn and_not(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & !b).collect())
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }
    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + b)
            })
        })
    }
}

struct CliqueSearch<'a> {
    nbr: &'a [Bits],
    best: Vec<usize>,
    nodes: u64,
    limit: u64,
}

impl CliqueSearch<'_> {
    fn expand(&mut self, current: &mut Vec<usize>, p: Bits, x: Bits) {
        self.nodes += 1;
        if p.is_empty() {
            if x.is_empty() && current.len() > self.best.len() {
                self.best = current.clone();
            }
            return;
        }
        if current.len() + p.count() <= self.best.len() || self.nodes > self.limit {
            return;
        }
        let pivot = p.iter().chain(x.iter()).max_by_key(|&u| p.and(&self.nbr[u]).count()).unwrap();
        let mut p = p;
        let mut x = x;
        for v in p.and_not(&self.nbr[pivot]).iter().collect::<Vec<_>>() {
            current.push(v);
            self.expand(current, p.and(&self.nbr[v]), x.and(&self.nbr[v]));
            current.pop();
            p.0[v / 64] &= !(1 << (v % 64));
            x.set(v);
        }
    }
}

fn clique_local(adj: &[Vec<usize>], limit: u64) -> Vec<usize> {
    let n = adj.len();
    let nbr: Vec<Bits> = adj
        .iter()
        .map(|a| {
            let mut b = Bits::empty(n);
            a.iter().for_each(|&u| b.set(u));
            b
        })
        .collect();
    // greedy seed: repeatedly add the highest-degree compatible vertex
    let mut seed: Vec<usize> = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(adj[v].len()), v));
    for v in order {
        if seed.iter().all(|&u| nbr[v].has(u)) {
            seed.push(v);
        }
    }
    let mut all = Bits::empty(n);
    (0..n).for_each(|v| all.set(v));
    let mut s = CliqueSearch { nbr: &nbr, best: seed, nodes: 0, limit };
    s.expand(&mut Vec::new(), all, Bits::empty(n));
    let mut best = s.best;
    best.sort_unstable();
    best
}

/// A large clique (maximum unless the search budget runs out).
pub fn max_clique(g: &Graph) -> Vec<usize> {
    components(g)
        .into_iter()
        .map(|c| clique_local(&c.adj, 200_000).into_iter().map(|v| c.global[v]).collect::<Vec<_>>())
        .max_by(|a, b| a.len().cmp(&b.len()).then(b.cmp(a)))
        .unwrap_or_default()
}

struct BranchAndBound<'a> {
    adj: &'a [Vec<usize>],
    k: usize,
    colors: Vec<u32>,
    count: Vec<u16>,
    sat: Vec<usize>,
    udeg: Vec<usize>,
    ub: usize,
    lb: usize,
    best: Vec<u32>,
    nodes: u64,
    deadline: &'a Deadline,
    timed_out: bool,
}

impl BranchAndBound<'_> {
    fn assign(&mut self, v: usize, c: usize) {
        self.colors[v] = c as u32;
        let adj = self.adj;
        for &u in &adj[v] {
            self.udeg[u] -= 1;
            let slot = &mut self.count[u * self.k + c];
            *slot += 1;
            if *slot == 1 {
                self.sat[u] += 1;
            }
        }
    }

    fn unassign(&mut self, v: usize, c: usize) {
        self.colors[v] = u32::MAX;
        let adj = self.adj;
        for &u in &adj[v] {
            self.udeg[u] += 1;
            let slot = &mut self.count[u * self.k + c];
            *slot -= 1;
            if *slot == 0 {
                self.sat[u] -= 1;
            }
        }
    }

    fn search(&mut self, colored: usize, used: usize) {
        self.nodes += 1;
        if self.nodes.is_multiple_of(1024) && self.deadline.passed() {
            self.timed_out = true;
        }
        if self.timed_out || used >= self.ub || self.ub <= self.lb {
            return;
        }
        let n = self.adj.len();
        if colored == n {
            self.ub = used;
            self.best = self.colors.clone();
            return;
        }
        let mut v = usize::MAX;
        for u in 0..n {
            if self.colors[u] != u32::MAX {
                continue;
            }
            if v == usize::MAX || (self.sat[u], self.udeg[u]) > (self.sat[v], self.udeg[v]) {
                v = u;
            }
        }
        for c in 0..used {
            if self.count[v * self.k + c] == 0 {
                self.assign(v, c);
                self.search(colored + 1, used);
                self.unassign(v, c);
                if self.timed_out || self.ub <= self.lb {
                    return;
                }
            }
        }
        if used + 1 < self.ub {
            self.assign(v, used);
            self.search(colored + 1, used + 1);
            self.unassign(v, used);
        }
    }
}

struct Local {
    chi: usize,
    colors: Vec<u32>,
    certificate: Certificate,
    nodes: u64,
}

fn solve_component(c: &Component, deadline: &Deadline) -> std::result::Result<Local, (usize, usize)> {
    let adj = &c.adj;
    let n = adj.len();
    let clique = clique_local(adj, 200_000);
    let greedy = dsatur_local(adj);
    let ub = greedy.iter().max().map_or(0, |&m| m as usize + 1);
    let lb = clique.len();
    if ub == lb {
        return Ok(Local { chi: ub, colors: greedy, certificate: Certificate::CliqueFound { vertices: clique }, nodes: 0 });
    }
    let mut bb = BranchAndBound {
        adj,
        k: ub,
        colors: vec![u32::MAX; n],
        count: vec![0; n * ub],
        sat: vec![0; n],
        udeg: adj.iter().map(Vec::len).collect(),
        ub,
        lb,
        best: greedy,
        nodes: 0,
        deadline,
        timed_out: false,
    };
    // any proper coloring can be permuted to give the clique colors 0..q-1
    for (i, &v) in clique.iter().enumerate() {
        bb.assign(v, i);
    }
    bb.search(clique.len(), clique.len());
    if bb.timed_out {
        return Err((lb, bb.ub));
    }
    let certificate = if bb.ub == lb {
        Certificate::CliqueFound { vertices: clique }
    } else {
        Certificate::ExhaustionProof { k: bb.ub - 1, nodes: bb.nodes }
    };
    Ok(Local { chi: bb.ub, colors: bb.best, certificate, nodes: bb.nodes })
}

pub fn chi_exact(g: &Graph, budget: Option<Duration>) -> Result<SolveReport> {
    chi_exact_with(g, budget, Parallelism::default())
}

/// DSATUR branch and bound per connected component, seeded with a clique
/// lower bound and a greedy upper bound. Components may be solved in parallel;
/// the report does not depend on it.
pub fn chi_exact_with(g: &Graph, budget: Option<Duration>, par: Parallelism) -> Result<SolveReport> {
    let start = Instant::now();
    let deadline = Deadline::new(budget);
    let comps = components(g);
    let results = par::map_range(par, comps.len(), |i| solve_component(&comps[i], &deadline));
    let mut colors = vec![0u32; g.n()];
    let mut chi = 0;
    let mut certificate = Certificate::CliqueFound { vertices: vec![] };
    let mut nodes = 0;
    let (mut lower, mut upper, mut failed) = (0, 0, false);
    for (c, r) in comps.iter().zip(results) {
        match r {
            Ok(local) => {
                nodes += local.nodes;
                lower = lower.max(local.chi);
                upper = upper.max(local.chi);
                for (i, &v) in c.global.iter().enumerate() {
                    colors[v] = local.colors[i];
                }
                if local.chi > chi {
                    chi = local.chi;
                    certificate = match local.certificate {
                        Certificate::CliqueFound { vertices } => Certificate::CliqueFound {
                            vertices: vertices.into_iter().map(|v| c.global[v]).collect(),
                        },
                        e => e,
                    };
                }
            }
            Err((lo, hi)) => {
                failed = true;
                lower = lower.max(lo);
                upper = upper.max(hi);
            }
        }
    }
    if failed {
        return Err(Error::Timeout { lower, upper });
    }
    let witness = Coloring { colors, palette: chi as u32 };
    Ok(SolveReport { chi, witness, certificate, stats: Stats { nodes, elapsed_ms: start.elapsed().as_millis() } })
}

struct Csp<'a> {
    adj: &'a [Vec<usize>],
    edge_id: Vec<Vec<usize>>,
    weight: Vec<u64>,
    domain: Vec<u64>,
    value: Vec<u32>,
    trail: Vec<(usize, u64)>,
    nodes: u64,
    deadline: &'a Deadline,
    timed_out: bool,
}

impl Csp<'_> {
    /// Smallest domain size over conflict-weighted degree; lowest index on ties.
    fn pick(&self) -> usize {
        let mut best = usize::MAX;
        let (mut bd, mut bw) = (0u64, 0u64);
        for v in 0..self.adj.len() {
            if self.value[v] != u32::MAX {
                continue;
            }
            let d = self.domain[v].count_ones() as u64;
            let w: u64 = self.adj[v]
                .iter()
                .zip(&self.edge_id[v])
                .filter(|(u, _)| self.value[**u] == u32::MAX)
                .map(|(_, &e)| self.weight[e])
                .sum();
            let better = best == usize::MAX || (w > 0 && (bw == 0 || d * bw < bd * w));
            if better {
                best = v;
                bd = d;
                bw = w;
            }
        }
        best
    }

    fn solve(&mut self, left: usize, used: u32, k: u32) -> bool {
        self.nodes += 1;
        if self.nodes.is_multiple_of(1024) && self.deadline.passed() {
            self.timed_out = true;
        }
        if self.timed_out {
            return false;
        }
        if left == 0 {
            return true;
        }
        let v = self.pick();
        let cap = (used + 1).min(k);
        for c in 0..cap {
            if self.domain[v] >> c & 1 == 0 {
                continue;
            }
            let mark = self.trail.len();
            self.value[v] = c;
            let mut wiped = false;
            let adj = self.adj;
            for &u in &adj[v] {
                if self.value[u] == u32::MAX && self.domain[u] >> c & 1 == 1 {
                    self.trail.push((u, self.domain[u]));
                    self.domain[u] &= !(1 << c);
                    if self.domain[u] == 0 {
                        let e = self.edge_id[v][adj[v].iter().position(|&x| x == u).unwrap()];
                        self.weight[e] += 1;
                        wiped = true;
                        break;
                    }
                }
            }
            if !wiped && self.solve(left - 1, used.max(c + 1), k) {
                return true;
            }
            while self.trail.len() > mark {
                let (u, d) = self.trail.pop().unwrap();
                self.domain[u] = d;
            }
            self.value[v] = u32::MAX;
            if self.timed_out {
                return false;
            }
        }
        false
    }
}

fn csp_local(adj: &[Vec<usize>], k: usize, deadline: &Deadline, nodes: &mut u64) -> Result<Option<Vec<u32>>> {
    if k > 64 {
        return Err(Error::InvalidParameter("the CSP checker supports at most 64 colors".into()));
    }
    let n = adj.len();
    if n == 0 {
        return Ok(Some(vec![]));
    }
    if k == 0 {
        return Ok(None);
    }
    let full = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    let mut next = 0;
    let mut edge_id = vec![Vec::new(); n];
    for v in 0..n {
        for &u in &adj[v] {
            let id = if u < v {
                edge_id[u][adj[u].iter().position(|&x| x == v).unwrap()]
            } else {
                next += 1;
                next - 1
            };
            edge_id[v].push(id);
        }
    }
    let mut csp = Csp {
        adj,
        edge_id,
        weight: vec![1; next],
        domain: vec![full; n],
        value: vec![u32::MAX; n],
        trail: Vec::new(),
        nodes: 0,
        deadline,
        timed_out: false,
    };
    let found = csp.solve(n, 0, k as u32);
    *nodes += csp.nodes;
    if csp.timed_out {
        return Err(Error::Timeout { lower: 0, upper: k });
    }
    Ok(found.then_some(csp.value))
}

/// Forward-checking search for a proper `k`-coloring, component by component.
pub fn k_colorable(g: &Graph, k: usize, budget: Option<Duration>) -> Result<Option<Coloring>> {
    let deadline = Deadline::new(budget);
    let mut colors = vec![0u32; g.n()];
    let mut nodes = 0;
    for c in components(g) {
        match csp_local(&c.adj, k, &deadline, &mut nodes)? {
            Some(local) => c.global.iter().zip(local).for_each(|(&v, x)| colors[v] = x),
            None => return Ok(None),
        }
    }
    Ok(Some(Coloring { colors, palette: k as u32 }))
}

/// Chromatic number by increasing `k` until [`k_colorable`] succeeds.
pub fn chi_csp(g: &Graph, budget: Option<Duration>) -> Result<(usize, Coloring)> {
    let deadline = Deadline::new(budget);
    let mut colors = vec![0u32; g.n()];
    let mut chi = 0;
    let mut nodes = 0;
    for c in components(g) {
        let mut k = chi.max(1);
        loop {
            match csp_local(&c.adj, k, &deadline, &mut nodes) {
                Ok(Some(local)) => {
                    c.global.iter().zip(local).for_each(|(&v, x)| colors[v] = x);
                    chi = chi.max(k);
                    break;
                }
                Ok(None) => k += 1,
                Err(Error::Timeout { .. }) => return Err(Error::Timeout { lower: k, upper: g.n() }),
                Err(e) => return Err(e),
            }
        }
    }
    Ok((chi, Coloring { colors, palette: chi as u32 }))
}
