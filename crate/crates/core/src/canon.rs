//! Finite Erdős–Rado canonization of equivalence relations on increasing
//! tuples.

use std::collections::HashMap;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::par::{self, Parallelism};

/// A black-box relation on increasing `arity`-tuples over `{0, .., ground-1}`.
pub trait RelationOracle: Sync {
    fn arity(&self) -> usize;
    fn ground(&self) -> usize;
    fn related(&self, a: &[u32], b: &[u32]) -> bool;
}

/// `a ~ b` iff they agree on every coordinate in `coords`.
#[derive(Debug, Clone)]
pub struct CoordinateEquality {
    pub arity: usize,
    pub ground: usize,
    pub coords: Vec<usize>,
}

impl RelationOracle for CoordinateEquality {
    fn arity(&self) -> usize {
        self.arity
    }
    fn ground(&self) -> usize {
        self.ground
    }
    fn related(&self, a: &[u32], b: &[u32]) -> bool {
        self.coords.iter().all(|&i| a[i] == b[i])
    }
}

/// `a ~ b` iff the coordinate sums agree.
#[derive(Debug, Clone)]
pub struct SumKernel {
    pub arity: usize,
    pub ground: usize,
}

impl RelationOracle for SumKernel {
    fn arity(&self) -> usize {
        self.arity
    }
    fn ground(&self) -> usize {
        self.ground
    }
    fn related(&self, a: &[u32], b: &[u32]) -> bool {
        a.iter().map(|&x| x as u64).sum::<u64>() == b.iter().map(|&x| x as u64).sum::<u64>()
    }
}

/// Everything is related.
#[derive(Debug, Clone)]
pub struct Constant {
    pub arity: usize,
    pub ground: usize,
}

impl RelationOracle for Constant {
    fn arity(&self) -> usize {
        self.arity
    }
    fn ground(&self) -> usize {
        self.ground
    }
    fn related(&self, _: &[u32], _: &[u32]) -> bool {
        true
    }
}

/// An explicit partition: each tuple carries a class id. Tuples missing from
/// the table are related only to themselves.
#[derive(Debug, Clone)]
pub struct PartitionOracle {
    pub arity: usize,
    pub ground: usize,
    pub classes: HashMap<Vec<u32>, u64>,
}

impl PartitionOracle {
    /// `{"arity": n, "ground": m, "classes": [[[a0, ..], id], ..]}`
    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |k: &str| v.get(k).and_then(Value::as_u64).ok_or_else(|| Error::Parse(format!("missing `{k}`")));
        let arity = field("arity")? as usize;
        let ground = field("ground")? as usize;
        let rows = v.get("classes").and_then(Value::as_array).ok_or_else(|| Error::Parse("missing `classes`".into()))?;
        let mut classes = HashMap::new();
        for row in rows {
            let (t, c): (Vec<u32>, u64) =
                serde_json::from_value(row.clone()).map_err(|e| Error::Parse(format!("bad class entry: {e}")))?;
            if t.len() != arity || t.windows(2).any(|w| w[0] >= w[1]) || t.iter().any(|&x| x as usize >= ground) {
                return Err(Error::Parse(format!("{t:?} is not an increasing {arity}-tuple below {ground}")));
            }
            classes.insert(t, c);
        }
        Ok(PartitionOracle { arity, ground, classes })
    }
}

impl RelationOracle for PartitionOracle {
    fn arity(&self) -> usize {
        self.arity
    }
    fn ground(&self) -> usize {
        self.ground
    }
    fn related(&self, a: &[u32], b: &[u32]) -> bool {
        match (self.classes.get(a), self.classes.get(b)) {
            (Some(x), Some(y)) => x == y,
            _ => a == b,
        }
    }
}

/// A relation given by a closure.
pub struct FnOracle<F> {
    pub arity: usize,
    pub ground: usize,
    pub f: F,
}

impl<F: Fn(&[u32], &[u32]) -> bool + Sync> RelationOracle for FnOracle<F> {
    fn arity(&self) -> usize {
        self.arity
    }
    fn ground(&self) -> usize {
        self.ground
    }
    fn related(&self, a: &[u32], b: &[u32]) -> bool {
        (self.f)(a, b)
    }
}

/// Maximal intervals `[starts[j], starts[j] + lengths[j]]` whose union is `S`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalStructure {
    pub starts: Vec<usize>,
    pub lengths: Vec<usize>,
}

impl IntervalStructure {
    pub fn intervals(&self) -> Vec<(usize, usize)> {
        self.starts.iter().zip(&self.lengths).map(|(&s, &l)| (s, s + l)).collect()
    }

    pub fn coords(&self) -> Vec<usize> {
        self.intervals().into_iter().flat_map(|(a, b)| a..=b).collect()
    }

    pub fn max_length(&self) -> usize {
        self.lengths.iter().copied().max().unwrap_or(0)
    }
}

pub fn interval_structure(s: &[usize], n: usize) -> Result<IntervalStructure> {
    if s.is_empty() {
        return Err(Error::EmptyS);
    }
    if s.windows(2).any(|w| w[0] >= w[1]) || *s.last().unwrap() >= n {
        return Err(Error::InvalidParameter(format!("{s:?} is not an increasing subset of 0..{n}")));
    }
    let mut out = IntervalStructure { starts: vec![], lengths: vec![] };
    for (i, &x) in s.iter().enumerate() {
        if i > 0 && s[i - 1] + 1 == x {
            *out.lengths.last_mut().unwrap() += 1;
        } else {
            out.starts.push(x);
            out.lengths.push(0);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalForm {
    /// The witness subset of the ground set.
    pub n: Vec<u32>,
    pub s: Vec<usize>,
    /// `None` when `s` is empty.
    pub intervals: Option<IntervalStructure>,
}

impl CanonicalForm {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "s": self.s,
            "intervals": self.intervals.as_ref().map(|iv| json!({
                "starts": iv.starts,
                "lengths": iv.lengths,
                "intervals": iv.intervals(),
            })),
        })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CanonOptions {
    /// Search nodes allowed per candidate coordinate set.
    pub node_budget: u64,
    pub seed: u64,
    pub par: Parallelism,
}

impl Default for CanonOptions {
    fn default() -> Self {
        CanonOptions { node_budget: 200_000, seed: 0, par: Parallelism::default() }
    }
}

fn eq_on(s: &[usize], a: &[u32], b: &[u32]) -> bool {
    s.iter().all(|&i| a[i] == b[i])
}

/// Checks reflexivity, symmetry and transitivity: exhaustively when the ground
/// set has at most 8 points, on 1000 random triples otherwise.
pub fn check_equivalence(oracle: &dyn RelationOracle, seed: u64) -> Result<()> {
    let (n, m) = (oracle.arity(), oracle.ground());
    let tuples: Vec<Vec<u32>> = (0..m as u32).combinations(n).collect();
    if tuples.is_empty() {
        return Ok(());
    }
    let bad = |what: &str, t: &[&Vec<u32>]| Err(Error::NotEquivalence(format!("{what} fails at {t:?}")));
    let check = |a: &Vec<u32>, b: &Vec<u32>, c: &Vec<u32>| -> Result<()> {
        if !oracle.related(a, a) {
            return bad("reflexivity", &[a]);
        }
        let ab = oracle.related(a, b);
        if ab != oracle.related(b, a) {
            return bad("symmetry", &[a, b]);
        }
        if ab && oracle.related(b, c) && !oracle.related(a, c) {
            return bad("transitivity", &[a, b, c]);
        }
        Ok(())
    };
    if m <= 8 {
        for a in &tuples {
            for b in &tuples {
                for c in &tuples {
                    check(a, b, c)?;
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..1000 {
            let pick = |rng: &mut ChaCha8Rng| &tuples[rng.random_range(0..tuples.len())];
            let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            check(a, b, c)?;
            // random triples almost never hit a class twice; also close over a related pair
            if let Some(d) = tuples.iter().find(|d| *d != a && oracle.related(a, d)) {
                check(a, d, c)?;
                check(c, a, d)?;
            }
        }
    }
    Ok(())
}

/// Whether the oracle agrees with equality on `s` for every pair of tuples
/// over `n`.
pub fn verify_form(oracle: &dyn RelationOracle, n: &[u32], s: &[usize]) -> bool {
    let tuples: Vec<Vec<u32>> = n.iter().copied().combinations(oracle.arity()).collect();
    tuples.iter().all(|a| tuples.iter().all(|b| oracle.related(a, b) == eq_on(s, a, b)))
}

struct Search<'a> {
    oracle: &'a dyn RelationOracle,
    s: &'a [usize],
    target: usize,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    /// Whether adding `x` (larger than everything in `chosen`) keeps the
    /// invariant on all tuple pairs involving `x`.
    fn consistent(&self, chosen: &[u32], x: u32) -> bool {
        let n = self.oracle.arity();
        if chosen.len() + 1 < n {
            return true;
        }
        let mut all = chosen.to_vec();
        all.push(x);
        let with_x: Vec<Vec<u32>> = chosen
            .iter()
            .copied()
            .combinations(n - 1)
            .map(|mut t| {
                t.push(x);
                t
            })
            .collect();
        let every: Vec<Vec<u32>> = all.iter().copied().combinations(n).collect();
        with_x.iter().all(|a| every.iter().all(|b| self.oracle.related(a, b) == eq_on(self.s, a, b)))
    }

    fn dfs(&mut self, chosen: &mut Vec<u32>) -> Option<Vec<u32>> {
        if chosen.len() == self.target {
            return Some(chosen.clone());
        }
        let m = self.oracle.ground() as u32;
        let start = chosen.last().map_or(0, |&l| l + 1);
        for x in start..m {
            if ((m - x) as usize) < self.target - chosen.len() {
                break;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return None;
            }
            if self.consistent(chosen, x) {
                chosen.push(x);
                if let Some(found) = self.dfs(chosen) {
                    return Some(found);
                }
                chosen.pop();
            }
        }
        None
    }
}

/// Searches for a witness set `N` of size `target` and a coordinate set `S`
/// such that on tuples over `N` the oracle is equality on `S`. Candidate sets
/// `S` are tried by size, then lexicographically; `Ok(None)` means no form was
/// found within the node budget.
pub fn canonize(oracle: &dyn RelationOracle, target: usize, opts: &CanonOptions) -> Result<Option<CanonicalForm>> {
    let (n, m) = (oracle.arity(), oracle.ground());
    if n == 0 {
        return Err(Error::InvalidParameter("arity must be positive".into()));
    }
    if target < n + 1 || target > m {
        return Err(Error::InvalidParameter(format!("target {target} must lie in {}..={m}", n + 1)));
    }
    check_equivalence(oracle, opts.seed)?;
    let candidates: Vec<Vec<usize>> = (0..=n).flat_map(|size| (0..n).combinations(size)).collect();
    let found = par::find_map_first(opts.par, &candidates, |s| {
        let mut search = Search { oracle, s, target, nodes: 0, budget: opts.node_budget };
        search.dfs(&mut Vec::new()).map(|witness| (s.clone(), witness))
    });
    let Some((s, witness)) = found else {
        return Ok(None);
    };
    if !verify_form(oracle, &witness, &s) {
        return Err(Error::Invariant("canonical form failed re-verification".into()));
    }
    let intervals = if s.is_empty() { None } else { Some(interval_structure(&s, n)?) };
    Ok(Some(CanonicalForm { n: witness, s, intervals }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intervals() {
        let iv = interval_structure(&[0, 1, 2], 3).unwrap();
        assert_eq!(iv.intervals(), vec![(0, 2)]);
        let iv = interval_structure(&[0, 2], 3).unwrap();
        assert_eq!(iv.lengths, vec![0, 0]);
        let iv = interval_structure(&[1, 2, 4, 5, 6], 8).unwrap();
        assert_eq!(iv.intervals(), vec![(1, 2), (4, 6)]);
        assert_eq!(iv.lengths, vec![1, 2]);
        assert_eq!(iv.coords(), vec![1, 2, 4, 5, 6]);
        assert_eq!(interval_structure(&[], 3), Err(Error::EmptyS));
    }

    #[test]
    fn already_canonical() {
        let o = CoordinateEquality { arity: 2, ground: 10, coords: vec![0] };
        let c = canonize(&o, 10, &CanonOptions::default()).unwrap().unwrap();
        assert_eq!(c.s, vec![0]);
        assert_eq!(c.n, (0..10).collect::<Vec<_>>());
        let c = canonize(&Constant { arity: 2, ground: 6 }, 6, &CanonOptions::default()).unwrap().unwrap();
        assert!(c.s.is_empty());
        assert!(c.intervals.is_none());
    }

    #[test]
    fn sidon_witness() {
        let o = SumKernel { arity: 2, ground: 12 };
        let c = canonize(&o, 4, &CanonOptions::default()).unwrap().unwrap();
        assert_eq!(c.s, vec![0, 1]);
        let sums: Vec<u32> = c.n.iter().copied().tuple_combinations().map(|(a, b)| a + b).collect();
        assert!(sums.iter().all_unique());
    }

    #[test]
    fn rejects_non_equivalence() {
        let o = FnOracle { arity: 1, ground: 4, f: |a: &[u32], b: &[u32]| a[0].abs_diff(b[0]) <= 1 };
        assert!(matches!(canonize(&o, 3, &CanonOptions::default()), Err(Error::NotEquivalence(_))));
    }

    #[test]
    fn partition_file() {
        let v = json!({"arity": 1, "ground": 3, "classes": [[[0], 7], [[1], 7], [[2], 8]]});
        let o = PartitionOracle::from_json(&v).unwrap();
        assert!(o.related(&[0], &[1]));
        assert!(!o.related(&[0], &[2]));
        assert!(PartitionOracle::from_json(&json!({"arity": 2, "ground": 3, "classes": [[[1, 0], 0]]})).is_err());
    }
}
