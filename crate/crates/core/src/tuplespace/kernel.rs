use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use super::{IndexSet, Label, Tuple};
use crate::error::{Error, Result};

/// A partial injective function on index labels: the coincidence pattern
/// `{(i, j) : a_i = b_j}` between two injective tuples.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Kernel {
    forward: BTreeMap<Label, Label>,
}

impl Kernel {
    pub fn empty() -> Self {
        Kernel::default()
    }

    pub fn new<I: IntoIterator<Item = (Label, Label)>>(pairs: I) -> Result<Self> {
        let mut forward = BTreeMap::new();
        let mut seen_range = BTreeSet::new();
        for (i, j) in pairs {
            if let Some(prev) = forward.insert(i, j) {
                if prev != j {
                    return Err(Error::NotPartialInjective);
                }
                continue;
            }
            if !seen_range.insert(j) {
                return Err(Error::NotPartialInjective);
            }
        }
        Ok(Kernel { forward })
    }

    /// Convenience for integer labels.
    pub fn from_ints(pairs: &[(i64, i64)]) -> Result<Self> {
        Kernel::new(pairs.iter().map(|&(i, j)| (Label::int(i), Label::int(j))))
    }

    /// The identity on every label of `j`.
    pub fn identity(j: &IndexSet) -> Self {
        Kernel { forward: j.labels().iter().map(|&l| (l, l)).collect() }
    }

    /// `{(i, i-1) : 1 <= i < r}`, the left shift.
    pub fn left_shift(r: usize) -> Self {
        Kernel { forward: (1..r as i64).map(|i| (Label::int(i), Label::int(i - 1))).collect() }
    }

    /// `{(i-1, i) : 1 <= i < r}`, the right shift.
    pub fn right_shift(r: usize) -> Self {
        Kernel { forward: (1..r as i64).map(|i| (Label::int(i - 1), Label::int(i))).collect() }
    }

    pub fn get(&self, i: Label) -> Option<Label> {
        self.forward.get(&i).copied()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Label, Label)> + '_ {
        self.forward.iter().map(|(&i, &j)| (i, j))
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn domain(&self) -> BTreeSet<Label> {
        self.forward.keys().copied().collect()
    }

    pub fn range(&self) -> BTreeSet<Label> {
        self.forward.values().copied().collect()
    }

    /// Dom(f) ∪ Rg(f).
    pub fn support(&self) -> IndexSet {
        IndexSet::from_unsorted(self.forward.iter().flat_map(|(&i, &j)| [i, j]).collect())
    }

    pub fn inverse(&self) -> Kernel {
        Kernel { forward: self.forward.iter().map(|(&i, &j)| (j, i)).collect() }
    }

    pub fn is_identity_on(&self, j: &IndexSet) -> bool {
        *self == Kernel::identity(j)
    }

    pub fn is_within(&self, j: &IndexSet) -> std::result::Result<(), Label> {
        for (i, k) in self.pairs() {
            if !j.contains(i) {
                return Err(i);
            }
            if !j.contains(k) {
                return Err(k);
            }
        }
        Ok(())
    }

    /// `f ∩ (S × S)`.
    pub fn restrict(&self, s: &IndexSet) -> Kernel {
        Kernel {
            forward: self.pairs().filter(|&(i, j)| s.contains(i) && s.contains(j)).collect(),
        }
    }

    /// Applies `g` to every label on both sides. `g` must be injective.
    pub fn relabel(&self, g: impl Fn(Label) -> Label) -> Kernel {
        Kernel { forward: self.pairs().map(|(i, j)| (g(i), g(j))).collect() }
    }

    /// First violating pair `(i, j)` with `i < j` and `f(i) >= f(j)`.
    pub fn order_violation(&self) -> Option<(Label, Label)> {
        let entries: Vec<_> = self.pairs().collect();
        entries.windows(2).find(|w| w[0].1 >= w[1].1).map(|w| (w[0].0, w[1].0))
    }

    pub fn is_order_preserving(&self) -> bool {
        self.order_violation().is_none()
    }

    /// First `i` with `f(i) <= i`.
    pub fn non_increasing_point(&self) -> Option<Label> {
        self.pairs().find(|&(i, j)| j <= i).map(|(i, _)| i)
    }

    pub fn has_increasing_orbits(&self) -> bool {
        self.non_increasing_point().is_none()
    }

    pub fn insert_unchecked(&mut self, i: Label, j: Label) {
        self.forward.insert(i, j);
    }

    pub fn to_json(&self) -> Value {
        json!({ "pairs": self.pairs().map(|(i, j)| json!([i.to_json(), j.to_json()])).collect::<Vec<_>>() })
    }

    pub fn from_json(v: &Value) -> std::result::Result<Self, String> {
        let pairs = v.get("pairs").and_then(Value::as_array).ok_or("kernel needs a pairs array")?;
        let mut out = Vec::with_capacity(pairs.len());
        for p in pairs {
            match p.as_array().map(|a| a.as_slice()) {
                Some([i, j]) => out.push((Label::from_json(i)?, Label::from_json(j)?)),
                _ => return Err(format!("bad kernel pair: {p}")),
            }
        }
        Kernel::new(out).map_err(|e| e.to_string())
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (n, (i, j)) in self.pairs().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "({i},{j})")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for Kernel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Kernel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Kernel::from_json(&Value::deserialize(d)?).map_err(de::Error::custom)
    }
}

/// `{(i, j) : a_i = b_j}`, with `i` ranging over `a`'s labels and `j` over `b`'s.
pub fn kernel_of(a: &Tuple, b: &Tuple) -> Kernel {
    let by_value: HashMap<_, Label> =
        b.values().iter().zip(b.index().labels()).map(|(v, &l)| (v, l)).collect();
    let forward = a
        .values()
        .iter()
        .zip(a.index().labels())
        .filter_map(|(v, &i)| by_value.get(v).map(|&j| (i, j)))
        .collect();
    Kernel { forward }
}

/// Positional kernel over interned value codes: `out[p] = Some(q)` iff `a[p] == b[q]`.
pub(crate) fn code_kernel(a: &[u32], b: &[u32], out: &mut [Option<u8>]) {
    for (p, x) in a.iter().enumerate() {
        out[p] = b.iter().position(|y| y == x).map(|q| q as u8);
    }
}

/// A kernel as a positional table over `j`.
pub(crate) fn positional(f: &Kernel, j: &IndexSet) -> Vec<Option<u8>> {
    let mut table = vec![None; j.len()];
    for (i, k) in f.pairs() {
        if let (Some(p), Some(q)) = (j.position(i), j.position(k)) {
            table[p] = Some(q as u8);
        }
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tuplespace::GroundAtom;

    fn t(vals: &[i64]) -> Tuple {
        Tuple::injective(IndexSet::range(vals.len()), vals.iter().map(|&v| GroundAtom::Int(v)).collect())
            .unwrap()
    }

    #[test]
    fn shifted_triples() {
        assert_eq!(kernel_of(&t(&[0, 1, 2]), &t(&[1, 2, 3])), Kernel::from_ints(&[(1, 0), (2, 1)]).unwrap());
    }

    #[test]
    fn equal_tuples_give_identity() {
        let a = t(&[4, 7, 9]);
        assert!(kernel_of(&a, &a).is_identity_on(a.index()));
    }

    #[test]
    fn disjoint_ranges_give_empty() {
        assert!(kernel_of(&t(&[0, 2, 5]), &t(&[1, 3, 6])).is_empty());
    }

    #[test]
    fn rejects_non_functions() {
        assert!(Kernel::from_ints(&[(0, 1), (0, 2)]).is_err());
        assert!(Kernel::from_ints(&[(0, 1), (2, 1)]).is_err());
        assert!(Kernel::from_ints(&[(0, 1), (0, 1)]).is_ok());
    }

    #[test]
    fn order_and_orbits() {
        let f = Kernel::from_ints(&[(0, 2), (1, 3)]).unwrap();
        assert!(f.is_order_preserving() && f.has_increasing_orbits());
        let g = Kernel::from_ints(&[(0, 3), (1, 2)]).unwrap();
        assert!(!g.is_order_preserving());
        let h = Kernel::from_ints(&[(1, 0)]).unwrap();
        assert!(h.is_order_preserving() && !h.has_increasing_orbits());
    }

    #[test]
    fn json_round_trip() {
        let f = Kernel::from_ints(&[(0, 1), (2, 3)]).unwrap();
        assert_eq!(f.to_json().to_string(), r#"{"pairs":[[0,1],[2,3]]}"#);
        assert_eq!(Kernel::from_json(&f.to_json()).unwrap(), f);
    }
}
