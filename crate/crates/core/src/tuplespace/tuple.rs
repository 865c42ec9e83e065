use std::fmt;

use num_rational::Rational64;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use super::{GroundAtom, GroundSet};
use crate::error::{Error, Result};

/// An index label. Integers in the common case; exact rationals when fresh
/// labels are inserted between existing ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(pub Rational64);

impl Label {
    pub fn int(n: i64) -> Self {
        Label(Rational64::from_integer(n))
    }

    pub fn value(self) -> Rational64 {
        self.0
    }

    pub fn midpoint(self, other: Label) -> Label {
        Label((self.0 + other.0) / Rational64::from_integer(2))
    }

    pub fn as_atom(self) -> GroundAtom {
        GroundAtom::number(self.0)
    }

    pub fn to_json(self) -> Value {
        if self.0.is_integer() {
            json!(self.0.to_integer())
        } else {
            json!([self.0.numer(), self.0.denom()])
        }
    }

    pub fn from_json(v: &Value) -> std::result::Result<Self, String> {
        if let Some(n) = v.as_i64() {
            return Ok(Label::int(n));
        }
        match v.as_array().map(|a| a.as_slice()) {
            Some([p, q]) => match (p.as_i64(), q.as_i64()) {
                (Some(p), Some(q)) if q != 0 => Ok(Label(Rational64::new(p, q))),
                _ => Err(format!("bad label: {v}")),
            },
            _ => Err(format!("bad label: {v}")),
        }
    }
}

impl From<i64> for Label {
    fn from(n: i64) -> Self {
        Label::int(n)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Label::from_json(&Value::deserialize(d)?).map_err(de::Error::custom)
    }
}

/// Strictly ascending index labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct IndexSet {
    labels: Vec<Label>,
}

impl IndexSet {
    pub fn new(labels: Vec<Label>) -> Result<Self> {
        if labels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::UnsortedIndex);
        }
        Ok(IndexSet { labels })
    }

    /// Sorts and deduplicates.
    pub fn from_unsorted(mut labels: Vec<Label>) -> Self {
        labels.sort();
        labels.dedup();
        IndexSet { labels }
    }

    /// `{0, .., n-1}`.
    pub fn range(n: usize) -> Self {
        IndexSet { labels: (0..n as i64).map(Label::int).collect() }
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn position(&self, l: Label) -> Option<usize> {
        self.labels.binary_search(&l).ok()
    }

    pub fn contains(&self, l: Label) -> bool {
        self.position(l).is_some()
    }

    pub fn min(&self) -> Option<Label> {
        self.labels.first().copied()
    }

    pub fn max(&self) -> Option<Label> {
        self.labels.last().copied()
    }
}

impl<'de> Deserialize<'de> for IndexSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let labels = Vec::<Label>::deserialize(d)?;
        IndexSet::new(labels).map_err(de::Error::custom)
    }
}

/// An injective function from an index set into a ground set.
///
/// `increasing` records that label order implies strict value order, with
/// respect to the declared order of the ground set the tuple was drawn from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Tuple {
    index: IndexSet,
    values: Vec<GroundAtom>,
    increasing: bool,
}

impl Tuple {
    /// An injective tuple.
    pub fn injective(index: IndexSet, values: Vec<GroundAtom>) -> Result<Self> {
        Self::check_shape(&index, &values)?;
        Ok(Tuple { index, values, increasing: false })
    }

    /// An increasing tuple in the intrinsic atom order.
    pub fn increasing(index: IndexSet, values: Vec<GroundAtom>) -> Result<Self> {
        Self::check_shape(&index, &values)?;
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NotIncreasing);
        }
        Ok(Tuple { index, values, increasing: true })
    }

    /// An increasing tuple in the declared order of `ground`.
    pub fn increasing_in(ground: &GroundSet, index: IndexSet, values: Vec<GroundAtom>) -> Result<Self> {
        Self::check_shape(&index, &values)?;
        let pos: Vec<usize> = values
            .iter()
            .map(|v| ground.position(v).ok_or(Error::NotIncreasing))
            .collect::<Result<_>>()?;
        if pos.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NotIncreasing);
        }
        Ok(Tuple { index, values, increasing: true })
    }

    pub(crate) fn from_parts_unchecked(index: IndexSet, values: Vec<GroundAtom>, increasing: bool) -> Self {
        Tuple { index, values, increasing }
    }

    fn check_shape(index: &IndexSet, values: &[GroundAtom]) -> Result<()> {
        if index.len() != values.len() {
            return Err(Error::TupleLength { labels: index.len(), values: values.len() });
        }
        let mut seen: Vec<&GroundAtom> = values.iter().collect();
        seen.sort();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::NotInjective);
        }
        Ok(())
    }

    pub fn index(&self) -> &IndexSet {
        &self.index
    }

    pub fn values(&self) -> &[GroundAtom] {
        &self.values
    }

    pub fn is_increasing(&self) -> bool {
        self.increasing
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, l: Label) -> Option<&GroundAtom> {
        self.index.position(l).map(|p| &self.values[p])
    }

    /// Values as integers, when every value is an `Int`.
    pub fn int_values(&self) -> Option<Vec<i64>> {
        self.values.iter().map(GroundAtom::as_int).collect()
    }
}

#[derive(Deserialize)]
struct TupleRepr {
    index: IndexSet,
    values: Vec<GroundAtom>,
    increasing: bool,
}

impl<'de> Deserialize<'de> for Tuple {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = TupleRepr::deserialize(d)?;
        // The increasing flag is relative to the ground set the tuple came
        // from, which the file does not carry; only injectivity is rechecked.
        let t = Tuple::injective(r.index, r.values).map(|mut t| {
            t.increasing = r.increasing;
            t
        });
        t.map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn injectivity_enforced() {
        let j = IndexSet::range(2);
        assert_eq!(
            Tuple::injective(j.clone(), vec![GroundAtom::Int(1), GroundAtom::Int(1)]),
            Err(Error::NotInjective)
        );
        assert!(Tuple::injective(j, vec![GroundAtom::Int(1), GroundAtom::Int(0)]).is_ok());
    }

    #[test]
    fn increasing_enforced() {
        let j = IndexSet::range(2);
        let vals = vec![GroundAtom::Int(1), GroundAtom::Int(0)];
        assert_eq!(Tuple::increasing(j.clone(), vals.clone()), Err(Error::NotIncreasing));
        let rev = GroundSet::range(3).reverse();
        assert!(Tuple::increasing_in(&rev, j, vals).is_ok());
    }

    #[test]
    fn index_must_ascend() {
        assert!(IndexSet::new(vec![Label::int(1), Label::int(0)]).is_err());
        let q = Label(Rational64::new(1, 2));
        let j = IndexSet::new(vec![Label::int(0), q, Label::int(1)]).unwrap();
        assert_eq!(j.position(q), Some(1));
    }

    #[test]
    fn label_json() {
        assert_eq!(Label::int(3).to_json().to_string(), "3");
        let q = Label(Rational64::new(5, 2));
        assert_eq!(q.to_json().to_string(), "[5,2]");
        assert_eq!(Label::from_json(&q.to_json()).unwrap(), q);
    }
}
