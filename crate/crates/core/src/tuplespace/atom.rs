use std::cmp::Ordering;
use std::fmt;

use num_rational::Rational64;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// An element of a ground set.
///
/// The intrinsic order puts `Neg` below everything, compares `Int` and `Rat`
/// numerically, orders `Pair` lexicographically with the left coordinate most
/// significant, and orders `Tagged` atoms by tag and then payload. Shapes are
/// ranked `Neg < numbers < Pair < Tagged` so the order is total; ground sets
/// built by this crate never depend on the cross-shape ranking except for the
/// sentinel.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroundAtom {
    Int(i64),
    Rat(Rational64),
    Neg,
    Pair(Box<GroundAtom>, Box<GroundAtom>),
    Tagged { tag: String, payload: Vec<GroundAtom> },
}

impl GroundAtom {
    pub fn pair(left: GroundAtom, right: GroundAtom) -> Self {
        GroundAtom::Pair(Box::new(left), Box::new(right))
    }

    pub fn tagged(tag: impl Into<String>, payload: Vec<GroundAtom>) -> Self {
        GroundAtom::Tagged { tag: tag.into(), payload }
    }

    /// Integral rationals become `Int`.
    pub fn number(q: Rational64) -> Self {
        if q.is_integer() {
            GroundAtom::Int(q.to_integer())
        } else {
            GroundAtom::Rat(q)
        }
    }

    pub fn as_rational(&self) -> Option<Rational64> {
        match self {
            GroundAtom::Int(n) => Some(Rational64::from_integer(*n)),
            GroundAtom::Rat(q) => Some(*q),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            GroundAtom::Int(n) => Some(*n),
            _ => None,
        }
    }

    fn shape_rank(&self) -> u8 {
        match self {
            GroundAtom::Neg => 0,
            GroundAtom::Int(_) | GroundAtom::Rat(_) => 1,
            GroundAtom::Pair(..) => 2,
            GroundAtom::Tagged { .. } => 3,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            GroundAtom::Int(n) => json!({ "int": n }),
            GroundAtom::Rat(q) => json!({ "rat": [q.numer(), q.denom()] }),
            GroundAtom::Neg => json!("neg"),
            GroundAtom::Pair(l, r) => json!({ "pair": [l.to_json(), r.to_json()] }),
            GroundAtom::Tagged { tag, payload } => json!({
                "tag": tag,
                "payload": payload.iter().map(GroundAtom::to_json).collect::<Vec<_>>(),
            }),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self, String> {
        if v.as_str() == Some("neg") {
            return Ok(GroundAtom::Neg);
        }
        let obj = v.as_object().ok_or_else(|| format!("bad atom: {v}"))?;
        if let Some(n) = obj.get("int") {
            return n.as_i64().map(GroundAtom::Int).ok_or_else(|| format!("bad int: {n}"));
        }
        if let Some(r) = obj.get("rat") {
            let p = r.get(0).and_then(Value::as_i64);
            let q = r.get(1).and_then(Value::as_i64);
            return match (p, q) {
                (Some(p), Some(q)) if q != 0 => Ok(GroundAtom::Rat(Rational64::new(p, q))),
                _ => Err(format!("bad rat: {r}")),
            };
        }
        if let Some(p) = obj.get("pair") {
            let arr = p.as_array().filter(|a| a.len() == 2).ok_or("pair needs two entries")?;
            return Ok(GroundAtom::pair(
                GroundAtom::from_json(&arr[0])?,
                GroundAtom::from_json(&arr[1])?,
            ));
        }
        if let Some(t) = obj.get("tag") {
            let tag = t.as_str().ok_or("tag must be a string")?.to_string();
            let payload = obj
                .get("payload")
                .and_then(Value::as_array)
                .ok_or("tagged atom needs a payload array")?
                .iter()
                .map(GroundAtom::from_json)
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(GroundAtom::Tagged { tag, payload });
        }
        Err(format!("bad atom: {v}"))
    }
}

impl Ord for GroundAtom {
    fn cmp(&self, other: &Self) -> Ordering {
        use GroundAtom::*;
        match (self, other) {
            (Neg, Neg) => Ordering::Equal,
            (Int(a), Int(b)) => a.cmp(b),
            (Rat(a), Rat(b)) => a.cmp(b),
            // Int before Rat on numeric ties keeps Ord consistent with Eq.
            (Int(a), Rat(b)) => Rational64::from_integer(*a).cmp(b).then(Ordering::Less),
            (Rat(a), Int(b)) => a.cmp(&Rational64::from_integer(*b)).then(Ordering::Greater),
            (Pair(a0, a1), Pair(b0, b1)) => a0.cmp(b0).then_with(|| a1.cmp(b1)),
            (Tagged { tag: ta, payload: pa }, Tagged { tag: tb, payload: pb }) => {
                ta.cmp(tb).then_with(|| pa.cmp(pb))
            }
            _ => self.shape_rank().cmp(&other.shape_rank()),
        }
    }
}

impl PartialOrd for GroundAtom {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroundAtom::Int(n) => write!(f, "{n}"),
            GroundAtom::Rat(q) => write!(f, "{q}"),
            GroundAtom::Neg => write!(f, "-1*"),
            GroundAtom::Pair(l, r) => write!(f, "({l},{r})"),
            GroundAtom::Tagged { tag, payload } => {
                write!(f, "{tag}[")?;
                for (i, a) in payload.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, "]")
            }
        }
    }
}

impl From<i64> for GroundAtom {
    fn from(n: i64) -> Self {
        GroundAtom::Int(n)
    }
}

impl Serialize for GroundAtom {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroundAtom {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        GroundAtom::from_json(&v).map_err(de::Error::custom)
    }
}
