use std::cmp::Ordering;
use std::collections::HashMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::GroundAtom;
use crate::error::{Error, Result};

/// How a ground set was built.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Descriptor {
    Range { len: usize },
    Window { lo: i64, hi: i64 },
    BinaryStrings { len: usize },
    Explicit,
    LexProduct { outer: Box<Descriptor>, inner: Box<Descriptor> },
    Reversed { of: Box<Descriptor> },
    WithSentinel { of: Box<Descriptor> },
    TaggedUnion { tags: Vec<String> },
}

/// A finite linearly ordered carrier set.
///
/// `atoms` lists the elements in ascending declared order. The declared order
/// agrees with the intrinsic atom order unless the set was produced by
/// [`GroundSet::reverse`] (or contains reversed factors).
#[derive(Debug, Clone)]
pub struct GroundSet {
    atoms: Vec<GroundAtom>,
    descriptor: Descriptor,
    positions: HashMap<GroundAtom, usize>,
}

impl PartialEq for GroundSet {
    fn eq(&self, other: &Self) -> bool {
        self.atoms == other.atoms && self.descriptor == other.descriptor
    }
}

impl Eq for GroundSet {}

impl GroundSet {
    fn build(atoms: Vec<GroundAtom>, descriptor: Descriptor) -> Self {
        let positions = atoms.iter().cloned().enumerate().map(|(i, a)| (a, i)).collect();
        GroundSet { atoms, descriptor, positions }
    }

    /// `{0, .., n-1}` as `Int` atoms.
    pub fn range(n: usize) -> Self {
        Self::build((0..n as i64).map(GroundAtom::Int).collect(), Descriptor::Range { len: n })
    }

    /// The integer window `[lo, hi]`.
    pub fn window(lo: i64, hi: i64) -> Self {
        Self::build((lo..=hi).map(GroundAtom::Int).collect(), Descriptor::Window { lo, hi })
    }

    /// All binary strings of length `m` in lexicographic order, as `bits`-tagged atoms.
    pub fn binary_strings(m: usize) -> Self {
        let atoms = (0..1u64 << m)
            .map(|x| {
                let bits = (0..m).map(|i| GroundAtom::Int(((x >> (m - 1 - i)) & 1) as i64)).collect();
                GroundAtom::tagged("bits", bits)
            })
            .collect();
        Self::build(atoms, Descriptor::BinaryStrings { len: m })
    }

    /// Atoms must be strictly ascending in the intrinsic order.
    pub fn from_atoms(atoms: Vec<GroundAtom>) -> Result<Self> {
        if atoms.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::UnsortedGround);
        }
        Ok(Self::build(atoms, Descriptor::Explicit))
    }

    /// Outer coordinate most significant.
    pub fn lex_product(outer: &GroundSet, inner: &GroundSet) -> Result<Self> {
        if outer.is_empty() || inner.is_empty() {
            return Err(Error::EmptyFactor);
        }
        let atoms = outer
            .atoms
            .iter()
            .flat_map(|o| inner.atoms.iter().map(move |i| GroundAtom::pair(o.clone(), i.clone())))
            .collect();
        Ok(Self::build(
            atoms,
            Descriptor::LexProduct {
                outer: Box::new(outer.descriptor.clone()),
                inner: Box::new(inner.descriptor.clone()),
            },
        ))
    }

    pub fn reverse(&self) -> Self {
        let atoms = self.atoms.iter().rev().cloned().collect();
        let descriptor = match &self.descriptor {
            Descriptor::Reversed { of } => (**of).clone(),
            d => Descriptor::Reversed { of: Box::new(d.clone()) },
        };
        Self::build(atoms, descriptor)
    }

    /// Prepends the sentinel `Neg` below every element.
    pub fn with_sentinel(&self) -> Result<Self> {
        if self.positions.contains_key(&GroundAtom::Neg) {
            return Err(Error::UnsortedGround);
        }
        let mut atoms = Vec::with_capacity(self.len() + 1);
        atoms.push(GroundAtom::Neg);
        atoms.extend(self.atoms.iter().cloned());
        Ok(Self::build(atoms, Descriptor::WithSentinel { of: Box::new(self.descriptor.clone()) }))
    }

    /// Disjoint union; part `i` sits entirely below part `i+1`.
    pub fn tagged_union(parts: &[(&str, &GroundSet)]) -> Result<Self> {
        let mut atoms = Vec::new();
        for (tag, g) in parts {
            atoms.extend(g.atoms.iter().map(|a| GroundAtom::tagged(*tag, vec![a.clone()])));
        }
        let set = Self::build(
            atoms,
            Descriptor::TaggedUnion { tags: parts.iter().map(|(t, _)| t.to_string()).collect() },
        );
        if set.positions.len() != set.atoms.len() {
            return Err(Error::UnsortedGround);
        }
        Ok(set)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[GroundAtom] {
        &self.atoms
    }

    pub fn atom(&self, pos: usize) -> &GroundAtom {
        &self.atoms[pos]
    }

    pub fn descriptor(&self) -> &Descriptor {
        &self.descriptor
    }

    pub fn position(&self, atom: &GroundAtom) -> Option<usize> {
        self.positions.get(atom).copied()
    }

    pub fn contains(&self, atom: &GroundAtom) -> bool {
        self.positions.contains_key(atom)
    }

    /// Declared-order comparison; `None` if either atom is not a member.
    pub fn compare(&self, a: &GroundAtom, b: &GroundAtom) -> Option<Ordering> {
        Some(self.position(a)?.cmp(&self.position(b)?))
    }
}

#[derive(Serialize, Deserialize)]
struct GroundSetRepr {
    atoms: Vec<GroundAtom>,
    descriptor: Descriptor,
}

impl Serialize for GroundSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GroundSetRepr { atoms: self.atoms.clone(), descriptor: self.descriptor.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroundSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = GroundSetRepr::deserialize(d)?;
        let set = GroundSet::build(repr.atoms, repr.descriptor);
        if set.positions.len() != set.atoms.len() {
            return Err(serde::de::Error::custom("duplicate atoms in ground set"));
        }
        Ok(set)
    }
}
