//! Finite lattices given by an explicit order relation, their
//! isomorphism tables and automorphism groups, plus the atom machinery of
//! the lattice of topologies (type function, atom classes).

mod atoms;
mod automorphism;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use atoms::{
    classify_atoms_intrinsic, table_one_allows, type_of, type_of_generic, AtomClass,
    AtomPartition, AtomProfile,
};
pub use automorphism::{
    enumerate_automorphisms, enumerate_automorphisms_exhaustive, MAX_AUTOMORPHISM_SIZE,
};

/// Lattices up to this size get precomputed meet/join tables.
pub const MEMO_LIMIT: usize = 2048;
/// Validation of the order relation is refused above this many pairs.
pub const MAX_VALIDATION_PAIRS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("relation is not a partial order at ({0}, {1})")]
    NotAPartialOrder(usize, usize),
    #[error("elements {0} and {1} have no {2}")]
    MeetJoinMissing(usize, usize, &'static str),
    #[error("lattice has {0} elements, too many to validate")]
    TooLarge(usize),
    #[error("lattice of size {size} exceeds the limit {limit}")]
    SizeExceeded { size: usize, limit: usize },
    #[error("type of an atom with itself is undefined")]
    EqualAtoms,
    #[error("atoms live on different ground sets")]
    GroundMismatch,
    #[error("atom classification failed: {0}")]
    ClassificationFailed(String),
    #[error("table is not a lattice isomorphism: {0}")]
    NotAnIsomorphism(String),
    #[error(transparent)]
    Topology(#[from] crate::topology::TopologyError),
}

/// Row-major bit matrix.
#[derive(Clone, Debug)]
struct BitMatrix {
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    fn new(size: usize) -> Self {
        let words = size.div_ceil(64);
        BitMatrix { words, bits: vec![0; words * size] }
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    #[inline]
    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }
}

fn row_subset(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

fn row_count(a: &[u64]) -> u32 {
    a.iter().map(|w| w.count_ones()).sum()
}

/// A finite lattice on the indices `0..size`.
#[derive(Clone, Debug)]
pub struct FiniteLattice {
    size: usize,
    up: BitMatrix,
    down: BitMatrix,
    meet: Option<Vec<u32>>,
    join: Option<Vec<u32>>,
    bottom: usize,
    top: usize,
}

/// Validates `leq` over `elements` and builds the lattice.
pub fn build_lattice<E>(
    elements: &[E],
    leq: impl Fn(&E, &E) -> bool,
) -> Result<FiniteLattice, LatticeError> {
    let size = elements.len();
    if size == 0 || size.saturating_mul(size) > MAX_VALIDATION_PAIRS {
        return Err(LatticeError::TooLarge(size));
    }
    let mut up = BitMatrix::new(size);
    let mut down = BitMatrix::new(size);
    for (i, a) in elements.iter().enumerate() {
        for (j, b) in elements.iter().enumerate() {
            if leq(a, b) {
                up.set(i, j);
                down.set(j, i);
            }
        }
    }
    for i in 0..size {
        if !up.get(i, i) {
            return Err(LatticeError::NotAPartialOrder(i, i));
        }
        for j in 0..size {
            if i != j && up.get(i, j) {
                if up.get(j, i) {
                    return Err(LatticeError::NotAPartialOrder(i, j));
                }
                // i ≤ j implies up(j) ⊆ up(i)
                if !row_subset(up.row(j), up.row(i)) {
                    return Err(LatticeError::NotAPartialOrder(i, j));
                }
            }
        }
    }
    let mut lattice = FiniteLattice { size, up, down, meet: None, join: None, bottom: 0, top: 0 };
    lattice.bottom = (0..size)
        .find(|&i| row_count(lattice.up.row(i)) as usize == size)
        .ok_or(LatticeError::MeetJoinMissing(0, 0, "bottom"))?;
    lattice.top = (0..size)
        .find(|&i| row_count(lattice.down.row(i)) as usize == size)
        .ok_or(LatticeError::MeetJoinMissing(0, 0, "top"))?;

    let mut meets = vec![0u32; size * size];
    let mut joins = vec![0u32; size * size];
    for i in 0..size {
        for j in i..size {
            let m = lattice
                .compute_bound(i, j, false)
                .ok_or(LatticeError::MeetJoinMissing(i, j, "meet"))?;
            let s = lattice
                .compute_bound(i, j, true)
                .ok_or(LatticeError::MeetJoinMissing(i, j, "join"))?;
            meets[i * size + j] = m as u32;
            meets[j * size + i] = m as u32;
            joins[i * size + j] = s as u32;
            joins[j * size + i] = s as u32;
        }
    }
    if size <= MEMO_LIMIT {
        lattice.meet = Some(meets);
        lattice.join = Some(joins);
    }
    Ok(lattice)
}

impl FiniteLattice {
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up.get(i, j)
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Least upper bound (`upper = true`) or greatest lower bound.
    fn compute_bound(&self, i: usize, j: usize, upper: bool) -> Option<usize> {
        let rel = if upper { &self.up } else { &self.down };
        let common: Vec<u64> = rel.row(i).iter().zip(rel.row(j)).map(|(a, b)| a & b).collect();
        // the bound, if any, is the common element with the largest cone
        let mut best: Option<(u32, usize)> = None;
        for (w, &word) in common.iter().enumerate() {
            let mut rest = word;
            while rest != 0 {
                let c = w * 64 + rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let cone = row_count(rel.row(c));
                if best.is_none_or(|(b, _)| cone > b) {
                    best = Some((cone, c));
                }
            }
        }
        let (_, c) = best?;
        row_subset(&common, rel.row(c)).then_some(c)
    }

    pub fn meet(&self, i: usize, j: usize) -> usize {
        match &self.meet {
            Some(t) => t[i * self.size + j] as usize,
            None => self.compute_bound(i, j, false).expect("validated lattice"),
        }
    }

    pub fn join(&self, i: usize, j: usize) -> usize {
        match &self.join {
            Some(t) => t[i * self.size + j] as usize,
            None => self.compute_bound(i, j, true).expect("validated lattice"),
        }
    }

    /// Elements covering the bottom, ascending.
    pub fn atoms(&self) -> Vec<usize> {
        (0..self.size)
            .filter(|&a| a != self.bottom && row_count(self.down.row(a)) == 2)
            .collect()
    }

    /// `|{atoms ≤ p ∨ q}|`, computed from the order alone.
    pub fn atom_type(&self, p: usize, q: usize) -> usize {
        let j = self.join(p, q);
        self.atoms().into_iter().filter(|&a| self.leq(a, j)).count()
    }

    /// Every element is the join of the atoms below it.
    pub fn is_atomic(&self) -> bool {
        let atoms = self.atoms();
        (0..self.size).all(|e| {
            atoms
                .iter()
                .filter(|&&a| self.leq(a, e))
                .fold(self.bottom, |acc, &a| self.join(acc, a))
                == e
        })
    }

    pub(crate) fn down_count(&self, i: usize) -> u32 {
        row_count(self.down.row(i))
    }

    pub(crate) fn up_count(&self, i: usize) -> u32 {
        row_count(self.up.row(i))
    }
}

/// An order isomorphism between two indexed lattices: `map[i]` is the image
/// of source element `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeIsoTable {
    pub map: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct IsoTableJson {
    size: usize,
    map: Vec<usize>,
}

impl Serialize for LatticeIsoTable {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        IsoTableJson { size: self.map.len(), map: self.map.clone() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LatticeIsoTable {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = IsoTableJson::deserialize(deserializer)?;
        if raw.size != raw.map.len() {
            return Err(serde::de::Error::custom(format!(
                "size {} does not match map length {}",
                raw.size,
                raw.map.len()
            )));
        }
        Ok(LatticeIsoTable { map: raw.map })
    }
}

impl LatticeIsoTable {
    pub fn identity(size: usize) -> Self {
        LatticeIsoTable { map: (0..size).collect() }
    }

    pub fn size(&self) -> usize {
        self.map.len()
    }

    pub fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.map.len()];
        self.map
            .iter()
            .all(|&j| j < seen.len() && !std::mem::replace(&mut seen[j], true))
    }

    pub fn inverse(&self) -> LatticeIsoTable {
        let mut inv = vec![0; self.map.len()];
        for (i, &j) in self.map.iter().enumerate() {
            inv[j] = i;
        }
        LatticeIsoTable { map: inv }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LatticeIsoTable) -> LatticeIsoTable {
        LatticeIsoTable { map: other.map.iter().map(|&j| self.map[j]).collect() }
    }

    /// Checks bijectivity and that the map and its inverse preserve order.
    pub fn validate(&self, source: &FiniteLattice, target: &FiniteLattice) -> Result<(), LatticeError> {
        if self.map.len() != source.size() || source.size() != target.size() {
            return Err(LatticeError::NotAnIsomorphism("size mismatch".into()));
        }
        if !self.is_bijection() {
            return Err(LatticeError::NotAnIsomorphism("not a bijection".into()));
        }
        for i in 0..source.size() {
            for j in 0..source.size() {
                if source.leq(i, j) != target.leq(self.map[i], self.map[j]) {
                    return Err(LatticeError::NotAnIsomorphism(format!(
                        "order not preserved at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(())
    }
}
