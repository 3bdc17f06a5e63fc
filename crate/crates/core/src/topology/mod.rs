//! Topologies on finite ground sets and the lattice operations of the
//! lattice of topologies.
//!
//! A topology on `n` points is stored through its minimal open
//! neighbourhoods `U(x)`: the intersection of all opens containing `x`.
//! On a finite set this map determines the topology (the opens are exactly
//! the unions of minimal neighbourhoods), it is canonical, and it stays
//! small when the topology has astronomically many opens, such as the
//! discrete topology on a 64-element vector space.

mod enumerate;
mod mask;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use enumerate::{
    count_topologies, enumerate_topologies, for_each_topology, TopologyStream,
    MAX_ENUMERATION_POINTS,
};
pub use mask::{Points, SubsetMask, MAX_POINTS};

/// Hard ceiling on the number of opens materialized by [`FinTopology::opens`].
pub const MAX_MATERIALIZED_OPENS: usize = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("ground set size {0} outside 1..={MAX_POINTS}")]
    GroundOutOfRange(usize),
    #[error("mask {mask:#x} does not fit in {n} points")]
    MaskOutOfRange { n: usize, mask: u128 },
    #[error("family misses the empty set or the whole set")]
    MissingEmptyOrFull,
    #[error("union of {a:#x} and {b:#x} is not in the family")]
    NotClosedUnderUnion { a: u128, b: u128 },
    #[error("intersection of {a:#x} and {b:#x} is not in the family")]
    NotClosedUnderIntersection { a: u128, b: u128 },
    #[error("ground sets differ: {left} vs {right}")]
    GroundMismatch { left: usize, right: usize },
    #[error("neighbourhood map is not a preorder at point {0}")]
    InvalidNeighborhoods(usize),
    #[error("enumeration of topologies on {n} points exceeds the budget")]
    BudgetExceeded { n: usize },
    #[error("atom needs a proper nonempty subset, got {0:#x}")]
    ImproperSubset(u128),
    #[error("topology is not an atom")]
    NotAnAtom,
    #[error("image is not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("topology has more than {MAX_MATERIALIZED_OPENS} opens")]
    TooManyOpens,
}

fn check_ground(n: usize) -> Result<(), TopologyError> {
    if (1..=MAX_POINTS).contains(&n) {
        Ok(())
    } else {
        Err(TopologyError::GroundOutOfRange(n))
    }
}

/// A topology on `{0, .., n-1}` in canonical form.
///
/// Equality is structural: two values are equal iff they have the same
/// opens.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinTopology {
    n: usize,
    nbhd: Vec<SubsetMask>,
}

impl FinTopology {
    /// Builds a topology from its minimal-neighbourhood map, checking that
    /// `x ∈ U(x)` and `y ∈ U(x) ⇒ U(y) ⊆ U(x)`.
    pub fn from_neighborhoods(nbhd: Vec<SubsetMask>) -> Result<Self, TopologyError> {
        let n = nbhd.len();
        check_ground(n)?;
        for (x, &u) in nbhd.iter().enumerate() {
            if !u.fits(n) {
                return Err(TopologyError::MaskOutOfRange { n, mask: u.bits() });
            }
            if !u.contains(x) || u.iter().any(|y| !nbhd[y].is_subset_of(u)) {
                return Err(TopologyError::InvalidNeighborhoods(x));
            }
        }
        Ok(FinTopology { n, nbhd })
    }

    /// Caller guarantees the preorder conditions.
    pub(crate) fn from_neighborhoods_unchecked(nbhd: Vec<SubsetMask>) -> Self {
        debug_assert!(FinTopology::from_neighborhoods(nbhd.clone()).is_ok());
        FinTopology { n: nbhd.len(), nbhd }
    }

    pub fn discrete(n: usize) -> Self {
        FinTopology { n, nbhd: (0..n).map(SubsetMask::singleton).collect() }
    }

    pub fn indiscrete(n: usize) -> Self {
        FinTopology { n, nbhd: vec![SubsetMask::full(n); n] }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn full(&self) -> SubsetMask {
        SubsetMask::full(self.n)
    }

    /// Minimal open neighbourhood of `x`.
    #[inline]
    pub fn neighborhood(&self, x: usize) -> SubsetMask {
        self.nbhd[x]
    }

    #[inline]
    pub fn neighborhoods(&self) -> &[SubsetMask] {
        &self.nbhd
    }

    /// `a` is open iff it contains the minimal neighbourhood of each member.
    #[inline]
    pub fn is_open(&self, a: SubsetMask) -> bool {
        a.fits(self.n) && a.iter().all(|x| self.nbhd[x].is_subset_of(a))
    }

    /// `self ⊆ other` as families of opens (`self` is weaker).
    pub fn is_weaker_or_equal(&self, other: &FinTopology) -> bool {
        self.n == other.n
            && self
                .nbhd
                .iter()
                .zip(&other.nbhd)
                .all(|(mine, theirs)| theirs.is_subset_of(*mine))
    }

    pub fn is_discrete(&self) -> bool {
        self.nbhd.iter().all(|u| u.len() == 1)
    }

    pub fn is_indiscrete(&self) -> bool {
        let full = self.full();
        self.nbhd.iter().all(|&u| u == full)
    }

    /// All opens, ascending by numeric mask value.
    ///
    /// # Panics
    /// If the topology has more than [`MAX_MATERIALIZED_OPENS`] opens; use
    /// [`FinTopology::try_opens`] when that can happen.
    pub fn opens(&self) -> Vec<SubsetMask> {
        self.try_opens().expect("too many opens to materialize")
    }

    pub fn try_opens(&self) -> Result<Vec<SubsetMask>, TopologyError> {
        // every open is a union of minimal neighbourhoods
        let mut gens: Vec<SubsetMask> = self.nbhd.clone();
        gens.sort_unstable();
        gens.dedup();
        let mut family: HashSet<SubsetMask> = HashSet::new();
        family.insert(SubsetMask::EMPTY);
        for g in gens {
            let grown: Vec<SubsetMask> = family.iter().map(|&a| a | g).collect();
            family.extend(grown);
            if family.len() > MAX_MATERIALIZED_OPENS {
                return Err(TopologyError::TooManyOpens);
            }
        }
        let mut opens: Vec<SubsetMask> = family.into_iter().collect();
        opens.sort_unstable();
        Ok(opens)
    }

    pub fn open_count(&self) -> usize {
        self.opens().len()
    }

    /// Topology whose opens are the complements of the opens of `self`.
    pub fn complement_map(&self) -> FinTopology {
        // the minimal open of x in C(T) is the closure of {x} in T
        let nbhd = (0..self.n)
            .map(|x| {
                SubsetMask::from_points((0..self.n).filter(|&y| self.nbhd[y].contains(x)))
            })
            .collect();
        FinTopology::from_neighborhoods_unchecked(nbhd)
    }

    /// Infimum: the opens common to both topologies.
    pub fn meet(&self, other: &FinTopology) -> Result<FinTopology, TopologyError> {
        self.same_ground(other)?;
        let nbhd = (0..self.n)
            .map(|x| {
                let mut reach = SubsetMask::singleton(x);
                loop {
                    let mut next = reach;
                    for y in reach.iter() {
                        next |= self.nbhd[y] | other.nbhd[y];
                    }
                    if next == reach {
                        break reach;
                    }
                    reach = next;
                }
            })
            .collect();
        Ok(FinTopology::from_neighborhoods_unchecked(nbhd))
    }

    /// Supremum: the topology generated by both families.
    pub fn join(&self, other: &FinTopology) -> Result<FinTopology, TopologyError> {
        self.same_ground(other)?;
        let nbhd = self.nbhd.iter().zip(&other.nbhd).map(|(&a, &b)| a & b).collect();
        Ok(FinTopology::from_neighborhoods_unchecked(nbhd))
    }

    /// Image topology `θ_*(T) = { θ(U) | U ∈ T }`.
    pub fn pushforward(&self, theta: &Bijection) -> Result<FinTopology, TopologyError> {
        if theta.n() != self.n {
            return Err(TopologyError::GroundMismatch { left: theta.n(), right: self.n });
        }
        let mut nbhd = vec![SubsetMask::EMPTY; self.n];
        for x in 0..self.n {
            nbhd[theta.apply(x)] = theta.apply_mask(self.nbhd[x]);
        }
        Ok(FinTopology { n: self.n, nbhd })
    }

    /// `θ^*(T') = { θ⁻¹(V) | V ∈ T' }`.
    pub fn pullback(&self, theta: &Bijection) -> Result<FinTopology, TopologyError> {
        self.pushforward(&theta.inverse())
    }

    fn same_ground(&self, other: &FinTopology) -> Result<(), TopologyError> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(TopologyError::GroundMismatch { left: self.n, right: other.n })
        }
    }

    /// `T = {∅, D, X}` with `D` proper and nonempty.
    pub fn is_atom(&self) -> bool {
        self.atom_set().is_some()
    }

    /// The `D` of an atom `A(D)`.
    pub fn atom_set(&self) -> Option<SubsetMask> {
        let full = self.full();
        let d = self.nbhd.iter().copied().find(|&u| u != full)?;
        let ok = self
            .nbhd
            .iter()
            .enumerate()
            .all(|(x, &u)| if d.contains(x) { u == d } else { u == full });
        ok.then_some(d)
    }
}

impl fmt::Debug for FinTopology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.try_opens() {
            Ok(opens) if opens.len() <= 64 => f
                .debug_struct("FinTopology")
                .field("n", &self.n)
                .field("opens", &opens.iter().map(|m| m.bits()).collect::<Vec<_>>())
                .finish(),
            _ => f
                .debug_struct("FinTopology")
                .field("n", &self.n)
                .field("nbhd", &self.nbhd)
                .finish(),
        }
    }
}

/// Checks a family of opens and returns its canonical topology.
///
/// Duplicates are allowed. The family must contain `∅` and `X` and be closed
/// under pairwise union and intersection.
pub fn validate_topology(n: usize, family: &[SubsetMask]) -> Result<FinTopology, TopologyError> {
    check_ground(n)?;
    if let Some(bad) = family.iter().find(|m| !m.fits(n)) {
        return Err(TopologyError::MaskOutOfRange { n, mask: bad.bits() });
    }
    let mut opens: Vec<SubsetMask> = family.to_vec();
    opens.sort_unstable();
    opens.dedup();
    let full = SubsetMask::full(n);
    if opens.first() != Some(&SubsetMask::EMPTY) || opens.last() != Some(&full) {
        return Err(TopologyError::MissingEmptyOrFull);
    }
    let members: HashSet<SubsetMask> = opens.iter().copied().collect();
    for (i, &a) in opens.iter().enumerate() {
        for &b in &opens[i + 1..] {
            if !members.contains(&(a | b)) {
                return Err(TopologyError::NotClosedUnderUnion { a: a.bits(), b: b.bits() });
            }
            if !members.contains(&(a & b)) {
                return Err(TopologyError::NotClosedUnderIntersection {
                    a: a.bits(),
                    b: b.bits(),
                });
            }
        }
    }
    let nbhd = (0..n)
        .map(|x| {
            opens
                .iter()
                .filter(|u| u.contains(x))
                .fold(full, |acc, &u| acc & u)
        })
        .collect();
    Ok(FinTopology::from_neighborhoods_unchecked(nbhd))
}

/// The atom `A(D) = {∅, D, X}`.
pub fn atom(d: SubsetMask, n: usize) -> Result<FinTopology, TopologyError> {
    check_ground(n)?;
    if !d.fits(n) {
        return Err(TopologyError::MaskOutOfRange { n, mask: d.bits() });
    }
    let full = SubsetMask::full(n);
    if d.is_empty() || d == full {
        return Err(TopologyError::ImproperSubset(d.bits()));
    }
    let nbhd = (0..n).map(|x| if d.contains(x) { d } else { full }).collect();
    Ok(FinTopology { n, nbhd })
}

/// All `2ⁿ − 2` atoms, ordered by their mask `D`.
pub fn atoms_of_sigma(n: usize) -> Result<Vec<FinTopology>, TopologyError> {
    check_ground(n)?;
    if n > 20 {
        return Err(TopologyError::BudgetExceeded { n });
    }
    (1..(1u128 << n) - 1).map(|d| atom(SubsetMask(d), n)).collect()
}

/// Join of a list of atoms; the empty list gives the indiscrete topology.
pub fn sup_atoms(n: usize, atoms: &[FinTopology]) -> Result<FinTopology, TopologyError> {
    check_ground(n)?;
    atoms.iter().try_fold(FinTopology::indiscrete(n), |acc, a| {
        if a.n() != n {
            return Err(TopologyError::GroundMismatch { left: n, right: a.n() });
        }
        if !a.is_atom() {
            return Err(TopologyError::NotAnAtom);
        }
        acc.join(a)
    })
}

/// A permutation of `{0, .., n-1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Bijection {
    image: Vec<usize>,
}

impl Bijection {
    pub fn new(image: Vec<usize>) -> Result<Self, TopologyError> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &y in &image {
            if y >= n || std::mem::replace(&mut seen[y], true) {
                return Err(TopologyError::NotAPermutation(n));
            }
        }
        Ok(Bijection { image })
    }

    pub fn identity(n: usize) -> Self {
        Bijection { image: (0..n).collect() }
    }

    /// Transposition of `a` and `b`.
    pub fn swap(n: usize, a: usize, b: usize) -> Self {
        let mut image: Vec<usize> = (0..n).collect();
        image.swap(a, b);
        Bijection { image }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.image.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    #[inline]
    pub fn apply_mask(&self, m: SubsetMask) -> SubsetMask {
        let mut out = SubsetMask::EMPTY;
        for x in m.iter() {
            out.insert(self.image[x]);
        }
        out
    }

    pub fn inverse(&self) -> Bijection {
        let mut inv = vec![0; self.n()];
        for (x, &y) in self.image.iter().enumerate() {
            inv[y] = x;
        }
        Bijection { image: inv }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Bijection) -> Bijection {
        Bijection { image: other.image.iter().map(|&y| self.image[y]).collect() }
    }
}

impl TryFrom<Vec<usize>> for Bijection {
    type Error = TopologyError;
    fn try_from(image: Vec<usize>) -> Result<Self, Self::Error> {
        Bijection::new(image)
    }
}

impl From<Bijection> for Vec<usize> {
    fn from(b: Bijection) -> Vec<usize> {
        b.image
    }
}

/// Wire form `{"n": 4, "opens": [0, 3, 12, 15]}`.
#[derive(Serialize, Deserialize)]
struct TopologyJson {
    n: usize,
    opens: Vec<u128>,
}

impl Serialize for FinTopology {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let opens = self.try_opens().map_err(serde::ser::Error::custom)?;
        TopologyJson { n: self.n, opens: opens.into_iter().map(|m| m.bits()).collect() }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FinTopology {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = TopologyJson::deserialize(deserializer)?;
        let family: Vec<SubsetMask> = raw.opens.into_iter().map(SubsetMask).collect();
        validate_topology(raw.n, &family).map_err(serde::de::Error::custom)
    }
}
