use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::LatticeError;
use crate::topology::{atom, SubsetMask, TopologyError};

/// Which family an atom `A(D)` of the lattice of topologies belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AtomClass {
    /// `|D| = 1`
    N,
    /// `|D| = n − 1`
    M,
    /// everything else
    L,
}

/// An atom `A(D)` on `n` points with its class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AtomProfile {
    pub mask: SubsetMask,
    pub n: usize,
    pub klass: AtomClass,
}

impl AtomProfile {
    pub fn new(mask: SubsetMask, n: usize) -> Result<Self, TopologyError> {
        atom(mask, n)?;
        let klass = match mask.len() {
            1 => AtomClass::N,
            k if k + 1 == n => AtomClass::M,
            _ => AtomClass::L,
        };
        Ok(AtomProfile { mask, n, klass })
    }

    /// All atoms on `n` points ordered by mask.
    pub fn all(n: usize) -> Vec<AtomProfile> {
        (1..(1u128 << n) - 1)
            .map(|d| AtomProfile::new(SubsetMask(d), n).expect("proper subset"))
            .collect()
    }
}

fn check_pair(p: &AtomProfile, q: &AtomProfile) -> Result<(), LatticeError> {
    if p.n != q.n {
        return Err(LatticeError::GroundMismatch);
    }
    if p.mask == q.mask {
        return Err(LatticeError::EqualAtoms);
    }
    Ok(())
}

/// Number of atoms below `A(D_p) ∨ A(D_q)`.
///
/// The join has opens `{∅, D_p∩D_q, D_p, D_q, D_p∪D_q, X}`, and an atom
/// `A(E)` lies below it iff `E` is one of those opens.
pub fn type_of(p: &AtomProfile, q: &AtomProfile) -> Result<u32, LatticeError> {
    check_pair(p, q)?;
    let full = SubsetMask::full(p.n);
    let mut candidates = [p.mask & q.mask, p.mask, q.mask, p.mask | q.mask];
    candidates.sort_unstable();
    let mut count = 0;
    for (i, &c) in candidates.iter().enumerate() {
        if (i == 0 || candidates[i - 1] != c) && !c.is_empty() && c != full {
            count += 1;
        }
    }
    Ok(count)
}

/// The same count taken over all `2ⁿ − 2` atoms of the lattice.
pub fn type_of_generic(p: &AtomProfile, q: &AtomProfile) -> Result<u32, LatticeError> {
    check_pair(p, q)?;
    let join = atom(p.mask, p.n)?.join(&atom(q.mask, q.n)?)?;
    Ok((1..(1u128 << p.n) - 1)
        .filter(|&e| join.is_open(SubsetMask(e)))
        .count() as u32)
}

/// Allowed type values for a pair of atom classes (`p ≠ q`).
pub fn table_one_allows(p: AtomClass, q: AtomClass, t: u32) -> bool {
    use AtomClass::*;
    match (p, q) {
        (N, N) | (M, M) => t == 3,
        (N, M) | (M, N) => t == 2,
        (N, L) | (L, N) | (M, L) | (L, M) => t == 2 || t == 3,
        (L, L) => (2..=4).contains(&t),
    }
}

/// Partition of atoms recovered from type values alone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomPartition {
    /// Atoms with a type-4 partner.
    pub l_set: Vec<usize>,
    /// The remaining atoms split into two type-3 cliques, ordered by their
    /// smallest index. Which one holds the singletons is not determined by
    /// the lattice.
    pub cliques: [Vec<usize>; 2],
}

/// Classifies `count` atoms using only the pairwise type function.
pub fn classify_atoms_intrinsic(
    count: usize,
    type_of: impl Fn(usize, usize) -> u32,
) -> Result<AtomPartition, LatticeError> {
    let mut types = vec![0u32; count * count];
    for i in 0..count {
        for j in i + 1..count {
            let t = type_of(i, j);
            types[i * count + j] = t;
            types[j * count + i] = t;
        }
    }
    let t = |i: usize, j: usize| types[i * count + j];

    let (l_set, rest): (Vec<usize>, Vec<usize>) =
        (0..count).partition(|&i| (0..count).any(|j| j != i && t(i, j) == 4));

    // components of the type-3 graph on the remaining atoms
    let mut component: BTreeMap<usize, usize> = BTreeMap::new();
    let mut cliques: Vec<Vec<usize>> = Vec::new();
    for &seed in &rest {
        if component.contains_key(&seed) {
            continue;
        }
        let id = cliques.len();
        let mut members = vec![seed];
        component.insert(seed, id);
        let mut frontier = vec![seed];
        while let Some(x) = frontier.pop() {
            for &y in &rest {
                if y != x && t(x, y) == 3 && !component.contains_key(&y) {
                    component.insert(y, id);
                    members.push(y);
                    frontier.push(y);
                }
            }
        }
        members.sort_unstable();
        cliques.push(members);
    }
    if cliques.len() != 2 {
        return Err(LatticeError::ClassificationFailed(format!(
            "expected two type-3 classes, found {}",
            cliques.len()
        )));
    }
    for (a, clique) in cliques.iter().enumerate() {
        for &x in clique {
            for &y in clique {
                if x != y && t(x, y) != 3 {
                    return Err(LatticeError::ClassificationFailed(format!(
                        "class {a} is not a type-3 clique at ({x}, {y})"
                    )));
                }
            }
            for &y in &cliques[1 - a] {
                if t(x, y) != 2 {
                    return Err(LatticeError::ClassificationFailed(format!(
                        "cross pair ({x}, {y}) has type {}",
                        t(x, y)
                    )));
                }
            }
        }
    }
    let second = cliques.pop().expect("two classes");
    let first = cliques.pop().expect("two classes");
    Ok(AtomPartition { l_set, cliques: [first, second] })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prof(bits: u128, n: usize) -> AtomProfile {
        AtomProfile::new(SubsetMask(bits), n).unwrap()
    }

    #[test]
    fn documented_type_values() {
        assert_eq!(type_of(&prof(0b0001, 4), &prof(0b0010, 4)).unwrap(), 3);
        assert_eq!(type_of(&prof(0b0001, 4), &prof(0b1110, 4)).unwrap(), 2);
        assert_eq!(type_of(&prof(0b0011, 4), &prof(0b0110, 4)).unwrap(), 4);
        assert_eq!(
            type_of(&prof(0b0011, 4), &prof(0b0011, 4)),
            Err(LatticeError::EqualAtoms)
        );
        assert_eq!(
            type_of(&prof(0b0011, 4), &prof(0b0011, 5)),
            Err(LatticeError::GroundMismatch)
        );
    }

    #[test]
    fn classes_by_cardinality() {
        assert_eq!(prof(0b0001, 4).klass, AtomClass::N);
        assert_eq!(prof(0b0111, 4).klass, AtomClass::M);
        assert_eq!(prof(0b0101, 4).klass, AtomClass::L);
        assert_eq!(prof(0b011, 3).klass, AtomClass::M);
    }

    #[test]
    fn closed_form_matches_generic_count() {
        for n in 3..=5 {
            let atoms = AtomProfile::all(n);
            for p in &atoms {
                for q in &atoms {
                    if p != q {
                        let t = type_of(p, q).unwrap();
                        assert_eq!(t, type_of_generic(p, q).unwrap());
                        assert_eq!(t, type_of(q, p).unwrap());
                    }
                }
            }
        }
    }

    fn sizes(n: usize) -> (usize, [usize; 2], [Vec<usize>; 2]) {
        let atoms = AtomProfile::all(n);
        let part =
            classify_atoms_intrinsic(atoms.len(), |i, j| type_of(&atoms[i], &atoms[j]).unwrap())
                .unwrap();
        let card = |c: &Vec<usize>| {
            let mut v: Vec<usize> = c.iter().map(|&i| atoms[i].mask.len()).collect();
            v.dedup();
            v
        };
        (
            part.l_set.len(),
            [part.cliques[0].len(), part.cliques[1].len()],
            [card(&part.cliques[0]), card(&part.cliques[1])],
        )
    }

    #[test]
    fn intrinsic_classification_sizes() {
        assert_eq!(sizes(3), (0, [3, 3], [vec![1], vec![2]]));
        assert_eq!(sizes(4), (6, [4, 4], [vec![1], vec![3]]));
        assert_eq!(sizes(5), (20, [5, 5], [vec![1], vec![4]]));
    }

    #[test]
    fn classification_fails_on_unstructured_types() {
        let err = classify_atoms_intrinsic(4, |_, _| 3).unwrap_err();
        assert!(matches!(err, LatticeError::ClassificationFailed(_)));
    }
}
