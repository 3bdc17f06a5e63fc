//! Recovering the point bijection behind an automorphism of `Σ(n)`.
//!
//! Every lattice isomorphism `Θ: Σ(X) → Σ(Y)` between finite sets is either
//! `θ_*` or `C ∘ θ_*` for a unique bijection `θ`. The reconstruction reads
//! the atom classes off the type function, matches the singleton atoms
//! (directly or after composing with the complement map), and then checks
//! the candidate on every element.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{classify_atoms_intrinsic, type_of, AtomProfile, LatticeIsoTable};
use crate::sigma::SigmaLattice;
use crate::topology::{Bijection, FinTopology, TopologyError};

/// Full-lattice mode handles `2 ≤ n ≤ 5`.
pub const MAX_RECONSTRUCTION_POINTS: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HartmanisError {
    #[error("reconstruction needs 2 <= n <= {MAX_RECONSTRUCTION_POINTS}, got {0}")]
    UnsupportedSize(usize),
    #[error("table is not a lattice isomorphism of Σ(n): {0}")]
    NotALatticeIso(String),
    #[error("no bijection induces the table")]
    NoConsistentBijection,
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

/// `θ` together with whether the table equals `C ∘ θ_*` instead of `θ_*`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReconstructionResult {
    pub theta: Bijection,
    pub uses_complement: bool,
}

impl ReconstructionResult {
    /// `C^flag ∘ θ_*` applied to `t`.
    pub fn apply(&self, t: &FinTopology) -> Result<FinTopology, TopologyError> {
        let pushed = t.pushforward(&self.theta)?;
        Ok(if self.uses_complement { pushed.complement_map() } else { pushed })
    }
}

/// Table of `C^flag ∘ θ_*` over `Σ(n)`.
pub fn build_table(
    sigma: &SigmaLattice,
    theta: &Bijection,
    uses_complement: bool,
) -> Result<LatticeIsoTable, TopologyError> {
    let r = ReconstructionResult { theta: theta.clone(), uses_complement };
    sigma.table_from(|t| r.apply(t).expect("ground sizes agree"))
}

fn not_iso(msg: impl Into<String>) -> HartmanisError {
    HartmanisError::NotALatticeIso(msg.into())
}

/// Recovers `(θ, flag)` from an explicit table over `Σ(n)`.
pub fn reconstruct_bijection(
    table: &LatticeIsoTable,
    sigma: &SigmaLattice,
) -> Result<ReconstructionResult, HartmanisError> {
    let n = sigma.n();
    if !(2..=MAX_RECONSTRUCTION_POINTS).contains(&n) {
        return Err(HartmanisError::UnsupportedSize(n));
    }
    if table.size() != sigma.len() {
        return Err(not_iso(format!("table has {} entries, Σ({n}) has {}", table.size(), sigma.len())));
    }
    if !table.is_bijection() {
        return Err(not_iso("not a bijection"));
    }

    // source and target are both Σ(n), so they share one atom list
    let atom_idx = sigma.atom_indices();
    let atoms: Vec<AtomProfile> = atom_idx
        .iter()
        .map(|&i| AtomProfile::new(sigma.get(i).atom_set().expect("atom index"), n).expect("proper"))
        .collect();
    let mut img_pos = Vec::with_capacity(atoms.len());
    for &i in &atom_idx {
        let j = table.map[i];
        match atom_idx.binary_search(&j) {
            Ok(pos) => img_pos.push(pos),
            Err(_) => return Err(not_iso(format!("atom {i} maps to non-atom {j}"))),
        }
    }

    let order = if n == 2 {
        vec![false]
    } else {
        let swapped = match_classes(&atoms, &img_pos)?;
        vec![swapped, !swapped]
    };

    for uses_complement in order {
        if let Some(theta) = bijection_from_singletons(n, &atoms, &img_pos, uses_complement) {
            let candidate = ReconstructionResult { theta, uses_complement };
            if induces(&candidate, table, sigma) {
                return Ok(candidate);
            }
        }
    }
    if !sigma.preserves_order(table) {
        return Err(not_iso("order is not preserved"));
    }
    Err(HartmanisError::NoConsistentBijection)
}

/// Checks that `Θ` preserves types and carries the intrinsic classes onto
/// classes; returns whether the singleton class lands on the co-singletons.
fn match_classes(atoms: &[AtomProfile], img_pos: &[usize]) -> Result<bool, HartmanisError> {
    let m = atoms.len();
    let ty = |i: usize, j: usize| type_of(&atoms[i], &atoms[j]).expect("distinct atoms");
    for i in 0..m {
        for j in i + 1..m {
            if ty(i, j) != ty(img_pos[i], img_pos[j]) {
                return Err(not_iso(format!("type not preserved on atom pair ({i}, {j})")));
            }
        }
    }
    let part = classify_atoms_intrinsic(m, ty).map_err(|e| not_iso(e.to_string()))?;
    let image_of = |set: &[usize]| {
        let mut v: Vec<usize> = set.iter().map(|&i| img_pos[i]).collect();
        v.sort_unstable();
        v
    };
    if image_of(&part.l_set) != part.l_set {
        return Err(not_iso("class of non-extremal atoms is not preserved"));
    }
    let target_of = |clique: &[usize]| part.cliques.iter().position(|c| image_of(clique) == *c);
    let singles = part
        .cliques
        .iter()
        .position(|c| atoms[c[0]].mask.len() == 1)
        .ok_or_else(|| not_iso("no singleton class"))?;
    let landed = target_of(&part.cliques[singles])
        .ok_or_else(|| not_iso("singleton class is not mapped onto a class"))?;
    target_of(&part.cliques[1 - singles])
        .ok_or_else(|| not_iso("co-singleton class is not mapped onto a class"))?;
    Ok(landed != singles)
}

fn bijection_from_singletons(
    n: usize,
    atoms: &[AtomProfile],
    img_pos: &[usize],
    uses_complement: bool,
) -> Option<Bijection> {
    let mut theta = vec![usize::MAX; n];
    for (p, &q) in atoms.iter().zip(img_pos) {
        if p.mask.len() != 1 {
            continue;
        }
        let q = atoms[q];
        let d = if uses_complement { q.mask.complement(n) } else { q.mask };
        if d.len() != 1 {
            return None;
        }
        theta[p.mask.first()?] = d.first()?;
    }
    Bijection::new(theta).ok()
}

fn induces(candidate: &ReconstructionResult, table: &LatticeIsoTable, sigma: &SigmaLattice) -> bool {
    (0..sigma.len()).into_par_iter().all(|i| {
        candidate
            .apply(sigma.get(i))
            .is_ok_and(|t| &t == sigma.get(table.map[i]))
    })
}

/// Query-by-topology adapter: tabulates `oracle` over `Σ(n)` and
/// reconstructs.
pub fn reconstruct_from_oracle(
    sigma: &SigmaLattice,
    oracle: impl Fn(&FinTopology) -> FinTopology,
) -> Result<ReconstructionResult, HartmanisError> {
    let table = sigma.table_from(oracle)?;
    reconstruct_bijection(&table, sigma)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_on_sigma_three() {
        let sigma = SigmaLattice::new(3).unwrap();
        let r = reconstruct_bijection(&LatticeIsoTable::identity(29), &sigma).unwrap();
        assert_eq!(r.theta, Bijection::identity(3));
        assert!(!r.uses_complement);
    }

    #[test]
    fn planted_bijection_on_sigma_four() {
        let sigma = SigmaLattice::new(4).unwrap();
        let theta = Bijection::new(vec![2, 0, 3, 1]).unwrap();
        for flag in [false, true] {
            let table = build_table(&sigma, &theta, flag).unwrap();
            let r = reconstruct_bijection(&table, &sigma).unwrap();
            assert_eq!(r, ReconstructionResult { theta: theta.clone(), uses_complement: flag });
        }
    }

    #[test]
    fn two_points_never_needs_complement() {
        let sigma = SigmaLattice::new(2).unwrap();
        let table = build_table(&sigma, &Bijection::identity(2), true).unwrap();
        let r = reconstruct_bijection(&table, &sigma).unwrap();
        assert_eq!(r.theta, Bijection::swap(2, 0, 1));
        assert!(!r.uses_complement);
    }

    #[test]
    fn rejects_bad_inputs() {
        let sigma = SigmaLattice::new(1).unwrap();
        assert_eq!(
            reconstruct_bijection(&LatticeIsoTable::identity(1), &sigma),
            Err(HartmanisError::UnsupportedSize(1))
        );
        let sigma = SigmaLattice::new(3).unwrap();
        let mut map: Vec<usize> = (0..29).collect();
        map.swap(0, 1);
        let err = reconstruct_bijection(&LatticeIsoTable { map }, &sigma).unwrap_err();
        assert!(matches!(err, HartmanisError::NotALatticeIso(_)));
        let err = reconstruct_bijection(&LatticeIsoTable { map: vec![0; 29] }, &sigma).unwrap_err();
        assert!(matches!(err, HartmanisError::NotALatticeIso(_)));
    }

    #[test]
    fn json_shape() {
        let r = ReconstructionResult { theta: Bijection::new(vec![1, 0, 2]).unwrap(), uses_complement: true };
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"theta":[1,0,2],"uses_complement":true}"#
        );
    }
}
