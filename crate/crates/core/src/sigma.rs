//! The lattice of all topologies on `n` points, materialized in stream order.

use std::collections::HashMap;

use crate::lattice::{build_lattice, FiniteLattice, LatticeError, LatticeIsoTable};
use crate::topology::{enumerate_topologies, FinTopology, TopologyError};

/// `Σ(n)` with an index for reverse lookup. Element `i` is the `i`-th
/// topology of [`enumerate_topologies`].
#[derive(Clone, Debug)]
pub struct SigmaLattice {
    n: usize,
    elements: Vec<FinTopology>,
    index: HashMap<FinTopology, usize>,
}

impl SigmaLattice {
    /// Materializes `Σ(n)`; `n ≤ 6`.
    pub fn new(n: usize) -> Result<Self, TopologyError> {
        let elements: Vec<FinTopology> = enumerate_topologies(n, false)?.collect();
        let index = elements.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        Ok(SigmaLattice { n, elements, index })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[FinTopology] {
        &self.elements
    }

    pub fn get(&self, i: usize) -> &FinTopology {
        &self.elements[i]
    }

    pub fn index_of(&self, t: &FinTopology) -> Option<usize> {
        self.index.get(t).copied()
    }

    /// Indices of the atoms, ordered by element index.
    pub fn atom_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.elements[i].is_atom()).collect()
    }

    /// The order relation as a validated [`FiniteLattice`] (`n ≤ 4`).
    pub fn lattice(&self) -> Result<FiniteLattice, LatticeError> {
        build_lattice(&self.elements, |a, b| a.is_weaker_or_equal(b))
    }

    /// Tabulates a map `Σ(n) → Σ(n)` given on topologies.
    pub fn table_from(
        &self,
        f: impl Fn(&FinTopology) -> FinTopology,
    ) -> Result<LatticeIsoTable, TopologyError> {
        let map = self
            .elements
            .iter()
            .map(|t| {
                let image = f(t);
                self.index_of(&image)
                    .ok_or(TopologyError::GroundMismatch { left: self.n, right: image.n() })
            })
            .collect::<Result<Vec<usize>, _>>()?;
        Ok(LatticeIsoTable { map })
    }

    /// Checks that `table` and its inverse preserve inclusion.
    pub fn preserves_order(&self, table: &LatticeIsoTable) -> bool {
        use rayon::prelude::*;
        table.map.len() == self.len()
            && table.is_bijection()
            && (0..self.len()).into_par_iter().all(|i| {
                let a = &self.elements[i];
                let fa = &self.elements[table.map[i]];
                (0..self.len()).all(|j| {
                    a.is_weaker_or_equal(&self.elements[j])
                        == fa.is_weaker_or_equal(&self.elements[table.map[j]])
                })
            })
    }
}
