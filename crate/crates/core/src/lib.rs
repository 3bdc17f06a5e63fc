//! Finite lattices of topologies, vector topologies over finite fields and
//! the reconstruction algorithms relating their isomorphisms to bijections,
//! semilinear maps and field automorphisms.

pub mod field;
pub mod galois;
pub mod hartmanis;
pub mod lattice;
pub mod linear;
pub mod projective;
pub mod rigidity;
pub mod sigma;
pub mod topology;

pub use field::{FieldAut, FiniteField};
pub use galois::{TauLattice, VectorTopology};
pub use hartmanis::ReconstructionResult;
pub use lattice::{FiniteLattice, LatticeIsoTable};
pub use linear::{AffineSemilinearMap, Matrix, SemilinearMap, SpaceSpec, Subspace, VectorSpace};
pub use projective::{SubspaceIsoTable, SubspaceLattice};
pub use rigidity::TripleDecomposition;
pub use sigma::SigmaLattice;
pub use topology::{Bijection, FinTopology, SubsetMask, TopologyError};
