use std::fmt;

use serde::{Deserialize, Serialize};

use super::{rref, LinearError, Subspace, Vector};
use crate::field::{Elem, FiniteField};
use crate::topology::{Bijection, SubsetMask, MAX_POINTS};

/// Spaces above this many vectors are refused.
pub const MAX_SPACE_SIZE: usize = 1024;

/// `F_q^d` with its vectors enumerated: `v ↦ Σ vᵢ·qⁱ`, coordinate 0 least
/// significant. This index is the ground-set labelling used for topologies
/// on the space.
#[derive(Clone)]
pub struct VectorSpace {
    field: FiniteField,
    dim: usize,
    size: usize,
    add: Vec<u16>,
    scale: Vec<u16>,
    neg: Vec<u16>,
}

impl fmt::Debug for VectorSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}^{}", self.field, self.dim)
    }
}

impl PartialEq for VectorSpace {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.dim == other.dim
    }
}

impl Eq for VectorSpace {}

/// Wire form `{"p": 2, "k": 1, "dim": 2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub p: u32,
    pub k: u32,
    pub dim: usize,
}

impl VectorSpace {
    pub fn new(field: FiniteField, dim: usize) -> Result<Self, LinearError> {
        let q = field.q();
        let size = (0..dim).try_fold(1usize, |acc, _| acc.checked_mul(q));
        let size = match size {
            Some(s) if dim >= 1 && s <= MAX_SPACE_SIZE => s,
            _ => return Err(LinearError::SpaceTooLarge { q, dim }),
        };
        let mut space = VectorSpace { field, dim, size, add: Vec::new(), scale: Vec::new(), neg: Vec::new() };
        let vectors: Vec<Vector> = (0..size).map(|i| space.vector(i)).collect();
        let mut add = vec![0u16; size * size];
        for (i, u) in vectors.iter().enumerate() {
            for (j, v) in vectors.iter().enumerate() {
                add[i * size + j] = space.index(&space.add_vectors(u, v)) as u16;
            }
        }
        let mut scale = vec![0u16; q * size];
        for a in 0..q {
            for (j, v) in vectors.iter().enumerate() {
                scale[a * size + j] = space.index(&space.scale_vector(a as Elem, v)) as u16;
            }
        }
        let neg = vectors
            .iter()
            .map(|v| space.index(&space.scale_vector(space.field.neg(1), v)) as u16)
            .collect();
        space.add = add;
        space.scale = scale;
        space.neg = neg;
        Ok(space)
    }

    pub fn from_spec(spec: SpaceSpec) -> Result<Self, LinearError> {
        VectorSpace::new(FiniteField::new(spec.p, spec.k)?, spec.dim)
    }

    pub fn spec(&self) -> SpaceSpec {
        SpaceSpec { p: self.field.p(), k: self.field.k(), dim: self.dim }
    }

    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of vectors `q^d`.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Whether topologies on this space fit in a [`SubsetMask`].
    pub fn fits_mask(&self) -> bool {
        self.size <= MAX_POINTS
    }

    pub fn vector(&self, mut index: usize) -> Vector {
        let q = self.field.q();
        (0..self.dim)
            .map(|_| {
                let c = (index % q) as Elem;
                index /= q;
                c
            })
            .collect()
    }

    pub fn index(&self, v: &[Elem]) -> usize {
        let q = self.field.q();
        v.iter().rev().fold(0, |acc, &c| acc * q + c as usize)
    }

    pub fn unit(&self, i: usize) -> Vector {
        let mut v = vec![0; self.dim];
        v[i] = 1;
        v
    }

    pub fn add_vectors(&self, u: &[Elem], v: &[Elem]) -> Vector {
        u.iter().zip(v).map(|(&a, &b)| self.field.add(a, b)).collect()
    }

    pub fn sub_vectors(&self, u: &[Elem], v: &[Elem]) -> Vector {
        u.iter().zip(v).map(|(&a, &b)| self.field.sub(a, b)).collect()
    }

    pub fn scale_vector(&self, a: Elem, v: &[Elem]) -> Vector {
        v.iter().map(|&b| self.field.mul(a, b)).collect()
    }

    /// Index of `x + y`.
    #[inline]
    pub fn add_idx(&self, x: usize, y: usize) -> usize {
        self.add[x * self.size + y] as usize
    }

    /// Index of `a·x`.
    #[inline]
    pub fn scale_idx(&self, a: Elem, x: usize) -> usize {
        self.scale[a as usize * self.size + x] as usize
    }

    #[inline]
    pub fn neg_idx(&self, x: usize) -> usize {
        self.neg[x] as usize
    }

    /// `{x + s | x ∈ m}` for a vector index `s`.
    pub fn translate_mask(&self, m: SubsetMask, s: usize) -> SubsetMask {
        let mut out = SubsetMask::EMPTY;
        for x in m.iter() {
            out.insert(self.add_idx(x, s));
        }
        out
    }

    /// Minkowski sum of two vector sets.
    pub fn sum_mask(&self, a: SubsetMask, b: SubsetMask) -> SubsetMask {
        let mut out = SubsetMask::EMPTY;
        for y in b.iter() {
            out |= self.translate_mask(a, y);
        }
        out
    }

    pub fn scale_mask(&self, a: Elem, m: SubsetMask) -> SubsetMask {
        let mut out = SubsetMask::EMPTY;
        for x in m.iter() {
            out.insert(self.scale_idx(a, x));
        }
        out
    }

    /// Translation `x ↦ x + a` as a bijection of vector indices.
    pub fn translation(&self, a: usize) -> Bijection {
        Bijection::new((0..self.size).map(|x| self.add_idx(x, a)).collect())
            .expect("translation is a bijection")
    }

    pub fn zero_subspace(&self) -> Subspace {
        Subspace { ambient: self.dim, basis: Vec::new() }
    }

    pub fn full_subspace(&self) -> Subspace {
        Subspace { ambient: self.dim, basis: (0..self.dim).map(|i| self.unit(i)).collect() }
    }

    /// Span of arbitrary vectors in reduced row echelon form.
    pub fn span(&self, vectors: &[Vector]) -> Subspace {
        let (rows, _) = rref(&self.field, vectors.to_vec(), self.dim);
        Subspace { ambient: self.dim, basis: rows }
    }

    pub fn sum(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let mut rows = a.basis.clone();
        rows.extend(b.basis.iter().cloned());
        self.span(&rows)
    }

    /// Intersection via the Zassenhaus kernel trick: row-reduce
    /// `[[A, A], [B, 0]]`; rows with vanishing left half span `A ∩ B`.
    pub fn intersect(&self, a: &Subspace, b: &Subspace) -> Subspace {
        let d = self.dim;
        let mut rows: Vec<Vector> = Vec::new();
        for u in &a.basis {
            rows.push(u.iter().chain(u.iter()).copied().collect());
        }
        for v in &b.basis {
            rows.push(v.iter().copied().chain(std::iter::repeat_n(0, d)).collect());
        }
        let (reduced, _) = rref(&self.field, rows, 2 * d);
        let kernel: Vec<Vector> = reduced
            .into_iter()
            .filter(|r| r[..d].iter().all(|&c| c == 0))
            .map(|r| r[d..].to_vec())
            .collect();
        self.span(&kernel)
    }

    pub fn contains(&self, s: &Subspace, v: &[Elem]) -> bool {
        let mut rows = s.basis.clone();
        rows.push(v.to_vec());
        rref(&self.field, rows, self.dim).0.len() == s.dim()
    }

    pub fn is_subspace_of(&self, a: &Subspace, b: &Subspace) -> bool {
        a.basis.iter().all(|v| self.contains(b, v))
    }

    /// Vector indices of all members of `s`, ascending.
    pub fn members(&self, s: &Subspace) -> Vec<usize> {
        let q = self.field.q();
        let r = s.dim();
        let mut out: Vec<usize> = (0..q.pow(r as u32))
            .map(|mut coeffs| {
                let mut v = vec![0; self.dim];
                for row in &s.basis {
                    let c = (coeffs % q) as Elem;
                    coeffs /= q;
                    v = self.add_vectors(&v, &self.scale_vector(c, row));
                }
                self.index(&v)
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Members of `s` as a mask.
    ///
    /// # Panics
    /// If the space does not fit in a [`SubsetMask`].
    pub fn subspace_mask(&self, s: &Subspace) -> SubsetMask {
        assert!(self.fits_mask(), "{self:?} is too large for masks");
        SubsetMask::from_points(self.members(s))
    }

    /// The subspace whose members are exactly `m`, if `m` is one.
    pub fn subspace_from_mask(&self, m: SubsetMask) -> Option<Subspace> {
        let vectors: Vec<Vector> = m.iter().map(|x| self.vector(x)).collect();
        let s = self.span(&vectors);
        (self.subspace_mask(&s) == m).then_some(s)
    }

    /// Every subspace once, graded by dimension; within a dimension by pivot
    /// columns then free entries.
    pub fn enumerate_subspaces(&self) -> Vec<Subspace> {
        let d = self.dim;
        let q = self.field.q();
        let mut out = Vec::new();
        for r in 0..=d {
            for pivots in combinations(d, r) {
                let free: Vec<(usize, usize)> = (0..r)
                    .flat_map(|i| {
                        let pivots = &pivots;
                        (pivots[i] + 1..d)
                            .filter(move |c| !pivots.contains(c))
                            .map(move |c| (i, c))
                    })
                    .collect();
                for mut fill in 0..q.pow(free.len() as u32) {
                    let mut basis = vec![vec![0; d]; r];
                    for (i, &p) in pivots.iter().enumerate() {
                        basis[i][p] = 1;
                    }
                    for &(i, c) in &free {
                        basis[i][c] = (fill % q) as Elem;
                        fill /= q;
                    }
                    out.push(Subspace { ambient: d, basis });
                }
            }
        }
        out
    }
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, r, &mut Vec::new(), &mut out);
    out
}
