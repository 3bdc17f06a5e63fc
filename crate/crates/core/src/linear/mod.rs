//! Vector spaces over small finite fields, their subspace lattices and
//! (affine) semilinear maps.

mod space;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Elem, FieldAut, FieldError, FiniteField};
use crate::topology::Bijection;

pub use space::{SpaceSpec, VectorSpace, MAX_SPACE_SIZE};

/// Coordinates, coordinate 0 first.
pub type Vector = Vec<Elem>;

/// Enumerations of `GL` are refused above this many matrices.
pub const MAX_GROUP_ENUMERATION: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinearError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("space of dimension {dim} over {q} elements is too large")]
    SpaceTooLarge { q: usize, dim: usize },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("group of order {0} is too large to enumerate")]
    SizeExceeded(u128),
    #[error("entry {0} is not a field element")]
    BadEntry(u32),
}

/// Reduced row echelon form of `rows` (width `width`); zero rows dropped.
/// Returns the rows and their pivot columns.
pub fn rref(field: &FiniteField, mut rows: Vec<Vector>, width: usize) -> (Vec<Vector>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        let Some(sel) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = field.inv(rows[r][c]).expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, &p) in row.iter_mut().zip(&pivot_row) {
                    *x = field.sub(*x, field.mul(f, p));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

/// A subspace stored as its reduced row echelon basis, which is unique, so
/// equality is structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vector>,
}

#[derive(Serialize, Deserialize)]
struct SubspaceJson {
    dim: usize,
    basis: Vec<Vector>,
}

impl Serialize for Subspace {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SubspaceJson { dim: self.dim(), basis: self.basis.clone() }.serialize(serializer)
    }
}

impl Subspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    /// Parses the `{"dim", "basis"}` form and re-canonicalizes it.
    pub fn from_json(space: &VectorSpace, value: &serde_json::Value) -> Result<Subspace, String> {
        let raw: SubspaceJson = serde_json::from_value(value.clone()).map_err(|e| e.to_string())?;
        let s = space.span(&raw.basis);
        if s.dim() != raw.dim || s.basis != raw.basis {
            return Err("basis is not in reduced echelon form".into());
        }
        Ok(s)
    }
}

/// Square matrix, row-major. Column `i` is the image of the `i`-th unit vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    dim: usize,
    entries: Vec<Elem>,
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows: Vec<Vector> = Vec::deserialize(deserializer)?;
        Matrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

impl Matrix {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1;
        }
        Matrix { dim, entries }
    }

    pub fn from_rows(rows: Vec<Vector>) -> Result<Self, LinearError> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(LinearError::DimensionMismatch { expected: dim, got: bad.len() });
        }
        Ok(Matrix { dim, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_columns(cols: &[Vector]) -> Result<Self, LinearError> {
        let dim = cols.len();
        let mut entries = vec![0; dim * dim];
        for (j, col) in cols.iter().enumerate() {
            if col.len() != dim {
                return Err(LinearError::DimensionMismatch { expected: dim, got: col.len() });
            }
            for (i, &c) in col.iter().enumerate() {
                entries[i * dim + j] = c;
            }
        }
        Ok(Matrix { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.entries[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vector> {
        self.entries.chunks(self.dim.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.dim).map(|i| self.get(i, j)).collect()
    }

    pub fn mul_vec(&self, field: &FiniteField, v: &[Elem]) -> Vector {
        (0..self.dim)
            .map(|i| {
                (0..self.dim).fold(0, |acc, j| field.add(acc, field.mul(self.get(i, j), v[j])))
            })
            .collect()
    }

    pub fn mul(&self, field: &FiniteField, other: &Matrix) -> Matrix {
        let d = self.dim;
        let mut entries = vec![0; d * d];
        for i in 0..d {
            for j in 0..d {
                entries[i * d + j] = (0..d)
                    .fold(0, |acc, k| field.add(acc, field.mul(self.get(i, k), other.get(k, j))));
            }
        }
        Matrix { dim: d, entries }
    }

    /// Entrywise image under a field automorphism.
    pub fn map_entries(&self, field: &FiniteField, aut: &FieldAut) -> Matrix {
        Matrix { dim: self.dim, entries: self.entries.iter().map(|&x| aut.apply(field, x)).collect() }
    }

    pub fn rank(&self, field: &FiniteField) -> usize {
        rref(field, self.rows(), self.dim).0.len()
    }

    pub fn is_invertible(&self, field: &FiniteField) -> bool {
        self.rank(field) == self.dim
    }

    /// Gauss-Jordan on `[M | I]`.
    pub fn inverse(&self, field: &FiniteField) -> Result<Matrix, LinearError> {
        let d = self.dim;
        let rows: Vec<Vector> = (0..d)
            .map(|i| {
                let mut row = self.entries[i * d..(i + 1) * d].to_vec();
                row.extend((0..d).map(|j| (i == j) as Elem));
                row
            })
            .collect();
        let (reduced, pivots) = rref(field, rows, 2 * d);
        if pivots.len() < d || pivots[d - 1] >= d {
            return Err(LinearError::SingularMatrix);
        }
        Ok(Matrix { dim: d, entries: reduced.into_iter().flat_map(|r| r[d..].to_vec()).collect() })
    }
}

/// `x ↦ M·ψ(x)` with `ψ` applied coordinatewise.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SemilinearMap {
    pub psi: FieldAut,
    pub matrix: Matrix,
}

impl SemilinearMap {
    pub fn new(field: &FiniteField, psi: FieldAut, matrix: Matrix) -> Result<Self, LinearError> {
        if !matrix.is_invertible(field) {
            return Err(LinearError::SingularMatrix);
        }
        Ok(SemilinearMap { psi, matrix })
    }

    pub fn identity(dim: usize) -> Self {
        SemilinearMap { psi: FieldAut::IDENTITY, matrix: Matrix::identity(dim) }
    }

    pub fn apply(&self, field: &FiniteField, x: &[Elem]) -> Vector {
        let twisted: Vector = x.iter().map(|&c| self.psi.apply(field, c)).collect();
        self.matrix.mul_vec(field, &twisted)
    }

    /// `self ∘ other`: matrix `M₁·ψ₁(M₂)`, automorphism `ψ₁∘ψ₂`.
    pub fn compose(&self, field: &FiniteField, other: &SemilinearMap) -> SemilinearMap {
        SemilinearMap {
            psi: self.psi.compose(&other.psi, field),
            matrix: self.matrix.mul(field, &other.matrix.map_entries(field, &self.psi)),
        }
    }

    pub fn invert(&self, field: &FiniteField) -> Result<SemilinearMap, LinearError> {
        let psi_inv = self.psi.inverse(field);
        Ok(SemilinearMap {
            psi: psi_inv,
            matrix: self.matrix.inverse(field)?.map_entries(field, &psi_inv),
        })
    }

    /// Image of a subspace.
    pub fn image(&self, space: &VectorSpace, s: &Subspace) -> Subspace {
        let imgs: Vec<Vector> = s.basis().iter().map(|b| self.apply(space.field(), b)).collect();
        space.span(&imgs)
    }
}

/// `x ↦ M·ψ(x) + y₀`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineSemilinearMap {
    pub linear: SemilinearMap,
    pub y0: Vector,
}

impl AffineSemilinearMap {
    pub fn new(
        field: &FiniteField,
        psi: FieldAut,
        matrix: Matrix,
        y0: Vector,
    ) -> Result<Self, LinearError> {
        if y0.len() != matrix.dim() {
            return Err(LinearError::DimensionMismatch { expected: matrix.dim(), got: y0.len() });
        }
        Ok(AffineSemilinearMap { linear: SemilinearMap::new(field, psi, matrix)?, y0 })
    }

    pub fn identity(dim: usize) -> Self {
        AffineSemilinearMap { linear: SemilinearMap::identity(dim), y0: vec![0; dim] }
    }

    pub fn translation(y0: Vector) -> Self {
        AffineSemilinearMap { linear: SemilinearMap::identity(y0.len()), y0 }
    }

    pub fn apply(&self, space: &VectorSpace, x: &[Elem]) -> Vector {
        space.add_vectors(&self.linear.apply(space.field(), x), &self.y0)
    }

    /// `self ∘ other`, i.e. `(y₁ + φ₁(y₂), φ₁∘φ₂)`.
    pub fn compose(&self, space: &VectorSpace, other: &AffineSemilinearMap) -> AffineSemilinearMap {
        AffineSemilinearMap {
            linear: self.linear.compose(space.field(), &other.linear),
            y0: space.add_vectors(&self.y0, &self.linear.apply(space.field(), &other.y0)),
        }
    }

    pub fn invert(&self, space: &VectorSpace) -> Result<AffineSemilinearMap, LinearError> {
        let linear = self.linear.invert(space.field())?;
        let shifted = linear.apply(space.field(), &self.y0);
        let y0 = shifted.iter().map(|&c| space.field().neg(c)).collect();
        Ok(AffineSemilinearMap { linear, y0 })
    }

    /// The induced permutation of vector indices.
    pub fn to_bijection(&self, space: &VectorSpace) -> Bijection {
        let image = (0..space.size())
            .map(|i| space.index(&self.apply(space, &space.vector(i))))
            .collect();
        Bijection::new(image).expect("invertible affine map")
    }
}

/// `|GL(d, q)| = ∏_{i<d} (q^d − q^i)`.
pub fn gl_order(q: usize, d: usize) -> u128 {
    let qd = (q as u128).pow(d as u32);
    (0..d as u32).map(|i| qd - (q as u128).pow(i)).product()
}

/// `|ΓL(d, q)| = k·|GL(d, q)|` with `q = p^k`.
pub fn group_order_gamma_l(space: &VectorSpace) -> u128 {
    space.field().k() as u128 * gl_order(space.field().q(), space.dim())
}

/// Every invertible matrix, built column by column avoiding the span of the
/// previous columns.
pub fn enumerate_gl(space: &VectorSpace) -> Result<Vec<Matrix>, LinearError> {
    let order = gl_order(space.field().q(), space.dim());
    if order > MAX_GROUP_ENUMERATION {
        return Err(LinearError::SizeExceeded(order));
    }
    let mut out = Vec::with_capacity(order as usize);
    let mut cols: Vec<Vector> = Vec::new();
    gl_columns(space, &mut cols, &mut out);
    Ok(out)
}

fn gl_columns(space: &VectorSpace, cols: &mut Vec<Vector>, out: &mut Vec<Matrix>) {
    if cols.len() == space.dim() {
        out.push(Matrix::from_columns(cols).expect("square"));
        return;
    }
    let span = space.span(cols);
    let inside = space.members(&span);
    for v in 0..space.size() {
        if inside.binary_search(&v).is_ok() {
            continue;
        }
        cols.push(space.vector(v));
        gl_columns(space, cols, out);
        cols.pop();
    }
}

/// Every `(ψ, M)`, automorphism-major.
pub fn enumerate_gamma_l(space: &VectorSpace) -> Result<Vec<SemilinearMap>, LinearError> {
    let order = group_order_gamma_l(space);
    if order > MAX_GROUP_ENUMERATION {
        return Err(LinearError::SizeExceeded(order));
    }
    let gl = enumerate_gl(space)?;
    Ok(space
        .field()
        .automorphisms()
        .flat_map(|psi| gl.iter().map(move |m| SemilinearMap { psi, matrix: m.clone() }))
        .collect())
}

#[cfg(test)]
mod tests;
