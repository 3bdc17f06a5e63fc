//! Small finite fields `GF(p^k)` as lookup tables.
//!
//! An element `c₀ + c₁β + … + c_{k−1}β^{k−1}` (with `β` a root of the
//! modulus) is encoded as the integer `c₀ + c₁p + … + c_{k−1}p^{k−1}`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// `(p, k)` pairs with a built-in modulus.
pub const SUPPORTED_FIELDS: [(u32, u32); 6] = [(2, 1), (3, 1), (5, 1), (2, 2), (2, 3), (3, 2)];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("GF({p}^{k}) is not supported")]
    Unsupported { p: u32, k: u32 },
    #[error("division by zero")]
    DivisionByZero,
}

/// Field element encoding.
pub type Elem = u8;

/// Fixed monic modulus, low coefficient first, leading 1 omitted.
fn modulus(p: u32, k: u32) -> Option<Vec<u32>> {
    Some(match (p, k) {
        (_, 1) if [2, 3, 5].contains(&p) => vec![0],
        // x² + x + 1
        (2, 2) => vec![1, 1],
        // x³ + x + 1
        (2, 3) => vec![1, 1, 0],
        // x² + 1
        (3, 2) => vec![1, 0],
        _ => return None,
    })
}

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteField {
    p: u32,
    k: u32,
    q: usize,
    modulus: Vec<u32>,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.k)
    }
}

impl FiniteField {
    pub fn new(p: u32, k: u32) -> Result<Self, FieldError> {
        let modulus = modulus(p, k).ok_or(FieldError::Unsupported { p, k })?;
        let q = p.pow(k) as usize;
        let digits = |x: usize| -> Vec<u32> {
            (0..k).map(|i| (x as u32 / p.pow(i)) % p).collect()
        };
        let encode = |c: &[u32]| -> Elem {
            c.iter().rev().fold(0u32, |acc, &d| acc * p + d) as Elem
        };
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = encode(&sum);
                mul[a * q + b] = encode(&poly_mul_mod(&da, &db, &modulus, p));
            }
        }
        let mut field = FiniteField { p, k, q, modulus, add, mul, neg: vec![0; q], inv: vec![0; q] };
        for a in 0..q {
            field.neg[a] = (0..q).find(|&b| field.add[a * q + b] == 0).expect("group") as Elem;
            if a != 0 {
                field.inv[a] = (0..q).find(|&b| field.mul[a * q + b] == 1).expect("field") as Elem;
            }
        }
        Ok(field)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Number of elements.
    pub fn q(&self) -> usize {
        self.q
    }

    /// Monic modulus coefficients, constant term first, leading term omitted.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q).map(|x| x as Elem)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.q + b as usize]
    }

    pub fn inv(&self, a: Elem) -> Result<Elem, FieldError> {
        if a == 0 {
            Err(FieldError::DivisionByZero)
        } else {
            Ok(self.inv[a as usize])
        }
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The automorphisms `x ↦ x^(p^e)`, `e = 0..k`.
    pub fn automorphisms(&self) -> impl Iterator<Item = FieldAut> {
        (0..self.k).map(FieldAut::frobenius)
    }
}

fn poly_mul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let k = a.len();
    let mut prod = vec![0u32; 2 * k - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    // x^k ≡ −(modulus low part)
    for deg in (k..prod.len()).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        prod[deg] = 0;
        for (i, m) in modulus.iter().enumerate() {
            let t = prod[deg - k + i] + (p - (c * m) % p);
            prod[deg - k + i] = t % p;
        }
    }
    prod.truncate(k);
    prod
}

/// The Frobenius power `x ↦ x^(p^e)`. Every automorphism of a finite field
/// has this form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldAut {
    pub frobenius_exponent: u32,
}

impl FieldAut {
    pub const IDENTITY: FieldAut = FieldAut { frobenius_exponent: 0 };

    pub fn frobenius(e: u32) -> Self {
        FieldAut { frobenius_exponent: e }
    }

    pub fn is_identity(&self, field: &FiniteField) -> bool {
        self.frobenius_exponent.is_multiple_of(field.k())
    }

    #[inline]
    pub fn apply(&self, field: &FiniteField, x: Elem) -> Elem {
        field.pow(x, (field.p() as u64).pow(self.frobenius_exponent % field.k()))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FieldAut, field: &FiniteField) -> FieldAut {
        FieldAut::frobenius((self.frobenius_exponent + other.frobenius_exponent) % field.k())
    }

    pub fn inverse(&self, field: &FiniteField) -> FieldAut {
        let k = field.k();
        FieldAut::frobenius((k - self.frobenius_exponent % k) % k)
    }

    /// Identifies a map given as a table of images as a Frobenius power.
    pub fn from_table(field: &FiniteField, table: &[Elem]) -> Option<FieldAut> {
        field
            .automorphisms()
            .find(|a| field.elements().all(|x| a.apply(field, x) == table[x as usize]))
    }
}
