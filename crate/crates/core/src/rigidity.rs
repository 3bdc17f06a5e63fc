//! Bijections of a finite vector space that preserve its vector topologies,
//! their decomposition into `x ↦ M·ψ(x) + y₀`, and the group
//! `(X ⋊ ΓL(X)) × ℤ/2` acting on `Σ(X)`.

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Elem, FieldAut};
use crate::galois::{GaloisError, TauLattice};
use crate::hartmanis::{build_table, reconstruct_bijection, HartmanisError};
use crate::linear::{
    enumerate_gamma_l, enumerate_gl, group_order_gamma_l, AffineSemilinearMap, LinearError, Matrix,
    SemilinearMap, SpaceSpec, Vector, VectorSpace,
};
use crate::sigma::SigmaLattice;
use crate::topology::{Bijection, FinTopology, SubsetMask, TopologyError};

/// The census loops over `|X|!` bijections.
pub const MAX_CENSUS_POINTS: usize = 9;
/// Bound on `|X|·|ΓL(X)|` for the group construction.
pub const MAX_GROUP_ORDER: u128 = 1_000_000;
/// Semidirect parts up to this order get an exhaustive product table.
const EXHAUSTIVE_PRODUCT_LIMIT: usize = 1500;
/// Exhaustive associativity up to this order, sampled above.
const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 24;
const SAMPLED_PAIRS: usize = 100_000;
const SAMPLED_TRIPLES: usize = 20_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RigidityError {
    #[error("{what} is too large: {size} exceeds {limit}")]
    SizeExceeded { what: &'static str, size: u128, limit: u128 },
    #[error("map is not semiaffine: {0}")]
    NotSemiaffine(String),
    #[error("bijection acts on {got} points, the space has {expected}")]
    GroundMismatch { expected: usize, got: usize },
    #[error("the group structure needs dim >= 2, got {0}")]
    DimensionTooSmall(usize),
    #[error(transparent)]
    Galois(#[from] GaloisError),
    #[error(transparent)]
    Linear(#[from] LinearError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Hartmanis(#[from] HartmanisError),
}

/// Nontrivial vector topologies, coarsest first. Discrete and indiscrete
/// topologies are fixed by every bijection.
fn check_order(tau: &TauLattice) -> Vec<&FinTopology> {
    let mut idx: Vec<usize> = (0..tau.len())
        .filter(|&i| {
            let d = tau.subspaces()[i].dim();
            d != 0 && d != tau.space().dim()
        })
        .collect();
    idx.sort_by_key(|&i| std::cmp::Reverse(tau.subspaces()[i].dim()));
    idx.into_iter().map(|i| &tau.topologies()[i]).collect()
}

fn pushes_into_tau(tau: &TauLattice, order: &[&FinTopology], theta: &Bijection) -> bool {
    order.iter().all(|t| {
        let mut nbhd = vec![SubsetMask::EMPTY; t.n()];
        for (x, &u) in t.neighborhoods().iter().enumerate() {
            nbhd[theta.apply(x)] = theta.apply_mask(u);
        }
        FinTopology::from_neighborhoods(nbhd).is_ok_and(|image| tau.contains(&image))
    })
}

/// Whether `θ_*` maps `τ(X)` onto itself. `θ_*` is injective on `Σ(X)`, so
/// landing inside `τ` is the same as set-level equality.
pub fn preserves_tau(tau: &TauLattice, theta: &Bijection) -> Result<bool, RigidityError> {
    if theta.n() != tau.space().size() {
        return Err(RigidityError::GroundMismatch { expected: tau.space().size(), got: theta.n() });
    }
    Ok(pushes_into_tau(tau, &check_order(tau), theta))
}

fn next_permutation(a: &mut [usize]) -> bool {
    let Some(i) = a.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = a.iter().rposition(|&x| x > a[i]).expect("pivot has a larger successor");
    a.swap(i, j);
    a[i + 1..].reverse();
    true
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Every `τ`-preserving bijection, in lexicographic order of images. Blocks
/// of permutations sharing their first two images run in parallel.
pub fn tau_preserving_bijections(tau: &TauLattice) -> Result<Vec<Bijection>, RigidityError> {
    let n = tau.space().size();
    if n > MAX_CENSUS_POINTS {
        return Err(RigidityError::SizeExceeded {
            what: "bijection census",
            size: factorial(n),
            limit: factorial(MAX_CENSUS_POINTS),
        });
    }
    let order = check_order(tau);
    let prefixes: Vec<(usize, usize)> = if n >= 2 {
        (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect()
    } else {
        vec![(0, 0)]
    };
    let blocks: Vec<Vec<Bijection>> = prefixes
        .par_iter()
        .map(|&(a, b)| {
            let mut perm: Vec<usize> = if n >= 2 {
                let mut v = vec![a, b];
                v.extend((0..n).filter(|&x| x != a && x != b));
                v
            } else {
                vec![0]
            };
            let mut found = Vec::new();
            loop {
                let theta = Bijection::new(perm.clone()).expect("permutation");
                if pushes_into_tau(tau, &order, &theta) {
                    found.push(theta);
                }
                if n < 2 || !next_permutation(&mut perm[2..]) {
                    break;
                }
            }
            found
        })
        .collect();
    Ok(blocks.into_iter().flatten().collect())
}

/// Number of `τ`-preserving bijections. Equals `|X|·|ΓL(X)|` from
/// dimension 2 on; in dimension 1 every bijection preserves `τ`.
pub fn affine_census(tau: &TauLattice) -> Result<u64, RigidityError> {
    Ok(tau_preserving_bijections(tau)?.len() as u64)
}

/// `x ↦ phi_matrix·ψ(x) + y0`, and whether the lattice map also applies `C`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleDecomposition {
    pub psi: FieldAut,
    pub phi_matrix: Matrix,
    pub y0: Vector,
    pub uses_complement: bool,
}

impl TripleDecomposition {
    pub fn to_affine(&self) -> AffineSemilinearMap {
        AffineSemilinearMap {
            linear: SemilinearMap { psi: self.psi, matrix: self.phi_matrix.clone() },
            y0: self.y0.clone(),
        }
    }
}

/// Reads `y₀ = θ(0)`, `φ = θ − y₀`, the columns `φ(eᵢ)` and `ψ` off a
/// bijection of vector indices, then checks the result on every vector.
pub fn decompose_triple(
    space: &VectorSpace,
    theta: &Bijection,
    uses_complement: bool,
) -> Result<TripleDecomposition, RigidityError> {
    let n = space.size();
    if theta.n() != n {
        return Err(RigidityError::GroundMismatch { expected: n, got: theta.n() });
    }
    let field = space.field();
    let bad = |msg: String| RigidityError::NotSemiaffine(msg);
    let y0_idx = theta.apply(0);
    let minus_y0 = space.neg_idx(y0_idx);
    let phi: Vec<usize> = (0..n).map(|x| space.add_idx(theta.apply(x), minus_y0)).collect();

    let d = space.dim();
    let columns: Vec<Vector> = (0..d).map(|i| space.vector(phi[space.index(&space.unit(i))])).collect();

    // ψ from each basis line: φ(α·eᵢ) = ψ(α)·φ(eᵢ)
    let mut psi_table: Option<Vec<Elem>> = None;
    for (i, col) in columns.iter().enumerate() {
        let Some(j) = col.iter().position(|&c| c != 0) else {
            return Err(bad(format!("φ(e{}) = 0", i + 1)));
        };
        let mut table = Vec::with_capacity(field.q());
        for alpha in field.elements() {
            let w = space.vector(phi[space.scale_idx(alpha, space.index(&space.unit(i)))]);
            let beta = field.div(w[j], col[j]).expect("nonzero pivot");
            if w != space.scale_vector(beta, col) {
                return Err(bad(format!("φ(α·e{}) leaves the line of φ(e{})", i + 1, i + 1)));
            }
            table.push(beta);
        }
        match &psi_table {
            None => psi_table = Some(table),
            Some(t) if *t != table => {
                return Err(bad(format!("basis line {} disagrees with e1 on ψ", i + 1)));
            }
            Some(_) => {}
        }
    }
    let psi_table = psi_table.expect("dim >= 1");
    let psi = FieldAut::from_table(field, &psi_table)
        .ok_or_else(|| bad("scalar map is not a field automorphism".into()))?;
    let matrix = Matrix::from_columns(&columns)?;
    if !matrix.is_invertible(field) {
        return Err(bad("matrix is singular".into()));
    }
    let triple = TripleDecomposition { psi, phi_matrix: matrix, y0: space.vector(y0_idx), uses_complement };

    let linear = triple.to_affine().linear;
    for x in 0..n {
        if space.index(&linear.apply(field, &space.vector(x))) != phi[x] {
            return Err(bad(format!("M·ψ(x) differs from φ(x) at vector {x}")));
        }
        for y in 0..n {
            if phi[space.add_idx(x, y)] != space.add_idx(phi[x], phi[y]) {
                return Err(bad(format!("φ is not additive at ({x}, {y})")));
            }
        }
        for alpha in field.elements() {
            if phi[space.scale_idx(alpha, x)] != space.scale_idx(psi.apply(field, alpha), phi[x]) {
                return Err(bad(format!("φ is not ψ-semilinear at vector {x}")));
            }
        }
    }
    Ok(triple)
}

/// Outcome of the group checks on one space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremBReport {
    pub space: SpaceSpec,
    /// `None` above [`MAX_CENSUS_POINTS`].
    pub census: Option<u64>,
    /// `|X|·|ΓL(X)|`.
    pub expected: u128,
    pub semidirect_order: u128,
    pub group_order: u128,
    pub group_axioms: bool,
    pub product_pairs_checked: u64,
    pub associativity_triples_checked: u64,
    pub homomorphism: bool,
    pub injective: bool,
    pub identity_acts_trivially: bool,
    pub image_matches_census: Option<bool>,
    pub c_fixes_tau: bool,
    /// `C` differs from every `θ_*` on `Σ(X)`.
    pub complement_distinct_on_sigma: bool,
    /// `(g, 0)` and `(g, 1)` agree on `τ(X)` for every `g`.
    pub complement_collapses_on_tau: bool,
    pub pass: bool,
    pub seed: u64,
}

/// Atoms `A(D)` with `|D| ∈ {1, n−1}` together with `τ`: closed under every
/// `C^ε ∘ θ_*`, and for `|X| ≥ 3` the singleton atoms alone already tell
/// those maps apart.
fn probe_set(tau: &TauLattice) -> Result<Vec<FinTopology>, RigidityError> {
    let n = tau.space().size();
    let mut probes: Vec<FinTopology> = Vec::new();
    for x in 0..n {
        let d = SubsetMask::singleton(x);
        probes.push(crate::topology::atom(d, n)?);
        probes.push(crate::topology::atom(d.complement(n), n)?);
    }
    probes.extend(tau.topologies().iter().cloned());
    Ok(probes)
}

/// Builds `X ⋊ ΓL(X)` with product `(x₁ + φ₁(x₂), φ₁∘φ₂)`, checks the group
/// axioms, and checks that `((x, φ), ε) ↦ C^ε ∘ (φ + x)_*` is an injective
/// homomorphism into `Aut(Σ(X))` whose point maps are exactly the census.
pub fn theorem_b_group(tau: &TauLattice, seed: u64) -> Result<TheoremBReport, RigidityError> {
    let space = tau.space();
    let n = space.size();
    if space.dim() < 2 {
        return Err(RigidityError::DimensionTooSmall(space.dim()));
    }
    let expected = n as u128 * group_order_gamma_l(space);
    if expected > MAX_GROUP_ORDER {
        return Err(RigidityError::SizeExceeded { what: "X ⋊ ΓL(X)", size: expected, limit: MAX_GROUP_ORDER });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gamma = enumerate_gamma_l(space)?;
    let m = gamma.len();
    let gamma_index: HashMap<&SemilinearMap, usize> = gamma.iter().enumerate().map(|(i, e)| (e, i)).collect();
    // φ₁∘φ₂ and φ(x) as tables; element (x, φ) has index x·|ΓL| + φ
    let gamma_product: Vec<Option<usize>> = (0..m * m)
        .into_par_iter()
        .map(|k| gamma_index.get(&gamma[k / m].compose(space.field(), &gamma[k % m])).copied())
        .collect();
    let gamma_action: Vec<usize> = (0..m * n)
        .into_par_iter()
        .map(|k| space.index(&gamma[k / n].apply(space.field(), &space.vector(k % n))))
        .collect();
    let elements: Vec<AffineSemilinearMap> = (0..n)
        .flat_map(|x| {
            gamma.iter().map(move |phi| AffineSemilinearMap { linear: phi.clone(), y0: space.vector(x) })
        })
        .collect();
    let g = elements.len();
    let product = |a: usize, b: usize| -> Option<usize> {
        let (x1, f1) = (a / m, a % m);
        let (x2, f2) = (b / m, b % m);
        let f = gamma_product[f1 * m + f2]?;
        Some(space.add_idx(x1, gamma_action[f1 * n + x2]) * m + f)
    };
    let index = |e: &AffineSemilinearMap| -> Option<usize> {
        Some(space.index(&e.y0) * m + *gamma_index.get(&e.linear)?)
    };

    // group axioms
    let identity = index(&AffineSemilinearMap::identity(space.dim()));
    let mut group_axioms = identity.is_some();
    let pairs: Vec<(usize, usize)> = if g <= EXHAUSTIVE_PRODUCT_LIMIT {
        (0..g).flat_map(|a| (0..g).map(move |b| (a, b))).collect()
    } else {
        (0..SAMPLED_PAIRS).map(|_| (rng.gen_range(0..g), rng.gen_range(0..g))).collect()
    };
    let products: Vec<Option<usize>> = pairs.par_iter().map(|&(a, b)| product(a, b)).collect();
    group_axioms &= products.iter().all(Option::is_some);
    // the tables agree with composing the maps themselves
    group_axioms &= pairs.par_iter().zip(&products).take(SAMPLED_TRIPLES).all(|(&(a, b), &ab)| {
        ab.is_some() && index(&elements[a].compose(space, &elements[b])) == ab
    });
    if let Some(e) = identity {
        group_axioms &= (0..g).into_par_iter().all(|a| {
            product(a, e) == Some(a)
                && product(e, a) == Some(a)
                && elements[a]
                    .invert(space)
                    .ok()
                    .and_then(|inv| index(&inv))
                    .is_some_and(|i| product(a, i) == Some(e) && product(i, a) == Some(e))
        });
    }
    let triples: Vec<(usize, usize, usize)> = if g <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
        (0..g).flat_map(|a| (0..g).flat_map(move |b| (0..g).map(move |c| (a, b, c)))).collect()
    } else {
        (0..SAMPLED_TRIPLES).map(|_| (rng.gen_range(0..g), rng.gen_range(0..g), rng.gen_range(0..g))).collect()
    };
    group_axioms &= triples.par_iter().all(|&(a, b, c)| {
        let left = product(a, b).and_then(|ab| product(ab, c));
        let right = product(b, c).and_then(|bc| product(a, bc));
        left.is_some() && left == right
    });

    // the action on the probe set; index 2·i + ε
    let probes = probe_set(tau)?;
    let probe_index: HashMap<&FinTopology, usize> = probes.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let bijections: Vec<Bijection> = elements.par_iter().map(|e| e.to_bijection(space)).collect();
    let lookup = |t: &FinTopology| probe_index.get(t).map(|&i| i as u32);
    let complement: Option<Vec<u32>> = probes.iter().map(|t| lookup(&t.complement_map())).collect();
    let actions: Vec<Option<Vec<u32>>> = bijections
        .par_iter()
        .flat_map_iter(|theta| {
            let pushed: Option<Vec<u32>> =
                probes.iter().map(|t| lookup(&t.pushforward(theta).expect("ground sizes agree"))).collect();
            // C^ε after θ_*, with C tabulated once on the probes
            let flipped = pushed
                .as_ref()
                .zip(complement.as_ref())
                .map(|(p, c)| p.iter().map(|&i| c[i as usize]).collect());
            [pushed, flipped]
        })
        .collect();
    let closed = actions.iter().all(Option::is_some);
    let actions: Vec<Vec<u32>> = actions.into_iter().flatten().collect();
    let mut homomorphism = closed;
    if closed {
        homomorphism &= pairs.par_iter().zip(&products).all(|(&(a, b), ab)| {
            let Some(ab) = *ab else { return false };
            (0..4).all(|eps| {
                let (ea, eb) = (eps & 1, eps >> 1);
                let fa = &actions[2 * a + ea];
                let fb = &actions[2 * b + eb];
                let fab = &actions[2 * ab + (ea ^ eb)];
                fb.iter().zip(fab).all(|(&y, &z)| fa[y as usize] == z)
            })
        });
    }
    let distinct: HashSet<&Vec<u32>> = actions.iter().collect();
    let injective = closed && distinct.len() == 2 * g;
    let identity_acts_trivially = closed
        && identity.is_some_and(|e| actions[2 * e].iter().enumerate().all(|(i, &j)| i == j as usize));

    let tau_slots: Vec<usize> = tau.topologies().iter().map(|t| probe_index[t]).collect();
    let complement_collapses_on_tau = closed
        && (0..g).all(|a| tau_slots.iter().all(|&s| actions[2 * a][s] == actions[2 * a + 1][s]));
    let complement_distinct_on_sigma = closed
        && identity.is_some_and(|e| (0..g).all(|a| actions[2 * a] != actions[2 * e + 1]));
    let c_fixes_tau = tau.topologies().iter().all(|t| t.complement_map() == *t);

    let (census, image_matches_census) = if n <= MAX_CENSUS_POINTS {
        let found = tau_preserving_bijections(tau)?;
        let census: HashSet<&Bijection> = found.iter().collect();
        let image: HashSet<&Bijection> = bijections.iter().collect();
        (Some(found.len() as u64), Some(census == image))
    } else {
        (None, None)
    };

    let group_order = 2 * g as u128;
    let pass = group_axioms
        && g as u128 == expected
        && homomorphism
        && injective
        && identity_acts_trivially
        && image_matches_census.unwrap_or(true)
        && census.is_none_or(|c| c as u128 == expected)
        && c_fixes_tau
        && complement_distinct_on_sigma;
    Ok(TheoremBReport {
        space: space.spec(),
        census,
        expected,
        semidirect_order: g as u128,
        group_order,
        group_axioms,
        product_pairs_checked: pairs.len() as u64,
        associativity_triples_checked: triples.len() as u64,
        homomorphism,
        injective,
        identity_acts_trivially,
        image_matches_census,
        c_fixes_tau,
        complement_distinct_on_sigma,
        complement_collapses_on_tau,
        pass,
        seed,
    })
}

/// Outcome of the seeded `Σ(F₂²)` round trips.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremAReport {
    pub space: SpaceSpec,
    pub sigma_size: usize,
    pub seed: u64,
    pub trials: usize,
    pub tau_preserved: usize,
    pub recovered: usize,
    pub with_complement: usize,
    /// First failing trial, if any.
    pub failure: Option<String>,
    pub pass: bool,
}

/// One planted map for [`end_to_end_theorem_a`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlantedMap {
    pub map: AffineSemilinearMap,
    pub uses_complement: bool,
}

/// Builds the full table of `C^ε∘(φ+y₀)_*` over `Σ(F₂²)`, checks it keeps `τ`
/// inside `τ`, and recovers `(ψ, φ, y₀, ε)` through the bijection
/// reconstruction and the triple decomposition.
pub fn round_trip_theorem_a(
    sigma: &SigmaLattice,
    tau: &TauLattice,
    planted: &PlantedMap,
) -> Result<(bool, TripleDecomposition), RigidityError> {
    let space = tau.space();
    let theta = planted.map.to_bijection(space);
    let table = build_table(sigma, &theta, planted.uses_complement)?;
    let keeps_tau = tau.topologies().iter().all(|t| {
        let i = sigma.index_of(t).expect("vector topologies lie in Σ");
        tau.contains(sigma.get(table.map[i]))
    });
    let rec = reconstruct_bijection(&table, sigma)?;
    let triple = decompose_triple(space, &rec.theta, rec.uses_complement)?;
    Ok((keeps_tau, triple))
}

/// `trials` seeded draws of `(M ∈ GL(2, F₂), y₀, ε)` on `Σ(F₂²)`.
pub fn end_to_end_theorem_a(seed: u64, trials: usize) -> Result<TheoremAReport, RigidityError> {
    let space = VectorSpace::new(crate::field::FiniteField::new(2, 1).map_err(LinearError::from)?, 2)?;
    let sigma = SigmaLattice::new(space.size())?;
    let tau = TauLattice::new(&space)?;
    let gl = enumerate_gl(&space)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = TheoremAReport {
        space: space.spec(),
        sigma_size: sigma.len(),
        seed,
        trials,
        tau_preserved: 0,
        recovered: 0,
        with_complement: 0,
        failure: None,
        pass: false,
    };
    for trial in 0..trials {
        let matrix = gl.choose(&mut rng).expect("GL is nonempty").clone();
        let y0 = space.vector(rng.gen_range(0..space.size()));
        let uses_complement = rng.gen_bool(0.5);
        let planted = PlantedMap {
            map: AffineSemilinearMap::new(space.field(), FieldAut::IDENTITY, matrix, y0)?,
            uses_complement,
        };
        report.with_complement += uses_complement as usize;
        let (keeps_tau, triple) = round_trip_theorem_a(&sigma, &tau, &planted)?;
        report.tau_preserved += keeps_tau as usize;
        let exact = triple.to_affine() == planted.map && triple.uses_complement == uses_complement;
        if exact {
            report.recovered += 1;
        } else if report.failure.is_none() {
            report.failure = Some(format!("trial {trial}: planted {planted:?}, recovered {triple:?}"));
        }
    }
    report.pass = report.recovered == trials && report.tau_preserved == trials;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FiniteField;

    fn tau(p: u32, k: u32, d: usize) -> TauLattice {
        TauLattice::new(&VectorSpace::new(FiniteField::new(p, k).unwrap(), d).unwrap()).unwrap()
    }

    #[test]
    fn translations_and_semilinear_maps_preserve_tau() {
        let t = tau(3, 1, 2);
        let s = t.space();
        for a in 0..s.size() {
            assert!(preserves_tau(&t, &s.translation(a)).unwrap());
        }
        for phi in enumerate_gamma_l(s).unwrap() {
            let g = AffineSemilinearMap { linear: phi, y0: vec![0, 0] };
            assert!(preserves_tau(&t, &g.to_bijection(s)).unwrap());
        }
        // (0,0) ↔ (1,0)
        assert!(!preserves_tau(&t, &Bijection::swap(9, 0, 1)).unwrap());
    }

    #[test]
    fn small_censuses() {
        assert_eq!(affine_census(&tau(2, 1, 1)).unwrap(), 2);
        assert_eq!(affine_census(&tau(3, 1, 1)).unwrap(), 6);
        assert_eq!(affine_census(&tau(2, 1, 2)).unwrap(), 24);
        // a line carries only the discrete and indiscrete vector topologies,
        // so every bijection qualifies and the count exceeds |X|·|ΓL| = 20
        assert_eq!(affine_census(&tau(5, 1, 1)).unwrap(), 120);
        assert!(matches!(affine_census(&tau(2, 2, 2)), Err(RigidityError::SizeExceeded { .. })));
    }

    #[test]
    fn census_is_lexicographic() {
        let found = tau_preserving_bijections(&tau(3, 1, 1)).unwrap();
        let images: Vec<&[usize]> = found.iter().map(|b| b.image()).collect();
        assert!(images.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(images[0], &[0, 1, 2]);
    }

    #[test]
    fn decompose_translation() {
        let t = tau(3, 1, 2);
        let s = t.space();
        let y0 = vec![2, 1];
        let theta = AffineSemilinearMap::translation(y0.clone()).to_bijection(s);
        let triple = decompose_triple(s, &theta, false).unwrap();
        assert_eq!(triple.psi, FieldAut::IDENTITY);
        assert_eq!(triple.phi_matrix, Matrix::identity(2));
        assert_eq!(triple.y0, y0);
    }

    #[test]
    fn decompose_frobenius_on_f4_squared() {
        let s = VectorSpace::new(FiniteField::new(2, 2).unwrap(), 2).unwrap();
        let m = Matrix::from_rows(vec![vec![2, 0], vec![0, 1]]).unwrap();
        let g = AffineSemilinearMap::new(s.field(), FieldAut::frobenius(1), m, vec![1, 2]).unwrap();
        let triple = decompose_triple(&s, &g.to_bijection(&s), true).unwrap();
        assert_eq!(triple.to_affine(), g);
        assert!(triple.uses_complement);
    }

    #[test]
    fn decompose_all_of_agl_f3_squared() {
        let t = tau(3, 1, 2);
        let s = t.space();
        for phi in enumerate_gamma_l(s).unwrap() {
            for x in [0, 4, 8] {
                let g = AffineSemilinearMap { linear: phi.clone(), y0: s.vector(x) };
                let triple = decompose_triple(s, &g.to_bijection(s), false).unwrap();
                assert_eq!(triple.psi, FieldAut::IDENTITY);
                assert_eq!(triple.to_affine(), g);
            }
        }
    }

    #[test]
    fn decompose_rejects_non_affine() {
        let t = tau(3, 1, 2);
        let err = decompose_triple(t.space(), &Bijection::swap(9, 0, 1), false).unwrap_err();
        assert!(matches!(err, RigidityError::NotSemiaffine(_)));
        let s = VectorSpace::new(FiniteField::new(2, 1).unwrap(), 2).unwrap();
        // every bijection of F₂² is affine
        for theta in tau_preserving_bijections(&TauLattice::new(&s).unwrap()).unwrap() {
            assert!(decompose_triple(&s, &theta, false).is_ok());
        }
    }

    #[test]
    fn theorem_b_on_f2_squared() {
        let r = theorem_b_group(&tau(2, 1, 2), 7).unwrap();
        assert_eq!(r.group_order, 48);
        assert_eq!(r.census, Some(24));
        assert!(r.pass, "{r:?}");
        assert!(r.complement_collapses_on_tau);
        assert_eq!(r.associativity_triples_checked, 24 * 24 * 24);
    }

    #[test]
    fn theorem_b_refuses_lines() {
        assert_eq!(theorem_b_group(&tau(2, 1, 1), 0).unwrap_err(), RigidityError::DimensionTooSmall(1));
        assert_eq!(theorem_b_group(&tau(5, 1, 1), 0).unwrap_err(), RigidityError::DimensionTooSmall(1));
    }

    #[test]
    fn theorem_a_trivial_and_complement() {
        let space = VectorSpace::new(FiniteField::new(2, 1).unwrap(), 2).unwrap();
        let sigma = SigmaLattice::new(4).unwrap();
        let t = TauLattice::new(&space).unwrap();
        let id = PlantedMap { map: AffineSemilinearMap::identity(2), uses_complement: false };
        let (keeps, triple) = round_trip_theorem_a(&sigma, &t, &id).unwrap();
        assert!(keeps);
        assert_eq!(triple.to_affine(), id.map);
        let m = Matrix::from_rows(vec![vec![1, 1], vec![0, 1]]).unwrap();
        let planted = PlantedMap {
            map: AffineSemilinearMap {
                linear: SemilinearMap::new(space.field(), FieldAut::IDENTITY, m).unwrap(),
                y0: vec![1, 0],
            },
            uses_complement: true,
        };
        let (_, triple) = round_trip_theorem_a(&sigma, &t, &planted).unwrap();
        assert!(triple.uses_complement);
        assert_eq!(triple.to_affine(), planted.map);
    }

    #[test]
    fn theorem_a_seeded() {
        let r = end_to_end_theorem_a(3, 20).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.sigma_size, 355);
        assert_eq!(r, end_to_end_theorem_a(3, 20).unwrap());
    }
}
