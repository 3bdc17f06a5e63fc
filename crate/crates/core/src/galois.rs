//! Vector topologies on finite spaces and the order-reversing pair
//! `𝔖: τ → σ` (intersection of the open neighbourhoods of zero) and
//! `𝔗: σ → τ` (sets saturated by a subspace).

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linear::{LinearError, SpaceSpec, Subspace, VectorSpace};
use crate::topology::{enumerate_topologies, FinTopology, SubsetMask, TopologyError};

/// Census mode filters all of `Σ(n)`, so the space may have at most this
/// many vectors.
pub const MAX_CENSUS_POINTS: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaloisError {
    #[error("zero neighbourhood {0:#x} is not a subspace")]
    NotASubspace(u128),
    #[error("space {0:?} has too many vectors for this operation")]
    SpaceTooLarge(SpaceSpec),
    #[error("census over Σ({0}) exceeds the budget")]
    BudgetExceeded(usize),
    #[error("topology lives on {got} points, the space has {expected}")]
    GroundMismatch { expected: usize, got: usize },
    #[error("topology is not a vector topology")]
    NotAVectorTopology,
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Linear(#[from] LinearError),
}

fn require_masks(space: &VectorSpace) -> Result<(), GaloisError> {
    if space.fits_mask() {
        Ok(())
    } else {
        Err(GaloisError::SpaceTooLarge(space.spec()))
    }
}

fn check_ground(space: &VectorSpace, t: &FinTopology) -> Result<(), GaloisError> {
    if t.n() == space.size() {
        Ok(())
    } else {
        Err(GaloisError::GroundMismatch { expected: space.size(), got: t.n() })
    }
}

/// A topology on the vectors of a space that makes addition and scalar
/// multiplication continuous.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorTopology {
    pub space: SpaceSpec,
    pub topology: FinTopology,
}

impl VectorTopology {
    pub fn new(space: &VectorSpace, topology: FinTopology) -> Result<Self, GaloisError> {
        check_ground(space, &topology)?;
        if !is_vector_topology(space, &topology) {
            return Err(GaloisError::NotAVectorTopology);
        }
        Ok(VectorTopology { space: space.spec(), topology })
    }
}

/// The strongest vector topology; on a finite space over a discrete field
/// it is the discrete topology.
pub fn t_max(space: &VectorSpace) -> Result<FinTopology, GaloisError> {
    require_masks(space)?;
    Ok(FinTopology::discrete(space.size()))
}

/// Opens are the unions of cosets `x + S`.
pub fn frak_t(space: &VectorSpace, s: &Subspace) -> Result<FinTopology, GaloisError> {
    require_masks(space)?;
    let base = space.subspace_mask(s);
    let nbhd = (0..space.size()).map(|x| space.translate_mask(base, x)).collect();
    Ok(FinTopology::from_neighborhoods(nbhd)?)
}

/// Intersection of all opens containing the zero vector, if it is a
/// subspace.
pub fn frak_s(space: &VectorSpace, t: &FinTopology) -> Result<Subspace, GaloisError> {
    require_masks(space)?;
    check_ground(space, t)?;
    let zero_nbhd = t.neighborhood(0);
    space
        .subspace_from_mask(zero_nbhd)
        .ok_or(GaloisError::NotASubspace(zero_nbhd.bits()))
}

/// Continuity of `+` and of every `x ↦ αx`, checked on minimal
/// neighbourhoods: `U(x) + U(y) ⊆ U(x+y)` and `α·U(x) ⊆ U(αx)`.
pub fn is_vector_topology(space: &VectorSpace, t: &FinTopology) -> bool {
    if t.n() != space.size() {
        return false;
    }
    let n = space.size();
    for x in 0..n {
        let ux = t.neighborhood(x);
        for y in 0..n {
            let target = t.neighborhood(space.add_idx(x, y));
            // early exit instead of forming the whole Minkowski sum
            for a in t.neighborhood(y).iter() {
                if !space.translate_mask(ux, a).is_subset_of(target) {
                    return false;
                }
            }
        }
        for alpha in space.field().elements() {
            if !space.scale_mask(alpha, ux).is_subset_of(t.neighborhood(space.scale_idx(alpha, x))) {
                return false;
            }
        }
    }
    true
}

/// The continuity definition read literally over the open sets: for every
/// open `W` and `x + y ∈ W` some opens `U ∋ x`, `V ∋ y` have `U + V ⊆ W`, and
/// for every scalar `α` with `αx ∈ W` some open `V ∋ x` has `αV ⊆ W`.
/// Exponential in the number of opens; for cross-checks on tiny spaces.
pub fn is_vector_topology_by_opens(space: &VectorSpace, t: &FinTopology) -> bool {
    if t.n() != space.size() {
        return false;
    }
    let opens = t.opens();
    let n = space.size();
    opens.iter().all(|&w| {
        (0..n).all(|x| {
            (0..n).all(|y| {
                !w.contains(space.add_idx(x, y))
                    || opens.iter().filter(|u| u.contains(x)).any(|&u| {
                        opens
                            .iter()
                            .filter(|v| v.contains(y))
                            .any(|&v| space.sum_mask(u, v).is_subset_of(w))
                    })
            }) && space.field().elements().all(|alpha| {
                !w.contains(space.scale_idx(alpha, x))
                    || opens
                        .iter()
                        .filter(|v| v.contains(x))
                        .any(|&v| space.scale_mask(alpha, v).is_subset_of(w))
            })
        })
    })
}

/// How [`enumerate_vector_topologies`] finds `τ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CensusMode {
    /// Filter every topology on the underlying set by continuity.
    Census,
    /// Take `𝔗(S)` for every subspace `S`.
    Image,
}

/// All vector topologies. Census mode keeps stream order of `Σ(n)`; image
/// mode follows the subspace enumeration order.
pub fn enumerate_vector_topologies(
    space: &VectorSpace,
    mode: CensusMode,
) -> Result<Vec<FinTopology>, GaloisError> {
    require_masks(space)?;
    match mode {
        CensusMode::Census => {
            if space.size() > MAX_CENSUS_POINTS {
                return Err(GaloisError::BudgetExceeded(space.size()));
            }
            Ok(enumerate_topologies(space.size(), false)?
                .filter(|t| is_vector_topology(space, t))
                .collect())
        }
        CensusMode::Image => space
            .enumerate_subspaces()
            .iter()
            .map(|s| frak_t(space, s))
            .collect(),
    }
}

/// Coset labelling of `X/S`: cosets numbered by their least vector index.
fn coset_labels(space: &VectorSpace, s: &Subspace) -> (Vec<usize>, usize) {
    let base = space.members(s);
    let mut label = vec![usize::MAX; space.size()];
    let mut next = 0;
    for x in 0..space.size() {
        if label[x] == usize::MAX {
            for &v in &base {
                label[space.add_idx(x, v)] = next;
            }
            next += 1;
        }
    }
    (label, next)
}

/// `π_*(T)` on the cosets of `S`, cosets numbered by least member.
pub fn quotient_pushforward(
    space: &VectorSpace,
    s: &Subspace,
    t: &FinTopology,
) -> Result<FinTopology, GaloisError> {
    require_masks(space)?;
    check_ground(space, t)?;
    let (label, cosets) = coset_labels(space, s);
    let preimage = |v: SubsetMask| {
        SubsetMask::from_points((0..space.size()).filter(|&x| v.contains(label[x])))
    };
    let nbhd = (0..cosets)
        .map(|c| {
            // smallest set of cosets containing c whose preimage is open
            let mut v = SubsetMask::singleton(c);
            loop {
                let mut grown = v;
                for x in preimage(v).iter() {
                    for y in t.neighborhood(x).iter() {
                        grown.insert(label[y]);
                    }
                }
                if grown == v {
                    break v;
                }
                v = grown;
            }
        })
        .collect();
    Ok(FinTopology::from_neighborhoods(nbhd)?)
}

/// Image-mode `τ` and `σ` side by side: `topologies[i] = 𝔗(subspaces[i])`.
#[derive(Clone, Debug)]
pub struct TauLattice {
    space: VectorSpace,
    subspaces: Vec<Subspace>,
    topologies: Vec<FinTopology>,
    subspace_index: HashMap<Subspace, usize>,
    topology_index: HashMap<FinTopology, usize>,
}

impl TauLattice {
    pub fn new(space: &VectorSpace) -> Result<Self, GaloisError> {
        let subspaces = space.enumerate_subspaces();
        let topologies = subspaces
            .iter()
            .map(|s| frak_t(space, s))
            .collect::<Result<Vec<_>, _>>()?;
        let subspace_index = subspaces.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let topology_index = topologies.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        Ok(TauLattice { space: space.clone(), subspaces, topologies, subspace_index, topology_index })
    }

    pub fn space(&self) -> &VectorSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.subspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subspaces.is_empty()
    }

    pub fn subspaces(&self) -> &[Subspace] {
        &self.subspaces
    }

    pub fn topologies(&self) -> &[FinTopology] {
        &self.topologies
    }

    pub fn subspace_index(&self, s: &Subspace) -> Option<usize> {
        self.subspace_index.get(s).copied()
    }

    pub fn topology_index(&self, t: &FinTopology) -> Option<usize> {
        self.topology_index.get(t).copied()
    }

    pub fn contains(&self, t: &FinTopology) -> bool {
        self.topology_index.contains_key(t)
    }
}

/// Outcome of the exhaustive checks of the `𝔖`/`𝔗` pair on one space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaloisReport {
    pub space: SpaceSpec,
    pub subspaces: usize,
    pub vector_topologies: usize,
    /// `None` when the space is too large for census mode.
    pub census_matches_image: Option<bool>,
    /// `𝔖∘𝔗 = id` on subspaces.
    pub s_after_t_is_identity: bool,
    /// `T ⊆ 𝔗∘𝔖(T)` for every vector topology.
    pub t_below_t_after_s: bool,
    /// Whether that inclusion is an equality everywhere.
    pub t_after_s_is_identity: bool,
    /// `𝔖(T) = {0}` iff `T` is discrete.
    pub zero_iff_discrete: bool,
    /// `S ⊆ 𝔖(T) ⇔ T ⊆ 𝔗(S)` for all pairs.
    pub adjunction: bool,
    /// Both maps reverse inclusion.
    pub antitone: bool,
    /// `C(T) = T` for every vector topology.
    pub complement_fixes_tau: bool,
    /// The meet in `Σ` of two vector topologies is again a vector topology.
    pub sigma_meet_stays_in_tau: bool,
    pub t_max_is_census_maximum: Option<bool>,
    pub pass: bool,
}

/// Runs every `𝔖`/`𝔗` property over all subspaces and vector topologies.
pub fn verify_galois(space: &VectorSpace) -> Result<GaloisReport, GaloisError> {
    let tau = TauLattice::new(space)?;
    let subs = tau.subspaces();
    let tops = tau.topologies();

    let (census_matches_image, t_max_is_census_maximum) = if space.size() <= MAX_CENSUS_POINTS {
        let census = enumerate_vector_topologies(space, CensusMode::Census)?;
        let a: HashSet<&FinTopology> = census.iter().collect();
        let b: HashSet<&FinTopology> = tops.iter().collect();
        let tm = t_max(space)?;
        let is_max = census.contains(&tm) && census.iter().all(|t| t.is_weaker_or_equal(&tm));
        (Some(a == b && census.len() == tops.len()), Some(is_max))
    } else {
        (None, None)
    };

    let s_after_t_is_identity = subs
        .iter()
        .zip(tops)
        .all(|(s, t)| frak_s(space, t).as_ref() == Ok(s));

    let mut t_below = true;
    let mut t_equal = true;
    let mut zero_iff_discrete = true;
    let mut complement_fixes_tau = true;
    let frak_s_of: Vec<Subspace> =
        tops.iter().map(|t| frak_s(space, t)).collect::<Result<_, _>>()?;
    for (t, s) in tops.iter().zip(&frak_s_of) {
        let back = frak_t(space, s)?;
        t_below &= t.is_weaker_or_equal(&back);
        t_equal &= *t == back;
        zero_iff_discrete &= (s.dim() == 0) == t.is_discrete();
        complement_fixes_tau &= t.complement_map() == *t;
    }

    let mut adjunction = true;
    let mut antitone = true;
    for (i, s) in subs.iter().enumerate() {
        for (j, t) in tops.iter().enumerate() {
            let lhs = space.is_subspace_of(s, &frak_s_of[j]);
            let rhs = t.is_weaker_or_equal(&tops[i]);
            adjunction &= lhs == rhs;
        }
        for (j, s2) in subs.iter().enumerate() {
            if space.is_subspace_of(s, s2) {
                antitone &= tops[j].is_weaker_or_equal(&tops[i]);
            }
            if tops[i].is_weaker_or_equal(&tops[j]) {
                antitone &= space.is_subspace_of(&frak_s_of[j], &frak_s_of[i]);
            }
        }
    }

    let mut sigma_meet_stays_in_tau = true;
    for a in tops {
        for b in tops {
            sigma_meet_stays_in_tau &= tau.contains(&a.meet(b)?);
        }
    }

    let pass = census_matches_image.unwrap_or(true)
        && t_max_is_census_maximum.unwrap_or(true)
        && s_after_t_is_identity
        && t_below
        && zero_iff_discrete
        && adjunction
        && antitone
        && complement_fixes_tau;
    Ok(GaloisReport {
        space: space.spec(),
        subspaces: subs.len(),
        vector_topologies: tops.len(),
        census_matches_image,
        s_after_t_is_identity,
        t_below_t_after_s: t_below,
        t_after_s_is_identity: t_equal,
        zero_iff_discrete,
        adjunction,
        antitone,
        complement_fixes_tau,
        sigma_meet_stays_in_tau,
        t_max_is_census_maximum,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FiniteField;
    use crate::topology::atom;

    fn space(p: u32, k: u32, d: usize) -> VectorSpace {
        VectorSpace::new(FiniteField::new(p, k).unwrap(), d).unwrap()
    }

    fn opens(t: &FinTopology) -> Vec<u128> {
        t.opens().into_iter().map(|m| m.bits()).collect()
    }

    #[test]
    fn t_max_examples() {
        assert_eq!(t_max(&space(2, 1, 2)).unwrap().open_count(), 16);
        assert_eq!(t_max(&space(3, 1, 1)).unwrap().open_count(), 8);
        let s = space(2, 1, 2);
        assert_eq!(frak_s(&s, &t_max(&s).unwrap()).unwrap(), s.zero_subspace());
    }

    #[test]
    fn frak_t_examples() {
        let s = space(2, 1, 2);
        let line = s.span(&[vec![1, 0]]);
        assert_eq!(opens(&frak_t(&s, &line).unwrap()), vec![0, 3, 12, 15]);
        assert!(frak_t(&s, &s.zero_subspace()).unwrap().is_discrete());
        assert!(frak_t(&s, &s.full_subspace()).unwrap().is_indiscrete());
    }

    #[test]
    fn frak_s_inverts_frak_t() {
        for (p, k, d) in [(2, 1, 2), (3, 1, 2), (2, 1, 3)] {
            let s = space(p, k, d);
            for sub in s.enumerate_subspaces() {
                assert_eq!(frak_s(&s, &frak_t(&s, &sub).unwrap()).unwrap(), sub);
            }
        }
    }

    #[test]
    fn zero_atom_is_not_a_vector_topology() {
        let s = space(2, 1, 2);
        let a = atom(SubsetMask(1), 4).unwrap();
        assert_eq!(frak_s(&s, &a).unwrap(), s.zero_subspace());
        assert!(!is_vector_topology(&s, &a));
        assert!(!is_vector_topology_by_opens(&s, &a));
        assert!(is_vector_topology(&s, &FinTopology::indiscrete(4)));
        assert!(VectorTopology::new(&s, a).is_err());
    }

    #[test]
    fn frak_s_rejects_non_subspace() {
        let s = space(2, 1, 2);
        let a = atom(SubsetMask(0b0011), 4).unwrap().join(&atom(SubsetMask(0b0101), 4).unwrap()).unwrap();
        // zero neighbourhood {0}: a subspace
        assert!(frak_s(&s, &a).is_ok());
        let b = atom(SubsetMask(0b0111), 4).unwrap();
        assert_eq!(frak_s(&s, &b), Err(GaloisError::NotASubspace(0b0111)));
    }

    #[test]
    fn census_and_image_modes() {
        let s = space(2, 1, 2);
        let census = enumerate_vector_topologies(&s, CensusMode::Census).unwrap();
        let image = enumerate_vector_topologies(&s, CensusMode::Image).unwrap();
        assert_eq!(census.len(), 5);
        let a: HashSet<_> = census.iter().collect();
        let b: HashSet<_> = image.iter().collect();
        assert_eq!(a, b);

        assert_eq!(enumerate_vector_topologies(&space(3, 1, 2), CensusMode::Image).unwrap().len(), 6);
        assert_eq!(enumerate_vector_topologies(&space(2, 1, 1), CensusMode::Census).unwrap().len(), 2);
        assert!(matches!(
            enumerate_vector_topologies(&space(3, 1, 2), CensusMode::Census),
            Err(GaloisError::BudgetExceeded(9))
        ));
    }

    #[test]
    fn continuity_checkers_agree_on_sigma_four() {
        let s = space(2, 1, 2);
        for t in enumerate_topologies(4, false).unwrap() {
            assert_eq!(is_vector_topology(&s, &t), is_vector_topology_by_opens(&s, &t));
        }
        let s = space(3, 1, 1);
        for t in enumerate_topologies(3, false).unwrap() {
            assert_eq!(is_vector_topology(&s, &t), is_vector_topology_by_opens(&s, &t));
        }
    }

    #[test]
    fn quotient_examples() {
        let s = space(2, 1, 2);
        let line = s.span(&[vec![1, 0]]);
        let q = quotient_pushforward(&s, &line, &t_max(&s).unwrap()).unwrap();
        assert!(q.is_discrete());
        assert_eq!(q.n(), 2);
        for sub in s.enumerate_subspaces() {
            let q = quotient_pushforward(&s, &sub, &frak_t(&s, &sub).unwrap()).unwrap();
            assert!(q.is_discrete());
        }
        let t = frak_t(&s, &line).unwrap();
        assert_eq!(quotient_pushforward(&s, &s.zero_subspace(), &t).unwrap(), t);
        let s3 = space(3, 1, 2);
        let l3 = s3.span(&[vec![1, 1]]);
        let t = frak_t(&s3, &s3.span(&[vec![1, 0]])).unwrap();
        // pushing a line topology to the quotient by a different line
        assert!(quotient_pushforward(&s3, &l3, &t).unwrap().is_indiscrete());
    }

    #[test]
    fn galois_reports_pass() {
        for (p, k, d) in [(2, 1, 2), (3, 1, 2), (2, 1, 3), (2, 1, 1), (5, 1, 1)] {
            let r = verify_galois(&space(p, k, d)).unwrap();
            assert!(r.pass, "{r:?}");
            assert!(r.t_after_s_is_identity);
            assert!(r.sigma_meet_stays_in_tau);
        }
    }

    #[test]
    fn vector_topology_json_shape() {
        let s = space(2, 1, 2);
        let vt = VectorTopology::new(&s, frak_t(&s, &s.span(&[vec![1, 0]])).unwrap()).unwrap();
        assert_eq!(
            serde_json::to_string(&vt).unwrap(),
            r#"{"space":{"p":2,"k":1,"dim":2},"topology":{"n":4,"opens":[0,3,12,15]}}"#
        );
    }
}
