use std::collections::HashSet;

use proptest::prelude::*;

use sigmalab_core::hartmanis::{build_table, reconstruct_bijection};
use sigmalab_core::lattice::{enumerate_automorphisms, type_of, AtomProfile};
use sigmalab_core::topology::{atom, enumerate_topologies, sup_atoms, validate_topology};
use sigmalab_core::{Bijection, FinTopology, SigmaLattice, SubsetMask};

fn sigma(n: usize) -> Vec<FinTopology> {
    enumerate_topologies(n, false).unwrap().collect()
}

/// The join computed from open sets: the topology generated by both
/// families, closed under finite unions and intersections.
fn join_by_opens(a: &FinTopology, b: &FinTopology) -> Vec<SubsetMask> {
    let mut family: HashSet<SubsetMask> = a.opens().into_iter().chain(b.opens()).collect();
    loop {
        let current: Vec<SubsetMask> = family.iter().copied().collect();
        let mut grew = false;
        for &x in &current {
            for &y in &current {
                grew |= family.insert(x | y);
                grew |= family.insert(x & y);
            }
        }
        if !grew {
            let mut out: Vec<SubsetMask> = family.into_iter().collect();
            out.sort();
            return out;
        }
    }
}

fn sorted_opens(t: &FinTopology) -> Vec<SubsetMask> {
    let mut o = t.opens();
    o.sort();
    o
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn lattice_laws_on_sigma_four(i in 0usize..355, j in 0usize..355, k in 0usize..355) {
        let s = sigma(4);
        let (a, b, c) = (&s[i], &s[j], &s[k]);
        let ab = a.join(b).unwrap();
        let m = a.meet(b).unwrap();
        prop_assert_eq!(&ab, &b.join(a).unwrap());
        prop_assert_eq!(&m, &b.meet(a).unwrap());
        prop_assert_eq!(ab.join(c).unwrap(), a.join(&b.join(c).unwrap()).unwrap());
        prop_assert_eq!(m.meet(c).unwrap(), a.meet(&b.meet(c).unwrap()).unwrap());
        prop_assert_eq!(&a.join(&m).unwrap(), a);
        prop_assert_eq!(&a.meet(&ab).unwrap(), a);
        prop_assert!(a.is_weaker_or_equal(&ab) && b.is_weaker_or_equal(&ab));
        prop_assert!(m.is_weaker_or_equal(a) && m.is_weaker_or_equal(b));
        prop_assert_eq!(sorted_opens(&ab), join_by_opens(a, b));
    }

    #[test]
    fn meet_is_the_common_opens(i in 0usize..355, j in 0usize..355) {
        let s = sigma(4);
        let common: HashSet<SubsetMask> = s[i].opens().into_iter().collect::<HashSet<_>>()
            .intersection(&s[j].opens().into_iter().collect()).copied().collect();
        let mut common: Vec<SubsetMask> = common.into_iter().collect();
        common.sort();
        prop_assert_eq!(sorted_opens(&s[i].meet(&s[j]).unwrap()), common);
    }

    #[test]
    fn pushforward_and_complement_are_order_maps(i in 0usize..355, j in 0usize..355, perm in Just((0..4).collect::<Vec<usize>>()).prop_shuffle()) {
        let s = sigma(4);
        let theta = Bijection::new(perm).unwrap();
        let (a, b) = (&s[i], &s[j]);
        let pa = a.pushforward(&theta).unwrap();
        let pb = b.pushforward(&theta).unwrap();
        prop_assert_eq!(a.is_weaker_or_equal(b), pa.is_weaker_or_equal(&pb));
        prop_assert_eq!(a.is_weaker_or_equal(b), a.complement_map().is_weaker_or_equal(&b.complement_map()));
        prop_assert_eq!(&pa.pullback(&theta).unwrap(), a);
        prop_assert_eq!(&a.complement_map().complement_map(), a);
    }
}

#[test]
fn every_topology_is_a_join_of_atoms_up_to_five() {
    for n in 2..=5 {
        for t in enumerate_topologies(n, false).unwrap() {
            let atoms: Vec<FinTopology> = (1..(1u128 << n) - 1)
                .map(SubsetMask)
                .filter(|&d| t.is_open(d))
                .map(|d| atom(d, n).unwrap())
                .collect();
            assert_eq!(sup_atoms(n, &atoms).unwrap(), t);
        }
    }
}

#[test]
fn enumerated_topologies_pass_the_open_set_validator() {
    for n in 1..=4 {
        for t in enumerate_topologies(n, false).unwrap() {
            assert_eq!(validate_topology(n, &t.opens()).unwrap(), t);
        }
    }
}

#[test]
fn closed_form_type_matches_the_order_on_sigma_four() {
    let sigma = SigmaLattice::new(4).unwrap();
    let lattice = sigma.lattice().unwrap();
    let atoms = lattice.atoms();
    assert_eq!(atoms.len(), 14);
    for &p in &atoms {
        for &q in &atoms {
            if p == q {
                continue;
            }
            let ap = AtomProfile::new(sigma.get(p).atom_set().unwrap(), 4).unwrap();
            let aq = AtomProfile::new(sigma.get(q).atom_set().unwrap(), 4).unwrap();
            assert_eq!(lattice.atom_type(p, q), type_of(&ap, &aq).unwrap() as usize);
        }
    }
}

#[test]
fn automorphisms_of_sigma_are_pushforwards_and_their_complements() {
    for n in [3, 4] {
        let sigma = SigmaLattice::new(n).unwrap();
        let found: HashSet<Vec<usize>> = enumerate_automorphisms(&sigma.lattice().unwrap())
            .unwrap()
            .into_iter()
            .map(|t| t.map)
            .collect();
        let mut expected = HashSet::new();
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            let theta = Bijection::new(perm.clone()).unwrap();
            for flag in [false, true] {
                expected.insert(build_table(&sigma, &theta, flag).unwrap().map);
            }
            let Some(i) = perm.windows(2).rposition(|w| w[0] < w[1]) else { break };
            let j = perm.iter().rposition(|&x| x > perm[i]).unwrap();
            perm.swap(i, j);
            perm[i + 1..].reverse();
        }
        assert_eq!(found, expected, "n = {n}");
    }
}

#[test]
fn reconstruction_on_sigma_five_sample() {
    let sigma = SigmaLattice::new(5).unwrap();
    for (image, flag) in [
        (vec![0, 1, 2, 3, 4], false),
        (vec![4, 3, 2, 1, 0], true),
        (vec![1, 2, 3, 4, 0], false),
        (vec![2, 0, 4, 1, 3], true),
    ] {
        let theta = Bijection::new(image).unwrap();
        let r = reconstruct_bijection(&build_table(&sigma, &theta, flag).unwrap(), &sigma).unwrap();
        assert_eq!((r.theta, r.uses_complement), (theta, flag));
    }
}
