use std::collections::HashSet;

use super::*;
use crate::field::SUPPORTED_FIELDS;

fn space(p: u32, k: u32, d: usize) -> VectorSpace {
    VectorSpace::new(FiniteField::new(p, k).unwrap(), d).unwrap()
}

/// Gaussian binomial `[d choose r]_q` from the product formula.
fn gaussian_binomial(q: u128, d: u32, r: u32) -> u128 {
    let num: u128 = (0..r).map(|i| q.pow(d - i) - 1).product();
    let den: u128 = (0..r).map(|i| q.pow(i + 1) - 1).product();
    num / den
}

#[test]
fn subspace_counts_match_gaussian_binomials() {
    let cases = [(2, 1, 2, 5), (2, 1, 3, 16), (2, 2, 3, 44), (3, 1, 2, 6)];
    for (p, k, d, total) in cases {
        let s = space(p, k, d);
        let subs = s.enumerate_subspaces();
        assert_eq!(subs.len(), total);
        let q = s.field().q() as u128;
        for r in 0..=d {
            let count = subs.iter().filter(|x| x.dim() == r).count() as u128;
            assert_eq!(count, gaussian_binomial(q, d as u32, r as u32));
        }
        // graded and unique
        assert!(subs.windows(2).all(|w| w[0].dim() <= w[1].dim()));
        let distinct: HashSet<&Subspace> = subs.iter().collect();
        assert_eq!(distinct.len(), subs.len());
    }
}

#[test]
fn span_is_canonical() {
    for (p, k) in SUPPORTED_FIELDS {
        let s = space(p, k, 2);
        for sub in s.enumerate_subspaces() {
            assert_eq!(s.span(sub.basis()), sub);
            let members: Vec<Vector> = s.members(&sub).into_iter().map(|i| s.vector(i)).collect();
            assert_eq!(s.span(&members), sub);
        }
    }
}

#[test]
fn sum_and_intersection_agree_with_member_sets() {
    let s = space(2, 2, 3);
    let subs = s.enumerate_subspaces();
    for a in &subs {
        for b in &subs {
            let ma: HashSet<usize> = s.members(a).into_iter().collect();
            let mb: HashSet<usize> = s.members(b).into_iter().collect();
            let meet: HashSet<usize> = ma.intersection(&mb).copied().collect();
            let got: HashSet<usize> = s.members(&s.intersect(a, b)).into_iter().collect();
            assert_eq!(got, meet);
            let sum: HashSet<usize> =
                ma.iter().flat_map(|&x| mb.iter().map(move |&y| (x, y))).map(|(x, y)| s.add_idx(x, y)).collect();
            let got: HashSet<usize> = s.members(&s.sum(a, b)).into_iter().collect();
            assert_eq!(got, sum);
        }
    }
}

#[test]
fn lines_in_f3_squared_sum_to_plane() {
    let s = space(3, 1, 2);
    let a = s.span(&[vec![1, 0]]);
    let b = s.span(&[vec![0, 1]]);
    assert_eq!(s.sum(&a, &b), s.full_subspace());
    assert_eq!(s.intersect(&a, &b), s.zero_subspace());
}

#[test]
fn element_index_golden_table() {
    let s = space(2, 1, 2);
    let table: Vec<Vector> = (0..4).map(|i| s.vector(i)).collect();
    assert_eq!(table, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]]);
    let s = space(3, 1, 2);
    assert_eq!(s.vector(5), vec![2, 1]);
    assert_eq!(s.index(&[2, 1]), 5);
    let s = space(2, 2, 2);
    // (ω, 1) has index 2 + 1·4
    assert_eq!(s.index(&[2, 1]), 6);
}

#[test]
fn frobenius_on_f4_squared() {
    let s = space(2, 2, 2);
    let f = s.field();
    let frob = AffineSemilinearMap::new(f, FieldAut::frobenius(1), Matrix::identity(2), vec![0, 0]).unwrap();
    assert_eq!(frob.apply(&s, &[2, 1]), vec![3, 1]);
    let id = AffineSemilinearMap::identity(2);
    for i in 0..s.size() {
        assert_eq!(id.apply(&s, &s.vector(i)), s.vector(i));
    }
}

#[test]
fn translations_compose_additively() {
    let s = space(3, 1, 2);
    let a = AffineSemilinearMap::translation(vec![1, 2]);
    let b = AffineSemilinearMap::translation(vec![2, 2]);
    assert_eq!(a.compose(&s, &b), AffineSemilinearMap::translation(vec![0, 1]));
}

#[test]
fn singular_matrix_rejected() {
    let f = FiniteField::new(2, 1).unwrap();
    let m = Matrix::from_rows(vec![vec![1, 1], vec![1, 1]]).unwrap();
    assert_eq!(SemilinearMap::new(&f, FieldAut::IDENTITY, m.clone()), Err(LinearError::SingularMatrix));
    assert_eq!(m.inverse(&f), Err(LinearError::SingularMatrix));
}

#[test]
fn group_orders() {
    assert_eq!(gl_order(2, 2), 6);
    assert_eq!(group_order_gamma_l(&space(2, 1, 2)), 6);
    assert_eq!(gl_order(3, 2), 48);
    assert_eq!(group_order_gamma_l(&space(2, 2, 2)), 360);
    for (p, k, d) in [(2, 1, 2), (3, 1, 2), (2, 2, 2), (2, 1, 3), (5, 1, 2)] {
        let s = space(p, k, d);
        let all = enumerate_gamma_l(&s).unwrap();
        assert_eq!(all.len() as u128, group_order_gamma_l(&s));
        let distinct: HashSet<&SemilinearMap> = all.iter().collect();
        assert_eq!(distinct.len(), all.len());
    }
    assert!(matches!(enumerate_gl(&space(3, 2, 3)), Err(LinearError::SizeExceeded(_))));
}

#[test]
fn semilinear_group_laws_on_f4_squared() {
    let s = space(2, 2, 2);
    let f = s.field();
    let all = enumerate_gamma_l(&s).unwrap();
    for (i, a) in all.iter().enumerate().step_by(7) {
        let b = &all[(i * 31 + 5) % all.len()];
        let ab = a.compose(f, b);
        let inv = a.invert(f).unwrap();
        for x in 0..s.size() {
            let v = s.vector(x);
            assert_eq!(ab.apply(f, &v), a.apply(f, &b.apply(f, &v)));
            assert_eq!(inv.apply(f, &a.apply(f, &v)), v);
            for alpha in f.elements() {
                assert_eq!(a.apply(f, &s.scale_vector(alpha, &v)), s.scale_vector(a.psi.apply(f, alpha), &a.apply(f, &v)));
            }
        }
    }
}

#[test]
fn semilinear_maps_preserve_dimension() {
    let s = space(2, 2, 3);
    let f = s.field();
    let m = Matrix::from_rows(vec![vec![2, 0, 0], vec![0, 1, 0], vec![1, 0, 1]]).unwrap();
    let phi = SemilinearMap::new(f, FieldAut::frobenius(1), m).unwrap();
    for sub in s.enumerate_subspaces() {
        assert_eq!(phi.image(&s, &sub).dim(), sub.dim());
    }
}

#[test]
fn affine_inverse_round_trip() {
    let s = space(3, 2, 2);
    let f = s.field();
    let m = Matrix::from_rows(vec![vec![4, 1], vec![0, 7]]).unwrap();
    let g = AffineSemilinearMap::new(f, FieldAut::frobenius(1), m, vec![5, 2]).unwrap();
    let inv = g.invert(&s).unwrap();
    assert_eq!(g.compose(&s, &inv), AffineSemilinearMap::identity(2));
    assert_eq!(inv.compose(&s, &g), AffineSemilinearMap::identity(2));
}

#[test]
fn subspace_json_shape() {
    let s = space(2, 1, 2);
    let line = s.span(&[vec![1, 1]]);
    let text = serde_json::to_string(&line).unwrap();
    assert_eq!(text, r#"{"dim":1,"basis":[[1,1]]}"#);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(Subspace::from_json(&s, &value).unwrap(), line);
    let bad: serde_json::Value = serde_json::from_str(r#"{"dim":1,"basis":[[0,1],[0,1]]}"#).unwrap();
    assert!(Subspace::from_json(&s, &bad).is_err());
}
