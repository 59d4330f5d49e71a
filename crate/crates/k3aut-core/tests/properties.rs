//! Invariants of the lattice toolkit checked on random inputs against independent oracles.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use k3aut_core::arith::{self, ZMat, ZVec};
use k3aut_core::discform::discriminant_form;
use k3aut_core::enumeration::{box_radius, brute_force_box, short_vectors};
use k3aut_core::groups::{spanning_orbit_points, MatrixGroup};
use k3aut_core::k3::{AdeKind, AdeType};
use k3aut_core::lattice_core::{
    a_gram, direct_sum, gauss_reduce_binary, is_isometry, isometry_inverse, orthogonal_complement, IntegerLattice,
    SublatticeEmbedding,
};

fn square(n: usize, range: i64) -> impl Strategy<Value = ZMat> {
    proptest::collection::vec(proptest::collection::vec(-range..=range, n), n)
}

/// `−B·Bᵀ` for a random nonsingular `B`: a negative definite Gram matrix.
fn negative_definite(n: usize) -> impl Strategy<Value = ZMat> {
    square(n, 3)
        .prop_filter("nonsingular", |b| !arith::det_z(b).is_zero())
        .prop_map(|b| arith::neg_mat(&arith::mat_mul(&b, &arith::transpose(&b))))
}

/// `−2·B·Bᵀ`: a negative definite even Gram matrix.
fn negative_even(n: usize) -> impl Strategy<Value = ZMat> {
    negative_definite(n).prop_map(|g| g.iter().map(|r| r.iter().map(|x| 2 * x).collect()).collect())
}

fn reflection(gram: &ZMat, root: &[i64]) -> ZMat {
    // v ↦ v + ⟨v,r⟩·r for a root of norm −2, as a matrix on row vectors
    (0..gram.len())
        .map(|i| {
            let mut e = vec![0i64; gram.len()];
            e[i] = 1;
            arith::add_vec(&e, &arith::scale_vec(root, arith::bilinear(gram, &e, root)))
        })
        .collect()
}

fn in_row_lattice(basis: &ZMat, v: &[i64]) -> bool {
    arith::solve_left_integer(basis, v).is_some()
}

fn ade_type() -> impl Strategy<Value = AdeType> {
    let part = prop_oneof![
        (1usize..=19).prop_map(|r| (AdeKind::A, r)),
        (4usize..=19).prop_map(|r| (AdeKind::D, r)),
        (6usize..=8).prop_map(|r| (AdeKind::E, r)),
    ];
    proptest::collection::vec(part, 0..5).prop_map(AdeType::new)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn smith_form_diagonalises_with_unimodular_transforms(m in square(4, 6)) {
        let s = arith::smith(&m);
        prop_assert_eq!(arith::det_z(&s.u).abs(), BigInt::one());
        prop_assert_eq!(arith::det_z(&s.v).abs(), BigInt::one());
        let d = arith::mat_mul(&arith::mat_mul(&s.u, &m), &s.v);
        for (i, row) in d.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if i == j {
                    prop_assert_eq!(BigInt::from(*x), s.diag[i].clone());
                } else {
                    prop_assert_eq!(*x, 0);
                }
            }
        }
        for w in s.diag.windows(2) {
            prop_assert!(w[0].is_zero() && w[1].is_zero() || !w[0].is_zero() && (&w[1] % &w[0]).is_zero());
        }
        let det: BigInt = s.diag.iter().product();
        prop_assert_eq!(det, arith::det_z(&m).abs());
    }

    #[test]
    fn hermite_form_spans_the_same_row_lattice(m in square(3, 8)) {
        let h = arith::hnf_rows(&m);
        let h: ZMat = h.into_iter().filter(|r| !arith::is_zero_vec(r)).collect();
        prop_assert_eq!(h.len(), arith::z_rank(&m));
        for r in &m {
            prop_assert!(in_row_lattice(&h, r));
        }
        for r in &h {
            prop_assert!(in_row_lattice(&m, r));
        }
    }

    #[test]
    fn lll_transform_is_unimodular_and_preserves_the_form(g in negative_definite(4)) {
        let p = arith::neg_mat(&g);
        let t = arith::lll_gram(&p);
        prop_assert_eq!(arith::det_z(&t).abs(), BigInt::one());
        let reduced = arith::gram_of(&p, &t);
        prop_assert_eq!(arith::det_z(&reduced), arith::det_z(&p));
        // the LLL bound |b₁|² ≤ 2^(n−1)·λ₁², with λ₁ from the box oracle
        let l = IntegerLattice::new(p.clone()).unwrap();
        let lambda = (1..).find(|&d| !short_vectors(&l.negated(), -d).unwrap().is_empty()).unwrap();
        prop_assert!(reduced[0][0] <= 8 * lambda);
    }

    #[test]
    fn discriminant_group_has_order_det(g in negative_even(3)) {
        let l = IntegerLattice::new(g).unwrap();
        let d = discriminant_form(&l).unwrap();
        prop_assert_eq!(BigInt::from(d.form.order()), l.det().abs());
        prop_assert!(d.form.is_consistent());
    }

    #[test]
    fn short_vectors_match_the_box_oracle(g in negative_definite(3), d in 1i64..8) {
        let l = IntegerLattice::new(g.clone()).unwrap();
        let fast = short_vectors(&l, -d).unwrap();
        let slow = brute_force_box(&g, box_radius(&g, d), |x| l.norm(x) == -d);
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn root_reflections_are_involutive_isometries(g in negative_definite(3)) {
        let l = IntegerLattice::new(g.clone()).unwrap();
        for r in short_vectors(&l, -2).unwrap() {
            let s = reflection(&g, &r);
            prop_assert!(is_isometry(&g, &s));
            prop_assert_eq!(arith::mat_mul(&s, &s), arith::identity(3));
            prop_assert_eq!(isometry_inverse(&s), s.clone());
            prop_assert_eq!(arith::vec_mat(&r, &s), arith::neg_vec(&r));
        }
    }

    #[test]
    fn binary_reduction_keeps_the_determinant(a in 1i64..40, b in -40i64..40, c in 1i64..40) {
        prop_assume!(a * c - b * b > 0);
        let r = gauss_reduce_binary(&[[-a, b], [b, -c]]).unwrap();
        prop_assert_eq!(r[0][0] * r[1][1] - r[0][1] * r[1][0], a * c - b * b);
        prop_assert!(2 * r[0][1].abs() <= -r[0][0] && r[0][0] >= r[1][1]);
    }

    #[test]
    fn ade_labels_round_trip(t in ade_type()) {
        prop_assert_eq!(AdeType::parse(&t.to_string()), Some(t));
    }

    #[test]
    fn orthogonal_complement_is_orthogonal_and_complementary(g in negative_definite(2), h in negative_definite(2)) {
        let ambient = IntegerLattice::new(direct_sum(&[g, h])).unwrap();
        let first: ZMat = vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0]];
        let emb = SublatticeEmbedding::new(ambient.clone(), first.clone()).unwrap();
        let perp = orthogonal_complement(&emb).unwrap();
        prop_assert_eq!(perp.basis_rows.len(), 2);
        prop_assert!(perp.is_primitive());
        for u in &first {
            for v in &perp.basis_rows {
                prop_assert_eq!(ambient.pairing(u, v), 0);
            }
        }
    }
}

#[test]
fn permutation_group_oracle_for_the_alternating_group() {
    let perm = |p: [usize; 6]| -> ZMat { (0..6).map(|i| (0..6).map(|j| i64::from(p[i] == j)).collect()).collect() };
    let gens = [perm([1, 2, 0, 3, 4, 5]), perm([0, 2, 3, 4, 5, 1])];
    let g = MatrixGroup::generate(&gens, &spanning_orbit_points(&gens, 6), 6).unwrap();
    assert_eq!(g.order(), 360);
    let classes = g.conjugacy_classes();
    let sizes: Vec<(usize, usize)> = classes.iter().map(|c| (g.element_order(c[0]), c.len())).collect();
    let mut sizes = sizes;
    sizes.sort();
    assert_eq!(sizes, [(1, 1), (2, 45), (3, 40), (3, 40), (4, 90), (5, 72), (5, 72)]);
    assert_eq!(g.center().len(), 1);
}

#[test]
fn weyl_group_of_a3_has_order_24() {
    let gram = a_gram(3);
    let l = IntegerLattice::new(gram.clone()).unwrap();
    let roots: Vec<ZVec> = short_vectors(&l, -2).unwrap();
    assert_eq!(roots.len(), 12);
    let simple: Vec<ZMat> = (0..3)
        .map(|i| {
            let mut e = vec![0i64; 3];
            e[i] = 1;
            reflection(&gram, &e)
        })
        .collect();
    let g = MatrixGroup::generate(&simple, &roots, 3).unwrap();
    assert_eq!(g.order(), 24);
    assert!(g.elements().iter().all(|m| is_isometry(&gram, m)));
}
