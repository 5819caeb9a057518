//! Property tests for the algebraic invariants.

mod common;

use common::*;
use epw_core::exterior::{self, binomial, Multivector, SymmetricForm};
use epw_core::lattice::GramLattice;
use epw_core::num::BigInt;
use epw_core::subspace::{self, LagrangianSubspace, Subspace};
use epw_core::{epw, gm, Field, PrimeField, Rationals};
use proptest::prelude::*;

const P: u32 = 10007;

fn fp() -> PrimeField {
    PrimeField::new(P as u64).unwrap()
}

fn multivector(degree: usize) -> impl Strategy<Value = Multivector<u32>> {
    prop::collection::vec(0..P, binomial(6, degree))
        .prop_map(move |c| Multivector::from_coeffs(degree, c).unwrap())
}

fn covector() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..P, 6)
}

fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<u32>>> {
    prop::collection::vec(prop::collection::vec(0u32..5, cols), rows)
}

/// Determinant by cofactor expansion along the first row.
fn cofactor_det(m: &[Vec<i64>]) -> BigInt {
    if m.is_empty() {
        return BigInt::from(1);
    }
    let mut acc = BigInt::from(0);
    for j in 0..m.len() {
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
            .collect();
        let term = BigInt::from(m[0][j]) * cofactor_det(&minor);
        acc = if j % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

fn symmetric_i64(r: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(-4i64..=4, r * r).prop_map(move |v| {
        let mut m = vec![vec![0; r]; r];
        for i in 0..r {
            for j in i..r {
                m[i][j] = v[i * r + j];
                m[j][i] = v[i * r + j];
            }
        }
        m
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn contraction_obeys_leibniz(a in multivector(2), b in multivector(2), lambda in covector()) {
        let f = fp();
        let lhs = exterior::contract(&f, &lambda, &exterior::wedge(&f, &a, &b).unwrap()).unwrap();
        let left = exterior::wedge(&f, &exterior::contract(&f, &lambda, &a).unwrap(), &b).unwrap();
        let right = exterior::wedge(&f, &a, &exterior::contract(&f, &lambda, &b).unwrap()).unwrap();
        prop_assert_eq!(lhs, left.add(&f, &right).unwrap());
    }

    #[test]
    fn contraction_squares_to_zero(a in multivector(3), lambda in covector()) {
        let f = fp();
        let once = exterior::contract(&f, &lambda, &a).unwrap();
        prop_assert!(exterior::contract(&f, &lambda, &once).unwrap().is_zero(&f));
    }

    #[test]
    fn wedge_is_graded_commutative(a in multivector(1), b in multivector(3)) {
        let f = fp();
        let ab = exterior::wedge(&f, &a, &b).unwrap();
        prop_assert!(ab.add(&f, &exterior::wedge(&f, &b, &a).unwrap()).unwrap().is_zero(&f));
    }

    #[test]
    fn symplectic_form_is_skew(a in multivector(3), b in multivector(3)) {
        let f = fp();
        let ab = exterior::symplectic(&f, &a, &b).unwrap();
        let ba = exterior::symplectic(&f, &b, &a).unwrap();
        prop_assert_eq!(f.add(&ab, &ba), 0);
        prop_assert_eq!(ab, exterior::volume(&f, &exterior::wedge(&f, &a, &b).unwrap()).unwrap());
    }

    #[test]
    fn echelon_form_is_canonical(rows in small_matrix(4, 9), mix in small_matrix(4, 4)) {
        let f = fp();
        let s = Subspace::span(&f, rows.clone(), 9).unwrap();
        let mixed = epw_core::linalg::mat_mul(&f, &mix, &rows);
        let t = Subspace::span(&f, mixed, 9).unwrap();
        if f.rank(&mix) == 4 {
            prop_assert_eq!(&s, &t);
        } else {
            for row in t.rows() {
                prop_assert!(s.contains(&f, row));
            }
        }
    }

    #[test]
    fn annihilator_is_an_involution(rows in small_matrix(4, 9)) {
        let f = fp();
        let s = Subspace::span(&f, rows, 9).unwrap();
        let ann = s.annihilator(&f);
        prop_assert_eq!(ann.dim() + s.dim(), 9);
        prop_assert_eq!(ann.annihilator(&f), s);
    }

    #[test]
    fn decomposable_rank_takes_known_values(xi in multivector(3)) {
        let rank = exterior::decomposable_rank(&fp(), &xi).unwrap();
        prop_assert!([0, 3, 5, 6].contains(&rank), "rank {}", rank);
    }

    #[test]
    fn products_of_vectors_are_decomposable(u in multivector(1), v in multivector(1), w in multivector(1)) {
        let f = fp();
        let xi = exterior::wedge(&f, &exterior::wedge(&f, &u, &v).unwrap(), &w).unwrap();
        let rank = exterior::decomposable_rank(&f, &xi).unwrap();
        prop_assert_eq!(rank, if xi.is_zero(&f) { 0 } else { 3 });
    }

    #[test]
    fn graph_lagrangians_are_isotropic(s in symmetric_i64(10)) {
        let f = fp();
        let form = SymmetricForm::new(subspace::int_matrix(&f, &s)).unwrap();
        let a = subspace::lagrangian_from_graph(&f, &form).unwrap();
        let pairing = a.pairing_matrix(&f);
        prop_assert!(pairing.iter().flatten().all(|&x| x == 0));
        // the dual is Lagrangian and the duality is an involution
        let dual = epw::dual_lagrangian(&f, &a).unwrap();
        prop_assert_eq!(epw::dual_lagrangian(&f, &dual).unwrap(), a);
    }

    #[test]
    fn multiplicity_routes_agree(s in symmetric_i64(10), v in prop::collection::vec(0u32..5, 6)) {
        prop_assume!(v.iter().any(|&x| x != 0));
        let f = PrimeField::new(5).unwrap();
        let form = SymmetricForm::new(subspace::int_matrix(&f, &s)).unwrap();
        let a = subspace::lagrangian_from_graph(&f, &form).unwrap();
        let direct = epw::epw_multiplicity_direct(&f, &a, &v).unwrap();
        prop_assert_eq!(direct, epw::epw_multiplicity_symplectic(&f, &a, &v).unwrap());
        prop_assert_eq!(direct, multiplicity_oracle(&f, &a, &v));
    }

    #[test]
    fn kernel_law_over_prime_field(s in symmetric_i64(10), v in prop::collection::vec(0u32..P, 6)) {
        prop_assume!(v[0] != 0);
        let f = fp();
        let form = SymmetricForm::new(subspace::int_matrix(&f, &s)).unwrap();
        let a = subspace::lagrangian_from_graph(&f, &form).unwrap();
        let e0: Vec<u32> = vec![1, 0, 0, 0, 0, 0];
        let data = gm::lagrangian_to_gm(&f, &a, &e0).unwrap();
        prop_assert!(gm::verify_gm_axioms(&f, &data).passed());
        let (corank, ell) = gm::kernel_correspondence(&f, &data, &a, &v).unwrap();
        prop_assert_eq!(corank, ell);
        prop_assert_eq!(gm::gm_to_lagrangian(&f, &data, &e0).unwrap(), a);
    }

    #[test]
    fn discriminant_matches_cofactor_expansion(r in 1usize..=6, seed in any::<u64>()) {
        let mut rng = rng(seed);
        let m = subspace::random_symmetric_integer(&mut rng, r, 5);
        let lattice = GramLattice::new(m.clone()).unwrap();
        let det = cofactor_det(&m);
        prop_assert_eq!(lattice.discriminant(), det.clone());
        let sig = lattice.signature();
        prop_assert_eq!(sig.positive + sig.negative + sig.zero, r);
        prop_assert_eq!(sig.zero == 0, det != BigInt::from(0));
        if sig.zero == 0 {
            let sign_negative = det < BigInt::from(0);
            prop_assert_eq!(sig.negative % 2 == 1, sign_negative);
        }
    }
}

#[test]
fn symplectic_gram_is_unimodular() {
    let f = Rationals;
    let basis: Vec<Multivector<_>> =
        exterior::basis_tuples(3).iter().map(|t| Multivector::basis(&f, t).unwrap()).collect();
    let gram: Vec<Vec<_>> =
        basis.iter().map(|a| basis.iter().map(|b| exterior::symplectic(&f, a, b).unwrap()).collect()).collect();
    let det = epw_core::linalg::det(&f, &gram);
    assert_eq!(det, q(1));
    for (i, row) in gram.iter().enumerate() {
        assert_eq!(row.iter().filter(|x| **x != q(0)).count(), 1, "row {i}");
    }
}

#[test]
fn coordinate_lagrangian_is_self_dual_shape() {
    let f = Rationals;
    let a: LagrangianSubspace<_> = graph_of(&vec![vec![0; 10]; 10]);
    let dual = epw::dual_lagrangian(&f, &a).unwrap();
    assert_eq!(dual.subspace().dim(), 10);
    assert_eq!(epw::dual_lagrangian(&f, &dual).unwrap(), a);
}
