mod common;

use common::*;
use epw_core::epw;
use epw_core::error::Error;
use epw_core::exterior::{self, Multivector};
use epw_core::num::BigRational;
use epw_core::poly::{self, MultivariatePolynomial};
use epw_core::subspace::{self, LagrangianSubspace};
use epw_core::{gm, PrimeField, Rationals};

fn diagonal(entries: &[i64]) -> Vec<Vec<i64>> {
    (0..10).map(|i| (0..10).map(|j| if i == j { entries[i] } else { 0 }).collect()).collect()
}

/// det M(x₀ + t·d) on chart 0, as a polynomial in t, by fraction-free
/// elimination over 𝐐[t].
fn chart_det_on_line(a: &LagrangianSubspace<BigRational>, x0: &[BigRational], d: &[BigRational]) -> MultivariatePolynomial {
    let f = Rationals;
    let t = [0u8];
    let cols: Vec<Vec<usize>> = exterior::basis_tuples(2).into_iter().filter(|p| p[0] > 0).collect();
    let pair = |k: &[BigRational], m: usize, col: &[usize]| -> BigRational {
        match Multivector::basis(&f, &[m, col[0], col[1]]) {
            Ok(e) => exterior::symplectic_coords(&f, k, e.coeffs()),
            Err(_) => q(0),
        }
    };
    let matrix: Vec<Vec<MultivariatePolynomial>> = a
        .subspace()
        .rows()
        .iter()
        .map(|row| {
            cols.iter()
                .map(|col| {
                    let mut constant = pair(row, 0, col);
                    let mut slope = q(0);
                    for m in 1..6 {
                        let c = pair(row, m, col);
                        constant += &c * &x0[m - 1];
                        slope += &c * &d[m - 1];
                    }
                    poly::affine(&t, constant, &[slope])
                })
                .collect()
        })
        .collect();
    poly::det_rational(&matrix, &t)
}

#[test]
fn chart_sextic_agrees_with_polynomial_elimination() {
    let a = graph(generic_seeds(1, 9)[0], 9);
    let sextic = epw::chart_sextic(&a, 0).unwrap();
    let mut r = rng(3);
    for _ in 0..3 {
        let x0: Vec<BigRational> = random_int_vec(&mut r, 5, 5).into_iter().map(q).collect();
        let d: Vec<BigRational> = random_int_vec(&mut r, 5, 5).into_iter().map(q).collect();
        let line = chart_det_on_line(&a, &x0, &d);
        assert!(line.total_degree().unwrap_or(0) <= 6);
        for t in 0..12 {
            let x: Vec<BigRational> = x0.iter().zip(&d).map(|(a, b)| a + b * q(t)).collect();
            assert_eq!(line.eval(&[q(t)]).unwrap(), sextic.eval(&x).unwrap(), "t = {t}");
        }
    }
}

#[test]
fn charts_glue() {
    let a = graph(generic_seeds(1, 9)[0], 9);
    let h0 = epw::homogenized_chart_sextic(&a, 0).unwrap();
    let h1 = epw::homogenized_chart_sextic(&a, 1).unwrap();
    let ratio = h0.proportionality(&h1).expect("homogenized charts are proportional");
    let mut r = rng(8);
    let mut hits = 0;
    while hits < 50 {
        let v: Vec<BigRational> = random_int_vec(&mut r, 6, 7).into_iter().map(q).collect();
        let y1 = h1.eval(&v).unwrap();
        if y1 == q(0) {
            continue;
        }
        assert_eq!(h0.eval(&v).unwrap() / y1, ratio);
        hits += 1;
    }
}

#[test]
fn coordinate_lagrangian_sextic_vanishes_at_origin() {
    let a = graph_of(&vec![vec![0; 10]; 10]);
    assert_eq!(epw::epw_multiplicity(&Rationals, &a, &e(0)).unwrap(), 10);
    let sextic = epw::chart_sextic(&a, 0).unwrap();
    assert_eq!(sextic.eval(&vec![q(0); 5]).unwrap(), q(0));
    assert!(sextic.total_degree().unwrap_or(0) <= 6);
}

#[test]
fn multiplicity_examples() {
    let f = Rationals;
    let invertible = graph_of(&diagonal(&[1, 2, 3, 4, 5, 6, 7, 8, 9, 10]));
    assert_eq!(epw::epw_multiplicity_checked(&f, &invertible, &e(0)).unwrap(), 0);
    let corank_two = graph_of(&diagonal(&[0, 0, 3, 4, 5, 6, 7, 8, 9, 10]));
    assert_eq!(epw::epw_multiplicity_checked(&f, &corank_two, &e(0)).unwrap(), 2);
    assert!(matches!(epw::epw_multiplicity(&f, &corank_two, &vec![q(0); 6]), Err(Error::ZeroVector)));
}

#[test]
fn routes_agree_with_the_rank_oracle() {
    let fp = PrimeField::new(5).unwrap();
    let mut r = rng(12);
    for seed in 0..5 {
        let a = subspace::reduce_mod_p(&graph(seed, 9), &fp).unwrap();
        for _ in 0..40 {
            let v = random_fp_vec(&mut r, 5, 6);
            if v.iter().all(|&x| x == 0) {
                continue;
            }
            let d = epw::epw_multiplicity_direct(&fp, &a, &v).unwrap();
            assert_eq!(d, epw::epw_multiplicity_symplectic(&fp, &a, &v).unwrap());
            assert_eq!(d, multiplicity_oracle(&fp, &a, &v));
        }
    }
}

#[test]
fn discriminant_divisibility_for_each_n() {
    for n in [3usize, 4, 5] {
        let data = gm::random_gm_data(&mut rng(50 + n as u64), n, 3).unwrap();
        let cmp = epw::discriminant_sextic(&data).unwrap();
        assert_eq!(cmp.determinant.total_degree(), Some(n as u32 + 5));
        assert!(cmp.determinant.is_homogeneous());
        assert_eq!(cmp.quotient.total_degree(), Some(6));
        assert!(cmp.proportional(), "n = {n}");
    }
}

#[test]
fn dual_of_coordinate_lagrangian() {
    let f = Rationals;
    let a = graph_of(&vec![vec![0; 10]; 10]);
    let dual = epw::dual_lagrangian(&f, &a).unwrap();
    assert_eq!(dual.subspace().dim(), 10);
    // the annihilator of e₀∧Λ²V₅ is spanned by the dual vectors of Λ³V₅
    assert_eq!(dual.subspace().pivots(), &exterior::hyperplane_positions(3)[..]);
}

#[test]
fn scans_cover_projective_space() {
    let fp = PrimeField::new(3).unwrap();
    let a = subspace::reduce_mod_p(&graph(0, 9), &fp).unwrap();
    let report = epw::stratify_scan(&fp, &a, 1000).unwrap();
    assert_eq!(report.histogram.iter().sum::<u64>(), 364);
    assert_eq!(report.at_least(0), 364);
    assert!(matches!(epw::stratify_scan(&fp, &a, 100), Err(Error::BudgetExceeded { needed: 364, budget: 100 })));
}

#[test]
fn sextic_zero_set_over_a_small_field() {
    let fp = PrimeField::new(101).unwrap();
    let a = graph(generic_seeds(1, 9)[0], 9);
    let sextic = epw::chart_sextic(&a, 0).unwrap();
    let ap = subspace::reduce_mod_p(&a, &fp).unwrap();
    let mut r = rng(4);
    for v in points_on_y(&fp, &ap, &mut r, 20) {
        assert_eq!(sextic.eval_mod_p(&fp, &v[1..]).unwrap(), 0);
        assert!(epw::epw_multiplicity(&fp, &ap, &v).unwrap() >= 1);
    }
    for _ in 0..20 {
        let mut v = random_fp_vec(&mut r, 101, 6);
        v[0] = 1;
        let zero = sextic.eval_mod_p(&fp, &v[1..]).unwrap() == 0;
        assert_eq!(zero, epw::epw_multiplicity(&fp, &ap, &v).unwrap() >= 1);
    }
}
