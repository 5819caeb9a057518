//! Instance generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use epw_core::exterior::{self, Multivector, SymmetricForm};
use epw_core::gm::{self, GmDataSet};
use epw_core::linalg;
use epw_core::num::{BigInt, BigRational};
use epw_core::rng::{self, Rng as SeededRng};
use epw_core::subspace::{self, LagrangianSubspace};
use epw_core::{projective, Field, PrimeField, Rationals};
use rand::Rng;

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn e(i: usize) -> Vec<BigRational> {
    (0..6).map(|j| q((i == j) as i64)).collect()
}

pub fn rng(seed: u64) -> SeededRng {
    rng::seeded(seed)
}

pub fn graph(seed: u64, height: i64) -> LagrangianSubspace<BigRational> {
    subspace::random_graph_lagrangian(&mut rng(seed), height)
}

pub fn graph_of(s: &[Vec<i64>]) -> LagrangianSubspace<BigRational> {
    let form = SymmetricForm::new(subspace::int_matrix(&Rationals, s)).unwrap();
    subspace::lagrangian_from_graph(&Rationals, &form).unwrap()
}

/// Whether A reduces to a Lagrangian with no decomposable 𝐅_p-points for
/// every listed prime.
pub fn decomposable_free(a: &LagrangianSubspace<BigRational>, primes: &[u64]) -> bool {
    primes.iter().all(|&p| {
        let fp = PrimeField::new(p).unwrap();
        match subspace::reduce_mod_p(a, &fp) {
            Ok(ap) => subspace::scan_decomposables(&fp, &ap, projective::DEFAULT_BUDGET).unwrap().is_empty(),
            Err(_) => false,
        }
    })
}

/// The first `count` seeds whose graph Lagrangian has empty decomposable
/// scans over 𝐅₂ and 𝐅₃.
pub fn generic_seeds(count: usize, height: i64) -> Vec<u64> {
    (0u64..).filter(|&s| decomposable_free(&graph(s, height), &[2, 3])).take(count).collect()
}

pub fn random_int_vec(r: &mut impl Rng, len: usize, height: i64) -> Vec<i64> {
    (0..len).map(|_| r.random_range(-height..=height)).collect()
}

pub fn random_covector(r: &mut impl Rng, height: i64) -> Vec<BigRational> {
    loop {
        let v = random_int_vec(r, 6, height);
        if v.iter().any(|&x| x != 0) {
            return v.into_iter().map(q).collect();
        }
    }
}

pub fn random_fp_vec(r: &mut impl Rng, p: u32, len: usize) -> Vec<u32> {
    (0..len).map(|_| r.random_range(0..p)).collect()
}

/// ℓ(v) by an independent route: v ⊗ A → Λ⁴V₆ has kernel A ∩ (v∧Λ²V₆)
/// because v∧ξ = 0 exactly for ξ ∈ v∧Λ²V₆.
pub fn multiplicity_oracle<F: Field>(f: &F, a: &LagrangianSubspace<F::Elem>, v: &[F::Elem]) -> usize {
    let vm = Multivector::vector(v).unwrap();
    let images: Vec<Vec<F::Elem>> = a
        .subspace()
        .rows()
        .iter()
        .map(|row| exterior::wedge(f, &vm, &Multivector::from_coeffs(3, row.clone()).unwrap()).unwrap().into_coeffs())
        .collect();
    10 - f.rank(&images)
}

/// det of the 10×10 pairing of A with the frame v∧eᵢ∧eⱼ (i < j, both ≠ 0).
fn frame_det(fp: &PrimeField, a: &LagrangianSubspace<u32>, v: &[u32]) -> u32 {
    let vm = Multivector::vector(v).unwrap();
    let mut cols = Vec::new();
    for i in 1..6 {
        for j in i + 1..6 {
            let eij = Multivector::basis(fp, &[i, j]).unwrap();
            cols.push(exterior::wedge(fp, &vm, &eij).unwrap().into_coeffs());
        }
    }
    let m: Vec<Vec<u32>> = a
        .subspace()
        .rows()
        .iter()
        .map(|row| cols.iter().map(|c| exterior::symplectic_coords(fp, row, c)).collect())
        .collect();
    linalg::det(fp, &m)
}

/// Points with v₀ = 1 and ℓ(v) ≥ 1, found as roots of the frame determinant
/// along random lines (its degree in t is at most 10).
pub fn points_on_y(fp: &PrimeField, a: &LagrangianSubspace<u32>, r: &mut impl Rng, count: usize) -> Vec<Vec<u32>> {
    let p = fp.modulus();
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < 50 * count + 100 {
        attempts += 1;
        let mut base = random_fp_vec(r, p, 6);
        base[0] = 1;
        let mut dir = random_fp_vec(r, p, 6);
        dir[0] = 0;
        let at = |t: u32| -> Vec<u32> { (0..6).map(|i| fp.add(&base[i], &fp.mul(&t, &dir[i]))).collect() };
        // Newton interpolation of the degree ≤ 10 polynomial at t = 0..=10
        let mut coef: Vec<u32> = (0..11).map(|t| frame_det(fp, a, &at(t))).collect();
        if coef.iter().all(|&x| x == 0) {
            continue;
        }
        for level in 1..11 {
            for k in (level..11).rev() {
                let num = fp.sub(&coef[k], &coef[k - 1]);
                coef[k] = fp.div(&num, &(level as u32)).unwrap();
            }
        }
        let eval = |t: u32| -> u32 {
            let mut acc = coef[10];
            for k in (0..10).rev() {
                acc = fp.add(&fp.mul(&acc, &fp.sub(&t, &(k as u32))), &coef[k]);
            }
            acc
        };
        if let Some(t) = (0..p).find(|&t| eval(t) == 0) {
            out.push(at(t));
        }
    }
    out
}

/// Random ordinary GM data of dimension n whose Lagrangian has no
/// decomposable points over 𝐅₃.
pub fn generic_gm(seed: u64, n: usize, height: i64) -> (GmDataSet<BigRational>, LagrangianSubspace<BigRational>) {
    for s in seed.. {
        let gm = gm::random_gm_data(&mut rng(s), n, height).unwrap();
        let a = gm::gm_to_lagrangian(&Rationals, &gm, &e(0)).unwrap();
        if decomposable_free(&a, &[3]) {
            return (gm, a);
        }
    }
    unreachable!()
}

pub fn reduce_gm(gm: &GmDataSet<BigRational>, p: u64) -> GmDataSet<u32> {
    gm.reduce_mod_p(&PrimeField::new(p).unwrap()).unwrap()
}
