//! EPW strata: multiplicities ℓ(v) = dim A ∩ (v∧Λ²V₆), the chart sextic, the
//! discriminant comparison with a GM data set, the dual Lagrangian, and the
//! stratification scan over a prime field.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::{self, basis_index, Multivector, DIM};
use crate::gm::{self, GmDataSet};
use crate::linalg::{self, Matrix};
use crate::poly::{self, MultivariatePolynomial, Polynomial};
use crate::projective;
use crate::scalars::{Field, PrimeField, Rationals};
use crate::subspace::{LagrangianSubspace, Subspace, LAGRANGIAN_DIM, TRIVECTOR_DIM};

/// The largest possible multiplicity, dim A.
pub const MAX_MULTIPLICITY: usize = LAGRANGIAN_DIM;

fn pairs() -> impl Iterator<Item = (usize, usize)> {
    (0..DIM).flat_map(|i| (i + 1..DIM).map(move |j| (i, j)))
}

fn check_vector<F: Field>(f: &F, v: &[F::Elem]) -> Result<()> {
    if v.len() != DIM {
        return Err(Error::DimensionMismatch { expected: DIM, found: v.len() });
    }
    if v.iter().all(|x| f.is_zero(x)) {
        return Err(Error::ZeroVector);
    }
    Ok(())
}

/// The 15 trivectors v∧eᵢ∧eⱼ, which span F_v = v∧Λ²V₆.
fn fv_spanning_set<F: Field>(f: &F, v: &[F::Elem]) -> Vec<Vec<F::Elem>> {
    pairs()
        .map(|(i, j)| {
            let mut out = vec![f.zero(); TRIVECTOR_DIM];
            for (m, c) in v.iter().enumerate() {
                if m == i || m == j || f.is_zero(c) {
                    continue;
                }
                // sign of sorting (m, i, j)
                let negative = (m > i) != (m > j);
                let pos = basis_index((1 << m) | (1 << i) | (1 << j));
                out[pos] = if negative { f.neg(c) } else { c.clone() };
            }
            out
        })
        .collect()
}

/// ℓ(v) as the dimension of the intersection A ∩ F_v.
pub fn epw_multiplicity_direct<F: Field>(f: &F, a: &LagrangianSubspace<F::Elem>, v: &[F::Elem]) -> Result<usize> {
    check_vector(f, v)?;
    let fv = Subspace::span(f, fv_spanning_set(f, v), TRIVECTOR_DIM)?;
    Ok(a.subspace().intersect(f, &fv)?.dim())
}

/// ℓ(v) as 10 − rank of the pairing between A and the spanning set of F_v.
/// Since F_v is Lagrangian, A ∩ F_v is the kernel of A → F_v∨.
pub fn epw_multiplicity_symplectic<F: Field>(f: &F, a: &LagrangianSubspace<F::Elem>, v: &[F::Elem]) -> Result<usize> {
    check_vector(f, v)?;
    let span = fv_spanning_set(f, v);
    let m: Matrix<F::Elem> = a
        .subspace()
        .rows()
        .iter()
        .map(|row| span.iter().map(|x| exterior::symplectic_coords(f, row, x)).collect())
        .collect();
    Ok(LAGRANGIAN_DIM - f.rank(&m))
}

pub fn epw_multiplicity<F: Field>(f: &F, a: &LagrangianSubspace<F::Elem>, v: &[F::Elem]) -> Result<usize> {
    epw_multiplicity_symplectic(f, a, v)
}

/// Both routes; disagreement is an error.
pub fn epw_multiplicity_checked<F: Field>(f: &F, a: &LagrangianSubspace<F::Elem>, v: &[F::Elem]) -> Result<usize> {
    let d = epw_multiplicity_direct(f, a, v)?;
    let s = epw_multiplicity_symplectic(f, a, v)?;
    if d != s {
        return Err(Error::InconsistentData(format!("multiplicity routes disagree: {d} vs {s}")));
    }
    Ok(d)
}

/// Variable labels of the chart v_c = 1.
pub fn chart_vars(chart: usize) -> Vec<u8> {
    (0..DIM as u8).filter(|&i| i as usize != chart).collect()
}

fn integer_rows(rows: &[Vec<BigRational>]) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut scale = BigInt::one();
    let ints = rows
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            scale *= &l;
            row.iter().map(|c| c.numer() * (&l / c.denom())).collect()
        })
        .collect();
    (ints, scale)
}

/// det M(x) with M(x)_{k,(ij)} = ω(a_k, v(x)∧eᵢ∧eⱼ), v(x) = e_c + Σ xᵢeᵢ,
/// over the ten pairs i < j avoiding c and the echelon basis a_k of A.
///
/// Each variable occurs in six of the ten columns, so the determinant has
/// total degree at most 10; it is recovered exactly from integer values on the
/// degree-10 simplex and must come out of degree at most 6.
pub fn chart_sextic(a: &LagrangianSubspace<BigRational>, chart: usize) -> Result<MultivariatePolynomial> {
    if chart >= DIM {
        return Err(Error::OutOfRange(format!("chart {chart} not in 0..6")));
    }
    let f = Rationals;
    let (rows, scale) = integer_rows(a.subspace().rows());
    let vars = chart_vars(chart);
    let cols: Vec<(usize, usize)> = pairs().filter(|&(i, j)| i != chart && j != chart).collect();
    // coef[k][col][m] = ω(a_k, e_m∧eᵢ∧eⱼ)
    let coef: Vec<Vec<Vec<BigInt>>> = rows
        .iter()
        .map(|row| {
            let row_q: Vec<BigRational> = row.iter().map(|c| BigRational::from_integer(c.clone())).collect();
            cols.iter()
                .map(|&(i, j)| {
                    (0..DIM)
                        .map(|m| {
                            let Ok(t) = Multivector::basis(&f, &[m, i, j]) else {
                                return BigInt::zero();
                            };
                            exterior::symplectic_coords(&f, &row_q, t.coeffs()).to_integer()
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let scale_q = BigRational::from_integer(scale);
    let p = poly::interpolate_simplex(&vars, 10, |x| {
        let m: Vec<Vec<BigInt>> = coef
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| {
                        let mut s = c[chart].clone();
                        for (slot, &label) in vars.iter().enumerate() {
                            s += &c[label as usize] * x[slot];
                        }
                        s
                    })
                    .collect()
            })
            .collect();
        BigRational::from_integer(linalg::bareiss_det(&m)) / &scale_q
    });
    if p.total_degree().is_some_and(|d| d > 6) {
        return Err(Error::InconsistentData(format!(
            "chart determinant has degree {} > 6; A is not Lagrangian",
            p.total_degree().unwrap_or(0)
        )));
    }
    Ok(p)
}

/// v_c⁶ · P(v / v_c) in the variables v₀..v₅.
pub fn homogenized_chart_sextic(a: &LagrangianSubspace<BigRational>, chart: usize) -> Result<MultivariatePolynomial> {
    chart_sextic(a, chart)?.homogenize(chart as u8, chart, 6)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantComparison {
    /// det(Σ vᵢ 𝐪(eᵢ)), homogeneous of degree n + 5.
    pub determinant: MultivariatePolynomial,
    /// determinant / λ^{n−1}.
    pub quotient: MultivariatePolynomial,
    /// Homogenized chart sextic of the associated Lagrangian.
    pub sextic: MultivariatePolynomial,
    pub chart: usize,
    /// c with quotient = c · sextic.
    pub ratio: Option<BigRational>,
}

impl DiscriminantComparison {
    pub fn proportional(&self) -> bool {
        self.ratio.is_some()
    }
}

/// det(𝐪(v)) as a homogeneous polynomial in v₀..v₅.
pub fn discriminant_determinant(gm: &GmDataSet<BigRational>) -> Result<MultivariatePolynomial> {
    let m = gm.w().dim() as u32;
    let all_rows: Vec<Vec<BigRational>> = gm.forms().iter().flat_map(|s| s.matrix().iter().cloned()).collect();
    let l = all_rows.iter().flatten().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<Vec<Vec<BigInt>>> = gm
        .forms()
        .iter()
        .map(|s| s.matrix().iter().map(|r| r.iter().map(|c| c.numer() * (&l / c.denom())).collect()).collect())
        .collect();
    let denom = BigRational::from_integer(l.pow(m));
    let vars: Vec<u8> = (1..DIM as u8).collect();
    // dehomogenize at v₀ = 1; the determinant is homogeneous so this loses nothing
    let dehom = poly::interpolate_simplex(&vars, m, |x| {
        let mat: Vec<Vec<BigInt>> = (0..m as usize)
            .map(|r| {
                (0..m as usize)
                    .map(|c| {
                        let mut s = ints[0][r][c].clone();
                        for (i, xi) in x.iter().enumerate() {
                            s += &ints[i + 1][r][c] * *xi;
                        }
                        s
                    })
                    .collect()
            })
            .collect();
        BigRational::from_integer(linalg::bareiss_det(&mat)) / &denom
    });
    dehom.homogenize(0, 0, m)
}

/// Compares det 𝐪(v) / λ^{n−1} with the chart sextic of A = gm_to_lagrangian(gm).
pub fn discriminant_sextic(gm: &GmDataSet<BigRational>) -> Result<DiscriminantComparison> {
    let f = Rationals;
    let n = gm.n().ok_or_else(|| Error::Degenerate(format!("dim W = {}", gm.w().dim())))?;
    let vars: Vec<u8> = (0..DIM as u8).collect();
    let determinant = discriminant_determinant(gm)?;
    if determinant.is_zero() {
        return Err(Error::Degenerate("det q(v) vanishes identically".into()));
    }
    let lambda = poly::affine(&vars, BigRational::zero(), gm.hyperplane().lambda());
    let quotient = determinant.div_exact(&lambda.pow(n as u32 - 1))?;
    let a = gm::gm_to_lagrangian(&f, gm, &gm.hyperplane().default_v0(&f))?;
    let mut last = None;
    for chart in 0..DIM {
        let sextic = homogenized_chart_sextic(&a, chart)?;
        if !sextic.is_zero() {
            let ratio = quotient.proportionality(&sextic);
            return Ok(DiscriminantComparison { determinant, quotient, sextic, chart, ratio });
        }
        last = Some(sextic);
    }
    let sextic = last.unwrap_or_else(|| Polynomial::zero(&vars));
    Ok(DiscriminantComparison { determinant, quotient, sextic, chart: 0, ratio: None })
}

/// A^⊥ ⊆ Λ³V₆∨, in the dual basis, certified Lagrangian for the dual form.
pub fn dual_lagrangian<F: Field>(f: &F, a: &LagrangianSubspace<F::Elem>) -> Result<LagrangianSubspace<F::Elem>> {
    LagrangianSubspace::certify(f, a.subspace().annihilator(f))
}

/// dim A ∩ Λ³(ker λ).
pub fn hyperplane_intersection_dim<F: Field>(f: &F, a: &LagrangianSubspace<F::Elem>, lambda: &[F::Elem]) -> Result<usize> {
    let l3 = gm::trivectors_of_hyperplane(f, lambda)?;
    Ok(a.subspace().intersect(f, &l3)?.dim())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratificationReport {
    pub prime: u64,
    pub points: u64,
    /// histogram[k] = #{v ∈ 𝐏(V₆)(𝐅_p) : ℓ(v) = k}, k = 0..=10.
    pub histogram: Vec<u64>,
    pub oracle_disagreements: u64,
    pub first_disagreement: Option<Vec<u32>>,
    pub y_ge3_nonempty: bool,
    pub y_ge4_nonempty: bool,
    pub warnings: Vec<String>,
}

impl StratificationReport {
    /// #Y^{≥k}(𝐅_p).
    pub fn at_least(&self, k: usize) -> u64 {
        self.histogram.iter().skip(k).sum()
    }
}

/// Computes ℓ at every point of 𝐏⁵(𝐅_p) by both routes.
pub fn stratify_scan(fp: &PrimeField, a: &LagrangianSubspace<u32>, budget: u128) -> Result<StratificationReport> {
    let p = fp.modulus() as u64;
    let total = projective::check_budget(p, DIM, budget)?;
    let per_point = projective::scan_partitioned(total, |range| {
        range
            .map(|idx| {
                let v = projective::point_at(p, DIM, idx);
                let s = epw_multiplicity_symplectic(fp, a, &v).expect("nonzero point");
                let d = epw_multiplicity_direct(fp, a, &v).expect("nonzero point");
                (v, s, d)
            })
            .collect()
    });
    let mut histogram = vec![0u64; MAX_MULTIPLICITY + 1];
    let mut oracle_disagreements = 0;
    let mut first_disagreement = None;
    for (v, s, d) in per_point {
        histogram[s] += 1;
        if s != d {
            oracle_disagreements += 1;
            first_disagreement.get_or_insert(v);
        }
    }
    let mut report = StratificationReport {
        prime: p,
        points: total as u64,
        histogram,
        oracle_disagreements,
        first_disagreement,
        y_ge3_nonempty: false,
        y_ge4_nonempty: false,
        warnings: Vec::new(),
    };
    report.y_ge3_nonempty = report.at_least(3) > 0;
    report.y_ge4_nonempty = report.at_least(4) > 0;
    if report.y_ge3_nonempty {
        report.warnings.push(format!("Y^(>=3) has {} points over F_{p}", report.at_least(3)));
    }
    if report.oracle_disagreements > 0 {
        report.warnings.push(format!("{} points where the two multiplicity routes disagree", oracle_disagreements));
    }
    if report.histogram[0] == 0 {
        report.warnings.push("every point lies on Y_A".into());
    }
    Ok(report)
}
