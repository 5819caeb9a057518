//! Linear subspaces in canonical (reduced row-echelon) form, Lagrangian
//! subspaces of Λ³V₆ and decomposable-vector scans.

use num_rational::BigRational;
use rand::Rng;

use crate::error::{Error, Result};
use crate::exterior::{self, hyperplane_positions, Multivector, SymmetricForm};
use crate::linalg::{self, Matrix};
use crate::projective;
use crate::scalars::{Field, PrimeField, Rationals};

/// Dimension of Λ³V₆.
pub const TRIVECTOR_DIM: usize = 20;
/// Dimension of a Lagrangian subspace of Λ³V₆.
pub const LAGRANGIAN_DIM: usize = 10;

/// A subspace of Fᴺ. The basis is stored in reduced row-echelon form, so two
/// subspaces are equal exactly when their stored matrices are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace<E> {
    ambient: usize,
    rows: Matrix<E>,
    pivots: Vec<usize>,
}

impl<E: Clone + PartialEq> Subspace<E> {
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &Matrix<E> {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, rows: Vec::new(), pivots: Vec::new() }
    }
}

impl<E: Clone + PartialEq + Eq + std::hash::Hash + std::fmt::Debug + Send + Sync> Subspace<E> {
    pub fn span<F: Field<Elem = E>>(f: &F, rows: Matrix<E>, ambient: usize) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != ambient) {
            return Err(Error::DimensionMismatch { expected: ambient, found: bad.len() });
        }
        let (rows, pivots) = linalg::rref(f, rows, ambient);
        Ok(Subspace { ambient, rows, pivots })
    }

    pub fn full<F: Field<Elem = E>>(f: &F, ambient: usize) -> Self {
        let rows = (0..ambient)
            .map(|i| (0..ambient).map(|j| if i == j { f.one() } else { f.zero() }).collect())
            .collect();
        Subspace { ambient, rows, pivots: (0..ambient).collect() }
    }

    /// Coordinates of `v` with respect to the stored basis, if `v` lies in the span.
    pub fn coordinates<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Option<Vec<E>> {
        let coords: Vec<E> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rest = v.to_vec();
        for (c, row) in coords.iter().zip(&self.rows) {
            if f.is_zero(c) {
                continue;
            }
            for (x, y) in rest.iter_mut().zip(row) {
                *x = f.sub(x, &f.mul(c, y));
            }
        }
        rest.iter().all(|x| f.is_zero(x)).then_some(coords)
    }

    pub fn contains<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> bool {
        v.len() == self.ambient && self.coordinates(f, v).is_some()
    }

    /// The vector Σ cᵢ rowᵢ.
    pub fn combine<F: Field<Elem = E>>(&self, f: &F, coords: &[E]) -> Vec<E> {
        let mut out = vec![f.zero(); self.ambient];
        for (c, row) in coords.iter().zip(&self.rows) {
            if f.is_zero(c) {
                continue;
            }
            for (x, y) in out.iter_mut().zip(row) {
                *x = f.add(x, &f.mul(c, y));
            }
        }
        out
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch { expected: self.ambient, found: other.ambient });
        }
        Ok(())
    }

    pub fn sum<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let rows = self.rows.iter().chain(&other.rows).cloned().collect();
        Self::span(f, rows, self.ambient)
    }

    /// The annihilator in the dual space, in dual-basis coordinates.
    pub fn annihilator<F: Field<Elem = E>>(&self, f: &F) -> Self {
        let rows = linalg::nullspace(f, self.rows.clone(), self.ambient);
        let pivots = rows.iter().map(|r| r.iter().position(|x| !f.is_zero(x)).expect("nonzero row")).collect();
        Subspace { ambient: self.ambient, rows, pivots }
    }

    pub fn intersect<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        Ok(self.annihilator(f).sum(f, &other.annihilator(f))?.annihilator(f))
    }

    /// Image under a linear map given as a matrix acting on column vectors.
    pub fn map<F: Field<Elem = E>>(&self, f: &F, matrix: &[Vec<E>]) -> Result<Self> {
        let out_dim = matrix.len();
        let rows = self.rows.iter().map(|r| linalg::mat_vec(f, matrix, r)).collect();
        Self::span(f, rows, out_dim)
    }
}

/// A 10-dimensional subspace of Λ³V₆ certified isotropic for the wedge pairing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LagrangianSubspace<E> {
    space: Subspace<E>,
}

impl<E: Clone + PartialEq + Eq + std::hash::Hash + std::fmt::Debug + Send + Sync> LagrangianSubspace<E> {
    /// Checks dim = 10 and that every pairing of basis vectors vanishes.
    pub fn certify<F: Field<Elem = E>>(f: &F, space: Subspace<E>) -> Result<Self> {
        if space.ambient() != TRIVECTOR_DIM {
            return Err(Error::NotLagrangian(format!("ambient dimension {} != 20", space.ambient())));
        }
        if space.dim() != LAGRANGIAN_DIM {
            return Err(Error::NotLagrangian(format!("dimension {} != 10", space.dim())));
        }
        for (i, a) in space.rows().iter().enumerate() {
            for (j, b) in space.rows().iter().enumerate().skip(i + 1) {
                if !f.is_zero(&exterior::symplectic_coords(f, a, b)) {
                    return Err(Error::NotLagrangian(format!("basis vectors {i} and {j} pair to nonzero")));
                }
            }
        }
        Ok(LagrangianSubspace { space })
    }

    pub fn span<F: Field<Elem = E>>(f: &F, rows: Matrix<E>) -> Result<Self> {
        Self::certify(f, Subspace::span(f, rows, TRIVECTOR_DIM)?)
    }

    pub fn subspace(&self) -> &Subspace<E> {
        &self.space
    }

    pub fn into_subspace(self) -> Subspace<E> {
        self.space
    }

    pub fn basis_vectors(&self) -> Vec<Multivector<E>> {
        self.space
            .rows()
            .iter()
            .map(|r| Multivector::from_coeffs(3, r.clone()).expect("rows have 20 coordinates"))
            .collect()
    }

    /// Full 10×10 pairing matrix of the basis.
    pub fn pairing_matrix<F: Field<Elem = E>>(&self, f: &F) -> Matrix<E> {
        let rows = self.space.rows();
        rows.iter()
            .map(|a| rows.iter().map(|b| exterior::symplectic_coords(f, a, b)).collect())
            .collect()
    }
}

/// Λ³ positions of e₀∧e_i∧e_j for the lexicographic pairs 1 ≤ i < j ≤ 5.
pub fn e0_wedge_positions() -> Vec<usize> {
    hyperplane_positions(2)
        .into_iter()
        .map(|p2| {
            let mask = exterior::basis_masks(2)[p2] | 1;
            exterior::basis_index(mask)
        })
        .collect()
}

/// For each pair u_b of Λ²⟨e₁..e₅⟩, the Λ³⟨e₁..e₅⟩ position and sign of the
/// dual vector η*_b with vol(e₀∧η*_b∧u_c) = δ_bc.
pub fn plucker_dual_positions() -> Vec<(usize, bool)> {
    hyperplane_positions(2)
        .into_iter()
        .map(|p2| {
            let pair = exterior::basis_masks(2)[p2];
            let triple = !pair & 0b11_1110;
            (exterior::basis_index(triple), sign_e0_t_p(triple, pair))
        })
        .collect()
}

/// Whether vol(e₀∧e_T∧e_P) = −1.
fn sign_e0_t_p(triple: u8, pair: u8) -> bool {
    let f = Rationals;
    let t = exterior::mask_to_tuple(triple);
    let p = exterior::mask_to_tuple(pair);
    let idx: Vec<usize> = std::iter::once(0).chain(t).chain(p).collect();
    let m = Multivector::basis(&f, &idx).expect("valid indices");
    exterior::volume(&f, &m).expect("degree 6") != f.one()
}

/// The graph Lagrangian { e₀∧u + φ(u) : u ∈ Λ²V₅ } where φ(u) ∈ Λ³V₅ is defined by
/// vol(e₀∧φ(u)∧u′) = −S(u, u′), with V₅ = ⟨e₁,…,e₅⟩.
///
/// With this sign the associated quadric 𝐪(e₀) is exactly S in the standard
/// basis of Λ²V₅.
pub fn lagrangian_from_graph<F: Field>(f: &F, s: &SymmetricForm<F::Elem>) -> Result<LagrangianSubspace<F::Elem>> {
    if s.dim() != LAGRANGIAN_DIM {
        return Err(Error::DimensionMismatch { expected: LAGRANGIAN_DIM, found: s.dim() });
    }
    let e0_pos = e0_wedge_positions();
    let duals = plucker_dual_positions();
    let rows: Matrix<F::Elem> = (0..LAGRANGIAN_DIM)
        .map(|a| {
            let mut row = vec![f.zero(); TRIVECTOR_DIM];
            row[e0_pos[a]] = f.one();
            for (b, &(pos, negative)) in duals.iter().enumerate() {
                let c = &s.matrix()[a][b];
                // coefficient −S_ab on η*_b
                row[pos] = if negative { c.clone() } else { f.neg(c) };
            }
            row
        })
        .collect();
    LagrangianSubspace::span(f, rows)
}

/// Symmetric matrix with entries uniform in [−height, height].
pub fn random_symmetric_integer<R: Rng>(rng: &mut R, n: usize, height: i64) -> Matrix<i64> {
    let mut m = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i..n {
            let x = if height == 0 { 0 } else { rng.random_range(-height..=height) };
            m[i][j] = x;
            m[j][i] = x;
        }
    }
    m
}

pub fn int_matrix<F: Field>(f: &F, m: &[Vec<i64>]) -> Matrix<F::Elem> {
    m.iter().map(|r| r.iter().map(|&x| f.from_i64(x)).collect()).collect()
}

/// Graph Lagrangian of a random integer symmetric matrix.
pub fn random_graph_lagrangian<R: Rng>(rng: &mut R, height: i64) -> LagrangianSubspace<BigRational> {
    let s = random_symmetric_integer(rng, LAGRANGIAN_DIM, height);
    let form = SymmetricForm::new(int_matrix(&Rationals, &s)).expect("symmetric by construction");
    lagrangian_from_graph(&Rationals, &form).expect("graph of a symmetric form is Lagrangian")
}

/// Entry-wise reduction of a rational subspace.
pub fn reduce_subspace_mod_p(space: &Subspace<BigRational>, fp: &PrimeField) -> Result<Subspace<u32>> {
    let rows = space
        .rows()
        .iter()
        .map(|r| r.iter().map(|x| fp.reduce_rational(x)).collect::<Result<Vec<_>>>())
        .collect::<Result<Matrix<u32>>>()?;
    let reduced = Subspace::span(fp, rows, space.ambient())?;
    if reduced.dim() != space.dim() {
        return Err(Error::BadPrime {
            prime: fp.modulus() as u64,
            reason: format!("rank drops from {} to {}", space.dim(), reduced.dim()),
        });
    }
    Ok(reduced)
}

pub fn reduce_mod_p(a: &LagrangianSubspace<BigRational>, fp: &PrimeField) -> Result<LagrangianSubspace<u32>> {
    let reduced = reduce_subspace_mod_p(a.subspace(), fp)?;
    LagrangianSubspace::certify(fp, reduced)
}

/// Decomposable points of 𝐏(A)(𝐅_p) with coefficient-vector index in `range`.
pub fn scan_decomposables_range(
    fp: &PrimeField,
    a: &LagrangianSubspace<u32>,
    range: std::ops::Range<u128>,
) -> Vec<Vec<u32>> {
    let p = fp.modulus() as u64;
    let mut found = Vec::new();
    for idx in range {
        let coords = projective::point_at(p, LAGRANGIAN_DIM, idx);
        let xi = a.subspace().combine(fp, &coords);
        if fp.rank(&exterior::multiplication_matrix(fp, &xi)) == 3 {
            found.push(xi);
        }
    }
    found
}

/// All decomposable points of 𝐏(A)(𝐅_p), as trivectors whose first nonzero
/// coordinate in the A-basis is 1. An empty result is per-prime evidence only.
pub fn scan_decomposables(fp: &PrimeField, a: &LagrangianSubspace<u32>, budget: u128) -> Result<Vec<Vec<u32>>> {
    let total = projective::check_budget(fp.modulus() as u64, LAGRANGIAN_DIM, budget)?;
    Ok(projective::scan_partitioned(total, |r| scan_decomposables_range(fp, a, r)))
}
