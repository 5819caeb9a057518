//! Exterior algebra of a fixed six-dimensional space V₆ with basis e₀..e₅.
//!
//! Λᵖ is stored densely: basis vectors are strictly increasing index tuples in
//! lexicographic order, so Λ³ has the 20 basis vectors (0,1,2), (0,1,3), …,
//! (3,4,5). The volume form sends e₀∧…∧e₅ to 1.

use std::sync::LazyLock;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::scalars::Field;

pub const DIM: usize = 6;

struct BasisTables {
    /// `masks[p]` lists the degree-p basis tuples as bitmasks, lexicographically.
    masks: Vec<Vec<u8>>,
    /// Position of a mask inside its degree.
    position: [usize; 64],
}

static TABLES: LazyLock<BasisTables> = LazyLock::new(|| {
    let mut masks = vec![Vec::new(); DIM + 1];
    for p in 0..=DIM {
        let mut tuples: Vec<Vec<usize>> = Vec::new();
        combinations(DIM, p, 0, &mut Vec::new(), &mut tuples);
        masks[p] = tuples.iter().map(|t| tuple_to_mask(t)).collect();
    }
    let mut position = [0; 64];
    for level in &masks {
        for (i, &m) in level.iter().enumerate() {
            position[m as usize] = i;
        }
    }
    BasisTables { masks, position }
});

fn combinations(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in start..n {
        cur.push(i);
        combinations(n, k, i + 1, cur, out);
        cur.pop();
    }
}

fn tuple_to_mask(t: &[usize]) -> u8 {
    t.iter().fold(0u8, |m, &i| m | (1 << i))
}

pub fn mask_to_tuple(mask: u8) -> Vec<usize> {
    (0..DIM).filter(|i| mask & (1 << i) != 0).collect()
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Basis bitmasks of Λᵖ in lexicographic order.
pub fn basis_masks(p: usize) -> &'static [u8] {
    &TABLES.masks[p]
}

pub fn basis_index(mask: u8) -> usize {
    TABLES.position[mask as usize]
}

/// Basis tuples of Λᵖ in lexicographic order.
pub fn basis_tuples(p: usize) -> Vec<Vec<usize>> {
    basis_masks(p).iter().map(|&m| mask_to_tuple(m)).collect()
}

/// Sign of e_A ∧ e_B relative to e_{A∪B} for disjoint masks.
fn wedge_sign(a: u8, b: u8) -> bool {
    // count pairs (i in a, j in b) with i > j
    let mut inversions = 0;
    for j in 0..DIM {
        if b & (1 << j) != 0 {
            inversions += (a >> (j + 1)).count_ones();
        }
    }
    inversions % 2 == 1
}

/// Positions inside Λᵖ of the basis tuples avoiding index 0, i.e. the standard
/// basis of Λᵖ⟨e₁,…,e₅⟩ in lexicographic order.
pub fn hyperplane_positions(p: usize) -> Vec<usize> {
    basis_masks(p)
        .iter()
        .enumerate()
        .filter(|(_, &m)| m & 1 == 0)
        .map(|(i, _)| i)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Multivector<E> {
    degree: usize,
    coeffs: Vec<E>,
}

impl<E: Clone> Multivector<E> {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }
}

impl<E: Clone + PartialEq> Multivector<E> {
    pub fn zero<F: Field<Elem = E>>(f: &F, degree: usize) -> Result<Self> {
        check_degree(degree)?;
        Ok(Multivector { degree, coeffs: vec![f.zero(); binomial(DIM, degree)] })
    }

    pub fn from_coeffs(degree: usize, coeffs: Vec<E>) -> Result<Self> {
        check_degree(degree)?;
        let expected = binomial(DIM, degree);
        if coeffs.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: coeffs.len() });
        }
        Ok(Multivector { degree, coeffs })
    }

    /// `e_{i₁}∧…∧e_{i_p}` for arbitrary (unsorted) indices; repeats give zero.
    pub fn basis<F: Field<Elem = E>>(f: &F, indices: &[usize]) -> Result<Self> {
        let mut out = Self::zero(f, indices.len())?;
        let mut mask = 0u8;
        let mut negative = false;
        for &i in indices {
            if i >= DIM {
                return Err(Error::OutOfRange(format!("basis index {i}")));
            }
            if mask & (1 << i) != 0 {
                return Ok(out);
            }
            negative ^= wedge_sign(mask, 1 << i);
            mask |= 1 << i;
        }
        out.coeffs[basis_index(mask)] = if negative { f.neg(&f.one()) } else { f.one() };
        Ok(out)
    }

    pub fn vector(v: &[E]) -> Result<Self> {
        Self::from_coeffs(1, v.to_vec())
    }

    pub fn scalar(c: E) -> Self {
        Multivector { degree: 0, coeffs: vec![c] }
    }

    /// Coefficient of a strictly increasing index tuple.
    pub fn coeff(&self, tuple: &[usize]) -> Option<&E> {
        if tuple.len() != self.degree || tuple.windows(2).any(|w| w[0] >= w[1]) || tuple.iter().any(|&i| i >= DIM) {
            return None;
        }
        Some(&self.coeffs[basis_index(tuple_to_mask(tuple))])
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.coeffs.iter().all(|c| f.is_zero(c))
    }

    pub fn add<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Result<Self> {
        self.same_degree(other)?;
        Ok(Multivector {
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f.add(a, b)).collect(),
        })
    }

    pub fn sub<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Result<Self> {
        self.same_degree(other)?;
        Ok(Multivector {
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f.sub(a, b)).collect(),
        })
    }

    pub fn scale<F: Field<Elem = E>>(&self, f: &F, c: &E) -> Self {
        Multivector { degree: self.degree, coeffs: self.coeffs.iter().map(|a| f.mul(a, c)).collect() }
    }

    fn same_degree(&self, other: &Self) -> Result<()> {
        if self.degree != other.degree {
            return Err(Error::WrongDegree { expected: self.degree, found: other.degree });
        }
        Ok(())
    }
}

fn check_degree(p: usize) -> Result<()> {
    if p > DIM {
        return Err(Error::OutOfRange(format!("degree {p} > 6")));
    }
    Ok(())
}

pub fn wedge<F: Field>(f: &F, a: &Multivector<F::Elem>, b: &Multivector<F::Elem>) -> Result<Multivector<F::Elem>> {
    let (p, q) = (a.degree, b.degree);
    if p + q > DIM {
        return Err(Error::DegreeOverflow { left: p, right: q });
    }
    let mut out = Multivector::zero(f, p + q)?;
    for (i, &ma) in basis_masks(p).iter().enumerate() {
        let ca = &a.coeffs[i];
        if f.is_zero(ca) {
            continue;
        }
        for (j, &mb) in basis_masks(q).iter().enumerate() {
            if ma & mb != 0 || f.is_zero(&b.coeffs[j]) {
                continue;
            }
            let prod = f.mul(ca, &b.coeffs[j]);
            let k = basis_index(ma | mb);
            out.coeffs[k] = if wedge_sign(ma, mb) {
                f.sub(&out.coeffs[k], &prod)
            } else {
                f.add(&out.coeffs[k], &prod)
            };
        }
    }
    Ok(out)
}

/// Coefficient of e₀∧…∧e₅.
pub fn volume<F: Field>(_f: &F, a: &Multivector<F::Elem>) -> Result<F::Elem> {
    if a.degree != DIM {
        return Err(Error::WrongDegree { expected: DIM, found: a.degree });
    }
    Ok(a.coeffs[0].clone())
}

/// The wedge pairing Λ³ × Λ³ → scalars.
pub fn symplectic<F: Field>(f: &F, xi: &Multivector<F::Elem>, eta: &Multivector<F::Elem>) -> Result<F::Elem> {
    for m in [xi, eta] {
        if m.degree != 3 {
            return Err(Error::WrongDegree { expected: 3, found: m.degree });
        }
    }
    Ok(symplectic_coords(f, &xi.coeffs, &eta.coeffs))
}

/// Sign s_I with e_I ∧ e_{Iᶜ} = s_I · vol, indexed by Λ³ position.
static TRIVECTOR_DUAL: LazyLock<Vec<(usize, bool)>> = LazyLock::new(|| {
    basis_masks(3)
        .iter()
        .map(|&m| {
            let c = !m & 0b11_1111;
            (basis_index(c), wedge_sign(m, c))
        })
        .collect()
});

/// Complementary position and sign for each Λ³ basis vector.
pub fn trivector_complement(i: usize) -> (usize, bool) {
    TRIVECTOR_DUAL[i]
}

/// The wedge pairing on raw Λ³ coordinate vectors.
pub fn symplectic_coords<F: Field>(f: &F, xi: &[F::Elem], eta: &[F::Elem]) -> F::Elem {
    let mut acc = f.zero();
    for (i, x) in xi.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        let (j, negative) = TRIVECTOR_DUAL[i];
        if f.is_zero(&eta[j]) {
            continue;
        }
        let t = f.mul(x, &eta[j]);
        acc = if negative { f.sub(&acc, &t) } else { f.add(&acc, &t) };
    }
    acc
}

/// Contraction by a covector (Leibniz rule):
/// λ(v₁∧…∧v_p) = Σ (−1)^{k−1} λ(v_k) v₁∧…v̂_k…∧v_p.
pub fn contract<F: Field>(f: &F, lambda: &[F::Elem], a: &Multivector<F::Elem>) -> Result<Multivector<F::Elem>> {
    if lambda.len() != DIM {
        return Err(Error::DimensionMismatch { expected: DIM, found: lambda.len() });
    }
    if a.degree == 0 {
        return Err(Error::WrongDegree { expected: 1, found: 0 });
    }
    let mut out = Multivector::zero(f, a.degree - 1)?;
    for (i, &m) in basis_masks(a.degree).iter().enumerate() {
        let c = &a.coeffs[i];
        if f.is_zero(c) {
            continue;
        }
        for (k, idx) in mask_to_tuple(m).into_iter().enumerate() {
            if f.is_zero(&lambda[idx]) {
                continue;
            }
            let t = f.mul(c, &lambda[idx]);
            let pos = basis_index(m & !(1 << idx));
            out.coeffs[pos] = if k % 2 == 1 {
                f.sub(&out.coeffs[pos], &t)
            } else {
                f.add(&out.coeffs[pos], &t)
            };
        }
    }
    Ok(out)
}

/// Rank of v ↦ v∧ξ from V₆ to Λ⁴V₆. A nonzero ξ is decomposable exactly when
/// this is 3.
pub fn decomposable_rank<F: Field>(f: &F, xi: &Multivector<F::Elem>) -> Result<usize> {
    if xi.degree != 3 {
        return Err(Error::WrongDegree { expected: 3, found: xi.degree });
    }
    Ok(f.rank(&multiplication_matrix(f, &xi.coeffs)))
}

/// Rows e_i ∧ ξ (i = 0..5) in Λ⁴ coordinates, for a Λ³ coordinate vector ξ.
pub fn multiplication_matrix<F: Field>(f: &F, xi: &[F::Elem]) -> Matrix<F::Elem> {
    let triples = basis_masks(3);
    (0..DIM)
        .map(|i| {
            let mut row = vec![f.zero(); binomial(DIM, 4)];
            for (t, &m) in triples.iter().enumerate() {
                if m & (1 << i) != 0 || f.is_zero(&xi[t]) {
                    continue;
                }
                let pos = basis_index(m | (1 << i));
                row[pos] = if wedge_sign(1 << i, m) { f.neg(&xi[t]) } else { xi[t].clone() };
            }
            row
        })
        .collect()
}

/// Matrix of Λᵖg in the lexicographic basis, where g is a 6×6 matrix acting on
/// column vectors: entry (J, I) is the minor det g[J, I].
pub fn exterior_power<F: Field>(f: &F, g: &[Vec<F::Elem>], p: usize) -> Matrix<F::Elem> {
    let tuples = basis_tuples(p);
    tuples
        .iter()
        .map(|rows| {
            tuples
                .iter()
                .map(|cols| {
                    let minor: Matrix<F::Elem> =
                        rows.iter().map(|&r| cols.iter().map(|&c| g[r][c].clone()).collect()).collect();
                    linalg::det(f, &minor)
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PfaffianKernel<E> {
    /// Kernel generator of a rank-4 form.
    Kernel(Vec<E>),
    RankBelowFour,
}

fn pfaffian4<F: Field>(f: &F, w: &[Vec<F::Elem>], idx: &[usize]) -> F::Elem {
    let a = |i: usize, j: usize| &w[idx[i]][idx[j]];
    let t1 = f.mul(a(0, 1), a(2, 3));
    let t2 = f.mul(a(0, 2), a(1, 3));
    let t3 = f.mul(a(0, 3), a(1, 2));
    f.add(&f.sub(&t1, &t2), &t3)
}

/// Kernel of a skew 5×5 form via signed 4×4 sub-Pfaffians: coordinate k is
/// (−1)ᵏ Pf(ω with row and column k removed). Zero exactly when rank ω < 4.
pub fn pfaffian_kernel<F: Field>(f: &F, omega: &[Vec<F::Elem>]) -> Result<PfaffianKernel<F::Elem>> {
    check_skew(f, omega, 5)?;
    let v: Vec<F::Elem> = (0..5)
        .map(|k| {
            let idx: Vec<usize> = (0..5).filter(|&i| i != k).collect();
            let pf = pfaffian4(f, omega, &idx);
            if k % 2 == 1 {
                f.neg(&pf)
            } else {
                pf
            }
        })
        .collect();
    if v.iter().all(|x| f.is_zero(x)) {
        Ok(PfaffianKernel::RankBelowFour)
    } else {
        Ok(PfaffianKernel::Kernel(v))
    }
}

pub fn check_skew<F: Field>(f: &F, m: &[Vec<F::Elem>], n: usize) -> Result<()> {
    if m.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: m.len() });
    }
    for i in 0..n {
        for j in i..n {
            if f.add(&m[i][j], &m[j][i]) != f.zero() || (i == j && !f.is_zero(&m[i][i])) {
                return Err(Error::NotSkew { row: i, col: j });
            }
        }
    }
    Ok(())
}

/// A symmetric bilinear form on an m-dimensional space.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymmetricForm<E> {
    matrix: Matrix<E>,
}

impl<E: Clone + PartialEq> SymmetricForm<E> {
    pub fn new(matrix: Matrix<E>) -> Result<Self> {
        let m = matrix.len();
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != m {
                return Err(Error::DimensionMismatch { expected: m, found: row.len() });
            }
            for j in 0..i {
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(SymmetricForm { matrix })
    }

    pub fn zero<F: Field<Elem = E>>(f: &F, m: usize) -> Self {
        SymmetricForm { matrix: vec![vec![f.zero(); m]; m] }
    }

    pub fn identity<F: Field<Elem = E>>(f: &F, m: usize) -> Self {
        let mut s = Self::zero(f, m);
        for i in 0..m {
            s.matrix[i][i] = f.one();
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &Matrix<E> {
        &self.matrix
    }

    pub fn eval<F: Field<Elem = E>>(&self, f: &F, x: &[E], y: &[E]) -> E {
        linalg::dot(f, x, &linalg::mat_vec(f, &self.matrix, y))
    }

    /// Linear combination Σ cᵢ formsᵢ.
    pub fn combination<F: Field<Elem = E>>(f: &F, coeffs: &[E], forms: &[SymmetricForm<E>]) -> Self {
        let m = forms.first().map_or(0, SymmetricForm::dim);
        let mut out = Self::zero(f, m);
        for (c, form) in coeffs.iter().zip(forms) {
            if f.is_zero(c) {
                continue;
            }
            for i in 0..m {
                for j in 0..m {
                    out.matrix[i][j] = f.add(&out.matrix[i][j], &f.mul(c, &form.matrix[i][j]));
                }
            }
        }
        out
    }

    /// Gram matrix Cᵀ S C of the form restricted to the span of the rows of `basis`
    /// (each row a vector in the ambient coordinates).
    pub fn restrict<F: Field<Elem = E>>(&self, f: &F, basis: &[Vec<E>]) -> Self {
        let sc: Matrix<E> = basis.iter().map(|b| linalg::mat_vec(f, &self.matrix, b)).collect();
        let matrix = basis
            .iter()
            .map(|x| sc.iter().map(|y| linalg::dot(f, x, y)).collect())
            .collect();
        SymmetricForm { matrix }
    }
}

/// Corank and echelonized radical of a symmetric form.
pub fn form_corank<F: Field>(f: &F, q: &SymmetricForm<F::Elem>) -> (usize, Matrix<F::Elem>) {
    let kernel = linalg::nullspace(f, q.matrix.clone(), q.dim());
    (kernel.len(), kernel)
}
