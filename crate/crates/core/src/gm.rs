//! The correspondence between GM data sets (W, V₆, V₅, 𝐪) and Lagrangian data
//! sets (V₆, V₅, A), plus the checks built on it: the Plücker axioms, the
//! kernel law, the Σ₁ locus, fiber quadric coranks and the smoothness spot
//! check.
//!
//! Computations happen in an adapted frame f₀ = v₀, f₁..f₅ = b₁..b₅ where
//! b₁..b₅ is the echelon basis of V₅ = ker λ and λ(v₀) = 1. In that frame λ is
//! the first coordinate functional, Λ²V₅ has the ten coordinates f_i∧f_j
//! (1 ≤ i < j ≤ 5), and the trivialization of Λ⁵V₅ sends f₁∧…∧f₅ to 1. W and
//! the forms 𝐪(eᵢ) are always stored in these b-coordinates.

use num_rational::BigRational;
use rand::Rng;

use crate::epw;
use crate::error::{Error, Result};
use crate::exterior::{self, basis_masks, basis_index, hyperplane_positions, Multivector, SymmetricForm, DIM};
use crate::linalg::{self, Matrix};
use crate::projective;
use crate::scalars::{Field, PrimeField, Rationals};
use crate::subspace::{self, LagrangianSubspace, Subspace, LAGRANGIAN_DIM, TRIVECTOR_DIM};

/// Dimension of Λ²V₅.
pub const BIVECTOR_V5_DIM: usize = 10;

/// V₅ = ker λ together with its echelon basis b₁..b₅.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperplane<E> {
    lambda: Vec<E>,
    basis: Matrix<E>,
}

impl<E: Clone + PartialEq + Eq + std::hash::Hash + std::fmt::Debug + Send + Sync> Hyperplane<E> {
    pub fn new<F: Field<Elem = E>>(f: &F, lambda: Vec<E>) -> Result<Self> {
        if lambda.len() != DIM {
            return Err(Error::DimensionMismatch { expected: DIM, found: lambda.len() });
        }
        if lambda.iter().all(|x| f.is_zero(x)) {
            return Err(Error::ZeroVector);
        }
        let basis = linalg::nullspace(f, vec![lambda.clone()], DIM);
        Ok(Hyperplane { lambda, basis })
    }

    /// λ = e₀∨, V₅ = ⟨e₁,…,e₅⟩.
    pub fn standard<F: Field<Elem = E>>(f: &F) -> Self {
        let mut lambda = vec![f.zero(); DIM];
        lambda[0] = f.one();
        Self::new(f, lambda).expect("nonzero covector")
    }

    pub fn lambda(&self) -> &[E] {
        &self.lambda
    }

    /// Echelon basis b₁..b₅ of V₅ as rows in e-coordinates.
    pub fn basis(&self) -> &Matrix<E> {
        &self.basis
    }

    pub fn eval<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> E {
        linalg::dot(f, &self.lambda, v)
    }

    pub fn contains<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> bool {
        f.is_zero(&self.eval(f, v))
    }

    /// e_j / λ_j for the first nonzero λ_j.
    pub fn default_v0<F: Field<Elem = E>>(&self, f: &F) -> Vec<E> {
        let j = self.lambda.iter().position(|x| !f.is_zero(x)).expect("λ ≠ 0");
        let mut v = vec![f.zero(); DIM];
        v[j] = f.inv(&self.lambda[j]).expect("nonzero");
        v
    }

    pub fn frame<F: Field<Elem = E>>(&self, f: &F, v0: &[E]) -> Result<Frame<E>> {
        if v0.len() != DIM {
            return Err(Error::DimensionMismatch { expected: DIM, found: v0.len() });
        }
        let l = self.eval(f, v0);
        if f.is_zero(&l) {
            return Err(Error::InHyperplane(format_vec(f, v0)));
        }
        if !f.is_one(&l) {
            return Err(Error::OutOfRange(format!("λ(v0) = {} but must be 1", f.format(&l))));
        }
        let mut columns: Matrix<E> = vec![v0.to_vec()];
        columns.extend(self.basis.iter().cloned());
        let to_std = linalg::transpose(&columns, DIM);
        let from_std = linalg::inverse(f, &to_std).expect("v0 ∉ V5 completes a basis");
        Ok(Frame {
            l3_to_std: exterior::exterior_power(f, &to_std, 3),
            l3_from_std: exterior::exterior_power(f, &from_std, 3),
            to_std,
            from_std,
        })
    }
}

/// Change of basis between the standard basis e₀..e₅ and an adapted frame.
#[derive(Clone, Debug)]
pub struct Frame<E> {
    to_std: Matrix<E>,
    from_std: Matrix<E>,
    l3_to_std: Matrix<E>,
    l3_from_std: Matrix<E>,
}

impl<E: Clone> Frame<E> {
    pub fn vector_to_frame<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Vec<E> {
        linalg::mat_vec(f, &self.from_std, v)
    }

    pub fn vector_to_std<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Vec<E> {
        linalg::mat_vec(f, &self.to_std, v)
    }

    pub fn trivector_to_frame<F: Field<Elem = E>>(&self, f: &F, xi: &[E]) -> Vec<E> {
        linalg::mat_vec(f, &self.l3_from_std, xi)
    }

    pub fn trivector_to_std<F: Field<Elem = E>>(&self, f: &F, xi: &[E]) -> Vec<E> {
        linalg::mat_vec(f, &self.l3_to_std, xi)
    }
}

/// Λ² coordinates on pairs avoiding index 0 embedded as a bivector of V₆.
fn bivector_v5<F: Field>(f: &F, w: &[F::Elem]) -> Multivector<F::Elem> {
    let mut c = vec![f.zero(); 15];
    for (k, &pos) in hyperplane_positions(2).iter().enumerate() {
        c[pos] = w[k].clone();
    }
    Multivector::from_coeffs(2, c).expect("15 coordinates")
}

/// Restriction of a Λ² or Λ³ coordinate vector to the pairs/triples avoiding 0.
fn restrict_v5<E: Clone>(x: &[E], degree: usize) -> Vec<E> {
    hyperplane_positions(degree).iter().map(|&p| x[p].clone()).collect()
}

fn f0_covector<F: Field>(f: &F) -> Vec<F::Elem> {
    let mut l = vec![f.zero(); DIM];
    l[0] = f.one();
    l
}

/// vol₅ of a 5-vector of V₅ in the adapted frame, i.e. vol(f₀ ∧ x).
fn vol5<F: Field>(f: &F, x: &Multivector<F::Elem>) -> Result<F::Elem> {
    let f0 = Multivector::basis(f, &[0])?;
    exterior::volume(f, &exterior::wedge(f, &f0, x)?)
}

/// The Plücker form (w, w′) ↦ vol₅(v∧w∧w′) on the span of `w_rows`, for v ∈ V₅
/// given by its b-coordinates.
pub fn plucker_form<F: Field>(f: &F, v_b: &[F::Elem], w_rows: &[Vec<F::Elem>]) -> Result<SymmetricForm<F::Elem>> {
    let mut v = vec![f.zero(); DIM];
    v[1..].clone_from_slice(v_b);
    let v = Multivector::vector(&v)?;
    let vw: Vec<Multivector<F::Elem>> = w_rows
        .iter()
        .map(|w| exterior::wedge(f, &v, &bivector_v5(f, w)))
        .collect::<Result<_>>()?;
    let mut m = vec![vec![f.zero(); w_rows.len()]; w_rows.len()];
    for (a, x) in vw.iter().enumerate() {
        for (b, w) in w_rows.iter().enumerate() {
            m[a][b] = vol5(f, &exterior::wedge(f, x, &bivector_v5(f, w))?)?;
        }
    }
    SymmetricForm::new(m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GmDataSet<E> {
    hyperplane: Hyperplane<E>,
    /// W ⊆ Λ²V₅ in b-coordinates (ambient 10).
    w: Subspace<E>,
    /// 𝐪(e₀), …, 𝐪(e₅) in the echelon basis of W.
    q: Vec<SymmetricForm<E>>,
}

impl<E: Clone + PartialEq + Eq + std::hash::Hash + std::fmt::Debug + Send + Sync> GmDataSet<E> {
    pub fn new(hyperplane: Hyperplane<E>, w: Subspace<E>, q: Vec<SymmetricForm<E>>) -> Result<Self> {
        if w.ambient() != BIVECTOR_V5_DIM {
            return Err(Error::DimensionMismatch { expected: BIVECTOR_V5_DIM, found: w.ambient() });
        }
        if q.len() != DIM {
            return Err(Error::DimensionMismatch { expected: DIM, found: q.len() });
        }
        if let Some(bad) = q.iter().find(|s| s.dim() != w.dim()) {
            return Err(Error::DimensionMismatch { expected: w.dim(), found: bad.dim() });
        }
        Ok(GmDataSet { hyperplane, w, q })
    }

    pub fn hyperplane(&self) -> &Hyperplane<E> {
        &self.hyperplane
    }

    pub fn w(&self) -> &Subspace<E> {
        &self.w
    }

    pub fn forms(&self) -> &[SymmetricForm<E>] {
        &self.q
    }

    /// The GM dimension n = dim W − 5 when dim W ∈ {8, 9, 10}.
    pub fn n(&self) -> Option<usize> {
        match self.w.dim() {
            d @ 8..=10 => Some(d - 5),
            _ => None,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.n().is_none()
    }

    /// 𝐪(v) = Σ vᵢ 𝐪(eᵢ).
    pub fn q_at<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> SymmetricForm<E> {
        SymmetricForm::combination(f, v, &self.q)
    }

    /// b-coordinates of a vector of V₅.
    pub fn v5_coordinates<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> Result<Vec<E>> {
        let v5 = Subspace::span(f, self.hyperplane.basis.clone(), DIM)?;
        v5.coordinates(f, v).ok_or_else(|| Error::NotInHyperplane(format_vec(f, v)))
    }

    pub fn reduce_mod_p(&self, fp: &PrimeField) -> Result<GmDataSet<u32>>
    where
        E: Into<BigRational>,
    {
        let red = |x: &E| fp.reduce_rational(&x.clone().into());
        let lambda = self.hyperplane.lambda.iter().map(red).collect::<Result<Vec<_>>>()?;
        let hyperplane = Hyperplane::new(fp, lambda)?;
        let basis: Matrix<u32> = self
            .hyperplane
            .basis
            .iter()
            .map(|r| r.iter().map(red).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        if basis != hyperplane.basis {
            return Err(Error::BadPrime {
                prime: fp.modulus() as u64,
                reason: "echelon basis of V5 changes under reduction".into(),
            });
        }
        let w_rows: Matrix<u32> =
            self.w.rows().iter().map(|r| r.iter().map(red).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
        let w = Subspace::span(fp, w_rows.clone(), BIVECTOR_V5_DIM)?;
        if w.rows() != &w_rows {
            return Err(Error::BadPrime { prime: fp.modulus() as u64, reason: "W loses rank".into() });
        }
        let q = self
            .q
            .iter()
            .map(|s| {
                let m = s
                    .matrix()
                    .iter()
                    .map(|r| r.iter().map(red).collect::<Result<Vec<_>>>())
                    .collect::<Result<Matrix<u32>>>()?;
                SymmetricForm::new(m)
            })
            .collect::<Result<Vec<_>>>()?;
        GmDataSet::new(hyperplane, w, q)
    }
}

fn format_vec<F: Field>(f: &F, v: &[F::Elem]) -> String {
    let parts: Vec<String> = v.iter().map(|x| f.format(x)).collect();
    format!("[{}]", parts.join(", "))
}

/// Builds the GM data set of (A, λ): W = λ₃(A) and
/// 𝐪(v)(w, w′) = vol₅(−λ₄(v∧ξ) ∧ λ₃(ξ′)) for lifts ξ, ξ′ ∈ A of w, w′.
///
/// Lift independence and symmetry are checked; a failure of either means A
/// is not Lagrangian.
pub fn lagrangian_to_gm<F: Field>(f: &F, a: &LagrangianSubspace<F::Elem>, lambda: &[F::Elem]) -> Result<GmDataSet<F::Elem>> {
    let hyperplane = Hyperplane::new(f, lambda.to_vec())?;
    let frame = hyperplane.frame(f, &hyperplane.default_v0(f))?;
    let f0 = f0_covector(f);

    // rows (λ₃(ξ) ‖ ξ) for ξ in A, all in frame coordinates
    let joint: Matrix<F::Elem> = a
        .subspace()
        .rows()
        .iter()
        .map(|row| -> Result<Vec<F::Elem>> {
            let xi = frame.trivector_to_frame(f, row);
            let u = exterior::contract(f, &f0, &Multivector::from_coeffs(3, xi.clone())?)?;
            let mut out = restrict_v5(u.coeffs(), 2);
            out.extend(xi);
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let (red, pivots) = linalg::rref(f, joint, BIVECTOR_V5_DIM + TRIVECTOR_DIM);
    let split = pivots.iter().take_while(|&&p| p < BIVECTOR_V5_DIM).count();
    let w_rows: Matrix<F::Elem> = red[..split].iter().map(|r| r[..BIVECTOR_V5_DIM].to_vec()).collect();
    let lifts: Vec<Vec<F::Elem>> = red[..split].iter().map(|r| r[BIVECTOR_V5_DIM..].to_vec()).collect();
    let kernel: Vec<Vec<F::Elem>> = red[split..].iter().map(|r| r[BIVECTOR_V5_DIM..].to_vec()).collect();
    let w = Subspace::span(f, w_rows.clone(), BIVECTOR_V5_DIM)?;
    debug_assert_eq!(w.rows(), &w_rows);

    let e0w: Vec<Vec<F::Elem>> = w_rows.iter().map(|w| e0_wedge(f, w)).collect();
    let mut forms = Vec::with_capacity(DIM);
    for i in 0..DIM {
        let mut e = vec![f.zero(); DIM];
        e[i] = f.one();
        let v = Multivector::vector(&frame.vector_to_frame(f, &e))?;
        let contracted = |xi: &[F::Elem]| -> Result<Vec<F::Elem>> {
            let vx = exterior::wedge(f, &v, &Multivector::from_coeffs(3, xi.to_vec())?)?;
            Ok(exterior::contract(f, &f0, &vx)?.into_coeffs())
        };
        // −vol₅(η ∧ w) = symplectic(η, f₀∧w) for η ∈ Λ³V₅
        let etas: Vec<Vec<F::Elem>> = lifts.iter().map(|xi| contracted(xi)).collect::<Result<_>>()?;
        let m: Matrix<F::Elem> = etas
            .iter()
            .map(|eta| e0w.iter().map(|x| exterior::symplectic_coords(f, eta, x)).collect())
            .collect();
        for kappa in &kernel {
            let eta = contracted(kappa)?;
            if e0w.iter().any(|x| !f.is_zero(&exterior::symplectic_coords(f, &eta, x))) {
                return Err(Error::NotLagrangian(format!("q(e{i}) depends on the choice of lifts")));
            }
        }
        let form = SymmetricForm::new(m).map_err(|e| match e {
            Error::NotSymmetric { row, col } => {
                Error::NotLagrangian(format!("q(e{i}) is not symmetric at ({row}, {col})"))
            }
            other => other,
        })?;
        forms.push(form);
    }
    GmDataSet::new(hyperplane, w, forms)
}

/// f₀∧w as a Λ³ coordinate vector, for w ∈ Λ²V₅ in b-coordinates.
fn e0_wedge<F: Field>(f: &F, w: &[F::Elem]) -> Vec<F::Elem> {
    let mut out = vec![f.zero(); TRIVECTOR_DIM];
    for (k, pos) in subspace::e0_wedge_positions().into_iter().enumerate() {
        out[pos] = w[k].clone();
    }
    out
}

/// Rebuilds A as the kernel of Λ³V₅ ⊕ W → W∨,
/// (ξ, w) ↦ (w′ ↦ vol₅(ξ∧w′) + 𝐪(v₀)(w, w′)), embedded by (ξ, w) ↦ ξ + v₀∧w.
pub fn gm_to_lagrangian<F: Field>(f: &F, gm: &GmDataSet<F::Elem>, v0: &[F::Elem]) -> Result<LagrangianSubspace<F::Elem>> {
    let frame = gm.hyperplane.frame(f, v0)?;
    let q0 = gm.q_at(f, v0);
    let m = gm.w.dim();
    let w_rows = gm.w.rows();
    let triples = hyperplane_positions(3);

    // one equation per basis vector w′_b; unknowns (ξ_T for the 10 triples, c_a)
    let mut eqs: Matrix<F::Elem> = vec![vec![f.zero(); triples.len() + m]; m];
    for (b, wb) in w_rows.iter().enumerate() {
        let wb = bivector_v5(f, wb);
        for (t, &pos) in triples.iter().enumerate() {
            let e_t = Multivector::basis(f, &exterior::mask_to_tuple(basis_masks(3)[pos]))?;
            eqs[b][t] = vol5(f, &exterior::wedge(f, &e_t, &wb)?)?;
        }
        for a in 0..m {
            eqs[b][triples.len() + a] = q0.matrix()[a][b].clone();
        }
    }
    let kernel = linalg::nullspace(f, eqs, triples.len() + m);
    if kernel.len() != LAGRANGIAN_DIM {
        return Err(Error::InconsistentData(format!("kernel has dimension {} instead of 10", kernel.len())));
    }
    let rows: Matrix<F::Elem> = kernel
        .iter()
        .map(|sol| {
            let c = &sol[triples.len()..];
            let w = gm.w.combine(f, c);
            let mut xi = e0_wedge(f, &w);
            for (t, &pos) in triples.iter().enumerate() {
                xi[pos] = f.add(&xi[pos], &sol[t]);
            }
            frame.trivector_to_std(f, &xi)
        })
        .collect();
    LagrangianSubspace::span(f, rows)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomViolation {
    FormSize { form: usize, expected: usize, found: usize },
    NotSymmetric { form: usize, row: usize, col: usize },
    /// 𝐪(b_k)(w_a, w_b) differs from vol₅(b_k∧w_a∧w_b).
    Plucker { basis_vector: usize, row: usize, col: usize, expected: String, found: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomReport {
    pub checked: usize,
    pub violation: Option<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks symmetry of the six forms and the Plücker condition on all triples
/// (b_k, w_a, w_b) of basis vectors.
pub fn verify_gm_axioms<F: Field>(f: &F, gm: &GmDataSet<F::Elem>) -> AxiomReport {
    let m = gm.w.dim();
    let mut checked = 0;
    for (i, s) in gm.q.iter().enumerate() {
        if s.dim() != m {
            return AxiomReport {
                checked,
                violation: Some(AxiomViolation::FormSize { form: i, expected: m, found: s.dim() }),
            };
        }
        for r in 0..m {
            for c in 0..r {
                checked += 1;
                if s.matrix()[r][c] != s.matrix()[c][r] {
                    return AxiomReport { checked, violation: Some(AxiomViolation::NotSymmetric { form: i, row: r, col: c }) };
                }
            }
        }
    }
    for (k, bk) in gm.hyperplane.basis.iter().enumerate() {
        let mut v_b = vec![f.zero(); 5];
        v_b[k] = f.one();
        let expected = plucker_form(f, &v_b, gm.w.rows()).expect("valid W rows");
        let found = gm.q_at(f, bk);
        for r in 0..m {
            for c in 0..m {
                checked += 1;
                let (x, y) = (&expected.matrix()[r][c], &found.matrix()[r][c]);
                if x != y {
                    return AxiomReport {
                        checked,
                        violation: Some(AxiomViolation::Plucker {
                            basis_vector: k + 1,
                            row: r,
                            col: c,
                            expected: f.format(x),
                            found: f.format(y),
                        }),
                    };
                }
            }
        }
    }
    AxiomReport { checked, violation: None }
}

/// (corank 𝐪(v), dim A ∩ (v∧Λ²V₆)) for v ∉ V₅. The two agree for a
/// corresponding pair.
pub fn kernel_correspondence<F: Field>(
    f: &F,
    gm: &GmDataSet<F::Elem>,
    a: &LagrangianSubspace<F::Elem>,
    v: &[F::Elem],
) -> Result<(usize, usize)> {
    if v.len() != DIM {
        return Err(Error::DimensionMismatch { expected: DIM, found: v.len() });
    }
    if gm.hyperplane.contains(f, v) {
        return Err(Error::InHyperplane(format_vec(f, v)));
    }
    let corank = exterior::form_corank(f, &gm.q_at(f, v)).0;
    let ell = epw::epw_multiplicity_direct(f, a, v)?;
    Ok((corank, ell))
}

/// Skew 5×5 matrix of a covector on Λ²V₅ given in dual b-coordinates.
fn skew_from_dual<F: Field>(f: &F, omega: &[F::Elem]) -> Matrix<F::Elem> {
    let mut m = vec![vec![f.zero(); 5]; 5];
    for (k, &pos) in hyperplane_positions(2).iter().enumerate() {
        let t = exterior::mask_to_tuple(basis_masks(2)[pos]);
        let (i, j) = (t[0] - 1, t[1] - 1);
        m[i][j] = omega[k].clone();
        m[j][i] = f.neg(&omega[k]);
    }
    m
}

fn raw_pfaffian_kernel<F: Field>(f: &F, omega: &[Vec<F::Elem>]) -> Result<Vec<F::Elem>> {
    Ok(match exterior::pfaffian_kernel(f, omega)? {
        exterior::PfaffianKernel::Kernel(v) => v,
        exterior::PfaffianKernel::RankBelowFour => vec![f.zero(); 5],
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sigma1Locus<E> {
    /// n = 5: W^⊥ = 0.
    Empty,
    /// n = 4: the kernel of the generator of W^⊥, in e-coordinates.
    Point(Vec<E>),
    /// n = 3: (s:t) ↦ s²·ss + st·st + t²·tt, in e-coordinates.
    Conic { ss: Vec<E>, st: Vec<E>, tt: Vec<E> },
}

impl<E: Clone> Sigma1Locus<E> {
    pub fn conic_point<F: Field<Elem = E>>(&self, f: &F, s: &E, t: &E) -> Option<Vec<E>> {
        let Sigma1Locus::Conic { ss, st, tt } = self else {
            return None;
        };
        let (s2, st2, t2) = (f.mul(s, s), f.mul(s, t), f.mul(t, t));
        Some(
            (0..DIM)
                .map(|i| f.add(&f.add(&f.mul(&s2, &ss[i]), &f.mul(&st2, &st[i])), &f.mul(&t2, &tt[i])))
                .collect(),
        )
    }
}

/// W^⊥ ⊆ (Λ²V₅)∨ in dual b-coordinates.
pub fn w_perp<F: Field>(f: &F, gm: &GmDataSet<F::Elem>) -> Subspace<F::Elem> {
    gm.w.annihilator(f)
}

/// Σ₁: the union of kernels of nonzero forms in W^⊥. Every such form must
/// have rank 4; for a pencil this is decided exactly through the common roots
/// of the five quadratic sub-Pfaffian coordinates.
pub fn sigma1<F: Field>(f: &F, gm: &GmDataSet<F::Elem>) -> Result<Sigma1Locus<F::Elem>> {
    let n = gm.n().ok_or_else(|| Error::Degenerate(format!("dim W = {}", gm.w.dim())))?;
    let perp = w_perp(f, gm);
    let to_v6 = |k: &[F::Elem]| -> Vec<F::Elem> {
        let mut out = vec![f.zero(); DIM];
        for (c, b) in k.iter().zip(&gm.hyperplane.basis) {
            for (o, x) in out.iter_mut().zip(b) {
                *o = f.add(o, &f.mul(c, x));
            }
        }
        out
    };
    match n {
        5 => Ok(Sigma1Locus::Empty),
        4 => {
            let omega = skew_from_dual(f, &perp.rows()[0]);
            match exterior::pfaffian_kernel(f, &omega)? {
                exterior::PfaffianKernel::Kernel(k) => Ok(Sigma1Locus::Point(to_v6(&k))),
                exterior::PfaffianKernel::RankBelowFour => Err(Error::RankTwoForm("generator of W^perp".into())),
            }
        }
        _ => {
            let w1 = skew_from_dual(f, &perp.rows()[0]);
            let w2 = skew_from_dual(f, &perp.rows()[1]);
            let sum: Matrix<F::Elem> =
                w1.iter().zip(&w2).map(|(r1, r2)| r1.iter().zip(r2).map(|(x, y)| f.add(x, y)).collect()).collect();
            let k1 = raw_pfaffian_kernel(f, &w1)?;
            let k2 = raw_pfaffian_kernel(f, &w2)?;
            let k12 = raw_pfaffian_kernel(f, &sum)?;
            let mid: Vec<F::Elem> = (0..5).map(|i| f.sub(&f.sub(&k12[i], &k1[i]), &k2[i])).collect();
            if k1.iter().all(|x| f.is_zero(x)) {
                return Err(Error::RankTwoForm("(s:t) = (1:0)".into()));
            }
            // common finite root s of s²·k1 + s·mid + k2 (t = 1)
            let polys: Vec<Vec<F::Elem>> =
                (0..5).map(|i| vec![k2[i].clone(), mid[i].clone(), k1[i].clone()]).collect();
            let g = polys.iter().fold(Vec::new(), |acc, p| univariate_gcd(f, &acc, p));
            if g.len() > 1 {
                return Err(Error::RankTwoForm("the pencil W^perp meets Gr(2, V5^dual)".into()));
            }
            Ok(Sigma1Locus::Conic { ss: to_v6(&k1), st: to_v6(&mid), tt: to_v6(&k2) })
        }
    }
}

fn trim<F: Field>(f: &F, mut p: Vec<F::Elem>) -> Vec<F::Elem> {
    while p.last().is_some_and(|x| f.is_zero(x)) {
        p.pop();
    }
    p
}

/// Monic gcd of univariate polynomials (coefficients lowest degree first);
/// the zero polynomial is the empty vector.
fn univariate_gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut a = trim(f, a.to_vec());
    let mut b = trim(f, b.to_vec());
    while !b.is_empty() {
        let inv = f.inv(b.last().expect("nonempty")).expect("nonzero leading coefficient");
        while a.len() >= b.len() {
            let c = f.mul(a.last().expect("nonempty"), &inv);
            let shift = a.len() - b.len();
            for (i, y) in b.iter().enumerate() {
                a[shift + i] = f.sub(&a[shift + i], &f.mul(&c, y));
            }
            a = trim(f, a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    if let Some(lead) = a.last().cloned() {
        let inv = f.inv(&lead).expect("nonzero");
        a = a.iter().map(|x| f.mul(x, &inv)).collect();
    }
    a
}

/// Whether v ∈ V₅ is the kernel of some nonzero ω ∈ W^⊥.
pub fn on_sigma1<F: Field>(f: &F, gm: &GmDataSet<F::Elem>, v: &[F::Elem]) -> Result<bool> {
    let v_b = gm.v5_coordinates(f, v)?;
    let perp = w_perp(f, gm);
    // ω ↦ ω(v, ·) from W^⊥ to V₅∨
    let images: Matrix<F::Elem> = perp
        .rows()
        .iter()
        .map(|w| linalg::mat_vec(f, &linalg::transpose(&skew_from_dual(f, w), 5), &v_b))
        .collect();
    Ok(f.rank(&images) < perp.dim())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberQuadric<E> {
    /// dim (v∧V₅) ∩ W.
    pub domain_dim: usize,
    /// Gram matrix of 𝐪(v₀) on the echelon basis of (v∧V₅) ∩ W.
    pub restricted: SymmetricForm<E>,
    pub corank: usize,
}

/// Corank of 𝐪(v₀) restricted to (v∧V₅) ∩ W for v ∈ V₅ ∖ 0 and v₀ ∉ V₅.
pub fn fiber_quadric_corank<F: Field>(
    f: &F,
    gm: &GmDataSet<F::Elem>,
    v: &[F::Elem],
    v0: &[F::Elem],
) -> Result<FiberQuadric<F::Elem>> {
    if v.len() != DIM || v0.len() != DIM {
        return Err(Error::DimensionMismatch { expected: DIM, found: v.len().min(v0.len()) });
    }
    if v.iter().all(|x| f.is_zero(x)) {
        return Err(Error::ZeroVector);
    }
    if gm.hyperplane.contains(f, v0) {
        return Err(Error::InHyperplane(format_vec(f, v0)));
    }
    let v_b = gm.v5_coordinates(f, v)?;
    let mut vf = vec![f.zero(); DIM];
    vf[1..].clone_from_slice(&v_b);
    let vf = Multivector::vector(&vf)?;
    let rows: Matrix<F::Elem> = (1..DIM)
        .map(|k| -> Result<Vec<F::Elem>> {
            let x = exterior::wedge(f, &vf, &Multivector::basis(f, &[k])?)?;
            Ok(restrict_v5(x.coeffs(), 2))
        })
        .collect::<Result<_>>()?;
    let line_span = Subspace::span(f, rows, BIVECTOR_V5_DIM)?;
    let domain = line_span.intersect(f, &gm.w)?;
    let coords: Matrix<F::Elem> = domain
        .rows()
        .iter()
        .map(|d| gm.w.coordinates(f, d).expect("intersection lies in W"))
        .collect();
    let restricted = gm.q_at(f, v0).restrict(f, &coords);
    let corank = exterior::form_corank(f, &restricted).0;
    Ok(FiberQuadric { domain_dim: domain.dim(), restricted, corank })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothnessReport {
    pub prime: u64,
    pub points_scanned: u128,
    /// Points of X(𝐅_p) found, with the Jacobian rank at each.
    pub points_found: usize,
    pub singular_points: Vec<Vec<u32>>,
}

impl SmoothnessReport {
    pub fn is_smooth_at_found_points(&self) -> bool {
        self.singular_points.is_empty()
    }
}

/// Enumerates 𝐏(W)(𝐅_p); at each common zero of the six quadrics the 6×dim W
/// Jacobian (rows 𝐪(eᵢ)·w, up to the factor 2) must have rank 4.
pub fn smoothness_spot_check(fp: &PrimeField, gm: &GmDataSet<u32>, budget: u128) -> Result<SmoothnessReport> {
    let p = fp.modulus() as u64;
    if p == 2 {
        return Err(Error::BadPrime { prime: 2, reason: "quadratic forms need odd characteristic".into() });
    }
    let m = gm.w.dim();
    let total = projective::check_budget(p, m, budget)?;
    let mats: Vec<&Matrix<u32>> = gm.q.iter().map(|s| s.matrix()).collect();
    let hits = projective::scan_partitioned(total, |range| {
        let mut out = Vec::new();
        for idx in range {
            let w = projective::point_at(p, m, idx);
            let grads: Matrix<u32> = mats.iter().map(|q| linalg::mat_vec(fp, q, &w)).collect();
            if grads.iter().all(|g| linalg::dot(fp, g, &w) == 0) {
                out.push((w, fp.rank(&grads)));
            }
        }
        out
    });
    Ok(SmoothnessReport {
        prime: p,
        points_scanned: total,
        points_found: hits.len(),
        singular_points: hits.into_iter().filter(|(_, r)| *r < 4).map(|(w, _)| w).collect(),
    })
}

/// Random ordinary GM data of dimension n over 𝐐 with λ = e₀∨: W is spanned by
/// n+5 random integer vectors, 𝐪(e₁..e₅) are the Plücker forms and 𝐪(e₀) is a
/// random integer symmetric matrix.
pub fn random_gm_data<R: Rng>(rng: &mut R, n: usize, height: i64) -> Result<GmDataSet<BigRational>> {
    if !(3..=5).contains(&n) {
        return Err(Error::OutOfRange(format!("n = {n} not in 3..=5")));
    }
    let f = Rationals;
    let height = height.max(1);
    let w = loop {
        let rows: Matrix<BigRational> = (0..n + 5)
            .map(|_| (0..BIVECTOR_V5_DIM).map(|_| f.from_i64(rng.random_range(-height..=height))).collect())
            .collect();
        let w = Subspace::span(&f, rows, BIVECTOR_V5_DIM)?;
        if w.dim() == n + 5 {
            break w;
        }
    };
    let s0 = subspace::random_symmetric_integer(rng, n + 5, height);
    let mut q = vec![SymmetricForm::new(subspace::int_matrix(&f, &s0))?];
    for k in 0..5 {
        let mut v_b = vec![f.zero(); 5];
        v_b[k] = f.one();
        q.push(plucker_form(&f, &v_b, w.rows())?);
    }
    GmDataSet::new(Hyperplane::standard(&f), w, q)
}

/// Λ³V₅ ⊆ Λ³V₆ spanned by the triple wedges of the echelon basis of ker λ.
pub fn trivectors_of_hyperplane<F: Field>(f: &F, lambda: &[F::Elem]) -> Result<Subspace<F::Elem>> {
    let h = Hyperplane::new(f, lambda.to_vec())?;
    let b: Vec<Multivector<F::Elem>> =
        h.basis.iter().map(|r| Multivector::vector(r)).collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for i in 0..5 {
        for j in i + 1..5 {
            for k in j + 1..5 {
                let x = exterior::wedge(f, &exterior::wedge(f, &b[i], &b[j])?, &b[k])?;
                rows.push(x.into_coeffs());
            }
        }
    }
    Subspace::span(f, rows, TRIVECTOR_DIM)
}

/// The index of e₀∧e_i∧e_j inside Λ³, for callers building frames by hand.
pub fn e0_pair_index(i: usize, j: usize) -> usize {
    basis_index(1 | (1 << i) | (1 << j))
}
