//! Sparse multivariate polynomials with exact coefficients.
//!
//! Terms are kept in a map keyed by exponent vectors under graded
//! lexicographic order, so the last entry is the leading term used by
//! division. Zero coefficients are never stored, which makes equality
//! syntactic.

use std::collections::{BTreeMap, HashMap};
use std::ops::Neg;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Zero};

use crate::error::{Error, Result};
use crate::scalars::{Field, PrimeField, Rationals};

pub const MAX_VARS: usize = 6;

/// Coefficient rings usable in [`Polynomial`].
pub trait Coeff: Clone + PartialEq + Num + Neg<Output = Self> + Send + Sync + std::fmt::Debug {
    /// `self / other` when the quotient exists in the ring.
    fn exact_div(&self, other: &Self) -> Option<Self>;
}

impl Coeff for BigInt {
    fn exact_div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(other);
        r.is_zero().then_some(q)
    }
}

impl Coeff for BigRational {
    fn exact_div(&self, other: &Self) -> Option<Self> {
        (!other.is_zero()).then(|| self / other)
    }
}

impl Coeff for i64 {
    fn exact_div(&self, other: &Self) -> Option<Self> {
        (*other != 0 && self % other == 0).then(|| self / other)
    }
}

/// Exponent vector; ordered by total degree, then lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial([u8; MAX_VARS]);

impl Monomial {
    pub fn new(exps: &[u8]) -> Self {
        let mut m = [0u8; MAX_VARS];
        m[..exps.len()].copy_from_slice(exps);
        Monomial(m)
    }

    pub fn exps(&self) -> &[u8; MAX_VARS] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    fn mul(&self, other: &Self) -> Self {
        let mut m = self.0;
        for (a, b) in m.iter_mut().zip(other.0) {
            *a += b;
        }
        Monomial(m)
    }

    fn checked_div(&self, other: &Self) -> Option<Self> {
        let mut m = self.0;
        for (a, b) in m.iter_mut().zip(other.0) {
            *a = a.checked_sub(b)?;
        }
        Some(Monomial(m))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial<C> {
    /// Labels of the variables, e.g. `[1, 2, 3, 4, 5]` for x₁..x₅.
    vars: Vec<u8>,
    terms: BTreeMap<Monomial, C>,
}

/// The public exact-rational polynomial type.
pub type MultivariatePolynomial = Polynomial<BigRational>;

impl<C: Coeff> Polynomial<C> {
    pub fn zero(vars: &[u8]) -> Self {
        assert!(vars.len() <= MAX_VARS, "at most six variables");
        Polynomial { vars: vars.to_vec(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &[u8], c: C) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(Monomial::new(&[]), c);
        p
    }

    /// The variable in slot `slot` (not label).
    pub fn var(vars: &[u8], slot: usize) -> Self {
        let mut exps = [0u8; MAX_VARS];
        exps[slot] = 1;
        let mut p = Self::zero(vars);
        p.add_term(Monomial(exps), C::one());
        p
    }

    pub fn from_terms(vars: &[u8], terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &[u8] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn leading(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().clone() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check_vars(&self, other: &Self) {
        assert_eq!(self.vars, other.vars, "polynomials over different variables");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_vars(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Polynomial { vars: self.vars.clone(), terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect() }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, x)| (*m, x.clone() * c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_vars(other);
        let mut acc: HashMap<Monomial, C> = HashMap::with_capacity(self.terms.len() * other.terms.len() / 2 + 1);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let prod = ca.clone() * cb.clone();
                acc.entry(ma.mul(mb))
                    .and_modify(|e| *e = e.clone() + prod.clone())
                    .or_insert(prod);
            }
        }
        Polynomial {
            vars: self.vars.clone(),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::constant(&self.vars, C::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Multivariate division by a single divisor: `self = q·divisor + r` where
    /// no term of r is divisible by the leading term of the divisor (or its
    /// leading coefficient does not divide in the coefficient ring).
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        self.check_vars(divisor);
        let (dm, dc) = divisor.leading().map(|(m, c)| (*m, c.clone())).expect("division by zero polynomial");
        let mut rest = self.terms.clone();
        let mut quot = Self::zero(&self.vars);
        let mut rem = Self::zero(&self.vars);
        while let Some((m, c)) = rest.pop_last() {
            let step = m.checked_div(&dm).zip(c.exact_div(&dc));
            match step {
                Some((qm, qc)) => {
                    for (tm, tc) in divisor.terms.iter().rev().skip(1) {
                        let key = tm.mul(&qm);
                        let delta = -(tc.clone() * qc.clone());
                        match rest.entry(key) {
                            std::collections::btree_map::Entry::Vacant(e) => {
                                e.insert(delta);
                            }
                            std::collections::btree_map::Entry::Occupied(mut e) => {
                                let s = e.get().clone() + delta;
                                if s.is_zero() {
                                    e.remove();
                                } else {
                                    *e.get_mut() = s;
                                }
                            }
                        }
                    }
                    quot.add_term(qm, qc);
                }
                None => rem.add_term(m, c),
            }
        }
        (quot, rem)
    }

    /// Exact quotient; errors with the remainder size otherwise.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(divisor);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NonzeroRemainder { terms: r.num_terms() })
        }
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Polynomial<D> {
        Polynomial::from_terms(&self.vars, self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    /// Substitutes field values for the variables.
    pub fn eval_in<F: Field>(
        &self,
        f: &F,
        point: &[F::Elem],
        coeff: impl Fn(&C) -> Result<F::Elem>,
    ) -> Result<F::Elem> {
        if point.len() != self.vars.len() {
            return Err(Error::DimensionMismatch { expected: self.vars.len(), found: point.len() });
        }
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = coeff(c)?;
            for (x, &e) in point.iter().zip(m.0.iter()) {
                for _ in 0..e {
                    t = f.mul(&t, x);
                }
            }
            acc = f.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Homogenizes to degree `degree` by inserting a new variable with label
    /// `label` at slot `slot`.
    pub fn homogenize(&self, label: u8, slot: usize, degree: u32) -> Result<Self> {
        let mut vars = self.vars.clone();
        vars.insert(slot, label);
        if vars.len() > MAX_VARS {
            return Err(Error::OutOfRange("too many variables".into()));
        }
        let mut out = Self::zero(&vars);
        for (m, c) in &self.terms {
            let d = m.degree();
            if d > degree {
                return Err(Error::OutOfRange(format!("term of degree {d} exceeds {degree}")));
            }
            let mut exps: Vec<u8> = m.0[..self.vars.len()].to_vec();
            exps.insert(slot, (degree - d) as u8);
            out.add_term(Monomial::new(&exps), c.clone());
        }
        Ok(out)
    }

    /// Terms sorted by exponent vector, ascending lexicographically.
    pub fn sorted_terms(&self) -> Vec<(Vec<u8>, C)> {
        let n = self.vars.len();
        let mut out: Vec<(Vec<u8>, C)> = self.terms.iter().map(|(m, c)| (m.0[..n].to_vec(), c.clone())).collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }
}

impl MultivariatePolynomial {
    /// Evaluation over 𝐐.
    pub fn eval(&self, point: &[BigRational]) -> Result<BigRational> {
        self.eval_in(&Rationals, point, |c| Ok(c.clone()))
    }

    /// Evaluation of the reduction mod p; fails when p divides a denominator.
    pub fn eval_mod_p(&self, fp: &PrimeField, point: &[u32]) -> Result<u32> {
        self.eval_in(fp, point, |c| fp.reduce_rational(c))
    }

    /// `Some(c)` with `self = c · other`, c ≠ 0, when the two are proportional.
    pub fn proportionality(&self, other: &Self) -> Option<BigRational> {
        if self.vars != other.vars || self.terms.len() != other.terms.len() || self.is_zero() {
            return None;
        }
        let (m, a) = self.leading()?;
        let b = other.terms.get(m)?;
        let ratio = a / b;
        self.terms
            .iter()
            .all(|(m, c)| other.terms.get(m).is_some_and(|d| *c == d * &ratio))
            .then_some(ratio)
    }

    /// Scales so that all coefficients are coprime integers and the leading
    /// coefficient is positive.
    pub fn primitive_integer(&self) -> Polynomial<BigInt> {
        let l = self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<(Monomial, BigInt)> =
            self.terms.iter().map(|(m, c)| (*m, c.numer() * (&l / c.denom()))).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c));
        let sign = match self.leading() {
            Some((_, c)) if c < &BigRational::zero() => -BigInt::one(),
            _ => BigInt::one(),
        };
        let g = if g.is_zero() { BigInt::one() } else { g * sign };
        Polynomial::from_terms(&self.vars, ints.into_iter().map(|(m, c)| (m, c / &g)))
    }
}

impl Polynomial<BigInt> {
    pub fn to_rational(&self) -> MultivariatePolynomial {
        self.map_coeffs(|c| BigRational::from_integer(c.clone()))
    }
}

/// Determinant of a square matrix over ℤ[x] by fraction-free elimination.
/// Every division by the previous pivot is exact.
pub fn det_bareiss(mut m: Vec<Vec<Polynomial<BigInt>>>, vars: &[u8]) -> Polynomial<BigInt> {
    let n = m.len();
    if n == 0 {
        return Polynomial::constant(vars, BigInt::one());
    }
    let mut prev = Polynomial::constant(vars, BigInt::one());
    let mut negate = false;
    for k in 0..n {
        // cheapest nonzero pivot in the column
        let Some(pr) = (k..n).filter(|&i| !m[i][k].is_zero()).min_by_key(|&i| m[i][k].num_terms()) else {
            return Polynomial::zero(vars);
        };
        if pr != k {
            m.swap(pr, k);
            negate = !negate;
        }
        let (top, rest) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in rest.iter_mut() {
            for j in k + 1..n {
                let num = pivot_row[k].mul(&row[j]).sub(&row[k].mul(&pivot_row[j]));
                row[j] = if prev.num_terms() == 1 && prev.total_degree() == Some(0) {
                    let c = prev.leading().map(|(_, c)| c.clone()).expect("nonzero");
                    num.map_coeffs(|x| x.exact_div(&c).expect("Bareiss division is exact"))
                } else {
                    num.div_exact(&prev).expect("Bareiss division is exact")
                };
            }
            row[k] = Polynomial::zero(vars);
        }
        prev = pivot_row[k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        d.neg()
    } else {
        d
    }
}

/// Determinant over 𝐐[x]: rows are scaled to integer polynomials first.
pub fn det_rational(m: &[Vec<MultivariatePolynomial>], vars: &[u8]) -> MultivariatePolynomial {
    let mut scale = BigInt::one();
    let int_rows: Vec<Vec<Polynomial<BigInt>>> = m
        .iter()
        .map(|row| {
            let l = row
                .iter()
                .flat_map(|p| p.terms.values())
                .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            scale *= &l;
            row.iter().map(|p| p.map_coeffs(|c| c.numer() * (&l / c.denom()))).collect()
        })
        .collect();
    let d = det_bareiss(int_rows, vars).to_rational();
    d.scale(&BigRational::new(BigInt::one(), scale))
}

/// Affine-linear polynomial c₀ + Σ cᵢ·(slot i variable).
pub fn affine<C: Coeff>(vars: &[u8], constant: C, linear: &[C]) -> Polynomial<C> {
    let mut p = Polynomial::constant(vars, constant);
    for (slot, c) in linear.iter().enumerate() {
        p = p.add(&Polynomial::var(vars, slot).scale(c));
    }
    p
}

/// Exponent vectors in `n` variables of total degree at most `d`, graded.
fn simplex_points(n: usize, d: u32) -> Vec<Vec<u8>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<u8>| {
                let used: u32 = p.iter().map(|&e| e as u32).sum();
                (0..=(d - used) as u8).map(move |e| {
                    let mut q = p.clone();
                    q.push(e);
                    q
                })
            })
            .collect();
    }
    out
}

/// Recovers a polynomial of total degree at most `d` from its values on the
/// lattice simplex {γ ∈ ℕⁿ : |γ| ≤ d}, using Newton forward differences:
/// P = Σ_α (Δ^α P(0) / α!) · Π (xᵢ)_{αᵢ} with falling factorials (x)_k.
pub fn interpolate_simplex<V>(vars: &[u8], d: u32, values: V) -> MultivariatePolynomial
where
    V: Fn(&[i64]) -> BigRational + Sync,
{
    use rayon::prelude::*;
    let n = vars.len();
    let points = simplex_points(n, d);
    let vals: HashMap<Vec<u8>, BigRational> = points
        .par_iter()
        .map(|g| {
            let x: Vec<i64> = g.iter().map(|&e| e as i64).collect();
            (g.clone(), values(&x))
        })
        .collect();
    // falling[k] = coefficients of (x)_k in 1, x, x², …
    let mut falling: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
    for k in 0..d as i64 {
        let prev = falling.last().expect("nonempty");
        let mut next = vec![BigInt::zero(); prev.len() + 1];
        for (j, c) in prev.iter().enumerate() {
            next[j + 1] += c;
            next[j] -= c * BigInt::from(k);
        }
        falling.push(next);
    }
    let binom = |a: u8, b: u8| -> BigInt { (0..b as u32).fold(BigInt::one(), |acc, i| acc * (a as u32 - i) / (i + 1)) };
    let fact = |a: u8| -> BigInt { (1..=a as u32).fold(BigInt::one(), |acc, i| acc * i) };

    let mut out = Polynomial::zero(vars);
    for alpha in &points {
        let mut diff = BigRational::zero();
        for gamma in points.iter().filter(|g| g.iter().zip(alpha).all(|(a, b)| a <= b)) {
            let weight: BigInt = gamma.iter().zip(alpha).map(|(&g, &a)| binom(a, g)).product();
            let sign_odd = alpha.iter().zip(gamma).map(|(&a, &g)| (a - g) as u32).sum::<u32>() % 2 == 1;
            let term = &vals[gamma] * BigRational::from_integer(weight);
            diff = if sign_odd { diff - term } else { diff + term };
        }
        if diff.is_zero() {
            continue;
        }
        let denom: BigInt = alpha.iter().map(|&a| fact(a)).product();
        let c = diff / BigRational::from_integer(denom);
        // expand Π (xᵢ)_{αᵢ}
        let mut expansion: Vec<(Vec<u8>, BigInt)> = vec![(vec![], BigInt::one())];
        for &a in alpha {
            expansion = expansion
                .into_iter()
                .flat_map(|(m, k)| {
                    falling[a as usize].iter().enumerate().filter(|(_, s)| !s.is_zero()).map(move |(j, s)| {
                        let mut m = m.clone();
                        m.push(j as u8);
                        (m, &k * s)
                    })
                })
                .collect();
        }
        for (m, k) in expansion {
            out.add_term(Monomial::new(&m), &c * BigRational::from_integer(k));
        }
    }
    out
}
