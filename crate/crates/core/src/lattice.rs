//! Integer lattices given by Gram matrices, the rank-22 lattice
//! Λ = E₈² ⊕ U² ⊕ ⟨2⟩², the arithmetic of the divisors 𝒟_d, and the stored
//! Hodge diamonds of smooth GM varieties.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalars::Rationals;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct GramLattice {
    gram: Vec<Vec<i64>>,
}

impl TryFrom<Vec<Vec<i64>>> for GramLattice {
    type Error = Error;

    fn try_from(gram: Vec<Vec<i64>>) -> Result<Self> {
        GramLattice::new(gram)
    }
}

impl From<GramLattice> for Vec<Vec<i64>> {
    fn from(l: GramLattice) -> Self {
        l.gram
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl GramLattice {
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self> {
        let r = gram.len();
        if let Some(row) = gram.iter().find(|row| row.len() != r) {
            return Err(Error::DimensionMismatch { expected: r, found: row.len() });
        }
        for i in 0..r {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(GramLattice { gram })
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn is_even(&self) -> bool {
        self.gram.iter().enumerate().all(|(i, row)| row[i] % 2 == 0)
    }

    fn big(&self) -> Vec<Vec<BigInt>> {
        self.gram.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    /// det of the Gram matrix.
    pub fn discriminant(&self) -> BigInt {
        linalg::bareiss_det(&self.big())
    }

    /// Inertia by symmetric elimination over 𝐐. A zero diagonal with a nonzero
    /// off-diagonal entry a_ij is first repaired by adding row/column j to i.
    pub fn signature(&self) -> Signature {
        let mut m: Vec<Vec<BigRational>> =
            self.big().into_iter().map(|r| r.into_iter().map(BigRational::from_integer).collect()).collect();
        let mut sig = Signature { positive: 0, negative: 0, zero: 0 };
        let mut active: Vec<usize> = (0..m.len()).collect();
        while !active.is_empty() {
            let pivot = match active.iter().copied().find(|&i| !m[i][i].is_zero()) {
                Some(i) => i,
                None => {
                    let pair = active
                        .iter()
                        .flat_map(|&i| active.iter().map(move |&j| (i, j)))
                        .find(|&(i, j)| !m[i][j].is_zero());
                    let Some((i, j)) = pair else {
                        sig.zero += active.len();
                        break;
                    };
                    // congruence e_i ↦ e_i + e_j: new a_ii = 2a_ij
                    let n = m.len();
                    for k in 0..n {
                        let t = m[j][k].clone();
                        m[i][k] += t;
                    }
                    for k in 0..n {
                        let t = m[k][j].clone();
                        m[k][i] += t;
                    }
                    i
                }
            };
            let d = m[pivot][pivot].clone();
            if d.is_positive() {
                sig.positive += 1;
            } else {
                sig.negative += 1;
            }
            active.retain(|&i| i != pivot);
            for &i in &active {
                let factor = &m[i][pivot] / &d;
                if factor.is_zero() {
                    continue;
                }
                for &k in &active {
                    let t = &factor * &m[pivot][k];
                    m[i][k] -= t;
                }
                m[i][pivot] = BigRational::zero();
            }
            for &i in &active {
                m[pivot][i] = BigRational::zero();
            }
        }
        sig
    }

    pub fn pair(&self, x: &[i64], y: &[i64]) -> i128 {
        let mut s = 0i128;
        for (i, row) in self.gram.iter().enumerate() {
            for (j, &g) in row.iter().enumerate() {
                s += x[i] as i128 * g as i128 * y[j] as i128;
            }
        }
        s
    }

    /// Orthogonal direct sum.
    pub fn direct_sum(blocks: &[GramLattice]) -> GramLattice {
        let r: usize = blocks.iter().map(|b| b.rank()).sum();
        let mut gram = vec![vec![0i64; r]; r];
        let mut off = 0;
        for b in blocks {
            for (i, row) in b.gram.iter().enumerate() {
                for (j, &x) in row.iter().enumerate() {
                    gram[off + i][off + j] = x;
                }
            }
            off += b.rank();
        }
        GramLattice { gram }
    }
}

/// Cartan matrix of E₈ (Bourbaki labels: the chain 1-3-4-5-6-7-8 with 2 on 4).
pub fn e8() -> GramLattice {
    let edges = [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)];
    let mut gram = vec![vec![0i64; 8]; 8];
    for (i, row) in gram.iter_mut().enumerate() {
        row[i] = 2;
    }
    for (a, b) in edges {
        gram[a - 1][b - 1] = -1;
        gram[b - 1][a - 1] = -1;
    }
    GramLattice { gram }
}

/// The hyperbolic plane U.
pub fn hyperbolic_plane() -> GramLattice {
    GramLattice { gram: vec![vec![0, 1], vec![1, 0]] }
}

/// Λ = E₈ ⊕ E₈ ⊕ U ⊕ U ⊕ ⟨2⟩ ⊕ ⟨2⟩.
pub fn lambda_lattice() -> GramLattice {
    let two = GramLattice { gram: vec![vec![2, 0], vec![0, 2]] };
    GramLattice::direct_sum(&[e8(), e8(), hyperbolic_plane(), hyperbolic_plane(), two])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Components {
    Empty,
    One,
    Two,
}

/// Number of irreducible components of 𝒟_d.
pub fn dd_components(d: i64) -> Components {
    if d <= 0 {
        Components::Empty
    } else if d % 4 == 0 {
        Components::One
    } else if d % 8 == 2 {
        Components::Two
    } else {
        Components::Empty
    }
}

/// d ≡ 2 or 4 mod 8 and every odd prime factor of d is 1 mod 4.
pub fn k3_associated(d: i64) -> Result<bool> {
    if d <= 0 {
        return Err(Error::OutOfRange(format!("d = {d} must be positive")));
    }
    if !matches!(d % 8, 2 | 4) {
        return Ok(false);
    }
    let mut m = d;
    while m % 2 == 0 {
        m /= 2;
    }
    let mut q = 3;
    while q * q <= m {
        if m % q == 0 {
            if q % 4 != 1 {
                return Ok(false);
            }
            while m % q == 0 {
                m /= q;
            }
        }
        q += 2;
    }
    Ok(m == 1 || m % 4 == 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HodgeDiamond {
    pub n: usize,
    /// Row k lists h^{k,0}, h^{k−1,1}, …, h^{0,k} for k ≤ n, and continues
    /// symmetrically below the middle row.
    pub rows: Vec<Vec<u32>>,
    pub vanishing: Vec<u32>,
}

impl HodgeDiamond {
    pub fn middle(&self) -> &[u32] {
        &self.rows[self.n]
    }

    /// h^{p,q}.
    pub fn h(&self, p: usize, q: usize) -> u32 {
        let k = p + q;
        let row = &self.rows[k];
        if k <= self.n {
            row[q]
        } else {
            row[q - (k - self.n)]
        }
    }

    /// Σ (−1)^k b_k.
    pub fn euler_characteristic(&self) -> i64 {
        self.rows
            .iter()
            .enumerate()
            .map(|(k, row)| {
                let b: i64 = row.iter().map(|&x| x as i64).sum();
                if k % 2 == 0 {
                    b
                } else {
                    -b
                }
            })
            .sum()
    }
}

/// Betti numbers of Gr(2, 5) in degrees 0..=12.
pub const GRASSMANNIAN_BETTI: [u32; 13] = [1, 0, 1, 0, 2, 0, 2, 0, 2, 0, 1, 0, 1];

const UPPER_HALVES: [&[&[u32]]; 6] = [
    &[&[1], &[6, 6]],
    &[&[1], &[0, 0], &[1, 20, 1]],
    &[&[1], &[0, 0], &[0, 1, 0], &[0, 10, 10, 0]],
    &[&[1], &[0, 0], &[0, 1, 0], &[0, 0, 0, 0], &[0, 1, 22, 1, 0]],
    &[&[1], &[0, 0], &[0, 1, 0], &[0, 0, 0, 0], &[0, 0, 2, 0, 0], &[0, 0, 10, 10, 0, 0]],
    &[
        &[1],
        &[0, 0],
        &[0, 1, 0],
        &[0, 0, 0, 0],
        &[0, 0, 2, 0, 0],
        &[0, 0, 0, 0, 0, 0],
        &[0, 0, 1, 22, 1, 0, 0],
    ],
];

const VANISHING: [&[u32]; 6] = [
    &[6, 6],
    &[1, 19, 1],
    &[0, 10, 10, 0],
    &[0, 1, 20, 1, 0],
    &[0, 0, 10, 10, 0, 0],
    &[0, 0, 1, 20, 1, 0, 0],
];

/// Grassmannian classes in the middle row, which the vanishing part omits.
const MIDDLE_GRASSMANNIAN: [&[u32]; 6] = [
    &[0, 0],
    &[0, 1, 0],
    &[0, 0, 0, 0],
    &[0, 0, 2, 0, 0],
    &[0, 0, 0, 0, 0, 0],
    &[0, 0, 0, 2, 0, 0, 0],
];

fn check_n(n: usize) -> Result<()> {
    if !(1..=6).contains(&n) {
        return Err(Error::OutOfRange(format!("n = {n} not in 1..=6")));
    }
    Ok(())
}

pub fn hodge_diamond(n: usize) -> Result<HodgeDiamond> {
    check_n(n)?;
    let upper = UPPER_HALVES[n - 1];
    let mut rows: Vec<Vec<u32>> = upper.iter().map(|r| r.to_vec()).collect();
    rows.extend(upper[..n].iter().rev().map(|r| r.to_vec()));
    Ok(HodgeDiamond { n, rows, vanishing: VANISHING[n - 1].to_vec() })
}

pub fn vanishing_numbers(n: usize) -> Result<Vec<u32>> {
    check_n(n)?;
    Ok(VANISHING[n - 1].to_vec())
}

pub fn middle_grassmannian_contribution(n: usize) -> Result<Vec<u32>> {
    check_n(n)?;
    Ok(MIDDLE_GRASSMANNIAN[n - 1].to_vec())
}

/// 25 − (5−n)(6−n)/2.
pub fn moduli_dimension(n: usize) -> Result<i64> {
    if !(3..=6).contains(&n) {
        return Err(Error::OutOfRange(format!("n = {n} not in 3..=6")));
    }
    let n = n as i64;
    Ok(25 - (5 - n) * (6 - n) / 2)
}

/// Gram matrix of the classes under the ambient form.
pub fn sublattice_gram(classes: &[Vec<i64>], ambient: &GramLattice) -> Result<GramLattice> {
    if let Some(c) = classes.iter().find(|c| c.len() != ambient.rank()) {
        return Err(Error::DimensionMismatch { expected: ambient.rank(), found: c.len() });
    }
    let rows: Vec<Vec<BigRational>> = classes
        .iter()
        .map(|c| c.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    if linalg::rank_by_elimination(&Rationals, &rows) < classes.len() {
        return Err(Error::DependentClasses);
    }
    let gram = classes
        .iter()
        .map(|x| {
            classes
                .iter()
                .map(|y| {
                    i64::try_from(ambient.pair(x, y)).map_err(|_| Error::OutOfRange("intersection number overflows i64".into()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    GramLattice::new(gram)
}

pub fn sublattice_discriminant(classes: &[Vec<i64>], ambient: &GramLattice) -> Result<BigInt> {
    Ok(sublattice_gram(classes, ambient)?.discriminant())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gram(rows: &[&[i64]]) -> GramLattice {
        GramLattice::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn e8_is_unimodular_and_positive() {
        assert_eq!(e8().discriminant(), BigInt::from(1));
        assert_eq!(e8().signature(), Signature { positive: 8, negative: 0, zero: 0 });
        assert!(e8().is_even());
    }

    #[test]
    fn signature_handles_zero_diagonal() {
        assert_eq!(hyperbolic_plane().signature(), Signature { positive: 1, negative: 1, zero: 0 });
        let g = gram(&[&[0, 0, 1], &[0, 0, 0], &[1, 0, 0]]);
        assert_eq!(g.signature(), Signature { positive: 1, negative: 1, zero: 1 });
    }

    #[test]
    fn rejects_asymmetric_input() {
        assert!(matches!(GramLattice::new(vec![vec![1, 2], vec![3, 4]]), Err(Error::NotSymmetric { .. })));
        assert!(GramLattice::new(vec![vec![1, 2]]).is_err());
    }

    #[test]
    fn k3_predicate() {
        assert!(k3_associated(2).unwrap());
        assert!(!k3_associated(18).unwrap());
        assert!(k3_associated(50).unwrap());
        assert!(k3_associated(0).is_err());
    }

    #[test]
    fn diamond_lookup() {
        let d = hodge_diamond(4).unwrap();
        assert_eq!(d.h(2, 2), 22);
        assert_eq!(d.h(3, 1), 1);
        assert_eq!(d.h(4, 4), 1);
        assert_eq!(d.h(3, 3), 1);
        assert!(hodge_diamond(7).is_err());
    }

    #[test]
    fn dependent_classes_rejected() {
        let amb = gram(&[&[1, 0], &[0, 1]]);
        assert!(matches!(sublattice_discriminant(&[vec![1, 2], vec![2, 4]], &amb), Err(Error::DependentClasses)));
    }
}
