//! Exact scalar domains.
//!
//! A [`Field`] is a value describing the arithmetic, while its elements are
//! plain data (`BigRational` for [`Rationals`], reduced residues for
//! [`PrimeField`]). Every algorithm in this crate is generic over the field
//! object, so the same code runs over 𝐐 and over 𝐅_p.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg;

pub trait Field: Clone + Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// 0 for 𝐐, p for 𝐅_p.
    fn characteristic(&self) -> u64;

    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// Rank of a dense row-major matrix.
    fn rank(&self, rows: &[Vec<Self::Elem>]) -> usize {
        linalg::rank_by_elimination(self, rows)
    }
}

/// The exact rationals. Elements are always reduced with positive denominator
/// (a `BigRational` invariant).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn format(&self, a: &BigRational) -> String {
        format_rational(a)
    }
    fn parse(&self, s: &str) -> Result<BigRational> {
        parse_rational(s)
    }

    fn rank(&self, rows: &[Vec<BigRational>]) -> usize {
        linalg::bareiss_rank(&linalg::clear_denominators(rows))
    }
}

/// Canonical text form: `"n"` for integers, `"n/d"` otherwise.
pub fn format_rational(a: &BigRational) -> String {
    if a.denom().is_one() {
        a.numer().to_string()
    } else {
        format!("{}/{}", a.numer(), a.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(n, d))
        }
    }
}

/// 𝐅_p for a prime p < 2³¹. Elements are residues in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 31 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p: p as u32 })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn reduce_int(&self, n: &BigInt) -> u32 {
        let r = n.mod_floor(&BigInt::from(self.p));
        r.to_u32().expect("residue fits in u32")
    }

    /// Image of a rational number, failing when p divides the denominator.
    pub fn reduce_rational(&self, a: &BigRational) -> Result<u32> {
        let den = self.reduce_int(a.denom());
        if den == 0 {
            return Err(Error::BadPrime {
                prime: self.p as u64,
                reason: format!("denominator of {} is divisible by p", format_rational(a)),
            });
        }
        Ok(self.mul(&self.reduce_int(a.numer()), &self.inv(&den)?))
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let p = self.p as u64;
        let mut base = a as u64 % p;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc as u32
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl Field for PrimeField {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1 % self.p
    }
    fn from_i64(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + *b as u64) % self.p as u64) as u32
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + self.p as u64 - *b as u64) % self.p as u64) as u32
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u32) -> Result<u32> {
        if *a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(*a, self.p as u64 - 2))
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn characteristic(&self) -> u64 {
        self.p as u64
    }
    fn format(&self, a: &u32) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Result<u32> {
        let n: BigInt = s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("not an integer residue: {s:?}")))?;
        Ok(self.reduce_int(&n))
    }
}
