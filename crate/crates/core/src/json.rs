//! JSON forms of the library objects. Every number is a string: `"n"` for
//! integers and `"n/d"` for other rationals (residues for 𝐅_p data, which
//! also carry a `"prime"` key). Coordinates follow the lexicographic order of
//! increasing index tuples.

use num_rational::BigRational;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::epw::DiscriminantComparison;
use crate::error::{Error, Result};
use crate::exterior::SymmetricForm;
use crate::gm::{GmDataSet, Hyperplane, Sigma1Locus, BIVECTOR_V5_DIM};
use crate::linalg::Matrix;
use crate::poly::{Monomial, MultivariatePolynomial, Polynomial};
use crate::scalars::{format_rational, parse_rational, Field};
use crate::subspace::{LagrangianSubspace, Subspace};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubspaceJson {
    pub ambient: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime: Option<u64>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub isotropic: bool,
    /// Number of basis pairs whose wedge pairing was checked to vanish.
    pub pairs_checked: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LagrangianJson {
    pub ambient: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime: Option<u64>,
    pub rows: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GmJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime: Option<u64>,
    pub lambda: Vec<String>,
    pub v5_basis: Vec<Vec<String>>,
    pub w: SubspaceJson,
    pub q: Vec<Vec<Vec<String>>>,
    pub n: Option<usize>,
    pub degenerate: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub exp: Vec<u8>,
    pub coef: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolynomialJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Sigma1Json {
    Empty,
    Point { point: Vec<String> },
    Conic { ss: Vec<String>, st: Vec<String>, tt: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscriminantJson {
    pub proportional: bool,
    pub ratio: Option<String>,
    pub chart: usize,
    pub determinant: PolynomialJson,
    pub quotient: PolynomialJson,
    pub sextic: PolynomialJson,
}

/// Parses JSON, reporting the path of the offending field on failure.
pub fn from_str<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::Parse(format!("at {path}: {}", e.into_inner()))
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
    s.push('\n');
    s
}

fn prime_of<F: Field>(f: &F) -> Option<u64> {
    match f.characteristic() {
        0 => None,
        p => Some(p),
    }
}

fn check_prime<F: Field>(f: &F, prime: Option<u64>) -> Result<()> {
    if prime != prime_of(f) {
        return Err(Error::Parse(format!(
            "field mismatch: data has prime {prime:?}, expected {:?}",
            prime_of(f)
        )));
    }
    Ok(())
}

fn fmt_vec<F: Field>(f: &F, v: &[F::Elem]) -> Vec<String> {
    v.iter().map(|x| f.format(x)).collect()
}

fn fmt_mat<F: Field>(f: &F, m: &[Vec<F::Elem>]) -> Vec<Vec<String>> {
    m.iter().map(|r| fmt_vec(f, r)).collect()
}

fn parse_vec<F: Field>(f: &F, v: &[String], len: usize, what: &str) -> Result<Vec<F::Elem>> {
    if v.len() != len {
        return Err(Error::Parse(format!("{what}: expected {len} entries, got {}", v.len())));
    }
    v.iter().map(|s| f.parse(s)).collect()
}

fn parse_mat<F: Field>(f: &F, m: &[Vec<String>], cols: usize, what: &str) -> Result<Matrix<F::Elem>> {
    m.iter().enumerate().map(|(i, r)| parse_vec(f, r, cols, &format!("{what} row {i}"))).collect()
}

pub fn subspace_to_json<F: Field>(f: &F, s: &Subspace<F::Elem>) -> SubspaceJson {
    SubspaceJson { ambient: s.ambient(), prime: prime_of(f), rows: fmt_mat(f, s.rows()) }
}

/// Accepts any spanning rows and re-echelonizes them.
pub fn subspace_from_json<F: Field>(f: &F, j: &SubspaceJson) -> Result<Subspace<F::Elem>> {
    check_prime(f, j.prime)?;
    Subspace::span(f, parse_mat(f, &j.rows, j.ambient, "rows")?, j.ambient)
}

pub fn lagrangian_to_json<F: Field>(f: &F, a: &LagrangianSubspace<F::Elem>) -> LagrangianJson {
    let dim = a.subspace().dim();
    LagrangianJson {
        ambient: a.subspace().ambient(),
        prime: prime_of(f),
        rows: fmt_mat(f, a.subspace().rows()),
        certificate: Some(Certificate { isotropic: true, pairs_checked: dim * (dim - 1) / 2 }),
    }
}

/// Parses and re-certifies; a stored certificate is never trusted.
pub fn lagrangian_from_json<F: Field>(f: &F, j: &LagrangianJson) -> Result<LagrangianSubspace<F::Elem>> {
    check_prime(f, j.prime)?;
    let s = Subspace::span(f, parse_mat(f, &j.rows, j.ambient, "rows")?, j.ambient)?;
    LagrangianSubspace::certify(f, s)
}

pub fn gm_to_json<F: Field>(f: &F, gm: &GmDataSet<F::Elem>) -> GmJson {
    GmJson {
        prime: prime_of(f),
        lambda: fmt_vec(f, gm.hyperplane().lambda()),
        v5_basis: fmt_mat(f, gm.hyperplane().basis()),
        w: subspace_to_json(f, gm.w()),
        q: gm.forms().iter().map(|s| fmt_mat(f, s.matrix())).collect(),
        n: gm.n(),
        degenerate: gm.is_degenerate(),
    }
}

/// Rebuilds the data set; the stored V₅ basis must be the echelon basis of
/// ker λ and W must already be echelonized, since 𝐪 is expressed in both.
pub fn gm_from_json<F: Field>(f: &F, j: &GmJson) -> Result<GmDataSet<F::Elem>> {
    check_prime(f, j.prime)?;
    let hyperplane = Hyperplane::new(f, parse_vec(f, &j.lambda, 6, "lambda")?)?;
    let basis = parse_mat(f, &j.v5_basis, 6, "v5_basis")?;
    if &basis != hyperplane.basis() {
        return Err(Error::Parse("v5_basis is not the echelon basis of ker lambda".into()));
    }
    if j.w.ambient != BIVECTOR_V5_DIM {
        return Err(Error::Parse(format!("w.ambient must be {BIVECTOR_V5_DIM}")));
    }
    let rows = parse_mat(f, &j.w.rows, BIVECTOR_V5_DIM, "w")?;
    let w = Subspace::span(f, rows.clone(), BIVECTOR_V5_DIM)?;
    if w.rows() != &rows {
        return Err(Error::Parse("w rows are not in reduced echelon form".into()));
    }
    let q = j
        .q
        .iter()
        .enumerate()
        .map(|(i, m)| SymmetricForm::new(parse_mat(f, m, rows.len(), &format!("q[{i}]"))?))
        .collect::<Result<Vec<_>>>()?;
    let gm = GmDataSet::new(hyperplane, w, q)?;
    if gm.n() != j.n || gm.is_degenerate() != j.degenerate {
        return Err(Error::Parse("n/degenerate do not match dim W".into()));
    }
    Ok(gm)
}

pub fn var_name(label: u8) -> String {
    format!("v{label}")
}

fn var_label(name: &str) -> Result<u8> {
    name.strip_prefix('v')
        .and_then(|d| d.parse::<u8>().ok())
        .filter(|&l| l < 6)
        .ok_or_else(|| Error::Parse(format!("unknown variable {name:?}; expected v0..v5")))
}

pub fn polynomial_to_json(p: &MultivariatePolynomial) -> PolynomialJson {
    PolynomialJson {
        vars: p.vars().iter().map(|&l| var_name(l)).collect(),
        terms: p
            .sorted_terms()
            .into_iter()
            .map(|(exp, c)| TermJson { exp, coef: format_rational(&c) })
            .collect(),
    }
}

pub fn polynomial_from_json(j: &PolynomialJson) -> Result<MultivariatePolynomial> {
    let vars: Vec<u8> = j.vars.iter().map(|v| var_label(v)).collect::<Result<_>>()?;
    if vars.len() > 6 {
        return Err(Error::Parse("at most six variables".into()));
    }
    let terms = j
        .terms
        .iter()
        .map(|t| {
            if t.exp.len() != vars.len() {
                return Err(Error::Parse(format!("exponent {:?} has wrong length", t.exp)));
            }
            Ok((Monomial::new(&t.exp), parse_rational(&t.coef)?))
        })
        .collect::<Result<Vec<(Monomial, BigRational)>>>()?;
    Ok(Polynomial::from_terms(&vars, terms))
}

pub fn sigma1_to_json<F: Field>(f: &F, locus: &Sigma1Locus<F::Elem>) -> Sigma1Json {
    match locus {
        Sigma1Locus::Empty => Sigma1Json::Empty,
        Sigma1Locus::Point(p) => Sigma1Json::Point { point: fmt_vec(f, p) },
        Sigma1Locus::Conic { ss, st, tt } => {
            Sigma1Json::Conic { ss: fmt_vec(f, ss), st: fmt_vec(f, st), tt: fmt_vec(f, tt) }
        }
    }
}

pub fn discriminant_to_json(d: &DiscriminantComparison) -> DiscriminantJson {
    DiscriminantJson {
        proportional: d.proportional(),
        ratio: d.ratio.as_ref().map(format_rational),
        chart: d.chart,
        determinant: polynomial_to_json(&d.determinant),
        quotient: polynomial_to_json(&d.quotient),
        sextic: polynomial_to_json(&d.sextic),
    }
}
