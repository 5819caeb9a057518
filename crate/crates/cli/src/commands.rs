use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use epw_core::json::{self, GmJson, LagrangianJson};
use epw_core::lattice::{self, Components, GramLattice};
use epw_core::num::BigRational;
use epw_core::scalars::format_rational;
use epw_core::{epw, gm, projective, rng, subspace, Field, GmDataSet, LagrangianSubspace, PrimeField, Rationals};
use serde_json::{json, Value};

use crate::{Command, Io, LatticeCommand};

/// What a command produced.
pub struct Report {
    lines: Vec<String>,
    json: Option<String>,
    out: Option<PathBuf>,
    /// Set when the command ran but its check failed.
    failure: Option<String>,
}

impl Report {
    fn new(out: Option<PathBuf>) -> Self {
        Report { lines: Vec::new(), json: None, out, failure: None }
    }

    fn line(&mut self, s: impl Into<String>) -> &mut Self {
        self.lines.push(s.into());
        self
    }

    fn json(mut self, text: String) -> Self {
        self.json = Some(text);
        self
    }

    fn value(self, v: &Value) -> Self {
        self.json(json::to_string(v))
    }

    fn fail(mut self, why: impl Into<String>) -> Self {
        self.failure = Some(why.into());
        self
    }
}

pub struct CliError(String);

impl From<epw_core::Error> for CliError {
    fn from(e: epw_core::Error) -> Self {
        CliError(e.to_string())
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn diagnostic(status: &str, message: &str) {
    eprintln!("{}", json!({ "status": status, "message": message }));
}

pub fn finish(result: Result<Report>) -> ExitCode {
    let report = match result {
        Ok(r) => r,
        Err(CliError(message)) => {
            diagnostic("error", &message);
            return ExitCode::from(2);
        }
    };
    for line in &report.lines {
        println!("{line}");
    }
    if let Some(text) = &report.json {
        match &report.out {
            Some(path) => {
                if let Err(e) = fs::write(path, text) {
                    diagnostic("error", &format!("cannot write {}: {e}", path.display()));
                    return ExitCode::from(2);
                }
                println!("wrote {}", path.display());
            }
            None => print!("{text}"),
        }
    }
    match report.failure {
        Some(why) => {
            println!("FAIL: {why}");
            diagnostic("fail", &why);
            ExitCode::from(1)
        }
        None => ExitCode::SUCCESS,
    }
}

fn read(io: &Io) -> Result<String> {
    let path = io.input.as_deref().ok_or_else(|| CliError("missing --in FILE".into()))?;
    read_path(path)
}

fn read_path(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError(format!("cannot read {}: {e}", path.display())))
}

fn prime_field(p: u64) -> Result<PrimeField> {
    Ok(PrimeField::new(p)?)
}

/// Runs `$body` with `$f` bound to the field named by the `prime` key.
macro_rules! with_field {
    ($prime:expr, |$f:ident| $body:expr) => {
        match $prime {
            None => {
                let $f = Rationals;
                $body
            }
            Some(p) => {
                let $f = prime_field(p)?;
                $body
            }
        }
    };
}

fn parse_lambda<F: Field>(f: &F, lambda: &Option<Vec<String>>) -> Result<Vec<F::Elem>> {
    match lambda {
        None => Ok((0..6).map(|i| if i == 0 { f.one() } else { f.zero() }).collect()),
        Some(items) if items.len() == 6 => Ok(items.iter().map(|s| f.parse(s.trim())).collect::<epw_core::Result<_>>()?),
        Some(items) => Err(CliError(format!("--lambda needs 6 entries, got {}", items.len()))),
    }
}

fn degree(p: &epw_core::MultivariatePolynomial) -> String {
    p.total_degree().map_or_else(|| "-∞".to_string(), |d| d.to_string())
}

fn field_name<F: Field>(f: &F) -> String {
    match f.characteristic() {
        0 => "Q".into(),
        p => format!("F_{p}"),
    }
}

pub fn run(command: Command) -> Result<Report> {
    match command {
        Command::Gen { seed, height, io } => gen(seed, height, io),
        Command::Check { prime, budget, io } => check(prime, budget, io),
        Command::Gm { lambda, io } => {
            let j: LagrangianJson = json::from_str(&read(&io)?)?;
            with_field!(j.prime, |f| gm_cmd(&f, &j, &lambda, io.out))
        }
        Command::Roundtrip { lambda, io } => {
            let j: LagrangianJson = json::from_str(&read(&io)?)?;
            with_field!(j.prime, |f| roundtrip(&f, &j, &lambda, io.out))
        }
        Command::Sextic { chart, io } => sextic(chart, io),
        Command::Dis { io } => dis(io),
        Command::Scan { prime, budget, io } => scan(prime, budget, io),
        Command::Dual { io } => {
            let j: LagrangianJson = json::from_str(&read(&io)?)?;
            with_field!(j.prime, |f| dual(&f, &j, io.out))
        }
        Command::Sigma1 { io } => {
            let j: GmJson = json::from_str(&read(&io)?)?;
            with_field!(j.prime, |f| sigma1(&f, &j, io.out))
        }
        Command::Lattice { command, out } => lattice_cmd(command, out),
    }
}

fn gen(seed: u64, height: i64, io: Io) -> Result<Report> {
    if height < 0 {
        return Err(CliError(format!("--height must be nonnegative, got {height}")));
    }
    let f = Rationals;
    let a = subspace::random_graph_lagrangian(&mut rng::seeded(seed), height);
    let j = json::lagrangian_to_json(&f, &a);
    let mut r = Report::new(io.out);
    r.line(format!("graph Lagrangian: seed {seed}, height {height}, ChaCha8 generator"));
    if let Some(c) = &j.certificate {
        r.line(format!("certified isotropic: {} basis pairs checked", c.pairs_checked));
    }
    if height == 0 {
        r.line("warning: degenerate input, zero matrix gives A = e0∧Λ²V5 (multiplicity 10 at [e0])");
    }
    Ok(r.json(json::to_string(&j)))
}

fn check(primes: Option<Vec<u64>>, budget: u128, io: Io) -> Result<Report> {
    let j: LagrangianJson = json::from_str(&read(&io)?)?;
    let mut r = Report::new(io.out);
    let mut results = Vec::new();
    let mut found_any = None;
    let primes: Vec<u64> = match j.prime {
        Some(p) => {
            if primes.is_some_and(|list| list != [p]) {
                return Err(CliError(format!("data is over F_{p}; --prime must be {p}")));
            }
            vec![p]
        }
        None => primes.unwrap_or_else(|| vec![2, 3]),
    };
    for &p in &primes {
        let fp = prime_field(p)?;
        let a = match j.prime {
            Some(_) => json::lagrangian_from_json(&fp, &j)?,
            None => subspace::reduce_mod_p(&json::lagrangian_from_json(&Rationals, &j)?, &fp)?,
        };
        let found = subspace::scan_decomposables(&fp, &a, budget)?;
        let points = projective::point_count(p, subspace::LAGRANGIAN_DIM);
        r.line(format!("F_{p}: {} decomposable points among {points}", found.len()));
        if let (None, Some(first)) = (&found_any, found.first()) {
            found_any = Some((p, first.clone()));
        }
        results.push(json!({
            "prime": p.to_string(),
            "points": points.to_string(),
            "decomposables": found.iter().map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        }));
    }
    r.line("certificate: per-prime heuristic");
    let r = r.value(&json!({ "certificate": "per-prime heuristic", "scans": results }));
    Ok(match found_any {
        Some((p, v)) => r.fail(format!("decomposable trivector over F_{p}: {v:?}")),
        None => r,
    })
}

fn gm_summary<F: Field>(r: &mut Report, f: &F, data: &GmDataSet<F::Elem>) {
    r.line(format!("field {}, dim W = {}", field_name(f), data.w().dim()));
    match data.n() {
        Some(n) => r.line(format!("ordinary GM data of dimension n = {n}")),
        None => r.line(format!("warning: degenerate GM data, dim W = {} is not in 8..=10", data.w().dim())),
    };
}

fn gm_cmd<F: Field>(f: &F, j: &LagrangianJson, lambda: &Option<Vec<String>>, out: Option<PathBuf>) -> Result<Report> {
    let a = json::lagrangian_from_json(f, j)?;
    let data = gm::lagrangian_to_gm(f, &a, &parse_lambda(f, lambda)?)?;
    let mut r = Report::new(out);
    gm_summary(&mut r, f, &data);
    let axioms = gm::verify_gm_axioms(f, &data);
    r.line(format!("axioms: {} checks, {}", axioms.checked, if axioms.passed() { "pass" } else { "FAIL" }));
    let r = r.json(json::to_string(&json::gm_to_json(f, &data)));
    Ok(match axioms.violation {
        Some(v) => r.fail(format!("GM axiom violated: {v:?}")),
        None => r,
    })
}

fn roundtrip<F: Field>(f: &F, j: &LagrangianJson, lambda: &Option<Vec<String>>, out: Option<PathBuf>) -> Result<Report> {
    let a = json::lagrangian_from_json(f, j)?;
    let data = gm::lagrangian_to_gm(f, &a, &parse_lambda(f, lambda)?)?;
    let mut r = Report::new(out);
    gm_summary(&mut r, f, &data);
    let axioms = gm::verify_gm_axioms(f, &data);
    let v0 = data.hyperplane().default_v0(f);
    let back = gm::gm_to_lagrangian(f, &data, &v0)?;
    let same = back == a;
    r.line(format!("axioms: {}", if axioms.passed() { "pass" } else { "FAIL" }));
    r.line(format!("round trip: {}", if same { "pass" } else { "FAIL" }));
    let r = r.value(&json!({ "axioms": axioms.passed(), "round_trip": same }));
    Ok(if !axioms.passed() {
        r.fail(format!("GM axiom violated: {:?}", axioms.violation))
    } else if !same {
        r.fail("gm_to_lagrangian(lagrangian_to_gm(A)) differs from A")
    } else {
        r
    })
}

fn rational_lagrangian(io: &Io) -> Result<LagrangianSubspace<BigRational>> {
    let j: LagrangianJson = json::from_str(&read(io)?)?;
    if let Some(p) = j.prime {
        return Err(CliError(format!("this command needs data over Q, input is over F_{p}")));
    }
    Ok(json::lagrangian_from_json(&Rationals, &j)?)
}

fn sextic(chart: usize, io: Io) -> Result<Report> {
    let a = rational_lagrangian(&io)?;
    let p = epw::chart_sextic(&a, chart)?;
    let mut r = Report::new(io.out);
    r.line(format!("chart v{chart} = 1: total degree {}, {} terms", degree(&p), p.num_terms()));
    let r = r.json(json::to_string(&json::polynomial_to_json(&p)));
    Ok(if p.is_zero() { r.fail("the chart polynomial vanishes identically (Y_A = P(V6))") } else { r })
}

fn dis(io: Io) -> Result<Report> {
    let j: GmJson = json::from_str(&read(&io)?)?;
    if let Some(p) = j.prime {
        return Err(CliError(format!("this command needs data over Q, input is over F_{p}")));
    }
    let data = json::gm_from_json(&Rationals, &j)?;
    let cmp = epw::discriminant_sextic(&data)?;
    let mut r = Report::new(io.out);
    r.line(format!("det q(v): degree {}, {} terms", degree(&cmp.determinant), cmp.determinant.num_terms()));
    r.line(format!("quotient by λ^(n-1): degree {}", degree(&cmp.quotient)));
    match &cmp.ratio {
        Some(c) => r.line(format!("proportional to the EPW sextic (chart {}), ratio {}", cmp.chart, format_rational(c))),
        None => r.line("NOT proportional to the EPW sextic"),
    };
    let r = r.json(json::to_string(&json::discriminant_to_json(&cmp)));
    Ok(if cmp.proportional() { r } else { r.fail("discriminant quotient is not proportional to the EPW sextic") })
}

fn scan(prime: Option<u64>, budget: u128, io: Io) -> Result<Report> {
    let j: LagrangianJson = json::from_str(&read(&io)?)?;
    let p = match (j.prime, prime) {
        (Some(a), Some(b)) if a != b => return Err(CliError(format!("data is over F_{a}, --prime {b} given"))),
        (Some(a), _) => a,
        (None, Some(b)) => b,
        (None, None) => 3,
    };
    let fp = prime_field(p)?;
    projective::check_budget(p, 6, budget)?;
    let a = match j.prime {
        Some(_) => json::lagrangian_from_json(&fp, &j)?,
        None => subspace::reduce_mod_p(&json::lagrangian_from_json(&Rationals, &j)?, &fp)?,
    };
    let report = epw::stratify_scan(&fp, &a, budget)?;
    let mut r = Report::new(io.out);
    r.line(format!("P5(F_{p}): {} points", report.points));
    for (k, c) in report.histogram.iter().enumerate().filter(|(_, c)| **c > 0) {
        r.line(format!("  multiplicity {k}: {c}"));
    }
    for w in &report.warnings {
        r.line(format!("warning: {w}"));
    }
    let value = serde_json::to_value(&report).expect("report serializes");
    let r = r.value(&value);
    Ok(if report.oracle_disagreements > 0 {
        r.fail(format!("multiplicity routes disagree at {:?}", report.first_disagreement))
    } else {
        r
    })
}

fn dual<F: Field>(f: &F, j: &LagrangianJson, out: Option<PathBuf>) -> Result<Report> {
    let a = json::lagrangian_from_json(f, j)?;
    let d = epw::dual_lagrangian(f, &a)?;
    let back = epw::dual_lagrangian(f, &d)?;
    let mut r = Report::new(out);
    r.line(format!("dual Lagrangian over {}, certified isotropic", field_name(f)));
    r.line(format!("involution (A^⊥)^⊥ = A: {}", if back == a { "pass" } else { "FAIL" }));
    let r = r.json(json::to_string(&json::lagrangian_to_json(f, &d)));
    Ok(if back == a { r } else { r.fail("(A^⊥)^⊥ differs from A") })
}

fn sigma1<F: Field>(f: &F, j: &GmJson, out: Option<PathBuf>) -> Result<Report> {
    let data = json::gm_from_json(f, j)?;
    let locus = gm::sigma1(f, &data)?;
    let mut r = Report::new(out);
    r.line(match &locus {
        gm::Sigma1Locus::Empty => "Σ1 is empty".to_string(),
        gm::Sigma1Locus::Point(p) => format!("Σ1 is the point {:?}", p.iter().map(|x| f.format(x)).collect::<Vec<_>>()),
        gm::Sigma1Locus::Conic { .. } => "Σ1 is a conic, (s:t) ↦ s²·ss + st·st + t²·tt".to_string(),
    });
    Ok(r.value(&serde_json::to_value(json::sigma1_to_json(f, &locus)).expect("locus serializes")))
}

fn parse_gram(text: &str) -> Result<GramLattice> {
    let rows: Vec<Vec<i64>> = json::from_str(text)?;
    Ok(GramLattice::new(rows)?)
}

fn lattice_cmd(command: LatticeCommand, out: Option<PathBuf>) -> Result<Report> {
    let mut r = Report::new(out);
    let value = match command {
        LatticeCommand::Disc { gram } => {
            let d = parse_gram(&gram)?.discriminant();
            r.line(d.to_string());
            json!({ "discriminant": d.to_string() })
        }
        LatticeCommand::Signature { gram } => {
            let s = parse_gram(&gram)?.signature();
            r.line(format!("({}, {}, {})", s.positive, s.negative, s.zero));
            json!({ "positive": s.positive.to_string(), "negative": s.negative.to_string(), "zero": s.zero.to_string() })
        }
        LatticeCommand::Lambda => {
            let l = lattice::lambda_lattice();
            let s = l.signature();
            r.line(format!("rank {}, signature ({}, {}), discriminant {}", l.rank(), s.positive, s.negative, l.discriminant()));
            json!({
                "rank": l.rank().to_string(),
                "signature": [s.positive.to_string(), s.negative.to_string()],
                "discriminant": l.discriminant().to_string(),
                "gram": l.gram().iter().map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            })
        }
        LatticeCommand::Dd { d } => {
            let c = lattice::dd_components(d);
            let name = match c {
                Components::Empty => "empty",
                Components::One => "one",
                Components::Two => "two",
            };
            r.line(name);
            json!({ "d": d.to_string(), "components": name })
        }
        LatticeCommand::K3 { d } => {
            let k = lattice::k3_associated(d)?;
            r.line(k.to_string());
            json!({ "d": d.to_string(), "k3_associated": k })
        }
        LatticeCommand::Hodge { n } => {
            let h = lattice::hodge_diamond(n)?;
            for row in &h.rows {
                r.line(row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
            }
            let strs = |v: &[u32]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
            json!({
                "n": n.to_string(),
                "rows": h.rows.iter().map(|row| strs(row)).collect::<Vec<_>>(),
                "vanishing": strs(&h.vanishing),
            })
        }
        LatticeCommand::Moduli { n } => {
            let m = lattice::moduli_dimension(n)?;
            r.line(m.to_string());
            json!({ "n": n.to_string(), "moduli_dimension": m.to_string() })
        }
    };
    // lattice answers are short; JSON is written only on request
    if r.out.is_some() {
        return Ok(r.value(&value));
    }
    Ok(r)
}
