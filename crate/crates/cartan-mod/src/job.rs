//! Job descriptions, validation and execution for the command-line front end.

use std::fmt::Write as _;
use std::sync::Arc;

use cartan_core::diag::{diagonalize_with, standardize_with, Mode};
use cartan_core::field::is_prime;
use cartan_core::grading::{grading_from_quasitorus, standard_grading, verify_grading, QuasiTorusRep};
use cartan_core::liealg::{AlgebraKind, FormKind, LieAlgebra};
use cartan_core::{Field, Shape};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::json;
use crate::text::{self, ParseError};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Info,
    Verify,
    Grade,
    Diagonalize,
    Standardize,
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Text,
}

/// Dimension above which `verify` skips the simplicity check.
pub const SIMPLICITY_CAP: usize = 2000;

#[derive(Clone, Debug)]
pub struct JobSpec {
    pub command: Command,
    pub kind: AlgebraKind,
    pub p: u32,
    pub n: Vec<u32>,
    /// Homomorphism in the notation of [`text::parse_hom`].
    pub hom: Option<String>,
    /// Codomain of `hom` in the notation of [`text::parse_group`].
    pub group: Option<String>,
    /// Generator list as read from the `--gens` file.
    pub gens: Option<Value>,
    pub seed: u64,
    pub trials: usize,
}

impl JobSpec {
    pub fn new(command: Command, kind: AlgebraKind, p: u32, n: &[u32]) -> Self {
        JobSpec { command, kind, p, n: n.to_vec(), hom: None, group: None, gens: None, seed: 0, trials: 100 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JobError {
    /// Unusable job description or input files; exit status 2.
    Invalid { kind: &'static str, message: String },
    /// A library operation refused the input; exit status 1.
    Module(cartan_core::Error),
}

impl JobError {
    pub fn exit_code(&self) -> i32 {
        match self {
            JobError::Invalid { .. } => 2,
            JobError::Module(_) => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        let (kind, message) = match self {
            JobError::Invalid { kind, message } => (*kind, message.clone()),
            JobError::Module(e) => (e.kind(), e.to_string()),
        };
        json!({"schema": json::SCHEMA, "error": {"kind": kind, "message": message}})
    }
}

impl From<cartan_core::Error> for JobError {
    fn from(e: cartan_core::Error) -> Self {
        JobError::Module(e)
    }
}

impl From<ParseError> for JobError {
    fn from(e: ParseError) -> Self {
        JobError::Invalid { kind: "MalformedInput", message: e.0 }
    }
}

fn invalid(kind: &'static str, message: impl Into<String>) -> JobError {
    JobError::Invalid { kind, message: message.into() }
}

/// Checks the job before any algebra is built.
pub fn validate(job: &JobSpec) -> Result<(), JobError> {
    if job.p == 2 || !is_prime(job.p as u64) {
        return Err(invalid("InvalidCharacteristic", format!("p = {} is not an odd prime", job.p)));
    }
    if job.n.is_empty() || job.n.contains(&0) {
        return Err(invalid("InvalidShape", "n must be a nonempty tuple of positive integers"));
    }
    let m = job.n.len();
    if let Err(e) = job.kind.check(m) {
        return Err(invalid("KindConstraintViolation", e.to_string()));
    }
    let min_n = job.n.iter().copied().min().unwrap_or(0);
    if job.p == 3 {
        match job.kind.form_kind() {
            FormKind::W if m == 1 && job.n[0] == 1 => {
                return Err(invalid("ExcludedConfiguration", "W(1;1) in characteristic 3"));
            }
            FormKind::H if m == 2 && min_n == 1 => {
                return Err(invalid("ExcludedConfiguration", "H(2;n) with min(n) = 1 in characteristic 3"));
            }
            _ => {}
        }
    }
    let needs = match job.command {
        Command::Grade if job.hom.is_none() => Some("grade needs --hom"),
        Command::Diagonalize | Command::Standardize if job.gens.is_none() => Some("this command needs --gens"),
        _ => None,
    };
    if let Some(msg) = needs {
        return Err(invalid("MissingArgument", msg));
    }
    Ok(())
}

/// Output of a successful run; `ok` is false when a verification failed.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub value: Value,
    pub ok: bool,
}

fn build(job: &JobSpec) -> Result<Arc<LieAlgebra>, JobError> {
    let f = Field::prime(job.p)?;
    let shape = Shape::new(&f, &job.n)?;
    Ok(LieAlgebra::shared(job.kind, &shape)?)
}

fn quasitorus(job: &JobSpec, alg: &Arc<LieAlgebra>) -> Result<QuasiTorusRep, JobError> {
    let v = job.gens.as_ref().ok_or_else(|| invalid("MissingArgument", "missing --gens"))?;
    let (gens, orders) = json::parse_generators(alg.shape(), v)?;
    Ok(QuasiTorusRep::new(alg.clone(), gens, orders)?)
}

pub fn run(job: &JobSpec) -> Result<Report, JobError> {
    validate(job)?;
    let alg = build(job)?;
    let mut out = json!({"schema": json::SCHEMA, "command": command_name(job.command), "algebra": json::algebra(&alg)});
    let mut ok = true;
    match job.command {
        Command::Info => {
            let table = alg.canonical_grading_table();
            out["dim"] = json!(alg.dim());
            out["dpa_dim"] = json!(alg.shape().dim());
            out["canonical_support"] = json!(table.iter().map(|&(d, _)| d).collect::<Vec<_>>());
            out["canonical_grading"] =
                json!(table.iter().map(|&(d, c)| json!({"degree": d, "dim": c})).collect::<Vec<_>>());
        }
        Command::Verify => {
            let mut rng = ChaCha8Rng::seed_from_u64(job.seed);
            let mut failures = 0;
            for _ in 0..job.trials {
                let a = alg.random_element(&mut rng, 3);
                let b = alg.random_element(&mut rng, 3);
                let c = alg.random_element(&mut rng, 3);
                if !alg.check_axioms(&a, &b, &c) {
                    failures += 1;
                }
            }
            let simple = match alg.is_ideal_free(SIMPLICITY_CAP) {
                Ok(s) => json!(s),
                Err(cartan_core::Error::DimensionCapExceeded { .. }) => Value::Null,
                Err(e) => return Err(e.into()),
            };
            let forms = alg.verify_form_membership();
            ok = failures == 0 && simple != json!(false) && forms;
            out["dim"] = json!(alg.dim());
            out["checks"] = json!({
                "axioms": {"trials": job.trials, "seed": job.seed, "failures": failures},
                "simple": simple,
                "form_membership": forms,
            });
            out["ok"] = json!(ok);
        }
        Command::Grade => {
            let m = alg.shape().m();
            let group = job.group.as_deref().map(|g| text::parse_group(g, job.p)).transpose()?;
            let hom = text::parse_hom(job.hom.as_deref().unwrap_or_default(), m, group.as_ref())?;
            let gr = standard_grading(&alg, &hom)?;
            let cert = verify_grading(&gr);
            ok = cert.ok;
            out["grading"] = json::grading(&gr);
            out["certificate"] = json!({"ok": cert.ok, "pairs_checked": cert.pairs_checked});
        }
        Command::Diagonalize => {
            let q = quasitorus(job, &alg)?;
            let res = diagonalize_with(&q, Mode::Linear)?;
            let gr = grading_from_quasitorus(&q)?;
            out["conjugation"] = json::conjugation(&res);
            out["grading"] = json::grading(&gr);
            ok = out["conjugation"]["certificates"]["in_torus"] == json!(true)
                && out["conjugation"]["certificates"]["in_aut_group"] == json!(true);
        }
        Command::Standardize => {
            let q = quasitorus(job, &alg)?;
            let st = standardize_with(&q, Mode::Linear)?;
            out["conjugation"] = json::conjugation(&st.conjugation);
            out["original"] = json::grading(&st.original);
            out["standard"] = json::grading(&st.standard);
            out["hom"] = json::hom(&st.hom);
            out["isomorphic"] = json!(st.isomorphic);
            ok = st.isomorphic
                && out["conjugation"]["certificates"]["in_torus"] == json!(true)
                && out["conjugation"]["certificates"]["in_aut_group"] == json!(true);
        }
    }
    Ok(Report { value: out, ok })
}

pub fn command_name(c: Command) -> &'static str {
    match c {
        Command::Info => "info",
        Command::Verify => "verify",
        Command::Grade => "grade",
        Command::Diagonalize => "diagonalize",
        Command::Standardize => "standardize",
    }
}

pub fn render(v: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(v).expect("values serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = String::new();
            render_text(&mut s, v, 0);
            s
        }
    }
}

fn is_leaf(v: &Value) -> bool {
    match v {
        Value::Array(a) => a.iter().all(|x| !x.is_object() && !x.is_array()) || a.iter().all(|x| x.is_number()),
        Value::Object(_) => false,
        _ => true,
    }
}

/// Indented `key: value` lines; flat arrays stay on one line.
fn render_text(s: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                if is_leaf(x) {
                    let _ = writeln!(s, "{pad}{k}: {}", leaf(x));
                } else {
                    let _ = writeln!(s, "{pad}{k}:");
                    render_text(s, x, indent + 1);
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                if is_leaf(x) {
                    let _ = writeln!(s, "{pad}- {}", leaf(x));
                } else {
                    let _ = writeln!(s, "{pad}-");
                    render_text(s, x, indent + 1);
                }
            }
        }
        x => {
            let _ = writeln!(s, "{pad}{}", leaf(x));
        }
    }
}

fn leaf(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        x => x.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn excluded_configurations() {
        let bad = [(AlgebraKind::W, 3, vec![1]), (AlgebraKind::H2, 3, vec![1, 2]), (AlgebraKind::H, 3, vec![2, 1])];
        for (kind, p, n) in bad {
            let e = validate(&JobSpec::new(Command::Info, kind, p, &n)).unwrap_err();
            assert_eq!(e.exit_code(), 2);
            assert_eq!(e.to_json()["error"]["kind"], "ExcludedConfiguration");
        }
        for (kind, p, n) in
            [(AlgebraKind::W, 3, vec![2]), (AlgebraKind::H2, 3, vec![2, 2]), (AlgebraKind::W, 5, vec![1])]
        {
            validate(&JobSpec::new(Command::Info, kind, p, &n)).unwrap();
        }
    }

    #[test]
    fn basic_validation() {
        let e = validate(&JobSpec::new(Command::Info, AlgebraKind::W, 2, &[1])).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(validate(&JobSpec::new(Command::Info, AlgebraKind::W, 9, &[1])).is_err());
        assert!(validate(&JobSpec::new(Command::Info, AlgebraKind::H2, 5, &[1, 1, 1])).is_err());
        assert!(validate(&JobSpec::new(Command::Grade, AlgebraKind::W, 5, &[1])).is_err());
    }

    #[test]
    fn info_w() {
        let r = run(&JobSpec::new(Command::Info, AlgebraKind::W, 5, &[1])).unwrap();
        assert_eq!(r.value["dim"], 5);
        assert_eq!(r.value["canonical_support"], json!([-1, 0, 1, 2, 3]));
    }

    #[test]
    fn text_rendering() {
        let r = run(&JobSpec::new(Command::Info, AlgebraKind::W, 5, &[1])).unwrap();
        let t = render(&r.value, Format::Text);
        assert!(t.contains("dim: 5\n"));
        assert!(t.contains("canonical_support: [-1,0,1,2,3]\n"));
    }
}
