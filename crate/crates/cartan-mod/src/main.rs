use std::path::PathBuf;
use std::process::ExitCode;

use cartan_core::liealg::AlgebraKind;
use cartan_mod::job::{self, Command, Format, JobError, JobSpec};
use cartan_mod::text;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "cartan-mod", version, about = "Graded Cartan type Lie algebras in characteristic p")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Dimension and canonical grading table.
    Info(Common),
    /// Seeded Jacobi/anticommutativity trials, simplicity and form membership.
    Verify(Common),
    /// Standard grading induced by a homomorphism.
    Grade(Common),
    /// Conjugate commuting generators into the standard torus.
    Diagonalize(Common),
    /// Diagonalize and compare the eigenspace grading with the standard one.
    Standardize(Common),
}

#[derive(Copy, Clone, ValueEnum)]
enum OutFormat {
    Json,
    Text,
}

#[derive(Args)]
struct Common {
    /// W, S, S1, H, H2, K or K1.
    #[arg(long)]
    kind: String,
    #[arg(long)]
    p: u32,
    /// Comma separated, e.g. 1,1.
    #[arg(long)]
    n: String,
    /// e.g. "e1->1, e2->(0,1)".
    #[arg(long)]
    hom: Option<String>,
    /// Codomain of --hom, e.g. "Z x Z/4"; defaults to Z^k.
    #[arg(long)]
    group: Option<String>,
    /// JSON file with the generators.
    #[arg(long)]
    gens: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, value_enum, default_value_t = OutFormat::Json)]
    format: OutFormat,
}

fn job_of(command: Command, c: &Common) -> Result<JobSpec, JobError> {
    let kind = AlgebraKind::parse(&c.kind)
        .ok_or_else(|| JobError::Invalid { kind: "MalformedInput", message: format!("unknown kind {:?}", c.kind) })?;
    let n = text::parse_n(&c.n)?;
    let gens = match &c.gens {
        Some(path) => {
            let raw = std::fs::read_to_string(path).map_err(|e| JobError::Invalid {
                kind: "MalformedInput",
                message: format!("cannot read {}: {e}", path.display()),
            })?;
            Some(serde_json::from_str(&raw).map_err(|e| JobError::Invalid {
                kind: "MalformedInput",
                message: format!("{}: {e}", path.display()),
            })?)
        }
        None => None,
    };
    Ok(JobSpec {
        command,
        kind,
        p: c.p,
        n,
        hom: c.hom.clone(),
        group: c.group.clone(),
        gens,
        seed: c.seed,
        trials: c.trials,
    })
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, common) = match &cli.command {
        Cmd::Info(c) => (Command::Info, c),
        Cmd::Verify(c) => (Command::Verify, c),
        Cmd::Grade(c) => (Command::Grade, c),
        Cmd::Diagonalize(c) => (Command::Diagonalize, c),
        Cmd::Standardize(c) => (Command::Standardize, c),
    };
    let format = match common.format {
        OutFormat::Json => Format::Json,
        OutFormat::Text => Format::Text,
    };
    let result = job_of(command, common).and_then(|j| job::run(&j));
    let (value, code) = match result {
        Ok(r) => (r.value, if r.ok { 0 } else { 1 }),
        Err(e) => (e.to_json(), e.exit_code()),
    };
    if let Err(msg) = emit(&job::render(&value, format), common.out.as_ref()) {
        eprintln!("{msg}");
        return ExitCode::from(2);
    }
    ExitCode::from(code as u8)
}
