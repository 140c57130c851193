//! Command-line front end. Exit codes: 0 success, 1 domain or I/O error, 2 usage error.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::arith::Fp;
use crate::checks::run_suite;
use crate::cycles::{predict_scalar_cycle, predict_vector_cycle};
use crate::error::Error;
use crate::galois::{frob_charpoly, reduction_plan};
use crate::hecke::{eigenvalue, hecke_apply, HeckeOptions, HeckeRequest};
use crate::qexp::{QExpansion, QIndex};
use crate::rep::Weight;
use crate::strata::{canonical_filtration_compute, eo_tables, partial_hasse_order, Phi};
use crate::theta::{big_theta, theta_j, theta_scalar};

#[derive(Parser, Debug)]
#[command(name = "siegel", version, about = "Exact arithmetic for mod p Siegel modular forms of degree 2")]
pub struct Cli {
    /// Evaluate coefficients and parameter grids on all cores.
    #[arg(long, global = true)]
    pub parallel: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Apply a theta operator to an SMF1 expansion.
    Theta(ThetaArgs),
    /// Apply T(ℓ^i) at target indices, or compute an eigenvalue.
    Hecke(HeckeArgs),
    /// Predict a theta cycle and analyse its low points.
    Cycle(CycleArgs),
    /// Ekedahl–Oort tables and partial Hasse vanishing orders.
    Strata {
        #[command(subcommand)]
        command: StrataCommand,
    },
    /// Frobenius characteristic polynomial from Hecke eigenvalues.
    Charpoly(CharpolyArgs),
    /// Weight-reduction bookkeeping.
    Plan(PlanArgs),
    /// Run invariant suites.
    Check(CheckArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ThetaOp {
    Scalar,
    Big,
    T1,
    T2,
    T3,
}

#[derive(Args, Debug)]
pub struct ThetaArgs {
    #[arg(long, value_enum)]
    pub op: ThetaOp,
    #[arg(long, default_value_t = 1)]
    pub iterations: u32,
    pub input: PathBuf,
    #[arg(short = 'o', long = "output")]
    pub output: PathBuf,
}

#[derive(Args, Debug)]
#[command(args_conflicts_with_subcommands = true)]
pub struct HeckeArgs {
    #[command(subcommand)]
    pub eigen: Option<HeckeCommand>,
    #[arg(long)]
    pub ell: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub power: u32,
    /// File of target indices, one `a b c` per line.
    #[arg(long)]
    pub targets: Option<PathBuf>,
    #[arg(long)]
    pub assume_complete: bool,
    pub input: Option<PathBuf>,
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum HeckeCommand {
    /// Eigenvalue of T(ℓ^i), checked at every computable index.
    Eigen {
        #[arg(long)]
        ell: u64,
        #[arg(long, default_value_t = 1)]
        power: u32,
        #[arg(long)]
        assume_complete: bool,
        input: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct CycleArgs {
    #[arg(long, conflicts_with = "vector", required_unless_present = "vector")]
    pub scalar: bool,
    #[arg(long)]
    pub vector: bool,
    #[arg(long)]
    pub p: i64,
    #[arg(long)]
    pub k: i64,
    #[arg(long, conflicts_with = "non_semi_ordinary")]
    pub semi_ordinary: bool,
    #[arg(long)]
    pub non_semi_ordinary: bool,
    /// w(Θ(F)) for the special semi-ordinary rows.
    #[arg(long)]
    pub theta_weight: Option<i64>,
}

#[derive(Subcommand, Debug)]
pub enum StrataCommand {
    /// Vanishing order of a partial Hasse invariant.
    Order {
        #[arg(long)]
        phi: Phi,
        #[arg(long)]
        variant: Option<u8>,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        cutoff: Option<u32>,
    },
    /// Elementary, final and canonical data of the four strata.
    Tables {
        /// Prime used to recompute canonical types.
        #[arg(long, default_value_t = 5)]
        p: u64,
    },
}

#[derive(Args, Debug)]
pub struct CharpolyArgs {
    #[arg(long)]
    pub ell: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub lam1: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub lam2: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub chi2: i64,
    #[arg(long)]
    pub k1: i64,
    #[arg(long)]
    pub k2: i64,
    #[arg(long)]
    pub p: u64,
}

#[derive(Args, Debug)]
pub struct PlanArgs {
    #[arg(long)]
    pub k1: i64,
    #[arg(long)]
    pub k2: i64,
    #[arg(long)]
    pub p: u64,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(long)]
    pub suite: String,
    /// Comma-separated primes.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub p: Vec<u64>,
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome = std::result::Result<String, Failure>;

fn json<T: Serialize>(v: &T) -> Outcome {
    serde_json::to_string_pretty(v).map_err(|e| Failure::Domain(e.to_string()))
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Domain(format!("cannot read {}: {e}", path.display())))
}

fn read_form(path: &Path) -> std::result::Result<QExpansion, Failure> {
    Ok(QExpansion::from_smf(&read(path)?)?)
}

fn write_form(path: &Path, f: &QExpansion) -> std::result::Result<(), Failure> {
    std::fs::write(path, f.to_smf()).map_err(|e| Failure::Domain(format!("cannot write {}: {e}", path.display())))
}

/// Parses target indices: one `a b c` triple per line, `#` starts a comment.
pub fn parse_targets(text: &str) -> crate::Result<BTreeSet<QIndex>> {
    let mut out = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let nums: Vec<i64> = body
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<i64>().map_err(|_| Error::parse(i + 1, format!("bad integer {s:?}"))))
            .collect::<crate::Result<_>>()?;
        if nums.len() != 3 {
            return Err(Error::parse(i + 1, "expected three integers a b c"));
        }
        out.insert(QIndex::new(nums[0], nums[1], nums[2]));
    }
    Ok(out)
}

#[derive(Serialize)]
struct Written<'a> {
    output: &'a str,
    indices: usize,
    weight: Weight,
}

fn written(path: &Path, f: &QExpansion) -> Outcome {
    json(&Written { output: &path.display().to_string(), indices: f.len(), weight: f.weight })
}

fn theta(a: &ThetaArgs) -> Outcome {
    let mut f = read_form(&a.input)?;
    match a.op {
        ThetaOp::Big => f = big_theta(&f, a.iterations)?,
        op => {
            for _ in 0..a.iterations {
                f = match op {
                    ThetaOp::Scalar => theta_scalar(&f)?,
                    ThetaOp::T1 => theta_j(&f, 1)?,
                    ThetaOp::T2 => theta_j(&f, 2)?,
                    _ => theta_j(&f, 3)?,
                };
            }
        }
    }
    write_form(&a.output, &f)?;
    written(&a.output, &f)
}

fn hecke(a: &HeckeArgs) -> Outcome {
    if let Some(HeckeCommand::Eigen { ell, power, assume_complete, input }) = &a.eigen {
        let f = read_form(input)?;
        let opts = HeckeOptions { assume_complete: *assume_complete, ..Default::default() };
        let r = eigenvalue(&f, *ell, *power, opts)?;
        if !r.consistent() {
            return Err(Failure::Domain(format!("not an eigenform for T({ell}^{power})")));
        }
        return json(&r);
    }
    let missing = |what: &str| Failure::Usage(format!("hecke requires {what}"));
    let ell = a.ell.ok_or_else(|| missing("--ell"))?;
    let targets = a.targets.as_ref().ok_or_else(|| missing("--targets"))?;
    let input = a.input.as_ref().ok_or_else(|| missing("an input file"))?;
    let output = a.output.as_ref().ok_or_else(|| missing("-o OUT"))?;
    let f = read_form(input)?;
    let req = HeckeRequest { ell, power: a.power, targets: parse_targets(&read(targets)?)? };
    let g = hecke_apply(&f, &req, HeckeOptions { assume_complete: a.assume_complete, ..Default::default() })?;
    write_form(output, &g)?;
    written(output, &g)
}

fn cycle(a: &CycleArgs) -> Outcome {
    let r = if a.vector {
        if a.theta_weight.is_some() {
            return Err(Failure::Usage("--theta-weight applies to scalar cycles only".into()));
        }
        predict_vector_cycle(a.p, a.k, a.semi_ordinary)?
    } else {
        predict_scalar_cycle(a.p, a.k, a.semi_ordinary, a.theta_weight)?
    };
    json(&r)
}

#[derive(Serialize)]
struct TablesReport {
    p: u64,
    records: Vec<crate::strata::EoRecord>,
    computed_matches: bool,
}

fn strata(c: &StrataCommand) -> Outcome {
    match c {
        StrataCommand::Order { phi, variant, p, cutoff } => json(&partial_hasse_order(*phi, *variant, *p, *cutoff)?),
        StrataCommand::Tables { p } => {
            let records = eo_tables();
            let mut ok = true;
            for r in &records {
                ok &= canonical_filtration_compute(r.phi, *p)? == r.canonical;
            }
            json(&TablesReport { p: *p, records, computed_matches: ok })
        }
    }
}

#[derive(Serialize)]
struct CharpolyReport {
    #[serde(flatten)]
    poly: crate::galois::FrobPoly,
    symplectic: bool,
}

fn charpoly(a: &CharpolyArgs) -> Outcome {
    let p = a.p;
    if !crate::arith::is_prime(p) || p < 5 {
        return Err(Failure::Domain(format!("p must be a prime ≥ 5, got {p}")));
    }
    let chi2 = Fp::new(a.chi2, p);
    if chi2.is_zero() {
        return Err(Failure::Domain("χ₂(ℓ) must be nonzero".into()));
    }
    let poly = frob_charpoly(Fp::new(a.lam1, p), Fp::new(a.lam2, p), chi2, a.ell, Weight::new(a.k1, a.k2), p)?;
    let symplectic = poly.is_symplectic();
    json(&CharpolyReport { poly, symplectic })
}

fn dispatch(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Theta(a) => theta(a),
        Command::Hecke(a) => hecke(a),
        Command::Cycle(a) => cycle(a),
        Command::Strata { command } => strata(command),
        Command::Charpoly(a) => charpoly(a),
        Command::Plan(a) => json(&reduction_plan(Weight::new(a.k1, a.k2), a.p)?),
        Command::Check(a) => {
            if a.p.is_empty() {
                return Err(Failure::Usage("check requires --p".into()));
            }
            let r = run_suite(&a.suite, &a.p)?;
            let text = json(&r)?;
            if r.pass {
                Ok(text)
            } else {
                Err(Failure::Domain(format!("{text}\ncheck failed")))
            }
        }
    }
}

/// Runs the CLI on `args`, writing results to `out` and diagnostics to `err`.
pub fn run_with<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = write!(if code == 0 { &mut *out as &mut dyn Write } else { err as &mut dyn Write }, "{}", e.render());
            return code;
        }
    };
    let threads = if cli.parallel { 0 } else { 1 };
    let result = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(|| dispatch(&cli)),
        Err(e) => Err(Failure::Domain(e.to_string())),
    };
    match result {
        Ok(text) => {
            let _ = writeln!(out, "{text}");
            0
        }
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

pub fn run() -> i32 {
    run_with(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr())
}
