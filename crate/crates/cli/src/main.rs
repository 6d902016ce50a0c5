//! `jetlie`: generate structures, verify them, solve for r-matrices and run
//! the full report.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 solver inconsistency,
//! 3 input error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use jetlie::bialgebra::{
    alpha_family_13_table, alpha_family_d_lambda_table, analyze_cocycle, coboundary_table, derive_cocycle_from_omega,
    r_from_lambda, r_from_phi, AlphaTable, RMatrix,
};
use jetlie::phi::{phi_corollary1, phi_d_lambda, phi_from_pair, PhiSeries};
use jetlie::poisson::{
    g3_example, lambda_from_mu, omega_from_lambda, omega_from_phi, omega_special, MuSeq, OmegaTable, RelationMode,
};
use jetlie::rational::{self, Rational};
use jetlie::report::{
    cocycle_checks, cojacobi_checks, cybe_check, eq8_checks, inversion_checks, jacobi_checks, multiplicativity_checks,
    pde10_check, rng_for, run_report, run_report_checked, Check, SuiteConfig, DEFAULT_SEED,
};
use jetlie::series::TruncSeries;
use jetlie::structure::StructureFile;
use jetlie::Error;

#[derive(Parser)]
#[command(name = "jetlie", version, about = "Exact Poisson-Lie structures on jet groups and their bialgebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a structure and write it as JSON.
    Gen(GenArgs),
    /// Run one residual suite on a structure file.
    Verify(VerifyArgs),
    /// Find r with alpha = dr from an alpha file.
    SolveR(SolveArgs),
    /// Run the full acceptance suite.
    Report(ReportArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    /// The explicit bracket family with mu_{d+1} = 1.
    Special,
    /// Classified structure from a mu-sequence.
    Mu,
    /// The one-parameter generating series phi_{d,lambda}.
    PhiLambda,
    /// phi = uv(u^d - v^d).
    Corollary,
    /// phi from a pair (f, g).
    Pair,
    /// The cocycle family with r = e_0 ^ e_d up to normalization.
    Alpha13,
    /// The three-dimensional example on G_3.
    G3,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Mu,
    Lambda,
    Omega,
    Phi,
    R,
    Alpha,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Strict,
    Solve,
}

impl From<Mode> for RelationMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Strict => RelationMode::Strict,
            Mode::Solve => RelationMode::Solve,
        }
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long, default_value_t = 1)]
    d: usize,
    /// mu_{d+1}, mu_{d+2}, ... as comma-separated "p/q" values.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_rational)]
    mu: Vec<Rational>,
    /// The deformation parameter of phi_{d,lambda}.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_rational)]
    lambda: Option<Rational>,
    /// Coefficients of f from u^0, for the pair family.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_rational)]
    f: Vec<Rational>,
    /// Coefficients of g from u^0, for the pair family.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, value_parser = parse_rational)]
    g: Vec<Rational>,
    #[arg(long = "N", alias = "n", default_value_t = 8)]
    n: usize,
    #[arg(long, default_value_t = 12)]
    cap: usize,
    /// Series order for phi files; defaults to 2N.
    #[arg(long)]
    ord: Option<u32>,
    #[arg(long, value_enum)]
    kind: Option<Kind>,
    #[arg(long, value_enum, default_value = "strict")]
    mode: Mode,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Jacobi,
    Mult,
    Pde10,
    Eq8,
    Inversion,
    Cocycle,
    Cybe,
    Cojacobi,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Jacobi => "jacobi",
            Suite::Mult => "mult",
            Suite::Pde10 => "pde10",
            Suite::Eq8 => "eq8",
            Suite::Inversion => "inversion",
            Suite::Cocycle => "cocycle",
            Suite::Cybe => "cybe",
            Suite::Cojacobi => "cojacobi",
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    /// Structure file to check.
    input: PathBuf,
    /// Where to write the JSON report.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Jet order for suites that work on G_N; defaults to the file's own
    /// order, or 8 for phi files.
    #[arg(long = "N", alias = "n")]
    n: Option<usize>,
    #[arg(long, default_value_t = 6)]
    symbolic_max: usize,
    #[arg(long, default_value_t = 50)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value = "strict")]
    mode: Mode,
}

#[derive(Args)]
struct SolveArgs {
    /// Alpha file.
    input: PathBuf,
    /// Where to write the r file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Where to write the per-weight report.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long = "N", alias = "n", default_value_t = 8)]
    n: usize,
    #[arg(long, default_value_t = 12)]
    cap: usize,
    #[arg(long, default_value_t = 6)]
    symbolic_max: usize,
    #[arg(long, default_value_t = 50)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Run the suite twice and add a check that the payloads match.
    #[arg(long)]
    check_determinism: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

enum Failure {
    Verification,
    Inconsistent(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Inconsistent { .. } => Failure::Inconsistent(e.to_string()),
            e => Failure::Input(e.to_string()),
        }
    }
}

type CliResult = Result<(), Failure>;

/// `println!` that tolerates a closed stdout (for example `| head`).
macro_rules! say {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

fn input_error(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

fn write_text(path: &Path, text: &str) -> CliResult {
    fs::write(path, format!("{text}\n")).map_err(|e| input_error(format!("cannot write {}: {e}", path.display())))
}

fn emit(file: &StructureFile, out: Option<&Path>) -> CliResult {
    let text = file.to_json_string()?;
    match out {
        Some(p) => write_text(p, &text),
        None => {
            say!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<StructureFile, Failure> {
    let text = fs::read_to_string(path).map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
    StructureFile::from_json_str(&text).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn unsupported(family: &str, kind: &str) -> Failure {
    input_error(format!("the {family} family cannot produce a {kind} file"))
}

fn kind_name(k: Kind) -> &'static str {
    match k {
        Kind::Mu => "mu",
        Kind::Lambda => "lambda",
        Kind::Omega => "omega",
        Kind::Phi => "phi",
        Kind::R => "r",
        Kind::Alpha => "alpha",
    }
}

/// A structure given by its generating series, written in the requested kind.
fn from_phi(
    family: &str,
    phi: &PhiSeries,
    d: usize,
    lambda_def: Option<Rational>,
    kind: Kind,
    a: &GenArgs,
) -> Result<StructureFile, Failure> {
    Ok(match kind {
        Kind::Phi => StructureFile::from_phi(Some(d), lambda_def, phi),
        Kind::Omega => StructureFile::from_omega(Some(d), &omega_from_phi(phi, a.n)?),
        Kind::R => StructureFile::from_r(&r_from_phi(phi, a.cap)?),
        Kind::Alpha => StructureFile::from_alpha(&coboundary_table(&r_from_phi(phi, a.cap)?)),
        k => return Err(unsupported(family, kind_name(k))),
    })
}

fn cmd_gen(a: &GenArgs) -> CliResult {
    if a.n == 0 {
        return Err(input_error("N must be at least 1"));
    }
    let ord = a.ord.unwrap_or(2 * a.n as u32);
    let d = a.d;
    let file = match a.family {
        Family::Special => match a.kind.unwrap_or(Kind::Omega) {
            Kind::Omega => StructureFile::from_omega(Some(d), &omega_special(d, a.n)?),
            Kind::Alpha => StructureFile::from_alpha(&derive_cocycle_from_omega(&omega_special(d, a.n)?)?),
            k => return Err(unsupported("special", kind_name(k))),
        },
        Family::Mu => {
            if a.mu.is_empty() {
                return Err(input_error("--mu is required for the mu family"));
            }
            let kind = a.kind.unwrap_or(Kind::Lambda);
            let mode = RelationMode::from(a.mode);
            // the phi route needs the table on G_{ord-1}
            let size = if kind == Kind::Phi { (ord as usize).saturating_sub(1).max(a.n) } else { a.n };
            let mu = MuSeq::from_tail(d, size, &a.mu)?;
            let lam = lambda_from_mu(&mu, mode)?;
            match kind {
                Kind::Mu => {
                    let mu = if mode == RelationMode::Solve { mu.enforce_relation() } else { mu };
                    StructureFile::from_mu(&mu)
                }
                Kind::Lambda => StructureFile::from_lambda(Some(d), &lam),
                Kind::Omega => StructureFile::from_omega(Some(d), &omega_from_lambda(&lam)),
                Kind::Phi => StructureFile::from_phi(Some(d), None, &lam.truncate(ord as usize - 1).to_phi()),
                Kind::R => StructureFile::from_r(&r_from_lambda(&lam)),
                Kind::Alpha => StructureFile::from_alpha(&coboundary_table(&r_from_lambda(&lam))),
            }
        }
        Family::PhiLambda => {
            let lam = a.lambda.clone().ok_or_else(|| input_error("--lambda is required for the phi-lambda family"))?;
            match a.kind.unwrap_or(Kind::Phi) {
                Kind::Alpha => StructureFile::from_alpha(&alpha_family_d_lambda_table(d, &lam, a.cap)?),
                kind => {
                    let need = if kind == Kind::R { ord.max(2 * a.cap as u32 + 2) } else { ord };
                    let phi = phi_d_lambda(d as u32, &lam, need)?;
                    from_phi("phi-lambda", &phi, d, Some(lam), kind, a)?
                }
            }
        }
        Family::Corollary => {
            let kind = a.kind.unwrap_or(Kind::Phi);
            let need = if matches!(kind, Kind::R | Kind::Alpha) { ord.max(2 * a.cap as u32 + 2) } else { ord };
            from_phi("corollary", &phi_corollary1(d as u32, need)?, d, None, kind, a)?
        }
        Family::Pair => {
            if a.f.is_empty() || a.g.is_empty() {
                return Err(input_error("--f and --g are required for the pair family"));
            }
            let mu = a.mu.first().cloned().unwrap_or_else(rational::one);
            let kind = a.kind.unwrap_or(Kind::Phi);
            let need = if matches!(kind, Kind::R | Kind::Alpha) { ord.max(2 * a.cap as u32 + 2) } else { ord };
            let f = TruncSeries::univariate(a.f.clone(), need);
            let g = TruncSeries::univariate(a.g.clone(), need);
            from_phi("pair", &phi_from_pair(&f, &g, d as u32, &mu, need)?, d, None, kind, a)?
        }
        Family::Alpha13 => match a.kind.unwrap_or(Kind::Alpha) {
            Kind::Alpha => StructureFile::from_alpha(&alpha_family_13_table(d, a.cap)?),
            k => return Err(unsupported("alpha13", kind_name(k))),
        },
        Family::G3 => match a.kind.unwrap_or(Kind::Omega) {
            Kind::Omega => StructureFile::from_omega(None, &g3_example()),
            Kind::Alpha => StructureFile::from_alpha(&derive_cocycle_from_omega(&g3_example())?),
            k => return Err(unsupported("g3", kind_name(k))),
        },
    };
    emit(&file, a.out.as_deref())
}

fn omega_of(file: &StructureFile, a: &VerifyArgs) -> Result<OmegaTable, Failure> {
    Ok(match file {
        StructureFile::Omega { .. } => {
            let w = file.omega()?;
            match a.n {
                Some(n) if n < w.n() => w.truncate(n)?,
                _ => w,
            }
        }
        StructureFile::Lambda { .. } => omega_from_lambda(&truncated(file.lambda()?, a.n)),
        StructureFile::Mu { .. } => omega_from_lambda(&truncated(lambda_from_mu(&file.mu()?, a.mode.into())?, a.n)),
        StructureFile::Phi { .. } => {
            let phi = file.phi()?;
            omega_from_phi(&phi, a.n.unwrap_or((phi.ord() / 2) as usize))?
        }
        other => return Err(input_error(format!("a {} file does not define a bracket table", other.kind()))),
    })
}

fn truncated(t: jetlie::poisson::LambdaTable, n: Option<usize>) -> jetlie::poisson::LambdaTable {
    match n {
        Some(n) if n < t.n() => t.truncate(n),
        _ => t,
    }
}

fn phi_of(file: &StructureFile) -> Result<PhiSeries, Failure> {
    match file {
        StructureFile::Phi { .. } => Ok(file.phi()?),
        StructureFile::Lambda { .. } => Ok(file.lambda()?.to_phi()),
        other => Err(input_error(format!("a {} file does not define a generating series", other.kind()))),
    }
}

fn alpha_of(file: &StructureFile) -> Result<AlphaTable, Failure> {
    match file {
        StructureFile::Alpha { .. } => Ok(file.alpha()?),
        StructureFile::R { .. } => Ok(coboundary_table(&file.r()?)),
        other => Err(input_error(format!("a {} file does not define a cochain", other.kind()))),
    }
}

fn r_of(file: &StructureFile, mode: RelationMode) -> Result<RMatrix, Failure> {
    match file {
        StructureFile::R { .. } => Ok(file.r()?),
        StructureFile::Lambda { .. } => Ok(r_from_lambda(&file.lambda()?)),
        StructureFile::Mu { .. } => Ok(r_from_lambda(&lambda_from_mu(&file.mu()?, mode)?)),
        other => Err(input_error(format!("a {} file does not define an r-matrix", other.kind()))),
    }
}

fn cmd_verify(a: &VerifyArgs) -> CliResult {
    let file = load(&a.input)?;
    let mut rng = rng_for(a.seed, &[]);
    let mut checks: Vec<Check> = match a.suite {
        Suite::Jacobi => jacobi_checks(&omega_of(&file, a)?),
        Suite::Mult => multiplicativity_checks(&omega_of(&file, a)?, a.symbolic_max, a.samples, &mut rng),
        Suite::Pde10 => vec![pde10_check(&phi_of(&file)?)],
        Suite::Eq8 => {
            let phi = phi_of(&file)?;
            eq8_checks(&phi, a.n.unwrap_or(8), a.samples, &mut rng)
        }
        Suite::Inversion => {
            let phi = phi_of(&file)?;
            let n = a.n.unwrap_or((phi.ord() / 2).min(8) as usize);
            if 2 * n > phi.ord() as usize {
                return Err(input_error(format!(
                    "a series of order {} cannot check inversion on G_{n}; it needs order {}",
                    phi.ord(),
                    2 * n
                )));
            }
            inversion_checks(&phi, n, a.samples, &mut rng)
        }
        Suite::Cocycle => cocycle_checks(&alpha_of(&file)?),
        Suite::Cojacobi => cojacobi_checks(&alpha_of(&file)?),
        Suite::Cybe => vec![cybe_check(&r_of(&file, a.mode.into())?)],
    };
    checks.sort_by(|x, y| x.name.cmp(&y.name).then_with(|| x.indices.cmp(&y.indices)));
    let failed: Vec<&Check> = checks.iter().filter(|c| !c.passed()).collect();
    let passed = failed.is_empty();
    say!(
        "verify {} on {} file: {} of {} checks passed",
        a.suite.name(),
        file.kind(),
        checks.len() - failed.len(),
        checks.len()
    );
    for c in &failed {
        say!("FAIL {}: {}", c.label(), c.residual.as_deref().unwrap_or(""));
    }
    if let Some(path) = &a.report {
        let report = json!({
            "suite": a.suite.name(),
            "input_kind": file.kind(),
            "seed": a.seed,
            "passed": passed,
            "checks": checks,
        });
        write_text(path, &serde_json::to_string_pretty(&report).expect("report serializes"))?;
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn cmd_solve_r(a: &SolveArgs) -> CliResult {
    let file = load(&a.input)?;
    let alpha = alpha_of(&file)?;
    let report = analyze_cocycle(&alpha);
    for w in &report.weights {
        say!(
            "weight {:>3}: kernel {} {}",
            w.weight,
            w.kernel_dim,
            if w.solved { "solved" } else { "INCONSISTENT" }
        );
    }
    let bad = report.first_inconsistent();
    if let Some(path) = &a.report {
        let payload = json!({
            "input_kind": file.kind(),
            "cap": alpha.cap(),
            "solved": bad.is_none(),
            "first_inconsistent_weight": bad,
            "weights": report.weights,
        });
        write_text(path, &serde_json::to_string_pretty(&payload).expect("report serializes"))?;
    }
    if let Some(weight) = bad {
        return Err(Failure::Inconsistent(Error::Inconsistent { weight }.to_string()));
    }
    let r = StructureFile::from_r(&report.r);
    match &a.out {
        Some(p) => write_text(p, &r.to_json_string()?)?,
        None => {
            let comps: Vec<String> = report
                .r
                .nonzero()
                .filter(|(i, j, _)| i < j)
                .map(|(i, j, v)| format!("({i},{j}) {}", rational::format(v)))
                .collect();
            say!("r: {}", if comps.is_empty() { "0".to_string() } else { comps.join(", ") });
        }
    }
    Ok(())
}

fn cmd_report(a: &ReportArgs) -> CliResult {
    let cfg = SuiteConfig {
        n: a.n,
        cap: a.cap,
        symbolic_max: a.symbolic_max,
        samples: a.samples,
        seed: a.seed,
    };
    let report = if a.check_determinism { run_report_checked(&cfg)? } else { run_report(&cfg)? };
    say!("{}", report.summary_text().trim_end());
    if let Some(p) = &a.out {
        write_text(p, &report.to_json_string()?)?;
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Verify(a) => cmd_verify(a),
        Command::SolveR(a) => cmd_solve_r(a),
        Command::Report(a) => cmd_report(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Inconsistent(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
