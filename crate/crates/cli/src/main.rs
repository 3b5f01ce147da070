//! `logical-bm`: verify logical Bell-measurement schemes, compute bounds, and
//! evaluate success probabilities exactly or by Monte Carlo.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use logical_bm::engine::exact::DEFAULT_CAP;
use logical_bm::engine::{exact_success_probability, monte_carlo, necessity_check, ExactOptions, ExactResult};
use logical_bm::prob::{one_minus_half_pow, parse_probability};
use logical_bm::scheme::{build_optimal, build_static, sweep_candidates, AnyScheme, CandidateGeneratorSequence, Family, StaticKind};
use logical_bm::verify::{bound, check_conditions, heuristic_no_almost_stabilizer, heuristic_no_premature_logical};
use logical_bm::{codes, physical, Error, StabilizerCode};
use num_rational::BigRational;

use report::{Format, Row};

/// Seed used by `mc` when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 0x5EED_0B5E_55ED;

#[derive(Parser)]
#[command(name = "logical-bm", version, about = "Logical Bell measurements on stabilizer codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the optimality conditions and heuristics of a scheme.
    Verify {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long, default_value = "1/2")]
        pb: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Exact success probability by enumeration.
    Exact {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long, default_value = "1/2")]
        pb: String,
        /// Largest number of attempted BMs to enumerate (at most 64).
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Monte-Carlo estimate from two-code tableau trials.
    Mc {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long, default_value = "1/2")]
        pb: String,
        #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Upper bound 1 - (1 - P_B)^min(n1, n2).
    Bound {
        #[arg(long)]
        n1: usize,
        #[arg(long)]
        n2: usize,
        #[arg(long, default_value = "1/2")]
        pb: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Output states and pattern classes of the dual-rail linear-optics analyzer.
    Physbm {
        #[command(flatten)]
        out: OutArgs,
    },
    /// Simple static, optimized static and adaptive schemes on rotated d×d codes at P_B = 1/2.
    CompareRotated {
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(2..=5))]
        dmax: u64,
        /// Allow the d = 5 simple-static enumeration (2^25 patterns).
        #[arg(long)]
        big: bool,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CodeKind {
    Qpc,
    FiveQubit,
    Steane,
    Standard,
    Rotated,
    Tree,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchemeKind {
    Optimal,
    StaticSimple,
    StaticOptimized,
    StaticString,
}

#[derive(Args)]
struct CodeArgs {
    #[arg(long, value_enum)]
    code: Option<CodeKind>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    /// Tree branching factors, root first, e.g. `2,2,2`.
    #[arg(long, value_delimiter = ',')]
    branching: Vec<usize>,
    /// Code in the plain-text code format instead of a built-in family.
    #[arg(long, conflicts_with = "code")]
    code_file: Option<PathBuf>,
}

#[derive(Args)]
struct SchemeArgs {
    #[arg(long, value_enum, default_value = "optimal")]
    scheme: SchemeKind,
    /// Scheme in the plain-text scheme format, written for the selected code.
    #[arg(long)]
    scheme_file: Option<PathBuf>,
}

#[derive(Args)]
struct OutArgs {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Leave the wall-time column empty so output is byte-reproducible.
    #[arg(long)]
    no_timing: bool,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    workers: u64,
}

#[derive(Debug)]
enum Fail {
    Usage(String),
    Verification(String),
    Cap(String),
}

impl Fail {
    fn code(&self) -> u8 {
        match self {
            Fail::Verification(_) => 1,
            Fail::Usage(_) => 2,
            Fail::Cap(_) => 3,
        }
    }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        match e {
            Error::CapExceeded { attempts, cap } => Fail::Cap(format!(
                "{attempts} attempted BMs exceed the enumeration cap {cap}; raise --cap (at most 64) or use `mc`"
            )),
            Error::Probability(_) | Error::InvalidParams(_) | Error::Format(_) | Error::Parse(_) | Error::Unsupported(_) => {
                Fail::Usage(e.to_string())
            }
            other => Fail::Verification(other.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, Fail>;

impl OutArgs {
    fn emit(&self, text: &str) -> CliResult<()> {
        match &self.output {
            Some(path) => std::fs::write(path, text).map_err(|e| Fail::Usage(format!("{}: {e}", path.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

struct Resolved {
    scheme: AnyScheme,
    candidates: Option<CandidateGeneratorSequence>,
    label: String,
}

fn need(v: Option<usize>, flag: &str) -> CliResult<usize> {
    v.ok_or_else(|| Fail::Usage(format!("this code needs --{flag}")))
}

fn family(args: &CodeArgs) -> CliResult<Option<Family>> {
    let Some(kind) = args.code else { return Ok(None) };
    Ok(Some(match kind {
        CodeKind::Qpc => Family::Qpc(need(args.r, "r")?, need(args.m, "m")?),
        CodeKind::FiveQubit => Family::FiveQubit,
        CodeKind::Steane => Family::Steane,
        CodeKind::Standard => Family::Standard(need(args.r, "r")?, need(args.m, "m")?),
        CodeKind::Rotated => Family::Rotated(need(args.r, "r")?, need(args.m, "m")?),
        CodeKind::Tree => {
            if args.branching.is_empty() {
                return Err(Fail::Usage("the tree code needs --branching".into()));
            }
            Family::Tree(args.branching.clone())
        }
    }))
}

fn read(path: &PathBuf) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| Fail::Usage(format!("{}: {e}", path.display())))
}

fn resolve(code: &CodeArgs, scheme: &SchemeArgs) -> CliResult<Resolved> {
    let fam = family(code)?;
    let parent: StabilizerCode = match (&fam, &code.code_file) {
        (Some(f), _) => f.code()?,
        (None, Some(path)) => StabilizerCode::from_text(&read(path)?)?,
        (None, None) => return Err(Fail::Usage("select a code with --code or --code-file".into())),
    };
    let label = fam.as_ref().map(Family::label).unwrap_or_else(|| parent.family().to_string());
    if let Some(path) = &scheme.scheme_file {
        let (s, c) = AnyScheme::from_text(&read(path)?, &parent)?;
        return Ok(Resolved { scheme: s, candidates: c, label });
    }
    let kind = match scheme.scheme {
        SchemeKind::Optimal => {
            let f = fam.ok_or_else(|| Fail::Usage("built-in optimal schemes need a built-in --code; use --scheme-file".into()))?;
            let (s, c) = build_optimal(&f)?;
            return Ok(Resolved { scheme: s.into(), candidates: Some(c), label });
        }
        SchemeKind::StaticSimple => StaticKind::Simple,
        SchemeKind::StaticOptimized => StaticKind::Optimized,
        SchemeKind::StaticString => StaticKind::String,
    };
    Ok(Resolved { scheme: build_static(kind, &parent)?.into(), candidates: None, label })
}

fn seconds(out: &OutArgs, start: Instant) -> Option<f64> {
    (!out.no_timing).then(|| start.elapsed().as_secs_f64())
}

fn cmd_verify(code: &CodeArgs, scheme: &SchemeArgs, pb: &str, out: &OutArgs) -> CliResult<()> {
    let pb = parse_probability(pb)?;
    let r = resolve(code, scheme)?;
    let n = r.scheme.n();
    let b = bound(n, n, &pb)?;
    let necessity = necessity_check(&r.scheme)?;
    let AnyScheme::Adaptive(s) = &r.scheme else {
        out.emit(&report::verify_static(&r.label, r.scheme.id(), necessity, &pb, &b, out.format))?;
        return Err(Fail::Verification("static schemes do not satisfy the adaptive optimality conditions".into()));
    };
    let c = r.candidates.unwrap_or_else(|| sweep_candidates(s.code(), s.order(), s.bases()));
    let cond = check_conditions(s, &c)?;
    let h1 = heuristic_no_premature_logical(s)?;
    let h2 = heuristic_no_almost_stabilizer(s)?;
    out.emit(&report::verify(&r.label, &cond, h1, h2, necessity, &pb, &b, out.format))?;
    if cond.passed() {
        Ok(())
    } else {
        Err(Fail::Verification(format!("scheme {} violates the optimality conditions", s.id())))
    }
}

fn exact_opts(cap: usize, out: &OutArgs) -> ExactOptions {
    ExactOptions { cap, workers: out.workers as usize, ledger: false }
}

fn cmd_exact(code: &CodeArgs, scheme: &SchemeArgs, pb: &str, cap: usize, out: &OutArgs) -> CliResult<()> {
    let pb = parse_probability(pb)?;
    let r = resolve(code, scheme)?;
    let start = Instant::now();
    let e = exact_success_probability(&r.scheme, &pb, exact_opts(cap, out))?;
    let mut row = Row::new(r.scheme.id(), &r.label, r.scheme.n(), &pb);
    row.set_exact(&e.probability);
    row.wall_time_s = seconds(out, start);
    out.emit(&report::rows(&[row], out.format))
}

/// Exact values alongside MC only when they are cheap to get.
fn cheap_exact(scheme: &AnyScheme, pb: &BigRational, out: &OutArgs) -> CliResult<Option<ExactResult>> {
    if !scheme.is_adaptive() && scheme.n() > 20 {
        return Ok(None);
    }
    match exact_success_probability(scheme, pb, exact_opts(DEFAULT_CAP, out)) {
        Ok(e) => Ok(Some(e)),
        Err(Error::CapExceeded { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn cmd_mc(code: &CodeArgs, scheme: &SchemeArgs, pb: &str, trials: u64, seed: u64, out: &OutArgs) -> CliResult<()> {
    let pb = parse_probability(pb)?;
    let r = resolve(code, scheme)?;
    let start = Instant::now();
    let mc = monte_carlo(&r.scheme, &pb, trials, seed, out.workers as usize)?;
    let exact = cheap_exact(&r.scheme, &pb, out)?;
    let mut row = Row::new(r.scheme.id(), &r.label, r.scheme.n(), &pb);
    if let Some(e) = &exact {
        row.set_exact(&e.probability);
    }
    row.mc_estimate = Some(mc.estimate);
    row.mc_stderr = Some(mc.stderr);
    row.trials = Some(mc.trials);
    row.seed = Some(seed);
    row.wall_time_s = seconds(out, start);
    out.emit(&report::rows(&[row], out.format))?;
    if mc.logical_errors > 0 {
        return Err(Fail::Verification(format!("{} trials claimed wrong logical values", mc.logical_errors)));
    }
    Ok(())
}

fn cmd_bound(n1: usize, n2: usize, pb: &str, out: &OutArgs) -> CliResult<()> {
    let pb = parse_probability(pb)?;
    let b = bound(n1, n2, &pb)?;
    out.emit(&report::bound(n1, n2, &pb, &b, out.format))
}

fn cmd_physbm(out: &OutArgs) -> CliResult<()> {
    let table = physical::output_table()?;
    let mut patterns = Vec::new();
    for p in physical::two_photon_patterns() {
        patterns.push((p, physical::classify_pattern(&p)?));
    }
    let pb = physical::success_probability()?;
    out.emit(&report::physbm(&table, &patterns, pb, out.format))
}

fn cmd_compare_rotated(dmax: usize, big: bool, out: &OutArgs) -> CliResult<()> {
    if dmax >= 5 && !big {
        return Err(Fail::Cap("d = 5 enumerates 2^25 simple-static patterns; pass --big to run it".into()));
    }
    let half = BigRational::new(1.into(), 2.into());
    let opts = exact_opts(DEFAULT_CAP, out);
    let mut rows = Vec::new();
    for d in 2..=dmax {
        let code = codes::rotated_surface(d, d)?;
        let simple = exact_success_probability(&build_static(StaticKind::Simple, &code)?.into(), &half, opts)?.probability;
        let optimized = exact_success_probability(&build_static(StaticKind::Optimized, &code)?.into(), &half, opts)?.probability;
        let feedforward = one_minus_half_pow(d * d);
        let (adaptive, _) = build_optimal(&Family::Rotated(d, d))?;
        let check = exact_success_probability(&adaptive.into(), &half, opts)?.probability;
        if check != feedforward {
            return Err(Fail::Verification(format!("d = {d}: adaptive scheme gives {check}, expected {feedforward}")));
        }
        rows.push(report::CompareRow::new(d, &simple, &optimized, &feedforward));
    }
    out.emit(&report::compare(&rows, out.format))
}

fn run(cli: Cli) -> CliResult<()> {
    match &cli.command {
        Command::Verify { code, scheme, pb, out } => cmd_verify(code, scheme, pb, out),
        Command::Exact { code, scheme, pb, cap, out } => cmd_exact(code, scheme, pb, *cap, out),
        Command::Mc { code, scheme, pb, trials, seed, out } => cmd_mc(code, scheme, pb, *trials, *seed, out),
        Command::Bound { n1, n2, pb, out } => cmd_bound(*n1, *n2, pb, out),
        Command::Physbm { out } => cmd_physbm(out),
        Command::CompareRotated { dmax, big, out } => cmd_compare_rotated(*dmax as usize, *big, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let msg = match &f {
                Fail::Usage(m) => format!("usage error: {m}"),
                Fail::Verification(m) => format!("verification failed: {m}"),
                Fail::Cap(m) => format!("resource cap: {m}"),
            };
            eprintln!("{msg}");
            ExitCode::from(f.code())
        }
    }
}
