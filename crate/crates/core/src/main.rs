//! Command-line front end: evaluate characters, cross-check the exact and
//! dual-averaging routes, run Monte Carlo estimates, convergence studies,
//! small-degree brute-force grids, paintbox summaries, and fuzz suites.
//!
//! Exit codes: 0 success, 2 invalid configuration, 3 resource cap exceeded,
//! 4 verification failure (an identity that should hold exactly did not).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use finchar::asymptotics::{
    blocks_from_coloring, clifford_average, convergence_study, induced_ratio_brute,
    induced_ratio_single_cycle, perm_char_ratio_brute, quotient_dual, AsymError, ColoringMode,
};
use finchar::duality::{chi_nu_via_integral, chi_nu_via_integral_mc, mixture_sides, DualityError};
use finchar::gf2::{DualCharacter, Gf2Error, Gf2Subspace};
use finchar::irs::{
    chi_nu_exact, class_size_histogram, monte_carlo_chi_nu, Coloring, EstimateReport, IrsError,
};
use finchar::perm::{FinitaryPermutation, PermError};
use finchar::suite;
use finchar::thoma::{
    chi_sigma_alpha, parse_rational, thoma_character, AlphaSpec, Rational, ThomaError,
    ThomaParameter,
};

#[derive(Parser)]
#[command(
    name = "finchar",
    version,
    about = "Characters and invariant random subgroups of the finitary symmetric group"
)]
struct Cli {
    /// Worker threads for parallel estimators (output does not depend on it)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a character exactly: Thoma, twisted, or subgroup-averaged
    Eval(RunArgs),
    /// Cross-check the exact sum against the dual-group average
    Duality(RunArgs),
    /// Monte Carlo estimate of chi_nu by membership sampling or dual averaging
    Mc(RunArgs),
    /// CSV convergence table of finite ratios toward the limit character
    Converge(RunArgs),
    /// Brute-force grid at small degree: permutation-character vs Clifford average
    Brute(RunArgs),
    /// Class-size histogram of sampled paintbox partitions
    Paintbox(RunArgs),
    /// Randomized identity checks across all routes
    Fuzz(RunArgs),
}

/// One flat configuration shared by all subcommands; unused fields are
/// ignored. Every field may come from flags or from a --config JSON file
/// with the same keys; a flag wins over the file.
#[derive(Args, Deserialize, Default, Clone)]
#[serde(deny_unknown_fields, default)]
struct RunArgs {
    /// Colour frequencies as comma-separated rationals, e.g. 1/2,1/3
    #[arg(long)]
    alpha: Option<String>,

    /// Thoma parameter as beta=...;gamma=... (rational lists)
    #[arg(long)]
    theta: Option<String>,

    /// Beta row of a Thoma parameter, e.g. 1/2,1/4
    #[arg(long)]
    beta: Option<String>,

    /// Gamma row of a Thoma parameter
    #[arg(long)]
    gamma: Option<String>,

    /// Dual character as a sign bitstring over the colours, e.g. 10 for (-1,+1)
    #[arg(long)]
    sigma: Option<String>,

    /// Subgroup basis: comma-separated bitstrings (e.g. 110,011), or full/trivial
    #[arg(long = "A", visible_alias = "subgroup")]
    #[serde(alias = "A")]
    subgroup: Option<String>,

    /// Group element in cycle notation, e.g. "(0 1)(2 3)"; "()" is identity
    #[arg(long)]
    g: Option<String>,

    /// RNG seed; required whenever sampling is involved
    #[arg(long)]
    seed: Option<u64>,

    /// Monte Carlo membership trials
    #[arg(long)]
    trials: Option<u64>,

    /// Monte Carlo dual-average samples
    #[arg(long)]
    samples: Option<u64>,

    /// Coloured prefix length for membership sampling
    #[arg(long)]
    prefix_length: Option<usize>,

    /// Estimator route for mc: membership or integral
    #[arg(long)]
    route: Option<String>,

    /// Strictly increasing prefix lengths for converge, e.g. 100,1000,10000
    #[arg(long)]
    n_schedule: Option<String>,

    /// Colouring mode for converge: balanced (default) or sampled
    #[arg(long)]
    mode: Option<String>,

    /// Degree for brute (4..=8) or prefix length for paintbox
    #[arg(long)]
    n: Option<usize>,

    /// Repetitions for brute grids, paintbox sampling, and fuzz rounds
    #[arg(long)]
    reps: Option<usize>,

    /// Dichotomy threshold for paintbox as a rational, default 2/5
    #[arg(long)]
    delta: Option<String>,

    /// Run this many random configurations instead of a single one (duality)
    #[arg(long)]
    fuzz: Option<usize>,

    /// Also write the report to this file
    #[arg(long)]
    output: Option<PathBuf>,

    /// JSON file with the same keys as the flags
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

impl RunArgs {
    /// Overlay flags on top of the --config file, flags winning.
    fn merged(self) -> Result<RunArgs, Failure> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let text = fs::read_to_string(&path)
            .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
        let file: RunArgs = serde_json::from_str(&text)
            .map_err(|e| Failure::Config(format!("bad config {}: {e}", path.display())))?;
        Ok(RunArgs {
            alpha: self.alpha.or(file.alpha),
            theta: self.theta.or(file.theta),
            beta: self.beta.or(file.beta),
            gamma: self.gamma.or(file.gamma),
            sigma: self.sigma.or(file.sigma),
            subgroup: self.subgroup.or(file.subgroup),
            g: self.g.or(file.g),
            seed: self.seed.or(file.seed),
            trials: self.trials.or(file.trials),
            samples: self.samples.or(file.samples),
            prefix_length: self.prefix_length.or(file.prefix_length),
            route: self.route.or(file.route),
            n_schedule: self.n_schedule.or(file.n_schedule),
            mode: self.mode.or(file.mode),
            n: self.n.or(file.n),
            reps: self.reps.or(file.reps),
            delta: self.delta.or(file.delta),
            fuzz: self.fuzz.or(file.fuzz),
            output: self.output.or(file.output),
            config: None,
        })
    }
}

/// Error classification driving the exit code.
enum Failure {
    Config(String),
    Cap(String),
    Verify(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Cap(_) => 3,
            Failure::Verify(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Cap(m) | Failure::Verify(m) => m,
        }
    }
}

impl From<ThomaError> for Failure {
    fn from(e: ThomaError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<PermError> for Failure {
    fn from(e: PermError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<Gf2Error> for Failure {
    fn from(e: Gf2Error) -> Self {
        match e {
            Gf2Error::EnumerationCap { .. } | Gf2Error::RankTooLarge(_) => {
                Failure::Cap(e.to_string())
            }
            _ => Failure::Config(e.to_string()),
        }
    }
}

impl From<IrsError> for Failure {
    fn from(e: IrsError) -> Self {
        match e {
            IrsError::CycleCapExceeded { .. }
            | IrsError::WorkCapExceeded { .. }
            | IrsError::CoincidenceCapExceeded(_) => Failure::Cap(e.to_string()),
            _ => Failure::Config(e.to_string()),
        }
    }
}

impl From<DualityError> for Failure {
    fn from(e: DualityError) -> Self {
        match e {
            DualityError::Gf2(inner) => inner.into(),
            DualityError::Irs(inner) => inner.into(),
            DualityError::Thoma(inner) => inner.into(),
            _ => Failure::Config(e.to_string()),
        }
    }
}

impl From<AsymError> for Failure {
    fn from(e: AsymError) -> Self {
        match e {
            AsymError::NTooLarge(_) => Failure::Cap(e.to_string()),
            AsymError::Gf2(inner) => inner.into(),
            AsymError::Irs(inner) => inner.into(),
            _ => Failure::Config(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .is_err()
        {
            eprintln!("error: thread pool already initialised");
            return ExitCode::from(2);
        }
    }
    let outcome = match cli.command {
        Command::Eval(args) => cmd_eval(args),
        Command::Duality(args) => cmd_duality(args),
        Command::Mc(args) => cmd_mc(args),
        Command::Converge(args) => cmd_converge(args),
        Command::Brute(args) => cmd_brute(args),
        Command::Paintbox(args) => cmd_paintbox(args),
        Command::Fuzz(args) => cmd_fuzz(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

// ---------------------------------------------------------------------------
// Config parsing helpers

fn parse_rational_list(text: &str) -> Result<Vec<Rational>, Failure> {
    text.split(',')
        .map(|t| parse_rational(t).map_err(Failure::from))
        .collect()
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::Config(format!("missing required option --{flag}")))
}

fn parse_alpha(args: &RunArgs) -> Result<AlphaSpec, Failure> {
    let text = require(args.alpha.as_ref(), "alpha")?;
    Ok(AlphaSpec::new(parse_rational_list(text)?)?)
}

/// Accepts beta=...;gamma=... in --theta, or separate --beta/--gamma.
fn parse_theta(args: &RunArgs) -> Result<Option<ThomaParameter>, Failure> {
    let (mut beta, mut gamma) = (args.beta.clone(), args.gamma.clone());
    if let Some(text) = &args.theta {
        for part in text.split(';').filter(|p| !p.trim().is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Failure::Config(format!("bad --theta component {part:?}")))?;
            match key.trim() {
                "beta" => beta = Some(value.to_string()),
                "gamma" => gamma = Some(value.to_string()),
                other => {
                    return Err(Failure::Config(format!("unknown --theta key {other:?}")));
                }
            }
        }
    }
    if beta.is_none() && gamma.is_none() {
        return Ok(None);
    }
    let b = beta.as_deref().map(parse_rational_list).transpose()?;
    let g = gamma.as_deref().map(parse_rational_list).transpose()?;
    Ok(Some(ThomaParameter::new(
        b.unwrap_or_default(),
        g.unwrap_or_default(),
    )?))
}

fn parse_subgroup(text: &str, m: usize) -> Result<Gf2Subspace, Failure> {
    match text.trim() {
        "full" => Ok(Gf2Subspace::full(m)),
        "trivial" => Ok(Gf2Subspace::trivial(m)),
        rows => {
            let parts: Vec<&str> = rows.split(',').collect();
            Ok(Gf2Subspace::from_bitstrings(m, &parts)?)
        }
    }
}

fn parse_g(args: &RunArgs) -> Result<FinitaryPermutation, Failure> {
    let text = require(args.g.as_ref(), "g")?;
    Ok(FinitaryPermutation::from_str(text)?)
}

fn require_seed(args: &RunArgs) -> Result<u64, Failure> {
    args.seed
        .ok_or_else(|| Failure::Config("sampling requested, so --seed is required".into()))
}

fn rational_strings(value: &Rational) -> (String, f64) {
    (
        value.to_string(),
        value.to_f64().expect("character values fit in f64"),
    )
}

/// Print the report and, if requested, also write it to a file.
fn emit(args: &RunArgs, text: &str) -> Result<(), Failure> {
    println!("{text}");
    if let Some(path) = &args.output {
        fs::write(path, format!("{text}\n"))
            .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn emit_json<T: Serialize>(args: &RunArgs, report: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(report)
        .map_err(|e| Failure::Config(format!("cannot serialise report: {e}")))?;
    emit(args, &text)
}

// ---------------------------------------------------------------------------
// eval

#[derive(Serialize)]
struct EvalReport {
    route: &'static str,
    value: String,
    value_float: f64,
}

fn cmd_eval(args: RunArgs) -> Result<(), Failure> {
    let args = args.merged()?;
    let g = parse_g(&args)?;
    let theta = parse_theta(&args)?;

    let (route, value) = if let Some(theta) = theta {
        if args.alpha.is_some() || args.sigma.is_some() || args.subgroup.is_some() {
            return Err(Failure::Config(
                "--theta/--beta/--gamma cannot be combined with --alpha/--sigma/--A".into(),
            ));
        }
        ("thoma", thoma_character(&theta, &g))
    } else {
        let alpha = parse_alpha(&args)?;
        if let Some(sigma_text) = &args.sigma {
            if args.subgroup.is_some() {
                return Err(Failure::Config(
                    "--sigma and --A are alternative routes; give one".into(),
                ));
            }
            let sigma = DualCharacter::parse(sigma_text)?;
            ("twisted", chi_sigma_alpha(&alpha, &sigma, &g)?)
        } else {
            let subgroup = match &args.subgroup {
                Some(text) => parse_subgroup(text, alpha.m())?,
                None => Gf2Subspace::full(alpha.m()),
            };
            ("chi_nu", chi_nu_exact(&alpha, &subgroup, &g)?)
        }
    };
    let (value, value_float) = rational_strings(&value);
    emit_json(
        &args,
        &EvalReport {
            route,
            value,
            value_float,
        },
    )
}

// ---------------------------------------------------------------------------
// duality

#[derive(Serialize)]
struct DualityReport {
    lhs: String,
    lhs_float: f64,
    rhs: String,
    rhs_float: f64,
    equal: bool,
}

fn duality_case(
    alpha: &AlphaSpec,
    subgroup: &Gf2Subspace,
    g: &FinitaryPermutation,
) -> Result<DualityReport, Failure> {
    let lhs = chi_nu_exact(alpha, subgroup, g)?;
    let rhs = chi_nu_via_integral(alpha, subgroup, g)?;
    let equal = lhs == rhs;
    let (lhs, lhs_float) = rational_strings(&lhs);
    let (rhs, rhs_float) = rational_strings(&rhs);
    Ok(DualityReport {
        lhs,
        lhs_float,
        rhs,
        rhs_float,
        equal,
    })
}

#[derive(Serialize)]
struct FuzzReport {
    runs: usize,
    failures: usize,
    seed: u64,
    by_suite: BTreeMap<&'static str, SuiteOutcome>,
}

#[derive(Serialize, Default, Clone, Copy)]
struct SuiteOutcome {
    runs: usize,
    failures: usize,
}

fn cmd_duality(args: RunArgs) -> Result<(), Failure> {
    let args = args.merged()?;
    if let Some(rounds) = args.fuzz {
        let seed = require_seed(&args)?;
        let mut outcome = SuiteOutcome::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..rounds {
            outcome.runs += 1;
            if !fuzz_duality_once(&mut rng)? {
                outcome.failures += 1;
            }
        }
        let report = FuzzReport {
            runs: outcome.runs,
            failures: outcome.failures,
            seed,
            by_suite: BTreeMap::from([("duality", outcome)]),
        };
        emit_json(&args, &report)?;
        if outcome.failures > 0 {
            return Err(Failure::Verify(format!(
                "{} of {} randomized duality checks failed",
                outcome.failures, outcome.runs
            )));
        }
        return Ok(());
    }

    let alpha = parse_alpha(&args)?;
    let subgroup = parse_subgroup(require(args.subgroup.as_ref(), "A")?, alpha.m())?;
    let g = parse_g(&args)?;
    let report = duality_case(&alpha, &subgroup, &g)?;
    let equal = report.equal;
    emit_json(&args, &report)?;
    if !equal {
        return Err(Failure::Verify(
            "exact sum and dual average disagree".into(),
        ));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// mc

#[derive(Serialize)]
struct McReport {
    route: &'static str,
    #[serde(flatten)]
    report: EstimateReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact_float: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    consistent: Option<bool>,
}

fn cmd_mc(args: RunArgs) -> Result<(), Failure> {
    let args = args.merged()?;
    let alpha = parse_alpha(&args)?;
    let subgroup = parse_subgroup(require(args.subgroup.as_ref(), "A")?, alpha.m())?;
    let g = parse_g(&args)?;
    let seed = require_seed(&args)?;
    let route = args.route.as_deref().unwrap_or("membership");

    let mut report = match route {
        "membership" => {
            let trials = args.trials.unwrap_or(100_000);
            let prefix = args
                .prefix_length
                .unwrap_or_else(|| (g.max_point().map_or(0, |p| p as usize + 1)).max(64));
            monte_carlo_chi_nu(&alpha, &subgroup, &g, prefix, trials, seed)?
        }
        "integral" => {
            let samples = args.samples.or(args.trials).unwrap_or(100_000);
            chi_nu_via_integral_mc(&alpha, &subgroup, &g, samples, seed)?
        }
        other => {
            return Err(Failure::Config(format!(
                "unknown --route {other:?}; expected membership or integral"
            )));
        }
    };

    // Attach the exact value when the caps allow computing it.
    let (exact_float, consistent) = match chi_nu_exact(&alpha, &subgroup, &g) {
        Ok(exact) => {
            let (text, float) = rational_strings(&exact);
            report.exact = Some(text);
            (Some(float), Some(report.consistent_with(float)))
        }
        Err(
            IrsError::CycleCapExceeded { .. }
            | IrsError::WorkCapExceeded { .. }
            | IrsError::CoincidenceCapExceeded(_),
        ) => (None, None),
        Err(e) => return Err(e.into()),
    };
    let route_label = if route == "membership" {
        "membership"
    } else {
        "integral"
    };
    emit_json(
        &args,
        &McReport {
            route: route_label,
            report,
            exact_float,
            consistent,
        },
    )
}

// ---------------------------------------------------------------------------
// converge

fn cmd_converge(args: RunArgs) -> Result<(), Failure> {
    let args = args.merged()?;
    let alpha = parse_alpha(&args)?;
    let subgroup = parse_subgroup(require(args.subgroup.as_ref(), "A")?, alpha.m())?;
    let g = parse_g(&args)?;
    let schedule: Vec<usize> = require(args.n_schedule.as_ref(), "n-schedule")?
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| Failure::Config(format!("bad schedule entry {t:?}: {e}")))
        })
        .collect::<Result<_, _>>()?;
    let mode = match args.mode.as_deref().unwrap_or("balanced") {
        "balanced" => ColoringMode::Balanced,
        "sampled" => ColoringMode::Sampled {
            seed: require_seed(&args)?,
        },
        other => {
            return Err(Failure::Config(format!(
                "unknown --mode {other:?}; expected balanced or sampled"
            )));
        }
    };

    let rows = convergence_study(&alpha, &subgroup, &g, &schedule, &mode)?;
    let mut csv = String::from("n,ratio,ratio_float,limit,abs_error,abs_error_float\n");
    for row in &rows {
        writeln!(
            csv,
            "{},{},{},{},{},{}",
            row.n,
            row.ratio,
            row.ratio_f64(),
            row.limit,
            row.abs_error,
            row.abs_error_f64()
        )
        .expect("writing to a String cannot fail");
    }
    emit(&args, csv.trim_end_matches('\n'))
}

// ---------------------------------------------------------------------------
// brute

#[derive(Serialize)]
struct BruteReport {
    ns: Vec<usize>,
    cases: usize,
    all_equal: bool,
    failures: usize,
    seed: u64,
}

/// Random degree-n colouring: every point uniformly dust or one of m colours.
fn random_prefix_coloring<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize) -> Coloring {
    let colors = (0..n).map(|_| rng.random_range(0..=m) as u32).collect();
    Coloring::new(m, colors).expect("colours drawn within the palette")
}

fn random_prefix_permutation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> FinitaryPermutation {
    suite::random_permutation(rng, 2, n.min(4).max(2), n as u64)
}

/// One grid case: true iff all route-equalities hold.
fn brute_case<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<bool, Failure> {
    let m = rng.random_range(1..=3usize);
    let coloring = random_prefix_coloring(rng, n, m);
    let bs = blocks_from_coloring(&coloring);
    let subgroup = suite::random_subspace(rng, m);
    let g = random_prefix_permutation(rng, n);

    if perm_char_ratio_brute(&bs, &subgroup, &g)? != clifford_average(&bs, &subgroup, &g)? {
        return Ok(false);
    }

    // Single cycles: closed-form binomial ratio against the orbit count.
    let k = rng.random_range(2..=n.min(4));
    let cycle: Vec<u64> = (0..k as u64).collect();
    let single = FinitaryPermutation::from_cycles([cycle]).expect("points distinct");
    let dual = quotient_dual(&subgroup, &bs)?;
    for sigma in dual.sigmas() {
        if induced_ratio_single_cycle(&bs, sigma, k)? != induced_ratio_brute(&bs, sigma, &single)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn cmd_brute(args: RunArgs) -> Result<(), Failure> {
    let args = args.merged()?;
    let seed = require_seed(&args)?;
    let ns: Vec<usize> = match args.n {
        Some(n) => vec![n],
        None => vec![4, 5, 6, 7],
    };
    let reps = args.reps.unwrap_or(10);

    let mut cases = 0;
    let mut failures = 0;
    for &n in &ns {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(n as u64);
        for _ in 0..reps {
            cases += 1;
            if !brute_case(&mut rng, n)? {
                failures += 1;
            }
        }
    }
    let report = BruteReport {
        ns,
        cases,
        all_equal: failures == 0,
        failures,
        seed,
    };
    let ok = report.all_equal;
    emit_json(&args, &report)?;
    if !ok {
        return Err(Failure::Verify(format!(
            "{failures} of {cases} brute-force cases disagreed across routes"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// paintbox

#[derive(Serialize)]
struct PaintboxReport {
    n: usize,
    repetitions: usize,
    delta: String,
    histogram: BTreeMap<usize, u64>,
    violations: u64,
    seed: u64,
}

fn cmd_paintbox(args: RunArgs) -> Result<(), Failure> {
    let args = args.merged()?;
    let alpha = parse_alpha(&args)?;
    let n = args.n.unwrap_or(10_000);
    let reps = args.reps.unwrap_or(100);
    let seed = require_seed(&args)?;
    let delta_text = args.delta.as_deref().unwrap_or("2/5");
    let delta = parse_rational(delta_text)?;
    if delta <= Rational::from_integer(0.into()) || delta > Rational::from_integer(1.into()) {
        return Err(Failure::Config(format!(
            "--delta must lie in (0, 1], got {delta_text}"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let histogram = class_size_histogram(&alpha, n, &mut rng, reps);
    // The dichotomy gate: no class size strictly between 1 and delta*n.
    let threshold = &delta * Rational::from_integer(n.into());
    let violations: u64 = histogram
        .iter()
        .filter(|(size, _)| {
            let s = Rational::from_integer((**size).into());
            **size > 1 && s < threshold
        })
        .map(|(_, count)| *count)
        .sum();
    let report = PaintboxReport {
        n,
        repetitions: reps,
        delta: delta.to_string(),
        histogram,
        violations,
        seed,
    };
    emit_json(&args, &report)?;
    if violations > 0 {
        return Err(Failure::Verify(format!(
            "{violations} class sizes fell inside the forbidden band (1, {delta_text}·n)"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// fuzz

/// Random duality configuration; exact route equality is the check.
fn fuzz_duality_once<R: Rng + ?Sized>(rng: &mut R) -> Result<bool, Failure> {
    let alpha = suite::random_alpha(rng, 5);
    let subgroup = suite::random_subspace(rng, alpha.m());
    let g = suite::random_permutation(rng, 3, 5, 30);
    let lhs = chi_nu_exact(&alpha, &subgroup, &g)?;
    let rhs = chi_nu_via_integral(&alpha, &subgroup, &g)?;
    Ok(lhs == rhs)
}

/// Random Thoma mixture identity for the two-point sign kernel.
fn fuzz_mixture_once<R: Rng + ?Sized>(rng: &mut R) -> Result<bool, Failure> {
    let theta = suite::random_theta(rng, 4);
    let g = suite::random_permutation(rng, 3, 4, 24);
    let (lhs, rhs) = mixture_sides(&theta, &g)?;
    Ok(lhs == rhs)
}

/// Twisted characters bounded by the untwisted one, route-for-route.
fn fuzz_twisted_once<R: Rng + ?Sized>(rng: &mut R) -> Result<bool, Failure> {
    let alpha = suite::random_alpha(rng, 5);
    let sigma = suite::random_sigma(rng, alpha.m());
    let trivial = DualCharacter::trivial(alpha.m());
    let g = suite::random_permutation(rng, 3, 5, 30);
    let twisted = chi_sigma_alpha(&alpha, &sigma, &g)?;
    let plain = chi_sigma_alpha(&alpha, &trivial, &g)?;
    Ok(twisted.abs() <= plain)
}

/// Tiny brute-force grid case.
fn fuzz_brute_once<R: Rng + ?Sized>(rng: &mut R) -> Result<bool, Failure> {
    let n = rng.random_range(4..=5usize);
    brute_case(rng, n)
}

fn cmd_fuzz(args: RunArgs) -> Result<(), Failure> {
    let args = args.merged()?;
    let seed = require_seed(&args)?;
    let rounds = args.reps.unwrap_or(100);

    type SuiteFn = fn(&mut ChaCha8Rng) -> Result<bool, Failure>;
    let suites: [(&'static str, SuiteFn); 4] = [
        ("duality", fuzz_duality_once),
        ("mixture", fuzz_mixture_once),
        ("twisted", fuzz_twisted_once),
        ("brute", fuzz_brute_once),
    ];

    let mut by_suite: BTreeMap<&'static str, SuiteOutcome> = BTreeMap::new();
    for (stream, (name, check)) in suites.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream as u64);
        let mut outcome = SuiteOutcome::default();
        for _ in 0..rounds {
            outcome.runs += 1;
            if !check(&mut rng)? {
                outcome.failures += 1;
            }
        }
        by_suite.insert(name, outcome);
    }
    let report = FuzzReport {
        runs: by_suite.values().map(|o| o.runs).sum(),
        failures: by_suite.values().map(|o| o.failures).sum(),
        seed,
        by_suite,
    };
    let failures = report.failures;
    let runs = report.runs;
    emit_json(&args, &report)?;
    if failures > 0 {
        return Err(Failure::Verify(format!(
            "{failures} of {runs} randomized checks failed"
        )));
    }
    Ok(())
}
