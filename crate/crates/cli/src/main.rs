//! Command-line estimator of empirical differential-privacy budgets from
//! membership-attack outcomes.
//!
//! Exit codes: 0 success, 1 usage error, 2 invalid input data, 3 numeric
//! failure.

mod tsv;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use epsilometer::experiments::{
    coverage_experiment, run_mia_m, sample_size_sweep, AdversarySpec, ExperimentConfig, Mechanism,
    SweepReport, ThresholdRegime, DEFAULT_GAME_N,
};
use epsilometer::{
    ci_epsilon_interval, credible_interval_with_cap, empirical_rates, joint_posterior,
    tally_from_outcomes, BetaPosterior, CiFamily, ConfusionTally, EpsilonDistribution,
    EpsilonInterval, Error, QuadratureSpec, DEFAULT_EPS_CAP,
};

/// A command failure carrying its exit class.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Data(String),
    Numeric(String),
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
            Failure::Numeric(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Data(m) | Failure::Numeric(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Numeric(_) => Failure::Numeric(e.to_string()),
            Error::Domain(_) | Error::Degenerate(_) => Failure::Data(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "epsilometer",
    version,
    about = "Estimate empirical differential-privacy budgets from attack outcomes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate an epsilon interval from confusion counts or an outcome file
    Estimate(EstimateArgs),
    /// Tally an outcome file into confusion counts and empirical rates
    Tally(TallyArgs),
    /// Emit the posterior CDF/PDF curve of the epsilon estimate as TSV
    Curve(CurveArgs),
    /// Run a distinguishing game against a synthetic mechanism
    Simulate(SimulateArgs),
    /// Measure credible-interval coverage over repeated games
    Coverage(CoverageArgs),
    /// Sweep sample sizes until interval widths reach a target
    Sweep(SweepArgs),
}

/// Where the confusion tally comes from: four counts or an outcome file.
#[derive(Args)]
struct SourceArgs {
    /// True positives (member challenges guessed member)
    #[arg(long)]
    tp: Option<u64>,
    /// False negatives (member challenges guessed non-member)
    #[arg(long = "fn")]
    false_neg: Option<u64>,
    /// False positives (non-member challenges guessed member)
    #[arg(long)]
    fp: Option<u64>,
    /// True negatives (non-member challenges guessed non-member)
    #[arg(long)]
    tn: Option<u64>,
    /// Outcome TSV file to tally instead of explicit counts
    #[arg(long)]
    input: Option<PathBuf>,
}

impl SourceArgs {
    fn tally(&self) -> Result<ConfusionTally, Failure> {
        let counts = [self.tp, self.false_neg, self.fp, self.tn];
        match (&self.input, counts.iter().any(Option::is_some)) {
            (Some(_), true) => Err(Failure::Usage(
                "give either --tp/--fn/--fp/--tn or --input, not both".into(),
            )),
            (Some(path), false) => Ok(tally_from_outcomes(&tsv::read_outcomes(path)?)),
            (None, _) => match (self.tp, self.false_neg, self.fp, self.tn) {
                (Some(tp), Some(fnr), Some(fp), Some(tn)) => {
                    Ok(ConfusionTally::new(tp, fnr, fp, tn))
                }
                _ => Err(Failure::Usage(
                    "provide all of --tp, --fn, --fp, --tn, or an --input file".into(),
                )),
            },
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Bayesian,
    Jeffreys,
    ClopperPearson,
    All,
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// The delta of the (epsilon, delta) guarantee being estimated
    #[arg(long)]
    delta: f64,
    /// Total error budget: intervals hold at confidence/credibility 1-alpha
    #[arg(long)]
    alpha: f64,
    /// Estimator to run
    #[arg(long, value_enum, default_value_t = MethodArg::All)]
    method: MethodArg,
    /// Beta prior for the rate posteriors, as "a,b"
    #[arg(long, value_parser = parse_prior, default_value = "0.5,0.5")]
    prior: (f64, f64),
    /// Report posterior quantiles above this cap as unbounded
    #[arg(long = "eps-cap", default_value_t = DEFAULT_EPS_CAP)]
    eps_cap: f64,
    /// Emit a single JSON document instead of text lines
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct TallyArgs {
    /// Outcome TSV file
    #[arg(long)]
    input: PathBuf,
    /// Emit JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CurveArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// The delta of the (epsilon, delta) guarantee being estimated
    #[arg(long)]
    delta: f64,
    /// Beta prior for the rate posteriors, as "a,b"
    #[arg(long, value_parser = parse_prior, default_value = "0.5,0.5")]
    prior: (f64, f64),
    /// Largest epsilon on the curve
    #[arg(long = "eps-max")]
    eps_max: f64,
    /// Number of uniformly spaced rows (including both ends)
    #[arg(long, default_value_t = 101)]
    steps: u32,
    /// Output file (standard output when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MechanismArg {
    Rr,
    GaussianMean,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum RegimeArg {
    AverageCase,
    WorstCase,
}

/// Mechanism and adversary selection shared by simulate and coverage.
#[derive(Args)]
struct GameArgs {
    /// Synthetic mechanism to attack
    #[arg(long, value_enum)]
    mechanism: MechanismArg,
    /// True epsilon of the randomized-response mechanism
    #[arg(long = "eps-true")]
    eps_true: Option<f64>,
    /// Epsilon bound of the gaussian-mean mechanism
    #[arg(long)]
    eps: Option<f64>,
    /// Delta bound of the gaussian-mean mechanism
    #[arg(long = "mech-delta", default_value_t = 1e-5)]
    mech_delta: f64,
    /// Data dimension of the gaussian-mean mechanism
    #[arg(long, default_value_t = 5)]
    dimension: usize,
    /// Clip norm of the gaussian-mean mechanism
    #[arg(long = "clip-norm", default_value_t = 1.0)]
    clip_norm: f64,
    /// Threshold percentile of the loss-threshold adversary
    #[arg(long = "alpha-pct", default_value_t = 30.0)]
    alpha_pct: f64,
    /// Challenge-selection regime of the loss-threshold adversary
    #[arg(long, value_enum, default_value_t = RegimeArg::AverageCase)]
    regime: RegimeArg,
}

impl GameArgs {
    fn build(&self) -> Result<(Mechanism, AdversarySpec), Failure> {
        match self.mechanism {
            MechanismArg::Rr => {
                let eps = self
                    .eps_true
                    .ok_or_else(|| Failure::Usage("--mechanism rr needs --eps-true".into()))?;
                Ok((
                    Mechanism::randomized_response(eps)?,
                    AdversarySpec::OptimalRr,
                ))
            }
            MechanismArg::GaussianMean => {
                let eps = self.eps.ok_or_else(|| {
                    Failure::Usage("--mechanism gaussian-mean needs --eps".into())
                })?;
                let mech =
                    Mechanism::gaussian_mean(eps, self.mech_delta, self.dimension, self.clip_norm)?;
                let regime = match self.regime {
                    RegimeArg::AverageCase => ThresholdRegime::AverageCase,
                    RegimeArg::WorstCase => ThresholdRegime::WorstCase,
                };
                Ok((mech, AdversarySpec::loss_threshold(self.alpha_pct, regime)?))
            }
        }
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    game: GameArgs,
    /// Challenge samples per trained model
    #[arg(long)]
    m: u64,
    /// Number of independently trained models
    #[arg(long)]
    models: u64,
    /// Dataset size per model
    #[arg(long, default_value_t = DEFAULT_GAME_N)]
    n: u64,
    /// Master seed; the run is bit-reproducible given it
    #[arg(long)]
    seed: u64,
    /// Outcome TSV file to write
    #[arg(long)]
    out: PathBuf,
    /// Delta for the printed interval estimate
    #[arg(long, default_value_t = 1e-5)]
    delta: f64,
    /// Alpha for the printed interval estimate
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    /// Estimator for the printed interval
    #[arg(long, value_enum, default_value_t = MethodArg::Bayesian)]
    method: MethodArg,
}

#[derive(Args)]
struct CoverageArgs {
    #[command(flatten)]
    game: GameArgs,
    /// Game trials per replicate
    #[arg(long)]
    trials: u64,
    /// Number of replicates
    #[arg(long)]
    reps: u64,
    /// Delta for the per-replicate interval
    #[arg(long, default_value_t = 1e-5)]
    delta: f64,
    /// Alpha for the per-replicate interval
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    /// Master seed
    #[arg(long)]
    seed: u64,
}

#[derive(Args)]
struct SweepArgs {
    /// Fixed balanced attack accuracy used for the expected tallies
    #[arg(long)]
    accuracy: f64,
    /// Delta of the estimated guarantee
    #[arg(long, default_value_t = 1e-5)]
    delta: f64,
    /// Alpha of the intervals
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    /// Interval width the sweep looks for
    #[arg(long = "target-width")]
    target_width: f64,
    /// Smallest total sample count on the grid
    #[arg(long = "n-min", default_value_t = 100)]
    n_min: u64,
    /// Largest total sample count on the grid
    #[arg(long = "n-max", default_value_t = 2000)]
    n_max: u64,
    /// Grid step
    #[arg(long, default_value_t = 50)]
    step: u64,
}

fn parse_prior(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("expected two comma-separated values, like 0.5,0.5".into());
    }
    let parse = |p: &str| -> Result<f64, String> {
        let v: f64 = p
            .trim()
            .parse()
            .map_err(|_| format!("bad prior component {p:?}"))?;
        if !v.is_finite() || v <= 0.0 {
            return Err(format!("prior components must be positive, got {p}"));
        }
        Ok(v)
    };
    Ok((parse(parts[0])?, parse(parts[1])?))
}

fn format_interval(iv: &EpsilonInterval) -> String {
    if iv.is_unbounded() {
        format!("[{:.6}, inf)", iv.lo)
    } else {
        format!("[{:.6}, {:.6}]", iv.lo, iv.hi)
    }
}

fn interval_json(iv: &EpsilonInterval) -> serde_json::Value {
    json!({
        "lo": iv.lo,
        "hi": if iv.hi.is_finite() { json!(iv.hi) } else { json!(null) },
        "unbounded": iv.is_unbounded(),
    })
}

fn tally_json(t: &ConfusionTally) -> serde_json::Value {
    json!({
        "tp": t.true_pos,
        "fn": t.false_neg,
        "fp": t.false_pos,
        "tn": t.true_neg,
    })
}

fn single_methods(method: MethodArg) -> Vec<MethodArg> {
    match method {
        MethodArg::All => vec![
            MethodArg::Bayesian,
            MethodArg::Jeffreys,
            MethodArg::ClopperPearson,
        ],
        one => vec![one],
    }
}

fn run_method(
    method: MethodArg,
    tally: &ConfusionTally,
    delta: f64,
    alpha: f64,
    prior: (f64, f64),
    eps_cap: f64,
) -> Result<EpsilonInterval, Failure> {
    let iv = match method {
        MethodArg::Bayesian => {
            let prior = BetaPosterior::new(prior.0, prior.1)?;
            credible_interval_with_cap(tally, delta, alpha, &prior, eps_cap)?
        }
        MethodArg::Jeffreys => ci_epsilon_interval(tally, delta, alpha, CiFamily::Jeffreys)?,
        MethodArg::ClopperPearson => {
            ci_epsilon_interval(tally, delta, alpha, CiFamily::ClopperPearson)?
        }
        MethodArg::All => unreachable!("expanded by single_methods"),
    };
    Ok(iv)
}

fn cmd_estimate(args: &EstimateArgs) -> Result<(), Failure> {
    let tally = args.source.tally()?;
    let methods = single_methods(args.method);
    let mut intervals = Vec::new();
    for &m in &methods {
        intervals.push(run_method(
            m,
            &tally,
            args.delta,
            args.alpha,
            args.prior,
            args.eps_cap,
        )?);
    }
    if args.json {
        let estimate_doc = |iv: &EpsilonInterval| {
            let mut doc = json!({
                "method": iv.method.label(),
                "alpha": iv.alpha,
                "delta": args.delta,
                "interval": interval_json(iv),
                "tally": tally_json(&tally),
            });
            if matches!(iv.method, epsilometer::IntervalMethod::Bayesian) {
                doc["prior"] = json!({"alpha": args.prior.0, "beta": args.prior.1});
            }
            doc
        };
        let doc = if intervals.len() == 1 {
            estimate_doc(&intervals[0])
        } else {
            json!({
                "alpha": args.alpha,
                "delta": args.delta,
                "tally": tally_json(&tally),
                "estimates": intervals.iter().map(estimate_doc).collect::<Vec<_>>(),
            })
        };
        println!(
            "{}",
            serde_json::to_string_pretty(&doc).expect("serializable")
        );
    } else {
        for iv in &intervals {
            println!("{}: {}", iv.method.label(), format_interval(iv));
        }
    }
    Ok(())
}

fn cmd_tally(args: &TallyArgs) -> Result<(), Failure> {
    let records = tsv::read_outcomes(&args.input)?;
    let tally = tally_from_outcomes(&records);
    let rates = empirical_rates(&tally).ok();
    if args.json {
        let doc = json!({
            "tally": tally_json(&tally),
            "fnr": rates.map(|r| r.0),
            "fpr": rates.map(|r| r.1),
        });
        println!(
            "{}",
            serde_json::to_string_pretty(&doc).expect("serializable")
        );
    } else {
        println!(
            "tp={} fn={} fp={} tn={}",
            tally.true_pos, tally.false_neg, tally.false_pos, tally.true_neg
        );
        match rates {
            Some((fnr, fpr)) => println!("fnr={fnr:.6} fpr={fpr:.6}"),
            None => println!("fnr=undefined fpr=undefined"),
        }
    }
    Ok(())
}

fn cmd_curve(args: &CurveArgs) -> Result<(), Failure> {
    if !args.eps_max.is_finite() || args.eps_max <= 0.0 {
        return Err(Failure::Usage(format!(
            "--eps-max must be positive and finite, got {}",
            args.eps_max
        )));
    }
    if args.steps < 2 {
        return Err(Failure::Usage("--steps must be at least 2".into()));
    }
    let tally = args.source.tally()?;
    let prior = BetaPosterior::new(args.prior.0, args.prior.1)?;
    let joint = joint_posterior(&tally, &prior)?;
    let dist = EpsilonDistribution::new(joint, args.delta, QuadratureSpec::default())?;
    let mut body = String::new();
    let _ = writeln!(body, "epsilon\tcdf\tpdf");
    let mut floor = 0.0_f64;
    for i in 0..args.steps {
        let eps = args.eps_max * f64::from(i) / f64::from(args.steps - 1);
        // Quadrature jitter is far below the reported precision; pin the
        // column to be exactly nondecreasing.
        let cdf = dist.cdf(eps)?.max(floor);
        floor = cdf;
        let pdf = if eps > 0.0 { dist.pdf(eps)? } else { 0.0 };
        let _ = writeln!(body, "{eps:.6}\t{cdf:.9}\t{pdf:.9}");
    }
    match &args.out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| Failure::Data(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{body}"),
    }
    Ok(())
}

fn cmd_simulate(args: &SimulateArgs) -> Result<(), Failure> {
    let (mech, adv) = args.game.build()?;
    let cfg = ExperimentConfig {
        m: args.m,
        n_models: args.models,
        n: args.n,
        seed: args.seed,
    };
    let report = run_mia_m(&mech, &adv, &cfg)?;
    tsv::write_outcomes(&args.out, &report.records)?;
    println!(
        "wrote {} outcome records to {}",
        report.records.len(),
        args.out.display()
    );
    let t = &report.tally;
    println!(
        "tp={} fn={} fp={} tn={}",
        t.true_pos, t.false_neg, t.false_pos, t.true_neg
    );
    match empirical_rates(t) {
        Ok((fnr, fpr)) => println!("fnr={fnr:.6} fpr={fpr:.6}"),
        Err(_) => println!("fnr=undefined fpr=undefined"),
    }
    for &m in &single_methods(args.method) {
        let iv = run_method(m, t, args.delta, args.alpha, (0.5, 0.5), DEFAULT_EPS_CAP)?;
        println!("{}: {}", iv.method.label(), format_interval(&iv));
    }
    Ok(())
}

fn cmd_coverage(args: &CoverageArgs) -> Result<(), Failure> {
    let (mech, adv) = args.game.build()?;
    let fraction = coverage_experiment(
        &mech,
        &adv,
        args.trials,
        args.reps,
        args.delta,
        args.alpha,
        args.seed,
    )?;
    let hits = (fraction * args.reps as f64).round() as u64;
    println!("coverage: {fraction:.4} ({hits}/{} reps)", args.reps);
    Ok(())
}

fn format_width(w: f64) -> String {
    if w.is_finite() {
        format!("{w:.6}")
    } else {
        "inf".into()
    }
}

fn format_min_n(n: Option<u64>) -> String {
    n.map_or_else(|| "none".into(), |v| v.to_string())
}

fn print_sweep(report: &SweepReport) {
    println!("n\tbayesian\tjeffreys\tclopper-pearson");
    for row in &report.rows {
        println!(
            "{}\t{}\t{}\t{}",
            row.n_total,
            format_width(row.bayesian_width),
            format_width(row.jeffreys_width),
            format_width(row.clopper_pearson_width)
        );
    }
    println!(
        "minimal n for width <= {}: bayesian={} jeffreys={} clopper-pearson={}",
        report.target_width,
        format_min_n(report.bayesian_min_n),
        format_min_n(report.jeffreys_min_n),
        format_min_n(report.clopper_pearson_min_n)
    );
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), Failure> {
    if args.step == 0 {
        return Err(Failure::Usage("--step must be positive".into()));
    }
    if args.n_min > args.n_max {
        return Err(Failure::Usage("--n-min must not exceed --n-max".into()));
    }
    let grid: Vec<u64> = (args.n_min..=args.n_max)
        .step_by(args.step as usize)
        .collect();
    let report = sample_size_sweep(
        args.accuracy,
        args.delta,
        args.alpha,
        args.target_width,
        &grid,
    )?;
    print_sweep(&report);
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Estimate(args) => cmd_estimate(args),
        Command::Tally(args) => cmd_tally(args),
        Command::Curve(args) => cmd_curve(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Coverage(args) => cmd_coverage(args),
        Command::Sweep(args) => cmd_sweep(args),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are successful exits; everything else is a
            // usage error (exit 1) with nothing on standard output.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(failure) = run(&cli) {
        eprintln!("error: {}", failure.message());
        std::process::exit(failure.exit_code());
    }
}
