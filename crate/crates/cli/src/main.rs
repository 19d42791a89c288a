mod config;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use ratbound::engine::{polar_beta_grid, run_suite, sweep_beta};
use ratbound::generators::{extremal_instance, gen_instance, split_seed, InstanceFile, InstanceSpec};
use ratbound::norms::norm_pair;
use ratbound::suites::{build_plan, SuiteKind};
use ratbound::{BetaParam, KRadius, NormConfig, RationalFn};

use config::{check_ks, parse_beta, parse_suite, read_instances, Format, RunConfig};
use output::NormRow;

#[derive(Parser)]
#[command(name = "ratbound", version, about = "Check Bernstein-type inequalities for rational functions on the unit circle")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Base seed of every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Relative slack tolerance of the inequality checks.
    #[arg(long, global = true)]
    tol_slack: Option<f64>,
    /// Absolute residual tolerance of the pole-sum identity.
    #[arg(long, global = true)]
    tol_identity: Option<f64>,
    /// Number of circle points.
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Number of generated instances (per k where applicable).
    #[arg(long, global = true)]
    instances: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and report every check.
    Verify(VerifyArgs),
    /// Minimum slack of the log-derivative bounds over a grid of beta values.
    SweepBeta(SweepArgs),
    /// Sup-norms of instances read from a file.
    Norm(NormArgs),
    /// Write generated instances for later use.
    Gen(GenArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// identities, rational, polynomial, lemmas, sharpness or all.
    #[arg(long, value_parser = parse_suite)]
    suite: Option<SuiteKind>,
    #[arg(long, value_delimiter = ',')]
    k: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Pole positions of the extremal family.
    #[arg(long, value_delimiter = ',')]
    a: Option<Vec<f64>>,
    /// `re,im`, `mod@deg` or a real number; repeat for several values.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_beta)]
    beta: Vec<BetaParam>,
    /// Instance file from `gen`; runs the rational checks on it.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Keep only failing reports (counts are unaffected).
    #[arg(long)]
    failures_only: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Random,
    Extremal,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum, default_value_t = Family::Random)]
    family: Family,
    #[arg(long, value_delimiter = ',')]
    k: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',')]
    a: Option<Vec<f64>>,
    /// Explicit beta values; the polar grid is used when none are given.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_beta)]
    beta: Vec<BetaParam>,
    #[arg(long, default_value_t = 8)]
    moduli: usize,
    #[arg(long, default_value_t = 16)]
    phases: usize,
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct NormArgs {
    #[arg(long)]
    input: PathBuf,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: f64,
    /// Put every zero on |z| = k.
    #[arg(long)]
    on_boundary: bool,
}

enum Outcome {
    Clean,
    Violations,
}

fn verify(cfg: &RunConfig, args: VerifyArgs) -> Result<Outcome> {
    let mut opts = cfg.plan_options();
    if let Some(ks) = &args.k {
        check_ks(ks)?;
    }
    opts.k_values = args.k;
    opts.ns = args.n;
    opts.a_values = args.a;
    if !args.beta.is_empty() {
        opts.betas = Some(args.beta);
    }
    let kind = match (&args.input, args.suite) {
        (Some(_), None | Some(SuiteKind::Rational)) => SuiteKind::Rational,
        (Some(_), Some(other)) => bail!("--input runs the rational suite, not `{other}`"),
        (None, s) => s.unwrap_or(SuiteKind::All),
    };
    if let Some(path) = &args.input {
        let (instances, k) = read_instances(path)?;
        let k = match (k, opts.k_values.as_deref()) {
            (_, Some([k])) => *k,
            (Some(k), None) => k,
            _ => bail!("give exactly one --k for an instance list without a recorded k"),
        };
        check_ks(&[k])?;
        opts.input = Some((instances, k));
    }

    let plan = build_plan(kind, &opts)?;
    let mut report = run_suite(&plan.instances, &plan.config)?;
    for s in &report.checks {
        let c = s.counts;
        eprintln!(
            "{:<20} evaluated {:>8}  pass {:>8}  fail {:>7}  skipped {:>5}  rejected {:>5}  quarantined {:>7}",
            s.check_id, c.evaluated, c.pass, c.fail, c.skipped, c.hypotheses_rejected, c.quarantined
        );
    }
    let outcome = if report.all_passed() { Outcome::Clean } else { Outcome::Violations };
    if args.failures_only {
        report.retain_failures();
    }
    let mut w = output::open(cfg.out.as_deref())?;
    match cfg.format {
        Format::Json => output::json(&mut *w, &report)?,
        Format::Csv => output::suite_csv(&mut *w, &report)?,
    }
    w.flush()?;
    Ok(outcome)
}

fn sweep(cfg: &RunConfig, args: SweepArgs) -> Result<Outcome> {
    let instances: Vec<(RationalFn, KRadius)> = if let Some(path) = &args.input {
        let (list, k) = read_instances(path)?;
        let k = match (k, args.k.as_deref()) {
            (_, Some([k])) => *k,
            (Some(k), None) => k,
            _ => bail!("give exactly one --k for an instance list without a recorded k"),
        };
        check_ks(&[k])?;
        list.into_iter().map(|r| (r, KRadius::new(k).expect("checked"))).collect()
    } else {
        match args.family {
            Family::Extremal => {
                let ks = args.k.unwrap_or_else(|| vec![1.0, 2.0]);
                check_ks(&ks)?;
                let ns = args.n.unwrap_or_else(|| vec![1, 2, 3]);
                let a_values = args.a.unwrap_or_else(|| vec![2.0, 3.0]);
                let mut out = Vec::new();
                for &k in &ks {
                    for &n in &ns {
                        for &a in &a_values {
                            out.push((extremal_instance(n, k, a)?, KRadius::new(k)?));
                        }
                    }
                }
                out
            }
            Family::Random => {
                let ks = args.k.unwrap_or_else(|| vec![1.0, 1.5, 2.0]);
                check_ks(&ks)?;
                let count = cfg.instances.unwrap_or(10);
                let mut out = Vec::new();
                for (ki, &k) in ks.iter().enumerate() {
                    for i in 0..count {
                        let n = match &args.n {
                            Some(ns) if !ns.is_empty() => ns[i % ns.len()],
                            _ => 1 + i % 8,
                        };
                        let spec = InstanceSpec::new(n, k, split_seed(cfg.seed, 80 + ki as u64, i as u64));
                        out.push((gen_instance(&spec)?, KRadius::new(k)?));
                    }
                }
                out
            }
        }
    };
    if args.moduli == 0 || args.phases == 0 {
        bail!("--moduli and --phases must be positive");
    }
    let betas = if args.beta.is_empty() { polar_beta_grid(args.moduli, args.phases) } else { args.beta };
    let rows = sweep_beta(&instances, &betas, cfg.grid.unwrap_or(128), &NormConfig::default(), &cfg.tolerances)?;
    let mut w = output::open(cfg.out.as_deref())?;
    match cfg.format {
        Format::Json => output::json(&mut *w, &rows)?,
        Format::Csv => output::sweep_csv(&mut *w, &rows)?,
    }
    w.flush()?;
    Ok(Outcome::Clean)
}

fn norm(cfg: &RunConfig, args: NormArgs) -> Result<Outcome> {
    let (list, _) = read_instances(&args.input)?;
    let rows = list
        .iter()
        .enumerate()
        .map(|(instance, r)| {
            let (rational, numerator) = norm_pair(r, &NormConfig::default())?;
            Ok(NormRow { instance, rational, numerator })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut w = output::open(cfg.out.as_deref())?;
    match cfg.format {
        Format::Json => output::json(&mut *w, &rows)?,
        Format::Csv => output::norm_csv(&mut *w, &rows)?,
    }
    w.flush()?;
    Ok(Outcome::Clean)
}

fn gen(cfg: &RunConfig, args: GenArgs) -> Result<Outcome> {
    check_ks(&[args.k])?;
    let mut spec = InstanceSpec::new(args.n, args.k, cfg.seed);
    if args.on_boundary {
        spec = spec.on_boundary();
    }
    let file = InstanceFile::generate(&spec, cfg.instances.unwrap_or(1))?;
    let mut w = output::open(cfg.out.as_deref())?;
    match cfg.format {
        Format::Json => output::json(&mut *w, &file)?,
        Format::Csv => bail!("instance files are JSON only"),
    }
    w.flush()?;
    Ok(Outcome::Clean)
}

fn run(cli: Cli) -> Result<Outcome> {
    let g = cli.global;
    let cfg = RunConfig::new(g.seed, g.format, g.out, g.tol_slack, g.tol_identity, g.grid, g.instances)?;
    match cli.command {
        Command::Verify(a) => verify(&cfg, a),
        Command::SweepBeta(a) => sweep(&cfg, a),
        Command::Norm(a) => norm(&cfg, a),
        Command::Gen(a) => gen(&cfg, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Outcome::Clean) => ExitCode::SUCCESS,
        Ok(Outcome::Violations) => ExitCode::from(1),
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        let io = c.downcast_ref::<std::io::Error>().or_else(|| match c.downcast_ref::<csv::Error>()?.kind() {
            csv::ErrorKind::Io(io) => Some(io),
            _ => None,
        });
        io.is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
    })
}
