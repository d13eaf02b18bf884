//! `resbound` — batch certification front end for the exact residue engine.
//!
//! Exit codes: 0 = success / verified positive, 1 = verified negative or
//! oracle mismatch (or an internal pipeline failure, with a diagnostic),
//! 2 = usage error.

mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::{
    bounds_csv, bounds_text, integral_csv, poly_entries, polynomial_text, to_json, BoundsOutput,
    Format, IntegralOutput, Meta, TruncationMeta, VerifyOutput, VerifyReport,
};
use resbound_core::{
    bounds_table_detailed, calibrated_delta, run_projective_oracle, run_shear_oracle,
    run_truncation_oracle, tautological_integral, DegreePolynomial, EngineError, IntegrandConfig,
    Rational,
};

#[derive(Parser)]
#[command(
    name = "resbound",
    version,
    about = "Exact iterated-residue integrals on jet quotients and hyperbolicity degree-bound certification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the exact integral p(d) for one dimension
    Integral(IntegralArgs),
    /// Emit the degree-bound table over a dimension range
    Bounds(BoundsArgs),
    /// Evaluate the exact integral at a given degree and report its sign
    Verify(VerifyArgs),
    /// Run the randomised and structural self-check oracles
    Oracle(OracleArgs),
}

#[derive(Args)]
struct IntegralArgs {
    /// Dimension of the hypersurface (equals the jet order)
    #[arg(long)]
    n: u32,
    /// Linearisation parameter, a rational strictly between 0 and 1
    #[arg(long, default_value = "1/2")]
    epsilon: String,
    /// Twist parameter: "symbolic", "paper" (= 1/(16 n^5)) or an exact rational
    #[arg(long, default_value = "symbolic")]
    delta: String,
    #[arg(long, default_value = "text")]
    format: Format,
    /// Scale factor on the truncation budget (results must not depend on it)
    #[arg(long, default_value_t = 1)]
    truncation_multiplier: u32,
}

#[derive(Args)]
struct BoundsArgs {
    /// Dimension range, e.g. "2..10" (inclusive) or a single value
    #[arg(long, default_value = "2..10")]
    n_range: String,
    /// Run the full certification pipeline for dimensions up to this cap
    #[arg(long, default_value_t = 4)]
    certify_up_to: u32,
    #[arg(long, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    n: u32,
    /// Hypersurface degree to evaluate at
    #[arg(long)]
    d: u64,
    #[arg(long, default_value = "1/2")]
    epsilon: String,
    /// Twist parameter: "paper" (= 1/(16 n^5)) or an exact rational
    #[arg(long, default_value = "paper")]
    delta: String,
    #[arg(long, default_value = "text")]
    format: Format,
    #[arg(long, default_value_t = 1)]
    truncation_multiplier: u32,
}

#[derive(Args)]
struct OracleArgs {
    /// Number of randomised projective-residue trials
    #[arg(long, default_value_t = 100)]
    trials: u32,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Dimensions for the shear and truncation-doubling oracles
    #[arg(long, default_value = "2..3")]
    n_range: String,
    #[arg(long, default_value = "text")]
    format: Format,
}

enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::InvalidConfig(_) | EngineError::BadRational(_) => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Runtime(other.to_string()),
        }
    }
}

fn parse_rational(s: &str, what: &str) -> Result<Rational, CliError> {
    s.parse::<Rational>()
        .map_err(|_| CliError::Usage(format!("{what}: malformed rational {s:?}")))
}

/// "a..b" (inclusive), "a..=b" or a single "a".
fn parse_range(s: &str) -> Result<(u32, u32), CliError> {
    let bad = || CliError::Usage(format!("malformed dimension range {s:?}"));
    if let Some((a, b)) = s.split_once("..") {
        let lo: u32 = a.trim().parse().map_err(|_| bad())?;
        let hi: u32 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        Ok((lo, hi))
    } else {
        let v: u32 = s.trim().parse().map_err(|_| bad())?;
        Ok((v, v))
    }
}

enum DeltaChoice {
    Symbolic,
    Fixed(Rational),
}

fn parse_delta(s: &str, n: u32, allow_symbolic: bool) -> Result<DeltaChoice, CliError> {
    match s {
        "symbolic" if allow_symbolic => Ok(DeltaChoice::Symbolic),
        "symbolic" => Err(CliError::Usage(
            "this command needs a numeric delta (\"paper\" or a rational)".into(),
        )),
        "paper" => Ok(DeltaChoice::Fixed(calibrated_delta(n))),
        other => Ok(DeltaChoice::Fixed(parse_rational(other, "delta")?)),
    }
}

fn make_config(
    n: u32,
    epsilon: &str,
    truncation_multiplier: u32,
) -> Result<IntegrandConfig, CliError> {
    let eps = parse_rational(epsilon, "epsilon")?;
    let cfg = IntegrandConfig::new(n, eps).with_truncation_multiplier(truncation_multiplier);
    cfg.validate()?;
    Ok(cfg)
}

fn meta_for(cfg: &IntegrandConfig, delta: &DeltaChoice) -> Meta {
    Meta {
        n: cfg.n,
        epsilon: cfg.epsilon.to_string(),
        delta: match delta {
            DeltaChoice::Symbolic => "symbolic".to_string(),
            DeltaChoice::Fixed(r) => r.to_string(),
        },
        truncation: TruncationMeta::new(&cfg.order_spec(), cfg.truncation_multiplier),
        normalization_power: cfg.n * cfg.n,
    }
}

fn cmd_integral(args: &IntegralArgs) -> Result<ExitCode, CliError> {
    let cfg = make_config(args.n, &args.epsilon, args.truncation_multiplier)?;
    let delta = parse_delta(&args.delta, args.n, true)?;
    let poly: DegreePolynomial = tautological_integral(&cfg)?;
    let fixed = match &delta {
        DeltaChoice::Symbolic => None,
        DeltaChoice::Fixed(r) => Some(r.clone()),
    };
    let entries = poly_entries(&poly, fixed.as_ref());
    match args.format {
        Format::Json => {
            let out = IntegralOutput {
                meta: meta_for(&cfg, &delta),
                polynomial: entries,
            };
            print!("{}", to_json(&out));
        }
        Format::Csv => print!("{}", integral_csv(&entries)),
        Format::Text => {
            let meta = meta_for(&cfg, &delta);
            println!(
                "n = {}, epsilon = {}, delta = {}, normalization = N^{}",
                meta.n, meta.epsilon, meta.delta, meta.normalization_power
            );
            println!("{}", polynomial_text(&poly, fixed.as_ref()));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bounds(args: &BoundsArgs) -> Result<ExitCode, CliError> {
    let (lo, hi) = parse_range(&args.n_range)?;
    let (rows, reports) = bounds_table_detailed(lo, hi, args.certify_up_to)?;
    match args.format {
        Format::Json => print!("{}", to_json(&BoundsOutput { rows, reports })),
        Format::Csv => print!("{}", bounds_csv(&rows)),
        Format::Text => print!("{}", bounds_text(&rows, &reports)),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode, CliError> {
    if args.d == 0 {
        return Err(CliError::Usage("degree d must be a positive integer".into()));
    }
    let cfg = make_config(args.n, &args.epsilon, args.truncation_multiplier)?;
    let delta = parse_delta(&args.delta, args.n, false)?;
    let delta_value = match &delta {
        DeltaChoice::Fixed(r) => r.clone(),
        DeltaChoice::Symbolic => unreachable!(),
    };
    let poly = tautological_integral(&cfg)?;
    let q = poly.eval_delta(&delta_value);
    let value = q.eval(&Rational::from_int(args.d as i64));
    let positive = value.is_positive();
    let report = VerifyReport {
        d: args.d,
        value: value.to_string(),
        positive,
    };
    match args.format {
        Format::Json => {
            let out = VerifyOutput {
                meta: meta_for(&cfg, &delta),
                polynomial: poly_entries(&poly, Some(&delta_value)),
                report,
            };
            print!("{}", to_json(&out));
        }
        Format::Csv => {
            println!("n,d,value,positive");
            println!("{},{},{},{}", args.n, args.d, report.value, report.positive);
        }
        Format::Text => {
            println!(
                "n = {}, d = {}, delta = {}: integral = {} ({})",
                args.n,
                args.d,
                delta_value,
                report.value,
                if positive { "positive" } else { "not positive" }
            );
        }
    }
    Ok(if positive {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_oracle(args: &OracleArgs) -> Result<ExitCode, CliError> {
    let (lo, hi) = parse_range(&args.n_range)?;
    let dims: Vec<u32> = (lo..=hi).collect();
    let eps = Rational::new(1, 2);

    let projective = run_projective_oracle(args.trials, args.seed)?;
    let shear = run_shear_oracle(&dims, &eps)?;
    let truncation = run_truncation_oracle(&dims, &eps)?;

    let all = [&projective, &shear, &truncation];
    let failures: u32 = all.iter().map(|r| r.failures).sum();
    let total: u32 = all.iter().map(|r| r.total).sum();
    let transcript: Vec<&String> = all.iter().flat_map(|r| r.transcript.iter()).collect();
    let first = all.iter().find_map(|r| r.first_counterexample.clone());

    match args.format {
        Format::Json => {
            let out = output::OracleOutput {
                total,
                failures,
                transcript: transcript.iter().map(|s| s.to_string()).collect(),
                first_counterexample: first.clone(),
            };
            print!("{}", to_json(&out));
        }
        Format::Csv => {
            return Err(CliError::Usage(
                "oracle output has no tabular form; use text or json".into(),
            ))
        }
        Format::Text => {
            for line in &transcript {
                println!("{line}");
            }
            if failures == 0 {
                println!("oracle: {total}/{total} checks passed");
            } else {
                println!("oracle: {failures}/{total} checks FAILED");
                println!("first counterexample: {}", first.clone().unwrap_or_default());
            }
        }
    }
    Ok(if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn init_thread_pool() {
    if let Ok(v) = std::env::var("RESBOUND_THREADS") {
        if let Ok(threads) = v.parse::<usize>() {
            if threads >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global();
            }
        }
    }
}

fn main() -> ExitCode {
    init_thread_pool();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Integral(args) => cmd_integral(args),
        Command::Bounds(args) => cmd_bounds(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Oracle(args) => cmd_oracle(args),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
