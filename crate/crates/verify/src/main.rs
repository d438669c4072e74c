use std::io::{ErrorKind, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use siegel_core::rational::partial_fractions;
use siegel_core::series::{casselman, pi_s_act, t_s_act};
use siegel_core::{FieldParams, PadicScalar, Poly, RationalFunction, SymplecticElement};
use siegel_verify::{emit_report, run_suite, to_sorted_json, Format, Suite, SuiteConfig};

#[derive(Parser)]
#[command(name = "verify", about = "Seeded verification suites for p-adic Siegel space identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Block relations, U0 decomposition, cocycle, differentials.
    Symplectic(SuiteArgs),
    /// Membership certificates for the affinoid pieces and the translation lemma.
    Siegel(SuiteArgs),
    /// Group laws, partial fractions and residues on the line.
    Series(SuiteArgs),
    /// Intertwining and kernel of the Casselman operator.
    Casselman(SuiteArgs),
    /// Pairing identities between distributions and functions.
    Duality(SuiteArgs),
    /// Every suite in one report.
    All(SuiteArgs),
    /// Apply an SL(2) action to a rational function given by coefficients.
    Reps(RepsArgs),
}

#[derive(Args)]
struct FieldArgs {
    #[arg(long, default_value_t = 5)]
    p: u64,
    /// Ramification index of K over Q_p.
    #[arg(long, default_value_t = 2)]
    e: u32,
    /// Working precision in digits of the uniformizer π.
    #[arg(long, default_value_t = 24)]
    precision: u32,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SuiteArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Restrict to matrices of size n (1 or 2).
    #[arg(long)]
    n: Option<usize>,
    /// Top level of the filtration to scan.
    #[arg(long, default_value_t = 3)]
    m: u32,
    /// Restrict to one weight.
    #[arg(long, allow_hyphen_values = true)]
    s: Option<i64>,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum Action {
    /// Discrete series `π_s(g)`.
    Pi,
    /// Principal series `T_s(g)`.
    T,
    /// The `(s+1)`-fold derivative.
    Casselman,
}

#[derive(Args)]
struct RepsArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Numerator coefficients from the constant term up; integers or `a/b`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    num: Vec<String>,
    /// Denominator coefficients from the constant term up.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "1")]
    den: Vec<String>,
    /// Entries a,b,c,d of an element of SL(2, Q).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "1,0,0,1")]
    g: Vec<String>,
    #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
    s: i64,
    #[arg(long, value_enum, default_value_t = Action::Pi)]
    action: Action,
    #[command(flatten)]
    output: Output,
}

fn parse_scalar(params: FieldParams, text: &str) -> anyhow::Result<PadicScalar> {
    let text = text.trim();
    let (a, b) = match text.split_once('/') {
        Some((a, b)) => (a.trim().parse::<i64>()?, b.trim().parse::<i64>()?),
        None => (text.parse::<i64>()?, 1),
    };
    PadicScalar::from_ratio(params, a, b).with_context(|| format!("cannot read {text:?} as a rational number"))
}

fn parse_poly(params: FieldParams, coeffs: &[String]) -> anyhow::Result<Poly> {
    let c = coeffs.iter().map(|t| parse_scalar(params, t)).collect::<anyhow::Result<_>>()?;
    Ok(Poly::new(params, c))
}

fn write_output(text: &str, output: &Output) -> anyhow::Result<()> {
    match &output.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => match std::io::stdout().lock().write_all(text.as_bytes()) {
            // A closed reader such as `head` has seen all it wants.
            Err(e) if e.kind() == ErrorKind::BrokenPipe => Ok(()),
            other => other.context("writing to standard output"),
        },
    }
}

fn run_suite_command(suite: Suite, args: SuiteArgs) -> anyhow::Result<bool> {
    let mut config = SuiteConfig::new(suite, args.field.p, args.field.e, args.field.precision, args.seed);
    config.n = args.n;
    config.m = args.m;
    config.s = args.s;
    let report = run_suite(&config)?;
    write_output(&emit_report(&report, args.output.format), &args.output)?;
    Ok(report.ok())
}

fn run_reps(args: RepsArgs) -> anyhow::Result<bool> {
    let params = FieldParams::new(args.field.p, args.field.e, args.field.precision)?;
    let f = RationalFunction::new(parse_poly(params, &args.num)?, parse_poly(params, &args.den)?)?;
    if args.g.len() != 4 {
        bail!("--g takes four entries a,b,c,d");
    }
    let e: Vec<PadicScalar> = args.g.iter().map(|t| parse_scalar(params, t)).collect::<anyhow::Result<_>>()?;
    let g = SymplecticElement::sl2(e[0], e[1], e[2], e[3])?;
    let (name, image) = match args.action {
        Action::Pi => ("pi_s(g) f", pi_s_act(args.s, &g, &f)?),
        Action::T => ("T_s(g) f", t_s_act(args.s, &g, &f)?),
        Action::Casselman => ("(d/dz)^(s+1) f", casselman(args.s, &f)?),
    };
    let principal = partial_fractions(&image).ok().map(|form| {
        json!({
            "polynomial": form.polynomial.to_string(),
            "poles": form
                .poles
                .iter()
                .map(|(r, c)| json!({ "at": r.to_string(), "coefficients": c.iter().map(ToString::to_string).collect::<Vec<_>>() }))
                .collect::<Vec<_>>(),
        })
    });
    let report = json!({
        "action": name,
        "s": args.s,
        "g": g.matrix().to_string(),
        "input": f.to_string(),
        "result": image.to_string(),
        "degree_at_infinity": image.laurent_degree_at_infinity(),
        "partial_fractions": principal,
    });
    let text = match args.output.format {
        Format::Json => to_sorted_json(&report),
        Format::Text => format!("{name} = {image}\n"),
    };
    write_output(&text, &args.output)?;
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Symplectic(a) => run_suite_command(Suite::Symplectic, a),
        Command::Siegel(a) => run_suite_command(Suite::Siegel, a),
        Command::Series(a) => run_suite_command(Suite::Series, a),
        Command::Casselman(a) => run_suite_command(Suite::Casselman, a),
        Command::Duality(a) => run_suite_command(Suite::Duality, a),
        Command::All(a) => run_suite_command(Suite::All, a),
        Command::Reps(a) => run_reps(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
