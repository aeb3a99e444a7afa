use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use nilcalc::commands::regression_failures;
use nilcalc::{corpus_generate, parse_algebra, parse_xi, run_command, resolve_source, CliError, CliResult, Command, Config, ParsedAlgebra};

/// Graded nilpotent Lie algebras: flat orbits, strata, polarizations, Maslov/η and H-ellipticity.
#[derive(Parser, Debug)]
#[command(name = "nilcalc", version)]
struct Args {
    /// validate, orbits, stratify, polarize, maslov-demo, helliptic, engel-check, mohsen,
    /// corpus-regression, or generate (print the document of --family/--param)
    command: String,
    /// Algebra document (JSON or TOML), or bundled:NAME
    #[arg(long, value_name = "FILE", conflicts_with = "family")]
    algebra: Option<PathBuf>,
    /// Built-in family: heisenberg, complex-heisenberg, heisenberg-product, quotient-chain,
    /// free-step2, engel, upper-triangular, mohsen-of
    #[arg(long, value_name = "NAME")]
    family: Option<String>,
    #[arg(long, value_name = "P", requires = "family")]
    param: Option<String>,
    /// Covector as comma-separated rationals
    #[arg(long, value_name = "a,b,...", allow_hyphen_values = true)]
    xi: Option<String>,
    #[arg(long, value_name = "N")]
    resolution: Option<usize>,
    #[arg(long, value_name = "N")]
    truncation: Option<usize>,
    #[arg(long, value_name = "T")]
    tolerance: Option<f64>,
    #[arg(long, value_name = "S")]
    seed: Option<u64>,
    /// Write the report here instead of stdout
    #[arg(long, value_name = "OUT")]
    json: Option<PathBuf>,
}

fn load(args: &Args) -> CliResult<Option<(ParsedAlgebra, String)>> {
    if let Some(path) = &args.algebra {
        if let Some(s) = path.to_str().filter(|s| s.starts_with("bundled:")) {
            return Ok(Some((resolve_source(s)?, s.to_string())));
        }
        let text = std::fs::read_to_string(path)?;
        return Ok(Some((parse_algebra(&text)?, path.display().to_string())));
    }
    if let Some(family) = &args.family {
        let source = match &args.param {
            Some(p) => format!("{family}:{p}"),
            None => family.clone(),
        };
        return Ok(Some((resolve_source(&source)?, source)));
    }
    Ok(None)
}

fn emit(text: &str, out: Option<&PathBuf>) -> CliResult<()> {
    match out {
        Some(path) => Ok(std::fs::write(path, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(args: &Args) -> CliResult<ExitCode> {
    if args.command == "generate" {
        let family = args.family.as_deref().ok_or_else(|| CliError::Usage("generate needs --family".into()))?;
        let mut text = corpus_generate(family, args.param.as_deref())?.to_pretty_json();
        text.push('\n');
        emit(&text, args.json.as_ref())?;
        return Ok(ExitCode::SUCCESS);
    }
    let command = Command::parse(&args.command).ok_or_else(|| CliError::Usage(format!("unknown command {:?}", args.command)))?;
    let defaults = Config::default();
    let config = Config {
        xi: args.xi.as_deref().map(parse_xi).transpose()?,
        resolution: args.resolution.unwrap_or(defaults.resolution),
        truncation: args.truncation.unwrap_or(defaults.truncation),
        tolerance: args.tolerance.unwrap_or(defaults.tolerance),
        seed: args.seed.unwrap_or(defaults.seed),
    };
    let loaded = load(args)?;
    if loaded.is_none() && !command.algebra_optional() {
        return Err(CliError::Usage(format!("{} needs --algebra FILE or --family NAME", command.name())));
    }
    let report = run_command(command, loaded.as_ref().map(|(p, _)| p), loaded.as_ref().map(|(_, s)| s.as_str()), &config)?;
    emit(&report.to_json(), args.json.as_ref())?;
    if command == Command::CorpusRegression {
        let failed = regression_failures(&report);
        if failed > 0 {
            let err = CliError::Regression(failed);
            eprintln!("error[{}]: {err}", err.code());
            return Ok(ExitCode::from(err.exit_code() as u8));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&args) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
