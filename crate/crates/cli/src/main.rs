use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use rrtool::corpus::{render_matrix, verify_corpus};
use rrtool::{bundled_corpus, render_json, AnySession, CliError, CliResult, Kind, Params};

/// Ratliff-Rush ideals, closures and Hilbert data over truncated graded rings.
#[derive(Parser, Debug)]
#[command(name = "rrtool", version)]
struct Cli {
    /// rr-ideal, rr-closure, chain-term, filtration, hilbert, dim-one,
    /// reduction, superficial, rho, bounded-closure, closure-witness,
    /// integral-closure, verify-involution, inclusion-chain, torsion,
    /// max-element, or verify-examples.
    command: String,
    /// Job file (for verify-examples: a corpus directory; defaults to the
    /// bundled corpus).
    #[arg(long, short)]
    input: Option<PathBuf>,
    /// Parameter override, e.g. --param n=2 --param module=M.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    /// Write the JSON result document here ("-" for stdout).
    #[arg(long)]
    json: Option<PathBuf>,
    /// Fail unless the result carries a stability certificate.
    #[arg(long)]
    certified_only: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("rrtool: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: &Cli) -> CliResult<u8> {
    let mut overrides = Params::default();
    for p in &cli.params {
        overrides.set(p)?;
    }
    let started = Instant::now();
    if cli.command == "verify-examples" {
        let dir = cli.input.clone().unwrap_or_else(bundled_corpus);
        let reports = verify_corpus(&dir, &overrides)?;
        print!("{}", render_matrix(&reports));
        eprintln!("elapsed: {:.2?}", started.elapsed());
        return Ok(if reports.iter().all(|r| r.passed()) { 0 } else { 4 });
    }
    let path = cli
        .input
        .as_ref()
        .ok_or_else(|| CliError::validation("--input <job file> is required"))?;
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    let session = AnySession::open(&text, &overrides)?;
    let result = session.run(Some(&cli.command))?;
    let json = render_json(&result.document);
    let to_stdout = cli.json.as_ref().is_some_and(|p| p.as_os_str() == "-");
    match &cli.json {
        Some(_) if to_stdout => print!("{json}"),
        Some(p) => std::fs::write(p, &json).map_err(|e| CliError::io(format!("{}: {e}", p.display())))?,
        None => {}
    }
    if to_stdout {
        eprint!("{}", result.report);
    } else {
        print!("{}", result.report);
    }
    eprintln!("elapsed: {:.2?}", started.elapsed());
    if let Some(v) = result.violation {
        return Err(CliError {
            kind: Kind::Internal,
            message: v,
        });
    }
    if cli.certified_only && result.certified == Some(false) {
        return Err(CliError {
            kind: Kind::Horizon,
            message: "no stability certificate within the horizon (--certified-only)".into(),
        });
    }
    Ok(0)
}
