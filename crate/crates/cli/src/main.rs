use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use supercartan_cli::{builtin, parse_document, render, run_document, RunOptions};

#[derive(Parser)]
#[command(name = "supercartan", version, about = "Exact checks on Lie superalgebras, Cartan systems and FDAs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and resolve a document.
    Parse(Source),
    /// Print the canonical form of a document.
    Render(Source),
    /// Run every check of a document.
    Run {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Worker threads used inside each check.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Per-check limit in seconds.
        #[arg(long, default_value_t = 600)]
        timeout: u64,
    },
}

#[derive(Args)]
struct Source {
    /// Document path; standard input when absent.
    input: Option<PathBuf>,
    /// Use a built-in document (standard, mutations).
    #[arg(long, conflicts_with = "input")]
    builtin: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn read(source: &Source) -> Result<String, String> {
    if let Some(name) = &source.builtin {
        return builtin::builtin(name)
            .map(str::to_string)
            .ok_or_else(|| format!("unknown built-in {name:?}; available: {}", builtin::NAMES.join(", ")));
    }
    match &source.input {
        Some(p) => std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| e.to_string())?;
            Ok(s)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (source, run) = match &cli.command {
        Command::Parse(s) | Command::Render(s) => (s, None),
        Command::Run { source, format, jobs, timeout } => (source, Some((*format, *jobs, *timeout))),
    };
    let text = match read(source) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let doc = match parse_document(&text) {
        Ok(d) => d,
        Err(e) => {
            if let Some((Format::Json, _, _)) = run {
                let v = serde_json::json!({
                    "error": { "line": e.span.line, "column": e.span.column, "kind": e.kind.to_string(), "message": e.message }
                });
                println!("{}", serde_json::to_string_pretty(&v).unwrap());
            } else {
                eprintln!("error: {e}");
            }
            return ExitCode::from(2);
        }
    };
    match (&cli.command, run) {
        (Command::Parse(_), _) => {
            println!("ok: {} statements", doc.statements.len());
            ExitCode::SUCCESS
        }
        (Command::Render(_), _) => {
            print!("{}", render(&doc));
            ExitCode::SUCCESS
        }
        (_, Some((format, jobs, timeout))) => {
            let report = run_document(&doc, &RunOptions { jobs, timeout: Duration::from_secs(timeout) });
            match format {
                Format::Text => print!("{}", report.to_text()),
                Format::Json => println!("{}", report.to_json()),
            }
            ExitCode::from(report.exit_code() as u8)
        }
        _ => unreachable!(),
    }
}
