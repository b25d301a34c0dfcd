use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand};
use geocompare::corpus;
use geocompare::frontend::bench::{load_manifest, run_benchmarks, BenchCase};
use geocompare::frontend::{compare_source, server, CompareConfig, Mode};

#[derive(Parser)]
#[command(name = "geocompare", version, about = "Compare quantities on planar constructions")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compare the two sides of a .gct file.
    Compare {
        file: PathBuf,
        /// Seconds.
        #[arg(long, default_value_t = 5.0)]
        timeout: f64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Mode::Auto)]
        mode: Mode,
        #[arg(long)]
        json: bool,
        /// Print the delinearization log.
        #[arg(long)]
        transcript: bool,
    },
    /// Serve GET /euclideansolver and POST /compare.
    Serve {
        #[arg(long, default_value_t = 8765)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
    },
    /// Run a suite: `builtin` or a manifest CSV.
    Bench {
        suite: String,
        #[arg(long)]
        html: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match cli.cmd {
        Cmd::Compare {
            file,
            timeout,
            tol,
            mode,
            json,
            transcript,
        } => {
            if !(timeout > 0.0 && timeout.is_finite() && tol > 0.0) {
                eprintln!("error: timeout and tol must be positive");
                return ExitCode::from(1);
            }
            let src = match std::fs::read_to_string(&file) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {}: {e}", file.display());
                    return ExitCode::from(1);
                }
            };
            let cfg = CompareConfig {
                timeout: Duration::from_secs_f64(timeout),
                tol,
                mode,
                transcript,
                ..Default::default()
            };
            match compare_source(&src, &cfg) {
                Ok(r) => {
                    if json {
                        println!("{}", r.to_json());
                    } else {
                        print!("{}", r.report());
                    }
                    ExitCode::from(if r.is_definite() { 0 } else { 2 })
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Cmd::Serve { port, host } => match server::start(&format!("{host}:{port}")) {
            Ok(s) => {
                eprintln!("listening on http://{}", s.addr);
                s.wait();
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
        Cmd::Bench { suite, html, csv } => {
            let cases: Vec<BenchCase> = if suite == "builtin" {
                corpus::SUITE.iter().map(BenchCase::from).collect()
            } else {
                match load_manifest(suite.as_ref()) {
                    Ok(c) => c,
                    Err(e) => {
                        eprintln!("error: {suite}: {e}");
                        return ExitCode::from(1);
                    }
                }
            };
            let report = run_benchmarks(&cases, &CompareConfig::default());
            let csv_text = report.to_csv();
            for (path, text) in [(csv.as_ref(), &csv_text), (html.as_ref(), &report.to_html())] {
                if let Some(p) = path {
                    if let Err(e) = std::fs::write(p, text) {
                        eprintln!("error: {}: {e}", p.display());
                        return ExitCode::from(1);
                    }
                }
            }
            if csv.is_none() {
                print!("{csv_text}");
            }
            eprintln!("{} of {} passed", report.passed(), report.rows.len());
            ExitCode::SUCCESS
        }
    }
}
