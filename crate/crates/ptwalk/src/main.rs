use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use ptwalk::{parse_config, run, AppError};

/// Lossy split-step quantum walk: evolutions, sweeps, phase diagrams,
/// winding numbers and PT scans. Angles are in units of π.
#[derive(Parser, Debug)]
#[command(name = "ptwalk", version)]
struct Cli {
    /// Flat `key = value` config file; flags override its keys.
    config: Option<PathBuf>,
    /// evolve | sweep | phase-diagram | winding | pt-scan
    #[arg(long)]
    command: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha_start: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    alpha_stop: Option<String>,
    #[arg(long)]
    alpha_count: Option<String>,
    /// Comma-separated list.
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta_start: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    beta_stop: Option<String>,
    #[arg(long)]
    beta_count: Option<String>,
    /// Comma-separated step counts.
    #[arg(long)]
    t: Option<String>,
    #[arg(long)]
    l1: Option<String>,
    #[arg(long)]
    l2: Option<String>,
    #[arg(long)]
    num_k: Option<String>,
    /// up | down
    #[arg(long)]
    coin: Option<String>,
    /// loss-weighted | post-selected
    #[arg(long)]
    measure: Option<String>,
    /// CSV path; stdout when absent.
    #[arg(long)]
    out: Option<String>,
    /// Also write an SVG next to the CSV.
    #[arg(long)]
    plot: bool,
}

impl Cli {
    fn overrides(&self) -> Vec<(String, String)> {
        let pairs = [
            ("command", &self.command),
            ("alpha", &self.alpha),
            ("alpha_start", &self.alpha_start),
            ("alpha_stop", &self.alpha_stop),
            ("alpha_count", &self.alpha_count),
            ("beta", &self.beta),
            ("beta_start", &self.beta_start),
            ("beta_stop", &self.beta_stop),
            ("beta_count", &self.beta_count),
            ("t", &self.t),
            ("l1", &self.l1),
            ("l2", &self.l2),
            ("num_k", &self.num_k),
            ("coin", &self.coin),
            ("measure", &self.measure),
            ("out", &self.out),
        ];
        let mut v: Vec<(String, String)> = pairs
            .into_iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
            .collect();
        if self.plot {
            v.push(("plot".into(), "true".into()));
        }
        v
    }
}

fn main_inner(cli: &Cli) -> Result<(), AppError> {
    let text = match &cli.config {
        Some(path) => fs::read_to_string(path).map_err(|e| AppError::io("read", path, e))?,
        None => String::new(),
    };
    let cfg = parse_config(&text, &cli.overrides())?;
    run(&cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            eprintln!(
                "ptwalk: {}",
                msg.lines()
                    .next()
                    .unwrap_or("invalid arguments")
                    .trim_start_matches("error: ")
            );
            return ExitCode::from(2);
        }
    };
    match main_inner(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ptwalk: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
