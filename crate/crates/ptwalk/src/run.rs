//! Command execution: parallel grids, CSV and plot output, exit codes.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use ptwalk_core::scan::{self, evaluate_cell, SweepResult, SweepSpec};
use ptwalk_core::topology::{self, PhaseCell};
use ptwalk_core::Error;

use crate::config::{Command, ConfigError, RunConfig};
use crate::csv::{to_csv_string, CsvRow};
use crate::plot::{self, NothingToPlot};

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Plot(#[from] NothingToPlot),
    #[error("numerical failure: {0}")]
    Numerical(#[from] Error),
    #[error("cannot {action} {}: {source}", path.display())]
    Io {
        action: &'static str,
        path: PathBuf,
        source: io::Error,
    },
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Config(_) | AppError::Plot(_) => 2,
            AppError::Numerical(Error::InvalidParameter(_)) => 2,
            AppError::Numerical(_) => 3,
            AppError::Io { .. } => 4,
        }
    }

    pub fn io(action: &'static str, path: &Path, source: io::Error) -> Self {
        AppError::Io {
            action,
            path: path.to_path_buf(),
            source,
        }
    }
}

/// Same rows as [`scan::run_sweep`], with cells evaluated on the rayon pool.
pub fn sweep_parallel(spec: &SweepSpec) -> Result<SweepResult, Error> {
    spec.validate()?;
    let rows = spec
        .cells()
        .par_iter()
        .flat_map_iter(|&(a, b)| evaluate_cell(spec, a, b))
        .collect();
    Ok(SweepResult::from_rows(rows))
}

/// Same cells and errors as [`topology::phase_diagram`], one α row per task.
pub fn phase_diagram_parallel(
    alphas: &[f64],
    betas: &[f64],
    num_k: usize,
) -> Result<Vec<Vec<PhaseCell>>, Error> {
    let increasing = |g: &[f64]| !g.is_empty() && g.windows(2).all(|w| w[1] > w[0]);
    if !increasing(alphas) || !increasing(betas) {
        return Err(Error::InvalidParameter(
            "phase-diagram grids must be non-empty and increasing",
        ));
    }
    alphas
        .par_iter()
        .enumerate()
        .map(|(i, &a)| {
            topology::phase_diagram(&[a], betas, num_k)
                .map(|mut row| row.remove(0))
                .map_err(|e| match e {
                    Error::Cell { column, source, .. } => Error::Cell {
                        row: i,
                        column,
                        source,
                    },
                    other => other,
                })
        })
        .collect()
}

/// Rendered outputs of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct Output {
    pub csv: String,
    pub svg: Option<String>,
}

pub fn execute(cfg: &RunConfig) -> Result<Output, AppError> {
    let (rows, svg): (Vec<CsvRow>, Option<String>) = match cfg.command {
        Command::Sweep | Command::Evolve => {
            let result = sweep_parallel(&cfg.sweep_spec())?;
            let svg = if cfg.plot {
                Some(plot::sweep_svg(&result)?)
            } else {
                None
            };
            (result.rows.iter().map(CsvRow::from).collect(), svg)
        }
        Command::PhaseDiagram => {
            let cells =
                phase_diagram_parallel(&cfg.phase_alpha_grid(), &cfg.phase_beta_grid(), cfg.num_k)?;
            let svg = if cfg.plot {
                Some(plot::phase_diagram_svg(&cells)?)
            } else {
                None
            };
            // β-major, like sweep rows
            let n_beta = cells.first().map_or(0, Vec::len);
            let rows = (0..n_beta)
                .flat_map(|j| cells.iter().map(move |col| CsvRow::from(&col[j])))
                .collect();
            (rows, svg)
        }
        Command::Winding => {
            if cfg.plot {
                return Err(NothingToPlot("a single winding number has no plot").into());
            }
            let alpha = cfg.alpha_radians().expect("validated");
            let mut betas = cfg.beta_radians();
            betas.sort_by(f64::total_cmp);
            betas.dedup();
            let rows = betas
                .into_iter()
                .map(|b| topology::phase_cell(alpha, b, cfg.num_k).map(|c| CsvRow::from(&c)))
                .collect::<Result<_, _>>()?;
            (rows, None)
        }
        Command::PtScan => {
            if cfg.plot {
                return Err(NothingToPlot("PT scans are tabulated only").into());
            }
            let rows = scan::pt_scan(&cfg.sweep_spec())?;
            if let Some(Err(e)) = rows.iter().map(|r| &r.phase).find(|p| p.is_err()) {
                return Err(e.clone().into());
            }
            (rows.iter().map(CsvRow::from).collect(), None)
        }
    };
    Ok(Output {
        csv: to_csv_string(&rows),
        svg,
    })
}

/// Plot path next to the CSV: same stem, `.svg` extension.
pub fn plot_path(out: &Path) -> PathBuf {
    out.with_extension("svg")
}

/// Executes `cfg` and writes its outputs; CSV goes to stdout without `out`.
pub fn run(cfg: &RunConfig) -> Result<(), AppError> {
    let output = execute(cfg)?;
    match &cfg.out {
        Some(path) => {
            fs::write(path, &output.csv).map_err(|e| AppError::io("write", path, e))?;
            if let Some(svg) = &output.svg {
                let p = plot_path(path);
                fs::write(&p, svg).map_err(|e| AppError::io("write", &p, e))?;
            }
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(output.csv.as_bytes())
                .and_then(|_| lock.flush())
                .map_err(|e| AppError::io("write", Path::new("<stdout>"), e))?;
        }
    }
    Ok(())
}
