//! Parameter sweeps over `(α, β, t)` at fixed losses.
//!
//! Each `(α, β)` cell evolves `|0, coin⟩` once up to the largest requested
//! `t` and records observables at every requested `t`. Lossless cells also
//! get gaps and a winding number; every cell gets a PT classification.
//! Cell failures become row flags and never abort a sweep.
//!
//! [`run_sweep`] is sequential. Cells are independent, so a caller can
//! evaluate [`SweepSpec::cells`] with [`evaluate_cell`] in any order or in
//! parallel and hand the rows to [`SweepResult::from_rows`], which restores
//! the canonical `(β, α, t)` ordering.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;

use crate::lattice::{Coin, WalkerState};
use crate::momentum::{self, PtPhase, PtTag};
use crate::observables::{measure_state, Measure};
use crate::operators::{step, WalkParams};
use crate::topology::{self, GapReport, WindingResult};
use crate::{canonical_angle, Error};

pub const DEFAULT_ALPHA_COUNT: usize = 201;
pub const DEFAULT_STEPS: usize = 15;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    /// Start of the half-open α range, radians.
    pub alpha_start: f64,
    /// End of the half-open α range, radians.
    pub alpha_stop: f64,
    pub alpha_count: usize,
    pub beta_values: Vec<f64>,
    pub t_values: Vec<usize>,
    pub l1: f64,
    pub l2: f64,
    /// k-points for winding quadrature and PT classification.
    pub num_k: usize,
    pub initial_coin: Coin,
    pub measure: Measure,
    pub pt_tol: f64,
}

impl Default for SweepSpec {
    /// α over `[-π, π)` in 201 points, `β = π/4`, `t = 15`, lossless.
    fn default() -> Self {
        SweepSpec {
            alpha_start: -PI,
            alpha_stop: PI,
            alpha_count: DEFAULT_ALPHA_COUNT,
            beta_values: alloc::vec![PI / 4.0],
            t_values: alloc::vec![DEFAULT_STEPS],
            l1: 1.0,
            l2: 1.0,
            num_k: momentum::DEFAULT_NUM_K,
            initial_coin: Coin::Up,
            measure: Measure::default(),
            pt_tol: momentum::DEFAULT_PT_TOL,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), Error> {
        if self.alpha_count == 0 {
            return Err(Error::InvalidParameter("alpha count must be positive"));
        }
        if !self.alpha_start.is_finite() || !self.alpha_stop.is_finite() {
            return Err(Error::InvalidParameter("alpha range must be finite"));
        }
        if self.beta_values.is_empty() || self.beta_values.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidParameter(
                "beta values must be finite and non-empty",
            ));
        }
        if self.t_values.is_empty() || self.t_values.contains(&0) {
            return Err(Error::InvalidParameter(
                "step counts must be non-empty and at least 1",
            ));
        }
        if self.num_k < 5 {
            return Err(Error::InvalidParameter("num_k must be at least 5"));
        }
        if !(self.pt_tol.is_finite() && self.pt_tol > 0.0) {
            return Err(Error::InvalidParameter("PT tolerance must be positive"));
        }
        WalkParams::new(0.0, 0.0, self.l1, self.l2, 0).map(|_| ())
    }

    /// Canonical α values, sorted and deduplicated.
    pub fn alpha_grid(&self) -> Vec<f64> {
        let span = self.alpha_stop - self.alpha_start;
        let mut grid: Vec<f64> = (0..self.alpha_count)
            .map(|i| canonical_angle(self.alpha_start + span * i as f64 / self.alpha_count as f64))
            .collect();
        sort_dedup(&mut grid);
        grid
    }

    pub fn beta_grid(&self) -> Vec<f64> {
        let mut grid: Vec<f64> = self
            .beta_values
            .iter()
            .map(|&b| canonical_angle(b))
            .collect();
        sort_dedup(&mut grid);
        grid
    }

    pub fn steps(&self) -> Vec<usize> {
        let mut t = self.t_values.clone();
        t.sort_unstable();
        t.dedup();
        t
    }

    /// All `(α, β)` cells, β-major.
    pub fn cells(&self) -> Vec<(f64, f64)> {
        let alphas = self.alpha_grid();
        self.beta_grid()
            .into_iter()
            .flat_map(|b| alphas.iter().map(move |&a| (a, b)))
            .collect()
    }

    pub fn is_hermitian(&self) -> bool {
        self.l1 == 1.0 && self.l2 == 1.0
    }
}

fn sort_dedup(v: &mut Vec<f64>) {
    v.sort_by(f64::total_cmp);
    v.dedup();
}

/// Winding-number column of a sweep row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WindingCell {
    Winding(WindingResult),
    /// On a transition line.
    GapClosed,
    NonConvergent,
    /// Lossy walk: no winding number is computed.
    NotApplicable,
}

impl WindingCell {
    pub fn value(&self) -> Option<i32> {
        match self {
            WindingCell::Winding(w) => Some(w.value),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub alpha: f64,
    pub beta: f64,
    pub t: usize,
    pub l1: f64,
    pub l2: f64,
    /// `None` when the state could not be measured (post-selection of a vanished state).
    pub diffusion: Option<f64>,
    pub entropy_bits: Option<f64>,
    pub surviving_norm: f64,
    pub winding: WindingCell,
    /// Lossless rows only.
    pub gaps: Option<GapReport>,
    /// `None` when classification failed.
    pub pt_phase: Option<PtPhase>,
}

impl SweepRow {
    pub fn pt_tag(&self) -> Option<PtTag> {
        self.pt_phase.map(|p| p.tag)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

fn row_order(a: &SweepRow, b: &SweepRow) -> Ordering {
    a.beta
        .total_cmp(&b.beta)
        .then(a.alpha.total_cmp(&b.alpha))
        .then(a.t.cmp(&b.t))
}

impl SweepResult {
    /// Sorts rows by `(β, α, t)`.
    pub fn from_rows(mut rows: Vec<SweepRow>) -> Self {
        rows.sort_by(row_order);
        SweepResult { rows }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Rows for one `(α, β)` cell, one per requested `t` in ascending order.
pub fn evaluate_cell(spec: &SweepSpec, alpha: f64, beta: f64) -> Vec<SweepRow> {
    let steps = spec.steps();
    let t_max = steps.last().copied().unwrap_or(0);
    let params = match WalkParams::new(alpha, beta, spec.l1, spec.l2, t_max) {
        Ok(p) => p,
        Err(_) => return Vec::new(),
    };
    let (winding, gaps) = if spec.is_hermitian() {
        let winding = match topology::winding_number(params.alpha(), params.beta(), spec.num_k) {
            Ok(w) => WindingCell::Winding(w),
            Err(Error::GapClosed { .. }) => WindingCell::GapClosed,
            Err(_) => WindingCell::NonConvergent,
        };
        (
            winding,
            Some(topology::gap_at(params.alpha(), params.beta())),
        )
    } else {
        (WindingCell::NotApplicable, None)
    };
    let pt_phase = momentum::pt_phase_classify(&params, spec.num_k, spec.pt_tol).ok();

    let mut state =
        WalkerState::new(2 * t_max, 0, spec.initial_coin).expect("origin lies on the lattice");
    let mut rows = Vec::with_capacity(steps.len());
    let mut wanted = steps.iter().peekable();
    for t in 1..=t_max {
        step(&mut state, &params).expect("lattice sized to the light cone");
        if wanted.peek() != Some(&&t) {
            continue;
        }
        wanted.next();
        let record = measure_state(&state, t, spec.measure).ok();
        rows.push(SweepRow {
            alpha: params.alpha(),
            beta: params.beta(),
            t,
            l1: spec.l1,
            l2: spec.l2,
            diffusion: record.and_then(|r| r.diffusion),
            entropy_bits: record.map(|r| r.entropy_bits),
            surviving_norm: state.norm_sq(),
            winding,
            gaps,
            pt_phase,
        });
    }
    rows
}

/// Runs every cell sequentially.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult, Error> {
    spec.validate()?;
    let rows = spec
        .cells()
        .into_iter()
        .flat_map(|(a, b)| evaluate_cell(spec, a, b))
        .collect();
    Ok(SweepResult::from_rows(rows))
}

/// PT classification of one `(α, β)` point.
#[derive(Clone, Debug, PartialEq)]
pub struct PtScanRow {
    pub alpha: f64,
    pub beta: f64,
    pub l1: f64,
    pub l2: f64,
    pub phase: Result<PtPhase, Error>,
}

/// PT classification over the α grid and β values of `spec`; no walk is run.
pub fn pt_scan(spec: &SweepSpec) -> Result<Vec<PtScanRow>, Error> {
    spec.validate()?;
    Ok(spec
        .cells()
        .into_iter()
        .map(|(alpha, beta)| {
            let phase = WalkParams::new(alpha, beta, spec.l1, spec.l2, 0)
                .and_then(|p| momentum::pt_phase_classify(&p, spec.num_k, spec.pt_tol));
            PtScanRow {
                alpha,
                beta,
                l1: spec.l1,
                l2: spec.l2,
                phase,
            }
        })
        .collect())
}
