//! Position moments, diffusion coefficient and Shannon entropy.
//!
//! `D(t) = (M2 - M1²) / 2t` with `M1 = Σ n P(n)`, `M2 = Σ n² P(n)`, and
//! `S = -Σ P(n) log₂ P(n)` in bits.
//!
//! For lossy walks the probabilities can be taken either as they are
//! ([`Measure::LossWeighted`], the default) or renormalized by the surviving
//! norm ([`Measure::PostSelected`]). Both agree for lossless walks.

use alloc::vec::Vec;

use libm::log2;

use crate::lattice::{ProbDist, WalkerState};
use crate::Error;

/// How lossy distributions are turned into probabilities.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Measure {
    /// `P(n) = |ψ(n)|²` without renormalization; observables shrink with the surviving norm.
    #[default]
    LossWeighted,
    /// `P(n) = |ψ(n)|² / ‖ψ‖²`, conditioned on survival.
    PostSelected,
}

impl Measure {
    pub fn as_str(self) -> &'static str {
        match self {
            Measure::LossWeighted => "loss-weighted",
            Measure::PostSelected => "post-selected",
        }
    }
}

/// Slack (relative to `max(1, M2)`) within which a negative variance is rounding noise.
pub const VARIANCE_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ObservableRecord {
    pub t: usize,
    pub m1: f64,
    pub m2: f64,
    pub variance: f64,
    /// `None` at `t = 0`.
    pub diffusion: Option<f64>,
    pub entropy_bits: f64,
    /// Squared norm before any renormalization.
    pub surviving_norm: f64,
}

fn require_normalized(dist: &ProbDist) -> Result<(), Error> {
    if dist.is_normalized() {
        Ok(())
    } else {
        Err(Error::NotNormalized { total: dist.sum() })
    }
}

fn raw_moments(dist: &ProbDist) -> (f64, f64) {
    dist.entries().iter().fold((0.0, 0.0), |(m1, m2), &(x, p)| {
        let x = x as f64;
        (m1 + x * p, m2 + x * x * p)
    })
}

fn raw_entropy(dist: &ProbDist) -> f64 {
    let s: f64 = dist
        .entries()
        .iter()
        .filter(|&&(_, p)| p > 0.0)
        .map(|&(_, p)| -p * log2(p))
        .sum();
    s.max(0.0)
}

fn clamped_variance(m1: f64, m2: f64) -> Result<f64, Error> {
    let var = m2 - m1 * m1;
    if var >= 0.0 {
        Ok(var)
    } else if var > -VARIANCE_SLACK * m2.max(1.0) {
        Ok(0.0)
    } else {
        Err(Error::NegativeVariance(var))
    }
}

fn diffusion_from(m1: f64, m2: f64, t: usize) -> Result<f64, Error> {
    if t == 0 {
        return Err(Error::DivisionByZeroStep);
    }
    Ok(clamped_variance(m1, m2)? / (2.0 * t as f64))
}

/// First and second position moments of a normalized distribution.
pub fn moments(dist: &ProbDist) -> Result<(f64, f64), Error> {
    require_normalized(dist)?;
    Ok(raw_moments(dist))
}

/// `(M2 - M1²) / 2t` of a normalized distribution, clamped at 0 against rounding.
pub fn diffusion_coefficient(dist: &ProbDist, t: usize) -> Result<f64, Error> {
    if t == 0 {
        return Err(Error::DivisionByZeroStep);
    }
    let (m1, m2) = moments(dist)?;
    diffusion_from(m1, m2, t)
}

/// Base-2 Shannon entropy of a normalized distribution (`0 log 0 = 0`).
pub fn shannon_entropy(dist: &ProbDist) -> Result<f64, Error> {
    require_normalized(dist)?;
    Ok(raw_entropy(dist))
}

/// Observables of `state` at time `t` under `measure`.
pub fn measure_state(
    state: &WalkerState,
    t: usize,
    measure: Measure,
) -> Result<ObservableRecord, Error> {
    let dist = state.probability_distribution(measure == Measure::PostSelected)?;
    let (m1, m2) = raw_moments(&dist);
    let variance = clamped_variance(m1, m2)?;
    Ok(ObservableRecord {
        t,
        m1,
        m2,
        variance,
        diffusion: if t == 0 {
            None
        } else {
            Some(diffusion_from(m1, m2, t)?)
        },
        entropy_bits: raw_entropy(&dist),
        surviving_norm: dist.total_norm(),
    })
}

/// One record per trajectory element; element `i` is taken as time `i`.
pub fn observable_series(
    trajectory: &[WalkerState],
    measure: Measure,
) -> Result<Vec<ObservableRecord>, Error> {
    if trajectory.is_empty() {
        return Err(Error::InvalidParameter("trajectory must not be empty"));
    }
    trajectory
        .iter()
        .enumerate()
        .map(|(t, state)| measure_state(state, t, measure))
        .collect()
}
