//! Gap closures, winding numbers and phase diagrams of the lossless walk.
//!
//! Everything here uses the closed-form band of
//! [`crate::momentum::quasienergy_hermitian`] (upper band, `ε ∈ [0, π]`).
//! Along `k` the dispersion is extremal at `k = 0` and `k = π`, where
//! `cos ε = cos(α + β)` and `cos ε = -cos(α - β)`. The gaps therefore close
//! on the four line families `α ± β ≡ 0` or `π (mod 2π)`.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{cos, fabs, round, sin};

use crate::momentum::bloch_vector;
use crate::{canonical_angle, Error};

/// Gaps at or below this are treated as closed.
pub const GAP_TOL: f64 = 1e-6;
/// Largest accepted distance of the winding integral from an integer.
pub const MAX_RESIDUAL: f64 = 0.01;
pub const DEFAULT_NUM_K: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GapReport {
    /// `min_k ε(k)`
    pub gap_zero: f64,
    /// `min_k (π - ε(k))`
    pub gap_pi: f64,
}

impl GapReport {
    pub fn min_gap(&self) -> f64 {
        self.gap_zero.min(self.gap_pi)
    }

    pub fn is_open(&self, tol: f64) -> bool {
        self.gap_zero > tol && self.gap_pi > tol
    }
}

/// Quasi-energy gaps around 0 and π from the band edges at `k ∈ {0, π}`.
///
/// `min(gap_zero, gap_pi)` equals the distance (in `α ± β`) to the nearest
/// transition line.
pub fn gap_at(alpha: f64, beta: f64) -> GapReport {
    let edge_k0 = fabs(canonical_angle(alpha + beta));
    let edge_kpi = PI - fabs(canonical_angle(alpha - beta));
    GapReport {
        gap_zero: edge_k0.min(edge_kpi),
        gap_pi: PI - edge_k0.max(edge_kpi),
    }
}

/// Distance from `(α, β)` to the nearest line `α ± β ≡ 0, π (mod 2π)`.
pub fn transition_distance(alpha: f64, beta: f64) -> f64 {
    gap_at(alpha, beta).min_gap()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindingResult {
    pub value: i32,
    pub raw_integral: f64,
    pub residual: f64,
    pub num_k_used: usize,
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Raw value of `(1/2π) ∮ dk (n × ∂n/∂k) · Γ` with `Γ = (cos α, 0, sin α)`.
///
/// `n` is sampled at the midpoints of `num_k` uniform cells; the derivative is
/// a central difference with periodic wrap.
pub fn winding_integral(alpha: f64, beta: f64, num_k: usize) -> Result<f64, Error> {
    if num_k < 5 {
        return Err(Error::InvalidParameter("num_k must be at least 5"));
    }
    let h = 2.0 * PI / num_k as f64;
    let n = (0..num_k)
        .map(|j| bloch_vector(alpha, beta, -PI + (j as f64 + 0.5) * h))
        .collect::<Result<Vec<_>, _>>()?;
    let gamma = [cos(alpha), 0.0, sin(alpha)];
    let sum: f64 = (0..num_k)
        .map(|j| {
            let at = |o: usize| n[(j + o) % num_k];
            let (p1, p2, m1, m2) = (at(1), at(2), at(num_k - 1), at(num_k - 2));
            // five-point central stencil
            let dn = [0, 1, 2].map(|i| (8.0 * (p1[i] - m1[i]) - (p2[i] - m2[i])) / (12.0 * h));
            let c = cross(n[j], dn);
            c[0] * gamma[0] + c[1] * gamma[1] + c[2] * gamma[2]
        })
        .sum();
    Ok(sum * h / (2.0 * PI))
}

/// Winding number on a `num_k`-point grid.
///
/// Fails with [`Error::GapClosed`] when either gap is at most [`GAP_TOL`] and
/// with [`Error::NonConvergent`] when the integral is [`MAX_RESIDUAL`] or more
/// away from an integer.
pub fn winding_number(alpha: f64, beta: f64, num_k: usize) -> Result<WindingResult, Error> {
    let gaps = gap_at(alpha, beta);
    if !gaps.is_open(GAP_TOL) {
        return Err(Error::GapClosed {
            gap: gaps.min_gap(),
        });
    }
    let raw = winding_integral(alpha, beta, num_k)?;
    let value = round(raw);
    let residual = fabs(raw - value);
    if residual >= MAX_RESIDUAL {
        return Err(Error::NonConvergent { raw, residual });
    }
    Ok(WindingResult {
        value: value as i32,
        raw_integral: raw,
        residual,
        num_k_used: num_k,
    })
}

/// One `(α, β)` cell of a phase diagram. `winding` is `None` on a transition line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseCell {
    pub alpha: f64,
    pub beta: f64,
    pub gaps: GapReport,
    pub winding: Option<WindingResult>,
}

impl PhaseCell {
    pub fn is_boundary(&self) -> bool {
        self.winding.is_none()
    }
}

fn strictly_increasing(grid: &[f64]) -> bool {
    !grid.is_empty() && grid.iter().all(|v| v.is_finite()) && grid.windows(2).all(|w| w[0] < w[1])
}

/// Winding numbers on `alpha_grid × beta_grid`; `result[i][j]` is `(alpha_grid[i], beta_grid[j])`.
///
/// Gap-closed cells become boundary cells. A non-convergent cell aborts with
/// [`Error::Cell`] carrying its coordinates.
pub fn phase_diagram(
    alpha_grid: &[f64],
    beta_grid: &[f64],
    num_k: usize,
) -> Result<Vec<Vec<PhaseCell>>, Error> {
    if !strictly_increasing(alpha_grid) || !strictly_increasing(beta_grid) {
        return Err(Error::InvalidParameter(
            "phase-diagram grids must be non-empty and increasing",
        ));
    }
    alpha_grid
        .iter()
        .enumerate()
        .map(|(row, &alpha)| {
            beta_grid
                .iter()
                .enumerate()
                .map(|(column, &beta)| {
                    phase_cell(alpha, beta, num_k).map_err(|e| Error::Cell {
                        row,
                        column,
                        source: Box::new(e),
                    })
                })
                .collect()
        })
        .collect()
}

/// A single phase-diagram cell.
pub fn phase_cell(alpha: f64, beta: f64, num_k: usize) -> Result<PhaseCell, Error> {
    let gaps = gap_at(alpha, beta);
    let winding = match winding_number(alpha, beta, num_k) {
        Ok(w) => Some(w),
        Err(Error::GapClosed { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(PhaseCell {
        alpha,
        beta,
        gaps,
        winding,
    })
}
