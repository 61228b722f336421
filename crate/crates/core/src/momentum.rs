//! Momentum-space (Bloch) picture of the walk.
//!
//! Translation invariance turns the shift into `T(k) = diag(e^{ik}, e^{-ik})`,
//! so one step becomes the 2×2 matrix
//! `U(k) = L T(k) C(β) L' T(k) C(α)`. Its eigenvalues are written
//! `λ = e^{-iε + ε₀}` with `e^{-ε₀} = 1/(l1 l2)`, which makes `ε` real whenever
//! `|λ| = l1 l2` (PT-unbroken) and complex otherwise.
//!
//! # Two band frames
//!
//! The lossless closed forms ([`quasienergy_hermitian`], [`bloch_vector`])
//! use the dispersion `cos ε = -sin α sin β + cos k cos α cos β`. The
//! reflection coin and two-shift step of the real-space walk produce the same
//! band in a different frame: with `k' = 2k + π` and `ε' = π - |ε|`,
//! the walk's `ε(k)` maps exactly onto the closed form at `k'`. Use
//! [`closed_form_momentum`] and [`closed_form_quasienergy`] to go between them.
//! Spectra and PT tags are always reported in the walk's own frame.

use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{acos, cos, fabs, sin, sqrt};
use num_complex::Complex64;

use crate::operators::{coin_matrix, WalkParams};
use crate::{canonical_angle, Error};

pub type Mat2 = [[Complex64; 2]; 2];

/// Default number of k-points for spectra and PT classification.
pub const DEFAULT_NUM_K: usize = 1024;
/// Default relative tolerance on eigenvalue moduli for PT classification.
pub const DEFAULT_PT_TOL: f64 = 1e-6;
/// Window around 0 and π within which a broken-phase quasi-energy is snapped.
pub const SNAP_WINDOW: f64 = 0.2;
/// Minimum `sin ε` for the Bloch vector to be defined.
pub const GAP_TOL: f64 = 1e-6;

fn matmul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn real_mat(m: [[f64; 2]; 2]) -> Mat2 {
    m.map(|row| row.map(|v| Complex64::new(v, 0.0)))
}

fn diag(a: Complex64, b: Complex64) -> Mat2 {
    let zero = Complex64::new(0.0, 0.0);
    [[a, zero], [zero, b]]
}

pub fn det(m: &Mat2) -> Complex64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

/// Bloch operator `L T(k) C(β) L' T(k) C(α)`.
pub fn u_of_k(params: &WalkParams, k: f64) -> Mat2 {
    let shift = diag(
        Complex64::from_polar(1.0, k),
        Complex64::from_polar(1.0, -k),
    );
    let loss = diag(
        Complex64::new(params.l1(), 0.0),
        Complex64::new(params.l2(), 0.0),
    );
    let loss_swapped = diag(
        Complex64::new(params.l2(), 0.0),
        Complex64::new(params.l1(), 0.0),
    );
    let first = matmul(&shift, &real_mat(coin_matrix(params.alpha())));
    let second = matmul(&shift, &real_mat(coin_matrix(params.beta())));
    matmul(&loss, &matmul(&second, &matmul(&loss_swapped, &first)))
}

/// Eigenvalues of a 2×2 matrix from its trace and determinant, larger modulus first.
pub fn eigenvalues(m: &Mat2) -> [Complex64; 2] {
    let half_trace = (m[0][0] + m[1][1]) * 0.5;
    let d = det(m);
    let root = (half_trace * half_trace - d).sqrt();
    let (plus, minus) = (half_trace + root, half_trace - root);
    let big = if plus.norm() >= minus.norm() {
        plus
    } else {
        minus
    };
    // Vieta for the small root avoids cancellation
    let small = if big.norm() > 0.0 {
        d / big
    } else {
        Complex64::new(0.0, 0.0)
    };
    [big, small]
}

/// `k' = 2k + π` wrapped to `[-π, π)`: the closed-form momentum matching walk momentum `k`.
pub fn closed_form_momentum(k: f64) -> f64 {
    canonical_angle(2.0 * k + PI)
}

/// `π - |ε|`: the closed-form quasi-energy matching a real walk quasi-energy `ε`.
pub fn closed_form_quasienergy(walk_epsilon: f64) -> f64 {
    PI - fabs(walk_epsilon)
}

/// Right-hand side of `cos ε(k) = -sin α sin β + cos k cos α cos β`.
pub fn hermitian_cos_quasienergy(alpha: f64, beta: f64, k: f64) -> f64 {
    -sin(alpha) * sin(beta) + cos(k) * cos(alpha) * cos(beta)
}

/// Upper band `ε(k) ∈ [0, π]` of the lossless closed-form dispersion.
pub fn quasienergy_hermitian(alpha: f64, beta: f64, k: f64) -> f64 {
    acos(hermitian_cos_quasienergy(alpha, beta, k).clamp(-1.0, 1.0))
}

/// Bloch vector `n(k)` on the upper band of the closed-form dispersion.
///
/// ```text
/// n_x = sin k sin α cos β / sin ε
/// n_y = (cos α sin β + cos k sin α cos β) / sin ε
/// n_z = -sin k cos α cos β / sin ε
/// ```
pub fn bloch_vector(alpha: f64, beta: f64, k: f64) -> Result<[f64; 3], Error> {
    let f = hermitian_cos_quasienergy(alpha, beta, k).clamp(-1.0, 1.0);
    let sin_eps = sqrt((1.0 - f) * (1.0 + f));
    if sin_eps <= GAP_TOL {
        return Err(Error::GapClosed { gap: sin_eps });
    }
    let (sa, ca, sb, cb, sk, ck) = (sin(alpha), cos(alpha), sin(beta), cos(beta), sin(k), cos(k));
    Ok([
        sk * sa * cb / sin_eps,
        (ca * sb + ck * sa * cb) / sin_eps,
        -sk * ca * cb / sin_eps,
    ])
}

/// One k-point of the Bloch spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentumSample {
    pub k: f64,
    /// Larger modulus first.
    pub eigenvalues: [Complex64; 2],
    /// `ε = i (ln λ - ε₀)`, paired with `eigenvalues`. Real part in `[-π, π)`.
    pub quasi_energies: [Complex64; 2],
    /// Closed-form Bloch vector at `closed_form_momentum(k)`; lossless walks with an open gap only.
    pub bloch: Option<[f64; 3]>,
}

fn quasienergy(lambda: Complex64, loss_product: f64) -> Complex64 {
    Complex64::new(-lambda.arg(), libm::log(lambda.norm() / loss_product))
}

/// k-grid `k_j = -π + 2πj / num_k`.
pub fn k_grid(num_k: usize) -> impl Iterator<Item = f64> + Clone {
    (0..num_k).map(move |j| -PI + 2.0 * PI * j as f64 / num_k as f64)
}

fn loss_product(params: &WalkParams) -> Result<f64, Error> {
    let p = params.l1() * params.l2();
    if p > 0.0 {
        Ok(p)
    } else {
        Err(Error::DegenerateLoss)
    }
}

/// Diagonalizes `U(k)` on the uniform grid, ordered by `k`.
pub fn quasienergy_spectrum(
    params: &WalkParams,
    num_k: usize,
) -> Result<Vec<MomentumSample>, Error> {
    if num_k < 2 {
        return Err(Error::InvalidParameter("num_k must be at least 2"));
    }
    let lp = loss_product(params)?;
    let hermitian = params.is_hermitian();
    Ok(k_grid(num_k)
        .map(|k| {
            let eigenvalues = eigenvalues(&u_of_k(params, k));
            MomentumSample {
                k,
                eigenvalues,
                quasi_energies: eigenvalues.map(|l| quasienergy(l, lp)),
                bloch: if hermitian {
                    bloch_vector(params.alpha(), params.beta(), closed_form_momentum(k)).ok()
                } else {
                    None
                },
            }
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PtTag {
    Unbroken,
    /// Broken, with the quasi-energy real part at maximal splitting near 0.
    BrokenZero,
    /// Broken, with the quasi-energy real part at maximal splitting near π.
    BrokenPi,
}

impl PtTag {
    pub fn as_str(self) -> &'static str {
        match self {
            PtTag::Unbroken => "Unbroken",
            PtTag::BrokenZero => "BrokenZero",
            PtTag::BrokenPi => "BrokenPi",
        }
    }

    pub fn is_broken(self) -> bool {
        self != PtTag::Unbroken
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PtPhase {
    pub tag: PtTag,
    /// max over k and eigenvalues of `| |λ| / (l1 l2) - 1 |`.
    pub max_modulus_split: f64,
    /// Momentum at which the split is largest.
    pub k_at_max: f64,
    /// Real part of the dominant quasi-energy at `k_at_max`, in `[-π, π)`.
    pub real_part: f64,
}

/// Classifies PT-unbroken vs broken from eigenvalue moduli on a k-grid.
pub fn pt_phase_classify(params: &WalkParams, num_k: usize, tol: f64) -> Result<PtPhase, Error> {
    if num_k < 2 {
        return Err(Error::InvalidParameter("num_k must be at least 2"));
    }
    let lp = loss_product(params)?;
    let mut best = (f64::NEG_INFINITY, 0.0, Complex64::new(0.0, 0.0));
    for k in k_grid(num_k) {
        let [big, small] = eigenvalues(&u_of_k(params, k));
        let split = fabs(big.norm() / lp - 1.0).max(fabs(small.norm() / lp - 1.0));
        if split > best.0 {
            best = (split, k, big);
        }
    }
    let (max_modulus_split, k_at_max, lambda) = best;
    let real_part = quasienergy(lambda, lp).re;
    let tag = if max_modulus_split <= tol {
        PtTag::Unbroken
    } else {
        let to_zero = fabs(real_part);
        let to_pi = PI - fabs(real_part);
        if to_zero <= SNAP_WINDOW {
            PtTag::BrokenZero
        } else if to_pi <= SNAP_WINDOW {
            PtTag::BrokenPi
        } else {
            return Err(Error::UnclassifiableBrokenPhase { real_part });
        }
    };
    Ok(PtPhase {
        tag,
        max_modulus_split,
        k_at_max,
        real_part,
    })
}
