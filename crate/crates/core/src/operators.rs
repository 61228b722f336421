//! The factors of the split-step walk operator and time evolution.
//!
//! One step is `U = L T C(β) L' T C(α)`, applied right to left:
//! `C(α)`, `T`, `L'`, `C(β)`, `T`, `L`.
//!
//! - `C(θ) = I ⊗ [[cos θ, sin θ], [sin θ, -cos θ]]`
//! - `T` moves ↑ one site right and ↓ one site left
//! - `L = I ⊗ diag(l1, l2)`, `L' = I ⊗ diag(l2, l1)`
//!
//! No renormalization happens during evolution: with loss the norm decays
//! and is accounted for at measurement time.

use alloc::vec;
use alloc::vec::Vec;

use libm::{cos, sin};
use num_complex::Complex64;

use crate::lattice::WalkerState;
use crate::{canonical_angle, Error};

/// Parameters of one walk instance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WalkParams {
    alpha: f64,
    beta: f64,
    l1: f64,
    l2: f64,
    steps: usize,
}

impl WalkParams {
    /// Angles are in radians and canonicalized to `[-π, π)`; losses must lie in `[0, 1]`.
    pub fn new(alpha: f64, beta: f64, l1: f64, l2: f64, steps: usize) -> Result<Self, Error> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidParameter("coin angles must be finite"));
        }
        if !(0.0..=1.0).contains(&l1) || !(0.0..=1.0).contains(&l2) {
            return Err(Error::InvalidParameter("loss factors must lie in [0, 1]"));
        }
        Ok(WalkParams {
            alpha: canonical_angle(alpha),
            beta: canonical_angle(beta),
            l1,
            l2,
            steps,
        })
    }

    /// Lossless walk.
    pub fn hermitian(alpha: f64, beta: f64, steps: usize) -> Self {
        Self::new(alpha, beta, 1.0, 1.0, steps).expect("finite angles")
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    #[inline]
    pub fn beta(&self) -> f64 {
        self.beta
    }
    #[inline]
    pub fn l1(&self) -> f64 {
        self.l1
    }
    #[inline]
    pub fn l2(&self) -> f64 {
        self.l2
    }
    #[inline]
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn with_steps(mut self, steps: usize) -> Self {
        self.steps = steps;
        self
    }

    pub fn is_hermitian(&self) -> bool {
        self.l1 == 1.0 && self.l2 == 1.0
    }
}

/// `[[cos θ, sin θ], [sin θ, -cos θ]]`
pub fn coin_matrix(theta: f64) -> [[f64; 2]; 2] {
    let (s, c) = (sin(theta), cos(theta));
    [[c, s], [s, -c]]
}

impl WalkerState {
    /// Applies `C(θ)` at every site.
    pub fn apply_coin(&mut self, theta: f64) {
        let [[c, s], _] = coin_matrix(theta);
        for pair in self.amplitudes_mut().chunks_exact_mut(2) {
            let (up, down) = (pair[0], pair[1]);
            pair[0] = up * c + down * s;
            pair[1] = up * s - down * c;
        }
    }

    /// Applies the shift `T`.
    ///
    /// Fails without touching the state if ↑ amplitude sits on the right edge
    /// or ↓ amplitude on the left edge.
    pub fn apply_shift(&mut self) -> Result<(), Error> {
        let halfwidth = self.halfwidth();
        let zero = Complex64::new(0.0, 0.0);
        let amps = self.amplitudes_mut();
        let n = amps.len();
        if amps[n - 2] != zero || amps[1] != zero {
            return Err(Error::LatticeOverflow { halfwidth });
        }
        // ↑ moves right: walk from the right edge so sources are read before overwrite.
        for site in (1..n / 2).rev() {
            amps[2 * site] = amps[2 * (site - 1)];
        }
        amps[0] = zero;
        for site in 0..n / 2 - 1 {
            amps[2 * site + 1] = amps[2 * (site + 1) + 1];
        }
        amps[n - 1] = zero;
        Ok(())
    }

    /// Applies `L = I ⊗ diag(l1, l2)`, or `L' = I ⊗ diag(l2, l1)` when `swapped`.
    pub fn apply_loss(&mut self, l1: f64, l2: f64, swapped: bool) {
        let (up, down) = if swapped { (l2, l1) } else { (l1, l2) };
        if up == 1.0 && down == 1.0 {
            return;
        }
        for pair in self.amplitudes_mut().chunks_exact_mut(2) {
            pair[0] *= up;
            pair[1] *= down;
        }
    }

    fn edge_clear(&self, margin: usize) -> bool {
        let amps = self.amplitudes();
        let zero = Complex64::new(0.0, 0.0);
        let n = amps.len();
        let edge = (2 * margin).min(n);
        amps[..edge].iter().all(|&a| a == zero) && amps[n - edge..].iter().all(|&a| a == zero)
    }
}

/// Applies one full step of `U` in place.
///
/// Requires the two outermost sites on each side to be empty so both shifts fit;
/// otherwise returns [`Error::LatticeOverflow`] and leaves the state unchanged.
pub fn step(state: &mut WalkerState, params: &WalkParams) -> Result<(), Error> {
    if !state.edge_clear(2) {
        return Err(Error::LatticeOverflow {
            halfwidth: state.halfwidth(),
        });
    }
    state.apply_coin(params.alpha);
    state.apply_shift()?;
    state.apply_loss(params.l1, params.l2, true);
    state.apply_coin(params.beta);
    state.apply_shift()?;
    state.apply_loss(params.l1, params.l2, false);
    Ok(())
}

/// Checks that `steps` steps from `initial` stay inside the lattice.
pub fn check_light_cone(initial: &WalkerState, steps: usize) -> Result<(), Error> {
    let reach = initial.support_radius().unwrap_or(0) + 2 * steps;
    if reach > initial.halfwidth() {
        return Err(Error::OutOfLattice {
            position: reach as i64,
            halfwidth: initial.halfwidth(),
        });
    }
    Ok(())
}

/// Returns `[ψ, Uψ, U²ψ, …, Uᵗψ]` with `t = params.steps()`.
pub fn evolve(initial: &WalkerState, params: &WalkParams) -> Result<Vec<WalkerState>, Error> {
    check_light_cone(initial, params.steps)?;
    let mut trajectory = Vec::with_capacity(params.steps + 1);
    let mut state = initial.clone();
    trajectory.push(state.clone());
    for _ in 0..params.steps {
        step(&mut state, params)?;
        trajectory.push(state.clone());
    }
    Ok(trajectory)
}

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        DenseMatrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = DenseMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.dim, v.len(), "dimension mismatch");
        self.data
            .chunks_exact(self.dim)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Euclidean norm of column `col`.
    pub fn column_norm(&self, col: usize) -> f64 {
        libm::sqrt((0..self.dim).map(|i| self.get(i, col).norm_sqr()).sum())
    }
}

fn coin_dense(theta: f64, sites: usize) -> DenseMatrix {
    let m = coin_matrix(theta);
    let mut out = DenseMatrix::zeros(2 * sites);
    for site in 0..sites {
        for (r, row) in m.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                out.set(2 * site + r, 2 * site + c, Complex64::new(v, 0.0));
            }
        }
    }
    out
}

fn shift_dense(sites: usize) -> DenseMatrix {
    let mut out = DenseMatrix::zeros(2 * sites);
    let one = Complex64::new(1.0, 0.0);
    for site in 0..sites {
        if site + 1 < sites {
            out.set(2 * (site + 1), 2 * site, one);
        }
        if site > 0 {
            out.set(2 * (site - 1) + 1, 2 * site + 1, one);
        }
    }
    out
}

fn loss_dense(up: f64, down: f64, sites: usize) -> DenseMatrix {
    let mut out = DenseMatrix::zeros(2 * sites);
    for site in 0..sites {
        out.set(2 * site, 2 * site, Complex64::new(up, 0.0));
        out.set(2 * site + 1, 2 * site + 1, Complex64::new(down, 0.0));
    }
    out
}

/// Dense matrix of `U` on a lattice of halfwidth `halfwidth`, built by
/// multiplying the explicit factor matrices.
///
/// Amplitude shifted past an edge is dropped (truncation, not wraparound), so
/// only columns at least two sites from either edge are unitary for
/// `l1 = l2 = 1`.
pub fn dense_operator(params: &WalkParams, halfwidth: usize) -> DenseMatrix {
    let sites = 2 * halfwidth + 1;
    let shift = shift_dense(sites);
    [
        loss_dense(params.l2, params.l1, sites),
        coin_dense(params.beta, sites),
        shift.clone(),
        loss_dense(params.l1, params.l2, sites),
    ]
    .iter()
    .fold(
        shift.matmul(&coin_dense(params.alpha, sites)),
        |acc, factor| factor.matmul(&acc),
    )
}
