//! Walker state over a finite position lattice with a two-level coin.
//!
//! Amplitudes are stored densely as a flat array indexed by
//! `2 * (x + X) + coin`, where `X` is the lattice halfwidth and the coin index
//! is 0 for ↑ and 1 for ↓. The same flattening is used by the dense-matrix
//! oracle in [`crate::operators::dense_operator`].

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::Error;

/// Internal two-level degree of freedom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Coin {
    Up,
    Down,
}

impl Coin {
    #[inline]
    pub fn index(self) -> usize {
        match self {
            Coin::Up => 0,
            Coin::Down => 1,
        }
    }
}

/// Smallest squared norm that [`WalkerState::probability_distribution`] will normalize.
pub const MIN_NORMALIZABLE: f64 = 1e-300;

/// Tolerance on the total of a distribution flagged as normalized.
pub const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct WalkerState {
    halfwidth: usize,
    amplitudes: Vec<Complex64>,
}

impl WalkerState {
    /// All-zero state on positions `-halfwidth..=halfwidth`.
    pub fn zeros(halfwidth: usize) -> Self {
        WalkerState {
            halfwidth,
            amplitudes: vec![Complex64::new(0.0, 0.0); 2 * (2 * halfwidth + 1)],
        }
    }

    /// Localized state `|position⟩ ⊗ |coin⟩`.
    pub fn new(halfwidth: usize, position: i64, coin: Coin) -> Result<Self, Error> {
        let mut state = Self::zeros(halfwidth);
        let idx = state.index(position, coin)?;
        state.amplitudes[idx] = Complex64::new(1.0, 0.0);
        Ok(state)
    }

    /// Builds a state from flattened amplitudes.
    pub fn from_amplitudes(halfwidth: usize, amplitudes: Vec<Complex64>) -> Result<Self, Error> {
        if amplitudes.len() != 2 * (2 * halfwidth + 1) {
            return Err(Error::InvalidParameter(
                "amplitude array length must be 2 * (2 * halfwidth + 1)",
            ));
        }
        Ok(WalkerState {
            halfwidth,
            amplitudes,
        })
    }

    #[inline]
    pub fn halfwidth(&self) -> usize {
        self.halfwidth
    }

    #[inline]
    pub fn num_sites(&self) -> usize {
        2 * self.halfwidth + 1
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    #[inline]
    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    /// Flat index of `(position, coin)`.
    pub fn index(&self, position: i64, coin: Coin) -> Result<usize, Error> {
        let x = self.halfwidth as i64;
        if position < -x || position > x {
            return Err(Error::OutOfLattice {
                position,
                halfwidth: self.halfwidth,
            });
        }
        Ok(2 * (position + x) as usize + coin.index())
    }

    /// Position of site `site` (0-based from the left edge).
    #[inline]
    pub fn position_of(&self, site: usize) -> i64 {
        site as i64 - self.halfwidth as i64
    }

    pub fn amplitude(&self, position: i64, coin: Coin) -> Result<Complex64, Error> {
        Ok(self.amplitudes[self.index(position, coin)?])
    }

    pub fn set_amplitude(
        &mut self,
        position: i64,
        coin: Coin,
        value: Complex64,
    ) -> Result<(), Error> {
        let idx = self.index(position, coin)?;
        self.amplitudes[idx] = value;
        Ok(())
    }

    /// Multiplies every amplitude by `factor`.
    pub fn scale(&mut self, factor: Complex64) {
        for a in &mut self.amplitudes {
            *a *= factor;
        }
    }

    /// Σ |amplitude|² over all sites and coins.
    pub fn norm_sq(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Largest `|x|` carrying a nonzero amplitude, or `None` for the zero state.
    pub fn support_radius(&self) -> Option<usize> {
        self.amplitudes
            .chunks_exact(2)
            .enumerate()
            .filter(|(_, pair)| {
                pair[0] != Complex64::new(0.0, 0.0) || pair[1] != Complex64::new(0.0, 0.0)
            })
            .map(|(site, _)| self.position_of(site).unsigned_abs() as usize)
            .max()
    }

    /// Position distribution `P(x) = |a(x,↑)|² + |a(x,↓)|²`.
    ///
    /// Sites with exactly zero probability are omitted. With `normalize`, the
    /// probabilities are divided by the total squared norm, which is kept in
    /// [`ProbDist::total_norm`] either way.
    pub fn probability_distribution(&self, normalize: bool) -> Result<ProbDist, Error> {
        let total = self.norm_sq();
        if normalize && (total.is_nan() || total <= MIN_NORMALIZABLE) {
            return Err(Error::ZeroNorm);
        }
        let scale = if normalize { 1.0 / total } else { 1.0 };
        let entries = self
            .amplitudes
            .chunks_exact(2)
            .enumerate()
            .filter_map(|(site, pair)| {
                let p = pair[0].norm_sqr() + pair[1].norm_sqr();
                (p > 0.0).then(|| (self.position_of(site), p * scale))
            })
            .collect();
        Ok(ProbDist {
            entries,
            total_norm: total,
            normalized: normalize,
        })
    }
}

/// Position-indexed probability distribution.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbDist {
    entries: Vec<(i64, f64)>,
    total_norm: f64,
    normalized: bool,
}

impl ProbDist {
    /// Builds a distribution from `(position, probability)` pairs.
    ///
    /// Positions must be strictly increasing and probabilities non-negative.
    /// The result is flagged normalized iff the probabilities sum to 1 within
    /// [`NORMALIZATION_TOL`].
    pub fn from_entries(entries: Vec<(i64, f64)>) -> Result<Self, Error> {
        if entries.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidParameter(
                "positions must be strictly increasing",
            ));
        }
        if entries.iter().any(|&(_, p)| !(p.is_finite() && p >= 0.0)) {
            return Err(Error::InvalidParameter(
                "probabilities must be finite and non-negative",
            ));
        }
        let total: f64 = entries.iter().map(|&(_, p)| p).sum();
        Ok(ProbDist {
            entries,
            total_norm: total,
            normalized: libm::fabs(total - 1.0) <= NORMALIZATION_TOL,
        })
    }

    #[inline]
    pub fn entries(&self) -> &[(i64, f64)] {
        &self.entries
    }

    /// Squared norm of the state before any normalization.
    #[inline]
    pub fn total_norm(&self) -> f64 {
        self.total_norm
    }

    #[inline]
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Sum of the stored probabilities.
    pub fn sum(&self) -> f64 {
        self.entries.iter().map(|&(_, p)| p).sum()
    }

    pub fn get(&self, position: i64) -> f64 {
        self.entries
            .binary_search_by_key(&position, |&(x, _)| x)
            .map(|i| self.entries[i].1)
            .unwrap_or(0.0)
    }

    /// Number of positions with nonzero probability.
    pub fn support_size(&self) -> usize {
        self.entries.len()
    }
}
