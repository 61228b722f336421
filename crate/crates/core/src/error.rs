use core::fmt;

/// Everything that can go wrong inside the numerical core.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A position (or a walk's light cone) does not fit in the lattice.
    OutOfLattice { position: i64, halfwidth: usize },
    /// A shift would move amplitude past the lattice edge.
    LatticeOverflow { halfwidth: usize },
    /// Normalization was requested for a state with (numerically) zero norm.
    ZeroNorm,
    /// A normalized distribution was required.
    NotNormalized { total: f64 },
    /// The diffusion coefficient is undefined at `t = 0`.
    DivisionByZeroStep,
    /// The quasi-energy gap is closed (or below tolerance) where it must be open.
    GapClosed { gap: f64 },
    /// Winding quadrature did not settle near an integer.
    NonConvergent { raw: f64, residual: f64 },
    /// A phase-diagram cell failed; carries the grid coordinates.
    Cell {
        row: usize,
        column: usize,
        source: alloc::boxed::Box<Error>,
    },
    /// The broken-phase quasi-energy is not near 0 or π.
    UnclassifiableBrokenPhase { real_part: f64 },
    /// `l1 * l2 == 0`: the walk operator is singular and quasi-energies are undefined.
    DegenerateLoss,
    /// `M2 - M1²` came out clearly negative: the distribution is inconsistent.
    NegativeVariance(f64),
    /// A parameter violated its documented domain.
    InvalidParameter(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::OutOfLattice {
                position,
                halfwidth,
            } => write!(
                f,
                "position {position} is outside the lattice [-{halfwidth}, {halfwidth}]"
            ),
            Error::LatticeOverflow { halfwidth } => {
                write!(f, "shift would leave the lattice of halfwidth {halfwidth}")
            }
            Error::ZeroNorm => f.write_str("cannot normalize a state with zero norm"),
            Error::NotNormalized { total } => {
                write!(f, "distribution is not normalized (total {total})")
            }
            Error::DivisionByZeroStep => f.write_str("diffusion coefficient needs t >= 1"),
            Error::GapClosed { gap } => write!(f, "quasi-energy gap closed (gap {gap:e})"),
            Error::NonConvergent { raw, residual } => write!(
                f,
                "winding quadrature did not converge (raw {raw}, residual {residual:e})"
            ),
            Error::Cell {
                row,
                column,
                source,
            } => {
                write!(f, "cell ({row}, {column}): {source}")
            }
            Error::UnclassifiableBrokenPhase { real_part } => write!(
                f,
                "broken-phase quasi-energy real part {real_part} is not near 0 or pi"
            ),
            Error::DegenerateLoss => f.write_str("l1 * l2 = 0 makes the walk operator singular"),
            Error::NegativeVariance(v) => write!(f, "negative variance {v:e}"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
        }
    }
}

impl core::error::Error for Error {}
