//! Error type shared by all modules.

use core::fmt;

/// Everything that can go wrong when driving the model outside its domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Error {
    /// A scalar parameter violated its domain (`epsilon <= 0`, `beta <= 0`, ...).
    InvalidParameter { name: &'static str, value: f64 },
    /// No critical temperature exists: the superconducting phase requires
    /// field strengths strictly inside (0, 1/2).
    NoCriticalPoint { epsilon: f64 },
    /// The gap-equation bisection lost its sign-changing bracket. This cannot
    /// happen for valid parameters and indicates an internal bug.
    BracketLost { lo: f64, hi: f64 },
    /// A matrix expected to be Hermitian was not, to the stated tolerance.
    NotHermitian { max_asymmetry: f64 },
    /// A matrix failed the density-matrix certificate.
    NotDensityMatrix {
        trace_error: f64,
        min_eigenvalue: f64,
    },
    /// The two eigenvalues coincide; no spectral frame can be fixed.
    DegenerateSpectrum { gap: f64 },
    /// Semigroup evolution is defined for t >= 0 only.
    NegativeTime { t: f64 },
    /// Relaxation classification requires a self-adjoint observable.
    NonHermitianObservable { max_asymmetry: f64 },
    /// Exit times exist only for metastable trajectories.
    NoExitTime,
    /// The normal phase carries no metastability: all trajectories between
    /// the endpoint states are constant.
    NoMetastability,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter { name, value } => {
                write!(f, "parameter {name} = {value} is outside its domain")
            }
            Error::NoCriticalPoint { epsilon } => write!(
                f,
                "no critical inverse temperature exists for epsilon = {epsilon}; \
                 the superconducting phase requires 0 < epsilon < 1/2"
            ),
            Error::BracketLost { lo, hi } => {
                write!(f, "gap-equation bracket [{lo}, {hi}] does not change sign")
            }
            Error::NotHermitian { max_asymmetry } => {
                write!(
                    f,
                    "matrix is not Hermitian (max asymmetry {max_asymmetry:e})"
                )
            }
            Error::NotDensityMatrix {
                trace_error,
                min_eigenvalue,
            } => write!(
                f,
                "matrix is not a density matrix (trace error {trace_error:e}, \
                 min eigenvalue {min_eigenvalue:e})"
            ),
            Error::DegenerateSpectrum { gap } => {
                write!(
                    f,
                    "degenerate spectrum (eigenvalue gap {gap:e}); no frame convention"
                )
            }
            Error::NegativeTime { t } => write!(f, "time t = {t} must be nonnegative"),
            Error::NonHermitianObservable { max_asymmetry } => write!(
                f,
                "observable must be Hermitian for a real-valued trajectory \
                 (max asymmetry {max_asymmetry:e})"
            ),
            Error::NoExitTime => write!(f, "trajectory is not metastable; no exit time exists"),
            Error::NoMetastability => {
                write!(f, "normal phase (lambda = 0): trajectories are constant")
            }
        }
    }
}

impl core::error::Error for Error {}
