//! Normal coordinates, monotone/metastable classification, and exit times.
//!
//! Relative to the target equilibrium ω_φ every observable splits as
//! X = ω_φ(X)·1 + a⁺(X) + a⁻(X) + a⁰(X) into creation/annihilation modes and
//! a constant of motion, each with zero mean in ω_φ. Under the semigroup the
//! off-diagonal modes decay at rate c and the diagonal one at rate d > c,
//! so a real trajectory f_X(t) = ω_t(X) is a two-exponential curve. It either
//! relaxes monotonically or overshoots: the overshoot happens exactly when
//! −ω_{−φ}(a⁰) / ω_{−φ}(a⁺+a⁻) > c/d, and then the extremum sits at the exit
//! time t*(X). Gauge-invariant observables ([σ^z, X] = 0) always overshoot
//! and share the single exit time t* = log(d/c)/(d−c).

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::dynamics::{mode_amplitudes, relaxation_constants, spectral_frame};
use crate::equilibrium::{equilibrium_state, ModelParams};
use crate::error::Error;
use crate::matrix::{phase, Matrix2};

/// Amplitudes below this threshold count as an exactly constant mode.
const AMPLITUDE_TOL: f64 = 1e-13;

/// Number of samples in a generated trajectory.
const TRAJECTORY_POINTS: usize = 1000;

/// Decomposition X = mean·1 + a⁺ + a⁻ + a⁰ in the frame of the target
/// effective Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalModeDecomposition {
    /// ω_φ(X)
    pub mean: Complex64,
    /// E₊₊ X E₋₋ — the creation mode.
    pub a_plus: Matrix2,
    /// E₋₋ X E₊₊ — the annihilation mode.
    pub a_minus: Matrix2,
    /// E₊₊XE₊₊ + E₋₋XE₋₋ − ω_φ(X)·1 — the constant of motion.
    pub a_zero: Matrix2,
}

impl NormalModeDecomposition {
    /// mean·1 + a⁺ + a⁻ + a⁰, which must reproduce X.
    pub fn reconstruct(&self) -> Matrix2 {
        Matrix2::identity() * self.mean + self.a_plus + self.a_minus + self.a_zero
    }
}

/// Normal coordinates of X relative to the target state ω_φ of `params`.
pub fn normal_modes(params: &ModelParams, x: &Matrix2) -> Result<NormalModeDecomposition, Error> {
    let frame = spectral_frame(params, params.phi())?;
    let mean = equilibrium_state(params, params.phi()).expectation(x);
    Ok(NormalModeDecomposition {
        mean,
        a_plus: frame.e_pp * *x * frame.e_mm,
        a_minus: frame.e_mm * *x * frame.e_pp,
        a_zero: frame.e_pp * *x * frame.e_pp + frame.e_mm * *x * frame.e_mm
            - Matrix2::identity() * mean,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelaxationClass {
    /// f_X moves straight to its asymptotic value; only extremum is at t = 0.
    Monotone,
    /// f_X first moves away from its initial value and turns around at t*.
    Metastable,
    /// f_X is constant: both mode amplitudes vanish.
    Constant,
}

/// Classification of one Hermitian observable's relaxation.
#[derive(Debug, Clone, PartialEq)]
pub struct RelaxationReport {
    pub class: RelaxationClass,
    /// Present exactly when the class is [`RelaxationClass::Metastable`].
    pub exit_time: Option<f64>,
    /// ω_{−φ}(a⁺ + a⁻)
    pub amplitude_offdiag: f64,
    /// ω_{−φ}(a⁰)
    pub amplitude_diag: f64,
    /// Samples of f_X on a log grid straddling both decay scales.
    pub trajectory: Vec<(f64, f64)>,
}

/// Classify the trajectory of a Hermitian observable and report its exit
/// time when metastable. The trajectory field samples 1000 log-spaced times
/// on [1e−4/c, 20/c].
pub fn classify_relaxation(params: &ModelParams, x: &Matrix2) -> Result<RelaxationReport, Error> {
    let asymmetry = x.asymmetry();
    if asymmetry > 1e-12 {
        return Err(Error::NonHermitianObservable {
            max_asymmetry: asymmetry,
        });
    }
    let amplitudes = mode_amplitudes(params, x)?;
    let (c, d) = (amplitudes.c, amplitudes.d);
    let offdiag = amplitudes.offdiag.re;
    let diag = amplitudes.diag.re;

    let class = if offdiag.abs() < AMPLITUDE_TOL && diag.abs() < AMPLITUDE_TOL {
        RelaxationClass::Constant
    } else if offdiag.abs() < AMPLITUDE_TOL {
        // pure two-exponential difference; always overshoots
        RelaxationClass::Metastable
    } else if -diag / offdiag <= c / d {
        RelaxationClass::Monotone
    } else {
        RelaxationClass::Metastable
    };

    let exit_time = match class {
        RelaxationClass::Metastable => Some(exit_time_from_amplitudes(c, d, offdiag, diag)),
        _ => None,
    };

    let mut trajectory = Vec::with_capacity(TRAJECTORY_POINTS);
    let (t_min, t_max) = (1e-4 / c, 20.0 / c);
    let step = (t_max / t_min).ln() / (TRAJECTORY_POINTS - 1) as f64;
    for i in 0..TRAJECTORY_POINTS {
        let t = t_min * (step * i as f64).exp();
        trajectory.push((t, amplitudes.at(t).re));
    }

    Ok(RelaxationReport {
        class,
        exit_time,
        amplitude_offdiag: offdiag,
        amplitude_diag: diag,
        trajectory,
    })
}

fn exit_time_from_amplitudes(c: f64, d: f64, offdiag: f64, diag: f64) -> f64 {
    if offdiag.abs() < AMPLITUDE_TOL {
        // limit of the general formula as the off-diagonal amplitude cancels
        (d / c).ln() / (d - c)
    } else {
        ((d / c).ln() + (diag / offdiag).abs().ln()) / (d - c)
    }
}

/// Exit time t*(X) of a metastable Hermitian observable:
/// t*(X) = (log(d/c) + log|a⁰-amplitude / offdiag-amplitude|) / (d − c).
///
/// Fails with [`Error::NoExitTime`] for monotone or constant trajectories.
pub fn exit_time(params: &ModelParams, x: &Matrix2) -> Result<f64, Error> {
    let report = classify_relaxation(params, x)?;
    report.exit_time.ok_or(Error::NoExitTime)
}

/// The common exit time t* = (log d − log c)/(d − c) shared by every
/// gauge-invariant observable with a nonconstant trajectory; independent of
/// the condensate phase. Fails in the normal phase, where all trajectories
/// between the endpoint states are constant.
pub fn invariant_exit_time(params: &ModelParams) -> Result<f64, Error> {
    if !params.is_superconducting() {
        return Err(Error::NoMetastability);
    }
    let constants = relaxation_constants(params)?;
    Ok(((constants.d).ln() - (constants.c).ln()) / (constants.d - constants.c))
}

/// Deviation of ω_t(σ^z) from its common equilibrium value −2ε:
/// f_t = 4 sin²(φ) ε λ² (e^{−tc} − e^{−td}) / k², so ω_t(σ^z) = −2ε − f_t.
pub fn sigma_z_excursion(params: &ModelParams, t: f64) -> f64 {
    let constants = match relaxation_constants(params) {
        Ok(c) => c,
        Err(_) => return 0.0,
    };
    let (lam, k) = (params.lambda(), params.k());
    4.0 * params.phi().sin().powi(2) * params.epsilon() * lam * lam / (k * k)
        * ((-t * constants.c).exp() - (-t * constants.d).exp())
}

/// The three observables whose trajectories have fully explicit closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceObservable {
    /// σ⁺e^{−iφ} + σ⁻e^{iφ}
    XQuadrature,
    /// iσ⁺e^{−iφ} − iσ⁻e^{iφ}
    YQuadrature,
    /// σ^z
    SigmaZ,
}

impl ReferenceObservable {
    /// The operator itself, for the condensate phase φ.
    pub fn operator(&self, phi: f64) -> Matrix2 {
        let sp = Matrix2::sigma_plus();
        let sm = Matrix2::sigma_minus();
        match self {
            Self::XQuadrature => sp * phase(-phi) + sm * phase(phi),
            Self::YQuadrature => {
                sp * (phase(-phi) * Complex64::new(0.0, 1.0))
                    + sm * (phase(phi) * Complex64::new(0.0, -1.0))
            }
            Self::SigmaZ => Matrix2::sigma_z(),
        }
    }
}

/// Closed-form trajectory of a reference observable:
///
/// - X quadrature: 2λ(1 − 2sin²(φ)(λ²e^{−td} + ε²e^{−tc})/k²)
/// - Y quadrature: 2λ sin(2φ) e^{−tc}
/// - σ^z:          −2ε − 4sin²(φ)(ελ²/k²)(e^{−tc} − e^{−td})
pub fn reference_trajectory(params: &ModelParams, which: ReferenceObservable, t: f64) -> f64 {
    let (eps, lam, k) = (params.epsilon(), params.lambda(), params.k());
    if lam == 0.0 {
        return match which {
            ReferenceObservable::SigmaZ => {
                // normal-phase Gibbs value of σ^z
                -(params.beta() * eps).tanh()
            }
            _ => 0.0,
        };
    }
    let constants = relaxation_constants(params).expect("superconducting spectrum splits");
    let phi = params.phi();
    match which {
        ReferenceObservable::XQuadrature => {
            2.0 * lam
                * (1.0
                    - 2.0
                        * phi.sin().powi(2)
                        * (lam * lam * (-t * constants.d).exp()
                            + eps * eps * (-t * constants.c).exp())
                        / (k * k))
        }
        ReferenceObservable::YQuadrature => {
            2.0 * lam * (2.0 * phi).sin() * (-t * constants.c).exp()
        }
        ReferenceObservable::SigmaZ => -2.0 * eps - sigma_z_excursion(params, t),
    }
}
