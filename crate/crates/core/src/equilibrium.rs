//! Gap equation, phase diagram, and the pure phase equilibrium states.
//!
//! The self-consistency condition for the order-parameter norm λ reads
//! λ(1 − tanh(βk)/(2k)) = 0 with k = √(ε² + λ²). The normal root λ = 0 always
//! exists; a superconducting root λ > 0 exists exactly when ε < 1/2 and
//! β > β_c(ε) = log((1+2ε)/(1−2ε))/(2ε), and then k is the unique zero of
//! g(k) = tanh(βk) − 2k in (ε, 1/2).

use crate::error::Error;
use crate::matrix::{c64, phase, DensityMatrix2, HermitianMatrix2, Matrix2};

const BISECTION_STEPS: usize = 200;

/// Critical inverse temperature β_c(ε) = log((1+2ε)/(1−2ε))/(2ε).
///
/// Defined for 0 < ε < 1/2 only; the superconducting phase does not exist for
/// any temperature outside that window.
pub fn critical_beta(epsilon: f64) -> Result<f64, Error> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::NoCriticalPoint { epsilon });
    }
    Ok(((1.0 + 2.0 * epsilon) / (1.0 - 2.0 * epsilon)).ln() / (2.0 * epsilon))
}

/// Solved gap equation at fixed (ε, β).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapSolution {
    /// Order-parameter norm; zero in the normal phase.
    pub lambda: f64,
    /// k = √(ε² + λ²), the positive eigenvalue of the effective Hamiltonian.
    pub k: f64,
    pub superconducting: bool,
    /// |1 − tanh(βk)/(2k)|; meaningful on the superconducting branch.
    pub residual: f64,
}

/// Solve the gap equation.
///
/// Returns the normal root (λ = 0, k = ε) whenever ε ≥ 1/2 or β ≤ β_c(ε);
/// the boundary β = β_c itself belongs to the normal phase. Otherwise the
/// unique superconducting root is found by bracketed bisection of
/// g(k) = tanh(βk) − 2k on (ε, 1/2), which provably changes sign there.
pub fn solve_gap(epsilon: f64, beta: f64) -> Result<GapSolution, Error> {
    if epsilon <= 0.0 || !epsilon.is_finite() {
        return Err(Error::InvalidParameter {
            name: "epsilon",
            value: epsilon,
        });
    }
    if beta <= 0.0 || !beta.is_finite() {
        return Err(Error::InvalidParameter {
            name: "beta",
            value: beta,
        });
    }
    let normal = GapSolution {
        lambda: 0.0,
        k: epsilon,
        superconducting: false,
        residual: 0.0,
    };
    if epsilon >= 0.5 {
        return Ok(normal);
    }
    let beta_c = critical_beta(epsilon)?;
    if beta <= beta_c {
        return Ok(normal);
    }

    let g = |k: f64| (beta * k).tanh() - 2.0 * k;
    let (mut lo, mut hi) = (epsilon, 0.5);
    // β > β_c makes g(ε) > 0, and tanh < 1 makes g(1/2) < 0. At extreme β
    // the tanh saturates to 1.0 in floating point and g(1/2) lands on 0.0
    // exactly; the upper endpoint is then itself the root to full precision.
    if !(g(lo) > 0.0 && g(hi) <= 0.0) {
        return Err(Error::BracketLost { lo, hi });
    }
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let k = 0.5 * (lo + hi);
    let lambda = (k * k - epsilon * epsilon).sqrt();
    let residual = (1.0 - (beta * k).tanh() / (2.0 * k)).abs();
    Ok(GapSolution {
        lambda,
        k,
        superconducting: true,
        residual,
    })
}

/// Model parameters with the gap equation already solved: (ε, β, φ) plus the
/// resulting (λ, k). The phase φ labels which symmetry-broken equilibrium the
/// order parameter λe^{iφ} points to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    epsilon: f64,
    beta: f64,
    phi: f64,
    gap: GapSolution,
}

impl ModelParams {
    /// Solve the gap equation for (ε, β) and attach the condensate phase φ.
    pub fn solve(epsilon: f64, beta: f64, phi: f64) -> Result<Self, Error> {
        if !phi.is_finite() {
            return Err(Error::InvalidParameter {
                name: "phi",
                value: phi,
            });
        }
        let gap = solve_gap(epsilon, beta)?;
        Ok(Self {
            epsilon,
            beta,
            phi,
            gap,
        })
    }

    /// Like [`ModelParams::solve`] with β given as a multiple of β_c(ε).
    pub fn solve_with_beta_ratio(epsilon: f64, ratio: f64, phi: f64) -> Result<Self, Error> {
        let beta_c = critical_beta(epsilon)?;
        Self::solve(epsilon, ratio * beta_c, phi)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn lambda(&self) -> f64 {
        self.gap.lambda
    }

    pub fn k(&self) -> f64 {
        self.gap.k
    }

    pub fn gap(&self) -> &GapSolution {
        &self.gap
    }

    pub fn is_superconducting(&self) -> bool {
        self.gap.superconducting
    }

    /// Same (ε, β, λ, k) with a different condensate phase.
    pub fn with_phi(&self, phi: f64) -> Self {
        Self { phi, ..*self }
    }
}

/// Effective one-site Hamiltonian h = εσ^z − λe^{iφ}σ⁻ − λe^{−iφ}σ⁺ for the
/// given condensate phase. Its spectrum is {+k, −k}.
pub fn effective_hamiltonian(params: &ModelParams, phase_angle: f64) -> HermitianMatrix2 {
    let off = phase(phase_angle) * params.lambda();
    let m = Matrix2::new([
        [c64(params.epsilon(), 0.0), -off.conj()],
        [-off, c64(-params.epsilon(), 0.0)],
    ]);
    HermitianMatrix2::new(m).expect("effective Hamiltonian is Hermitian by construction")
}

/// Gibbs state exp(−βh)/Tr exp(−βh) of the effective Hamiltonian with the
/// given condensate phase, built from the spectral frame:
/// ρ = (e^{−βk}E₊₊ + e^{+βk}E₋₋)/(2 cosh βk).
///
/// On the superconducting branch it is self-consistent: Tr(ρσ⁺) = λe^{iφ}.
pub fn equilibrium_state(params: &ModelParams, phase_angle: f64) -> DensityMatrix2 {
    let h = effective_hamiltonian(params, phase_angle);
    let eig = h
        .eigendecompose()
        .expect("spectrum ±k is nondegenerate for epsilon > 0");
    let bk = params.beta() * params.k();
    let norm = 2.0 * bk.cosh();
    let rho = Matrix2::outer(eig.vectors[0], eig.vectors[0]) * ((-bk).exp() / norm)
        + Matrix2::outer(eig.vectors[1], eig.vectors[1]) * (bk.exp() / norm);
    DensityMatrix2::new(rho).expect("Gibbs state is a density matrix by construction")
}
