//! Detailed-balance dissipative semigroup between two phase states.
//!
//! The generator is built from the matrix units E_ij of the target effective
//! Hamiltonian h_φ with Boltzmann weights,
//!
//! ```text
//! L(X) = Σ_{i,j} exp(−β(εᵢ−εⱼ)/2) (E_ij† [X, E_ij] + [E_ij†, X] E_ij),
//! ```
//!
//! summed over all four (i, j) pairs. Its action diagonalizes over
//! {1, D, E₊₋, E₋₊} with rates {0, −d, −c, −c}, c = 2 + 2cosh(βk),
//! d = 4cosh(βk), D = e^{βk}E₊₊ − e^{−βk}E₋₋; the diagonal (i = j) terms are
//! what produce the "+2" in c. Expectation values in the intermediate states
//! therefore evolve in closed form. [`oracle_evolve`] propagates the same
//! generator instead through a dense 4×4 superoperator and a matrix
//! exponential, deliberately ignoring the closed-form rates, so the two
//! routes check each other.

use num_complex::Complex64;

use crate::equilibrium::{effective_hamiltonian, equilibrium_state, ModelParams};
use crate::error::Error;
use crate::matrix::{c64, DensityMatrix2, HermitianMatrix2, Matrix2};
use crate::metastability::normal_modes;

/// Matrix units of an effective Hamiltonian's eigenbasis, + ↔ eigenvalue +k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralFrame {
    pub e_pp: Matrix2,
    pub e_pm: Matrix2,
    pub e_mp: Matrix2,
    pub e_mm: Matrix2,
    /// The positive eigenvalue.
    pub k: f64,
}

impl SpectralFrame {
    /// Frame of an arbitrary nondegenerate Hermitian matrix.
    pub fn from_hamiltonian(h: &HermitianMatrix2) -> Result<Self, Error> {
        let eig = h.eigendecompose()?;
        let plus = eig.vectors[0];
        let minus = eig.vectors[1];
        Ok(Self {
            e_pp: Matrix2::outer(plus, plus),
            e_pm: Matrix2::outer(plus, minus),
            e_mp: Matrix2::outer(minus, plus),
            e_mm: Matrix2::outer(minus, minus),
            k: eig.values[0],
        })
    }

    /// k·E₊₊ − k·E₋₋, which reproduces the Hamiltonian the frame came from.
    pub fn reconstruct_hamiltonian(&self) -> Matrix2 {
        self.e_pp * self.k - self.e_mm * self.k
    }
}

/// Spectral frame of the effective Hamiltonian at the given condensate phase.
pub fn spectral_frame(params: &ModelParams, phase_angle: f64) -> Result<SpectralFrame, Error> {
    SpectralFrame::from_hamiltonian(&effective_hamiltonian(params, phase_angle))
}

/// Decay rates of the generator's normal modes, and the diagonal mode itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxationConstants {
    /// Rate of the off-diagonal modes E₊₋, E₋₊: c = 2 + 2cosh(βk).
    pub c: f64,
    /// Rate of the diagonal mode D: d = 4cosh(βk).
    pub d: f64,
    /// D = e^{βk}E₊₊ − e^{−βk}E₋₋ in the target frame.
    pub d_matrix: Matrix2,
}

pub fn relaxation_constants(params: &ModelParams) -> Result<RelaxationConstants, Error> {
    let frame = spectral_frame(params, params.phi())?;
    let bk = params.beta() * frame.k;
    Ok(RelaxationConstants {
        c: 2.0 + 2.0 * bk.cosh(),
        d: 4.0 * bk.cosh(),
        d_matrix: frame.e_pp * bk.exp() - frame.e_mm * (-bk).exp(),
    })
}

pub(crate) fn lindblad_apply_in_frame(frame: &SpectralFrame, beta: f64, x: &Matrix2) -> Matrix2 {
    let k = frame.k;
    let units = [
        (frame.e_pp, k, k),
        (frame.e_pm, k, -k),
        (frame.e_mp, -k, k),
        (frame.e_mm, -k, -k),
    ];
    let mut out = Matrix2::zero();
    for (e, ei, ej) in units {
        let weight = (-beta * (ei - ej) / 2.0).exp();
        let e_dag = e.adjoint();
        let term = e_dag * (*x * e - e * *x) + (e_dag * *x - *x * e_dag) * e;
        out = out + term * weight;
    }
    out
}

/// Apply the generator L_φ built for the target phase φ of `params`.
pub fn lindblad_apply(params: &ModelParams, x: &Matrix2) -> Result<Matrix2, Error> {
    let frame = spectral_frame(params, params.phi())?;
    Ok(lindblad_apply_in_frame(&frame, params.beta(), x))
}

/// Mean and mode amplitudes of one observable for the relaxation scenario
/// ω_{−φ} → ω_φ, from which every expectation value follows in closed form.
pub(crate) struct ModeAmplitudes {
    /// ω_φ(X)
    pub mean: Complex64,
    /// ω_{−φ}(a⁺ + a⁻)
    pub offdiag: Complex64,
    /// ω_{−φ}(a⁰)
    pub diag: Complex64,
    pub c: f64,
    pub d: f64,
}

impl ModeAmplitudes {
    pub fn at(&self, t: f64) -> Complex64 {
        self.mean + self.offdiag * (-t * self.c).exp() + self.diag * (-t * self.d).exp()
    }
}

pub(crate) fn mode_amplitudes(params: &ModelParams, x: &Matrix2) -> Result<ModeAmplitudes, Error> {
    let modes = normal_modes(params, x)?;
    let constants = relaxation_constants(params)?;
    let initial = equilibrium_state(params, -params.phi());
    Ok(ModeAmplitudes {
        mean: modes.mean,
        offdiag: initial.expectation(&(modes.a_plus + modes.a_minus)),
        diag: initial.expectation(&modes.a_zero),
        c: constants.c,
        d: constants.d,
    })
}

/// Closed-form expectation value ω_t(X) of the state reached from ω_{−φ}
/// after driving with the semigroup detailed-balanced to ω_φ for time t:
///
/// ω_t(X) = ω_φ(X) + ω_{−φ}(a⁺+a⁻) e^{−tc} + ω_{−φ}(a⁰) e^{−td}.
pub fn evolve_expectation(params: &ModelParams, x: &Matrix2, t: f64) -> Result<Complex64, Error> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::NegativeTime { t });
    }
    Ok(mode_amplitudes(params, x)?.at(t))
}

/// Density matrix ρ_t of the intermediate state, assembled entrywise from the
/// closed-form expectations of the standard matrix units and certified
/// (unit trace, positive semidefinite).
#[allow(clippy::needless_range_loop)]
pub fn intermediate_state(params: &ModelParams, t: f64) -> Result<DensityMatrix2, Error> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::NegativeTime { t });
    }
    let mut entries = [[c64(0.0, 0.0); 2]; 2];
    for row in 0..2 {
        for col in 0..2 {
            // Tr(ρ u_{rc}) = ρ_{cr}
            entries[col][row] = evolve_expectation(params, &Matrix2::unit(row, col), t)?;
        }
    }
    DensityMatrix2::new(Matrix2::new(entries))
}

/// A linear map on 2×2 matrices as a dense 4×4 complex matrix acting on
/// row-major vectorizations vec(X) = (X₀₀, X₀₁, X₁₀, X₁₁).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Superoperator {
    entries: [[Complex64; 4]; 4],
}

impl Superoperator {
    pub fn zero() -> Self {
        Self {
            entries: [[c64(0.0, 0.0); 4]; 4],
        }
    }

    pub fn identity() -> Self {
        let mut out = Self::zero();
        for i in 0..4 {
            out.entries[i][i] = c64(1.0, 0.0);
        }
        out
    }

    /// Build the matrix of a linear map column by column from its action on
    /// the standard matrix units.
    #[allow(clippy::needless_range_loop)]
    pub fn from_action(mut action: impl FnMut(&Matrix2) -> Matrix2) -> Self {
        let mut out = Self::zero();
        for col in 0..4 {
            let image = action(&Matrix2::unit(col / 2, col % 2));
            let v = vectorize(&image);
            for row in 0..4 {
                out.entries[row][col] = v[row];
            }
        }
        out
    }

    pub fn entries(&self) -> &[[Complex64; 4]; 4] {
        &self.entries
    }

    #[allow(clippy::needless_range_loop)]
    pub fn apply(&self, x: &Matrix2) -> Matrix2 {
        let v = vectorize(x);
        let mut out = [c64(0.0, 0.0); 4];
        for row in 0..4 {
            for col in 0..4 {
                out[row] += self.entries[row][col] * v[col];
            }
        }
        unvectorize(&out)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = *self;
        for row in &mut out.entries {
            for e in row.iter_mut() {
                *e *= factor;
            }
        }
        out
    }

    fn matmul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = c64(0.0, 0.0);
                for l in 0..4 {
                    acc += self.entries[i][l] * rhs.entries[l][j];
                }
                out.entries[i][j] = acc;
            }
        }
        out
    }

    fn add(&self, rhs: &Self) -> Self {
        let mut out = *self;
        for i in 0..4 {
            for j in 0..4 {
                out.entries[i][j] += rhs.entries[i][j];
            }
        }
        out
    }

    fn one_norm(&self) -> f64 {
        let mut worst = 0.0f64;
        for col in 0..4 {
            let mut sum = 0.0;
            for row in 0..4 {
                sum += self.entries[row][col].norm();
            }
            worst = worst.max(sum);
        }
        worst
    }

    fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for row in &self.entries {
            for e in row {
                m = m.max(e.norm());
            }
        }
        m
    }

    /// Matrix exponential by scaling-and-squaring with a Taylor kernel.
    ///
    /// The argument is halved until its 1-norm is at most 1/2, the series is
    /// summed to below 1e−18 in the max norm, and the result squared back up;
    /// for these 4×4 generators that keeps the overall error well under 1e−12.
    pub fn expm(&self) -> Self {
        let norm = self.one_norm();
        let squarings = if norm > 0.5 {
            (norm / 0.5).log2().ceil() as u32
        } else {
            0
        };
        let scaled = self.scaled(0.5f64.powi(squarings as i32));

        let mut result = Self::identity();
        let mut term = Self::identity();
        for order in 1..=40 {
            term = term.matmul(&scaled).scaled(1.0 / order as f64);
            result = result.add(&term);
            if term.max_abs() < 1e-18 {
                break;
            }
        }
        for _ in 0..squarings {
            result = result.matmul(&result);
        }
        result
    }
}

fn vectorize(x: &Matrix2) -> [Complex64; 4] {
    [x[(0, 0)], x[(0, 1)], x[(1, 0)], x[(1, 1)]]
}

fn unvectorize(v: &[Complex64; 4]) -> Matrix2 {
    Matrix2::new([[v[0], v[1]], [v[2], v[3]]])
}

/// Generator of the relaxation scenario as a dense superoperator.
pub(crate) fn liouvillian(params: &ModelParams) -> Result<Superoperator, Error> {
    let frame = spectral_frame(params, params.phi())?;
    let beta = params.beta();
    Ok(Superoperator::from_action(|x| {
        lindblad_apply_in_frame(&frame, beta, x)
    }))
}

/// Independent oracle for [`evolve_expectation`]: propagates X through
/// e^{tL} computed as a dense matrix exponential and takes the trace against
/// an explicit initial state. No closed-form rate enters this path.
pub fn oracle_evolve_from(
    params: &ModelParams,
    initial: &DensityMatrix2,
    x: &Matrix2,
    t: f64,
) -> Result<Complex64, Error> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::NegativeTime { t });
    }
    let propagator = liouvillian(params)?.scaled(t).expm();
    Ok(initial.expectation(&propagator.apply(x)))
}

/// [`oracle_evolve_from`] started in ω_{−φ}, the scenario's initial state.
pub fn oracle_evolve(params: &ModelParams, x: &Matrix2, t: f64) -> Result<Complex64, Error> {
    let initial = equilibrium_state(params, -params.phi());
    oracle_evolve_from(params, &initial, x, t)
}

/// Outcome of the dissipativity inequality L(A†A) ≥ A†L(A) + L(A†)A.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DissipativityCheck {
    pub dissipative: bool,
    /// L(A†A) − A†L(A) − L(A†)A, which must be positive semidefinite.
    pub witness: Matrix2,
    pub min_eigenvalue: f64,
    /// max-entry distance between L(A†) and L(A)†.
    pub selfadjointness_residual: f64,
}

/// Check dissipativity of the generator on one operator: the witness
/// L(A†A) − A†L(A) − L(A†)A must be positive semidefinite
/// (min eigenvalue ≥ −1e−10) and L must commute with the adjoint.
pub fn check_dissipativity(params: &ModelParams, a: &Matrix2) -> Result<DissipativityCheck, Error> {
    let frame = spectral_frame(params, params.phi())?;
    let beta = params.beta();
    let l = |x: &Matrix2| lindblad_apply_in_frame(&frame, beta, x);

    let a_dag = a.adjoint();
    let witness = l(&(a_dag * *a)) - a_dag * l(a) - l(&a_dag) * *a;
    let min_eigenvalue = HermitianMatrix2::new(witness.hermitized())
        .expect("hermitized")
        .eigenvalues()[1];
    let selfadjointness_residual = (l(&a_dag) - l(a).adjoint()).max_abs();
    Ok(DissipativityCheck {
        dissipative: min_eigenvalue >= -1e-10 && selfadjointness_residual <= 1e-12,
        witness,
        min_eigenvalue,
        selfadjointness_residual,
    })
}

/// Detailed-balance residual |ω_φ(X L(Y)) − ω_φ(L(X) Y)| in the target state.
/// Contract: below 1e−12 for every pair of operators.
pub fn check_detailed_balance(
    params: &ModelParams,
    x: &Matrix2,
    y: &Matrix2,
) -> Result<f64, Error> {
    let frame = spectral_frame(params, params.phi())?;
    let beta = params.beta();
    let target = equilibrium_state(params, params.phi());
    let forward = target.expectation(&(*x * lindblad_apply_in_frame(&frame, beta, y)));
    let backward = target.expectation(&(lindblad_apply_in_frame(&frame, beta, x) * *y));
    Ok((forward - backward).norm())
}

/// All four eigenvalues of the generator's 4×4 matrix, sorted descending,
/// computed without using the known mode structure: detailed balance w.r.t.
/// ω_φ makes G^{1/2} S G^{−1/2} Hermitian for the GNS Gram matrix
/// G = 1 ⊗ ρ_φᵀ, and the similar Hermitian matrix is diagonalized by Jacobi
/// rotations.
#[allow(clippy::needless_range_loop)]
pub fn liouvillian_spectrum(params: &ModelParams) -> Result<[f64; 4], Error> {
    let generator = liouvillian(params)?;
    let rho = equilibrium_state(params, params.phi());

    // ρᵀ is Hermitian positive definite with the same spectrum as ρ.
    let rho_t = Matrix2::new([
        [rho.matrix()[(0, 0)], rho.matrix()[(1, 0)]],
        [rho.matrix()[(0, 1)], rho.matrix()[(1, 1)]],
    ]);
    let eig = HermitianMatrix2::new(rho_t)?.eigendecompose()?;
    let half = |p: f64| -> Matrix2 {
        Matrix2::outer(eig.vectors[0], eig.vectors[0]) * eig.values[0].powf(p)
            + Matrix2::outer(eig.vectors[1], eig.vectors[1]) * eig.values[1].powf(p)
    };
    let sqrt = half(0.5);
    let rsqrt = half(-0.5);

    // G^{±1/2} = 1 ⊗ (ρᵀ)^{±1/2} in row-major vectorization.
    let kron = |m: &Matrix2| -> Superoperator {
        let mut out = Superoperator::zero();
        for block in 0..2 {
            for r in 0..2 {
                for c in 0..2 {
                    out.entries[2 * block + r][2 * block + c] = m[(r, c)];
                }
            }
        }
        out
    };
    let m = kron(&sqrt).matmul(&generator).matmul(&kron(&rsqrt));

    // Detailed balance makes this similarity Hermitian up to roundoff.
    let mut h = [[c64(0.0, 0.0); 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            h[r][c] = (m.entries[r][c] + m.entries[c][r].conj()) * 0.5;
        }
    }
    Ok(hermitian_eigenvalues_4(h))
}

/// Eigenvalues of a Hermitian 4×4 matrix by cyclic complex Jacobi rotations,
/// sorted descending.
#[allow(clippy::needless_range_loop)]
fn hermitian_eigenvalues_4(mut a: [[Complex64; 4]; 4]) -> [f64; 4] {
    let scale = {
        let mut s = 0.0f64;
        for row in &a {
            for e in row {
                s = s.max(e.norm());
            }
        }
        s.max(1e-300)
    };
    for _ in 0..200 {
        // largest off-diagonal entry
        let (mut p, mut q, mut biggest) = (0usize, 1usize, 0.0f64);
        for i in 0..4 {
            for j in (i + 1)..4 {
                let v = a[i][j].norm();
                if v > biggest {
                    biggest = v;
                    p = i;
                    q = j;
                }
            }
        }
        if biggest < 1e-15 * scale {
            break;
        }

        let apq = a[p][q];
        let direction = apq / apq.norm();
        let tau = (a[q][q].re - a[p][p].re) / (2.0 * apq.norm());
        let t = if tau >= 0.0 {
            1.0 / (tau + (1.0 + tau * tau).sqrt())
        } else {
            1.0 / (tau - (1.0 + tau * tau).sqrt())
        };
        let cos = 1.0 / (1.0 + t * t).sqrt();
        let sin = direction * (t * cos);

        // unitary rotation in the (p, q) plane: A ← R† A R
        let mut rot = [[c64(0.0, 0.0); 4]; 4];
        for i in 0..4 {
            rot[i][i] = c64(1.0, 0.0);
        }
        rot[p][p] = c64(cos, 0.0);
        rot[p][q] = sin;
        rot[q][p] = -sin.conj();
        rot[q][q] = c64(cos, 0.0);

        let mut tmp = [[c64(0.0, 0.0); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = c64(0.0, 0.0);
                for l in 0..4 {
                    acc += rot[l][i].conj() * a[l][j];
                }
                tmp[i][j] = acc;
            }
        }
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = c64(0.0, 0.0);
                for l in 0..4 {
                    acc += tmp[i][l] * rot[l][j];
                }
                a[i][j] = acc;
            }
        }
    }
    let mut values = [a[0][0].re, a[1][1].re, a[2][2].re, a[3][3].re];
    values.sort_unstable_by(|x, y| y.partial_cmp(x).expect("finite eigenvalues"));
    values
}
