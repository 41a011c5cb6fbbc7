//! Exact 2×2 complex matrix algebra: the one-site observable algebra.
//!
//! Everything downstream (gap equation, semigroup, stability audit) reduces to
//! arithmetic on these matrices, so the operations here are closed-form and
//! allocation-free. Units are dimensionless (ħ = 1).

use core::ops::{Add, Index, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::Error;

/// Tolerance below which an eigenvector component counts as zero when fixing
/// the overall phase.
const PHASE_LEAD_TOL: f64 = 1e-12;

#[inline]
pub(crate) fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Unit-modulus complex number `e^{i angle}`.
#[inline]
pub(crate) fn phase(angle: f64) -> Complex64 {
    Complex64::new(angle.cos(), angle.sin())
}

/// A 2×2 complex matrix, stored row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2 {
    entries: [[Complex64; 2]; 2],
}

impl Matrix2 {
    pub const fn new(entries: [[Complex64; 2]; 2]) -> Self {
        Self { entries }
    }

    pub fn zero() -> Self {
        Self::new([[c64(0.0, 0.0); 2]; 2])
    }

    pub fn identity() -> Self {
        Self::diag(c64(1.0, 0.0), c64(1.0, 0.0))
    }

    pub fn diag(top: Complex64, bottom: Complex64) -> Self {
        Self::new([[top, c64(0.0, 0.0)], [c64(0.0, 0.0), bottom]])
    }

    /// Raising operator σ⁺ = |0⟩⟨1|.
    pub fn sigma_plus() -> Self {
        Self::new([
            [c64(0.0, 0.0), c64(1.0, 0.0)],
            [c64(0.0, 0.0), c64(0.0, 0.0)],
        ])
    }

    /// Lowering operator σ⁻ = |1⟩⟨0|.
    pub fn sigma_minus() -> Self {
        Self::new([
            [c64(0.0, 0.0), c64(0.0, 0.0)],
            [c64(1.0, 0.0), c64(0.0, 0.0)],
        ])
    }

    /// σ^z = σ⁺σ⁻ − σ⁻σ⁺ = diag(1, −1).
    pub fn sigma_z() -> Self {
        Self::diag(c64(1.0, 0.0), c64(-1.0, 0.0))
    }

    /// Standard matrix unit with a single 1 at (row, col).
    pub fn unit(row: usize, col: usize) -> Self {
        let mut entries = [[c64(0.0, 0.0); 2]; 2];
        entries[row][col] = c64(1.0, 0.0);
        Self::new(entries)
    }

    /// Rank-one matrix |u⟩⟨v|.
    pub fn outer(u: [Complex64; 2], v: [Complex64; 2]) -> Self {
        Self::new([
            [u[0] * v[0].conj(), u[0] * v[1].conj()],
            [u[1] * v[0].conj(), u[1] * v[1].conj()],
        ])
    }

    pub fn trace(&self) -> Complex64 {
        self.entries[0][0] + self.entries[1][1]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::new([
            [self.entries[0][0].conj(), self.entries[1][0].conj()],
            [self.entries[0][1].conj(), self.entries[1][1].conj()],
        ])
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    /// Maximum absolute entry; the matrix norm used for every tolerance check.
    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for row in &self.entries {
            for e in row {
                m = m.max(e.norm());
            }
        }
        m
    }

    /// Max-entry distance to the conjugate transpose.
    pub fn asymmetry(&self) -> f64 {
        (*self - self.adjoint()).max_abs()
    }

    /// Hermitian part (X + X†)/2.
    pub fn hermitized(&self) -> Self {
        (*self + self.adjoint()) * 0.5
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = *self;
        for row in &mut out.entries {
            for e in row.iter_mut() {
                *e *= factor;
            }
        }
        out
    }
}

impl Index<(usize, usize)> for Matrix2 {
    type Output = Complex64;

    fn index(&self, (row, col): (usize, usize)) -> &Complex64 {
        &self.entries[row][col]
    }
}

impl Add for Matrix2 {
    type Output = Matrix2;
    fn add(self, rhs: Matrix2) -> Matrix2 {
        let mut out = self;
        for r in 0..2 {
            for c in 0..2 {
                out.entries[r][c] += rhs.entries[r][c];
            }
        }
        out
    }
}

impl Sub for Matrix2 {
    type Output = Matrix2;
    fn sub(self, rhs: Matrix2) -> Matrix2 {
        let mut out = self;
        for r in 0..2 {
            for c in 0..2 {
                out.entries[r][c] -= rhs.entries[r][c];
            }
        }
        out
    }
}

impl Neg for Matrix2 {
    type Output = Matrix2;
    fn neg(self) -> Matrix2 {
        self * -1.0
    }
}

impl Mul for Matrix2 {
    type Output = Matrix2;
    fn mul(self, rhs: Matrix2) -> Matrix2 {
        let a = &self.entries;
        let b = &rhs.entries;
        Matrix2::new([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

impl Mul<Complex64> for Matrix2 {
    type Output = Matrix2;
    fn mul(self, rhs: Complex64) -> Matrix2 {
        self.scale(rhs)
    }
}

impl Mul<f64> for Matrix2 {
    type Output = Matrix2;
    fn mul(self, rhs: f64) -> Matrix2 {
        self.scale(c64(rhs, 0.0))
    }
}

/// Gauge transformation α_ψ(X) = U X U† with U = exp(iψσ^z/2).
///
/// Acts as α_ψ(σ⁺) = e^{iψ}σ⁺ and leaves σ^z fixed; α_ψ∘α_χ = α_{ψ+χ}.
pub fn gauge_transform(x: &Matrix2, psi: f64) -> Matrix2 {
    let u0 = phase(0.5 * psi);
    let u1 = u0.conj();
    Matrix2::new([
        [x[(0, 0)], x[(0, 1)] * u0 * u1.conj()],
        [x[(1, 0)] * u1 * u0.conj(), x[(1, 1)]],
    ])
}

/// True iff X commutes with σ^z to within `tol` in the max-entry norm,
/// i.e. X is invariant under the whole gauge group.
pub fn is_gauge_invariant(x: &Matrix2, tol: f64) -> bool {
    Matrix2::sigma_z().commutator(x).max_abs() < tol
}

/// A matrix certified Hermitian at construction (entrywise tolerance 1e−12).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianMatrix2 {
    inner: Matrix2,
}

impl HermitianMatrix2 {
    pub fn new(m: Matrix2) -> Result<Self, Error> {
        let asym = m.asymmetry();
        if asym > 1e-12 {
            return Err(Error::NotHermitian {
                max_asymmetry: asym,
            });
        }
        Ok(Self { inner: m })
    }

    pub fn matrix(&self) -> &Matrix2 {
        &self.inner
    }

    /// Real eigenvalues of the (symmetrized) matrix, descending. Never fails:
    /// no frame convention is involved.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let (mid, radius, _) = self.reduced();
        [mid + radius, mid - radius]
    }

    /// Closed-form spectral decomposition with a deterministic phase
    /// convention: eigenvalues sorted descending, and each eigenvector scaled
    /// so that its first component of modulus above 1e−12 is real and
    /// positive.
    ///
    /// Fails with [`Error::DegenerateSpectrum`] when the eigenvalues are
    /// closer than 1e−13, in which case no basis convention is meaningful.
    pub fn eigendecompose(&self) -> Result<Eigendecomposition, Error> {
        let (mid, radius, b) = self.reduced();
        let plus = mid + radius;
        let minus = mid - radius;
        if plus - minus < 1e-13 {
            return Err(Error::DegenerateSpectrum { gap: plus - minus });
        }
        let a = self.inner[(0, 0)].re;
        let d = self.inner[(1, 1)].re;
        // Two algebraic null vectors of (H − ε₊); pick the better-conditioned.
        let candidate = if a - d >= 0.0 {
            [c64(plus - d, 0.0), b.conj()]
        } else {
            [b, c64(plus - a, 0.0)]
        };
        let v_plus = phase_fixed(normalized(candidate));
        // Exact orthogonal complement: the other eigenvector of a Hermitian
        // 2×2 matrix.
        let v_minus = phase_fixed([-v_plus[1].conj(), v_plus[0].conj()]);
        Ok(Eigendecomposition {
            values: [plus, minus],
            vectors: [v_plus, v_minus],
        })
    }

    /// (midpoint, radius, symmetrized off-diagonal entry)
    fn reduced(&self) -> (f64, f64, Complex64) {
        let a = self.inner[(0, 0)].re;
        let d = self.inner[(1, 1)].re;
        let b = (self.inner[(0, 1)] + self.inner[(1, 0)].conj()) * 0.5;
        let mid = 0.5 * (a + d);
        let delta = 0.5 * (a - d);
        let radius = (delta * delta + b.norm_sqr()).sqrt();
        (mid, radius, b)
    }
}

fn normalized(v: [Complex64; 2]) -> [Complex64; 2] {
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    [v[0] / n, v[1] / n]
}

fn phase_fixed(v: [Complex64; 2]) -> [Complex64; 2] {
    let lead = if v[0].norm() > PHASE_LEAD_TOL {
        v[0]
    } else {
        v[1]
    };
    let rot = lead.conj() / lead.norm();
    [v[0] * rot, v[1] * rot]
}

/// Eigenvalues (descending) and orthonormal eigenvectors of a Hermitian 2×2
/// matrix, phases fixed by [`HermitianMatrix2::eigendecompose`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigendecomposition {
    pub values: [f64; 2],
    pub vectors: [[Complex64; 2]; 2],
}

impl Eigendecomposition {
    /// Σᵢ εᵢ|ψᵢ⟩⟨ψᵢ|.
    pub fn reconstruct(&self) -> Matrix2 {
        Matrix2::outer(self.vectors[0], self.vectors[0]) * self.values[0]
            + Matrix2::outer(self.vectors[1], self.vectors[1]) * self.values[1]
    }
}

/// A matrix certified at construction to be a density matrix: Hermitian,
/// unit trace to 1e−12, eigenvalues within [−1e−12, 1 + 1e−12].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix2 {
    inner: Matrix2,
}

impl DensityMatrix2 {
    pub fn new(m: Matrix2) -> Result<Self, Error> {
        let asym = m.asymmetry();
        if asym > 1e-12 {
            return Err(Error::NotHermitian {
                max_asymmetry: asym,
            });
        }
        let trace_error = (m.trace() - c64(1.0, 0.0)).norm();
        let eigenvalues = HermitianMatrix2 {
            inner: m.hermitized(),
        }
        .eigenvalues();
        let min = eigenvalues[1];
        let max = eigenvalues[0];
        if trace_error > 1e-12 || min < -1e-12 || max > 1.0 + 1e-12 {
            return Err(Error::NotDensityMatrix {
                trace_error,
                min_eigenvalue: min,
            });
        }
        Ok(Self { inner: m })
    }

    pub fn matrix(&self) -> &Matrix2 {
        &self.inner
    }

    /// ρ(X) = Tr(ρ X).
    pub fn expectation(&self, x: &Matrix2) -> Complex64 {
        (self.inner * *x).trace()
    }

    pub fn eigenvalues(&self) -> [f64; 2] {
        HermitianMatrix2 {
            inner: self.inner.hermitized(),
        }
        .eigenvalues()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn assert_close(a: &Matrix2, b: &Matrix2, tol: f64) {
        assert!((*a - *b).max_abs() < tol, "matrices differ:\n{a:?}\n{b:?}");
    }

    #[test]
    fn pauli_relations_hold_exactly() {
        let sp = Matrix2::sigma_plus();
        let sm = Matrix2::sigma_minus();
        let sz = Matrix2::sigma_z();
        assert_eq!(sp * sm - sm * sp, sz);
        assert_eq!(sp * sp, Matrix2::zero());
        assert_eq!(sm * sm, Matrix2::zero());
        assert_eq!(sz.commutator(&sp), sp * 2.0);
    }

    #[test]
    fn adjoint_is_an_involution() {
        let x = Matrix2::new([
            [c64(1.0, 2.0), c64(-0.5, 0.25)],
            [c64(0.0, -1.5), c64(3.0, 0.0)],
        ]);
        assert_eq!(x.adjoint().adjoint(), x);
    }

    #[test]
    fn gauge_transform_matches_the_group_action() {
        let sp = Matrix2::sigma_plus();
        // α_π(σ⁺) = −σ⁺
        assert_close(&gauge_transform(&sp, PI), &(-sp), 1e-15);
        // α_{π/2}(σ⁺) = iσ⁺
        assert_close(
            &gauge_transform(&sp, PI / 2.0),
            &sp.scale(c64(0.0, 1.0)),
            1e-15,
        );
        // the generator is fixed
        let sz = Matrix2::sigma_z();
        assert_close(&gauge_transform(&sz, 1.234), &sz, 1e-15);
    }

    #[test]
    fn gauge_invariance_detects_the_commutant() {
        assert!(is_gauge_invariant(&Matrix2::sigma_z(), 1e-12));
        assert!(is_gauge_invariant(&Matrix2::identity(), 1e-12));
        assert!(!is_gauge_invariant(&Matrix2::sigma_plus(), 1e-12));
    }

    #[test]
    fn eigendecompose_sigma_z() {
        let h = HermitianMatrix2::new(Matrix2::sigma_z()).unwrap();
        let eig = h.eigendecompose().unwrap();
        assert_eq!(eig.values, [1.0, -1.0]);
        assert_eq!(eig.vectors[0], [c64(1.0, 0.0), c64(0.0, 0.0)]);
        assert_eq!(eig.vectors[1], [c64(0.0, 0.0), c64(1.0, 0.0)]);
    }

    #[test]
    fn eigendecompose_scaled_sigma_z() {
        let h = HermitianMatrix2::new(Matrix2::sigma_z() * 0.25).unwrap();
        let eig = h.eigendecompose().unwrap();
        assert_eq!(eig.values, [0.25, -0.25]);
    }

    #[test]
    fn eigendecompose_rejects_degenerate_spectrum() {
        let h = HermitianMatrix2::new(Matrix2::identity()).unwrap();
        assert!(matches!(
            h.eigendecompose(),
            Err(Error::DegenerateSpectrum { .. })
        ));
    }

    #[test]
    fn eigendecompose_is_deterministic() {
        let m = Matrix2::new([
            [c64(0.3, 0.0), c64(-0.2, 0.7)],
            [c64(-0.2, -0.7), c64(-0.4, 0.0)],
        ]);
        let h = HermitianMatrix2::new(m).unwrap();
        let first = h.eigendecompose().unwrap();
        let second = h.eigendecompose().unwrap();
        assert_eq!(first, second);
        // and the reconstruction is faithful
        assert!((first.reconstruct() - m).max_abs() < 1e-12);
    }

    #[test]
    fn hermitian_certificate_rejects_asymmetry() {
        let m = Matrix2::new([
            [c64(1.0, 0.0), c64(0.5, 0.0)],
            [c64(0.4, 0.0), c64(2.0, 0.0)],
        ]);
        assert!(matches!(
            HermitianMatrix2::new(m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn density_certificate_checks_trace_and_positivity() {
        let ok = Matrix2::diag(c64(0.5, 0.0), c64(0.5, 0.0));
        assert!(DensityMatrix2::new(ok).is_ok());

        let bad_trace = Matrix2::diag(c64(0.7, 0.0), c64(0.5, 0.0));
        assert!(DensityMatrix2::new(bad_trace).is_err());

        let indefinite = Matrix2::diag(c64(1.5, 0.0), c64(-0.5, 0.0));
        assert!(matches!(
            DensityMatrix2::new(indefinite),
            Err(Error::NotDensityMatrix { .. })
        ));
    }
}
