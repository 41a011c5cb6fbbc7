//! Observable selector: named quadratures, σ^z, or a custom 2×2 matrix.

use std::fmt;
use std::str::FromStr;

use bcsmeta::{Matrix2, ReferenceObservable};
use num_complex::Complex64;

/// Which observable a scenario probes. Custom matrices are given row-major
/// as four complex entries (eight floats) and are Hermitized before use.
#[derive(Debug, Clone, PartialEq)]
pub enum ObservableSpec {
    XQuad,
    YQuad,
    SigmaZ,
    Custom([Complex64; 4]),
}

impl ObservableSpec {
    /// Build the operator for condensate phase φ. The second value reports
    /// whether a custom matrix had to be Hermitized beyond 1e−12.
    pub fn build(&self, phi: f64) -> (Matrix2, bool) {
        match self {
            Self::XQuad => (ReferenceObservable::XQuadrature.operator(phi), false),
            Self::YQuad => (ReferenceObservable::YQuadrature.operator(phi), false),
            Self::SigmaZ => (ReferenceObservable::SigmaZ.operator(phi), false),
            Self::Custom(entries) => {
                let m = Matrix2::new([[entries[0], entries[1]], [entries[2], entries[3]]]);
                let needs_warning = m.asymmetry() > 1e-12;
                (m.hermitized(), needs_warning)
            }
        }
    }
}

impl fmt::Display for ObservableSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::XQuad => write!(f, "x-quad"),
            Self::YQuad => write!(f, "y-quad"),
            Self::SigmaZ => write!(f, "sigma-z"),
            Self::Custom(e) => write!(
                f,
                "custom:{},{},{},{},{},{},{},{}",
                e[0].re, e[0].im, e[1].re, e[1].im, e[2].re, e[2].im, e[3].re, e[3].im
            ),
        }
    }
}

impl FromStr for ObservableSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "x-quad" => Ok(Self::XQuad),
            "y-quad" => Ok(Self::YQuad),
            "sigma-z" => Ok(Self::SigmaZ),
            _ => {
                let numbers = s.strip_prefix("custom:").ok_or_else(|| {
                    format!(
                        "unknown observable '{s}' (expected x-quad, y-quad, sigma-z, \
                         or custom:re,im,re,im,re,im,re,im)"
                    )
                })?;
                let parts: Vec<&str> = numbers.split(',').collect();
                if parts.len() != 8 {
                    return Err(format!(
                        "custom observable needs 8 comma-separated floats \
                         (row-major re,im pairs), got {}",
                        parts.len()
                    ));
                }
                let mut values = [0.0f64; 8];
                for (slot, part) in values.iter_mut().zip(parts.iter()) {
                    *slot = part
                        .trim()
                        .parse::<f64>()
                        .map_err(|e| format!("bad float '{part}' in custom observable: {e}"))?;
                }
                Ok(Self::Custom([
                    Complex64::new(values[0], values[1]),
                    Complex64::new(values[2], values[3]),
                    Complex64::new(values[4], values[5]),
                    Complex64::new(values[6], values[7]),
                ]))
            }
        }
    }
}
