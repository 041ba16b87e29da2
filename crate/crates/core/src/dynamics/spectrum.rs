use std::fmt;

use crate::error::{ModelError, Result};
use crate::model::GameConfig;
use crate::numerics::{symmetric_eigenvalues, DenseMatrix, DEFAULT_EIGEN_TOLERANCE};

/// Default half-width of the band around `ρ = 1` classified as neutral.
pub const NEUTRALITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilityClass {
    Stable,
    NeutrallyStable,
    Unstable,
}

impl StabilityClass {
    pub fn from_radius(rho: f64, tol: f64) -> Self {
        if rho < 1.0 - tol {
            StabilityClass::Stable
        } else if rho > 1.0 + tol {
            StabilityClass::Unstable
        } else {
            StabilityClass::NeutrallyStable
        }
    }
}

impl fmt::Display for StabilityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StabilityClass::Stable => "Stable",
            StabilityClass::NeutrallyStable => "NeutrallyStable",
            StabilityClass::Unstable => "Unstable",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    /// Ascending, with multiplicity.
    pub eigenvalues: Vec<f64>,
    pub spectral_radius: f64,
    pub stability: StabilityClass,
    pub tolerance: f64,
    /// True when the eigenvalues came from the duopoly closed form.
    pub closed_form: bool,
}

fn check_scale(d: f64) -> Result<()> {
    if d == -1.0 {
        return Err(ModelError::SingularParameter { d, reason: "Jacobian undefined at d = -1" });
    }
    Ok(())
}

/// Jacobian of the naive map (it is constant, so "at the equilibrium" is
/// everywhere). Firm-major ordering; diagonal blocks are `H` (zero diagonal,
/// `−d/(1+d)` elsewhere), off-diagonal blocks are `−1/(2(1+d))·I`.
pub fn build_jacobian(config: &GameConfig) -> Result<DenseMatrix> {
    let d = config.scale();
    check_scale(d)?;
    let (n, m) = (config.firms(), config.markets());
    let own = -d / (1.0 + d);
    let rival = -1.0 / (2.0 * (1.0 + d));
    let mut jac = DenseMatrix::zeros(n * m);
    for i in 0..n {
        for j in 0..m {
            let row = i * m + j;
            for k in 0..n {
                for l in 0..m {
                    let col = k * m + l;
                    jac[(row, col)] = match (i == k, j == l) {
                        (true, true) => 0.0,
                        (true, false) => own,
                        (false, true) => rival,
                        (false, false) => 0.0,
                    };
                }
            }
        }
    }
    Ok(jac)
}

/// Duopoly eigenvalues in closed form, ascending, with multiplicity `2m`
/// (only the first two when `m = 1`):
///
/// ```text
/// λ₁ = −(2(m−1)d + 1) / (2(1+d))
/// λ₂ = −(2(m−1)d − 1) / (2(1+d))
/// λ₃ =  (2d + 1) / (2(1+d))      × (m−1)
/// λ₄ =  (2d − 1) / (2(1+d))      × (m−1)
/// ```
pub fn eigenvalues_closed_form(markets: usize, d: f64) -> Result<Vec<f64>> {
    if markets == 0 {
        return Err(ModelError::InvalidArgument("market count must be >= 1".into()));
    }
    check_scale(d)?;
    let m = markets as f64;
    let denom = 2.0 * (1.0 + d);
    let mut values = Vec::with_capacity(2 * markets);
    values.push(-(2.0 * (m - 1.0) * d + 1.0) / denom);
    values.push(-(2.0 * (m - 1.0) * d - 1.0) / denom);
    for _ in 1..markets {
        values.push((2.0 * d + 1.0) / denom);
        values.push((2.0 * d - 1.0) / denom);
    }
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Product form of the duopoly characteristic polynomial evaluated at `lambda`.
pub fn characteristic_product(markets: usize, d: f64, lambda: f64) -> f64 {
    let m = markets as f64;
    let half = |num: f64| 0.5 * num / (1.0 + d);
    let repeated = (lambda - half(2.0 * d + 1.0)) * (lambda - half(2.0 * d - 1.0));
    repeated.powi(markets as i32 - 1)
        * (lambda + half(2.0 * (m - 1.0) * d + 1.0))
        * (lambda + half(2.0 * (m - 1.0) * d - 1.0))
}

pub fn spectral_radius(eigenvalues: &[f64]) -> f64 {
    eigenvalues.iter().fold(0.0, |r, l| r.max(l.abs()))
}

/// Spectrum and stability of the equilibrium. Duopolies use the closed
/// form; any other firm count diagonalises [`build_jacobian`] numerically.
pub fn classify_stability(config: &GameConfig, tol: f64) -> Result<SpectrumReport> {
    let (eigenvalues, closed_form) = if config.firms() == 2 {
        (eigenvalues_closed_form(config.markets(), config.scale())?, true)
    } else {
        let jac = build_jacobian(config)?;
        (symmetric_eigenvalues(&jac, DEFAULT_EIGEN_TOLERANCE)?.eigenvalues, false)
    };
    let spectral_radius = spectral_radius(&eigenvalues);
    Ok(SpectrumReport {
        stability: StabilityClass::from_radius(spectral_radius, tol),
        eigenvalues,
        spectral_radius,
        tolerance: tol,
        closed_form,
    })
}
