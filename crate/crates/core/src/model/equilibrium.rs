//! Cournot-Nash equilibria: the duopoly closed form and a general linear solve
//! of the first-order conditions.

use crate::error::{ModelError, Result};
use crate::model::{GameConfig, StateVector};
use crate::numerics::{solve_linear, DenseMatrix, NumericsError};

/// Factors of the closed-form denominator closer to zero than this are
/// treated as singular.
const SINGULAR_FACTOR_TOLERANCE: f64 = 1e-12;

/// Closed-form interior equilibrium of the `2×M` game.
///
/// ```text
/// q*_j^i = [(a_j − c^i)(1+2Md) + (c^k − c^i)] / D
///        + (2/3)·M·(a_j − ā)(2Md² + d) / D,      D = (2Md+1)(2Md+3)
/// ```
///
/// where `k` is the rival of `i` and `ā` the mean intercept.
pub fn nash_duopoly_closed_form(config: &GameConfig) -> Result<StateVector> {
    if config.firms() != 2 {
        return Err(ModelError::NotDuopoly(config.firms()));
    }
    let m = config.markets() as f64;
    let d = config.scale();
    let md = m * d;
    if (2.0 * md + 1.0).abs() <= SINGULAR_FACTOR_TOLERANCE {
        return Err(ModelError::SingularParameter { d, reason: "closed form excludes d = -1/(2M)" });
    }
    if (2.0 * md + 3.0).abs() <= SINGULAR_FACTOR_TOLERANCE {
        return Err(ModelError::SingularParameter { d, reason: "closed form excludes d = -3/(2M)" });
    }
    let denom = 3.0 + 4.0 * m * m * d * d + 8.0 * md;
    let a = config.intercepts();
    let c = config.costs();
    let a_bar = a.iter().sum::<f64>() / m;
    let coupling = 2.0 * m * d * d + d;

    let mut q = StateVector::zeros(2, config.markets());
    for i in 0..2 {
        let k = 1 - i;
        for (j, &aj) in a.iter().enumerate() {
            let own = ((aj - c[i]) * (1.0 + 2.0 * md) + (c[k] - c[i])) / denom;
            let spill = (2.0 / 3.0) * m * (aj - a_bar) * coupling / denom;
            q.set(i, j, own + spill);
        }
    }
    Ok(q)
}

/// The `(N·M)×(N·M)` first-order-condition system `A q = b`, rows and columns
/// in firm-major order:
/// `q_j^i + Q_j + 2d·Q^i = a_j − c^i`.
pub fn foc_system(config: &GameConfig) -> (DenseMatrix, Vec<f64>) {
    let (n, m) = (config.firms(), config.markets());
    let d = config.scale();
    let idx = |i: usize, j: usize| i * m + j;
    let mut a = DenseMatrix::zeros(n * m);
    let mut b = vec![0.0; n * m];
    for i in 0..n {
        for j in 0..m {
            let r = idx(i, j);
            for k in 0..n {
                a[(r, idx(k, j))] += 1.0;
            }
            a[(r, r)] += 1.0;
            for l in 0..m {
                a[(r, idx(i, l))] += 2.0 * d;
            }
            b[r] = config.intercepts()[j] - config.costs()[i];
        }
    }
    (a, b)
}

/// Solves the first-order conditions for any `N`, `M`.
pub fn nash_linear_solve(config: &GameConfig) -> Result<StateVector> {
    let (a, b) = foc_system(config);
    let q = solve_linear(&a, &b).map_err(|e| match e {
        NumericsError::Singular { .. } => ModelError::SingularSystem { d: config.scale() },
        other => other.into(),
    })?;
    StateVector::from_vec(config.firms(), config.markets(), q)
}
