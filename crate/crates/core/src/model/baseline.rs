//! Single-market reference models: Cournot-Theocharis (linear cost) and
//! Fisher (quadratic cost `d·q²`).

use crate::dynamics::StabilityClass;
use crate::error::{ModelError, Result};
use crate::model::{IterateMode, StateVector, Trajectory};

/// One market, `N` firms.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineConfig {
    intercept: f64,
    costs: Vec<f64>,
    scale: f64,
}

/// Equilibrium quantities together with the local stability of the naive map.
#[derive(Debug, Clone, PartialEq)]
pub struct BaselineEquilibrium {
    pub quantities: Vec<f64>,
    pub stability: StabilityClass,
}

impl BaselineConfig {
    /// Requires `c^i > 0`, `a ≥ c^i` and `d > −1`.
    pub fn new(intercept: f64, costs: Vec<f64>, scale: f64) -> Result<Self> {
        if costs.is_empty() {
            return Err(ModelError::InvalidArgument("at least one firm is required".into()));
        }
        if !intercept.is_finite() || !scale.is_finite() || costs.iter().any(|c| !c.is_finite()) {
            return Err(ModelError::InvalidArgument("parameters must be finite".into()));
        }
        if let Some(i) = costs.iter().position(|&c| c <= 0.0) {
            return Err(ModelError::InvalidArgument(format!("marginal cost of firm {} must be positive", i + 1)));
        }
        if let Some(i) = costs.iter().position(|&c| intercept < c) {
            return Err(ModelError::InvalidArgument(format!("intercept below marginal cost of firm {}", i + 1)));
        }
        if scale <= -1.0 {
            return Err(ModelError::InvalidArgument("second-order condition d>-1 violated".into()));
        }
        Ok(Self { intercept, costs, scale })
    }

    /// Theocharis game: `d = 0`.
    pub fn theocharis(intercept: f64, costs: Vec<f64>) -> Result<Self> {
        Self::new(intercept, costs, 0.0)
    }

    pub fn intercept(&self) -> f64 {
        self.intercept
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn firms(&self) -> usize {
        self.costs.len()
    }

    fn mean_cost(&self) -> f64 {
        self.costs.iter().sum::<f64>() / self.firms() as f64
    }

    /// `q*^i = (a − c^i + N(c̄ − c^i)) / (N+1)`; stable for `N ≤ 2`, neutral
    /// at `N = 3`, unstable beyond.
    pub fn theocharis_equilibrium(&self) -> Result<BaselineEquilibrium> {
        if self.scale != 0.0 {
            return Err(ModelError::InvalidArgument(format!("Theocharis model requires d = 0, got {}", self.scale)));
        }
        let n = self.firms() as f64;
        let c_bar = self.mean_cost();
        let quantities = self.costs.iter().map(|&c| (self.intercept - c + n * (c_bar - c)) / (n + 1.0)).collect();
        let stability = match self.firms() {
            0..=2 => StabilityClass::Stable,
            3 => StabilityClass::NeutrallyStable,
            _ => StabilityClass::Unstable,
        };
        Ok(BaselineEquilibrium { quantities, stability })
    }

    /// `q*^i = [(a − c^i)(1+2d) + N(c̄ − c^i)] / [4d² + 2(N+2)d + N + 1]`;
    /// stable iff `(N−3)/2 < d`.
    pub fn fisher_equilibrium(&self) -> Result<BaselineEquilibrium> {
        let d = self.scale;
        if d <= -0.5 {
            return Err(ModelError::InvalidArgument(format!("Fisher model requires d > -1/2, got {d}")));
        }
        let n = self.firms() as f64;
        let denom = 4.0 * d * d + 2.0 * (n + 2.0) * d + n + 1.0;
        if denom == 0.0 {
            return Err(ModelError::SingularParameter { d, reason: "Fisher equilibrium denominator vanishes" });
        }
        let c_bar = self.mean_cost();
        let quantities =
            self.costs.iter().map(|&c| ((self.intercept - c) * (1.0 + 2.0 * d) + n * (c_bar - c)) / denom).collect();
        let threshold = (n - 3.0) / 2.0;
        let stability = if d > threshold {
            StabilityClass::Stable
        } else if d == threshold {
            StabilityClass::NeutrallyStable
        } else {
            StabilityClass::Unstable
        };
        Ok(BaselineEquilibrium { quantities, stability })
    }

    /// `q^i(t+1) = (a − Σ_{k≠i} q^k(t) − c^i) / (2(1+d))`, never clipped.
    /// States are `N×1`.
    pub fn fisher_step(&self, state: &StateVector) -> Result<StateVector> {
        if state.firms() != self.firms() || state.markets() != 1 {
            return Err(ModelError::ShapeMismatch {
                firms: self.firms(),
                markets: 1,
                found_firms: state.firms(),
                found_markets: state.markets(),
            });
        }
        let denom = 2.0 * (1.0 + self.scale);
        if denom == 0.0 {
            return Err(ModelError::SingularParameter { d: self.scale, reason: "best response undefined at d = -1" });
        }
        let next = self
            .costs
            .iter()
            .enumerate()
            .map(|(i, &c)| (self.intercept - state.residual_supply(i, 0) - c) / denom)
            .collect();
        StateVector::from_vec(self.firms(), 1, next)
    }

    pub fn fisher_trajectory(&self, initial: &[f64], steps: usize) -> Result<Trajectory> {
        if steps == 0 {
            return Err(ModelError::InvalidArgument("T must be >= 1".into()));
        }
        let start = StateVector::from_vec(initial.len(), 1, initial.to_vec())?;
        Trajectory::iterate(start, steps, IterateMode::Raw, |s| self.fisher_step(s))
    }
}
