use std::fmt;

use crate::error::{ModelError, Result};
use crate::model::config::check_permutation;

/// Orbits are abandoned once any quantity exceeds this magnitude.
pub const DIVERGENCE_THRESHOLD: f64 = 1e12;

/// `N×M` quantity allocation, stored firm-major:
/// `(q_1^1, …, q_M^1, q_1^2, …, q_M^2, …)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    firms: usize,
    markets: usize,
    q: Vec<f64>,
}

impl StateVector {
    pub fn zeros(firms: usize, markets: usize) -> Self {
        Self { firms, markets, q: vec![0.0; firms * markets] }
    }

    pub fn from_vec(firms: usize, markets: usize, q: Vec<f64>) -> Result<Self> {
        if q.len() != firms * markets {
            return Err(ModelError::InvalidArgument(format!(
                "state of length {} cannot hold {firms} firms x {markets} markets",
                q.len()
            )));
        }
        Ok(Self { firms, markets, q })
    }

    /// One row per firm, one column per market.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let firms = rows.len();
        let markets = rows.first().map_or(0, |r| r.as_ref().len());
        if let Some(bad) = rows.iter().position(|r| r.as_ref().len() != markets) {
            return Err(ModelError::InvalidArgument(format!(
                "row {} has {} markets, expected {markets}",
                bad + 1,
                rows[bad].as_ref().len()
            )));
        }
        let q = rows.iter().flat_map(|r| r.as_ref().iter().copied()).collect();
        Ok(Self { firms, markets, q })
    }

    pub fn firms(&self) -> usize {
        self.firms
    }

    pub fn markets(&self) -> usize {
        self.markets
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.q
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.q
    }

    /// `q_j^i`. Panics on out-of-range indices, like slice indexing.
    pub fn get(&self, firm: usize, market: usize) -> f64 {
        assert!(firm < self.firms && market < self.markets, "state index out of range");
        self.q[firm * self.markets + market]
    }

    pub fn set(&mut self, firm: usize, market: usize, value: f64) {
        assert!(firm < self.firms && market < self.markets, "state index out of range");
        self.q[firm * self.markets + market] = value;
    }

    pub fn firm_slice(&self, firm: usize) -> &[f64] {
        &self.q[firm * self.markets..(firm + 1) * self.markets]
    }

    /// Quantities of every firm in one market.
    pub fn market_slice(&self, market: usize) -> Vec<f64> {
        (0..self.firms).map(|i| self.get(i, market)).collect()
    }

    /// `Q_j`.
    pub fn market_supply(&self, market: usize) -> f64 {
        (0..self.firms).map(|i| self.get(i, market)).sum()
    }

    /// `Q^i`.
    pub fn firm_total(&self, firm: usize) -> f64 {
        self.firm_slice(firm).iter().sum()
    }

    /// `Q̃_j^i`: supply of firm `i`'s rivals in market `j`.
    pub fn residual_supply(&self, firm: usize, market: usize) -> f64 {
        (0..self.firms).filter(|&k| k != firm).map(|k| self.get(k, market)).sum()
    }

    /// `Q̂_j^i`: what firm `i` sells outside market `j`.
    pub fn other_markets_total(&self, firm: usize, market: usize) -> f64 {
        self.firm_slice(firm).iter().enumerate().filter(|&(l, _)| l != market).map(|(_, q)| q).sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.q.iter().all(|&v| v >= 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.q.iter().all(|v| v.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.q.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Sup-norm distance. Panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        assert_eq!(self.q.len(), other.q.len(), "state shapes differ");
        self.q.iter().zip(&other.q).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// `‖self − other‖∞ / ‖other‖∞` (absolute when `other` is zero).
    pub fn relative_diff(&self, other: &StateVector) -> f64 {
        let scale = other.max_abs();
        let diff = self.max_abs_diff(other);
        if scale > 0.0 {
            diff / scale
        } else {
            diff
        }
    }

    /// Market `k` of the result is market `perm[k]` of `self`.
    pub fn permute_markets(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.markets)?;
        let mut out = Self::zeros(self.firms, self.markets);
        for i in 0..self.firms {
            for (k, &p) in perm.iter().enumerate() {
                out.set(i, k, self.get(i, p));
            }
        }
        Ok(out)
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.firms {
            let row: Vec<String> = self.firm_slice(i).iter().map(|v| format!("{v:.6}")).collect();
            writeln!(f, "firm {}: [{}]", i + 1, row.join(", "))?;
        }
        Ok(())
    }
}

/// Whether the naive map is applied as-is or projected onto `q ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IterateMode {
    Raw,
    Clipped,
}

impl fmt::Display for IterateMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IterateMode::Raw => "raw",
            IterateMode::Clipped => "clipped",
        })
    }
}

impl std::str::FromStr for IterateMode {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "raw" => Ok(IterateMode::Raw),
            "clipped" => Ok(IterateMode::Clipped),
            other => Err(ModelError::InvalidArgument(format!("unknown mode `{other}` (expected raw|clipped)"))),
        }
    }
}

/// Admissible/feasible taxonomy of an orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrajectoryClass {
    /// Every component of every state is nonnegative.
    Feasible,
    /// Finite throughout, but some component went negative.
    AdmissibleOnly,
    /// Aborted after crossing [`DIVERGENCE_THRESHOLD`] (or leaving the reals).
    Divergent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub states: Vec<StateVector>,
    pub classification: TrajectoryClass,
    pub mode: IterateMode,
}

impl Trajectory {
    /// Runs `steps` iterations of `map` from `initial`, stopping early on divergence.
    pub(crate) fn iterate<F>(initial: StateVector, steps: usize, mode: IterateMode, mut map: F) -> Result<Self>
    where
        F: FnMut(&StateVector) -> Result<StateVector>,
    {
        let mut states = Vec::with_capacity(steps + 1);
        states.push(initial);
        let mut diverged = false;
        for _ in 0..steps {
            let next = map(states.last().expect("non-empty"))?;
            let blown = !next.is_finite() || next.max_abs() > DIVERGENCE_THRESHOLD;
            states.push(next);
            if blown {
                diverged = true;
                break;
            }
        }
        let classification = if diverged {
            TrajectoryClass::Divergent
        } else if states.iter().all(StateVector::is_nonnegative) {
            TrajectoryClass::Feasible
        } else {
            TrajectoryClass::AdmissibleOnly
        };
        Ok(Self { states, classification, mode })
    }

    pub fn initial_state(&self) -> &StateVector {
        &self.states[0]
    }

    pub fn final_state(&self) -> &StateVector {
        self.states.last().expect("trajectory always holds its initial state")
    }

    /// Number of completed steps.
    pub fn steps(&self) -> usize {
        self.states.len() - 1
    }

    pub fn is_divergent(&self) -> bool {
        self.classification == TrajectoryClass::Divergent
    }

    /// Time series of one coordinate.
    pub fn series(&self, firm: usize, market: usize) -> Vec<f64> {
        self.states.iter().map(|s| s.get(firm, market)).collect()
    }

    /// Whether the final state lies within `tol` (sup norm) of `target`.
    pub fn converges_to(&self, target: &StateVector, tol: f64) -> bool {
        !self.is_divergent() && self.final_state().max_abs_diff(target) <= tol
    }
}
