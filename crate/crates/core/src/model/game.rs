//! Payoffs and naive best-response dynamics of the multi-market game.

use crate::error::{ModelError, Result};
use crate::model::{GameConfig, IterateMode, StateVector, Trajectory};

impl GameConfig {
    fn check_shape(&self, state: &StateVector) -> Result<()> {
        if state.firms() != self.firms() || state.markets() != self.markets() {
            return Err(ModelError::ShapeMismatch {
                firms: self.firms(),
                markets: self.markets(),
                found_firms: state.firms(),
                found_markets: state.markets(),
            });
        }
        Ok(())
    }

    fn check_firm(&self, firm: usize) -> Result<()> {
        self.cost(firm).map(|_| ())
    }

    /// `P_j = a_j − Q_j`. Negative prices are returned as-is.
    pub fn price(&self, state: &StateVector, market: usize) -> Result<f64> {
        let a = self.intercept(market)?;
        self.check_shape(state)?;
        Ok(a - state.market_supply(market))
    }

    /// `C^i = c^i·Q^i + d·(Q^i)²`.
    pub fn firm_cost(&self, state: &StateVector, firm: usize) -> Result<f64> {
        let c = self.cost(firm)?;
        self.check_shape(state)?;
        let total = state.firm_total(firm);
        Ok(c * total + self.scale() * total * total)
    }

    /// `π^i = Σ_j q_j^i·P_j − C^i`.
    pub fn profit(&self, state: &StateVector, firm: usize) -> Result<f64> {
        self.check_firm(firm)?;
        self.check_shape(state)?;
        let revenue: f64 =
            (0..self.markets()).map(|j| state.get(firm, j) * (self.intercepts()[j] - state.market_supply(j))).sum();
        Ok(revenue - self.firm_cost(state, firm)?)
    }

    /// Profit-maximising `q_j^i` given everything else in `state`:
    /// `(a_j − Q̃_j^i − c^i − 2d·Q̂_j^i) / (2(1+d))`. May be negative.
    pub fn best_response(&self, state: &StateVector, firm: usize, market: usize) -> Result<f64> {
        let c = self.cost(firm)?;
        let a = self.intercept(market)?;
        self.check_shape(state)?;
        let denom = self.best_response_denominator()?;
        Ok(self.best_response_unchecked(state, firm, market, a, c, denom))
    }

    fn best_response_denominator(&self) -> Result<f64> {
        let d = self.scale();
        let denom = 2.0 * (1.0 + d);
        if denom == 0.0 {
            return Err(ModelError::SingularParameter { d, reason: "best response undefined at d = -1" });
        }
        Ok(denom)
    }

    #[inline]
    fn best_response_unchecked(
        &self,
        state: &StateVector,
        firm: usize,
        market: usize,
        a: f64,
        c: f64,
        denom: f64,
    ) -> f64 {
        let rivals = state.residual_supply(firm, market);
        let elsewhere = state.other_markets_total(firm, market);
        (a - rivals - c - 2.0 * self.scale() * elsewhere) / denom
    }

    /// One simultaneous naive-expectations update. In clipped mode negative
    /// components are replaced by zero after the whole update.
    pub fn step(&self, state: &StateVector, mode: IterateMode) -> Result<StateVector> {
        self.check_shape(state)?;
        let denom = self.best_response_denominator()?;
        let mut next = StateVector::zeros(self.firms(), self.markets());
        for (i, &c) in self.costs().iter().enumerate() {
            for (j, &a) in self.intercepts().iter().enumerate() {
                let q = self.best_response_unchecked(state, i, j, a, c, denom);
                next.set(i, j, q);
            }
        }
        if mode == IterateMode::Clipped {
            for i in 0..self.firms() {
                for j in 0..self.markets() {
                    if next.get(i, j) < 0.0 {
                        next.set(i, j, 0.0);
                    }
                }
            }
        }
        Ok(next)
    }

    /// Iterates [`GameConfig::step`] `steps` times (or until divergence).
    pub fn simulate(&self, initial: &StateVector, steps: usize, mode: IterateMode) -> Result<Trajectory> {
        if steps == 0 {
            return Err(ModelError::InvalidArgument("T must be >= 1".into()));
        }
        self.check_shape(initial)?;
        Trajectory::iterate(initial.clone(), steps, mode, |s| self.step(s, mode))
    }
}
