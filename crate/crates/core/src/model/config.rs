use std::fmt;

use crate::error::{ModelError, Result};
use crate::model::StateVector;

/// A single validation rule, hard or soft.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rule {
    NoMarkets,
    NoFirms,
    NonFinite,
    NonPositiveIntercept {
        market: usize,
    },
    NonPositiveCost {
        firm: usize,
    },
    InterceptBelowCost {
        firm: usize,
        market: usize,
    },
    SecondOrderCondition,
    /// `d ≤ −1/(2M)`: outside the admissible scale range.
    ScaleBelowMarketBound,
    /// `d < −c^i / (2·Σ_j a_j)`: marginal cost may turn negative at maximum output.
    MarginalCostBound {
        firm: usize,
    },
}

impl Rule {
    /// Stable short identifier.
    pub fn id(&self) -> &'static str {
        match self {
            Rule::NoMarkets => "no-markets",
            Rule::NoFirms => "no-firms",
            Rule::NonFinite => "non-finite",
            Rule::NonPositiveIntercept { .. } => "intercept-nonpositive",
            Rule::NonPositiveCost { .. } => "cost-nonpositive",
            Rule::InterceptBelowCost { .. } => "intercept-below-cost",
            Rule::SecondOrderCondition => "second-order",
            Rule::ScaleBelowMarketBound => "scale-below-market-bound",
            Rule::MarginalCostBound { .. } => "marginal-cost-bound",
        }
    }

    pub fn is_hard(&self) -> bool {
        !matches!(self, Rule::ScaleBelowMarketBound | Rule::MarginalCostBound { .. })
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::NoMarkets => write!(f, "at least one market is required"),
            Rule::NoFirms => write!(f, "at least one firm is required"),
            Rule::NonFinite => write!(f, "parameters must be finite"),
            Rule::NonPositiveIntercept { market } => {
                write!(f, "intercept of market {} must be positive", market + 1)
            }
            Rule::NonPositiveCost { firm } => write!(f, "marginal cost of firm {} must be positive", firm + 1),
            Rule::InterceptBelowCost { firm, market } => {
                write!(f, "intercept below marginal cost (market {}, firm {})", market + 1, firm + 1)
            }
            Rule::SecondOrderCondition => write!(f, "second-order condition d>-1 violated"),
            Rule::ScaleBelowMarketBound => write!(f, "d <= -1/(2M): scale outside the admissible range"),
            Rule::MarginalCostBound { firm } => {
                write!(f, "d < -c/(2*sum a): marginal cost of firm {} can turn negative", firm + 1)
            }
        }
    }
}

/// Outcome of [`validate`]. Hard violations block every downstream
/// operation; soft flags are reported but the game stays simulable.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub hard_violations: Vec<Rule>,
    pub soft_flags: Vec<Rule>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.hard_violations.is_empty()
    }

    pub fn has_hard(&self, id: &str) -> bool {
        self.hard_violations.iter().any(|r| r.id() == id)
    }

    pub fn has_soft(&self, id: &str) -> bool {
        self.soft_flags.iter().any(|r| r.id() == id)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msgs: Vec<String> = self.hard_violations.iter().map(|r| r.to_string()).collect();
        write!(f, "{}", msgs.join("; "))
    }
}

/// Checks a candidate parameter set. Never fails; every rule is evaluated.
pub fn validate(intercepts: &[f64], costs: &[f64], scale: f64) -> ValidationReport {
    let mut report = ValidationReport::default();
    let hard = &mut report.hard_violations;

    if intercepts.is_empty() {
        hard.push(Rule::NoMarkets);
    }
    if costs.is_empty() {
        hard.push(Rule::NoFirms);
    }
    if !scale.is_finite() || intercepts.iter().chain(costs).any(|v| !v.is_finite()) {
        hard.push(Rule::NonFinite);
        return report;
    }
    for (market, &a) in intercepts.iter().enumerate() {
        if a <= 0.0 {
            hard.push(Rule::NonPositiveIntercept { market });
        }
    }
    for (firm, &c) in costs.iter().enumerate() {
        if c <= 0.0 {
            hard.push(Rule::NonPositiveCost { firm });
        }
    }
    for (firm, &c) in costs.iter().enumerate() {
        for (market, &a) in intercepts.iter().enumerate() {
            if a < c {
                hard.push(Rule::InterceptBelowCost { firm, market });
            }
        }
    }
    if scale <= -1.0 {
        hard.push(Rule::SecondOrderCondition);
    }

    if !intercepts.is_empty() {
        let m = intercepts.len() as f64;
        if scale <= -1.0 / (2.0 * m) {
            report.soft_flags.push(Rule::ScaleBelowMarketBound);
        }
        let total: f64 = intercepts.iter().sum();
        if total > 0.0 {
            for (firm, &c) in costs.iter().enumerate() {
                if scale < -c / (2.0 * total) {
                    report.soft_flags.push(Rule::MarginalCostBound { firm });
                }
            }
        }
    }
    report
}

/// The `(N, M, a, c, d)` tuple defining one game. Only constructible when
/// [`validate`] reports no hard violations.
#[derive(Debug, Clone, PartialEq)]
pub struct GameConfig {
    intercepts: Vec<f64>,
    costs: Vec<f64>,
    scale: f64,
}

impl GameConfig {
    pub fn new(intercepts: Vec<f64>, costs: Vec<f64>, scale: f64) -> Result<Self> {
        let report = validate(&intercepts, &costs, scale);
        if !report.is_valid() {
            return Err(ModelError::Invalid(report));
        }
        Ok(Self { intercepts, costs, scale })
    }

    /// Same markets and firms under a different scale parameter.
    pub fn with_scale(&self, scale: f64) -> Result<Self> {
        Self::new(self.intercepts.clone(), self.costs.clone(), scale)
    }

    pub fn validate(&self) -> ValidationReport {
        validate(&self.intercepts, &self.costs, self.scale)
    }

    pub fn markets(&self) -> usize {
        self.intercepts.len()
    }

    pub fn firms(&self) -> usize {
        self.costs.len()
    }

    pub fn intercepts(&self) -> &[f64] {
        &self.intercepts
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn intercept(&self, market: usize) -> Result<f64> {
        self.intercepts.get(market).copied().ok_or(ModelError::IndexOutOfRange {
            what: "market",
            index: market,
            len: self.markets(),
        })
    }

    pub fn cost(&self, firm: usize) -> Result<f64> {
        self.costs.get(firm).copied().ok_or(ModelError::IndexOutOfRange {
            what: "firm",
            index: firm,
            len: self.firms(),
        })
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `q_j^i(0) = (a_j − c^i) / (2(1+d)·N)`: each firm's best response to an
    /// empty market, split evenly by the number of firms.
    pub fn default_initial_state(&self) -> StateVector {
        let n = self.firms();
        let denom = 2.0 * (1.0 + self.scale) * n as f64;
        let values = self.costs.iter().flat_map(|c| self.intercepts.iter().map(move |a| (a - c) / denom)).collect();
        StateVector::from_vec(n, self.markets(), values).expect("shape matches by construction")
    }

    /// Applies a market permutation: market `k` of the result is market
    /// `perm[k]` of `self`.
    pub fn permute_markets(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.markets())?;
        Ok(Self {
            intercepts: perm.iter().map(|&p| self.intercepts[p]).collect(),
            costs: self.costs.clone(),
            scale: self.scale,
        })
    }
}

pub(crate) fn check_permutation(perm: &[usize], len: usize) -> Result<()> {
    let mut seen = vec![false; len];
    if perm.len() != len {
        return Err(ModelError::InvalidArgument(format!("permutation has length {}, expected {len}", perm.len())));
    }
    for &p in perm {
        if p >= len || seen[p] {
            return Err(ModelError::InvalidArgument(format!("{perm:?} is not a permutation")));
        }
        seen[p] = true;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const REF_A: [f64; 3] = [200.0, 150.0, 100.0];
    const REF_C: [f64; 2] = [20.0, 40.0];

    #[test]
    fn reference_config_is_clean() {
        let r = validate(&REF_A, &REF_C, 0.2);
        assert!(r.hard_violations.is_empty());
        assert!(r.soft_flags.is_empty());
    }

    #[test]
    fn intercept_below_cost_is_hard() {
        let r = validate(&[100.0], &[150.0], 0.0);
        assert_eq!(r.hard_violations, vec![Rule::InterceptBelowCost { firm: 0, market: 0 }]);
        assert!(r.hard_violations[0].to_string().contains("intercept below marginal cost"));
        assert!(GameConfig::new(vec![100.0], vec![150.0], 0.0).is_err());
    }

    #[test]
    fn strong_economies_of_scale_are_only_soft() {
        // -0.2 < -1/(2*3)
        let r = validate(&REF_A, &REF_C, -0.2);
        assert!(r.is_valid());
        assert!(r.has_soft("scale-below-market-bound"));
        // -c/(2*450) = -0.0222.. and -0.0444.. for the two firms
        assert!(r.soft_flags.contains(&Rule::MarginalCostBound { firm: 0 }));
        assert!(r.soft_flags.contains(&Rule::MarginalCostBound { firm: 1 }));
    }

    #[test]
    fn marginal_cost_bound_uses_negative_threshold() {
        // firm 2 threshold is -40/900, firm 1 is -20/900
        let r = validate(&REF_A, &REF_C, -0.03);
        assert_eq!(r.soft_flags, vec![Rule::MarginalCostBound { firm: 0 }]);
    }

    #[test]
    fn every_hard_rule_is_reported() {
        let r = validate(&[0.0, 10.0], &[-1.0, 20.0], -1.0);
        let ids: Vec<_> = r.hard_violations.iter().map(Rule::id).collect();
        assert!(ids.contains(&"intercept-nonpositive"));
        assert!(ids.contains(&"cost-nonpositive"));
        assert!(ids.contains(&"intercept-below-cost"));
        assert!(ids.contains(&"second-order"));
        assert!(r.hard_violations.iter().all(Rule::is_hard));
        assert!(r.soft_flags.iter().all(|f| !f.is_hard()));
    }

    #[test]
    fn empty_and_non_finite_inputs() {
        assert!(validate(&[], &[1.0], 0.0).has_hard("no-markets"));
        assert!(validate(&[1.0], &[], 0.0).has_hard("no-firms"));
        assert!(validate(&[1.0], &[1.0], f64::NAN).has_hard("non-finite"));
    }

    #[test]
    fn default_initial_state_formula() {
        let g = GameConfig::new(REF_A.to_vec(), REF_C.to_vec(), 0.5).unwrap();
        let s = g.default_initial_state();
        // (200 - 20) / (2 * 1.5 * 2) = 30
        assert_eq!(s.get(0, 0), 30.0);
        assert_eq!(s.get(1, 2), 10.0);
    }

    #[test]
    fn bad_permutation_rejected() {
        let g = GameConfig::new(REF_A.to_vec(), REF_C.to_vec(), 0.1).unwrap();
        assert!(g.permute_markets(&[0, 0, 1]).is_err());
        assert!(g.permute_markets(&[0, 1]).is_err());
        assert_eq!(g.permute_markets(&[2, 0, 1]).unwrap().intercepts(), &[100.0, 200.0, 150.0]);
    }
}
