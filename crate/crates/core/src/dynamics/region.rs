use crate::error::{ModelError, Result};

/// Open interval of `d` on which the duopoly equilibrium is locally stable
/// for a given number of markets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityInterval {
    pub markets: usize,
    pub d_lower: f64,
    /// `+∞` for one or two markets.
    pub d_upper: f64,
}

impl StabilityInterval {
    pub fn contains(&self, d: f64) -> bool {
        self.d_lower < d && d < self.d_upper
    }

    pub fn width(&self) -> f64 {
        self.d_upper - self.d_lower
    }
}

/// * `m ≥ 3`: `(−1/(2m), 1/(2(m−2)))`
/// * `m = 2`: `(−1/4, ∞)`
/// * `m = 1`: `(−1/2, ∞)`, from `|±1/(2(1+d))| < 1`
pub fn stability_interval(markets: usize) -> Result<StabilityInterval> {
    let (d_lower, d_upper) = match markets {
        0 => return Err(ModelError::InvalidArgument("market count must be >= 1".into())),
        1 => (-0.5, f64::INFINITY),
        2 => (-0.25, f64::INFINITY),
        m => {
            let m = m as f64;
            (-1.0 / (2.0 * m), 1.0 / (2.0 * (m - 2.0)))
        }
    };
    Ok(StabilityInterval { markets, d_lower, d_upper })
}

/// One interval per market count in `m_min..=m_max`.
pub fn stability_zone_scan(m_min: usize, m_max: usize) -> Result<Vec<StabilityInterval>> {
    if m_min == 0 || m_min > m_max {
        return Err(ModelError::InvalidArgument(format!(
            "market range must satisfy 1 <= m_min <= m_max, got {m_min}..{m_max}"
        )));
    }
    (m_min..=m_max).map(stability_interval).collect()
}
