//! Bifurcation scans over the scale parameter `d`.

use rayon::prelude::*;

use crate::error::{ModelError, Result};
use crate::model::{nash_linear_solve, GameConfig, IterateMode, StateVector};

/// Parameters of a scan. `initial = None` starts every cell from that cell's
/// [`GameConfig::default_initial_state`].
#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationScan {
    pub d_lo: f64,
    pub d_hi: f64,
    pub points: usize,
    pub transient: usize,
    pub samples: usize,
    pub mode: IterateMode,
    pub initial: Option<StateVector>,
}

impl BifurcationScan {
    pub const DEFAULT_POINTS: usize = 1000;
    pub const DEFAULT_TRANSIENT: usize = 1000;
    pub const DEFAULT_SAMPLES: usize = 200;

    pub fn new(d_lo: f64, d_hi: f64) -> Self {
        Self {
            d_lo,
            d_hi,
            points: Self::DEFAULT_POINTS,
            transient: Self::DEFAULT_TRANSIENT,
            samples: Self::DEFAULT_SAMPLES,
            mode: IterateMode::Clipped,
            initial: None,
        }
    }

    pub fn points(mut self, points: usize) -> Self {
        self.points = points;
        self
    }

    pub fn transient(mut self, transient: usize) -> Self {
        self.transient = transient;
        self
    }

    pub fn samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }

    pub fn mode(mut self, mode: IterateMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn initial(mut self, initial: StateVector) -> Self {
        self.initial = Some(initial);
        self
    }

    /// Evenly spaced grid including both endpoints.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.points;
        let span = self.d_hi - self.d_lo;
        (0..n).map(|k| if k + 1 == n { self.d_hi } else { self.d_lo + span * k as f64 / (n - 1) as f64 }).collect()
    }

    fn check(&self) -> Result<()> {
        if !(self.d_lo.is_finite() && self.d_hi.is_finite()) || self.d_lo >= self.d_hi {
            return Err(ModelError::InvalidArgument(format!(
                "scan range must satisfy d_lo < d_hi, got [{}, {}]",
                self.d_lo, self.d_hi
            )));
        }
        if self.points < 2 {
            return Err(ModelError::InvalidArgument("a scan needs at least 2 points".into()));
        }
        if self.samples == 0 {
            return Err(ModelError::InvalidArgument("samples must be >= 1".into()));
        }
        if self.d_lo <= -1.0 {
            return Err(ModelError::InvalidArgument(format!(
                "every scanned d must exceed -1, got d_lo = {}",
                self.d_lo
            )));
        }
        Ok(())
    }

    /// Runs the scan with `template`'s markets and firms; its own `d` is
    /// ignored. Cells run in parallel, results keep grid order.
    pub fn run(&self, template: &GameConfig) -> Result<BifurcationData> {
        self.check()?;
        if let Some(init) = &self.initial {
            if init.firms() != template.firms() || init.markets() != template.markets() {
                return Err(ModelError::ShapeMismatch {
                    firms: template.firms(),
                    markets: template.markets(),
                    found_firms: init.firms(),
                    found_markets: init.markets(),
                });
            }
        }
        let cells = self.grid().into_par_iter().map(|d| self.run_cell(template, d)).collect::<Result<Vec<_>>>()?;
        Ok(BifurcationData { firms: template.firms(), markets: template.markets(), scan: self.clone(), cells })
    }

    fn run_cell(&self, template: &GameConfig, d: f64) -> Result<BifurcationCell> {
        let config = template.with_scale(d)?;
        let initial = self.initial.clone().unwrap_or_else(|| config.default_initial_state());
        let total = self.transient + self.samples;
        let trajectory = config.simulate(&initial, total, self.mode)?;
        let divergent = trajectory.is_divergent();
        let samples =
            if divergent { Vec::new() } else { trajectory.states[trajectory.states.len() - self.samples..].to_vec() };
        Ok(BifurcationCell {
            d,
            divergent,
            singular_equilibrium: matches!(nash_linear_solve(&config), Err(ModelError::SingularSystem { .. })),
            samples,
        })
    }
}

/// Post-transient orbit samples at one value of `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationCell {
    pub d: f64,
    /// The orbit crossed the divergence threshold; `samples` is empty.
    pub divergent: bool,
    /// No interior equilibrium exists at this `d` (singular first-order system).
    pub singular_equilibrium: bool,
    pub samples: Vec<StateVector>,
}

impl BifurcationCell {
    pub fn series(&self, firm: usize, market: usize) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(move |s| s.get(firm, market))
    }

    /// `max − min` of one coordinate's samples (0 when there are none).
    pub fn spread(&self, firm: usize, market: usize) -> f64 {
        let (lo, hi) =
            self.series(firm, market).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        if lo > hi {
            0.0
        } else {
            hi - lo
        }
    }

    /// Largest spread over all coordinates.
    pub fn max_spread(&self) -> f64 {
        let Some(first) = self.samples.first() else { return 0.0 };
        let (n, m) = (first.firms(), first.markets());
        (0..n).flat_map(|i| (0..m).map(move |j| (i, j))).map(|(i, j)| self.spread(i, j)).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationData {
    pub firms: usize,
    pub markets: usize,
    pub scan: BifurcationScan,
    pub cells: Vec<BifurcationCell>,
}
