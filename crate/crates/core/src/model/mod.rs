//! The multi-market game, its dynamics and equilibria, plus the
//! single-market baselines.

mod baseline;
mod config;
mod equilibrium;
mod game;
mod state;

pub use baseline::{BaselineConfig, BaselineEquilibrium};
pub use config::{validate, GameConfig, Rule, ValidationReport};
pub use equilibrium::{foc_system, nash_duopoly_closed_form, nash_linear_solve};
pub use state::{IterateMode, StateVector, Trajectory, TrajectoryClass, DIVERGENCE_THRESHOLD};
