//! Multi-market Cournot oligopoly with globally coupled quadratic costs.
//!
//! `N` firms sell in `M` separated markets with linear inverse demand
//! `P_j = a_j − Q_j`. Each firm pays `c^i·Q^i + d·(Q^i)²` on its *total*
//! output, so the scale parameter `d` couples its decisions across markets
//! (economies of scale for `d < 0`, diseconomies for `d > 0`).
//!
//! The crate is split into:
//!
//! * [`model`]: the game itself, naive best-response dynamics, equilibria and
//!   the single-market Theocharis/Fisher baselines;
//! * [`dynamics`]: equilibrium Jacobian, spectra, stability regions and
//!   bifurcation scans;
//! * [`numerics`]: the dense solver and symmetric eigensolver both of the
//!   above rely on.

pub mod dynamics;
pub mod error;
pub mod model;
pub mod numerics;

pub use error::{ModelError, Result};
