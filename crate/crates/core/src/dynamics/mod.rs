//! Local stability of the equilibrium and orbit structure across `d`.

mod bifurcation;
mod region;
mod spectrum;

pub use bifurcation::{BifurcationCell, BifurcationData, BifurcationScan};
pub use region::{stability_interval, stability_zone_scan, StabilityInterval};
pub use spectrum::{
    build_jacobian, characteristic_product, classify_stability, eigenvalues_closed_form, spectral_radius,
    SpectrumReport, StabilityClass, NEUTRALITY_TOLERANCE,
};
