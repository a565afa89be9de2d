//! Synthetic data: complex Gaussian ensembles and a dipole-based antenna
//! measurement model with calibrated noise.

pub mod antenna;
pub mod dipole;
mod gaussian;
mod noise;
pub mod scenario;

pub use antenna::{
    build_forward_operator, condition_number, far_field_cut, horn_like_coefficients, tangential_box_dipoles,
    DipoleAut, FarFieldCut, Polarization, ProbeArrayGeometry, SamplingPlan,
};
pub use dipole::{dipole_field, wavenumber, Dipole, DipoleKind};
pub use gaussian::{complex_normal, sample_gaussian_instance, GaussianInstance};
pub use noise::add_noise;
pub use scenario::{AntennaScenario, AntennaScenarioConfig};
