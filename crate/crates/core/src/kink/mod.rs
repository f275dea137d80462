//! Classical displacement-field model of a microtubule protofilament: double
//! well potential, damped Klein-Gordon chain, and its exact kink solutions.

mod charges;
mod cubic;
mod params;
mod pde;
mod profile;

pub use charges::{
    boost_velocity_squared, central_charges, friction_to_deficit, reality_check, string_length,
    wick_matter_charge, Deficit,
};
pub use cubic::{solve_cubic, KinkRoots, SIGMA_CRITICAL};
pub use params::{reduce, temperature_coefficient, DimensionlessParams, MTParams};
pub use pde::{
    evolve_pde, evolve_pde_observed, field_energy, shape_drift, step_bounds,
    FieldState, KleinGordon, TravelingKink,
};
pub use profile::{
    damped_profile, kink_energetics, kink_profile, kink_velocity, residual_ode, transfer_time,
    KinkEnergetics, ProfileDerivs,
};
