//! Finite-dimensional open-system dynamics: the Lindblad equation in the
//! form rho' = i[rho, H] - sum {B^dag B, rho} + 2 sum B rho B^dag, its
//! stochastic unraveling, channel entropies and collapse-time estimates.

mod collapse;
mod entropy;
mod fit;
mod ito;
mod lindblad;
mod state;

pub use collapse::{
    collapse_time_pointlike, collapse_time_string, localization_ratio, localization_time,
    pointlike_n_for_time, CollapseInputs,
};
pub use entropy::{dispersion_entropy, entropy_rate_check, entropy_rate_rhs, EntropyRateReport};
pub use fit::{coherence_decay_fit, energy_statistics, DecayFit, EnergySeries, PairExponent};
pub use ito::{ensemble_density, ensemble_map, ito_trajectory, ItoTrajectory};
pub use lindblad::{lindblad_evolve, lindblad_rhs, lindblad_trace};
pub use state::{trace_norm, ChannelProjectors, DensityMatrix, OpenSystem, StateVector};

pub type C64 = num_complex::Complex64;
pub type CMatrix = nalgebra::DMatrix<C64>;
pub type CVector = nalgebra::DVector<C64>;
