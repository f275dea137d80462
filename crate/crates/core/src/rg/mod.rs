//! Liouville-dressed renormalization-group flows and the stochastic models
//! built on them.

mod flow;
mod fokker_planck;
mod growth;
mod rg_kink;
mod selection;

pub use flow::{c_flow_check, c_flow_excess, flow_step, q_ctheorem, q_friction, CouplingState, FlowSpec};
pub use fokker_planck::{fokker_planck_evolve, fp_step_bound, GridDistribution};
pub use growth::{
    growth_density, sawtooth_series, GrowthSeries, InitialPhase, Regime, SawtoothResult,
    TelegraphParams,
};
pub use rg_kink::{rg_kink, rg_kink_as_printed, rg_kink_slope, RGKinkSpec};
pub use selection::{
    instanton_k_shift, jointly_satisfiable, k_renormalized, min_vertices, selection_rules,
    SelectionReport,
};
