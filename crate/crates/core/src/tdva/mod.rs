//! Gaussian (squeezed-state) variational dynamics of the quartic chain.
//!
//! The lattice carries one canonical pair per site,
//! H = sum_i [p_i^2/2 + (u_{i+1} - u_i)^2 / (2 dx^2) + U(u_i)] with
//! U(u) = -A u^2/2 + B u^4/4. The mean field (C, D) has clamped end sites;
//! the fluctuations (G, Pi) live on the periodic lattice.
//!
//! With w_i = (G_ii - G0_ii)/2 the energy is
//!
//! E = sum_i [D_i^2/2 + M0(C_i, w_i)] + sum_bonds (C_{i+1} - C_i)^2/(2 dx^2)
//!   + Tr G^-1/8 + 2 Tr(Pi G Pi) + Tr(L G)/2 - Tr G0^-1/8 - Tr(L G0)/2
//!
//! where L is the periodic lattice Laplacian (2 - S - S^T)/dx^2, so the free
//! vacuum has zero energy. Hamilton's equations for (G, Pi), with the matrix
//! entries as coordinates, are
//!
//! dG/dt  = 2 (Pi G + G Pi)
//! dPi/dt = G^-2/8 - 2 Pi^2 - L/2 - diag(M2(C_i, w_i))/2
//!
//! using dM0/dw = M2. The mean field obeys dD/dt = lap C - M1(C, w),
//! dC/dt = D.

mod dynamics;
mod kernel;
mod potential;
mod state;

pub use dynamics::{
    modified_soliton_residual, quantum_energy, tdva_evolve, tdva_rates, tdva_step, tdva_step_bound, Mode,
    SolitonResidual, SqueezedRates,
};
pub use kernel::{free_two_point, periodic_laplacian, FreeKernel};
pub use potential::{smeared_derivative, Polynomial, QuarticPotential};
pub use state::SqueezedState;
