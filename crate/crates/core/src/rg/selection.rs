//! Vertex-counting selection rules and instanton shifts of the level k.

use crate::error::{require, Error, Result};
use std::f64::consts::SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectionReport {
    pub equality_holds: bool,
    pub inequality_holds: bool,
    pub allowed: bool,
    /// j - [m/3 - 1 + (N - 2)/2]
    pub equality_residual: f64,
    pub j_predicted: f64,
    /// (N - 5)/4
    pub threshold: f64,
    /// Sum of the first N - 1 momenta, (N - 2)/sqrt 2.
    pub momentum_sum: f64,
    pub p_last: f64,
}

/// j = m/3 - 1 + (N - 2)/2 and j >= (N - 5)/4.
pub fn selection_rules(n: u32, j: f64, m: f64) -> Result<SelectionReport> {
    require(n >= 3, || format!("N must be at least 3, got {n}"))?;
    let nf = n as f64;
    let j_predicted = m / 3.0 - 1.0 + 0.5 * (nf - 2.0);
    let threshold = 0.25 * (nf - 5.0);
    let residual = j - j_predicted;
    let equality_holds = residual.abs() <= 1e-12 * j_predicted.abs().max(1.0);
    let inequality_holds = j >= threshold;
    Ok(SelectionReport {
        equality_holds,
        inequality_holds,
        allowed: equality_holds && inequality_holds,
        equality_residual: residual,
        j_predicted,
        threshold,
        momentum_sum: (nf - 2.0) / SQRT_2,
        p_last: -(nf - 2.0) / SQRT_2,
    })
}

/// Combining both rules at fixed m: allowed iff m/3 + N/4 >= 3/4.
pub fn jointly_satisfiable(n: u32, m: f64) -> bool {
    n >= 3 && m / 3.0 + n as f64 / 4.0 >= 0.75
}

/// Smallest real N admitted at fixed m, 3 - 4m/3 (a lower bound).
pub fn min_vertices(m: f64) -> f64 {
    3.0 - 4.0 * m / 3.0
}

/// k -> k - 2 pi k^2 d'.
pub fn instanton_k_shift(k: f64, d_prime: f64) -> Result<f64> {
    if k <= 2.0 {
        return Err(Error::AdmSingular { k });
    }
    Ok(k - 2.0 * std::f64::consts::PI * k * k * d_prime)
}

/// k_R = k (Omega/a^2)^(c beta T0), normalized to k at Omega/a^2 = 1.
pub fn k_renormalized(k: f64, omega_over_a2: f64, beta_i: f64, t0: f64, c: f64) -> Result<f64> {
    if k <= 2.0 {
        return Err(Error::AdmSingular { k });
    }
    require(omega_over_a2 > 0.0, || format!("Omega/a^2 must be positive, got {omega_over_a2}"))?;
    Ok(k * omega_over_a2.powf(c * beta_i * t0))
}
