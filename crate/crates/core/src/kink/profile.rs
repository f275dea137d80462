use super::{reduce, KinkRoots, MTParams};
use crate::error::{require, Error, Result};
use std::f64::consts::SQRT_2;

/// psi(xi) = a + (b - a) / (1 + exp((b - a) xi / sqrt 2)); runs from b at
/// -inf to a at +inf.
pub fn kink_profile(xi: f64, roots: &KinkRoots) -> f64 {
    eval(xi, roots).psi
}

/// Profile value with exact first and second derivatives.
#[derive(Debug, Clone, Copy)]
pub struct ProfileDerivs {
    pub psi: f64,
    pub dpsi: f64,
    pub d2psi: f64,
}

fn eval(xi: f64, r: &KinkRoots) -> ProfileDerivs {
    let w = r.b - r.a;
    let kappa = w / SQRT_2;
    let f = 1.0 / (1.0 + (kappa * xi).exp());
    let g = 1.0 / (1.0 + (-kappa * xi).exp()); // 1 - f without cancellation
    ProfileDerivs {
        psi: r.a + w * f,
        dpsi: -w * kappa * f * g,
        d2psi: w * kappa * kappa * f * g * (g - f),
    }
}

/// Kink of the damped equation with positive friction 3|d|/sqrt 2.
///
/// For d <= 0 this is `kink_profile` itself; for d > 0 the same front must be
/// mirrored, psi(-xi), to travel with positive friction.
pub fn damped_profile(xi: f64, roots: &KinkRoots) -> ProfileDerivs {
    if roots.d <= 0.0 {
        eval(xi, roots)
    } else {
        let p = eval(-xi, roots);
        ProfileDerivs { psi: p.psi, dpsi: -p.dpsi, d2psi: p.d2psi }
    }
}

/// max |psi'' + rho psi' - psi^3 + psi + sigma| over the samples, using the
/// damped profile and its exact derivatives.
pub fn residual_ode(roots: &KinkRoots, rho: f64, sigma: f64, xi_samples: &[f64]) -> f64 {
    xi_samples
        .iter()
        .map(|&xi| {
            let p = damped_profile(xi, roots);
            (p.d2psi + rho * p.dpsi - p.psi.powi(3) + p.psi + sigma).abs()
        })
        .fold(0.0, f64::max)
}

/// v = v0 [1 + 2 gamma^2 / (9 d^2 M A)]^(-1/2).
pub fn kink_velocity(params: &MTParams, roots: &KinkRoots) -> Result<f64> {
    params.validate()?;
    let a = params.potential_a;
    if a <= 0.0 {
        return Err(Error::NoDoubleWell { a });
    }
    let v0 = params.sound_speed();
    let g = params.friction;
    if g == 0.0 {
        return Ok(v0);
    }
    if roots.d == 0.0 {
        return Err(Error::NoPropagatingKink);
    }
    let x = 2.0 * g * g / (9.0 * roots.d * roots.d * params.dimer_mass * a);
    Ok(v0 / (1.0 + x).sqrt())
}

/// Time L/v for a kink to traverse a microtubule of length L.
pub fn transfer_time(length: f64, v: f64) -> Result<f64> {
    require(length > 0.0, || format!("length must be positive, got {length}"))?;
    require(v > 0.0, || format!("speed must be positive, got {v}"))?;
    Ok(length / v)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinkEnergetics {
    /// Binding plus resonance energy (J).
    pub binding_plus_resonant: f64,
    pub total_energy: f64,
    pub effective_mass: f64,
}

pub fn kink_energetics(params: &MTParams, v: f64) -> Result<KinkEnergetics> {
    let dimless = reduce(params, v)?;
    let (a, b) = (params.potential_a, params.potential_b);
    let delta = 2.0 * SQRT_2 / 3.0 * a * a / b + SQRT_2 / 3.0 * params.stiffness * a / b;
    let m_star = 4.0 / (3.0 * SQRT_2) * params.dimer_mass * a * dimless.alpha
        / (params.spacing * b);
    Ok(KinkEnergetics {
        binding_plus_resonant: delta,
        total_energy: delta + 0.5 * m_star * v * v,
        effective_mass: m_star,
    })
}
