use crate::error::{require, Error, Result};
use crate::units::DIMER_CHARGE;

/// Physical parameters of the chain, SI units throughout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MTParams {
    /// Dimer mass M (kg).
    pub dimer_mass: f64,
    /// Quadratic coefficient A (J/m^2), positive in the double-well phase.
    pub potential_a: f64,
    /// Quartic coefficient B (J/m^4).
    pub potential_b: f64,
    /// Harmonic stiffness k (J/m^2).
    pub stiffness: f64,
    /// Dimer spacing R0 (m).
    pub spacing: f64,
    /// Friction gamma (kg/s).
    pub friction: f64,
    /// Dimer charge q (C).
    pub charge: f64,
    /// Applied field E (V/m).
    pub field: f64,
    pub temperature: f64,
    pub critical_temperature: f64,
    /// Proportionality constant of the temperature law (J m^-2 K^-1).
    pub temper_const: f64,
}

impl MTParams {
    /// A phenomenological parameter set reproducing the usual microtubule
    /// magnitudes: sound speed 1 km/s, kink speed near 2 m/s, kink energy
    /// near 1 eV.
    pub fn reference() -> Self {
        let m = 1.8e-22;
        let r0 = 8e-9;
        let v0: f64 = 1.0e3;
        MTParams {
            dimer_mass: m,
            potential_a: 7.0e-4,
            potential_b: 6.0e15,
            stiffness: m * (v0 / r0).powi(2),
            spacing: r0,
            friction: 3.7e-11,
            charge: DIMER_CHARGE,
            field: 4.0e3,
            temperature: 299.0,
            critical_temperature: 300.0,
            temper_const: 7.0e-4,
        }
    }

    pub fn validate(&self) -> Result<()> {
        require(self.potential_b > 0.0, || format!("B must be positive, got {}", self.potential_b))?;
        require(self.dimer_mass > 0.0, || format!("M must be positive, got {}", self.dimer_mass))?;
        require(self.stiffness > 0.0, || format!("k must be positive, got {}", self.stiffness))?;
        require(self.spacing > 0.0, || format!("R0 must be positive, got {}", self.spacing))?;
        require(self.friction >= 0.0, || format!("gamma must be non-negative, got {}", self.friction))?;
        require(self.critical_temperature > 0.0, || {
            format!("Tc must be positive, got {}", self.critical_temperature)
        })?;
        let all = [
            self.dimer_mass,
            self.potential_a,
            self.potential_b,
            self.stiffness,
            self.spacing,
            self.friction,
            self.charge,
            self.field,
            self.temperature,
            self.critical_temperature,
            self.temper_const,
        ];
        require(all.iter().all(|x| x.is_finite()), || "parameters must be finite".into())
    }

    /// Sound speed v0 = sqrt(k/M) R0.
    pub fn sound_speed(&self) -> f64 {
        (self.stiffness / self.dimer_mass).sqrt() * self.spacing
    }

    /// Field scale sqrt(|A|/B) converting psi to u.
    pub fn well_scale(&self) -> f64 {
        (self.potential_a.abs() / self.potential_b).sqrt()
    }

    /// Dimensionless forcing q sqrt(B) |A|^(-3/2) E.
    pub fn sigma(&self) -> f64 {
        self.charge * self.potential_b.sqrt() * self.potential_a.abs().powf(-1.5) * self.field
    }

    /// Copy with A replaced by the temperature law.
    pub fn with_temperature_law(mut self) -> Self {
        self.potential_a =
            temperature_coefficient(self.temperature, self.critical_temperature, self.temper_const);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessParams {
    pub rho: f64,
    pub sigma: f64,
    /// Inverse kink width (1/m).
    pub alpha: f64,
    pub v: f64,
    pub v0: f64,
    /// Boost factor rho/2.
    pub gamma_vs: f64,
    /// Boost velocity squared 1 - 1/gamma_vs^2; negative below the reality
    /// bound and -inf for a frictionless kink.
    pub vs_squared: f64,
}

/// A = -|c| (T - Tc).
pub fn temperature_coefficient(t: f64, tc: f64, temper_const: f64) -> f64 {
    -temper_const.abs() * (t - tc)
}

/// Reduce the equation of motion for a wave moving at `v` to the
/// dimensionless ODE psi'' + rho psi' - psi^3 + psi + sigma = 0.
pub fn reduce(params: &MTParams, v: f64) -> Result<DimensionlessParams> {
    params.validate()?;
    let a = params.potential_a;
    if a <= 0.0 {
        return Err(Error::NoDoubleWell { a });
    }
    let v0 = params.sound_speed();
    require(v >= 0.0, || format!("kink speed must be non-negative, got {v}"))?;
    if v >= v0 {
        return Err(Error::Supersonic { v, v0 });
    }
    let denom = params.dimer_mass * (v0 - v) * (v0 + v);
    let rho = params.friction * v / (a * denom).sqrt();
    let gamma_vs = rho / 2.0;
    Ok(DimensionlessParams {
        rho,
        sigma: params.sigma(),
        alpha: (a / denom).sqrt(),
        v,
        v0,
        gamma_vs,
        vs_squared: super::boost_velocity_squared(gamma_vs),
    })
}
