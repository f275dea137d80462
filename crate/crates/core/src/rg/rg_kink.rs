//! Travelling kink of the Wilson-scheme flow T' = a2 T + a4 T^2.

use crate::error::{require, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RGKinkSpec {
    pub a2: f64,
    pub a4: f64,
    /// Cubic coefficient A3 of P(T).
    pub a3_cubic: f64,
}

impl RGKinkSpec {
    pub fn new(a2: f64, a4: f64, a3_cubic: f64) -> Result<Self> {
        require(a4 != 0.0, || "a4 must be non-zero".into())?;
        require(a2.is_finite() && a4.is_finite() && a3_cubic.is_finite(), || "non-finite coefficients".into())?;
        Ok(RGKinkSpec { a2, a4, a3_cubic })
    }

    /// u = (A3 - 3 a2 a4) / a4
    pub fn u_wave(&self) -> f64 {
        (self.a3_cubic - 3.0 * self.a2 * self.a4) / self.a4
    }

    /// R(T) = a2 T + a4 T^2
    pub fn beta(&self, t: f64) -> f64 {
        self.a2 * t + self.a4 * t * t
    }

    /// Zeros of R: 0 and -a2/a4.
    pub fn fixed_points(&self) -> (f64, f64) {
        (0.0, -self.a2 / self.a4)
    }
}

fn profile(spec: &RGKinkSpec, sign: f64, x: f64, t: f64) -> f64 {
    let xi = x - spec.u_wave() * t;
    (sign * spec.a2 * (0.5 * spec.a2 * xi).tanh() - spec.a2) / (2.0 * spec.a4)
}

/// T(x - ut) = -(a2 / 2a4) [1 + tanh(a2 (x - ut) / 2)], which solves
/// dT/dxi = R(T) for every sign of a2 a4.
pub fn rg_kink(spec: &RGKinkSpec, x: f64, t: f64) -> f64 {
    profile(spec, -1.0, x, t)
}

/// The same family with the tanh coefficient sgn(a2 a4); it solves
/// dT/dxi = R(T) only when a2 a4 < 0.
pub fn rg_kink_as_printed(spec: &RGKinkSpec, x: f64, t: f64) -> f64 {
    profile(spec, (spec.a2 * spec.a4).signum(), x, t)
}

/// Exact dT/dxi of `rg_kink`.
pub fn rg_kink_slope(spec: &RGKinkSpec, x: f64, t: f64) -> f64 {
    let xi = x - spec.u_wave() * t;
    let th = (0.5 * spec.a2 * xi).tanh();
    -spec.a2 * spec.a2 / (4.0 * spec.a4) * (1.0 - th * th)
}
