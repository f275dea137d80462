//! One-coupling Fokker-Planck equation
//! dP/dtau = D(tau) d^2P/dlambda^2 + d/dlambda(beta P),  D = Q^6 / (8 pi^2),
//! on a vertex-centred finite-volume grid with no-flux walls.

use crate::error::{require, Error, Result};
use crate::numerics::trapezoid;
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub struct GridDistribution {
    pub lambda: Vec<f64>,
    pub p: Vec<f64>,
    pub tau: f64,
}

impl GridDistribution {
    pub fn new(lambda: Vec<f64>, p: Vec<f64>, tau: f64) -> Result<Self> {
        let d = GridDistribution { lambda, p, tau };
        d.validate()?;
        Ok(d)
    }

    fn validate(&self) -> Result<()> {
        let n = self.lambda.len();
        require(n >= 3 && self.p.len() == n, || "grid and P must have equal length >= 3".into())?;
        let h = self.h();
        require(h > 0.0, || "grid must be increasing".into())?;
        require(
            self.lambda.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h),
            || "grid must be uniform".into(),
        )?;
        require(self.p.iter().all(|&p| p >= 0.0 && p.is_finite()), || "P must be non-negative".into())
    }

    /// Normalized Gaussian sampled on the grid.
    pub fn gaussian(lambda: Vec<f64>, mean: f64, sd: f64) -> Result<Self> {
        require(sd > 0.0, || format!("sd must be positive, got {sd}"))?;
        let raw: Vec<f64> = lambda.iter().map(|&l| (-0.5 * ((l - mean) / sd).powi(2)).exp()).collect();
        let h = (lambda[lambda.len() - 1] - lambda[0]) / (lambda.len() - 1) as f64;
        let z = trapezoid(&raw, h);
        GridDistribution::new(lambda, raw.iter().map(|p| p / z).collect(), 0.0)
    }

    pub fn h(&self) -> f64 {
        (self.lambda[self.lambda.len() - 1] - self.lambda[0]) / (self.lambda.len() - 1) as f64
    }

    /// Trapezoidal integral of P, which the scheme conserves exactly.
    pub fn mass(&self) -> f64 {
        trapezoid(&self.p, self.h())
    }

    pub fn mean(&self) -> f64 {
        let w: Vec<f64> = self.lambda.iter().zip(&self.p).map(|(l, p)| l * p).collect();
        trapezoid(&w, self.h()) / self.mass()
    }

    pub fn variance(&self) -> f64 {
        let mu = self.mean();
        let w: Vec<f64> = self.lambda.iter().zip(&self.p).map(|(l, p)| (l - mu).powi(2) * p).collect();
        trapezoid(&w, self.h()) / self.mass()
    }
}

fn minmod(a: f64, b: f64) -> f64 {
    if a * b <= 0.0 {
        0.0
    } else if a.abs() < b.abs() {
        a
    } else {
        b
    }
}

fn diffusion(q: f64) -> f64 {
    q.powi(6) / (8.0 * PI * PI)
}

/// Largest step keeping the explicit update positive,
/// 1 / (4 max|beta| / h + 4 D / h^2).
pub fn fp_step_bound(h: f64, max_beta: f64, q: f64) -> f64 {
    let rate = 4.0 * max_beta / h + 4.0 * diffusion(q) / (h * h);
    if rate == 0.0 {
        f64::INFINITY
    } else {
        1.0 / rate
    }
}

/// Forward-Euler steps with MUSCL-minmod upwinding for the drift.
pub fn fokker_planck_evolve<B, Q>(
    dist: &GridDistribution,
    beta: B,
    q_profile: Q,
    dtau: f64,
    n_steps: usize,
) -> Result<GridDistribution>
where
    B: Fn(f64) -> f64,
    Q: Fn(f64) -> f64,
{
    dist.validate()?;
    require(dtau > 0.0, || format!("dtau must be positive, got {dtau}"))?;
    let n = dist.p.len();
    let h = dist.h();
    // Drift velocity c = -beta at the n - 1 interfaces.
    let c: Vec<f64> = dist.lambda.windows(2).map(|w| -beta(0.5 * (w[0] + w[1]))).collect();
    let max_beta = c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut vol = vec![h; n];
    vol[0] = 0.5 * h;
    vol[n - 1] = 0.5 * h;

    let mut p = dist.p.clone();
    let mut flux = vec![0.0; n - 1];
    let mut slope = vec![0.0; n];
    for step in 0..n_steps {
        let tau = dist.tau + step as f64 * dtau;
        let q = q_profile(tau);
        let bound = fp_step_bound(h, max_beta, q);
        if dtau > bound {
            return Err(Error::StepBound { dt: dtau, bound, reason: "Fokker-Planck positivity" });
        }
        let d = diffusion(q);
        for i in 1..n - 1 {
            slope[i] = minmod(p[i] - p[i - 1], p[i + 1] - p[i]);
        }
        for i in 0..n - 1 {
            let up = if c[i] >= 0.0 { p[i] + 0.5 * slope[i] } else { p[i + 1] - 0.5 * slope[i + 1] };
            flux[i] = c[i] * up - d * (p[i + 1] - p[i]) / h;
        }
        for i in 0..n {
            let fin = if i > 0 { flux[i - 1] } else { 0.0 };
            let fout = if i < n - 1 { flux[i] } else { 0.0 };
            p[i] -= dtau / vol[i] * (fout - fin);
        }
        if !p.iter().all(|v| v.is_finite()) {
            return Err(Error::BlowUp { step: step + 1 });
        }
    }
    Ok(GridDistribution { lambda: dist.lambda.clone(), p, tau: dist.tau + n_steps as f64 * dtau })
}
