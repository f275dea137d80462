use crate::error::{Error, Result};
use std::f64::consts::{PI, SQRT_2};

/// Largest |sigma| with three distinct real roots, 2/(3 sqrt 3).
pub const SIGMA_CRITICAL: f64 = 0.384_900_179_459_750_5;

/// Real roots of psi^3 - psi - sigma, ascending: a < d < b.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinkRoots {
    pub a: f64,
    pub d: f64,
    pub b: f64,
}

impl KinkRoots {
    /// Friction for which the kink connecting a and b exists, 3|d|/sqrt 2.
    pub fn heteroclinic_rho(&self) -> f64 {
        3.0 * self.d.abs() / SQRT_2
    }

    /// sigma recovered from the roots, a b d.
    pub fn sigma(&self) -> f64 {
        self.a * self.b * self.d
    }
}

/// Trigonometric solution of the depressed cubic, polished by Newton.
pub fn solve_cubic(sigma: f64) -> Result<KinkRoots> {
    if !sigma.is_finite() || sigma.abs() >= SIGMA_CRITICAL {
        return Err(Error::DegenerateCubic { sigma });
    }
    // psi = (2/sqrt3) cos(theta), cos(3 theta) = (3 sqrt3 / 2) sigma
    let r = 2.0 / 3f64.sqrt();
    let phi = (1.5 * 3f64.sqrt() * sigma).clamp(-1.0, 1.0).acos() / 3.0;
    let mut roots = [0, 1, 2].map(|k| r * (phi - 2.0 * PI * k as f64 / 3.0).cos());
    for x in roots.iter_mut() {
        for _ in 0..3 {
            let f = *x * *x * *x - *x - sigma;
            let fp = 3.0 * *x * *x - 1.0;
            if fp != 0.0 {
                *x -= f / fp;
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    Ok(KinkRoots { a: roots[0], d: roots[1], b: roots[2] })
}
