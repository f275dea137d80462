use crate::error::{require, Result};

/// Dense real polynomial, coefficients in ascending powers.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial(pub Vec<f64>);

impl Polynomial {
    pub fn eval(&self, z: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial(self.0.iter().enumerate().skip(1).map(|(k, &c)| k as f64 * c).collect())
    }

    /// exp(w d^2/dz^2) applied to the polynomial. The series terminates after
    /// deg/2 terms.
    pub fn smear(&self, w: f64) -> Polynomial {
        let mut out = self.0.clone();
        let mut term = self.clone();
        let mut factor = 1.0;
        let mut j = 0.0;
        loop {
            term = term.derivative().derivative();
            if term.0.is_empty() {
                break;
            }
            j += 1.0;
            factor *= w / j;
            for (o, c) in out.iter_mut().zip(&term.0) {
                *o += factor * c;
            }
        }
        Polynomial(out)
    }
}

/// U(u) = -A u^2/2 + B u^4/4 in lattice units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticPotential {
    pub a: f64,
    pub b: f64,
}

impl QuarticPotential {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        require(b > 0.0 && b.is_finite(), || format!("B must be positive, got {b}"))?;
        require(a.is_finite(), || format!("A must be finite, got {a}"))?;
        Ok(QuarticPotential { a, b })
    }

    pub fn polynomial(&self) -> Polynomial {
        Polynomial(vec![0.0, 0.0, -0.5 * self.a, 0.0, 0.25 * self.b])
    }

    /// Well position sqrt(A/B) (zero when A <= 0).
    pub fn well(&self) -> f64 {
        (self.a.max(0.0) / self.b).sqrt()
    }

    /// Default regulator mass sqrt(A).
    pub fn default_mass(&self) -> f64 {
        self.a.sqrt()
    }

    /// (M0, M1, M2) at (z, w) in closed form.
    pub fn smeared(&self, z: f64, w: f64) -> (f64, f64, f64) {
        let (a, b) = (self.a, self.b);
        let z2 = z * z;
        (
            -0.5 * a * (z2 + 2.0 * w) + 0.25 * b * (z2 * z2 + 12.0 * w * z2 + 12.0 * w * w),
            -a * z + b * z2 * z + 6.0 * b * w * z,
            -a + 3.0 * b * z2 + 6.0 * b * w,
        )
    }
}

/// n-th derivative of the potential, Gaussian-smeared with width w.
pub fn smeared_derivative(pot: &QuarticPotential, n: usize, z: f64, w: f64) -> f64 {
    let mut p = pot.polynomial();
    for _ in 0..n {
        p = p.derivative();
    }
    p.smear(w).eval(z)
}
