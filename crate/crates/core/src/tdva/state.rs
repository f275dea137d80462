use nalgebra::{DMatrix, DVector};

use super::{FreeKernel, QuarticPotential};
use crate::error::{require, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SqueezedState {
    pub grid_x: Vec<f64>,
    pub c: DVector<f64>,
    pub d: DVector<f64>,
    pub g: DMatrix<f64>,
    pub pi: DMatrix<f64>,
    pub t: f64,
}

impl SqueezedState {
    pub fn new(
        grid_x: Vec<f64>,
        c: DVector<f64>,
        d: DVector<f64>,
        g: DMatrix<f64>,
        pi: DMatrix<f64>,
        t: f64,
    ) -> Result<Self> {
        let s = SqueezedState { grid_x, c, d, g, pi, t };
        s.validate()?;
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.grid_x.len()
    }

    pub fn dx(&self) -> f64 {
        let n = self.n();
        (self.grid_x[n - 1] - self.grid_x[0]) / (n - 1) as f64
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        require(n >= 3, || format!("lattice needs at least 3 sites, got {n}"))?;
        require(self.c.len() == n && self.d.len() == n, || "C and D must match the grid".into())?;
        require(self.g.shape() == (n, n) && self.pi.shape() == (n, n), || {
            format!("G and Pi must be {n}x{n}")
        })?;
        let dx = self.dx();
        require(dx > 0.0, || "grid must be increasing".into())?;
        require(
            self.grid_x.windows(2).all(|w| ((w[1] - w[0]) - dx).abs() <= 1e-9 * dx),
            || "grid must be uniformly spaced".into(),
        )?;
        let scale = self.g.amax().max(self.pi.amax()).max(1.0);
        require(
            (&self.g - self.g.transpose()).amax() <= 1e-12 * scale
                && (&self.pi - self.pi.transpose()).amax() <= 1e-12 * scale,
            || "G and Pi must be symmetric".into(),
        )?;
        if self.g.clone().cholesky().is_none() {
            return Err(Error::AnsatzBreakdown { t: self.t });
        }
        Ok(())
    }

    /// Vacuum-dressed mean field: G = G0, Pi = 0.
    pub fn coherent(grid_x: Vec<f64>, c: DVector<f64>, d: DVector<f64>, kernel: &FreeKernel) -> Result<Self> {
        let n = grid_x.len();
        require(kernel.n() == n, || format!("kernel has {} sites, grid has {n}", kernel.n()))?;
        require(((grid_x[n - 1] - grid_x[0]) / (n - 1) as f64 - kernel.dx).abs() <= 1e-9 * kernel.dx, || {
            "kernel spacing differs from grid spacing".into()
        })?;
        Self::new(grid_x, c, d, kernel.g0.clone(), DMatrix::zeros(n, n), 0.0)
    }

    /// Boosted tanh kink between the wells centred at x0, ends clamped to the
    /// wells.
    pub fn kink(grid_x: Vec<f64>, pot: &QuarticPotential, kernel: &FreeKernel, x0: f64, v: f64) -> Result<Self> {
        require(pot.a > 0.0, || "kink needs a double well (A > 0)".into())?;
        require(v.abs() < 1.0, || format!("kink speed must be subluminal, got {v}"))?;
        let eta = pot.well();
        let gamma = 1.0 / (1.0 - v * v).sqrt();
        let k = (0.5 * pot.a).sqrt() * gamma;
        let n = grid_x.len();
        let mut c = DVector::from_iterator(n, grid_x.iter().map(|&x| eta * (k * (x - x0)).tanh()));
        let mut d = DVector::from_iterator(
            n,
            grid_x.iter().map(|&x| -v * eta * k / (k * (x - x0)).cosh().powi(2)),
        );
        c[0] = -eta;
        c[n - 1] = eta;
        d[0] = 0.0;
        d[n - 1] = 0.0;
        Self::coherent(grid_x, c, d, kernel)
    }
}
