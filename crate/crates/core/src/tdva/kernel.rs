use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{require, Error, Result};

/// Vacuum two-point function of the free periodic lattice with mass m_eff.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeKernel {
    pub g0: DMatrix<f64>,
    /// Exact inverse from the same mode sum.
    pub g0_inv: DMatrix<f64>,
    pub laplacian: DMatrix<f64>,
    pub m_eff: f64,
    pub dx: f64,
}

impl FreeKernel {
    pub fn n(&self) -> usize {
        self.g0.nrows()
    }

    /// Largest free mode frequency.
    pub fn omega_max(&self) -> f64 {
        let n = self.n();
        (0..n).map(|j| omega(j, n, self.m_eff, self.dx)).fold(0.0, f64::max)
    }

    /// Tr G0^-1 / 8 + Tr(L G0) / 2, the subtracted vacuum constant.
    pub fn vacuum_constant(&self) -> f64 {
        self.g0_inv.trace() / 8.0 + 0.5 * (&self.laplacian * &self.g0).trace()
    }
}

fn omega(j: usize, n: usize, m: f64, dx: f64) -> f64 {
    let k = 2.0 * PI * j as f64 / n as f64;
    (m * m + 2.0 * (1.0 - k.cos()) / (dx * dx)).sqrt()
}

/// Periodic lattice Laplacian L = (2 - S - S^T)/dx^2 (positive semidefinite).
pub fn periodic_laplacian(n: usize, dx: f64) -> DMatrix<f64> {
    let mut l = DMatrix::zeros(n, n);
    let c = 1.0 / (dx * dx);
    for i in 0..n {
        l[(i, i)] += 2.0 * c;
        let j = (i + 1) % n;
        l[(i, j)] -= c;
        l[(j, i)] -= c;
    }
    l
}

/// Mode sum G0(x, y) = (1/N) sum_k e^{ik(x-y)} / (2 omega_k) on `n` sites of
/// spacing `dx`.
pub fn free_two_point(n: usize, dx: f64, m_eff: f64) -> Result<FreeKernel> {
    require(n >= 1, || "lattice needs at least one site".into())?;
    require(dx > 0.0 && dx.is_finite(), || format!("dx must be positive, got {dx}"))?;
    if m_eff == 0.0 {
        return Err(Error::InfraredDivergent);
    }
    require(m_eff > 0.0 && m_eff.is_finite(), || format!("m_eff must be positive, got {m_eff}"))?;
    let omegas: Vec<f64> = (0..n).map(|j| omega(j, n, m_eff, dx)).collect();
    let circulant = |f: &dyn Fn(f64) -> f64| {
        let row: Vec<f64> = (0..n)
            .map(|r| {
                omegas
                    .iter()
                    .enumerate()
                    .map(|(j, &w)| (2.0 * PI * (j * r) as f64 / n as f64).cos() * f(w))
                    .sum::<f64>()
                    / n as f64
            })
            .collect();
        DMatrix::from_fn(n, n, |i, j| row[(j + n - i) % n])
    };
    let g0 = circulant(&|w| 0.5 / w);
    let g0_inv = circulant(&|w| 2.0 * w);
    Ok(FreeKernel { g0, g0_inv, laplacian: periodic_laplacian(n, dx), m_eff, dx })
}
