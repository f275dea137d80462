use super::{CMatrix, CVector, C64};
use crate::error::{require, Result};

fn hermiticity_error(m: &CMatrix) -> f64 {
    (m - m.adjoint()).iter().fold(0.0, |a, z| a.max(z.norm()))
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub(crate) fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let mut e: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

/// Trace norm of a Hermitian matrix, the sum of |eigenvalues|.
pub fn trace_norm(m: &CMatrix) -> f64 {
    hermitian_eigenvalues(m).iter().map(|e| e.abs()).sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub entries: CMatrix,
}

impl DensityMatrix {
    pub fn new(entries: CMatrix) -> Result<Self> {
        let r = DensityMatrix { entries };
        r.validate()?;
        Ok(r)
    }

    pub fn pure(psi: &StateVector) -> Self {
        DensityMatrix { entries: &psi.amps * psi.amps.adjoint() }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace().re
    }

    pub fn hermiticity_error(&self) -> f64 {
        hermiticity_error(&self.entries)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.entries)[0]
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.entries)
    }

    /// Hermitian to 1e-12, unit trace to 1e-10, eigenvalues >= -1e-10.
    pub fn validate(&self) -> Result<()> {
        let n = self.entries.nrows();
        require(n >= 2 && self.entries.ncols() == n, || "density matrix must be square with dim >= 2".into())?;
        require(self.hermiticity_error() <= 1e-12, || {
            format!("density matrix not Hermitian (error {:e})", self.hermiticity_error())
        })?;
        require((self.trace() - 1.0).abs() <= 1e-10, || format!("trace {} != 1", self.trace()))?;
        require(self.min_eigenvalue() >= -1e-10, || {
            format!("negative eigenvalue {:e}", self.min_eigenvalue())
        })
    }

    pub fn expectation(&self, op: &CMatrix) -> C64 {
        (&self.entries * op).trace()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OpenSystem {
    /// Hamiltonian in units with hbar = 1.
    pub h: CMatrix,
    pub lindblad_ops: Vec<CMatrix>,
}

impl OpenSystem {
    pub fn new(h: CMatrix, lindblad_ops: Vec<CMatrix>) -> Result<Self> {
        let s = OpenSystem { h, lindblad_ops };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.h.nrows();
        require(n >= 1 && self.h.ncols() == n, || "H must be square".into())?;
        require(hermiticity_error(&self.h) <= 1e-12, || "H must be Hermitian to 1e-12".into())?;
        require(self.lindblad_ops.iter().all(|b| b.nrows() == n && b.ncols() == n), || {
            "Lindblad operators must match the dimension of H".into()
        })?;
        require(
            self.h.iter().chain(self.lindblad_ops.iter().flat_map(|b| b.iter())).all(|z| z.re.is_finite() && z.im.is_finite()),
            || "non-finite matrix entries".into(),
        )
    }

    pub fn dim(&self) -> usize {
        self.h.nrows()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub amps: CVector,
}

impl StateVector {
    /// Accepts only unit-norm input.
    pub fn new(amps: CVector) -> Result<Self> {
        require(amps.len() >= 2, || "state needs dim >= 2".into())?;
        let n = amps.norm();
        require((n - 1.0).abs() <= 1e-10, || format!("state norm {n} != 1"))?;
        Ok(StateVector { amps })
    }

    /// Normalizes a non-zero vector.
    pub fn normalized(amps: CVector) -> Result<Self> {
        let n = amps.norm();
        require(n > 0.0 && n.is_finite(), || "cannot normalize a zero vector".into())?;
        StateVector::new(amps / C64::new(n, 0.0))
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn expectation(&self, op: &CMatrix) -> C64 {
        self.amps.dotc(&(op * &self.amps))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelProjectors {
    pub projectors: Vec<CMatrix>,
}

impl ChannelProjectors {
    pub fn new(projectors: Vec<CMatrix>) -> Result<Self> {
        require(!projectors.is_empty(), || "need at least one channel".into())?;
        let n = projectors[0].nrows();
        let tol = 1e-12;
        let max_abs = |m: &CMatrix| m.iter().fold(0.0f64, |a, z| a.max(z.norm()));
        let mut sum = CMatrix::zeros(n, n);
        for (k, p) in projectors.iter().enumerate() {
            require(p.nrows() == n && p.ncols() == n, || "projector dimensions differ".into())?;
            require(max_abs(&(p * p - p)) <= tol, || format!("P_{k} is not idempotent"))?;
            require(hermiticity_error(p) <= tol, || format!("P_{k} is not Hermitian"))?;
            for (j, q) in projectors.iter().enumerate().skip(k + 1) {
                require(max_abs(&(p * q)) <= tol, || format!("P_{k} P_{j} != 0"))?;
            }
            sum += p;
        }
        require(max_abs(&(sum - CMatrix::identity(n, n))) <= tol, || "projectors do not sum to identity".into())?;
        Ok(ChannelProjectors { projectors })
    }

    /// Diagonal projectors onto groups of basis indices.
    pub fn from_blocks(dim: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let ps = blocks
            .iter()
            .map(|b| {
                let mut p = CMatrix::zeros(dim, dim);
                for &i in b {
                    p[(i, i)] = C64::new(1.0, 0.0);
                }
                p
            })
            .collect();
        ChannelProjectors::new(ps)
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    /// <P_k> in state psi.
    pub fn probabilities(&self, psi: &StateVector) -> Vec<f64> {
        self.projectors.iter().map(|p| psi.expectation(p).re).collect()
    }
}
