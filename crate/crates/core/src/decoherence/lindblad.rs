use super::{CMatrix, DensityMatrix, OpenSystem, C64};
use crate::error::{require, Error, Result};
use crate::numerics::rk4_step;

// Per-step tolerances; a failing step is retried as two half steps.
const TRACE_STEP_TOL: f64 = 1e-12;
const HERMITIAN_TOL: f64 = 1e-12;
const POSITIVITY_TOL: f64 = -1e-10;
const MAX_HALVINGS: u32 = 8;

struct Generator {
    h: CMatrix,
    ops: Vec<CMatrix>,
    ops_dag: Vec<CMatrix>,
    k: CMatrix,
}

impl Generator {
    fn new(sys: &OpenSystem) -> Self {
        let n = sys.dim();
        let ops_dag: Vec<CMatrix> = sys.lindblad_ops.iter().map(|b| b.adjoint()).collect();
        let mut k = CMatrix::zeros(n, n);
        for (b, bd) in sys.lindblad_ops.iter().zip(&ops_dag) {
            k += bd * b;
        }
        Generator { h: sys.h.clone(), ops: sys.lindblad_ops.clone(), ops_dag, k }
    }

    fn apply(&self, rho: &CMatrix) -> CMatrix {
        let i = C64::new(0.0, 1.0);
        let mut out = (rho * &self.h - &self.h * rho) * i - (&self.k * rho + rho * &self.k);
        for (b, bd) in self.ops.iter().zip(&self.ops_dag) {
            out += b * rho * bd * C64::new(2.0, 0.0);
        }
        out
    }
}

/// i[rho, H] - sum {B^dag B, rho} + 2 sum B rho B^dag
pub fn lindblad_rhs(rho: &CMatrix, sys: &OpenSystem) -> CMatrix {
    Generator::new(sys).apply(rho)
}

fn step_ok(before: &CMatrix, after: &CMatrix) -> Option<String> {
    let dtr = (after.trace().re - before.trace().re).abs();
    if dtr > TRACE_STEP_TOL {
        return Some(format!("trace drift {dtr:e}"));
    }
    let d = DensityMatrix { entries: after.clone() };
    let herm = d.hermiticity_error();
    if herm > HERMITIAN_TOL {
        return Some(format!("hermiticity error {herm:e}"));
    }
    let e = d.min_eigenvalue();
    if e < POSITIVITY_TOL {
        return Some(format!("eigenvalue {e:e}"));
    }
    None
}

fn guarded_step(g: &Generator, rho: &CMatrix, dt: f64, depth: u32, step: usize) -> Result<CMatrix> {
    let next = rk4_step(0.0, rho, dt, |_, r| g.apply(r));
    match step_ok(rho, &next) {
        None => Ok(next),
        Some(detail) if depth >= MAX_HALVINGS => Err(Error::IntegratorTolerance { step, detail }),
        Some(_) => {
            let half = guarded_step(g, rho, 0.5 * dt, depth + 1, step)?;
            guarded_step(g, &half, 0.5 * dt, depth + 1, step)
        }
    }
}

/// Samples (t, rho) at t = 0 and every `every` steps (and at the end).
pub fn lindblad_trace(
    rho: &DensityMatrix,
    sys: &OpenSystem,
    dt: f64,
    n_steps: usize,
    every: usize,
) -> Result<Vec<(f64, DensityMatrix)>> {
    sys.validate()?;
    rho.validate()?;
    require(rho.dim() == sys.dim(), || "state and system dimensions differ".into())?;
    require(dt > 0.0 && dt.is_finite(), || format!("dt must be positive, got {dt}"))?;
    let g = Generator::new(sys);
    let mut cur = rho.entries.clone();
    let mut out = vec![(0.0, rho.clone())];
    for step in 1..=n_steps {
        cur = guarded_step(&g, &cur, dt, 0, step)?;
        let tr = cur.trace().re;
        if (tr - 1.0).abs() > 1e-10 {
            return Err(Error::IntegratorTolerance { step, detail: format!("trace {tr} drifted from 1") });
        }
        if (every > 0 && step % every == 0) || step == n_steps {
            out.push((step as f64 * dt, DensityMatrix { entries: cur.clone() }));
        }
    }
    Ok(out)
}

pub fn lindblad_evolve(rho: &DensityMatrix, sys: &OpenSystem, dt: f64, n_steps: usize) -> Result<DensityMatrix> {
    Ok(lindblad_trace(rho, sys, dt, n_steps, 0)?.pop().expect("initial sample").1)
}
