//! Euler-Maruyama unraveling. The generator's operators B enter through the
//! standard-normalized L = sqrt(2) B with complex increments
//! E[dxi dxi*] = dt, E[dxi^2] = 0, so that the ensemble reproduces the
//! master equation with its factor-2 dissipator.

use super::{CMatrix, CVector, DensityMatrix, OpenSystem, StateVector, C64};
use crate::error::{require, Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

const NORM_DRIFT_TOL: f64 = 1e-3;
const MAX_BISECTIONS: u32 = 12;

struct Unraveling {
    h: CMatrix,
    ops: Vec<CMatrix>,
    ops_dag: Vec<CMatrix>,
    ldl: Vec<CMatrix>,
}

impl Unraveling {
    fn new(sys: &OpenSystem) -> Self {
        let s2 = C64::new(std::f64::consts::SQRT_2, 0.0);
        let ops: Vec<CMatrix> = sys.lindblad_ops.iter().map(|b| b * s2).collect();
        let ops_dag: Vec<CMatrix> = ops.iter().map(|l| l.adjoint()).collect();
        let ldl = ops.iter().zip(&ops_dag).map(|(l, ld)| ld * l).collect();
        Unraveling { h: sys.h.clone(), ops, ops_dag, ldl }
    }

    /// Unnormalized Euler-Maruyama update for a normalized psi.
    fn em(&self, psi: &CVector, dt: f64, dw: &[C64]) -> CVector {
        let i = C64::new(0.0, 1.0);
        let mut drift = -(&self.h * psi) * i;
        let mut next = psi.clone();
        for (m, l) in self.ops.iter().enumerate() {
            let lpsi = l * psi;
            let el = psi.dotc(&lpsi);
            let eld = psi.dotc(&(&self.ops_dag[m] * psi));
            drift += &lpsi * eld - (&self.ldl[m] * psi) * C64::new(0.5, 0.0) - psi * (eld * el * 0.5);
            next += (lpsi - psi * el) * dw[m];
        }
        next + drift * C64::new(dt, 0.0)
    }

    /// Step with Brownian-bridge refinement of the increment when the
    /// pre-normalization norm drift exceeds the tolerance.
    fn advance(
        &self,
        psi: &CVector,
        dt: f64,
        dw: &[C64],
        rng: &mut ChaCha8Rng,
        depth: u32,
        step: usize,
        refinements: &mut usize,
    ) -> Result<(CVector, f64)> {
        let next = self.em(psi, dt, dw);
        let drift = (next.norm() - 1.0).abs();
        if drift <= NORM_DRIFT_TOL {
            let n = next.norm();
            return Ok((next / C64::new(n, 0.0), drift));
        }
        if depth >= MAX_BISECTIONS {
            return Err(Error::StepSize { step, drift });
        }
        *refinements += 1;
        let s = (dt / 8.0).sqrt(); // per real component of the bridge noise
        let mid: Vec<C64> = dw
            .iter()
            .map(|w| {
                let z = C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng));
                w * 0.5 + z * s
            })
            .collect();
        let rest: Vec<C64> = dw.iter().zip(&mid).map(|(w, m)| w - m).collect();
        let (a, d1) = self.advance(psi, 0.5 * dt, &mid, rng, depth + 1, step, refinements)?;
        let (b, d2) = self.advance(&a, 0.5 * dt, &rest, rng, depth + 1, step, refinements)?;
        Ok((b, d1.max(d2)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ItoTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<StateVector>,
    /// Largest accepted pre-normalization norm drift.
    pub max_norm_drift: f64,
    /// Number of Brownian-bridge bisections performed.
    pub refinements: usize,
}

fn run<F: FnMut(f64, &CVector)>(
    psi0: &StateVector,
    sys: &OpenSystem,
    dt: f64,
    n_steps: usize,
    every: usize,
    seed: u64,
    mut observe: F,
) -> Result<(f64, usize)> {
    let u = Unraveling::new(sys);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = (dt / 2.0).sqrt();
    let mut psi = psi0.amps.clone();
    let mut max_drift: f64 = 0.0;
    let mut refinements = 0;
    observe(0.0, &psi);
    for step in 1..=n_steps {
        let dw: Vec<C64> = (0..u.ops.len())
            .map(|_| C64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)) * s)
            .collect();
        let (next, drift) = u.advance(&psi, dt, &dw, &mut rng, 0, step, &mut refinements)?;
        if !next.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::BlowUp { step });
        }
        psi = next;
        max_drift = max_drift.max(drift);
        if (every > 0 && step % every == 0) || step == n_steps {
            observe(step as f64 * dt, &psi);
        }
    }
    Ok((max_drift, refinements))
}

fn check_inputs(psi0: &StateVector, sys: &OpenSystem, dt: f64) -> Result<()> {
    sys.validate()?;
    require(psi0.dim() == sys.dim(), || "state and system dimensions differ".into())?;
    require((psi0.amps.norm() - 1.0).abs() <= 1e-10, || "initial state must be normalized".into())?;
    require(dt > 0.0 && dt.is_finite(), || format!("dt must be positive, got {dt}"))
}

/// One trajectory sampled at t = 0, every `every` steps, and at the end.
pub fn ito_trajectory(
    psi0: &StateVector,
    sys: &OpenSystem,
    dt: f64,
    n_steps: usize,
    every: usize,
    seed: u64,
) -> Result<ItoTrajectory> {
    check_inputs(psi0, sys, dt)?;
    let mut times = vec![];
    let mut states = vec![];
    let (max_norm_drift, refinements) = run(psi0, sys, dt, n_steps, every, seed, |t, psi| {
        times.push(t);
        states.push(StateVector { amps: psi.clone() });
    })?;
    Ok(ItoTrajectory { times, states, max_norm_drift, refinements })
}

/// Evaluate `f` along `n_traj` trajectories (seed base + i). The result is
/// indexed [trajectory][sample] and independent of the thread count.
pub fn ensemble_map<T, F>(
    psi0: &StateVector,
    sys: &OpenSystem,
    dt: f64,
    n_steps: usize,
    every: usize,
    n_traj: usize,
    base_seed: u64,
    f: F,
) -> Result<(Vec<f64>, Vec<Vec<T>>)>
where
    T: Send,
    F: Fn(&StateVector) -> T + Sync,
{
    check_inputs(psi0, sys, dt)?;
    require(n_traj >= 1, || "need at least one trajectory".into())?;
    let runs: Vec<Result<Vec<T>>> = (0..n_traj)
        .into_par_iter()
        .map(|i| {
            let mut vals = vec![];
            run(psi0, sys, dt, n_steps, every, base_seed.wrapping_add(i as u64), |_, psi| {
                vals.push(f(&StateVector { amps: psi.clone() }));
            })?;
            Ok(vals)
        })
        .collect();
    let mut times = vec![0.0];
    times.extend((1..=n_steps).filter(|s| (every > 0 && s % every == 0) || *s == n_steps).map(|s| s as f64 * dt));
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    Ok((times, runs))
}

/// Ensemble average of |psi><psi| at the sample times, summed in
/// trajectory order.
pub fn ensemble_density(
    psi0: &StateVector,
    sys: &OpenSystem,
    dt: f64,
    n_steps: usize,
    every: usize,
    n_traj: usize,
    base_seed: u64,
) -> Result<Vec<(f64, DensityMatrix)>> {
    let (times, runs) = ensemble_map(psi0, sys, dt, n_steps, every, n_traj, base_seed, |psi| {
        DensityMatrix::pure(psi).entries
    })?;
    let n = sys.dim();
    let mut acc = vec![CMatrix::zeros(n, n); times.len()];
    for r in &runs {
        for (a, m) in acc.iter_mut().zip(r) {
            *a += m;
        }
    }
    let w = C64::new(1.0 / n_traj as f64, 0.0);
    Ok(times.into_iter().zip(acc).map(|(t, a)| (t, DensityMatrix { entries: a * w })).collect())
}
