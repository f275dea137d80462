use nalgebra::{DMatrix, DVector};

use super::{FreeKernel, QuarticPotential, SqueezedState};
use crate::error::{require, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Evolve (C, D, G, Pi).
    Full,
    /// Hold (G, Pi) at their initial values and evolve (C, D) only.
    FrozenFluctuations,
}

/// Time derivatives of the four state components.
#[derive(Debug, Clone, PartialEq)]
pub struct SqueezedRates {
    pub c_dot: DVector<f64>,
    pub d_dot: DVector<f64>,
    pub g_dot: DMatrix<f64>,
    pub pi_dot: DMatrix<f64>,
}

fn check_kernel(state: &SqueezedState, kernel: &FreeKernel) -> Result<()> {
    require(kernel.n() == state.n(), || {
        format!("kernel has {} sites, state has {}", kernel.n(), state.n())
    })?;
    require((kernel.dx - state.dx()).abs() <= 1e-9 * kernel.dx, || {
        "kernel spacing differs from state spacing".into()
    })
}

fn widths(g: &DMatrix<f64>, kernel: &FreeKernel) -> DVector<f64> {
    DVector::from_fn(g.nrows(), |i, _| 0.5 * (g[(i, i)] - kernel.g0[(i, i)]))
}

fn rates(
    c: &DVector<f64>,
    d: &DVector<f64>,
    g: &DMatrix<f64>,
    pi: &DMatrix<f64>,
    t: f64,
    pot: &QuarticPotential,
    kernel: &FreeKernel,
    mode: Mode,
) -> Result<SqueezedRates> {
    let n = c.len();
    let w = widths(g, kernel);
    let inv_dx2 = 1.0 / (kernel.dx * kernel.dx);
    let mut c_dot = DVector::zeros(n);
    let mut d_dot = DVector::zeros(n);
    for i in 1..n - 1 {
        c_dot[i] = d[i];
        let lap = (c[i + 1] - 2.0 * c[i] + c[i - 1]) * inv_dx2;
        d_dot[i] = lap - pot.smeared(c[i], w[i]).1;
    }
    if mode == Mode::FrozenFluctuations {
        return Ok(SqueezedRates { c_dot, d_dot, g_dot: DMatrix::zeros(n, n), pi_dot: DMatrix::zeros(n, n) });
    }
    let g_inv = g.clone().cholesky().ok_or(Error::AnsatzBreakdown { t })?.inverse();
    let pg = pi * g;
    let g_dot = (&pg + pg.transpose()) * 2.0;
    let mut pi_dot = &g_inv * &g_inv / 8.0 - pi * pi * 2.0 - &kernel.laplacian * 0.5;
    for i in 0..n {
        pi_dot[(i, i)] -= 0.5 * pot.smeared(c[i], w[i]).2;
    }
    let pi_dot = (&pi_dot + pi_dot.transpose()) * 0.5;
    Ok(SqueezedRates { c_dot, d_dot, g_dot, pi_dot })
}

/// Right-hand side of the Hamilton equations for the full ansatz.
pub fn tdva_rates(state: &SqueezedState, pot: &QuarticPotential, kernel: &FreeKernel) -> Result<SqueezedRates> {
    check_kernel(state, kernel)?;
    rates(&state.c, &state.d, &state.g, &state.pi, state.t, pot, kernel, Mode::Full)
}

/// Largest admissible RK4 step: min(dx, 2.8 / (2 omega_max)), where
/// omega_max bounds the fluctuation frequencies.
pub fn tdva_step_bound(state: &SqueezedState, pot: &QuarticPotential, kernel: &FreeKernel) -> f64 {
    let w = widths(&state.g, kernel);
    let m2 = (0..state.n())
        .map(|i| pot.smeared(state.c[i], w[i]).2.abs())
        .fold(kernel.m_eff * kernel.m_eff, f64::max);
    let omega_max = (4.0 / (kernel.dx * kernel.dx) + m2).sqrt();
    kernel.dx.min(2.8 / (2.0 * omega_max))
}

/// One RK4 step. G is symmetrized and checked for positive definiteness
/// afterwards.
pub fn tdva_step(
    state: &SqueezedState,
    pot: &QuarticPotential,
    kernel: &FreeKernel,
    dt: f64,
    mode: Mode,
) -> Result<SqueezedState> {
    check_kernel(state, kernel)?;
    require(dt > 0.0 && dt.is_finite(), || format!("dt must be positive, got {dt}"))?;
    let bound = tdva_step_bound(state, pot, kernel);
    if dt >= bound {
        return Err(Error::StepBound { dt, bound, reason: "lattice CFL / fluctuation frequency" });
    }
    unchecked_step(state, pot, kernel, dt, mode)
}

fn unchecked_step(
    s: &SqueezedState,
    pot: &QuarticPotential,
    kernel: &FreeKernel,
    dt: f64,
    mode: Mode,
) -> Result<SqueezedState> {
    let f = |c: &DVector<f64>, d: &DVector<f64>, g: &DMatrix<f64>, pi: &DMatrix<f64>, t: f64| {
        rates(c, d, g, pi, t, pot, kernel, mode)
    };
    let h = 0.5 * dt;
    let k1 = f(&s.c, &s.d, &s.g, &s.pi, s.t)?;
    let k2 = f(
        &(&s.c + &k1.c_dot * h),
        &(&s.d + &k1.d_dot * h),
        &(&s.g + &k1.g_dot * h),
        &(&s.pi + &k1.pi_dot * h),
        s.t + h,
    )?;
    let k3 = f(
        &(&s.c + &k2.c_dot * h),
        &(&s.d + &k2.d_dot * h),
        &(&s.g + &k2.g_dot * h),
        &(&s.pi + &k2.pi_dot * h),
        s.t + h,
    )?;
    let k4 = f(
        &(&s.c + &k3.c_dot * dt),
        &(&s.d + &k3.d_dot * dt),
        &(&s.g + &k3.g_dot * dt),
        &(&s.pi + &k3.pi_dot * dt),
        s.t + dt,
    )?;
    let w = dt / 6.0;
    let c = &s.c + (&k1.c_dot + &k2.c_dot * 2.0 + &k3.c_dot * 2.0 + &k4.c_dot) * w;
    let d = &s.d + (&k1.d_dot + &k2.d_dot * 2.0 + &k3.d_dot * 2.0 + &k4.d_dot) * w;
    let g = &s.g + (&k1.g_dot + &k2.g_dot * 2.0 + &k3.g_dot * 2.0 + &k4.g_dot) * w;
    let pi = &s.pi + (&k1.pi_dot + &k2.pi_dot * 2.0 + &k3.pi_dot * 2.0 + &k4.pi_dot) * w;
    let g = (&g + g.transpose()) * 0.5;
    let pi = (&pi + pi.transpose()) * 0.5;
    let t = s.t + dt;
    if !(c.iter().chain(d.iter()).chain(g.iter()).chain(pi.iter()).all(|v| v.is_finite())) {
        return Err(Error::AnsatzBreakdown { t });
    }
    if g.clone().cholesky().is_none() {
        return Err(Error::AnsatzBreakdown { t });
    }
    Ok(SqueezedState { grid_x: s.grid_x.clone(), c, d, g, pi, t })
}

/// Integrate `n_steps`, calling `observe` on the initial state and every
/// `every` steps (and the last one).
pub fn tdva_evolve<F: FnMut(usize, &SqueezedState)>(
    state: &SqueezedState,
    pot: &QuarticPotential,
    kernel: &FreeKernel,
    dt: f64,
    n_steps: usize,
    mode: Mode,
    every: usize,
    mut observe: F,
) -> Result<SqueezedState> {
    state.validate()?;
    observe(0, state);
    let mut s = state.clone();
    for step in 1..=n_steps {
        // The bound depends on the smeared curvature, which moves with C.
        s = if step % 64 == 1 {
            tdva_step(&s, pot, kernel, dt, mode)?
        } else {
            unchecked_step(&s, pot, kernel, dt, mode)?
        };
        if every > 0 && (step % every == 0 || step == n_steps) {
            observe(step, &s);
        }
    }
    Ok(s)
}

/// Total variational energy with the vacuum subtraction.
pub fn quantum_energy(state: &SqueezedState, pot: &QuarticPotential, kernel: &FreeKernel) -> Result<f64> {
    check_kernel(state, kernel)?;
    let n = state.n();
    let w = widths(&state.g, kernel);
    let mut e = 0.0;
    for i in 0..n {
        e += 0.5 * state.d[i] * state.d[i] + pot.smeared(state.c[i], w[i]).0;
    }
    let inv_dx2 = 1.0 / (kernel.dx * kernel.dx);
    e += 0.5 * inv_dx2 * state.c.as_slice().windows(2).map(|p| (p[1] - p[0]).powi(2)).sum::<f64>();
    let g_inv = state.g.clone().cholesky().ok_or(Error::AnsatzBreakdown { t: state.t })?.inverse();
    e += g_inv.trace() / 8.0;
    e += 2.0 * (&state.pi * &state.g * &state.pi).trace();
    e += 0.5 * (&kernel.laplacian * &state.g).trace();
    Ok(e - kernel.vacuum_constant())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolitonResidual {
    /// max |C_tt - lap C + M1| with a centred second difference in time.
    pub temporal: f64,
    /// max |lap3 C - lap5 C|: the O(dx^2) truncation of the lattice Laplacian.
    pub spatial: f64,
    pub total: f64,
}

/// Finite-difference residual of C_tt - C_xx + M1[C] = 0 along a trace
/// sampled at uniform spacing `dt`.
pub fn modified_soliton_residual(
    trace: &[SqueezedState],
    pot: &QuarticPotential,
    kernel: &FreeKernel,
    dt: f64,
) -> Result<SolitonResidual> {
    require(trace.len() >= 3, || format!("need at least 3 samples, got {}", trace.len()))?;
    require(dt > 0.0, || format!("dt must be positive, got {dt}"))?;
    let uniform = trace.windows(2).all(|p| ((p[1].t - p[0].t) - dt).abs() <= 1e-9 * dt.max(p[1].t.abs()));
    require(uniform, || "trace is not sampled at the stated spacing".into())?;
    for s in trace {
        check_kernel(s, kernel)?;
    }
    let n = trace[0].n();
    require(n >= 5, || "residual needs at least 5 sites".into())?;
    let inv_dx2 = 1.0 / (kernel.dx * kernel.dx);
    let lap3 = |c: &DVector<f64>, i: usize| (c[i + 1] - 2.0 * c[i] + c[i - 1]) * inv_dx2;
    let lap5 = |c: &DVector<f64>, i: usize| {
        (-c[i + 2] + 16.0 * c[i + 1] - 30.0 * c[i] + 16.0 * c[i - 1] - c[i - 2]) * inv_dx2 / 12.0
    };
    let (mut temporal, mut spatial, mut total) = (0.0f64, 0.0f64, 0.0f64);
    for k in 1..trace.len() - 1 {
        let (prev, cur, next) = (&trace[k - 1].c, &trace[k].c, &trace[k + 1].c);
        let w = widths(&trace[k].g, kernel);
        for i in 2..n - 2 {
            let ctt = (next[i] - 2.0 * cur[i] + prev[i]) / (dt * dt);
            let m1 = pot.smeared(cur[i], w[i]).1;
            let r3 = ctt - lap3(cur, i) + m1;
            let r5 = ctt - lap5(cur, i) + m1;
            temporal = temporal.max(r3.abs());
            spatial = spatial.max((lap3(cur, i) - lap5(cur, i)).abs());
            total = total.max(r5.abs());
        }
    }
    Ok(SolitonResidual { temporal, spatial, total })
}
