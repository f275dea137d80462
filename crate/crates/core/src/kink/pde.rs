//! Method-of-lines integration of
//! M u_tt = k R0^2 u_xx + A u - B u^3 - gamma u_t + q E
//! with second-order centred differences and classical RK4 in time.

use super::{damped_profile, kink_velocity, reduce, solve_cubic, KinkRoots, MTParams};
use crate::error::{require, Error, Result};
use crate::numerics::rk4_step;

#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub grid_x: Vec<f64>,
    pub u: Vec<f64>,
    pub u_dot: Vec<f64>,
    pub t: f64,
}

impl FieldState {
    pub fn new(grid_x: Vec<f64>, u: Vec<f64>, u_dot: Vec<f64>, t: f64) -> Result<Self> {
        let s = FieldState { grid_x, u, u_dot, t };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.grid_x.len();
        require(n >= 3, || format!("grid needs at least 3 points, got {n}"))?;
        require(self.u.len() == n && self.u_dot.len() == n, || {
            format!("array lengths differ: x {}, u {}, u_dot {}", n, self.u.len(), self.u_dot.len())
        })?;
        let dx = self.dx();
        require(dx > 0.0, || "grid must be increasing".into())?;
        let uniform = self
            .grid_x
            .windows(2)
            .all(|w| ((w[1] - w[0]) - dx).abs() <= 1e-9 * dx);
        require(uniform, || "grid must be uniformly spaced".into())
    }

    pub fn dx(&self) -> f64 {
        (self.grid_x[self.grid_x.len() - 1] - self.grid_x[0]) / (self.grid_x.len() - 1) as f64
    }

    /// Analytic kink centred at `kink.x0` at time `t`, with the end values
    /// set exactly to the two wells.
    pub fn analytic_kink(kink: &TravelingKink, grid_x: Vec<f64>, t: f64) -> Result<Self> {
        let n = grid_x.len();
        require(n >= 3, || format!("grid needs at least 3 points, got {n}"))?;
        let dx = (grid_x[n - 1] - grid_x[0]) / (n - 1) as f64;
        require(kink.alpha * dx <= 1.0 / 20.0, || {
            format!(
                "grid spacing {dx:e} m does not resolve the kink width {:e} m with 20 points",
                1.0 / kink.alpha
            )
        })?;
        let (mut u, mut u_dot): (Vec<f64>, Vec<f64>) =
            grid_x.iter().map(|&x| kink.field(x, t)).unzip();
        let (left, right) = kink.wells();
        u[0] = left;
        u[n - 1] = right;
        u_dot[0] = 0.0;
        u_dot[n - 1] = 0.0;
        FieldState::new(grid_x, u, u_dot, t)
    }
}

/// Exact travelling kink of the damped, forced chain.
#[derive(Debug, Clone, Copy)]
pub struct TravelingKink {
    pub roots: KinkRoots,
    pub v: f64,
    pub alpha: f64,
    pub u_scale: f64,
    pub x0: f64,
}

impl TravelingKink {
    pub fn new(params: &MTParams, x0: f64) -> Result<Self> {
        let roots = solve_cubic(params.sigma())?;
        let v = kink_velocity(params, &roots)?;
        let dimless = reduce(params, v)?;
        Ok(TravelingKink { roots, v, alpha: dimless.alpha, u_scale: params.well_scale(), x0 })
    }

    /// (u, u_t) at (x, t).
    pub fn field(&self, x: f64, t: f64) -> (f64, f64) {
        let p = damped_profile(self.alpha * (x - self.x0 - self.v * t), &self.roots);
        (self.u_scale * p.psi, -self.v * self.alpha * self.u_scale * p.dpsi)
    }

    /// Field values far behind and far ahead of the front.
    pub fn wells(&self) -> (f64, f64) {
        let (l, r) = if self.roots.d <= 0.0 {
            (self.roots.b, self.roots.a)
        } else {
            (self.roots.a, self.roots.b)
        };
        (l * self.u_scale, r * self.u_scale)
    }
}

/// Coefficients of the semi-discrete chain. The TDVA frozen-fluctuation limit
/// reuses this with unit mass and tension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KleinGordon {
    pub mass: f64,
    /// k R0^2
    pub tension: f64,
    pub a: f64,
    pub b: f64,
    pub friction: f64,
    /// q E
    pub force: f64,
}

impl KleinGordon {
    pub fn from_params(p: &MTParams) -> Self {
        KleinGordon {
            mass: p.dimer_mass,
            tension: p.stiffness * p.spacing * p.spacing,
            a: p.potential_a,
            b: p.potential_b,
            friction: p.friction,
            force: p.charge * p.field,
        }
    }

    pub fn wave_speed(&self) -> f64 {
        (self.tension / self.mass).sqrt()
    }

    /// Time derivative of the packed state [u, u_dot]; end nodes are fixed.
    pub fn rhs(&self, y: &[f64], dx: f64) -> Vec<f64> {
        let n = y.len() / 2;
        let (u, ud) = y.split_at(n);
        let mut out = vec![0.0; 2 * n];
        let c = self.tension / (dx * dx);
        let inv_m = 1.0 / self.mass;
        for i in 1..n - 1 {
            let lap = c * (u[i + 1] - 2.0 * u[i] + u[i - 1]);
            let ui = u[i];
            out[i] = ud[i];
            out[n + i] =
                inv_m * (lap + self.a * ui - self.b * ui * ui * ui - self.friction * ud[i] + self.force);
        }
        out
    }

    /// Discrete energy sum dx [M u_t^2/2 + tension u_x^2/2 - A u^2/2 + B u^4/4 - F u].
    pub fn energy(&self, u: &[f64], ud: &[f64], dx: f64) -> f64 {
        let site: f64 = u
            .iter()
            .zip(ud)
            .map(|(&u, &v)| {
                0.5 * self.mass * v * v - 0.5 * self.a * u * u + 0.25 * self.b * u.powi(4) - self.force * u
            })
            .sum();
        let bonds: f64 = u.windows(2).map(|w| (w[1] - w[0]).powi(2)).sum();
        dx * site + 0.5 * self.tension * bonds / dx
    }

    /// (CFL bound dx/v0, damping bound 2.5 M/gamma) on the RK4 step.
    pub fn step_bounds(&self, dx: f64) -> (f64, f64) {
        let damping = if self.friction > 0.0 {
            2.5 * self.mass / self.friction
        } else {
            f64::INFINITY
        };
        (dx / self.wave_speed(), damping)
    }

    pub fn check_step(&self, dt: f64, dx: f64) -> Result<()> {
        require(dt > 0.0 && dt.is_finite(), || format!("dt must be positive, got {dt}"))?;
        let (cfl, damping) = self.step_bounds(dx);
        if dt >= cfl {
            return Err(Error::StepBound { dt, bound: cfl, reason: "CFL dx/v0" });
        }
        if dt >= damping {
            return Err(Error::StepBound { dt, bound: damping, reason: "RK4 damping 2.5 M/gamma" });
        }
        Ok(())
    }

    /// Integrate, calling `observe` on the initial state and then every
    /// `every` steps.
    pub fn evolve<F: FnMut(usize, &FieldState)>(
        &self,
        state: &FieldState,
        dt: f64,
        n_steps: usize,
        every: usize,
        mut observe: F,
    ) -> Result<FieldState> {
        state.validate()?;
        let dx = state.dx();
        self.check_step(dt, dx)?;
        let n = state.u.len();
        let mut y: Vec<f64> = state.u.iter().chain(&state.u_dot).copied().collect();
        let mut out = state.clone();
        observe(0, &out);
        for step in 1..=n_steps {
            y = rk4_step(0.0, &y, dt, |_, y| self.rhs(y, dx));
            if !y.iter().all(|v| v.is_finite()) {
                return Err(Error::BlowUp { step });
            }
            if every > 0 && (step % every == 0 || step == n_steps) {
                out.u.copy_from_slice(&y[..n]);
                out.u_dot.copy_from_slice(&y[n..]);
                out.t = state.t + step as f64 * dt;
                observe(step, &out);
            }
        }
        out.u.copy_from_slice(&y[..n]);
        out.u_dot.copy_from_slice(&y[n..]);
        out.t = state.t + n_steps as f64 * dt;
        Ok(out)
    }
}

pub fn step_bounds(params: &MTParams, dx: f64) -> (f64, f64) {
    KleinGordon::from_params(params).step_bounds(dx)
}

/// Advance `n_steps` of size `dt`. End values of `state` are held fixed.
pub fn evolve_pde(state: &FieldState, params: &MTParams, dt: f64, n_steps: usize) -> Result<FieldState> {
    params.validate()?;
    KleinGordon::from_params(params).evolve(state, dt, n_steps, 0, |_, _| {})
}

pub fn evolve_pde_observed<F: FnMut(usize, &FieldState)>(
    state: &FieldState,
    params: &MTParams,
    dt: f64,
    n_steps: usize,
    every: usize,
    observe: F,
) -> Result<FieldState> {
    params.validate()?;
    KleinGordon::from_params(params).evolve(state, dt, n_steps, every, observe)
}

pub fn field_energy(state: &FieldState, params: &MTParams) -> f64 {
    KleinGordon::from_params(params).energy(&state.u, &state.u_dot, state.dx())
}

/// Co-moving L2 shape error relative to the kink's own variation,
/// ||u - u_exact|| / ||u_exact - (u_left + u_right)/2||.
pub fn shape_drift(state: &FieldState, kink: &TravelingKink) -> f64 {
    let (l, r) = kink.wells();
    let mid = 0.5 * (l + r);
    let (mut num, mut den) = (0.0, 0.0);
    for (&x, &u) in state.grid_x.iter().zip(&state.u) {
        let (ue, _) = kink.field(x, state.t);
        num += (u - ue).powi(2);
        den += (ue - mid).powi(2);
    }
    (num / den).sqrt()
}
