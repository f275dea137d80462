//! Friction flow g'' + Q g' = -beta in coupling space.

use crate::error::{require, Error, Result};
use crate::numerics::rk4_step;
use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone, PartialEq)]
pub struct CouplingState {
    pub g: Vec<f64>,
    pub g_dot: Vec<f64>,
    /// Central-charge functional at `g`.
    pub c: f64,
    pub t: f64,
}

type VecFn<'a> = Box<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync + 'a>;
type ScalarFn<'a> = Box<dyn Fn(&[f64]) -> f64 + Send + Sync + 'a>;

pub struct FlowSpec<'a> {
    pub beta: VecFn<'a>,
    pub metric_g: Box<dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'a>,
    pub central_charge: ScalarFn<'a>,
    pub q_of_c: Box<dyn Fn(f64) -> f64 + Send + Sync + 'a>,
}

/// Q(C) = sqrt((C - 25)/6), the friction-flow normalization.
pub fn q_friction(c: f64) -> f64 {
    ((c - 25.0) / 6.0).max(0.0).sqrt()
}

/// Q(C) = sqrt((C - 25)/3), the c-theorem normalization.
pub fn q_ctheorem(c: f64) -> f64 {
    ((c - 25.0) / 3.0).max(0.0).sqrt()
}

impl<'a> FlowSpec<'a> {
    /// Gradient flow beta^i = G^ij d_j C.
    pub fn gradient_flow<G, C, D, Q>(metric: G, c: C, grad_c: D, q_of_c: Q) -> Self
    where
        G: Fn(&[f64]) -> DMatrix<f64> + Send + Sync + Clone + 'a,
        C: Fn(&[f64]) -> f64 + Send + Sync + 'a,
        D: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'a,
        Q: Fn(f64) -> f64 + Send + Sync + 'a,
    {
        let m = metric.clone();
        FlowSpec {
            beta: Box::new(move |g| {
                let grad = DVector::from_vec(grad_c(g));
                (m(g) * grad).iter().copied().collect()
            }),
            metric_g: Box::new(metric),
            central_charge: Box::new(c),
            q_of_c: Box::new(q_of_c),
        }
    }

    pub fn new_state(&self, g: Vec<f64>, g_dot: Vec<f64>) -> CouplingState {
        let c = (self.central_charge)(&g);
        CouplingState { g, g_dot, c, t: 0.0 }
    }

    /// Smallest eigenvalue of the metric at `g`, for checking positivity.
    pub fn metric_min_eigenvalue(&self, g: &[f64]) -> f64 {
        let m = (self.metric_g)(g);
        let sym = (&m + m.transpose()) * 0.5;
        sym.symmetric_eigenvalues().min()
    }
}

/// One RK4 step; Q is re-evaluated from C at every stage.
pub fn flow_step(state: &CouplingState, spec: &FlowSpec<'_>, dt: f64) -> Result<CouplingState> {
    require(dt > 0.0, || format!("dt must be positive, got {dt}"))?;
    let n = state.g.len();
    require(state.g_dot.len() == n, || "g and g_dot lengths differ".into())?;
    require(state.g.iter().chain(&state.g_dot).all(|x| x.is_finite()), || "non-finite couplings".into())?;
    let c0 = (spec.central_charge)(&state.g);
    if c0 < 25.0 {
        return Err(Error::Subcritical { c: c0 });
    }
    let mut sub = None;
    let y: Vec<f64> = state.g.iter().chain(&state.g_dot).copied().collect();
    let rhs = |_: f64, y: &Vec<f64>| -> Vec<f64> {
        let (g, gd) = y.split_at(n);
        let c = (spec.central_charge)(g);
        if c < 25.0 && sub.is_none() {
            sub = Some(c);
        }
        let q = (spec.q_of_c)(c);
        let beta = (spec.beta)(g);
        let mut out = Vec::with_capacity(2 * n);
        out.extend_from_slice(gd);
        out.extend((0..n).map(|i| -q * gd[i] - beta[i]));
        out
    };
    let y1 = rk4_step(state.t, &y, dt, rhs);
    if let Some(c) = sub {
        return Err(Error::Subcritical { c });
    }
    let (g, gd) = y1.split_at(n);
    let c = (spec.central_charge)(g);
    if c < 25.0 {
        return Err(Error::Subcritical { c });
    }
    Ok(CouplingState { g: g.to_vec(), g_dot: gd.to_vec(), c, t: state.t + dt })
}

/// Largest finite-difference value of C'' + Q C' over interior samples.
pub fn c_flow_excess(c: &[f64], q: &[f64], dt: f64) -> Result<f64> {
    if c.len() < 3 {
        return Err(Error::InsufficientTrace { len: c.len() });
    }
    require(q.len() == c.len(), || "C and Q traces differ in length".into())?;
    require(dt > 0.0, || format!("dt must be positive, got {dt}"))?;
    Ok((1..c.len() - 1)
        .map(|i| {
            let c2 = (c[i + 1] - 2.0 * c[i] + c[i - 1]) / (dt * dt);
            let c1 = (c[i + 1] - c[i - 1]) / (2.0 * dt);
            c2 + q[i] * c1
        })
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Whether C'' + Q C' <= tol at every interior sample.
pub fn c_flow_check(c: &[f64], q: &[f64], dt: f64, tol: f64) -> Result<bool> {
    Ok(c_flow_excess(c, q, dt)? <= tol)
}
