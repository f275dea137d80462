//! Growth law d<delta>/dt = (-a Q + b Q^3) <delta> and the two-state
//! dynamic-instability (telegraph) model of microtubule length.

use crate::error::{require, Result};
use crate::numerics::{bisect, rk4_step};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthSeries {
    pub t: Vec<f64>,
    pub delta: Vec<f64>,
    /// Net rate -a Q + b Q^3 at each sample.
    pub rate: Vec<f64>,
    /// Number of strict sign changes of the rate between samples.
    pub sign_changes: usize,
    /// First crossover, refined by bisection on the continuous rate.
    pub crossover_time: Option<f64>,
    pub crossover_q: Option<f64>,
}

pub fn growth_density<Q: Fn(f64) -> f64>(
    delta0: f64,
    a_coef: f64,
    b_coef: f64,
    q_of_t: Q,
    dt: f64,
    n_steps: usize,
) -> Result<GrowthSeries> {
    require(a_coef > 0.0 && b_coef > 0.0, || "a and b must be positive".into())?;
    require(dt > 0.0, || format!("dt must be positive, got {dt}"))?;
    let rate = |t: f64| {
        let q = q_of_t(t);
        -a_coef * q + b_coef * q * q * q
    };
    let mut ts = Vec::with_capacity(n_steps + 1);
    let mut ds = Vec::with_capacity(n_steps + 1);
    let mut rs = Vec::with_capacity(n_steps + 1);
    let mut y = vec![delta0];
    for i in 0..=n_steps {
        let t = i as f64 * dt;
        ts.push(t);
        ds.push(y[0]);
        rs.push(rate(t));
        if i < n_steps {
            y = rk4_step(t, &y, dt, |t, y| vec![rate(t) * y[0]]);
        }
    }
    let mut sign_changes = 0;
    let mut crossover_time = None;
    let mut last_sign = 0.0;
    let mut last_t = 0.0;
    for (&t, &r) in ts.iter().zip(&rs) {
        if r == 0.0 {
            continue;
        }
        let s = r.signum();
        if last_sign != 0.0 && s != last_sign {
            sign_changes += 1;
            if crossover_time.is_none() {
                crossover_time = bisect(&rate, last_t, t, 1e-15 * t.max(1.0));
            }
        }
        last_sign = s;
        last_t = t;
    }
    Ok(GrowthSeries {
        t: ts,
        delta: ds,
        rate: rs,
        sign_changes,
        crossover_time,
        crossover_q: crossover_time.map(&q_of_t),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialPhase {
    Growing,
    Shrinking,
    /// Drawn from the stationary occupation of the two states.
    Stationary,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TelegraphParams {
    pub v_plus: f64,
    pub v_minus: f64,
    /// Switching rate from growth to shrinkage.
    pub rate_catastrophe: f64,
    /// Switching rate from shrinkage to growth.
    pub rate_rescue: f64,
    pub l0: f64,
    /// Reflect at L = 0 by an instantaneous rescue.
    pub floor: bool,
    pub start: InitialPhase,
}

impl TelegraphParams {
    pub fn validate(&self) -> Result<()> {
        let vals = [self.v_plus, self.v_minus, self.rate_catastrophe, self.rate_rescue];
        require(vals.iter().all(|v| *v >= 0.0 && v.is_finite()), || {
            "rates and speeds must be non-negative".into()
        })?;
        require(self.rate_catastrophe + self.rate_rescue > 0.0, || "at least one switching rate must be positive".into())?;
        require(!self.floor || self.l0 >= 0.0, || "L0 must be non-negative with a floor".into())
    }

    pub fn pi_plus(&self) -> f64 {
        self.rate_rescue / (self.rate_catastrophe + self.rate_rescue)
    }

    /// Stationary mean velocity pi+ v+ - pi- v-.
    pub fn drift(&self) -> f64 {
        let p = self.pi_plus();
        p * self.v_plus - (1.0 - p) * self.v_minus
    }

    fn q0(&self) -> f64 {
        match self.start {
            InitialPhase::Growing => 1.0,
            InitialPhase::Shrinking => 0.0,
            InitialPhase::Stationary => self.pi_plus(),
        }
    }

    /// Exact E[L(t)] without a floor.
    pub fn analytic_mean(&self, t: f64) -> f64 {
        let kappa = self.rate_catastrophe + self.rate_rescue;
        let w = self.v_plus + self.v_minus;
        self.l0 + self.drift() * t + w * (self.q0() - self.pi_plus()) * (1.0 - (-kappa * t).exp()) / kappa
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Unbounded,
    Bounded,
    Neutral,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SawtoothResult {
    pub times: Vec<f64>,
    /// Trajectory with index 0.
    pub trajectory: Vec<f64>,
    pub mean: Vec<f64>,
    pub stderr: Vec<f64>,
    pub drift: f64,
    pub regime: Regime,
    /// Exact mean when no floor is present.
    pub analytic_mean: Option<Vec<f64>>,
}

fn one_trajectory(p: &TelegraphParams, times: &[f64], seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut growing = match p.start {
        InitialPhase::Growing => true,
        InitialPhase::Shrinking => false,
        InitialPhase::Stationary => rng.random::<f64>() < p.pi_plus(),
    };
    let wait = |growing: bool, rng: &mut ChaCha8Rng| {
        let r = if growing { p.rate_catastrophe } else { p.rate_rescue };
        if r > 0.0 {
            Exp::new(r).expect("positive rate").sample(rng)
        } else {
            f64::INFINITY
        }
    };
    let mut t = 0.0;
    let mut l = p.l0;
    let mut next = wait(growing, &mut rng);
    let mut out = Vec::with_capacity(times.len());
    for &ts in times {
        while t < ts {
            let to_sample = ts - t;
            let span = next.min(to_sample);
            if !growing && p.floor && p.v_minus > 0.0 && l <= p.v_minus * span {
                // hits the floor first: rescued on the spot
                t += l / p.v_minus;
                l = 0.0;
                growing = true;
                next = wait(true, &mut rng);
                continue;
            }
            l += if growing { p.v_plus } else { -p.v_minus } * span;
            if next < to_sample {
                t += span;
                growing = !growing;
                next = wait(growing, &mut rng);
            } else {
                t = ts;
                next -= span;
            }
        }
        out.push(l);
    }
    out
}

/// Ensemble of `n_traj` telegraph trajectories with seeds `seed + i`.
pub fn sawtooth_series(
    params: &TelegraphParams,
    t_max: f64,
    n_samples: usize,
    n_traj: usize,
    seed: u64,
) -> Result<SawtoothResult> {
    params.validate()?;
    require(t_max > 0.0 && n_samples >= 2 && n_traj >= 1, || "need t_max > 0, >= 2 samples, >= 1 trajectory".into())?;
    let times = crate::numerics::linspace(0.0, t_max, n_samples);
    let runs: Vec<Vec<f64>> = (0..n_traj)
        .into_par_iter()
        .map(|i| one_trajectory(params, &times, seed.wrapping_add(i as u64)))
        .collect();
    let nt = n_traj as f64;
    let mut sum = vec![0.0; n_samples];
    for r in &runs {
        for (s, v) in sum.iter_mut().zip(r) {
            *s += v;
        }
    }
    let mean: Vec<f64> = sum.iter().map(|s| s / nt).collect();
    let mut sq = vec![0.0; n_samples];
    for r in &runs {
        for ((s, v), m) in sq.iter_mut().zip(r).zip(&mean) {
            *s += (v - m).powi(2);
        }
    }
    let stderr = sq
        .iter()
        .map(|s| if n_traj > 1 { (s / (nt - 1.0) / nt).sqrt() } else { 0.0 })
        .collect();
    let drift = params.drift();
    let regime = if drift > 0.0 {
        Regime::Unbounded
    } else if drift < 0.0 {
        Regime::Bounded
    } else {
        Regime::Neutral
    };
    let analytic_mean = (!params.floor).then(|| times.iter().map(|&t| params.analytic_mean(t)).collect());
    Ok(SawtoothResult { trajectory: runs[0].clone(), times, mean, stderr, drift, regime, analytic_mean })
}
