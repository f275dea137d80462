use super::{ensemble_map, ChannelProjectors, CMatrix, OpenSystem, StateVector, C64};
use crate::error::{require, Result};

/// Channels with smaller weight are left out of the rate sum.
const CHANNEL_FLOOR: f64 = 1e-8;

/// K = -sum_k <P_k> ln <P_k>, with 0 ln 0 = 0.
pub fn dispersion_entropy(psi: &StateVector, channels: &ChannelProjectors) -> f64 {
    channels
        .probabilities(psi)
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.ln())
        .sum()
}

/// -sum_k (1 - p_k)/p_k R_k with R_k = sum_j |<P_k L_j P_k>|^2 and
/// L_j = sqrt(2) B_j. Returns the value and the number of excluded channels.
pub fn entropy_rate_rhs(psi: &StateVector, sys: &OpenSystem, channels: &ChannelProjectors) -> (f64, usize) {
    let s2 = C64::new(std::f64::consts::SQRT_2, 0.0);
    let mut excluded = 0;
    let mut total = 0.0;
    for (pk, p) in channels.projectors.iter().zip(channels.probabilities(psi)) {
        if p < CHANNEL_FLOOR {
            excluded += 1;
            continue;
        }
        let r: f64 = sys
            .lindblad_ops
            .iter()
            .map(|b| psi.expectation(&(pk * b * pk * s2)).norm_sqr())
            .sum();
        total -= (1.0 - p) / p * r;
    }
    (total, excluded)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyRateReport {
    pub times: Vec<f64>,
    pub k_mean: Vec<f64>,
    pub k_stderr: Vec<f64>,
    /// Second-order forward difference of the ensemble mean at t = 0.
    pub lhs_t0: f64,
    pub lhs_stderr: f64,
    /// Right side of the rate identity at t = 0 (deterministic).
    pub rhs_t0: f64,
    /// Ensemble mean of the right side at each sample time.
    pub rhs_mean: Vec<f64>,
    /// |lhs - rhs| within three standard errors (plus round-off slack).
    pub agree_t0: bool,
    /// Mean K never rises by more than three standard errors between samples.
    pub monotone: bool,
    pub excluded_channels: usize,
}

// Absolute slack for noiseless comparisons near zero.
const ROUNDOFF: f64 = 1e-12;

fn commutator_norm(a: &CMatrix, b: &CMatrix) -> f64 {
    (a * b - b * a).iter().fold(0.0, |m, z| m.max(z.norm()))
}

pub fn entropy_rate_check(
    psi0: &StateVector,
    sys: &OpenSystem,
    channels: &ChannelProjectors,
    dt: f64,
    n_steps: usize,
    every: usize,
    n_traj: usize,
    seed: u64,
) -> Result<EntropyRateReport> {
    for (k, p) in channels.projectors.iter().enumerate() {
        require(commutator_norm(&sys.h, p) <= 1e-10, || format!("H does not commute with P_{k}"))?;
    }
    require(n_steps >= 2 * every && every >= 1, || "need at least two sample intervals".into())?;
    require(n_traj >= 2, || "need at least two trajectories".into())?;
    let (times, runs) = ensemble_map(psi0, sys, dt, n_steps, every, n_traj, seed, |psi| {
        (dispersion_entropy(psi, channels), entropy_rate_rhs(psi, sys, channels))
    })?;
    let nt = n_traj as f64;
    let ns = times.len();
    let mut k_mean = vec![0.0; ns];
    let mut rhs_mean = vec![0.0; ns];
    let mut excluded = 0;
    for r in &runs {
        for (i, (k, (rhs, ex))) in r.iter().enumerate() {
            k_mean[i] += k / nt;
            rhs_mean[i] += rhs / nt;
            excluded = excluded.max(*ex);
        }
    }
    let mut k_var = vec![0.0; ns];
    for r in &runs {
        for (i, (k, _)) in r.iter().enumerate() {
            k_var[i] += (k - k_mean[i]).powi(2) / (nt - 1.0);
        }
    }
    let k_stderr: Vec<f64> = k_var.iter().map(|v| (v / nt).sqrt()).collect();

    let h = times[1] - times[0];
    let k0 = dispersion_entropy(psi0, channels);
    let per_traj: Vec<f64> = runs.iter().map(|r| (-3.0 * k0 + 4.0 * r[1].0 - r[2].0) / (2.0 * h)).collect();
    let lhs_t0 = per_traj.iter().sum::<f64>() / nt;
    let lhs_var = per_traj.iter().map(|x| (x - lhs_t0).powi(2)).sum::<f64>() / (nt - 1.0);
    let lhs_stderr = (lhs_var / nt).sqrt();
    let (rhs_t0, _) = entropy_rate_rhs(psi0, sys, channels);
    let agree_t0 = (lhs_t0 - rhs_t0).abs() <= 3.0 * lhs_stderr + ROUNDOFF;
    let monotone = (1..ns).all(|i| {
        k_mean[i] - k_mean[i - 1] <= 3.0 * (k_stderr[i].powi(2) + k_stderr[i - 1].powi(2)).sqrt() + ROUNDOFF
    });
    Ok(EntropyRateReport {
        times,
        k_mean,
        k_stderr,
        lhs_t0,
        lhs_stderr,
        rhs_t0,
        rhs_mean,
        agree_t0,
        monotone,
        excluded_channels: excluded,
    })
}
