use super::{lindblad_trace, CMatrix, CVector, DensityMatrix, OpenSystem, StateVector, C64};
use crate::error::{require, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairExponent {
    pub i: usize,
    pub f: usize,
    pub du: f64,
    /// Fitted rate K in ln|rho_if| = -K t.
    pub rate: f64,
    pub r2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayFit {
    /// D in K = D N (u_i - u_f)^2, least squares over pairs.
    pub d_fit: f64,
    pub pairs: Vec<PairExponent>,
    /// Worst R^2 of the per-pair linear fits in t.
    pub r2_min: f64,
    /// max |K / (D N du^2) - 1| over pairs.
    pub quadratic_deviation: f64,
    /// max |rho_ii(t) / rho_ii(0) - 1|: diagonal untouched.
    pub diagonal_deviation: f64,
    /// Set when r2_min < 0.99.
    pub flagged: bool,
}

/// Dephasing by a single operator sqrt(coupling N) diag(u), starting from the
/// uniform superposition over the grid.
pub fn coherence_decay_fit(u: &[f64], coupling: f64, n_atoms: f64, t_max: f64, n_samples: usize) -> Result<DecayFit> {
    require(u.len() >= 2, || "need at least two grid points".into())?;
    require(coupling > 0.0 && n_atoms > 0.0 && t_max > 0.0, || "coupling, N and t_max must be positive".into())?;
    require(n_samples >= 3, || "need at least 3 samples".into())?;
    let n = u.len();
    let g = (coupling * n_atoms).sqrt();
    let b = CMatrix::from_diagonal(&CVector::from_iterator(n, u.iter().map(|&x| C64::new(g * x, 0.0))));
    let sys = OpenSystem::new(CMatrix::zeros(n, n), vec![b])?;
    let psi = StateVector::normalized(CVector::from_element(n, C64::new(1.0, 0.0)))?;
    let span = u.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - u.iter().cloned().fold(f64::INFINITY, f64::min);
    let fastest = coupling * n_atoms * span * span;
    let sub = ((fastest * t_max / n_samples as f64 / 0.01).ceil() as usize).max(1);
    let dt = t_max / (n_samples * sub) as f64;
    let trace = lindblad_trace(&DensityMatrix::pure(&psi), &sys, dt, n_samples * sub, sub)?;
    let rho0 = &trace[0].1.entries;

    let diagonal_deviation = trace
        .iter()
        .flat_map(|(_, r)| (0..n).map(move |i| (r.entries[(i, i)].re / rho0[(i, i)].re - 1.0).abs()))
        .fold(0.0, f64::max);

    let mut pairs = vec![];
    for i in 0..n {
        for f in i + 1..n {
            let du = u[i] - u[f];
            if du == 0.0 {
                continue;
            }
            let pts: Vec<(f64, f64)> = trace
                .iter()
                .filter_map(|(t, r)| {
                    let ratio = (r.entries[(i, f)] / rho0[(i, f)]).norm();
                    (ratio > 1e-250).then(|| (*t, -ratio.ln()))
                })
                .collect();
            let (rate, r2) = linear_fit(&pts);
            pairs.push(PairExponent { i, f, du, rate, r2 });
        }
    }
    require(!pairs.is_empty(), || "all grid points coincide".into())?;
    let x: Vec<f64> = pairs.iter().map(|p| n_atoms * p.du * p.du).collect();
    let d_fit = pairs.iter().zip(&x).map(|(p, x)| p.rate * x).sum::<f64>() / x.iter().map(|x| x * x).sum::<f64>();
    let quadratic_deviation = pairs
        .iter()
        .zip(&x)
        .map(|(p, x)| (p.rate / (d_fit * x) - 1.0).abs())
        .fold(0.0, f64::max);
    let r2_min = pairs.iter().map(|p| p.r2).fold(f64::INFINITY, f64::min);
    Ok(DecayFit { d_fit, pairs, r2_min, quadratic_deviation, diagonal_deviation, flagged: r2_min < 0.99 })
}

/// Ordinary least squares y = a + b t; returns (b, R^2).
fn linear_fit(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let stt: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
    let sty: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sty / stt;
    let r2 = if syy == 0.0 { 1.0 } else { sty * sty / (stt * syy) };
    (slope, r2)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergySeries {
    pub t: Vec<f64>,
    pub mean: Vec<f64>,
    pub variance: Vec<f64>,
}

/// Tr(rho H) and Tr(rho H^2) - Tr(rho H)^2 along a trace.
pub fn energy_statistics(trace: &[(f64, DensityMatrix)], h: &CMatrix) -> EnergySeries {
    let h2 = h * h;
    let mut out = EnergySeries { t: vec![], mean: vec![], variance: vec![] };
    for (t, rho) in trace {
        let e = rho.expectation(h).re;
        out.t.push(*t);
        out.mean.push(e);
        out.variance.push(rho.expectation(&h2).re - e * e);
    }
    out
}
