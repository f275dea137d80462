//! Two-dimensional black-hole formation from a tachyon pulse.
//!
//! The metric is
//! ds^2 = -(1 - I1 - I2) dt^2 + (1 + I2) dx^2, with
//! I1(x, t) = int_x^inf [(dT/dx')^2 + (dT/dt)^2] dx' and
//! I2(x, t) = int_{-inf}^t (dT/dt') (dT/dx) dt'.
//! Both integrals are truncated where the pulse has decayed below 1e-12 and
//! evaluated by adaptive Gauss-Kronrod quadrature.

use rayon::prelude::*;

use crate::error::{require, Error, Result};
use crate::numerics::{bisect, integrate};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PulseKind {
    /// T = a e^{-x} sech 2(x + t)
    Infalling,
    /// T = a e^{-x} [sech 2(x + t) + sech 2(x - t)]
    Reflected,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TachyonPulse {
    pub amplitude: f64,
    pub kind: PulseKind,
}

const TRUNCATION: f64 = 1e-12;
const ABS_TOL: f64 = 1e-15;
const REL_TOL: f64 = 1e-12;

impl TachyonPulse {
    pub fn new(amplitude: f64, kind: PulseKind) -> Result<Self> {
        require(amplitude > 0.0 && amplitude.is_finite(), || {
            format!("pulse amplitude must be positive, got {amplitude}")
        })?;
        Ok(TachyonPulse { amplitude, kind })
    }

    /// (T, dT/dx, dT/dt) at (x, t).
    pub fn field(&self, x: f64, t: f64) -> (f64, f64, f64) {
        let env = self.amplitude * (-x).exp();
        let lobe = |s: f64| {
            let sech = 1.0 / s.cosh();
            (sech, sech * s.tanh())
        };
        let (s, st) = lobe(2.0 * (x + t));
        let (mut f, mut fx, mut ft) = (s, -s - 2.0 * st, -2.0 * st);
        if self.kind == PulseKind::Reflected {
            let (r, rt) = lobe(2.0 * (x - t));
            f += r;
            fx += -r - 2.0 * rt;
            ft += 2.0 * rt;
        }
        (env * f, env * fx, env * ft)
    }

    fn centres(&self, t: f64) -> Vec<f64> {
        match self.kind {
            PulseKind::Infalling => vec![-t],
            PulseKind::Reflected => vec![-t, t],
        }
    }

    /// I1 at (x, t) with its quadrature error estimate.
    fn spatial_integral(&self, x: f64, t: f64) -> (f64, f64, bool) {
        // integrand <= 13 a^2 e^{-2x'}; stop once that is below TRUNCATION
        let a2 = self.amplitude * self.amplitude;
        let upper = x.max(0.5 * (13.0 * 4.0 * a2 / TRUNCATION).ln()) + 1.0;
        let r = integrate(
            |xp| {
                let (_, fx, ft) = self.field(xp, t);
                fx * fx + ft * ft
            },
            x,
            upper,
            &self.centres(t),
            ABS_TOL,
            REL_TOL,
        );
        (r.value, r.error, r.converged)
    }

    /// I2 at (x, t) with its quadrature error estimate.
    fn temporal_integral(&self, x: f64, t: f64) -> (f64, f64, bool) {
        // |dT/dt dT/dx| <= 6 a^2 e^{-2x} sech^2 2(x +- t'), so the lobes have
        // decayed below TRUNCATION a quarter-log beyond their centres
        let scale = 12.0 * self.amplitude * self.amplitude * (-2.0 * x).exp() / TRUNCATION;
        let reach = (0.25 * scale.ln()).max(0.0);
        let first = match self.kind {
            PulseKind::Infalling => -x,
            PulseKind::Reflected => x.min(-x),
        };
        let lower = first - reach - 1.0;
        if t <= lower {
            return (0.0, 0.0, true);
        }
        let r = integrate(
            |tp| {
                let (_, fx, ft) = self.field(x, tp);
                ft * fx
            },
            lower,
            t,
            &[-x, x],
            ABS_TOL,
            REL_TOL,
        );
        (r.value, r.error, r.converged)
    }
}

/// Metric components on a grid at one time slice. The pulse is kept so that
/// the horizon can be refined between grid points.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricProfile {
    pub x_grid: Vec<f64>,
    pub t: f64,
    pub g_tt: Vec<f64>,
    pub g_xx: Vec<f64>,
    pub pulse: TachyonPulse,
}

/// (g_tt, g_xx) at a single point.
pub fn metric_at(pulse: &TachyonPulse, x: f64, t: f64) -> Result<(f64, f64)> {
    let (i1, e1, ok1) = pulse.spatial_integral(x, t);
    let (i2, e2, ok2) = pulse.temporal_integral(x, t);
    if !(ok1 && ok2) {
        return Err(Error::Quadrature { x, t, err: e1 + e2 });
    }
    Ok((-(1.0 - i1 - i2), 1.0 + i2))
}

pub fn metric_from_pulse(pulse: &TachyonPulse, x_grid: &[f64], t: f64) -> Result<MetricProfile> {
    require(!x_grid.is_empty(), || "empty grid".into())?;
    require(x_grid.iter().all(|x| x.is_finite()) && t.is_finite(), || "grid and time must be finite".into())?;
    let points: Vec<(f64, f64, f64, bool)> = x_grid
        .par_iter()
        .map(|&x| {
            let (i1, e1, ok1) = pulse.spatial_integral(x, t);
            let (i2, e2, ok2) = pulse.temporal_integral(x, t);
            (i1 + i2, i2, e1 + e2, ok1 && ok2)
        })
        .collect();
    let failed = points
        .iter()
        .zip(x_grid)
        .filter(|(p, _)| !p.3)
        .max_by(|a, b| a.0 .2.total_cmp(&b.0 .2));
    if let Some((p, &x)) = failed {
        return Err(Error::Quadrature { x, t, err: p.2 });
    }
    Ok(MetricProfile {
        x_grid: x_grid.to_vec(),
        t,
        g_tt: points.iter().map(|p| -(1.0 - p.0)).collect(),
        g_xx: points.iter().map(|p| 1.0 + p.1).collect(),
        pulse: *pulse,
    })
}

/// A time after which the pulse is negligible (< 1e-10) on `x_grid`.
pub fn late_time(pulse: &TachyonPulse, x_grid: &[f64]) -> f64 {
    let x_min = x_grid.iter().copied().fold(f64::INFINITY, f64::min);
    let x_max = x_grid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let a2 = pulse.amplitude * pulse.amplitude;
    // residual tails ~ a^2 e^{-2x} e^{-4(x + t)}
    let infalling = 0.25 * ((50.0 * a2 / 1e-10).ln() - 6.0 * x_min);
    let t = match pulse.kind {
        PulseKind::Infalling => infalling.max(5.0 - x_min),
        // the outgoing lobe leaves I1 ~ a^2 e^{-2t}
        PulseKind::Reflected => infalling.max(0.5 * (50.0 * a2 / 1e-10).ln()).max(x_max + 5.0),
    };
    t.max(0.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Horizon {
    /// Outermost zero of g_tt.
    pub x: f64,
    /// Number of sign changes of g_tt on the grid.
    pub sign_changes: usize,
    pub warning: Option<String>,
}

/// Outermost root of g_tt on the grid, refined by bisection on the
/// quadratures, or None without a sign change.
pub fn horizon_locate(profile: &MetricProfile) -> Result<Option<Horizon>> {
    let g = &profile.g_tt;
    let x = &profile.x_grid;
    let brackets: Vec<usize> = (1..g.len()).filter(|&i| (g[i - 1] > 0.0) != (g[i] > 0.0)).collect();
    let Some(&last) = brackets.last() else {
        return Ok(None);
    };
    let (lo, hi) = (x[last - 1], x[last]);
    let mut failure = None;
    let root = bisect(
        |xp| match metric_at(&profile.pulse, xp, profile.t) {
            Ok((gtt, _)) => gtt,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        lo,
        hi,
        1e-13,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let root = root.ok_or_else(|| Error::InvalidParameter("horizon bracket lost under refinement".into()))?;
    let n = brackets.len();
    Ok(Some(Horizon {
        x: root,
        sign_changes: n,
        warning: (n > 1).then(|| format!("g_tt changes sign {n} times; reporting the outermost root")),
    }))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdmFit {
    pub mass: f64,
    /// max |y - M e^{-2x}| / max |y| with y = 1 + g_tt, over the fit window;
    /// zero when max |y| < 1e-10.
    pub residual: f64,
    pub points: usize,
}

/// Least-squares fit of -g_tt = 1 - M e^{-2x} outside the horizon.
pub fn adm_mass(profile: &MetricProfile) -> Result<AdmFit> {
    let x_h = horizon_locate(profile)?.map(|h| h.x);
    let pts: Vec<(f64, f64)> = profile
        .x_grid
        .iter()
        .zip(&profile.g_tt)
        .filter(|(&x, _)| x_h.is_none_or(|h| x > h))
        .map(|(&x, &g)| (x, 1.0 + g))
        .collect();
    require(pts.len() >= 2, || "fewer than two exterior points to fit".into())?;
    let (num, den) = pts.iter().fold((0.0, 0.0), |(n, d), &(x, y)| {
        let e = (-2.0 * x).exp();
        (n + y * e, d + e * e)
    });
    let mass = num / den;
    let scale = pts.iter().fold(0.0f64, |m, p| m.max(p.1.abs()));
    let worst = pts.iter().fold(0.0f64, |m, &(x, y)| m.max((y - mass * (-2.0 * x).exp()).abs()));
    // below the late-time threshold the profile is flat and the shape is noise
    let residual = if scale < 1e-10 { 0.0 } else { worst / scale };
    if residual > 1e-3 {
        return Err(Error::NotAsymptotic { residual });
    }
    Ok(AdmFit { mass, residual, points: pts.len() })
}

/// M = e^a / sqrt(k - 2) with unit proportionality constant.
pub fn adm_mass_vs_k(k: f64, dilaton_a: f64) -> Result<f64> {
    if !(k > 2.0) {
        return Err(Error::AdmSingular { k });
    }
    require(dilaton_a.is_finite(), || "dilaton constant must be finite".into())?;
    Ok(dilaton_a.exp() / (k - 2.0).sqrt())
}
