//! Order-of-magnitude decoherence times.

use crate::error::{require, Result};
use crate::units::{HBAR_C_GEV_M, HBAR_EV_S, PROTON_MASS_GEV};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollapseInputs {
    /// Unification mass scale in eV, default 1e18 GeV.
    pub m_gus_ev: f64,
    /// Environment energy scale E in eV.
    pub energy_ev: f64,
    /// Number of participating dimers.
    pub n: f64,
    /// Mass of the moving lump in eV (rest energy).
    pub mass_ev: f64,
    /// Displacement in metres.
    pub delta_x_m: f64,
    pub hbar_ev_s: f64,
    pub hbar_c_ev_m: f64,
}

impl Default for CollapseInputs {
    fn default() -> Self {
        CollapseInputs {
            m_gus_ev: 1e27,
            energy_ev: 1.0,
            n: 1e12,
            mass_ev: 3.0 * PROTON_MASS_GEV * 1e9,
            delta_x_m: 4e-9,
            hbar_ev_s: HBAR_EV_S,
            hbar_c_ev_m: HBAR_C_GEV_M * 1e9,
        }
    }
}

impl CollapseInputs {
    pub fn validate(&self) -> Result<()> {
        let v = [self.m_gus_ev, self.energy_ev, self.n, self.mass_ev, self.delta_x_m, self.hbar_ev_s, self.hbar_c_ev_m];
        require(v.iter().all(|x| *x > 0.0 && x.is_finite()), || "collapse inputs must be positive".into())
    }
}

/// hbar M_gus / (E^2 N).
pub fn collapse_time_string(inp: &CollapseInputs) -> Result<f64> {
    inp.validate()?;
    Ok(inp.hbar_ev_s * inp.m_gus_ev / (inp.energy_ev * inp.energy_ev * inp.n))
}

/// (1/N) (M_gus/m)^3 / (m^3 dx^2) in natural units, converted to seconds.
pub fn collapse_time_pointlike(inp: &CollapseInputs) -> Result<f64> {
    inp.validate()?;
    let dx = inp.delta_x_m / inp.hbar_c_ev_m; // 1/eV
    let ratio = inp.m_gus_ev / inp.mass_ev;
    Ok(inp.hbar_ev_s * ratio.powi(3) / (inp.n * inp.mass_ev.powi(3) * dx * dx))
}

/// N for which the point-like estimate equals `target_s`.
pub fn pointlike_n_for_time(inp: &CollapseInputs, target_s: f64) -> Result<f64> {
    require(target_s > 0.0, || format!("target time must be positive, got {target_s}"))?;
    let one = CollapseInputs { n: 1.0, ..*inp };
    Ok(collapse_time_pointlike(&one)? / target_s)
}

/// K(0) / sum_k p_k (1 - p_k).
pub fn localization_ratio(k0: f64, channel_probs: &[f64]) -> Result<f64> {
    require(k0 >= 0.0, || format!("K(0) must be non-negative, got {k0}"))?;
    require(!channel_probs.is_empty(), || "need channel probabilities".into())?;
    require(channel_probs.iter().all(|&p| p > 0.0 && p < 1.0), || {
        "channel probabilities must lie in (0, 1)".into()
    })?;
    let den: f64 = channel_probs.iter().map(|p| p * (1.0 - p)).sum();
    Ok(k0 / den)
}

/// Ratio times the string collapse time; the ratio defaults to 1.
pub fn localization_time(inp: &CollapseInputs, ratio: Option<f64>) -> Result<f64> {
    let r = ratio.unwrap_or(1.0);
    require(r >= 0.0 && r.is_finite(), || format!("ratio must be non-negative, got {r}"))?;
    Ok(r * collapse_time_string(inp)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalings() {
        let base = CollapseInputs::default();
        let t = collapse_time_string(&base).unwrap();
        let t10 = collapse_time_string(&CollapseInputs { n: 1e13, ..base }).unwrap();
        let t2e = collapse_time_string(&CollapseInputs { energy_ev: 2.0, ..base }).unwrap();
        assert!((t / t10 - 10.0).abs() < 1e-12);
        assert!((t / t2e - 4.0).abs() < 1e-12);
        let p = collapse_time_pointlike(&base).unwrap();
        let p2 = collapse_time_pointlike(&CollapseInputs { n: 2e12, ..base }).unwrap();
        let px = collapse_time_pointlike(&CollapseInputs { delta_x_m: 8e-9, ..base }).unwrap();
        assert!((p / p2 - 2.0).abs() < 1e-12);
        assert!((p / px - 4.0).abs() < 1e-12);
    }

    #[test]
    fn localization() {
        let base = CollapseInputs::default();
        assert_eq!(localization_time(&base, None).unwrap(), collapse_time_string(&base).unwrap());
        assert_eq!(localization_ratio(0.0, &[0.5, 0.5]).unwrap(), 0.0);
        let r = localization_ratio(2f64.ln(), &[0.5, 0.5]).unwrap();
        assert!((r - 2.0 * 2f64.ln()).abs() < 1e-15);
        assert!(localization_ratio(1.0, &[1.0, 0.0]).is_err());
    }
}
