//! Central charges of the boosted Liouville background and the string scale.

use crate::error::{require, Error, Result};

/// (c_t, c_x) = (1 - 24 v^2 gamma^2, 1 + 24 gamma^2), gamma^2 = 1/(1 - v^2).
///
/// Negative `vs_squared` is the Wick-rotated branch, where c_t stays in [1, 25).
pub fn central_charges(vs_squared: f64) -> Result<(f64, f64)> {
    if vs_squared == 1.0 {
        return Err(Error::NullBoost { vs_squared });
    }
    require(vs_squared < 1.0 && vs_squared.is_finite(), || {
        format!("v_s^2 must be below 1, got {vs_squared}")
    })?;
    let g2 = 1.0 / (1.0 - vs_squared);
    Ok((1.0 - 24.0 * vs_squared * g2, 1.0 + 24.0 * g2))
}

/// Matter central charge 1 + 24 |v|^2 / (1 + |v|^2) for imaginary boost |v|.
pub fn wick_matter_charge(v_abs_squared: f64) -> f64 {
    1.0 + 24.0 * v_abs_squared / (1.0 + v_abs_squared)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deficit {
    pub gamma_vs: f64,
    /// rho = 0: no boost can be assigned.
    pub degenerate: bool,
}

/// gamma_vs = rho / 2.
pub fn friction_to_deficit(rho: f64) -> Result<Deficit> {
    require(rho >= 0.0, || format!("rho must be non-negative, got {rho}"))?;
    Ok(Deficit { gamma_vs: rho / 2.0, degenerate: rho == 0.0 })
}

/// v_s^2 = 1 - 1/gamma_vs^2.
pub fn boost_velocity_squared(gamma_vs: f64) -> f64 {
    if gamma_vs == 0.0 {
        f64::NEG_INFINITY
    } else {
        1.0 - 1.0 / (gamma_vs * gamma_vs)
    }
}

/// Real boost requires d^2 >= 8/9. The comparison allows a few ulps so that
/// d = sqrt(8/9) itself sits on the admissible side.
pub fn reality_check(d: f64) -> bool {
    d * d >= 8.0 / 9.0 * (1.0 - 4.0 * f64::EPSILON)
}

/// String length unit in metres for Regge slope `alpha_prime` (m^2) and
/// sound speed `v0` (m/s), reading sqrt(hbar alpha' / v0^2) with hbar = c = 1.
pub fn string_length(alpha_prime: f64, v0: f64) -> Result<f64> {
    require(alpha_prime > 0.0, || format!("alpha' must be positive, got {alpha_prime}"))?;
    require(v0 > 0.0, || format!("v0 must be positive, got {v0}"))?;
    Ok(alpha_prime.sqrt() * crate::units::C_LIGHT / v0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rest_frame_charges() {
        assert_eq!(central_charges(0.0).unwrap(), (1.0, 25.0));
        assert!(matches!(central_charges(1.0), Err(Error::NullBoost { .. })));
        assert!(central_charges(1.5).is_err());
    }

    #[test]
    fn wick_branch_is_bounded() {
        for &w in &[0.0, 0.3, 2.0, 1e6] {
            let (ct, _) = central_charges(-w).unwrap();
            assert!((ct - wick_matter_charge(w)).abs() < 1e-9);
            assert!((1.0..=25.0).contains(&ct));
        }
    }

    #[test]
    fn deficit_and_reality() {
        assert_eq!(friction_to_deficit(2.0).unwrap().gamma_vs, 1.0);
        assert!(friction_to_deficit(0.0).unwrap().degenerate);
        assert!(friction_to_deficit(-1.0).is_err());
        assert!(reality_check(1.0));
        assert!(!reality_check(0.9));
        // real boost exactly when the boost velocity is real
        for &d in &[0.5, 0.9, 0.95, 1.0, 2.0] {
            let g = friction_to_deficit(3.0 * f64::abs(d) / 2f64.sqrt()).unwrap().gamma_vs;
            assert_eq!(reality_check(d), boost_velocity_squared(g) >= -1e-15);
        }
    }

    #[test]
    fn string_scale() {
        let l1 = string_length(1e-68, 1e3).unwrap();
        let l2 = string_length(2e-68, 1e3).unwrap();
        assert!((l2 / l1 - 2f64.sqrt()).abs() < 1e-14);
    }
}
