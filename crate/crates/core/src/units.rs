//! Physical constants (CODATA 2018) and unit conversions.

pub const HBAR: f64 = 1.054_571_817e-34; // J s
pub const HBAR_EV_S: f64 = 6.582_119_569e-16; // eV s
pub const HBAR_GEV_S: f64 = 6.582_119_569e-25; // GeV s
pub const HBAR_C_GEV_M: f64 = 1.973_269_804e-16; // GeV m
pub const C_LIGHT: f64 = 2.997_924_58e8; // m/s
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19; // C
pub const EV: f64 = 1.602_176_634e-19; // J
pub const PROTON_MASS_KG: f64 = 1.672_621_923_69e-27;
pub const PROTON_MASS_GEV: f64 = 0.938_272_088_16;

/// Charge carried by a tubulin dimer, 18 x 2e.
pub const DIMER_CHARGE: f64 = 36.0 * ELEMENTARY_CHARGE;

pub fn joule_to_ev(e: f64) -> f64 {
    e / EV
}

pub fn ev_to_joule(e: f64) -> f64 {
    e * EV
}

pub fn gev_to_ev(e: f64) -> f64 {
    e * 1e9
}

/// Length in metres to inverse GeV (natural units, ħ = c = 1).
pub fn metre_to_inv_gev(l: f64) -> f64 {
    l / HBAR_C_GEV_M
}

pub fn cm_to_m(l: f64) -> f64 {
    l * 1e-2
}
