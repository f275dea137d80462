//! Keys accepted by each subcommand.

use std::fmt::Write;

use crate::config::Subcommand;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Float,
    /// Non-negative integer; `1e3` style literals are accepted when exact.
    Count,
    Bool,
    Choice(&'static [&'static str]),
    /// Single-line JSON.
    Json,
    /// Bare word or JSON string.
    Text,
}

#[derive(Debug, Clone, Copy)]
pub struct KeySpec {
    pub name: &'static str,
    pub kind: Kind,
    /// None: required. Some(""): optional without a default.
    pub default: Option<&'static str>,
    pub doc: &'static str,
}

const fn req(name: &'static str, kind: Kind, doc: &'static str) -> KeySpec {
    KeySpec { name, kind, default: None, doc }
}

const fn opt(name: &'static str, kind: Kind, default: &'static str, doc: &'static str) -> KeySpec {
    KeySpec { name, kind, default: Some(default), doc }
}

use Kind::*;

/// Keys every scenario may set.
pub const COMMON: &[KeySpec] = &[
    opt("name", Text, "", "scenario label"),
    opt("subcommand", Text, "", "must agree with the command line when both are given"),
    opt("seed", Count, "0", "64-bit RNG seed; --seed overrides"),
    opt("output_dir", Text, "", "output directory; --out overrides"),
];

const KINK: &[KeySpec] = &[
    req("sigma", Float, "dimensionless forcing, |sigma| < 0.3849"),
    opt("xi_min", Float, "-10", "profile window start"),
    opt("xi_max", Float, "10", "profile window end"),
    opt("n_points", Count, "201", "profile samples"),
];

const EVOLVE: &[KeySpec] = &[
    req("M_kg", Float, "dimer mass"),
    req("A_J_m2", Float, "quadratic potential coefficient"),
    req("B_J_m4", Float, "quartic potential coefficient"),
    req("k_J_m2", Float, "neighbour stiffness"),
    req("R0_m", Float, "dimer spacing"),
    req("gamma_kg_s", Float, "friction coefficient"),
    req("E_V_m", Float, "driving field"),
    opt("q_C", Float, "5.7678358824e-18", "dimer charge, 36 e by default"),
    req("x_min_m", Float, "grid start"),
    req("x_max_m", Float, "grid end"),
    req("n_points", Count, "grid points"),
    req("dt_s", Float, "RK4 step"),
    req("n_steps", Count, "number of steps"),
    opt("x0_m", Float, "", "initial kink centre, grid midpoint by default"),
    opt("snapshot_every", Count, "0", "field snapshot stride; 0 keeps first and last"),
];

const DECOHERE: &[KeySpec] = &[
    req("H", Json, "Hamiltonian, rows of entries (number or [re, im])"),
    req("B", Json, "list of environment operators in the same format"),
    req("psi0", Json, "initial state vector, normalized on input"),
    req("dt", Float, "time step"),
    req("n_steps", Count, "number of steps"),
    opt("sample_every", Count, "1", "sampling stride"),
];

const TRAJECTORIES: &[KeySpec] = &[
    req("H", Json, "Hamiltonian, rows of entries (number or [re, im])"),
    req("B", Json, "list of environment operators in the same format"),
    req("psi0", Json, "initial state vector, normalized on input"),
    req("dt", Float, "time step"),
    req("n_steps", Count, "number of steps"),
    opt("sample_every", Count, "1", "sampling stride"),
    req("n_trajectories", Count, "ensemble size"),
    opt("channels", Json, "", "basis-index blocks, e.g. [[0,1],[2]], for the dispersion entropy"),
];

const GROWTH_DENSITY: &[KeySpec] = &[
    req("model", Choice(&["density", "sawtooth"]), "growth model"),
    req("delta0", Float, "initial density contrast"),
    req("a", Float, "linear coefficient, > 0"),
    req("b", Float, "cubic coefficient, > 0"),
    req("q0", Float, "initial deficit Q"),
    req("q_decay", Float, "Q(t) = q0 exp(-q_decay t)"),
    req("dt", Float, "RK4 step"),
    req("n_steps", Count, "number of steps"),
];

const GROWTH_SAWTOOTH: &[KeySpec] = &[
    req("model", Choice(&["density", "sawtooth"]), "growth model"),
    req("v_plus", Float, "growth speed"),
    req("v_minus", Float, "shrinkage speed"),
    req("rate_catastrophe", Float, "growth -> shrinkage switching rate"),
    req("rate_rescue", Float, "shrinkage -> growth switching rate"),
    req("l0", Float, "initial length"),
    req("floor", Bool, "rescue instantly at zero length"),
    req("start", Choice(&["growing", "shrinking", "stationary"]), "initial phase"),
    req("t_max", Float, "simulated time"),
    req("n_samples", Count, "sample times"),
    req("n_trajectories", Count, "ensemble size"),
];

const FLOW_COUPLING: &[KeySpec] = &[
    req("model", Choice(&["coupling", "fokker-planck"]), "flow model"),
    req("c0", Float, "central charge at g = 0, > 25"),
    req("kappa", Json, "curvatures: C(g) = c0 + sum kappa_i g_i^2 / 2"),
    req("metric", Float, "isotropic metric G, > 0"),
    req("g0", Json, "initial couplings"),
    opt("g_dot0", Json, "", "initial coupling velocities, zero by default"),
    req("q_norm", Choice(&["friction", "ctheorem"]), "Q(C) = sqrt((C - 25)/6) or sqrt((C - 25)/3)"),
    req("dt", Float, "RK4 step"),
    req("n_steps", Count, "number of steps"),
    opt("sample_every", Count, "1", "sampling stride"),
];

const FLOW_FP: &[KeySpec] = &[
    req("model", Choice(&["coupling", "fokker-planck"]), "flow model"),
    req("lambda_min", Float, "grid start"),
    req("lambda_max", Float, "grid end"),
    req("n_points", Count, "grid nodes"),
    req("mean0", Float, "initial Gaussian mean"),
    req("sd0", Float, "initial Gaussian width"),
    req("beta_slope", Float, "beta(lambda) = beta_slope * lambda"),
    req("q0", Float, "initial deficit Q"),
    req("q_decay", Float, "Q(tau) = q0 exp(-q_decay tau)"),
    req("dtau", Float, "step"),
    req("n_steps", Count, "number of steps"),
    opt("snapshot_every", Count, "0", "distribution snapshot stride; 0 keeps first and last"),
];

const BLACKHOLE: &[KeySpec] = &[
    req("a", Float, "pulse amplitude, > 0"),
    req("kind", Choice(&["infalling", "reflected"]), "pulse shape"),
    req("x_min", Float, "grid start"),
    req("x_max", Float, "grid end"),
    req("n_points", Count, "grid points"),
    req("times", Json, "time slices: numbers or \"late\""),
];

const COLLAPSE: &[KeySpec] = &[
    req("E_eV", Float, "energy scale of the coherent state"),
    req("N", Float, "number of coherent dimers"),
    opt("M_gus_eV", Float, "1e27", "string scale"),
    opt("m_eV", Float, "2.81481626448e9", "point-like mass, 3 proton masses by default"),
    opt("delta_x_m", Float, "4e-9", "superposition separation"),
    opt("target_s", Float, "1", "target collapse time for the point-like N estimate"),
];

const TDVA: &[KeySpec] = &[
    req("n_sites", Count, "lattice sites"),
    req("dx", Float, "lattice spacing"),
    req("A", Float, "quadratic coefficient"),
    req("B", Float, "quartic coefficient, > 0"),
    req("dt", Float, "RK4 step"),
    req("n_steps", Count, "number of steps"),
    opt("m_eff", Float, "", "vacuum regulator mass, sqrt(A) by default"),
    opt("mode", Choice(&["full", "frozen"]), "full", "evolve fluctuations or hold them at the vacuum"),
    opt("kink_x0", Float, "0", "initial kink centre"),
    opt("kink_v", Float, "0", "initial kink speed"),
    opt("sample_every", Count, "10", "sampling stride"),
];

/// Keys for a subcommand; `model` selects the variant of growth and flow.
pub fn keys(sub: Subcommand, model: Option<&str>) -> Option<&'static [KeySpec]> {
    Some(match (sub, model) {
        (Subcommand::Kink, _) => KINK,
        (Subcommand::Evolve, _) => EVOLVE,
        (Subcommand::Decohere, _) => DECOHERE,
        (Subcommand::Trajectories, _) => TRAJECTORIES,
        (Subcommand::Growth, Some("density")) => GROWTH_DENSITY,
        (Subcommand::Growth, Some("sawtooth")) => GROWTH_SAWTOOTH,
        (Subcommand::Flow, Some("coupling")) => FLOW_COUPLING,
        (Subcommand::Flow, Some("fokker-planck")) => FLOW_FP,
        (Subcommand::Blackhole, _) => BLACKHOLE,
        (Subcommand::CollapseTime, _) => COLLAPSE,
        (Subcommand::Tdva, _) => TDVA,
        _ => return None,
    })
}

/// Models accepted by subcommands that have variants.
pub fn models(sub: Subcommand) -> &'static [&'static str] {
    match sub {
        Subcommand::Growth => &["density", "sawtooth"],
        Subcommand::Flow => &["coupling", "fokker-planck"],
        _ => &[],
    }
}

fn kind_name(kind: Kind) -> String {
    match kind {
        Float => "float".into(),
        Count => "count".into(),
        Bool => "bool".into(),
        Choice(c) => c.join("|"),
        Json => "json".into(),
        Text => "text".into(),
    }
}

fn render_table(out: &mut String, keys: &[KeySpec]) {
    for k in keys {
        let status = match k.default {
            None => "required".to_string(),
            Some("") => "optional".to_string(),
            Some(d) => format!("default {d}"),
        };
        let _ = writeln!(out, "  {:<18} {:<28} {:<24} {}", k.name, kind_name(k.kind), status, k.doc);
    }
}

/// Human-readable key listing for `--print-schema`.
pub fn render(sub: Subcommand) -> String {
    let mut out = String::new();
    let variants: Vec<Option<&str>> = match models(sub) {
        [] => vec![None],
        m => m.iter().map(|s| Some(*s)).collect(),
    };
    for model in variants {
        match model {
            Some(m) => {
                let _ = writeln!(out, "{} (model = {m}):", sub.as_str());
            }
            None => {
                let _ = writeln!(out, "{}:", sub.as_str());
            }
        }
        render_table(&mut out, keys(sub, model).unwrap_or(&[]));
    }
    let _ = writeln!(out, "common:");
    render_table(&mut out, COMMON);
    out
}
