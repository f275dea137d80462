//! End-to-end acceptance checks. Run with `cargo test -p mtsim --test acceptance`.
//! One line per criterion; the process exits nonzero if any fails.

use mtsim_core::blackhole::*;
use mtsim_core::decoherence::*;
use mtsim_core::kink::*;
use mtsim_core::numerics::linspace;
use mtsim_core::rg::*;
use mtsim_core::tdva::*;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::SQRT_2;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::Instant;

type Outcome = (bool, String);

struct Suite {
    failed: usize,
}

impl Suite {
    fn run(&mut self, id: usize, name: &str, limit_s: f64, f: impl FnOnce() -> Outcome) {
        let t0 = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f));
        let secs = t0.elapsed().as_secs_f64();
        let (ok, detail) = match res {
            Ok(r) => r,
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                (false, format!("panicked: {msg}"))
            }
        };
        let in_time = secs < limit_s;
        let pass = ok && in_time;
        if !pass {
            self.failed += 1;
        }
        println!(
            "[{}] {id:>2} {name}: {detail} ({secs:.3} s, limit {limit_s} s{})",
            if pass { "PASS" } else { "FAIL" },
            if in_time { "" } else { ", too slow" }
        );
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn random_hermitian(n: usize, scale: f64, rng: &mut ChaCha8Rng) -> CMatrix {
    let a = DMatrix::from_fn(n, n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    (&a + a.adjoint()) * c(0.5 * scale, 0.0)
}

fn random_op(n: usize, scale: f64, rng: &mut ChaCha8Rng) -> CMatrix {
    DMatrix::from_fn(n, n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * scale)
}

fn random_state(n: usize, rng: &mut ChaCha8Rng) -> StateVector {
    StateVector::normalized(DVector::from_fn(n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))))
        .unwrap()
}

fn sigma_x() -> CMatrix {
    DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
}

fn sigma_z() -> CMatrix {
    DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
}

fn kink_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let xi = linspace(-10.0, 10.0, 201);
    let (mut worst, mut control) = (0.0f64, f64::INFINITY);
    for _ in 0..50 {
        let sigma = rng.random_range(-0.3..0.3);
        let r = solve_cubic(sigma).unwrap();
        let rho = 3.0 * r.d.abs() / SQRT_2;
        worst = worst.max(residual_ode(&r, rho, sigma, &xi));
        control = control.min(residual_ode(&r, rho + 0.05, sigma, &xi));
    }
    (worst < 1e-8 && control > 1e-3, format!("max residual {worst:.2e}, min control {control:.2e}"))
}

fn velocity_law() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    let mut exact_undamped = true;
    for _ in 0..1000 {
        let s: f64 = rng.random_range(0.02..0.38);
        let sigma = if rng.random::<bool>() { -s } else { s };
        let roots = solve_cubic(sigma).unwrap();
        let m = 10f64.powf(rng.random_range(-24.0..-20.0));
        let a = 10f64.powf(rng.random_range(-5.0..-2.0));
        let ratio = 10f64.powf(rng.random_range(-4.0..6.0));
        let v0: f64 = rng.random_range(10.0..1e4);
        let r0 = 8e-9;
        let mut p = MTParams {
            dimer_mass: m,
            potential_a: a,
            potential_b: 1e15,
            stiffness: m * (v0 / r0).powi(2),
            spacing: r0,
            friction: (ratio * 9.0 * roots.d * roots.d * m * a / 2.0).sqrt(),
            ..MTParams::reference()
        };
        let v = kink_velocity(&p, &roots).unwrap();
        let rho = reduce(&p, v).unwrap().rho;
        worst = worst.max((rho - 3.0 * roots.d.abs() / SQRT_2).abs());
        p.friction = 0.0;
        exact_undamped &= kink_velocity(&p, &roots).unwrap() == (p.stiffness / p.dimer_mass).sqrt() * p.spacing;
    }
    (worst < 1e-10 && exact_undamped, format!("max |rho - 3|d|/sqrt2| {worst:.2e}, undamped exact {exact_undamped}"))
}

fn paper_numbers() -> Outcome {
    let tt = transfer_time(1e-6, 2.0).unwrap();
    let inp = CollapseInputs::default();
    let ts = collapse_time_string(&inp).unwrap();
    let n = pointlike_n_for_time(&inp, 1.0).unwrap();
    let back = collapse_time_pointlike(&CollapseInputs { n, ..inp }).unwrap();
    let ok = tt == 5e-7 && (0.1..=10.0).contains(&ts) && (1e11..=1e13).contains(&n) && (back - 1.0).abs() < 1e-12;
    (ok, format!("transfer {tt:e} s, string {ts:.4} s, pointlike N {n:.3e}"))
}

fn traveling_wave() -> Outcome {
    let p = MTParams::reference();
    let kink = TravelingKink::new(&p, 0.0).unwrap();
    let s = FieldState::analytic_kink(&kink, linspace(-4e-6, 5e-6, 512), 0.0).unwrap();
    let dt = 5e-12;
    let steps = (transfer_time(1e-6, kink.v).unwrap() / dt).round() as usize;
    let out = evolve_pde(&s, &p, dt, steps).unwrap();
    let drift = shape_drift(&out, &kink);
    (drift < 0.01, format!("shape drift {:.3}% over {steps} steps", 100.0 * drift))
}

fn central_charge_check() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let vs2 = rng.random_range(-1e3..0.999);
        let (ct, cx) = central_charges(vs2).unwrap();
        worst = worst.max((ct + cx - 26.0).abs() / cx.abs().max(26.0));
    }
    let edge = (8.0f64 / 9.0).sqrt();
    let boundary = reality_check(edge) && !reality_check(edge * (1.0 - 1e-9)) && reality_check(-edge);
    (worst < 1e-12 && boundary, format!("max rel |c_t + c_x - 26| {worst:.1e}, boundary {boundary}"))
}

fn lindblad_integrity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut tr, mut herm, mut neg) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..100 {
        let n = 2 + i % 3;
        let ops = (0..1 + i % 2).map(|_| random_op(n, 0.5, &mut rng)).collect();
        let sys = OpenSystem::new(random_hermitian(n, 1.0, &mut rng), ops).unwrap();
        let rho = DensityMatrix::pure(&random_state(n, &mut rng));
        for (_, r) in lindblad_trace(&rho, &sys, 1e-3, 10_000, 100).unwrap() {
            let m = &r.entries;
            tr = tr.max((m.trace() - c(1.0, 0.0)).norm());
            herm = herm.max((m - m.adjoint()).camax());
            let sym = (m + m.adjoint()) * c(0.5, 0.0);
            neg = neg.max(-sym.symmetric_eigenvalues().min());
        }
    }
    let ok = tr < 1e-10 && herm < 1e-12 && neg < 1e-10;
    (ok, format!("trace err {tr:.1e}, hermiticity {herm:.1e}, negativity {neg:.1e}"))
}

fn unraveling_distance(psi0: &StateVector, sys: &OpenSystem, seed: u64) -> f64 {
    let dt = 1e-3;
    let ens = ensemble_density(psi0, sys, dt, 1000, 100, 10_000, seed).unwrap();
    let me = lindblad_trace(&DensityMatrix::pure(psi0), sys, dt, 1000, 100).unwrap();
    assert_eq!(ens.len(), 11);
    ens.iter().zip(&me).skip(1).map(|((_, a), (_, b))| trace_norm(&(&a.entries - &b.entries))).fold(0.0, f64::max)
}

fn unraveling_fidelity() -> Outcome {
    let qubit = OpenSystem::new(sigma_x() * c(0.3, 0.0), vec![sigma_z() * c(0.5f64.sqrt(), 0.0)]).unwrap();
    let plus = StateVector::normalized(DVector::from_element(2, c(1.0, 0.0))).unwrap();
    let d1 = unraveling_distance(&plus, &qubit, 100);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let sys3 = OpenSystem::new(random_hermitian(3, 1.0, &mut rng), vec![random_op(3, 0.5, &mut rng)]).unwrap();
    let psi3 = random_state(3, &mut rng);
    let d3 = unraveling_distance(&psi3, &sys3, 200);
    (d1 < 5e-2 && d3 < 5e-2, format!("max trace distance qubit {d1:.3e}, dim-3 {d3:.3e}"))
}

fn localization_theorem() -> Outcome {
    let ch = ChannelProjectors::from_blocks(3, &[vec![0, 1], vec![2]]).unwrap();
    let mut h = CMatrix::zeros(3, 3);
    h[(0, 0)] = c(0.4, 0.0);
    h[(1, 1)] = c(-0.2, 0.0);
    h[(0, 1)] = c(0.3, 0.1);
    h[(1, 0)] = c(0.3, -0.1);
    h[(2, 2)] = c(1.0, 0.0);
    let ops = ch.projectors.to_vec();
    let sys = OpenSystem::new(h, ops).unwrap();
    let psi = StateVector::normalized(DVector::from_vec(vec![c(0.3f64.sqrt(), 0.0), c(0.0, 0.0), c(0.7f64.sqrt(), 0.0)]))
        .unwrap();
    let r = entropy_rate_check(&psi, &sys, &ch, 1e-3, 2000, 10, 10_000, 11).unwrap();
    (
        r.monotone && r.agree_t0,
        format!(
            "monotone {}, dK/dt(0) = {:.4} +- {:.4} vs rate {:.4}",
            r.monotone, r.lhs_t0, r.lhs_stderr, r.rhs_t0
        ),
    )
}

fn decoherence_shape() -> Outcome {
    let u = [0.0, 0.5, 1.0, 1.5, 2.0];
    let f = coherence_decay_fit(&u, 0.3, 10.0, 1.0, 40).unwrap();
    let g = coherence_decay_fit(&u, 0.3, 20.0, 1.0, 40).unwrap();
    let rate = |fit: &DecayFit, du: f64| fit.pairs.iter().find(|p| (p.du.abs() - du).abs() < 1e-12).unwrap().rate;
    let quad = rate(&f, 1.0) / rate(&f, 0.5);
    let lin = f.pairs.iter().zip(&g.pairs).map(|(a, b)| (b.rate / a.rate - 2.0).abs()).fold(0.0, f64::max);
    let ok = !f.flagged && f.r2_min > 0.99 && g.r2_min > 0.99 && (quad - 4.0).abs() < 0.04 && lin < 0.02;
    (ok, format!("R2 min {:.5}, rate ratio du 2x {quad:.4}, N 2x deviation {lin:.1e}", f.r2_min.min(g.r2_min)))
}

fn black_hole() -> Outcome {
    let x = linspace(-0.5, 5.0, 56);
    let mut flat = 0.0f64;
    for kind in [PulseKind::Infalling, PulseKind::Reflected] {
        let p = TachyonPulse::new(1e-8, kind).unwrap();
        for t in [-3.0, 0.0, 2.0] {
            let m = metric_from_pulse(&p, &x, t).unwrap();
            for (a, b) in m.g_tt.iter().zip(&m.g_xx) {
                flat = flat.max((a + 1.0).abs()).max((b - 1.0).abs());
            }
        }
    }
    let mut adm_err = 0.0f64;
    for a in [0.5, 1.0, 2.0] {
        let p = TachyonPulse::new(a, PulseKind::Infalling).unwrap();
        let m = metric_from_pulse(&p, &x, late_time(&p, &x)).unwrap();
        let exact = 4.0 / 3.0 * a * a;
        adm_err = adm_err.max(((adm_mass(&m).unwrap().mass - exact) / exact).abs());
    }
    let p = TachyonPulse::new(1.0, PulseKind::Reflected).unwrap();
    let m = metric_from_pulse(&p, &x, late_time(&p, &x)).unwrap();
    let refl = m.g_tt.iter().map(|g| (g + 1.0).abs()).chain(m.g_xx.iter().map(|g| (g - 1.0).abs())).fold(0.0, f64::max);
    let ok = flat < 1e-12 && adm_err < 1e-2 && refl < 1e-4;
    (ok, format!("flatness {flat:.1e}, ADM rel err {adm_err:.1e}, reflected residual {refl:.1e}"))
}

fn centred_grid(n: usize, dx: f64) -> Vec<f64> {
    let half = 0.5 * dx * (n - 1) as f64;
    linspace(-half, half, n)
}

fn tdva_checks() -> Outcome {
    let p = QuarticPotential::new(1.0, 1.0).unwrap();

    let (n, dx) = (32, 0.5);
    let k = free_two_point(n, dx, p.default_mass()).unwrap();
    let s0 = SqueezedState::kink(centred_grid(n, dx), &p, &k, -1.5, 0.3).unwrap();
    let e0 = quantum_energy(&s0, &p, &k).unwrap();
    let mut drift = 0.0f64;
    tdva_evolve(&s0, &p, &k, 0.01, 1000, Mode::Full, 10, |_, s| {
        drift = drift.max(((quantum_energy(s, &p, &k).unwrap() - e0) / e0).abs());
    })
    .unwrap();

    let (n, dx, dt, steps) = (64, 0.25, 0.01, 1000);
    let k = free_two_point(n, dx, p.default_mass()).unwrap();
    let s0 = SqueezedState::kink(centred_grid(n, dx), &p, &k, -1.0, 0.3).unwrap();
    let q = tdva_evolve(&s0, &p, &k, dt, steps, Mode::FrozenFluctuations, 0, |_, _| {}).unwrap();
    let params = MTParams {
        dimer_mass: 1.0,
        stiffness: 1.0,
        spacing: 1.0,
        potential_a: 1.0,
        potential_b: 1.0,
        friction: 0.0,
        field: 0.0,
        charge: 0.0,
        ..MTParams::reference()
    };
    let f0 = FieldState::new(s0.grid_x.clone(), s0.c.as_slice().to_vec(), s0.d.as_slice().to_vec(), 0.0).unwrap();
    let f = evolve_pde(&f0, &params, dt, steps).unwrap();
    let frozen = q.c.iter().zip(&f.u).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);

    // E[U(z + sqrt(2w) xi)] by three-point Gauss-Hermite, exact through degree 5
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut smear = 0.0f64;
    for _ in 0..200 {
        let (a, b): (f64, f64) = (rng.random_range(-2.0..2.0), rng.random_range(0.1..3.0));
        let (z, w): (f64, f64) = (rng.random_range(-2.0..2.0), rng.random_range(0.0..1.0));
        let pot = QuarticPotential::new(a, b).unwrap();
        let u = |x: f64| -0.5 * a * x * x + 0.25 * b * x.powi(4);
        let s = (6.0 * w).sqrt();
        let gh = (2.0 * u(z) + 0.5 * u(z + s) + 0.5 * u(z - s)) / 3.0;
        let (m0, m1, m2) = pot.smeared(z, w);
        smear = smear
            .max((m0 - gh).abs())
            .max((m1 - smeared_derivative(&pot, 1, z, w)).abs())
            .max((m2 - smeared_derivative(&pot, 2, z, w)).abs())
            .max((pot.smeared(z, 0.0).0 - u(z)).abs());
    }
    let ok = drift < 1e-3 && frozen < 1e-6 && smear < 1e-11;
    (ok, format!("energy drift {drift:.2e}, frozen vs classical {frozen:.2e}, smearing {smear:.1e}"))
}

fn fokker_planck_and_growth() -> Outcome {
    let grid = linspace(-6.0, 8.0, 701);
    let mut cur = GridDistribution::gaussian(grid, 1.0, 1.0).unwrap();
    let v0 = cur.variance();
    let q = |tau: f64| 1.2 * (-tau / 0.5).exp();
    let mut mass = 0.0f64;
    for _ in 0..40 {
        cur = fokker_planck_evolve(&cur, |l| l, q, 4e-4, 125).unwrap();
        mass = mass.max((cur.mass() - 1.0).abs());
    }
    let collapse = cur.variance() / v0;

    let (a, b) = (0.5, 2.0);
    let s = growth_density(1.0, a, b, |t| 1.5 * (-t / 3.0).exp(), 0.01, 2000).unwrap();
    let cross = (s.crossover_q.unwrap() - (a / b).sqrt()).abs();

    let tp = TelegraphParams {
        v_plus: 1.0,
        v_minus: 2.5,
        rate_catastrophe: 0.4,
        rate_rescue: 0.6,
        l0: 5.0,
        floor: false,
        start: InitialPhase::Growing,
    };
    let r = sawtooth_series(&tp, 20.0, 21, 10_000, 7).unwrap();
    let exact = r.analytic_mean.as_ref().unwrap();
    let z = (1..r.times.len()).map(|i| (r.mean[i] - exact[i]).abs() / r.stderr[i]).fold(0.0, f64::max);
    let ok = mass < 1e-6 && collapse < 0.1 && s.sign_changes == 1 && cross < 1e-10 && z <= 3.0;
    (
        ok,
        format!(
            "mass err {mass:.1e}, variance ratio {collapse:.3}, crossover err {cross:.1e}, sawtooth max z {z:.2}"
        ),
    )
}

fn read_outputs(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap() != "manifest.json")
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    v.sort();
    v
}

fn determinism() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    let mut cfgs: Vec<PathBuf> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "cfg"))
        .collect();
    cfgs.sort();
    let tmp = tempfile::tempdir().unwrap();
    let mut differing = vec![];
    for cfg in &cfgs {
        let sc = mtsim_cli::parse_scenario(&std::fs::read_to_string(cfg).unwrap(), None).unwrap();
        let stem = cfg.file_stem().unwrap().to_string_lossy().into_owned();
        let (a, b) = (tmp.path().join(format!("{stem}-1")), tmp.path().join(format!("{stem}-8")));
        mtsim_cli::execute(&sc, &a, Some(1)).unwrap();
        mtsim_cli::execute(&sc, &b, Some(8)).unwrap();
        let (fa, fb) = (read_outputs(&a), read_outputs(&b));
        if fa.is_empty() || fa != fb {
            differing.push(stem);
        }
    }
    (
        differing.is_empty(),
        format!("{} scenarios at 1 and 8 threads, differing: {:?}", cfgs.len(), differing),
    )
}

fn main() {
    let mut s = Suite { failed: 0 };
    s.run(1, "kink exactness", 1.0, kink_exactness);
    s.run(2, "velocity law", 1.0, velocity_law);
    s.run(3, "quoted numbers", 0.1, paper_numbers);
    s.run(4, "traveling-wave transport", 30.0, traveling_wave);
    s.run(5, "central charges", 0.1, central_charge_check);
    s.run(6, "Lindblad integrity", 60.0, lindblad_integrity);
    s.run(7, "unraveling fidelity", 300.0, unraveling_fidelity);
    s.run(8, "localization theorem", 300.0, localization_theorem);
    s.run(9, "decoherence exponent shape", 60.0, decoherence_shape);
    s.run(10, "black hole", 60.0, black_hole);
    s.run(11, "squeezed-state dynamics", 120.0, tdva_checks);
    s.run(12, "Fokker-Planck and growth", 60.0, fokker_planck_and_growth);
    s.run(13, "determinism", 30.0, determinism);
    if s.failed > 0 {
        println!("{} of 13 criteria failed", s.failed);
        std::process::exit(1);
    }
    println!("all 13 criteria passed");
}
