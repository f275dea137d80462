use mtsim_core::numerics::linspace;
use mtsim_core::rg::*;
use nalgebra::DMatrix;
use proptest::prelude::*;
use std::f64::consts::PI;

fn quadratic(q: f64, c_star: f64, metric: f64) -> FlowSpec<'static> {
    FlowSpec::gradient_flow(
        move |_| DMatrix::from_element(1, 1, metric),
        move |g| c_star + g[0] * g[0],
        |g| vec![2.0 * g[0]],
        move |c| if q > 0.0 { q } else { q_ctheorem(c) },
    )
}

#[test]
fn quadratic_flow_is_damped_oscillator() {
    // g'' + q g' + 2 g = 0, g(0) = 1, g'(0) = 0
    let q = 0.4;
    let spec = quadratic(q, 25.0, 1.0);
    let mut s = spec.new_state(vec![1.0], vec![0.0]);
    let dt = 1e-3;
    let h = q / 2.0;
    let w = (2.0 - h * h).sqrt();
    for _ in 0..50_000 {
        s = flow_step(&s, &spec, dt).unwrap();
        let t = s.t;
        let exact = (-h * t).exp() * ((w * t).cos() + h / w * (w * t).sin());
        assert!((s.g[0] - exact).abs() < 1e-9, "t {t}: {} vs {exact}", s.g[0]);
    }
    assert!(s.g[0].abs() < 1e-3);
    assert!((s.c - 25.0 - s.g[0] * s.g[0]).abs() < 1e-14);
}

#[test]
fn overdamped_settling_satisfies_c_theorem() {
    // C = 28 + g^2 keeps Q^2 = (C - 25)/3 >= 1 > 8 G kappa with G = 0.1.
    let spec = quadratic(0.0, 28.0, 0.1);
    let dt = 1e-3;
    let mut s = spec.new_state(vec![1.0], vec![0.0]);
    let (mut cs, mut qs) = (vec![s.c], vec![q_ctheorem(s.c)]);
    for _ in 0..20_000 {
        s = flow_step(&s, &spec, dt).unwrap();
        cs.push(s.c);
        qs.push(q_ctheorem(s.c));
    }
    assert!(c_flow_check(&cs, &qs, dt, 1e-6).unwrap());
    assert!(cs.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn oscillating_flow_breaks_pointwise_c_theorem() {
    // Underdamped: C'' + Q C' = 2 kappa (g'^2 - 2 G kappa g^2) turns positive.
    let spec = quadratic(0.2, 25.0, 1.0);
    let dt = 1e-3;
    let mut s = spec.new_state(vec![1.0], vec![0.0]);
    let (mut cs, mut qs) = (vec![s.c], vec![0.2]);
    for _ in 0..10_000 {
        s = flow_step(&s, &spec, dt).unwrap();
        cs.push(s.c);
        qs.push(0.2);
    }
    assert!(!c_flow_check(&cs, &qs, dt, 1e-6).unwrap());
}

#[test]
fn fabricated_increasing_convex_trace_fails() {
    let dt = 0.01;
    let cs: Vec<f64> = (0..100).map(|i| 25.0 + (i as f64 * dt).powi(2)).collect();
    assert!(!c_flow_check(&cs, &vec![1.0; 100], dt, 1e-6).unwrap());
    assert!(c_flow_check(&vec![27.0; 100], &vec![1.0; 100], dt, 0.0).unwrap());
}

#[test]
fn gradient_flow_c_decreases_on_average() {
    // Two couplings with an anisotropic positive-definite metric.
    let metric = DMatrix::from_row_slice(2, 2, &[1.0, 0.3, 0.3, 0.5]);
    let m2 = metric.clone();
    let spec = FlowSpec::gradient_flow(
        move |_| m2.clone(),
        |g| 26.0 + g[0] * g[0] + 2.0 * g[1] * g[1] + 0.5 * g[0] * g[1],
        |g| vec![2.0 * g[0] + 0.5 * g[1], 4.0 * g[1] + 0.5 * g[0]],
        q_friction,
    );
    assert!(spec.metric_min_eigenvalue(&[0.0, 0.0]) > 0.0);
    let dt = 1e-3;
    let minv = metric.try_inverse().unwrap();
    let mut s = spec.new_state(vec![1.0, -0.8], vec![0.0, 0.0]);
    let lyap = |s: &CouplingState| {
        let v = nalgebra::DVector::from_vec(s.g_dot.clone());
        0.5 * (v.transpose() * &minv * &v)[0] + s.c
    };
    let mut cs = vec![s.c];
    let mut l_prev = lyap(&s);
    for _ in 0..40_000 {
        s = flow_step(&s, &spec, dt).unwrap();
        let l = lyap(&s);
        assert!(l <= l_prev + 1e-12);
        l_prev = l;
        cs.push(s.c);
    }
    // window means after the first oscillation
    let w = 4000;
    let means: Vec<f64> = cs[w..].chunks(w).map(|c| c.iter().sum::<f64>() / c.len() as f64).collect();
    for m in means.windows(2) {
        assert!(m[1] <= m[0] + 1e-12, "{m:?}");
    }
}

#[test]
fn rg_kink_solves_flow_and_hits_fixed_points() {
    for &(a2, a4) in &[(1.0, -1.0), (0.7, 2.0), (-1.3, 0.4), (-0.5, -0.9)] {
        let spec = RGKinkSpec::new(a2, a4, 0.3).unwrap();
        let xs = linspace(-40.0, 40.0, 1000);
        let h = 1e-5;
        let worst = xs
            .iter()
            .map(|&x| {
                let fd = (rg_kink(&spec, x + h, 0.0) - rg_kink(&spec, x - h, 0.0)) / (2.0 * h);
                let exact = rg_kink_slope(&spec, x, 0.0);
                assert!((fd - exact).abs() < 1e-8);
                (exact - spec.beta(rg_kink(&spec, x, 0.0))).abs()
            })
            .fold(0.0, f64::max);
        assert!(worst < 1e-8, "({a2}, {a4}): {worst}");
        let (lo, hi) = spec.fixed_points();
        let far = 200.0 / a2.abs();
        let ends = [rg_kink(&spec, -far, 0.0), rg_kink(&spec, far, 0.0)];
        assert!(ends.iter().any(|e| (e - lo).abs() < 1e-12));
        assert!(ends.iter().any(|e| (e - hi).abs() < 1e-12));
        // travelling: depends on x - u t only
        let u = spec.u_wave();
        assert!((rg_kink(&spec, 1.0 + u * 2.0, 2.0) - rg_kink(&spec, 1.0, 0.0)).abs() < 1e-14);
    }
}

#[test]
fn printed_sign_fails_when_a2a4_positive() {
    let spec = RGKinkSpec::new(0.7, 2.0, 0.0).unwrap();
    let h = 1e-5;
    let x = 0.8;
    let t = |x| rg_kink_as_printed(&spec, x, 0.0);
    let fd = (t(x + h) - t(x - h)) / (2.0 * h);
    assert!((fd - spec.beta(t(x))).abs() > 1e-2);
    let neg = RGKinkSpec::new(1.0, -1.0, 0.0).unwrap();
    let tn = |x| rg_kink_as_printed(&neg, x, 0.0);
    let fdn = (tn(x + h) - tn(x - h)) / (2.0 * h);
    assert!((fdn - neg.beta(tn(x))).abs() < 1e-8);
}

fn q_for_diffusion(d: f64) -> f64 {
    (8.0 * PI * PI * d).powf(1.0 / 6.0)
}

#[test]
fn pure_diffusion_matches_heat_kernel() {
    let d = 0.1;
    let q = q_for_diffusion(d);
    let grid = linspace(-12.0, 12.0, 1201);
    let p0 = GridDistribution::gaussian(grid.clone(), 0.0, 1.0).unwrap();
    let dtau = 4e-4;
    let n = 10_000;
    let out = fokker_planck_evolve(&p0, |_| 0.0, |_| q, dtau, n).unwrap();
    let tau = dtau * n as f64;
    assert!((out.mass() - 1.0).abs() < 1e-6);
    assert!(out.p.iter().all(|&p| p >= 0.0));
    let var = 1.0 + 2.0 * d * tau;
    assert!((out.variance() - var).abs() < 1e-4 * var, "{} vs {var}", out.variance());
    let worst = grid
        .iter()
        .zip(&out.p)
        .map(|(&l, &p)| (p - (-(l * l) / (2.0 * var)).exp() / (2.0 * PI * var).sqrt()).abs())
        .fold(0.0, f64::max);
    assert!(worst < 1e-4, "{worst}");
}

#[test]
fn decaying_q_localizes() {
    let grid = linspace(-6.0, 8.0, 701);
    let p0 = GridDistribution::gaussian(grid, 1.0, 1.0).unwrap();
    let v0 = p0.variance();
    let q = |tau: f64| 1.2 * (-tau / 0.5).exp();
    let mut cur = p0;
    let mut vars = vec![v0];
    for _ in 0..40 {
        cur = fokker_planck_evolve(&cur, |l| l, q, 4e-4, 125).unwrap();
        vars.push(cur.variance());
        assert!((cur.mass() - 1.0).abs() < 1e-6);
        assert!(cur.p.iter().all(|&p| p >= 0.0));
    }
    let last = *vars.last().unwrap();
    assert!(last < v0 / 10.0, "final variance {last}");
    for w in vars[5..].windows(2) {
        assert!(w[1] < w[0]);
    }
    // the mean relaxes as exp(-tau) for linear drift, whatever D(tau) does
    assert!((cur.mean() - (-cur.tau).exp()).abs() < 1e-3, "{}", cur.mean());
}

#[test]
fn frozen_distribution_is_unchanged() {
    let grid = linspace(-1.0, 1.0, 21);
    let mut p = vec![0.0; 21];
    p[10] = 10.0;
    let d = GridDistribution::new(grid, p.clone(), 0.0).unwrap();
    let out = fokker_planck_evolve(&d, |_| 0.0, |_| 0.0, 0.1, 50).unwrap();
    assert_eq!(out.p, p);
}

#[test]
fn oversized_step_rejected() {
    let grid = linspace(-5.0, 5.0, 101);
    let d = GridDistribution::gaussian(grid, 0.0, 1.0).unwrap();
    let q = q_for_diffusion(1.0);
    let bound = fp_step_bound(0.1, 0.0, q);
    assert!(fokker_planck_evolve(&d, |_| 0.0, |_| q, 1.01 * bound, 1).is_err());
    assert!(fokker_planck_evolve(&d, |_| 0.0, |_| q, bound, 1).is_ok());
}

#[test]
fn growth_examples() {
    let s = growth_density(2.0, 1.0, 1.0, |_| 0.0, 0.1, 100).unwrap();
    assert!(s.delta.iter().all(|&d| d == 2.0));
    assert_eq!(s.sign_changes, 0);

    let (a, b, q) = (0.5, 2.0, 0.8);
    let r = -a * q + b * q * q * q;
    let s = growth_density(1.0, a, b, |_| q, 0.01, 500).unwrap();
    for (t, d) in s.t.iter().zip(&s.delta) {
        assert!((d - (r * t).exp()).abs() < 1e-9 * (r * t).exp());
    }

    let s = growth_density(1.0, 0.5, 2.0, |t| 1.5 * (-t / 3.0).exp(), 0.01, 2000).unwrap();
    assert_eq!(s.sign_changes, 1);
    assert!((s.crossover_q.unwrap() - (0.5f64 / 2.0).sqrt()).abs() < 1e-10);
    let tc = s.crossover_time.unwrap();
    assert!((tc - 3.0 * (1.5 / 0.5f64).ln()).abs() < 1e-9);
    // growth, then depletion: the density peaks at the crossover
    let imax = s.delta.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
    assert!((s.t[imax] - tc).abs() <= 0.01);
}

fn telegraph(vp: f64, vm: f64, kc: f64, kr: f64, floor: bool, start: InitialPhase) -> TelegraphParams {
    TelegraphParams { v_plus: vp, v_minus: vm, rate_catastrophe: kc, rate_rescue: kr, l0: 5.0, floor, start }
}

#[test]
fn telegraph_mean_matches_analytic_line() {
    let p = telegraph(1.0, 2.5, 0.4, 0.6, false, InitialPhase::Growing);
    let r = sawtooth_series(&p, 20.0, 21, 10_000, 7).unwrap();
    let exact = r.analytic_mean.as_ref().unwrap();
    for i in 0..r.times.len() {
        let z = (r.mean[i] - exact[i]).abs();
        assert!(z <= 3.0 * r.stderr[i].max(1e-12), "t {} z {}", r.times[i], z / r.stderr[i].max(1e-12));
    }
}

#[test]
fn symmetric_telegraph_is_flat() {
    let p = telegraph(1.0, 1.0, 0.5, 0.5, false, InitialPhase::Stationary);
    let r = sawtooth_series(&p, 10.0, 11, 10_000, 3).unwrap();
    assert_eq!(r.drift, 0.0);
    assert_eq!(r.regime, Regime::Neutral);
    for i in 0..r.times.len() {
        assert!((r.mean[i] - 5.0).abs() <= 3.0 * r.stderr[i].max(1e-12));
    }
}

#[test]
fn regimes_follow_drift_sign() {
    let up = sawtooth_series(&telegraph(2.0, 1.0, 0.5, 0.5, false, InitialPhase::Growing), 50.0, 11, 2000, 1).unwrap();
    assert_eq!(up.regime, Regime::Unbounded);
    assert!(up.mean[10] > up.mean[5] + 10.0);
    let down = sawtooth_series(&telegraph(1.0, 2.0, 0.5, 0.5, true, InitialPhase::Growing), 400.0, 9, 2000, 1).unwrap();
    assert_eq!(down.regime, Regime::Bounded);
    assert!(down.trajectory.iter().all(|&l| l >= 0.0));
    assert!((down.mean[8] - down.mean[4]).abs() < 5.0 * (down.stderr[8] + down.stderr[4]));
    assert!(down.analytic_mean.is_none());
}

#[test]
fn sawtooth_is_deterministic_and_validates() {
    let p = telegraph(1.0, 2.0, 0.3, 0.2, true, InitialPhase::Stationary);
    let a = sawtooth_series(&p, 10.0, 5, 100, 11).unwrap();
    let b = sawtooth_series(&p, 10.0, 5, 100, 11).unwrap();
    assert_eq!(a, b);
    assert!(sawtooth_series(&telegraph(-1.0, 1.0, 1.0, 1.0, false, InitialPhase::Growing), 1.0, 3, 1, 0).is_err());
}

#[test]
fn selection_rules_brute_force_scan() {
    // m in steps of 1/2, j in steps of 1/6 (so j_predicted lies on the grid)
    for n in 3u32..=24 {
        for mi in -40i32..=40 {
            let m = mi as f64 / 2.0;
            let found = (-300i32..=600).any(|ji| {
                let r = selection_rules(n, ji as f64 / 6.0, m).unwrap();
                r.allowed
            });
            assert_eq!(found, jointly_satisfiable(n, m), "N {n} m {m}");
            assert_eq!(found, n as f64 >= min_vertices(m) - 1e-12, "N {n} m {m}");
        }
    }
}

proptest! {
    #[test]
    fn fp_conserves_mass(mean in -1.0f64..1.0, sd in 0.3f64..1.5, qd in 0.2f64..1.2, drift in -1.0f64..1.0) {
        let grid = linspace(-8.0, 8.0, 321);
        let d0 = GridDistribution::gaussian(grid, mean, sd).unwrap();
        let b = fp_step_bound(0.05, 8.0 * drift.abs(), qd);
        let out = fokker_planck_evolve(&d0, |l| drift * l, |_| qd, 0.9 * b, 500).unwrap();
        prop_assert!((out.mass() - 1.0).abs() < 1e-6);
        prop_assert!(out.p.iter().all(|&p| p >= 0.0));
    }

    #[test]
    fn single_crossover(a in 0.1f64..2.0, b in 0.1f64..2.0, tau in 0.5f64..5.0) {
        let q0 = 2.0 * (a / b).sqrt();
        let s = growth_density(1.0, a, b, |t| q0 * (-t / tau).exp(), 0.01, (20.0 * tau / 0.01) as usize).unwrap();
        prop_assert_eq!(s.sign_changes, 1);
        prop_assert!((s.crossover_q.unwrap() - (a / b).sqrt()).abs() < 1e-10);
    }
}
