use platoon_core::analysis::product_response;
use platoon_core::sim::{build_state_space, simulate, LeaderSignal, SimScenario};
use platoon_core::{models, Error, PlatoonConfig};

fn benchmark(n: usize, eps: f64) -> PlatoonConfig {
    PlatoonConfig::homogeneous(n, 1.0, eps, models::double_integrator(), models::benchmark_controller()).unwrap()
}

fn max_gap(a: &[Vec<f64>], b: &[Vec<f64>], stride: usize) -> f64 {
    a.iter()
        .enumerate()
        .flat_map(|(k, row)| row.iter().zip(&b[stride * k]).map(|(x, y)| (x - y).abs()))
        .fold(0.0, f64::max)
}

#[test]
fn response_is_linear_in_amplitude() {
    let base = SimScenario::unit_step(benchmark(6, 0.5), 20.0, 0.005);
    let a = simulate(&base).unwrap();
    let b = simulate(&base.with_amplitude_scaled(-2.5)).unwrap();
    for (ra, rb) in a.deviations.iter().zip(&b.deviations) {
        for (x, y) in ra.iter().zip(rb) {
            assert!((y + 2.5 * x).abs() < 1e-12 * (1.0 + x.abs()));
        }
    }
}

#[test]
fn sine_steady_state_matches_frequency_response() {
    let cfg = benchmark(4, 0.5);
    let omega = 0.8;
    let t_end = 120.0;
    let sc = SimScenario {
        cfg: cfg.clone(),
        leader_signal: LeaderSignal::Sine { amplitude: 1.0, omega },
        t_end,
        dt: 0.002,
    };
    let ts = simulate(&sc).unwrap();
    let last = ts.last_vehicle();
    let period = 2.0 * std::f64::consts::PI / omega;
    let amp = ts
        .times
        .iter()
        .zip(&last)
        .filter(|(t, _)| **t > t_end - 3.0 * period)
        .map(|(_, x)| x.abs())
        .fold(0.0, f64::max);
    let expect = product_response(&cfg, omega).unwrap().norm() * cfg.leader_gain();
    assert!((amp - expect).abs() < 0.01 * expect, "{amp} vs {expect}");
}

#[test]
fn rk4_global_order() {
    let cfg = benchmark(2, 0.0);
    let run = |dt| simulate(&SimScenario::unit_step(cfg.clone(), 4.0, dt)).unwrap().deviations;
    let (h, h2, h4) = (run(0.025), run(0.0125), run(0.00625));
    let e1 = max_gap(&h, &h2, 2);
    let e2 = max_gap(&h2, &h4, 2);
    let order = (e1 / e2).log2();
    assert!((order - 4.0).abs() < 0.3, "observed order {order}");
}

#[test]
fn halving_dt_converges() {
    let cfg = benchmark(8, 0.5);
    let a = simulate(&SimScenario::unit_step(cfg.clone(), 30.0, 0.002)).unwrap();
    let b = simulate(&SimScenario::unit_step(cfg, 30.0, 0.001)).unwrap();
    assert!(max_gap(&a.deviations, &b.deviations, 2) < 1e-6);
}

#[test]
fn realization_matches_scaled_product_form() {
    for (n, mu) in [(3, 1.0), (6, 2.0), (10, 0.7)] {
        let cfg = PlatoonConfig::homogeneous(n, mu, 0.4, models::double_integrator(), models::benchmark_controller()).unwrap();
        let ss = build_state_space(&cfg).unwrap();
        for w in [0.05, 0.5, 3.0] {
            let h = ss.transfer(w, n - 2).unwrap();
            let p = product_response(&cfg, w).unwrap() * cfg.leader_gain();
            assert!((h - p).norm() < 1e-8 * p.norm(), "n={n} w={w}: {h} vs {p}");
        }
    }
}

#[test]
fn times_are_uniform() {
    let ts = simulate(&SimScenario::unit_step(benchmark(3, 0.5), 1.0, 0.01)).unwrap();
    assert_eq!(ts.times.len(), 101);
    assert_eq!(ts.vehicles(), 2);
    for (k, t) in ts.times.iter().enumerate() {
        assert!((t - k as f64 * 0.01).abs() < 1e-12);
    }
}

#[test]
fn rejects_bad_step() {
    assert!(matches!(
        simulate(&SimScenario::unit_step(benchmark(20, 0.5), 10.0, 0.02)),
        Err(Error::StepTooLarge { .. })
    ));
    assert!(simulate(&SimScenario::unit_step(benchmark(3, 0.5), 10.0, -1.0)).is_err());
}
