use num_complex::Complex64;
use platoon_core::analysis::{
    direct_response, gamma_sequence, harmonic_test, hinf_norm, kappa_modulus_sq, make_block,
    minimal_block_test, open_loop, product_response, verify_eigen_identities, zeta_min_from, Band,
    FamilyTemplate, ProductForm, Verdict,
};
use platoon_core::{models, Error, PlatoonConfig, RationalTF};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn config(n: usize, gains: Vec<f64>, asym: Vec<f64>, vehicle: RationalTF, controller: RationalTF) -> PlatoonConfig {
    PlatoonConfig::new(n, gains, asym, vehicle, controller, 1.0).unwrap()
}

fn random_pd(rng: &mut ChaCha8Rng) -> RationalTF {
    let kp = rng.gen_range(0.2..4.0);
    let tau = rng.gen_range(0.01..0.5);
    let kd = tau * kp * rng.gen_range(1.5..20.0);
    models::filtered_pd(kp, kd, tau)
}

#[test]
fn hinf_of_second_order_resonance() {
    for zeta in [0.05, 0.1, 0.3, 0.5, 0.65] {
        let tf = RationalTF::from_coeffs(vec![1.0], vec![1.0, 2.0 * zeta, 1.0]).unwrap();
        let h = hinf_norm(|w| Ok(tf.eval(Complex64::new(0.0, w))?.norm()), &Band::default()).unwrap();
        let peak = 1.0 / (2.0 * zeta * (1.0 - zeta * zeta).sqrt());
        let w_peak = (1.0 - 2.0 * zeta * zeta).sqrt();
        assert!((h.gamma - peak).abs() < 1e-10 * peak, "zeta={zeta}: {} vs {peak}", h.gamma);
        assert!((h.omega0 - w_peak).abs() < 1e-5, "zeta={zeta}");
    }
}

#[test]
fn hinf_of_low_pass_is_dc() {
    let tf = RationalTF::from_coeffs(vec![2.0], vec![1.0, 1.0]).unwrap();
    let h = hinf_norm(|w| Ok(tf.eval(Complex64::new(0.0, w))?.norm()), &Band::default()).unwrap();
    assert_eq!(h.omega0, 0.0);
    assert!((h.gamma - 2.0).abs() < 1e-15);
}

#[test]
fn product_form_matches_state_space_broadly() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let single = RationalTF::from_coeffs(vec![1.0], vec![0.0, 1.0]).unwrap();
    let mut checked = 0;
    while checked < 40 {
        let n = rng.gen_range(2..=8);
        let (vehicle, controller) = if rng.gen_bool(0.5) {
            (single.clone(), models::proportional(rng.gen_range(0.3..3.0)))
        } else {
            (models::double_integrator(), random_pd(&mut rng))
        };
        let gains = (0..n - 1).map(|_| rng.gen_range(0.3..4.0)).collect();
        let asym = (0..n - 1).map(|_| rng.gen_range(0.0..2.0)).collect();
        let cfg = config(n, gains, asym, vehicle, controller);
        if !ProductForm::new(&cfg).unwrap().all_stable().unwrap() {
            continue;
        }
        checked += 1;
        for w in [0.03, 0.2, 1.0, 4.0, 20.0] {
            let p = product_response(&cfg, w).unwrap();
            let d = direct_response(&cfg, w).unwrap();
            assert!((p - d).norm() <= 1e-7 * d.norm(), "n={n} w={w}: {p} vs {d}");
        }
    }
}

#[test]
fn two_integrator_blocks_peak_above_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let band = Band::default();
    for _ in 0..60 {
        let controller = random_pd(&mut rng);
        let m = models::double_integrator().series(&controller);
        let lambda = rng.gen_range(0.05..10.0);
        if !make_block(lambda, &m).unwrap().is_stable().unwrap() {
            continue;
        }
        let t = minimal_block_test(&m, lambda, lambda, &band).unwrap();
        assert!(t.hinf_gamma_min > 1.0, "peak {} for lambda {lambda}", t.hinf_gamma_min);
        let alpha = t.alpha.expect("peak away from DC");
        assert!(alpha < -0.5, "alpha {alpha}");
    }
}

#[test]
fn zeta_min_is_minimum_over_kappa() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..200 {
        let alpha = rng.gen_range(-3.0..-0.5);
        let beta = rng.gen_range(-3.0..3.0);
        let kmax = rng.gen_range(1.0..30.0);
        let Ok(z) = zeta_min_from(alpha, beta, kmax) else { continue };
        let brute = (0..=20_000)
            .map(|i| 1.0 + (kmax - 1.0) * i as f64 / 20_000.0)
            .filter_map(|k| kappa_modulus_sq(k, alpha, beta).ok())
            .fold(f64::INFINITY, f64::min)
            .sqrt();
        assert!(z <= brute + 1e-9, "{z} vs {brute}");
        assert!(z >= brute - 1e-4 * brute.max(1.0), "{z} vs {brute}");
    }
}

#[test]
fn kappa_modulus_matches_direct_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..500 {
        let (k, a, b) = (rng.gen_range(0.5..20.0), rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let z = Complex64::new(a, b) * k;
        let direct = (z / (z + 1.0)).norm_sqr();
        let formula = kappa_modulus_sq(k, a, b).unwrap();
        assert!((direct - formula).abs() < 1e-9 * (1.0 + direct));
    }
}

#[test]
fn growth_lower_bound_with_varied_gains() {
    let template = FamilyTemplate {
        gains: vec![1.0, 1.5, 2.0],
        asymmetries: vec![0.5, 0.3],
        vehicle: models::double_integrator(),
        controller: models::benchmark_controller(),
        ref_distance: 1.0,
    };
    let ns: Vec<usize> = (4..=24).step_by(4).collect();
    for row in gamma_sequence(&template, &ns, &Band::default()).unwrap() {
        let lower = row.zeta_min_lower.expect("zeta defined");
        assert!(row.gamma >= lower, "n={}: {} < {lower}", row.n, row.gamma);
    }
}

#[test]
fn verdicts() {
    let benchmark = |n, eps| {
        PlatoonConfig::homogeneous(n, 1.0, eps, models::double_integrator(), models::benchmark_controller()).unwrap()
    };
    assert_eq!(harmonic_test(&benchmark(15, 0.5)).unwrap().verdict, Verdict::HarmonicallyUnstable);
    assert_eq!(harmonic_test(&benchmark(15, 0.0)).unwrap().verdict, Verdict::HarmonicallyUnstable);
    assert_eq!(harmonic_test(&benchmark(15, 1.0)).unwrap().verdict, Verdict::TestInconclusive);
    let unstable = benchmark(6, 0.5).with_models(models::double_integrator(), models::proportional(1.0));
    assert_eq!(harmonic_test(&unstable).unwrap().verdict, Verdict::UnstableBlocks);
}

#[test]
fn identities_reject_repeated_eigenvalues() {
    let cfg = PlatoonConfig::homogeneous(5, 1.0, 0.0, models::double_integrator(), models::benchmark_controller()).unwrap();
    assert!(matches!(verify_eigen_identities(&cfg), Err(Error::DefectiveSpectrum(_))));
}

#[test]
fn identities_hold_for_distinct_gains() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for _ in 0..30 {
        let n = rng.gen_range(3..=12);
        let gains = (0..n - 1).map(|_| rng.gen_range(0.5..2.0)).collect();
        let asym = (0..n - 1).map(|_| rng.gen_range(0.2..1.2)).collect();
        let cfg = config(n, gains, asym, models::double_integrator(), models::benchmark_controller());
        let r = verify_eigen_identities(&cfg).unwrap();
        assert_eq!(r.power_sums.len(), n - 2);
        assert!(r.max_residual() <= 1e-6, "{r:?}");
        assert!((r.inverse_sum_value - 1.0 / cfg.leader_gain()).abs() <= 1e-6);
    }
}

#[test]
fn open_loop_is_cascade() {
    let cfg = PlatoonConfig::homogeneous(3, 1.0, 0.5, models::double_integrator(), models::benchmark_controller()).unwrap();
    let s = Complex64::new(0.0, 0.7);
    let m = open_loop(&cfg).eval(s).unwrap();
    let expect = models::double_integrator().eval(s).unwrap() * models::benchmark_controller().eval(s).unwrap();
    assert!((m - expect).norm() < 1e-12 * expect.norm());
}
