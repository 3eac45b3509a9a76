use std::f64::consts::PI;

use contactify::contact::{self, S2Point};
use contactify::dynamics::{self, Gauge, Polynomial};
use contactify::integrality::{blocks_from_hermitian, build_report, isotropy_zero_basis, spectral_blocks};
use contactify::lie::{self, MatrixJson, PairingConvention};
use contactify::{orbit, sampling, verify};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Pure state over a Hopf image is the Bloch matrix `(I + p . sigma) / 2`.
#[test]
fn moment_map_is_bloch_matrix_of_hopf_image() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let x = sampling::sphere_point(&mut rng, 2);
        let [px, py, pz] = contact::hopf_map(&x).unwrap().coords();
        let rho = orbit::moment_map(x.vector());
        let m = rho.matrix();
        let half = |re: f64, im: f64| Complex64::new(re / 2.0, im / 2.0);
        let want = [half(1.0 + pz, 0.0), half(px, -py), half(px, py), half(1.0 - pz, 0.0)];
        for (got, want) in [m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]].iter().zip(want) {
            assert!((got - want).norm() < 1e-14);
        }
    }
}

#[test]
fn reeb_orbits_are_hopf_fibers() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..50 {
        let x = sampling::sphere_point(&mut rng, 2);
        let p = contact::hopf_map(&x).unwrap();
        for k in 0..16 {
            let y = contact::reeb_flow(&x, k as f64 * 0.4);
            assert!(contact::hopf_map(&y).unwrap().distance(&p) < 1e-14);
            assert!((orbit::moment_map(y.vector()).matrix() - orbit::moment_map(x.vector()).matrix()).norm() < 1e-14);
        }
        // half period of e^{2it} closes the fiber
        assert!((contact::reeb_flow(&x, PI).vector() - x.vector()).norm() < 1e-14);
    }
}

#[test]
fn lifted_flow_projects_to_base_flow() {
    let h: Polynomial = serde_json::from_str(
        r#"{"constant": 0.2, "linear": [0.1, -0.4, 0.3], "quadratic": [[0.3, 0.1, 0], [0.1, -0.2, 0.2], [0, 0.2, 0.1]]}"#,
    )
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for gauge in [Gauge::Orthogonal, Gauge::Constant(0.7)] {
        let x0 = sampling::sphere_point(&mut rng, 2);
        let lifted = dynamics::el_flow(&h, &x0, 3.0, 1e-3, gauge).unwrap();
        let base = dynamics::flow_s2(&h, &contact::hopf_map(&x0).unwrap(), 3.0, 1e-3).unwrap();
        assert_eq!(base.len(), lifted.len());
        for (p, q) in lifted.projected().iter().zip(&base) {
            assert!(p.distance(q) < 1e-9);
        }
    }
}

#[test]
fn integrality_report_agrees_with_numerical_orbit_data() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..40 {
        let blocks = spectral_blocks(verify::random_rational_spectrum(&mut rng, 5)).unwrap();
        let Ok(report) = build_report(&blocks) else {
            continue;
        };
        let mu = sampling::hermitian_with_spectrum(&mut rng, &blocks.diagonal());
        let info = orbit::orbit_info(&mu).unwrap();
        assert_eq!(info.isotropy_dim as u64, report.isotropy_dim);
        assert_eq!(info.orbit_dim as u64, report.orbit_dim);
        let zero = isotropy_zero_basis(&mu, PairingConvention::Unit).unwrap();
        assert_eq!(zero.len() as u64, report.isotropy_zero_dim);
        // rationalizing the conjugated matrix recovers the exact blocks
        assert_eq!(blocks_from_hermitian(&mu).unwrap(), blocks);
    }
}

#[test]
fn matrix_json_round_trip_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 1..5 {
        let a = sampling::hermitian(&mut rng, n);
        let text = serde_json::to_string(&MatrixJson::from_hermitian(&a)).unwrap();
        let back: MatrixJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_hermitian().unwrap(), a);

        let u = sampling::unitary(&mut rng, n);
        let back: MatrixJson = serde_json::from_str(&serde_json::to_string(&MatrixJson::from_unitary(&u)).unwrap()).unwrap();
        assert!(back.to_hermitian().is_err() || n == 1);
        assert_eq!(back.to_unitary().unwrap(), u);
    }
}

#[test]
fn action_of_solution_is_stationary_under_reeb_reparametrisation() {
    // Reeb-direction perturbations change the gauge, not the projected path
    let x0 = contactify::contact::SpherePoint::normalize(lie::CVector::from_vec(vec![
        Complex64::new(0.5, 0.5),
        Complex64::new(0.1, -0.7),
    ]))
    .unwrap();
    let traj = dynamics::el_flow(&dynamics::LinearZ, &x0, 2.0, 1e-3, Gauge::Orthogonal).unwrap();
    let span = 2.0;
    let delta: Vec<lie::CVector> = traj
        .times()
        .iter()
        .zip(traj.states())
        .map(|(t, x)| x.vector() * Complex64::new(0.0, (PI * t / span).sin()))
        .collect();
    let mut delta = delta;
    let last = delta.len() - 1;
    delta[0] = lie::CVector::zeros(2);
    delta[last] = lie::CVector::zeros(2);
    let d = dynamics::stationarity_test(&traj, &dynamics::LinearZ, &delta, 1e-4).unwrap();
    assert!(d.abs() < 1e-6, "{d}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hopf_image_is_equivariant_under_phase_and_unit_norm(seed in any::<u64>(), phi in -10.0f64..10.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = sampling::sphere_point(&mut rng, 2);
        let p = contact::hopf_map(&x).unwrap();
        let q = contact::hopf_map(&x.rotate_phase(phi)).unwrap();
        prop_assert!(p.distance(&q) < 1e-13);
        let [a, b, c] = p.coords();
        prop_assert!(((a * a + b * b + c * c).sqrt() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn kks_on_pure_states_matches_symplectic_form(seed in any::<u64>(), n in 2usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = sampling::sphere_point(&mut rng, n);
        let y = sampling::sphere_tangent(&mut rng, &x);
        let y2 = sampling::sphere_tangent(&mut rng, &x);
        let rho = orbit::moment_map(x.vector());
        let t = orbit::pure_state_generator(&y);
        let t2 = orbit::pure_state_generator(&y2);
        let kks = orbit::kks_form(&rho, &t, &t2, PairingConvention::Half).unwrap();
        let lie_form = lie::pairing(&rho, &t.bracket(&t2).unwrap(), PairingConvention::Half).unwrap();
        prop_assert!((kks - lie_form).abs() < 1e-12);
        prop_assert!((kks - contact::hermitian_inner(y.vector(), y2.vector()).im).abs() < 1e-10);
    }

    #[test]
    fn projection_distance_is_a_metric(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (sampling::s2_point(&mut rng), sampling::s2_point(&mut rng), sampling::s2_point(&mut rng));
        prop_assert!(a.distance(&a) < 1e-15);
        prop_assert!((a.distance(&b) - b.distance(&a)).abs() < 1e-15);
        prop_assert!(a.distance(&c) <= a.distance(&b) + b.distance(&c) + 1e-14);
        let north = S2Point::new([0.0, 0.0, 1.0]).unwrap();
        prop_assert!(north.distance(&a) <= 2.0 + 1e-15);
    }
}
