//! Seeded invariant suites.
//!
//! Each suite draws `samples` random inputs from its own seeded stream,
//! measures the worst violation of one invariant, and compares it with a
//! tolerance. Suites are independent, so they run on separate threads and the
//! result does not depend on scheduling.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::contact::{self, tangent_basis};
use crate::dynamics::{self, Gauge, HamiltonianOnBase, HopfLift, LiftedHamiltonian, LinearZ, Polynomial};
use crate::error::Result;
use crate::integrality::{hbar_generator, hbar_quotients, spectral_blocks, Rational};
use crate::lie::{self, PairingConvention};
use crate::orbit;
use crate::sampling;

/// Structural tolerances may not be tightened below this.
pub const HARD_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub samples: usize,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

type SuiteFn = fn(&mut ChaCha8Rng, usize) -> Result<(usize, f64)>;

struct Suite {
    name: &'static str,
    tolerance: f64,
    run: SuiteFn,
}

const SUITES: &[Suite] = &[
    Suite { name: "lie.ad_invariance", tolerance: 1e-10, run: lie_ad_invariance },
    Suite { name: "lie.jacobi", tolerance: 1e-10, run: lie_jacobi },
    Suite { name: "lie.exp_group", tolerance: 1e-10, run: lie_exp_group },
    Suite { name: "lie.poisson", tolerance: 1e-10, run: lie_poisson },
    Suite { name: "lie.spectrum", tolerance: 1e-10, run: lie_spectrum },
    Suite { name: "orbit.kks_antisymmetry", tolerance: 1e-12, run: orbit_antisymmetry },
    Suite { name: "orbit.kks_quotient", tolerance: 1e-10, run: orbit_quotient },
    Suite { name: "orbit.kks_pure_state", tolerance: 1e-10, run: orbit_pure_state },
    Suite { name: "orbit.moment_equivariance", tolerance: 1e-12, run: orbit_moment },
    Suite { name: "orbit.reduced_form", tolerance: 1e-10, run: orbit_reduced },
    Suite { name: "integrality.hbar", tolerance: 0.0, run: integrality_hbar },
    Suite { name: "integrality.cross_dimension", tolerance: 0.0, run: integrality_cross },
    Suite { name: "contact.reeb", tolerance: 1e-12, run: contact_reeb },
    Suite { name: "contact.condition", tolerance: 1e-10, run: contact_condition },
    Suite { name: "contact.hopf", tolerance: 1e-12, run: contact_hopf },
    Suite { name: "contact.hopf_pullback", tolerance: 1e-10, run: contact_pullback },
    Suite { name: "dynamics.hamilton_equation", tolerance: 1e-10, run: dynamics_hamilton },
    Suite { name: "dynamics.el_residual", tolerance: 1e-12, run: dynamics_residual },
    Suite { name: "dynamics.projection", tolerance: 1e-6, run: dynamics_projection },
    Suite { name: "dynamics.energy", tolerance: 1e-8, run: dynamics_energy },
];

/// Names and default tolerances of all suites, in run order.
pub fn suites() -> Vec<(&'static str, f64)> {
    SUITES.iter().map(|s| (s.name, s.tolerance)).collect()
}

/// Validates a tolerance override: the suite must exist and the value may only
/// loosen the default, never below [`HARD_FLOOR`] for floating suites.
pub fn check_override(name: &str, value: f64) -> std::result::Result<(), String> {
    let suite = SUITES
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| format!("unknown suite '{name}'"))?;
    if !value.is_finite() || value < suite.tolerance || (suite.tolerance > 0.0 && value < HARD_FLOOR) {
        return Err(format!(
            "override for '{name}' must be at least the default {:e}, got {value:e}",
            suite.tolerance
        ));
    }
    Ok(())
}

/// Runs every suite with seed `seed` and `samples` draws each.
pub fn run_all(seed: u64, samples: usize, overrides: &BTreeMap<String, f64>) -> Result<Vec<SuiteReport>> {
    let results: Vec<Result<SuiteReport>> = std::thread::scope(|scope| {
        let handles: Vec<_> = SUITES
            .iter()
            .enumerate()
            .map(|(index, suite)| {
                scope.spawn(move || {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(index as u64);
                    let (used, max_error) = (suite.run)(&mut rng, samples)?;
                    let tolerance = overrides.get(suite.name).copied().unwrap_or(suite.tolerance);
                    Ok(SuiteReport {
                        suite: suite.name,
                        samples: used,
                        max_error,
                        tolerance,
                        passed: max_error <= tolerance,
                    })
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    });
    results.into_iter().collect()
}

fn dim(rng: &mut ChaCha8Rng, lo: usize, hi: usize) -> usize {
    rng.random_range(lo..=hi)
}

fn max_entry(m: &lie::CMatrix) -> f64 {
    m.iter().fold(0.0f64, |w, z| w.max(z.norm()))
}

fn lie_ad_invariance(rng: &mut ChaCha8Rng, samples: usize) -> Result<(usize, f64)> {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let n = dim(rng, 1, 5);
        let a = sampling::hermitian(rng, n);
        let t = sampling::anti_hermitian(rng, n);
        let u = sampling::unitary(rng, n);
        let c = PairingConvention::Half;
        let lhs = lie::pairing(&lie::coadjoint_action(&u, &a)?, &lie::adjoint_action(&u, &t)?, c)?;
        worst = worst.max((lhs - lie::pairing(&a, &t, c)?).abs());
    }
    Ok((samples, worst))
}

fn lie_jacobi(rng: &mut ChaCha8Rng, samples: usize) -> Result<(usize, f64)> {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let n = dim(rng, 1, 5);
        let (a, b, c) = (sampling::hermitian(rng, n), sampling::hermitian(rng, n), sampling::hermitian(rng, n));
        let j = lie::dual_bracket(&a, &lie::dual_bracket(&b, &c)?)?.matrix()
            + lie::dual_bracket(&b, &lie::dual_bracket(&c, &a)?)?.matrix()
            + lie::dual_bracket(&c, &lie::dual_bracket(&a, &b)?)?.matrix();
        worst = worst.max(max_entry(&j));
    }
    Ok((samples, worst))
}

fn lie_exp_group(rng: &mut ChaCha8Rng, samples: usize) -> Result<(usize, f64)> {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let n = dim(rng, 1, 5);
        let x = sampling::anti_hermitian(rng, n);
        let (s, t) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let lhs = lie::matrix_exp(&x.scale(s + t));
        let rhs = lie::matrix_exp(&x.scale(s)).compose(&lie::matrix_exp(&x.scale(t)))?;
        worst = worst.max(max_entry(&(lhs.matrix() - rhs.matrix())));
    }
    Ok((samples, worst))
}

fn lie_poisson(rng: &mut ChaCha8Rng, samples: usize) -> Result<(usize, f64)> {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let n = dim(rng, 1, 5);
        let mu = sampling::hermitian(rng, n);
        let (t, s) = (sampling::anti_hermitian(rng, n), sampling::anti_hermitian(rng, n));
        let c = PairingConvention::Half;
        let lhs = lie::pairing(&lie::hamiltonian_field_dual(&s, &mu)?, &t, c)?;
        let rhs = lie::pairing(&mu, &t.bracket(&s)?, c)?;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok((samples, worst))
}

fn lie_spectrum(rng: &mut ChaCha8Rng, samples: usize) -> Result<(usize, f64)> {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let n = dim(rng, 1, 5);
        let a = sampling::hermitian(rng, n);
        let after = lie::coadjoint_action(&sampling::unitary(rng, n), &a)?.eigenvalues();
        for (x, y) in a.eigenvalues().iter().zip(after) {
            worst = worst.max((x - y).abs());
        }
    }
    Ok((samples, worst))
}

fn orbit_antisymmetry(rng: &mut ChaCha8Rng, samples: usize) -> Result<(usize, f64)> {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let n = dim(rng, 1, 5);
        let mu = sampling::hermitian(rng, n);
        let (x, y) = (sampling::anti_hermitian(rng, n), sampling::anti_hermitian(rng, n));
        let c = PairingConvention::Half;
        worst = worst.max((orbit::kks_form(&mu, &x, &y, c)? + orbit::kks_form(&mu, &y, &x, c)?).abs());
    }
    Ok((samples, worst))
}

/// Spectrum with some repeated values, drawn from small integers.
fn repeated_spectrum(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-2..=2) as f64).collect()
}

fn orbit_quotient(rng: &mut ChaCha8Rng, samples: usize) -> Result<(usize, f64)> {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let n = dim(rng, 1, 4);
        let lambdas = repeated_spectrum(rng, n);
        let mu = sampling::hermitian_with_spectrum(rng, &lambdas);
        let (x, y) = (sampling::anti_hermitian(rng, n), sampling::anti_hermitian(rng, n));
        let c = PairingConvention::Half;
        let base = orbit::kks_form(&mu, &x, &y, c)?;
        for z in orbit::isotropy_algebra(&mu)?.basis {
            worst = worst.max((orbit::kks_form(&mu, &x.add(&z)?, &y, c)? - base).abs());
        }
    }
    Ok((samples, worst))
}

fn orbit_pure_state(rng: &mut ChaCha8Rng, samples: usize) -> Result<(usize, f64)> {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let n = dim(rng, 2, 4);
        let x = sampling::sphere_point(rng, n);
        let (y, y2) = (sampling::sphere_tangent(rng, &x), sampling::sphere_tangent(rng, &x));
        let rho = orbit::moment_map(x.vector());
        let lhs = orbit::kks_form(
            &rho,
            &orbit::pure_state_generator(&y),
            &orbit::pure_state_generator(&y2),
            PairingConvention::Half,
        )?;
        worst = worst.max((lhs - orbit::kks_pure_state(&x, &y, &y2)?).abs());
    }
    Ok((samples, worst))
}

fn orbit_moment(rng: &mut ChaCha8Rng, samples: usize) -> Result<(usize, f64)> {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let n = dim(rng, 1, 5);
        let x = sampling::sphere_point(rng, n);
        let u = sampling::unitary(rng, n);
        let lhs = orbit::moment_map(&u.apply(x.vector())?);
        let rhs = lie::coadjoint_action(&u, &orbit::moment_map(x.vector()))?;
        worst = worst.max(max_entry(&(lhs.matrix() - rhs.matrix())));
    }
    Ok((samples, worst))
}

fn orbit_reduced(rng: &mut ChaCha8Rng, samples: usize) -> Result<(usize, f64)> {
    let mut worst = 0.0f64;
    for k in 0..samples {
        let n = dim(rng, 2, 4);
        let lambdas: Vec<f64> = if k % 2 == 0 {
            (0..n).map(|j| (j + 1) as f64 / 6.0).collect()
        } else {
            repeated_spectrum(rng, n)
        };
        let mu = sampling::hermitian_with_spectrum(rng, &lambdas);
        let g = sampling::unitary(rng, n);
        let (v, v2) = (sampling::anti_hermitian(rng, n), sampling::anti_hermitian(rng, n));
        let (l, r) = orbit::reduced_form_pullback_check(&mu, &g, &v, &v2, PairingConvention::Half)?;
        worst = worst.max((l - r).abs());
    }
    Ok((samples, worst))
}

/// Random rational spectrum with `n <= max_n`, as `(lambda, multiplicity)` pairs.
pub fn random_rational_spectrum<R: Rng>(rng: &mut R, max_n: usize) -> Vec<(Rational, i64)> {
    let mut pairs: Vec<(Rational, i64)> = Vec::new();
    let mut n = 0usize;
    let target = rng.random_range(1..=max_n);
    while n < target {
        let q = Rational::new(rng.random_range(-20..=20), rng.random_range(1..=12)).expect("nonzero denominator");
        if pairs.iter().any(|(l, _)| *l == q) {
            continue;
        }
        let d = rng.random_range(1..=(target - n).min(3));
        n += d;
        pairs.push((q, d as i64));
    }
    pairs
}

fn integrality_hbar(rng: &mut ChaCha8Rng, samples: usize) -> Result<(usize, f64)> {
    let mut failures = 0usize;
    for _ in 0..samples {
        let blocks = spectral_blocks(random_rational_spectrum(rng, 6))?;
        let Some(h) = hbar_generator(&blocks) else { continue };
        let quotients = hbar_quotients(&blocks, &h)?;
        // gcd 1 of the integer quotients means no larger generator exists
        let g = quotients
            .iter()
            .fold(num_bigint::BigInt::from(0), |acc, q| num_integer::Integer::gcd(&acc, q.numer()));
        if g != num_bigint::BigInt::from(1) {
            failures += 1;
        }
    }
    Ok((samples, failures as f64))
}

fn integrality_cross(rng: &mut ChaCha8Rng, samples: usize) -> Result<(usize, f64)> {
    let mut failures = 0usize;
    for _ in 0..samples {
        let blocks = spectral_blocks(random_rational_spectrum(rng, 6))?;
        let mu = sampling::hermitian_with_spectrum(rng, &blocks.diagonal());
        let expected: u64 = blocks.multiplicities().iter().map(|d| d * d).sum();
        if orbit::isotropy_algebra(&mu)?.dim() as u64 != expected {
            failures += 1;
        }
    }
    Ok((samples, failures as f64))
}

fn contact_reeb(rng: &mut ChaCha8Rng, samples: usize) -> Result<(usize, f64)> {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let n = dim(rng, 1, 4);
        let x = sampling::sphere_point(rng, n);
        let r = contact::reeb(&x);
        worst = worst.max((contact::liouville(x.vector(), r.vector())? - 1.0).abs());
        for b in tangent_basis(&x) {
            worst = worst.max(contact::dtheta(&x, r.vector(), &b)?.abs());
        }
    }
    Ok((samples, worst))
}

fn contact_condition(rng: &mut ChaCha8Rng, samples: usize) -> Result<(usize, f64)> {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let n = dim(rng, 1, 4);
        let (ok, det) = contact::contact_condition(&sampling::sphere_point(rng, n));
        worst = worst.max(if ok { (det - 1.0).abs() } else { f64::INFINITY });
    }
    Ok((samples, worst))
}

fn contact_hopf(rng: &mut ChaCha8Rng, samples: usize) -> Result<(usize, f64)> {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let x = sampling::sphere_point(rng, 2);
        let p = contact::hopf_map(&x)?;
        let z = x.vector();
        let raw = ((z[0].conj() * z[1] * 2.0).norm_sqr() + (z[0].norm_sqr() - z[1].norm_sqr()).powi(2)).sqrt();
        worst = worst.max((raw - 1.0).abs());
        for k in 0..64 {
            let q = contact::hopf_map(&x.rotate_phase(2.0 * PI * k as f64 / 64.0))?;
            worst = worst.max(p.distance(&q));
        }
    }
    Ok((samples, worst))
}

fn contact_pullback(rng: &mut ChaCha8Rng, samples: usize) -> Result<(usize, f64)> {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let x = sampling::sphere_point(rng, 2);
        let (v, w) = (sampling::sphere_tangent(rng, &x), sampling::sphere_tangent(rng, &x));
        let (l, r) = contact::hopf_pullback_check(&x, v.vector(), w.vector())?;
        worst = worst.max((l - r).abs());
    }
    Ok((samples, worst))
}

fn random_polynomial(rng: &mut ChaCha8Rng) -> Polynomial {
    let mut u = || rng.random_range(-1.0..1.0);
    Polynomial {
        constant: u(),
        linear: [u(), u(), u()],
        quadratic: [[u(), u(), u()], [u(), u(), u()], [u(), u(), u()]],
    }
}

fn dynamics_hamilton(rng: &mut ChaCha8Rng, samples: usize) -> Result<(usize, f64)> {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let h = random_polynomial(rng);
        let p = sampling::s2_point(rng);
        let w = sampling::s2_tangent(rng, &p);
        let lhs = contact::monopole_form(&p, &dynamics::hamiltonian_field_s2(&h, &p), &w)? / 4.0;
        worst = worst.max((lhs + h.tangential_gradient(&p).dot(&w)).abs());
    }
    Ok((samples, worst))
}

fn dynamics_residual(rng: &mut ChaCha8Rng, samples: usize) -> Result<(usize, f64)> {
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let h = random_polynomial(rng);
        let x = sampling::sphere_point(rng, 2);
        let gauge = Gauge::Constant(rng.random_range(-1.0..1.0));
        let v = dynamics::el_velocity(&x, &h, gauge)?;
        let lift = HopfLift(&h);
        for w in tangent_basis(&x) {
            worst = worst.max((contact::dtheta(&x, v.vector(), &w)? + lift.differential(&x, &w)?).abs());
        }
    }
    Ok((samples, worst))
}

/// Full-period trajectories are costly; this many are integrated at most.
const MAX_TRAJECTORIES: usize = 4;

fn dynamics_projection(rng: &mut ChaCha8Rng, samples: usize) -> Result<(usize, f64)> {
    let count = samples.min(MAX_TRAJECTORIES);
    let mut worst = 0.0f64;
    for _ in 0..count {
        let x0 = sampling::sphere_point(rng, 2);
        let traj = dynamics::el_flow(&LinearZ, &x0, 2.0 * PI, 1e-3, Gauge::Orthogonal)?;
        let [a, b, c] = traj.projected()[0].coords();
        for (t, p) in traj.times().iter().zip(traj.projected()) {
            let want = contact::S2Point::normalize([a * t.cos() + b * t.sin(), b * t.cos() - a * t.sin(), c])?;
            worst = worst.max(p.distance(&want));
        }
    }
    Ok((count, worst))
}

fn dynamics_energy(rng: &mut ChaCha8Rng, samples: usize) -> Result<(usize, f64)> {
    let count = samples.min(MAX_TRAJECTORIES);
    let mut worst = 0.0f64;
    for _ in 0..count {
        let h = random_polynomial(rng);
        let x0 = sampling::sphere_point(rng, 2);
        let traj = dynamics::el_flow(&h, &x0, 2.0 * PI, 1e-3, Gauge::Orthogonal)?;
        let values = traj.lifted_values(&h);
        for v in &values {
            worst = worst.max((v - values[0]).abs());
        }
    }
    Ok((count, worst))
}
