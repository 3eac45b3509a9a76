use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::hamiltonian::HamiltonianOnBase;
use super::integrate::{step_schedule, Trajectory};
use crate::contact::{liouville, real_inner, SpherePoint};
use crate::error::{Error, Result};
use crate::lie::CVector;
use crate::sampling::complex_gaussian_vector;

/// Relative tolerance on the spacing of sample times.
pub const UNIFORMITY_TOL: f64 = 1e-9;

/// `value = hamiltonian_part - form_part`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ActionValue {
    pub value: f64,
    pub hamiltonian_part: f64,
    pub form_part: f64,
    pub quadrature: &'static str,
}

fn uniform_step(times: &[f64]) -> Result<f64> {
    if times.len() < 3 {
        return Err(Error::InvalidTrajectory(format!(
            "at least 3 samples are required, got {}",
            times.len()
        )));
    }
    let span = times[times.len() - 1] - times[0];
    let h = span / (times.len() - 1) as f64;
    let tol = UNIFORMITY_TOL * (span.abs() + times[0].abs()).max(1.0);
    for (k, t) in times.iter().enumerate() {
        if !((t - times[0] - k as f64 * h).abs() <= tol) || !(h > 0.0) {
            return Err(Error::InvalidTrajectory(format!("non-uniform sample time at index {k}")));
        }
    }
    Ok(h)
}

/// Composite Simpson; with an odd number of intervals the last three use the
/// 3/8 rule.
fn simpson(f: &[f64], h: f64) -> (f64, &'static str) {
    let m = f.len() - 1;
    let even = |f: &[f64]| -> f64 {
        let m = f.len() - 1;
        let mut s = f[0] + f[m];
        for (k, v) in f.iter().enumerate().take(m).skip(1) {
            s += if k % 2 == 1 { 4.0 * v } else { 2.0 * v };
        }
        s * h / 3.0
    };
    if m.is_multiple_of(2) {
        return (even(f), "simpson");
    }
    let tail = &f[m - 3..];
    let three_eighths = 3.0 * h / 8.0 * (tail[0] + 3.0 * tail[1] + 3.0 * tail[2] + tail[3]);
    let head = if m > 3 { even(&f[..=m - 3]) } else { 0.0 };
    (head + three_eighths, "simpson+3/8")
}

/// Fourth-order finite-difference derivative (second order below 5 samples).
fn derivative(x: &[CVector], h: f64) -> Vec<CVector> {
    let n = x.len();
    let c = |a: f64| Complex64::new(a, 0.0);
    if n < 5 {
        return (0..n)
            .map(|k| {
                let d = if k == 0 {
                    &x[0] * c(-3.0) + &x[1] * c(4.0) - &x[2]
                } else if k == n - 1 {
                    &x[n - 1] * c(3.0) - &x[n - 2] * c(4.0) + &x[n - 3]
                } else {
                    &x[k + 1] - &x[k - 1]
                };
                d / c(2.0 * h)
            })
            .collect();
    }
    let forward = |y: [&CVector; 5], w: [f64; 5]| -> CVector {
        y.iter().zip(w).fold(CVector::zeros(y[0].len()), |acc, (v, a)| acc + *v * c(a)) / c(12.0 * h)
    };
    (0..n)
        .map(|k| match k {
            0 => forward([&x[0], &x[1], &x[2], &x[3], &x[4]], [-25.0, 48.0, -36.0, 16.0, -3.0]),
            1 => forward([&x[0], &x[1], &x[2], &x[3], &x[4]], [-3.0, -10.0, 18.0, -6.0, 1.0]),
            k if k == n - 2 => forward(
                [&x[n - 1], &x[n - 2], &x[n - 3], &x[n - 4], &x[n - 5]],
                [3.0, 10.0, -18.0, 6.0, -1.0],
            ),
            k if k == n - 1 => forward(
                [&x[n - 1], &x[n - 2], &x[n - 3], &x[n - 4], &x[n - 5]],
                [25.0, -48.0, 36.0, -16.0, 3.0],
            ),
            k => forward([&x[k - 2], &x[k - 1], &x[k], &x[k + 1], &x[k + 2]], [1.0, -8.0, 0.0, 8.0, -1.0]),
        })
        .collect()
}

/// `Phi = int H dt - int theta_0(gamma')dt` from samples of the path and of the
/// lifted Hamiltonian along it.
pub fn action_from_samples(times: &[f64], states: &[CVector], hhat: &[f64]) -> Result<ActionValue> {
    if states.len() != times.len() || hhat.len() != times.len() {
        return Err(Error::InvalidTrajectory("sample arrays differ in length".into()));
    }
    let h = uniform_step(times)?;
    let velocity = derivative(states, h);
    let form: Vec<f64> = states
        .iter()
        .zip(&velocity)
        .map(|(x, v)| liouville(x, v))
        .collect::<Result<_>>()?;
    let (hamiltonian_part, quadrature) = simpson(hhat, h);
    let (form_part, _) = simpson(&form, h);
    Ok(ActionValue {
        value: hamiltonian_part - form_part,
        hamiltonian_part,
        form_part,
        quadrature,
    })
}

pub fn action_functional(traj: &Trajectory, h: &dyn HamiltonianOnBase) -> Result<ActionValue> {
    let states: Vec<CVector> = traj.states().iter().map(|s| s.vector().clone()).collect();
    action_from_samples(traj.times(), &states, &traj.lifted_values(h))
}

/// Central difference `(Phi[gamma + eps delta] - Phi[gamma - eps delta]) / (2 eps)`,
/// each perturbed path renormalized onto the sphere.
pub fn stationarity_test(
    traj: &Trajectory,
    h: &dyn HamiltonianOnBase,
    perturbation: &[CVector],
    eps: f64,
) -> Result<f64> {
    if !(eps > 0.0 && eps <= 1e-2) {
        return Err(Error::InvalidPerturbation(format!("epsilon must lie in (0, 1e-2], got {eps}")));
    }
    if perturbation.len() != traj.len() {
        return Err(Error::InvalidPerturbation(format!(
            "{} vectors for {} samples",
            perturbation.len(),
            traj.len()
        )));
    }
    for (k, (x, d)) in traj.states().iter().zip(perturbation).enumerate() {
        crate::lie::check_dim(x.dim(), d.len())?;
        let residue = real_inner(x.vector(), d);
        if !(residue.abs() <= 1e-10 * d.norm().max(1.0)) {
            return Err(Error::InvalidPerturbation(format!("not tangent at index {k} (residue {residue:e})")));
        }
    }
    let ends = [perturbation[0].norm(), perturbation[perturbation.len() - 1].norm()];
    if ends.iter().any(|e| *e > 1e-12) {
        return Err(Error::InvalidPerturbation("does not vanish at the endpoints".into()));
    }
    let shifted = |sign: f64| -> Result<f64> {
        let states = traj
            .states()
            .iter()
            .zip(perturbation)
            .map(|(x, d)| SpherePoint::normalize(x.vector() + d * Complex64::new(sign * eps, 0.0)))
            .collect::<Result<Vec<_>>>()?;
        let path = Trajectory::new(traj.times().to_vec(), states, traj.gauge())?;
        Ok(action_functional(&path, h)?.value)
    };
    Ok((shifted(1.0)? - shifted(-1.0)?) / (2.0 * eps))
}

/// Smooth tangent field vanishing at both ends:
/// `sin(pi (t - t0)/T) * P_x(c0 + c1 cos t + c2 sin t)` with seeded Gaussian `c_i`.
pub fn admissible_perturbation(traj: &Trajectory, seed: u64) -> Vec<CVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = traj.states()[0].dim();
    let c: Vec<CVector> = (0..3).map(|_| complex_gaussian_vector(&mut rng, n)).collect();
    let times = traj.times();
    let (t0, span) = (times[0], times[times.len() - 1] - times[0]);
    let last = times.len() - 1;
    times
        .iter()
        .zip(traj.states())
        .enumerate()
        .map(|(k, (&t, x))| {
            if k == 0 || k == last {
                return CVector::zeros(n);
            }
            let raw = &c[0] + &c[1] * Complex64::new(t.cos(), 0.0) + &c[2] * Complex64::new(t.sin(), 0.0);
            let tangent = &raw - x.vector() * Complex64::new(real_inner(x.vector(), &raw), 0.0);
            tangent * Complex64::new((std::f64::consts::PI * (t - t0) / span).sin(), 0.0)
        })
        .collect()
}

/// The great circle `(cos t, sin t)`: it projects to a meridian, transverse
/// to the rotation generated by `(z+1)/4`, and is not a solution.
pub fn great_circle_path(t1: f64, dt: f64) -> Result<Trajectory> {
    sampled_path(t1, dt, |t| {
        SpherePoint::from_components(&[Complex64::new(t.cos(), 0.0), Complex64::new(t.sin(), 0.0)])
    })
}

/// Samples `path` on the uniform grid of [`step_schedule`].
pub fn sampled_path<F: Fn(f64) -> Result<SpherePoint>>(t1: f64, dt: f64, path: F) -> Result<Trajectory> {
    let (steps, dt) = step_schedule(t1, dt)?;
    let times: Vec<f64> = (0..=steps).map(|k| k as f64 * dt).collect();
    let states = times.iter().map(|&t| path(t)).collect::<Result<Vec<_>>>()?;
    Trajectory::new(times, states, None)
}
