use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector, Vector3};
use num_complex::Complex64;

use super::hamiltonian::{hamiltonian_field_s2, HamiltonianOnBase, HopfLift, LiftedHamiltonian};
use crate::contact::{contact_plane_basis, hopf_map, omega, S2Point, SpherePoint, SphereTangent};
use crate::error::{Error, Result};
use crate::lie::CVector;

/// Largest displacement a renormalization may cause before a step is rejected.
pub const MAX_RENORMALIZATION_SHIFT: f64 = 1e-3;
/// Largest Reeb component of `dH` accepted as fiber-invariant.
pub const FIBER_INVARIANCE_TOL: f64 = 1e-10;

/// Rule fixing the Reeb component of Euler-Lagrange velocities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gauge {
    /// `<v, R> = 0` in the round metric.
    Orthogonal,
    /// `<v, R> = c` in the round metric.
    Constant(f64),
}

impl Gauge {
    pub fn reeb_component(self) -> f64 {
        match self {
            Gauge::Orthogonal => 0.0,
            Gauge::Constant(c) => c,
        }
    }
}

impl fmt::Display for Gauge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gauge::Orthogonal => write!(f, "orthogonal"),
            Gauge::Constant(c) => write!(f, "constant:{c}"),
        }
    }
}

impl FromStr for Gauge {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "orthogonal" {
            return Ok(Gauge::Orthogonal);
        }
        let c = s
            .strip_prefix("constant:")
            .ok_or_else(|| format!("expected 'orthogonal' or 'constant:<c>', got '{s}'"))?;
        let c: f64 = c.parse().map_err(|_| format!("invalid gauge constant '{c}'"))?;
        if !c.is_finite() {
            return Err(format!("invalid gauge constant '{c}'"));
        }
        Ok(Gauge::Constant(c))
    }
}

/// Number of steps and effective step for integrating over `[0, t1]`.
///
/// `N = ceil(t1/h)` (ignoring a rounding sliver) and `h_eff = t1/N`.
pub fn step_schedule(t1: f64, h: f64) -> Result<(usize, f64)> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidStep(format!("step must be positive, got {h}")));
    }
    if !(t1 >= 0.0) || !t1.is_finite() {
        return Err(Error::InvalidStep(format!("final time must be non-negative, got {t1}")));
    }
    if t1 == 0.0 {
        return Ok((0, h));
    }
    let steps = (t1 / h - 1e-9).ceil().max(1.0) as usize;
    Ok((steps, t1 / steps as f64))
}

fn rk4<V, F>(x: &V, h: f64, f: F) -> Result<V>
where
    V: Clone + std::ops::Add<Output = V> + std::ops::Mul<f64, Output = V>,
    F: Fn(&V) -> Result<V>,
{
    let k1 = f(x)?;
    let k2 = f(&(x.clone() + k1.clone() * (h / 2.0)))?;
    let k3 = f(&(x.clone() + k2.clone() * (h / 2.0)))?;
    let k4 = f(&(x.clone() + k3.clone() * h))?;
    Ok(x.clone() + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0))
}

/// Wrapper giving complex vectors real scalar multiplication for [`rk4`].
#[derive(Clone)]
struct State(CVector);

impl std::ops::Add for State {
    type Output = State;
    fn add(self, o: State) -> State {
        State(self.0 + o.0)
    }
}

impl std::ops::Mul<f64> for State {
    type Output = State;
    fn mul(self, s: f64) -> State {
        State(self.0 * Complex64::new(s, 0.0))
    }
}

/// RK4 for `p' = X_H(p)` on S^2 with renormalization after each step.
pub fn flow_s2(h: &dyn HamiltonianOnBase, p0: &S2Point, t1: f64, dt: f64) -> Result<Vec<S2Point>> {
    let (steps, dt) = step_schedule(t1, dt)?;
    let mut out = Vec::with_capacity(steps + 1);
    out.push(*p0);
    let field = |p: &Vector3<f64>| -> Result<Vector3<f64>> {
        Ok(hamiltonian_field_s2(h, &S2Point::normalize([p.x, p.y, p.z])?))
    };
    for k in 0..steps {
        let y = rk4(&out[k].as_vector(), dt, field)?;
        let norm = y.norm();
        let shift = (norm - 1.0).abs();
        if !(shift <= MAX_RENORMALIZATION_SHIFT) {
            return Err(Error::StepRejected { t: (k + 1) as f64 * dt, shift });
        }
        out.push(S2Point::normalize([y.x, y.y, y.z])?);
    }
    Ok(out)
}

/// Euler-Lagrange velocity of `i_v d theta_0 + dH = 0` for a lifted Hamiltonian
/// on any odd sphere, with the Reeb component fixed by `gauge`.
pub fn el_velocity_lifted(x: &SpherePoint, hhat: &dyn LiftedHamiltonian, gauge: Gauge) -> Result<SphereTangent> {
    let ix = x.vector() * Complex64::new(0.0, 1.0);
    let reeb_part = hhat.differential(x, &ix)?;
    if !(reeb_part.abs() <= FIBER_INVARIANCE_TOL) {
        return Err(Error::NotFiberInvariant(reeb_part));
    }
    let basis = contact_plane_basis(x);
    let m = basis.len();
    // sum_k c_k omega(b_k, b_j) = -dH(b_j)
    let a = DMatrix::from_fn(m, m, |j, k| omega(&basis[k], &basis[j]));
    let rhs = DVector::from_iterator(m, basis.iter().map(|b| hhat.differential(x, b).map(|d| -d)).collect::<Result<Vec<_>>>()?);
    let coef = a.lu().solve(&rhs).expect("d theta_0 is nondegenerate on the contact plane");
    // unit ix, and <v, 2 ix> = c
    let mut v = ix * Complex64::new(gauge.reeb_component() / 2.0, 0.0);
    for (c, b) in coef.iter().zip(&basis) {
        v += b * Complex64::new(*c, 0.0);
    }
    SphereTangent::new(x.clone(), v)
}

/// [`el_velocity_lifted`] for `H o hopf_map` on S^3.
pub fn el_velocity(x: &SpherePoint, h: &dyn HamiltonianOnBase, gauge: Gauge) -> Result<SphereTangent> {
    crate::lie::check_dim(2, x.dim())?;
    el_velocity_lifted(x, &HopfLift(h), gauge)
}

/// A uniformly sampled path on S^3 with its Hopf projection.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<SpherePoint>,
    projected: Vec<S2Point>,
    step: f64,
    gauge: Option<Gauge>,
}

impl Trajectory {
    /// Requires at least one sample, strictly increasing times and points of S^3.
    pub fn new(times: Vec<f64>, states: Vec<SpherePoint>, gauge: Option<Gauge>) -> Result<Self> {
        if times.is_empty() || times.len() != states.len() {
            return Err(Error::InvalidTrajectory(format!(
                "{} times for {} states",
                times.len(),
                states.len()
            )));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) || times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidTrajectory("times must be finite and strictly increasing".into()));
        }
        let projected = states.iter().map(hopf_map).collect::<Result<Vec<_>>>()?;
        let step = if times.len() > 1 { times[1] - times[0] } else { 0.0 };
        Ok(Self {
            times,
            states,
            projected,
            step,
            gauge,
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[SpherePoint] {
        &self.states
    }

    pub fn projected(&self) -> &[S2Point] {
        &self.projected
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn gauge(&self) -> Option<Gauge> {
        self.gauge
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `H(p(gamma(t_k)))` along the path.
    pub fn lifted_values(&self, h: &dyn HamiltonianOnBase) -> Vec<f64> {
        self.projected.iter().map(|p| h.value(&p.as_vector())).collect()
    }
}

/// RK4 for the gauge-fixed Euler-Lagrange flow on S^3, renormalizing each step.
pub fn el_flow(h: &dyn HamiltonianOnBase, x0: &SpherePoint, t1: f64, dt: f64, gauge: Gauge) -> Result<Trajectory> {
    crate::lie::check_dim(2, x0.dim())?;
    let (steps, dt) = step_schedule(t1, dt)?;
    let mut states = Vec::with_capacity(steps + 1);
    states.push(x0.clone());
    let field = |s: &State| -> Result<State> {
        let x = SpherePoint::normalize(s.0.clone())?;
        Ok(State(el_velocity(&x, h, gauge)?.vector().clone()))
    };
    for k in 0..steps {
        let y = rk4(&State(states[k].vector().clone()), dt, field)?.0;
        let shift = (y.norm() - 1.0).abs();
        if !(shift <= MAX_RENORMALIZATION_SHIFT) {
            return Err(Error::StepRejected { t: (k + 1) as f64 * dt, shift });
        }
        states.push(SpherePoint::normalize(y)?);
    }
    let times = (0..=steps).map(|k| k as f64 * dt).collect();
    Trajectory::new(times, states, Some(gauge))
}

/// Closed-form Euler-Lagrange solution for `H = (z+1)/4` with constant Reeb
/// freedom `a`: `(e^{i(1+a)t} z_1, e^{iat} z_2)`.
pub fn linear_z_solution(x0: &SpherePoint, a: f64, t: f64) -> Result<SpherePoint> {
    crate::lie::check_dim(2, x0.dim())?;
    let z = x0.vector();
    SpherePoint::from_components(&[
        z[0] * Complex64::from_polar(1.0, (1.0 + a) * t),
        z[1] * Complex64::from_polar(1.0, a * t),
    ])
}
