use nalgebra::{Matrix3, Vector3};
use serde::Deserialize;

use crate::contact::{hopf_differential, hopf_map, S2Point, SpherePoint};
use crate::error::Result;
use crate::lie::CVector;

/// A smooth function on S^2 given with its ambient gradient.
///
/// Only the tangential part of the gradient is ever used.
pub trait HamiltonianOnBase: Sync {
    fn value(&self, p: &Vector3<f64>) -> f64;
    fn gradient(&self, p: &Vector3<f64>) -> Vector3<f64>;

    fn tangential_gradient(&self, p: &S2Point) -> Vector3<f64> {
        p.project_tangent(&self.gradient(&p.as_vector()))
    }
}

/// `H = (z + 1) / 4`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct LinearZ;

impl HamiltonianOnBase for LinearZ {
    fn value(&self, p: &Vector3<f64>) -> f64 {
        (p.z + 1.0) / 4.0
    }

    fn gradient(&self, _p: &Vector3<f64>) -> Vector3<f64> {
        Vector3::new(0.0, 0.0, 0.25)
    }
}

/// `H(p) = constant + linear . p + p^T quadratic p`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Polynomial {
    #[serde(default)]
    pub constant: f64,
    #[serde(default)]
    pub linear: [f64; 3],
    #[serde(default)]
    pub quadratic: [[f64; 3]; 3],
}

impl Polynomial {
    pub fn constant(c: f64) -> Self {
        Self {
            constant: c,
            linear: [0.0; 3],
            quadratic: [[0.0; 3]; 3],
        }
    }

    fn q(&self) -> Matrix3<f64> {
        Matrix3::from_fn(|i, j| self.quadratic[i][j])
    }
}

impl HamiltonianOnBase for Polynomial {
    fn value(&self, p: &Vector3<f64>) -> f64 {
        self.constant + Vector3::from(self.linear).dot(p) + p.dot(&(self.q() * p))
    }

    fn gradient(&self, p: &Vector3<f64>) -> Vector3<f64> {
        let q = self.q();
        Vector3::from(self.linear) + (q + q.transpose()) * p
    }
}

/// Largest relative discrepancy between `gradient` and central differences of
/// `value` along the coordinate axes.
pub fn gradient_consistency(h: &dyn HamiltonianOnBase, p: &Vector3<f64>, step: f64) -> f64 {
    let g = h.gradient(p);
    let mut worst = 0.0f64;
    for k in 0..3 {
        let mut e = Vector3::zeros();
        e[k] = step;
        let fd = (h.value(&(p + e)) - h.value(&(p - e))) / (2.0 * step);
        worst = worst.max((fd - g[k]).abs() / g.norm().max(1.0));
    }
    worst
}

/// `X_H(p) = 4 p x grad_S H(p)`, so that `i_X (vol/4) = -dH`.
pub fn hamiltonian_field_s2(h: &dyn HamiltonianOnBase, p: &S2Point) -> Vector3<f64> {
    p.as_vector().cross(&h.tangential_gradient(p)) * 4.0
}

/// A function on an odd sphere, constant along Reeb orbits, with its differential.
pub trait LiftedHamiltonian {
    fn value(&self, x: &SpherePoint) -> Result<f64>;
    /// `dH(x)(w)` for a tangent vector `w`.
    fn differential(&self, x: &SpherePoint, w: &CVector) -> Result<f64>;
}

/// `H o p` for the Hopf projection `p: S^3 -> S^2`.
pub struct HopfLift<'a>(pub &'a dyn HamiltonianOnBase);

impl LiftedHamiltonian for HopfLift<'_> {
    fn value(&self, x: &SpherePoint) -> Result<f64> {
        Ok(self.0.value(&hopf_map(x)?.as_vector()))
    }

    fn differential(&self, x: &SpherePoint, w: &CVector) -> Result<f64> {
        let p = hopf_map(x)?;
        Ok(self.0.tangential_gradient(&p).dot(&hopf_differential(x, w)?))
    }
}
