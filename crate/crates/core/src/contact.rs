//! The standard contact sphere `(S^{2n-1}, theta_0)` and the Hopf fibration.
//!
//! Complex coordinates are split as `x_k = q^k + i p_k`. The Liouville form is
//! `theta_0 = 1/2 sum (q dp - p dq)`, its differential is `Im<v|w>`, and the
//! Reeb field is `2 i x`.

use nalgebra::{DMatrix, Matrix3, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lie::CVector;

/// Tolerance for the unit-norm and tangency invariants of sphere data.
pub const SPHERE_TOL: f64 = 1e-12;
/// Tangency tolerance for vectors on S^2 fed to [`monopole_form`].
pub const S2_TANGENT_TOL: f64 = 1e-10;
/// Singular values below this are kernel directions.
pub const KERNEL_TOL: f64 = 1e-10;
/// Singular values below this but above [`KERNEL_TOL`] are ambiguous.
pub const AMBIGUITY_TOL: f64 = 1e-6;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `<a|b>`, conjugate-linear in `a`.
pub fn hermitian_inner(a: &CVector, b: &CVector) -> Complex64 {
    a.dotc(b)
}

/// Round metric `g(a, b) = Re<a|b>` on the realification of C^n.
pub fn real_inner(a: &CVector, b: &CVector) -> f64 {
    hermitian_inner(a, b).re
}

/// A unit vector in C^n.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint(CVector);

impl SpherePoint {
    pub fn new(x: CVector) -> Result<Self> {
        let norm = x.norm();
        if x.is_empty() || !((norm - 1.0).abs() <= SPHERE_TOL) {
            return Err(Error::NotUnit { norm });
        }
        Ok(Self(x))
    }

    /// Rescales a nonzero vector onto the sphere.
    pub fn normalize(x: CVector) -> Result<Self> {
        let norm = x.norm();
        if x.is_empty() || !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NotUnit { norm });
        }
        Ok(Self(x / Complex64::new(norm, 0.0)))
    }

    pub fn from_components(z: &[Complex64]) -> Result<Self> {
        Self::new(CVector::from_column_slice(z))
    }

    pub fn basis(n: usize, k: usize) -> Self {
        let mut x = CVector::zeros(n);
        x[k] = Complex64::new(1.0, 0.0);
        Self(x)
    }

    pub fn vector(&self) -> &CVector {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `e^{i phi} x`.
    pub fn rotate_phase(&self, phi: f64) -> Self {
        Self(&self.0 * Complex64::from_polar(1.0, phi))
    }
}

/// A vector `v` with `Re<x|v> = 0` at a point `x` of the sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereTangent {
    at: SpherePoint,
    v: CVector,
}

impl SphereTangent {
    pub fn new(at: SpherePoint, v: CVector) -> Result<Self> {
        check_tangent(&at, &v)?;
        Ok(Self { at, v })
    }

    pub fn at(&self) -> &SpherePoint {
        &self.at
    }

    pub fn vector(&self) -> &CVector {
        &self.v
    }
}

fn check_tangent(x: &SpherePoint, v: &CVector) -> Result<()> {
    crate::lie::check_dim(x.dim(), v.len())?;
    let residue = real_inner(x.vector(), v);
    if !(residue.abs() <= SPHERE_TOL * v.norm().max(1.0)) {
        return Err(Error::NotTangent { residue });
    }
    Ok(())
}

/// A point of the unit sphere S^2 in R^3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct S2Point([f64; 3]);

impl S2Point {
    pub fn new(p: [f64; 3]) -> Result<Self> {
        let norm = Vector3::from(p).norm();
        if !((norm - 1.0).abs() <= SPHERE_TOL) {
            return Err(Error::NotUnit { norm });
        }
        Ok(Self(p))
    }

    pub fn normalize(p: [f64; 3]) -> Result<Self> {
        let norm = Vector3::from(p).norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NotUnit { norm });
        }
        Ok(Self([p[0] / norm, p[1] / norm, p[2] / norm]))
    }

    pub fn coords(&self) -> [f64; 3] {
        self.0
    }

    pub fn as_vector(&self) -> Vector3<f64> {
        Vector3::from(self.0)
    }

    pub fn distance(&self, other: &S2Point) -> f64 {
        (self.as_vector() - other.as_vector()).norm()
    }

    /// Removes the normal component of `a`.
    pub fn project_tangent(&self, a: &Vector3<f64>) -> Vector3<f64> {
        let p = self.as_vector();
        a - p * p.dot(a)
    }
}

/// `theta_0(x)(v) = 1/2 sum_k (q^k(x) p_k(v) - p_k(x) q^k(v))`.
pub fn liouville(x: &CVector, v: &CVector) -> Result<f64> {
    crate::lie::check_dim(x.len(), v.len())?;
    let sum: f64 = x.iter().zip(v.iter()).map(|(a, b)| a.re * b.im - a.im * b.re).sum();
    Ok(0.5 * sum)
}

/// `d theta_0 (v, w) = Im<v|w>` on tangent vectors at `x`.
pub fn dtheta(x: &SpherePoint, v: &CVector, w: &CVector) -> Result<f64> {
    check_tangent(x, v)?;
    check_tangent(x, w)?;
    Ok(omega(v, w))
}

/// Standard symplectic form on C^n without tangency checks.
pub(crate) fn omega(v: &CVector, w: &CVector) -> f64 {
    v.iter().zip(w.iter()).map(|(a, b)| a.re * b.im - a.im * b.re).sum()
}

/// Reeb vector `2 i x`.
pub fn reeb(x: &SpherePoint) -> SphereTangent {
    SphereTangent {
        at: x.clone(),
        v: x.vector() * (I * 2.0),
    }
}

/// Exact Reeb flow `e^{2it} x`.
pub fn reeb_flow(x: &SpherePoint, t: f64) -> SpherePoint {
    x.rotate_phase(2.0 * t)
}

/// Real Gram-Schmidt: orthonormalizes `seeds`, then extends by the coordinate
/// vectors `e_1, i e_1, e_2, i e_2, ...`. Returns the vectors added after the
/// seeds, in deterministic order.
fn extend_real_orthonormal(seeds: &[CVector], n: usize) -> Vec<CVector> {
    let mut frame: Vec<CVector> = Vec::with_capacity(2 * n);
    let push = |frame: &mut Vec<CVector>, mut v: CVector| -> bool {
        for _ in 0..2 {
            for b in frame.iter() {
                let c = real_inner(b, &v);
                v -= b * Complex64::new(c, 0.0);
            }
        }
        let norm = v.norm();
        if norm > 1e-6 {
            frame.push(v / Complex64::new(norm, 0.0));
            true
        } else {
            false
        }
    };
    for s in seeds {
        let added = push(&mut frame, s.clone());
        assert!(added, "sphere frame seeds must be independent");
    }
    let seeded = frame.len();
    'outer: for k in 0..n {
        for unit in [Complex64::new(1.0, 0.0), I] {
            if frame.len() == 2 * n {
                break 'outer;
            }
            let mut e = CVector::zeros(n);
            e[k] = unit;
            push(&mut frame, e);
        }
    }
    assert_eq!(frame.len(), 2 * n, "coordinate vectors span the realification");
    frame.split_off(seeded)
}

/// Orthonormal basis of `T_x S^{2n-1}` (dimension `2n-1`), beginning with `i x`.
pub fn tangent_basis(x: &SpherePoint) -> Vec<CVector> {
    let ix = x.vector() * I;
    let mut basis = vec![ix.clone()];
    basis.extend(extend_real_orthonormal(&[x.vector().clone(), ix], x.dim()));
    basis
}

/// Orthonormal basis of `ker theta_0 ∩ T_x S^{2n-1}` (dimension `2n-2`).
pub fn contact_plane_basis(x: &SpherePoint) -> Vec<CVector> {
    extend_real_orthonormal(&[x.vector().clone(), x.vector() * I], x.dim())
}

fn skew_matrix(basis: &[CVector]) -> DMatrix<f64> {
    DMatrix::from_fn(basis.len(), basis.len(), |j, k| omega(&basis[j], &basis[k]))
}

/// Determinant of `d theta_0` restricted to `ker theta_0`; nonzero means contact.
pub fn contact_condition(x: &SpherePoint) -> (bool, f64) {
    let basis = contact_plane_basis(x);
    let det = if basis.is_empty() {
        1.0
    } else {
        skew_matrix(&basis).determinant()
    };
    (det != 0.0 && det.is_finite(), det)
}

/// Basis of `ker(d theta_0) ∩ T_x S`, oriented so that `theta_0` is positive on it.
pub fn characteristic_directions(x: &SpherePoint) -> Result<Vec<SphereTangent>> {
    let basis = tangent_basis(x);
    let svd = skew_matrix(&basis).svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let mut out = Vec::new();
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if s > AMBIGUITY_TOL {
            continue;
        }
        if s > KERNEL_TOL {
            return Err(Error::RankAmbiguity {
                value: s,
                lower: KERNEL_TOL,
                upper: AMBIGUITY_TOL,
            });
        }
        let mut v = CVector::zeros(x.dim());
        for (coef, b) in v_t.row(i).iter().zip(&basis) {
            v += b * Complex64::new(*coef, 0.0);
        }
        let v = &v / Complex64::new(v.norm(), 0.0);
        let sign = if liouville(x.vector(), &v)? < 0.0 { -1.0 } else { 1.0 };
        out.push(SphereTangent {
            at: x.clone(),
            v: v * Complex64::new(sign, 0.0),
        });
    }
    Ok(out)
}

fn require_hopf_dim(x: &SpherePoint) -> Result<(Complex64, Complex64)> {
    crate::lie::check_dim(2, x.dim())?;
    Ok((x.vector()[0], x.vector()[1]))
}

/// Hopf projection `(alpha, nu) -> (2 conj(alpha) nu, |alpha|^2 - |nu|^2)`.
///
/// The first two coordinates are the real and imaginary parts of `2 conj(alpha) nu`.
pub fn hopf_map(x: &SpherePoint) -> Result<S2Point> {
    let (alpha, nu) = require_hopf_dim(x)?;
    let w = alpha.conj() * nu * 2.0;
    let z = alpha.norm_sqr() - nu.norm_sqr();
    S2Point::normalize([w.re, w.im, z])
}

/// Differential of [`hopf_map`] at `x` applied to `v = (a, b)`.
pub fn hopf_differential(x: &SpherePoint, v: &CVector) -> Result<Vector3<f64>> {
    let (alpha, nu) = require_hopf_dim(x)?;
    crate::lie::check_dim(2, v.len())?;
    let (a, b) = (v[0], v[1]);
    let dw = (a.conj() * nu + alpha.conj() * b) * 2.0;
    let dz = 2.0 * (alpha.conj() * a).re - 2.0 * (nu.conj() * b).re;
    Ok(Vector3::new(dw.re, dw.im, dz))
}

/// `B_p(a, b) = det[p a b]`, the area form of S^2.
pub fn monopole_form(p: &S2Point, a: &Vector3<f64>, b: &Vector3<f64>) -> Result<f64> {
    let pv = p.as_vector();
    for u in [a, b] {
        let residue = pv.dot(u);
        if !(residue.abs() <= S2_TANGENT_TOL * u.norm().max(1.0)) {
            return Err(Error::NotTangentS2 { residue });
        }
    }
    Ok(Matrix3::from_columns(&[pv, *a, *b]).determinant())
}

/// `(d theta_0(v, w), 1/4 B(Dp v, Dp w))`; the two agree for the Hopf fibration.
pub fn hopf_pullback_check(x: &SpherePoint, v: &CVector, w: &CVector) -> Result<(f64, f64)> {
    let lhs = dtheta(x, v, w)?;
    let p = hopf_map(x)?;
    let rhs = 0.25 * monopole_form(&p, &hopf_differential(x, v)?, &hopf_differential(x, w)?)?;
    Ok((lhs, rhs))
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on `P_m`.
pub fn gauss_legendre(m: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if m == 0 { 1.0 } else { p1 };
            dp = m as f64 * (x * p - p0) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Total flux of the monopole field through S^2 on a Gauss-Legendre (in `cos theta`)
/// by uniform (in `phi`) product grid.
pub fn monopole_flux(n_cos: usize, n_phi: usize) -> Result<f64> {
    let dphi = 2.0 * std::f64::consts::PI / n_phi as f64;
    let mut total = 0.0;
    for (u, wu) in gauss_legendre(n_cos) {
        let s = (1.0 - u * u).sqrt();
        for j in 0..n_phi {
            let phi = j as f64 * dphi;
            let (sn, cs) = phi.sin_cos();
            let p = S2Point::normalize([s * cs, s * sn, u])?;
            let d_phi = Vector3::new(-s * sn, s * cs, 0.0);
            let d_u = Vector3::new(-u / s * cs, -u / s * sn, 1.0);
            total += wu * dphi * monopole_form(&p, &d_phi, &d_u)?;
        }
    }
    Ok(total)
}
