//! Seeded random generators for matrices and sphere data.
//!
//! All functions take the RNG explicitly; callers own seeding.

use nalgebra::Vector3;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::contact::{real_inner, S2Point, SpherePoint, SphereTangent};
use crate::lie::{AntiHermitianMatrix, CMatrix, CVector, HermitianMatrix, UnitaryMatrix};

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(normal(rng), normal(rng))
}

pub fn complex_gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVector {
    CVector::from_fn(n, |_, _| complex_gaussian(rng))
}

fn ginibre<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| complex_gaussian(rng))
}

/// `(G + G^\dagger)/2` for a complex Gaussian `G`.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> HermitianMatrix {
    let g = ginibre(rng, n);
    HermitianMatrix::new((&g + g.adjoint()) * Complex64::new(0.5, 0.0)).expect("symmetrized")
}

/// `(G - G^\dagger)/2` for a complex Gaussian `G`.
pub fn anti_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> AntiHermitianMatrix {
    let g = ginibre(rng, n);
    AntiHermitianMatrix::new((&g - g.adjoint()) * Complex64::new(0.5, 0.0)).expect("antisymmetrized")
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of `diag(R)` removed.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> UnitaryMatrix {
    let qr = ginibre(rng, n).qr();
    let (mut q, r) = qr.unpack();
    for k in 0..n {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        let mut col = q.column_mut(k);
        col *= phase;
    }
    UnitaryMatrix::new(q).expect("QR factor is unitary")
}

/// Hermitian matrix `U diag(lambdas) U^\dagger` with Haar-random `U`.
pub fn hermitian_with_spectrum<R: Rng + ?Sized>(rng: &mut R, lambdas: &[f64]) -> HermitianMatrix {
    let u = unitary(rng, lambdas.len());
    let d = HermitianMatrix::from_real_diagonal(lambdas);
    crate::lie::coadjoint_action(&u, &d).expect("dimensions agree")
}

pub fn sphere_point<R: Rng + ?Sized>(rng: &mut R, n: usize) -> SpherePoint {
    loop {
        if let Ok(x) = SpherePoint::normalize(complex_gaussian_vector(rng, n)) {
            return x;
        }
    }
}

/// Gaussian vector projected onto `T_x S^{2n-1}`.
pub fn sphere_tangent<R: Rng + ?Sized>(rng: &mut R, x: &SpherePoint) -> SphereTangent {
    let v = complex_gaussian_vector(rng, x.dim());
    let c = real_inner(x.vector(), &v);
    let v = v - x.vector() * Complex64::new(c, 0.0);
    SphereTangent::new(x.clone(), v).expect("projected onto the tangent space")
}

pub fn s2_point<R: Rng + ?Sized>(rng: &mut R) -> S2Point {
    loop {
        if let Ok(p) = S2Point::normalize([normal(rng), normal(rng), normal(rng)]) {
            return p;
        }
    }
}

pub fn s2_tangent<R: Rng + ?Sized>(rng: &mut R, p: &S2Point) -> Vector3<f64> {
    p.project_tangent(&Vector3::new(normal(rng), normal(rng), normal(rng)))
}
