//! Matrix Lie algebra calculus for u(n) and its dual u*(n).
//!
//! Hermitian matrices are covectors, anti-Hermitian matrices are Lie algebra
//! elements, and the two are paired by `c * Re(i tr(A T))` where the scale `c`
//! is an explicit [`PairingConvention`].

mod json;
mod matrix;

pub use json::{MatrixJson, MatrixKind};
pub use matrix::{
    AntiHermitianMatrix, CMatrix, CVector, HermitianMatrix, PairingConvention, UnitaryMatrix,
    STRUCTURAL_TOL,
};

use num_complex::Complex64;

use crate::error::{Error, Result};
use matrix::check_same_dim;
pub(crate) use matrix::check_same_dim as check_dim;

/// `c * Re(i tr(A T))`.
///
/// The imaginary part of `i tr(A T)` must vanish for a Hermitian/anti-Hermitian
/// pair; anything above the structural tolerance is reported as an error.
pub fn pairing(a: &HermitianMatrix, t: &AntiHermitianMatrix, c: PairingConvention) -> Result<f64> {
    check_same_dim(a.dim(), t.dim())?;
    let tr = (a.matrix() * t.matrix()).trace();
    let z = Complex64::new(0.0, 1.0) * tr;
    let bound = matrix::structural_bound(a.norm() * t.norm());
    if z.im.abs() > bound {
        return Err(Error::PairingResidue { residue: z.im });
    }
    Ok(c.scale() * z.re)
}

/// Inner product on u(n): `-1/2 tr(T T')`.
pub fn algebra_inner(t: &AntiHermitianMatrix, s: &AntiHermitianMatrix) -> Result<f64> {
    check_same_dim(t.dim(), s.dim())?;
    Ok(-0.5 * (t.matrix() * s.matrix()).trace().re)
}

/// Lie bracket on u*(n): `-i (AB - BA)`.
pub fn dual_bracket(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    check_same_dim(a.dim(), b.dim())?;
    let comm = a.matrix() * b.matrix() - b.matrix() * a.matrix();
    HermitianMatrix::with_scale(comm * Complex64::new(0.0, -1.0), a.norm() * b.norm())
}

/// Coadjoint action `U A U^\dagger`.
pub fn coadjoint_action(u: &UnitaryMatrix, a: &HermitianMatrix) -> Result<HermitianMatrix> {
    check_same_dim(u.dim(), a.dim())?;
    let m = u.matrix() * a.matrix() * u.matrix().adjoint();
    HermitianMatrix::with_scale(m, a.norm() * u.dim() as f64)
}

/// Adjoint action `U T U^\dagger`.
pub fn adjoint_action(u: &UnitaryMatrix, t: &AntiHermitianMatrix) -> Result<AntiHermitianMatrix> {
    check_same_dim(u.dim(), t.dim())?;
    let m = u.matrix() * t.matrix() * u.matrix().adjoint();
    AntiHermitianMatrix::with_scale(m, t.norm() * u.dim() as f64)
}

/// Orbit tangent `[mu, T] = mu T - T mu`.
///
/// This is the negative of [`hamiltonian_field_dual`]. Callers that need the
/// opposite orientation should use that function instead of negating by hand.
pub fn coadjoint_infinitesimal(t: &AntiHermitianMatrix, mu: &HermitianMatrix) -> Result<HermitianMatrix> {
    check_same_dim(t.dim(), mu.dim())?;
    let m = mu.matrix() * t.matrix() - t.matrix() * mu.matrix();
    HermitianMatrix::with_scale(m, t.norm() * mu.norm())
}

/// Hamiltonian vector field of the linear function `F_T` at `mu`: `[T, mu]`.
pub fn hamiltonian_field_dual(t: &AntiHermitianMatrix, mu: &HermitianMatrix) -> Result<HermitianMatrix> {
    check_same_dim(t.dim(), mu.dim())?;
    let m = t.matrix() * mu.matrix() - mu.matrix() * t.matrix();
    HermitianMatrix::with_scale(m, t.norm() * mu.norm())
}

/// Exponential of an anti-Hermitian matrix, by diagonalizing the Hermitian `iT`.
///
/// With `iT = V diag(lambda) V^\dagger` we get `exp(T) = V diag(e^{-i lambda}) V^\dagger`,
/// which is unitary up to the accuracy of the eigenbasis.
pub fn matrix_exp(t: &AntiHermitianMatrix) -> UnitaryMatrix {
    let (values, vectors) = t.to_hermitian().eigen();
    let n = t.dim();
    let phases = CVector::from_iterator(n, values.iter().map(|&l| Complex64::from_polar(1.0, -l)));
    let m = &vectors * CMatrix::from_diagonal(&phases) * vectors.adjoint();
    UnitaryMatrix::new(m).expect("exponential of an anti-Hermitian matrix is unitary")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pauli_x() -> HermitianMatrix {
        HermitianMatrix::new(CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])).unwrap()
    }

    fn pauli_y() -> HermitianMatrix {
        HermitianMatrix::new(CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])).unwrap()
    }

    fn pauli_z() -> HermitianMatrix {
        HermitianMatrix::from_real_diagonal(&[1.0, -1.0])
    }

    fn max_entry(m: &CMatrix) -> f64 {
        m.iter().fold(0.0f64, |w, z| w.max(z.norm()))
    }

    // Truncated power series; independent of the eigendecomposition route.
    fn exp_series(m: &CMatrix) -> CMatrix {
        let n = m.nrows();
        let mut term = CMatrix::identity(n, n);
        let mut sum = term.clone();
        for k in 1..60 {
            term = &term * m / Complex64::new(k as f64, 0.0);
            sum += &term;
        }
        sum
    }

    #[test]
    fn pairing_examples() {
        let a = pauli_z();
        let t = AntiHermitianMatrix::from_imaginary_diagonal(&[1.0, 1.0]);
        assert_eq!(pairing(&a, &t, PairingConvention::Unit).unwrap(), 0.0);

        let rho = HermitianMatrix::from_real_diagonal(&[1.0 / 6.0, 2.0 / 6.0, 3.0 / 6.0]);
        let (a_, b_, c_) = (0.3, -1.1, 2.5);
        let t = AntiHermitianMatrix::from_imaginary_diagonal(&[a_, b_, c_]);
        let got = pairing(&rho, &t, PairingConvention::Unit).unwrap();
        assert!((got + (a_ + 2.0 * b_ + 3.0 * c_) / 6.0).abs() < 1e-15);
        // kernel is theta_1 + 2 theta_2 + 3 theta_3 = 0
        let t0 = AntiHermitianMatrix::from_imaginary_diagonal(&[1.0, 1.0, -1.0]);
        assert!(pairing(&rho, &t0, PairingConvention::Unit).unwrap().abs() < 1e-15);
        // half convention is half of it
        let half = pairing(&rho, &t, PairingConvention::Half).unwrap();
        assert!((2.0 * half - got).abs() < 1e-15);

        let zero = AntiHermitianMatrix::zeros(3);
        assert_eq!(pairing(&rho, &zero, PairingConvention::Unit).unwrap(), 0.0);
    }

    #[test]
    fn pairing_errors() {
        let a = pauli_z();
        let t = AntiHermitianMatrix::zeros(3);
        assert!(matches!(
            pairing(&a, &t, PairingConvention::Unit),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn dual_bracket_examples() {
        let b = dual_bracket(&pauli_x(), &pauli_y()).unwrap();
        let expected = pauli_z().matrix() * c(2.0, 0.0);
        assert!(max_entry(&(b.matrix() - expected)) < 1e-15);

        let x = pauli_x();
        assert!(max_entry(dual_bracket(&x, &x).unwrap().matrix()) == 0.0);

        let d1 = HermitianMatrix::from_real_diagonal(&[1.0, 2.0, 3.0]);
        let d2 = HermitianMatrix::from_real_diagonal(&[-4.0, 0.5, 7.0]);
        assert!(max_entry(dual_bracket(&d1, &d2).unwrap().matrix()) == 0.0);
    }

    #[test]
    fn coadjoint_action_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = sampling::hermitian(&mut rng, 3);
        let same = coadjoint_action(&UnitaryMatrix::identity(3), &a).unwrap();
        assert!(max_entry(&(same.matrix() - a.matrix())) < 1e-15);

        // exp(t(-iA)) commutes with A
        let t = a.to_anti_hermitian().scale(0.7);
        let fixed = coadjoint_action(&matrix_exp(&t), &a).unwrap();
        assert!(max_entry(&(fixed.matrix() - a.matrix())) < 1e-12);

        let rho = HermitianMatrix::from_real_diagonal(&[1.0 / 6.0, 2.0 / 6.0, 3.0 / 6.0]);
        let u = sampling::unitary(&mut rng, 3);
        let out = coadjoint_action(&u, &rho).unwrap();
        let ev = out.eigenvalues();
        for (got, want) in ev.iter().zip([1.0 / 6.0, 1.0 / 3.0, 0.5]) {
            assert!((got - want).abs() < 1e-10);
        }
    }

    #[test]
    fn infinitesimal_examples() {
        // T in the isotropy of a diagonal mu
        let mu = HermitianMatrix::from_real_diagonal(&[1.0, 2.0, 3.0]);
        let t = AntiHermitianMatrix::from_imaginary_diagonal(&[0.4, -0.2, 1.0]);
        assert_eq!(max_entry(coadjoint_infinitesimal(&t, &mu).unwrap().matrix()), 0.0);

        // mu = |e1><e1|, T e1 = y with <e1|y> = 0
        let y = CVector::from_vec(vec![c(0.0, 0.0), c(0.3, -0.4), c(-0.1, 0.2)]);
        let e1 = CVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let tm = &y * e1.adjoint() - &e1 * y.adjoint();
        let t = AntiHermitianMatrix::new(tm.clone()).unwrap();
        assert!((&tm * &e1 - &y).norm() < 1e-15);
        let rho = HermitianMatrix::from_real_diagonal(&[1.0, 0.0, 0.0]);
        let sym = &e1 * y.adjoint() + &y * e1.adjoint();
        let field = hamiltonian_field_dual(&t, &rho).unwrap();
        assert!(max_entry(&(field.matrix() - &sym)) < 1e-15);
        let tangent = coadjoint_infinitesimal(&t, &rho).unwrap();
        assert!(max_entry(&(tangent.matrix() + &sym)) < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = sampling::anti_hermitian(&mut rng, 4);
        let id = HermitianMatrix::identity(4);
        assert!(max_entry(coadjoint_infinitesimal(&t, &id).unwrap().matrix()) < 1e-15);
    }

    #[test]
    fn matrix_exp_examples() {
        let e = matrix_exp(&AntiHermitianMatrix::zeros(3));
        assert!(max_entry(&(e.matrix() - CMatrix::identity(3, 3))) < 1e-15);

        let e = matrix_exp(&AntiHermitianMatrix::from_imaginary_diagonal(&[PI, PI]));
        assert!(max_entry(&(e.matrix() + CMatrix::identity(2, 2))) < 1e-15);

        // pi * (-i sigma_y) is the real rotation generator [[0,-1],[1,0]] * pi
        let gen = pauli_y().to_anti_hermitian().scale(PI);
        let e = matrix_exp(&gen);
        let series = exp_series(gen.matrix());
        assert!(max_entry(&(e.matrix() - &series)) < 1e-12);
        assert!(max_entry(&(e.matrix() + CMatrix::identity(2, 2))) < 1e-12);

        let quarter = matrix_exp(&pauli_y().to_anti_hermitian().scale(PI / 2.0));
        let rot = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert!(max_entry(&(quarter.matrix() - rot)) < 1e-12);
    }

    #[test]
    fn matrix_exp_matches_series_on_random_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=5 {
            let t = sampling::anti_hermitian(&mut rng, n);
            let e = matrix_exp(&t);
            assert!(max_entry(&(e.matrix() - exp_series(t.matrix()))) < 1e-10);
        }
    }

    #[test]
    fn hamiltonian_field_matches_flow_derivative() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let t = sampling::anti_hermitian(&mut rng, 3);
        let mu = sampling::hermitian(&mut rng, 3);
        let h = 1e-6;
        let plus = coadjoint_action(&matrix_exp(&t.scale(h)), &mu).unwrap();
        let minus = coadjoint_action(&matrix_exp(&t.scale(-h)), &mu).unwrap();
        let fd = (plus.matrix() - minus.matrix()) / Complex64::new(2.0 * h, 0.0);
        let field = hamiltonian_field_dual(&t, &mu).unwrap();
        assert!(max_entry(&(fd - field.matrix())) < 1e-8);
        let neg = coadjoint_infinitesimal(&t, &mu).unwrap();
        assert!(max_entry(&(field.matrix() + neg.matrix())) < 1e-14);
    }

    #[test]
    fn poisson_identity_on_linear_functions() {
        // {F_T, F_T'}(mu) evaluated as the derivative of F_T along the Hamiltonian
        // field of F_T', versus <mu, [T, T']>.
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let n = 3;
            let mu = sampling::hermitian(&mut rng, n);
            let t = sampling::anti_hermitian(&mut rng, n);
            let s = sampling::anti_hermitian(&mut rng, n);
            for conv in [PairingConvention::Half, PairingConvention::Unit] {
                let flow_s = hamiltonian_field_dual(&s, &mu).unwrap();
                let lhs = pairing(&flow_s, &t, conv).unwrap();
                let rhs = pairing(&mu, &t.bracket(&s).unwrap(), conv).unwrap();
                assert!((lhs - rhs).abs() < 1e-10, "{lhs} vs {rhs}");
            }
        }
    }

    fn seed_and_dim() -> impl Strategy<Value = (u64, usize)> {
        (any::<u64>(), 1usize..=5)
    }

    proptest! {
        #[test]
        fn pairing_is_ad_invariant((seed, n) in seed_and_dim()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = sampling::hermitian(&mut rng, n);
            let t = sampling::anti_hermitian(&mut rng, n);
            let u = sampling::unitary(&mut rng, n);
            let lhs = pairing(&coadjoint_action(&u, &a).unwrap(), &adjoint_action(&u, &t).unwrap(), PairingConvention::Half).unwrap();
            let rhs = pairing(&a, &t, PairingConvention::Half).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()));
        }

        #[test]
        fn pairing_is_bilinear((seed, n) in seed_and_dim(), s in -3.0f64..3.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = sampling::hermitian(&mut rng, n);
            let b = sampling::hermitian(&mut rng, n);
            let t = sampling::anti_hermitian(&mut rng, n);
            let conv = PairingConvention::Unit;
            let lhs = pairing(&a.add(&b.scale(s)).unwrap(), &t, conv).unwrap();
            let rhs = pairing(&a, &t, conv).unwrap() + s * pairing(&b, &t, conv).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()));
            // <A, [T, T']> is antisymmetric in (T, T')
            let t2 = sampling::anti_hermitian(&mut rng, n);
            let x = pairing(&a, &t.bracket(&t2).unwrap(), conv).unwrap();
            let y = pairing(&a, &t2.bracket(&t).unwrap(), conv).unwrap();
            prop_assert!((x + y).abs() <= 1e-12 * (1.0 + x.abs()));
        }

        #[test]
        fn dual_bracket_jacobi((seed, n) in seed_and_dim()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = sampling::hermitian(&mut rng, n);
            let b = sampling::hermitian(&mut rng, n);
            let c_ = sampling::hermitian(&mut rng, n);
            let j1 = dual_bracket(&a, &dual_bracket(&b, &c_).unwrap()).unwrap();
            let j2 = dual_bracket(&b, &dual_bracket(&c_, &a).unwrap()).unwrap();
            let j3 = dual_bracket(&c_, &dual_bracket(&a, &b).unwrap()).unwrap();
            let sum = j1.matrix() + j2.matrix() + j3.matrix();
            prop_assert!(max_entry(&sum) <= 1e-10);
        }

        #[test]
        fn coadjoint_action_preserves_spectrum((seed, n) in seed_and_dim()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = sampling::hermitian(&mut rng, n);
            let u = sampling::unitary(&mut rng, n);
            let before = a.eigenvalues();
            let after = coadjoint_action(&u, &a).unwrap().eigenvalues();
            for (x, y) in before.iter().zip(&after) {
                prop_assert!((x - y).abs() <= 1e-10);
            }
        }

        #[test]
        fn matrix_exp_one_parameter_group((seed, n) in seed_and_dim(), s in -2.0f64..2.0, t in -2.0f64..2.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = sampling::anti_hermitian(&mut rng, n);
            let lhs = matrix_exp(&x.scale(s + t));
            let rhs = matrix_exp(&x.scale(s)).compose(&matrix_exp(&x.scale(t))).unwrap();
            prop_assert!(max_entry(&(lhs.matrix() - rhs.matrix())) <= 1e-10);
        }
    }
}
