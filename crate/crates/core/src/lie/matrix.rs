use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Relative tolerance for structural invariants (Hermitian, anti-Hermitian, unitary).
pub const STRUCTURAL_TOL: f64 = 1e-12;

pub(crate) fn structural_bound(scale: f64) -> f64 {
    STRUCTURAL_TOL * scale.max(1.0)
}

/// Largest entrywise deviation of `m` from `sign * m^\dagger`.
fn adjoint_deviation(m: &CMatrix, sign: f64) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for k in j..n {
            let d = m[(j, k)] - m[(k, j)].conj() * sign;
            worst = worst.max(d.norm());
        }
    }
    worst
}

fn check_square(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(())
}

pub(crate) fn check_same_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

macro_rules! adjoint_symmetric_type {
    ($(#[$meta:meta])* $name:ident, $sign:expr, $kind:literal) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq)]
        pub struct $name(CMatrix);

        impl $name {
            /// Validates against its own Frobenius norm and symmetrizes.
            pub fn new(m: CMatrix) -> Result<Self> {
                let scale = m.norm();
                Self::with_scale(m, scale)
            }

            /// Validates with a tolerance scaled by `scale` (typically the product of
            /// the norms of the operands the matrix was computed from) and projects
            /// onto the exact subspace.
            pub(crate) fn with_scale(m: CMatrix, scale: f64) -> Result<Self> {
                check_square(&m)?;
                let tolerance = structural_bound(scale);
                let deviation = adjoint_deviation(&m, $sign);
                if !(deviation <= tolerance) {
                    return Err(Error::Structure {
                        kind: $kind,
                        deviation,
                        tolerance,
                    });
                }
                let projected = (&m + m.adjoint() * Complex64::new($sign, 0.0)) * Complex64::new(0.5, 0.0);
                Ok(Self(projected))
            }

            pub fn zeros(n: usize) -> Self {
                Self(CMatrix::zeros(n, n))
            }

            pub fn dim(&self) -> usize {
                self.0.nrows()
            }

            pub fn matrix(&self) -> &CMatrix {
                &self.0
            }

            pub fn into_matrix(self) -> CMatrix {
                self.0
            }

            pub fn norm(&self) -> f64 {
                self.0.norm()
            }

            pub fn scale(&self, s: f64) -> Self {
                Self(&self.0 * Complex64::new(s, 0.0))
            }

            pub fn add(&self, other: &Self) -> Result<Self> {
                check_same_dim(self.dim(), other.dim())?;
                Ok(Self(&self.0 + &other.0))
            }
        }
    };
}

adjoint_symmetric_type!(
    /// Element of u*(n): an observable, a density matrix, a point of a coadjoint orbit.
    HermitianMatrix,
    1.0,
    "Hermitian"
);

adjoint_symmetric_type!(
    /// Element of u(n): an infinitesimal unitary symmetry.
    AntiHermitianMatrix,
    -1.0,
    "anti-Hermitian"
);

impl HermitianMatrix {
    pub fn identity(n: usize) -> Self {
        Self(CMatrix::identity(n, n))
    }

    pub fn from_real_diagonal(d: &[f64]) -> Self {
        let v = CVector::from_iterator(d.len(), d.iter().map(|&x| Complex64::new(x, 0.0)));
        Self(CMatrix::from_diagonal(&v))
    }

    /// Real eigenvalues in ascending order with the matching unitary eigenbasis
    /// (columns).
    pub fn eigen(&self) -> (Vec<f64>, CMatrix) {
        let eig = SymmetricEigen::new(self.0.clone());
        let n = self.dim();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let mut vectors = CMatrix::zeros(n, n);
        for (dst, &src) in order.iter().enumerate() {
            vectors.set_column(dst, &eig.eigenvectors.column(src));
        }
        (values, vectors)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.eigen().0
    }

    /// Operator norm, i.e. the largest absolute eigenvalue.
    pub fn spectral_norm(&self) -> f64 {
        self.eigenvalues().iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// `-i * self`, the anti-Hermitian matrix identified with this covector.
    pub fn to_anti_hermitian(&self) -> AntiHermitianMatrix {
        AntiHermitianMatrix(&self.0 * Complex64::new(0.0, -1.0))
    }
}

impl AntiHermitianMatrix {
    /// `i * self`, which is Hermitian.
    pub fn to_hermitian(&self) -> HermitianMatrix {
        HermitianMatrix(&self.0 * Complex64::new(0.0, 1.0))
    }

    /// Diagonal matrix `diag(i*theta_1, ..., i*theta_n)`.
    pub fn from_imaginary_diagonal(theta: &[f64]) -> Self {
        let v = CVector::from_iterator(theta.len(), theta.iter().map(|&x| Complex64::new(0.0, x)));
        Self(CMatrix::from_diagonal(&v))
    }

    /// Lie bracket `[self, other] = self*other - other*self`.
    pub fn bracket(&self, other: &Self) -> Result<Self> {
        check_same_dim(self.dim(), other.dim())?;
        let c = &self.0 * &other.0 - &other.0 * &self.0;
        Self::with_scale(c, self.norm() * other.norm())
    }
}

/// Element of U(n).
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix(CMatrix);

impl UnitaryMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        check_square(&m)?;
        let n = m.nrows();
        let residual = &m * m.adjoint() - CMatrix::identity(n, n);
        let deviation = residual.iter().fold(0.0f64, |w, z| w.max(z.norm()));
        let tolerance = structural_bound((n as f64).sqrt());
        if !(deviation <= tolerance) {
            return Err(Error::Structure {
                kind: "unitary",
                deviation,
                tolerance,
            });
        }
        Ok(Self(m))
    }

    pub fn identity(n: usize) -> Self {
        Self(CMatrix::identity(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        check_same_dim(self.dim(), other.dim())?;
        Ok(Self(&self.0 * &other.0))
    }

    pub fn apply(&self, x: &CVector) -> Result<CVector> {
        check_same_dim(self.dim(), x.len())?;
        Ok(&self.0 * x)
    }
}

/// Normalization of the pairing between u*(n) and u(n).
///
/// `Half` gives `<A,T> = (i/2) tr(AT)`, `Unit` gives `<A,T> = i tr(AT)`.
/// The convention is always passed explicitly; there is no global default.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairingConvention {
    Half,
    Unit,
}

impl PairingConvention {
    pub fn scale(self) -> f64 {
        match self {
            PairingConvention::Half => 0.5,
            PairingConvention::Unit => 1.0,
        }
    }

    pub fn from_scale(scale: f64) -> Option<Self> {
        if scale == 0.5 {
            Some(PairingConvention::Half)
        } else if scale == 1.0 {
            Some(PairingConvention::Unit)
        } else {
            None
        }
    }
}
