//! Coadjoint orbits of U(n).

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::contact::{hermitian_inner, SpherePoint, SphereTangent};
use crate::error::{Error, Result};
use crate::lie::{
    self, adjoint_action, check_dim, coadjoint_action, coadjoint_infinitesimal, matrix_exp, pairing,
    AntiHermitianMatrix, CMatrix, CVector, HermitianMatrix, PairingConvention, UnitaryMatrix,
};

/// Relative gap below which eigenvalues belong to one cluster.
pub const CLUSTER_TOL: f64 = 1e-8;
/// Relative gap below which (and above [`CLUSTER_TOL`]) clustering is ambiguous.
pub const CLUSTER_AMBIGUITY: f64 = 1e-6;
/// Relative singular-value cutoff for the kernel of `T -> [mu, T]`.
pub const KERNEL_REL_TOL: f64 = 1e-10;

/// Orthonormal basis of u(n) for `<T, T'> = -1/2 tr(T T')`.
///
/// Order: `sqrt(2) i E_kk` for each k, then `E_jk - E_kj` and `i (E_jk + E_kj)`
/// for each pair j < k.
pub fn unitary_algebra_basis(n: usize) -> Vec<AntiHermitianMatrix> {
    let mut out = Vec::with_capacity(n * n);
    let sqrt2 = std::f64::consts::SQRT_2;
    for k in 0..n {
        let mut m = CMatrix::zeros(n, n);
        m[(k, k)] = Complex64::new(0.0, sqrt2);
        out.push(AntiHermitianMatrix::new(m).expect("imaginary diagonal"));
    }
    for j in 0..n {
        for k in j + 1..n {
            let mut a = CMatrix::zeros(n, n);
            a[(j, k)] = Complex64::new(1.0, 0.0);
            a[(k, j)] = Complex64::new(-1.0, 0.0);
            out.push(AntiHermitianMatrix::new(a).expect("real antisymmetric"));
            let mut s = CMatrix::zeros(n, n);
            s[(j, k)] = Complex64::new(0.0, 1.0);
            s[(k, j)] = Complex64::new(0.0, 1.0);
            out.push(AntiHermitianMatrix::new(s).expect("imaginary symmetric"));
        }
    }
    out
}

/// Eigenvalue clusters of a Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Clusters {
    /// Ascending cluster means.
    pub values: Vec<f64>,
    pub multiplicities: Vec<usize>,
    /// Unitary eigenbasis, columns grouped by cluster.
    pub eigenvectors: CMatrix,
}

impl Clusters {
    /// `V diag(means) V^\dagger`: the matrix with each cluster collapsed to its mean.
    pub fn snapped(&self) -> HermitianMatrix {
        let diag: Vec<f64> = self
            .values
            .iter()
            .zip(&self.multiplicities)
            .flat_map(|(&v, &d)| std::iter::repeat_n(v, d))
            .collect();
        let d = HermitianMatrix::from_real_diagonal(&diag);
        let m = &self.eigenvectors * d.matrix() * self.eigenvectors.adjoint();
        HermitianMatrix::new(m).expect("unitary conjugate of a real diagonal")
    }
}

/// Groups eigenvalues whose gaps are at most `CLUSTER_TOL * |mu|` (spectral norm).
pub fn eigen_clusters(mu: &HermitianMatrix) -> Result<Clusters> {
    let (vals, vecs) = mu.eigen();
    let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let (lower, upper) = (CLUSTER_TOL * scale, CLUSTER_AMBIGUITY * scale);
    let mut groups: Vec<Vec<f64>> = vec![vec![vals[0]]];
    for w in vals.windows(2) {
        let gap = w[1] - w[0];
        if gap <= lower {
            groups.last_mut().expect("non-empty").push(w[1]);
        } else if gap <= upper {
            return Err(Error::AmbiguousCluster { gap, lower, upper });
        } else {
            groups.push(vec![w[1]]);
        }
    }
    Ok(Clusters {
        values: groups.iter().map(|g| g.iter().sum::<f64>() / g.len() as f64).collect(),
        multiplicities: groups.iter().map(Vec::len).collect(),
        eigenvectors: vecs,
    })
}

/// Real matrix of `T -> [mu, T]` from the basis of [`unitary_algebra_basis`] to
/// the entries of the Hermitian output, flattened as `(re, im)` pairs.
fn commutator_matrix(mu: &HermitianMatrix, basis: &[AntiHermitianMatrix]) -> DMatrix<f64> {
    let n = mu.dim();
    let mut out = DMatrix::zeros(2 * n * n, basis.len());
    for (col, t) in basis.iter().enumerate() {
        let c = mu.matrix() * t.matrix() - t.matrix() * mu.matrix();
        for (idx, z) in c.iter().enumerate() {
            out[(2 * idx, col)] = z.re;
            out[(2 * idx + 1, col)] = z.im;
        }
    }
    out
}

/// Orthonormal basis of the isotropy algebra `g_mu = {T in u(n) : [mu, T] = 0}`.
#[derive(Debug, Clone)]
pub struct IsotropyBasis {
    pub mu: HermitianMatrix,
    pub basis: Vec<AntiHermitianMatrix>,
    pub multiplicities: Vec<usize>,
}

impl IsotropyBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Kernel of `T -> [mu, T]` after collapsing each eigenvalue cluster to its mean.
///
/// The kernel dimension is checked against `sum d_j^2`.
pub fn isotropy_algebra(mu: &HermitianMatrix) -> Result<IsotropyBasis> {
    let clusters = eigen_clusters(mu)?;
    let snapped = clusters.snapped();
    let n = mu.dim();
    let algebra = unitary_algebra_basis(n);
    let svd = commutator_matrix(&snapped, &algebra).svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let sigma_max = svd.singular_values.iter().fold(0.0f64, |m, &s| m.max(s));
    let cutoff = KERNEL_REL_TOL * sigma_max;

    // A scalar mu leaves only rounding noise in the map; every direction is kernel.
    let vanishing = sigma_max <= KERNEL_REL_TOL * snapped.spectral_norm();
    let mut basis = Vec::new();
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if !vanishing && s > cutoff {
            continue;
        }
        let mut m = CMatrix::zeros(n, n);
        for (coef, b) in v_t.row(i).iter().zip(&algebra) {
            m += b.matrix() * Complex64::new(*coef, 0.0);
        }
        basis.push(AntiHermitianMatrix::new(m)?);
    }
    let expected: usize = clusters.multiplicities.iter().map(|d| d * d).sum();
    if basis.len() != expected {
        return Err(Error::IsotropyDimension {
            expected,
            found: basis.len(),
        });
    }
    Ok(IsotropyBasis {
        mu: snapped,
        basis,
        multiplicities: clusters.multiplicities,
    })
}

/// `omega(ad*_X mu, ad*_Y mu) = <mu, [X, Y]>`.
pub fn kks_form(
    mu: &HermitianMatrix,
    x: &AntiHermitianMatrix,
    y: &AntiHermitianMatrix,
    c: PairingConvention,
) -> Result<f64> {
    check_dim(mu.dim(), x.dim())?;
    pairing(mu, &x.bracket(y)?, c)
}

/// `Im<y|y'>` for tangent vectors at `x`.
pub fn kks_pure_state(x: &SpherePoint, y: &SphereTangent, y2: &SphereTangent) -> Result<f64> {
    if y.at() != x || y2.at() != x {
        return Err(Error::NotTangent { residue: f64::NAN });
    }
    Ok(hermitian_inner(y.vector(), y2.vector()).im)
}

/// Moment map `J(x) = |x><x|`.
pub fn moment_map(x: &CVector) -> HermitianMatrix {
    HermitianMatrix::new(x * x.adjoint()).expect("outer product is Hermitian")
}

/// Anti-Hermitian `T` with `T x = y` for a unit `x` and tangent `y`:
/// `|y><x| - |x><y| - i Im<x|y> |x><x|`.
pub fn pure_state_generator(y: &SphereTangent) -> AntiHermitianMatrix {
    let x = y.at().vector();
    let v = y.vector();
    let im = hermitian_inner(x, v).im;
    let m = v * x.adjoint() - x * v.adjoint() - x * x.adjoint() * Complex64::new(0.0, im);
    AntiHermitianMatrix::new(m).expect("anti-Hermitian by construction")
}

/// Point `mu` of an orbit together with a generator and its tangent `[mu, T]`.
#[derive(Debug, Clone)]
pub struct OrbitTangentPair {
    pub base: HermitianMatrix,
    pub generator: AntiHermitianMatrix,
    pub vector: HermitianMatrix,
}

impl OrbitTangentPair {
    pub fn new(base: HermitianMatrix, generator: AntiHermitianMatrix) -> Result<Self> {
        let vector = coadjoint_infinitesimal(&generator, &base)?;
        Ok(Self { base, generator, vector })
    }
}

/// Tangent vector `(v, sigma)` of `T*U(n) = U(n) x u*(n)` in left trivialization.
#[derive(Debug, Clone)]
pub struct CotangentVector {
    pub v: AntiHermitianMatrix,
    pub sigma: HermitianMatrix,
}

/// `<sigma, v'> - <sigma', v> + <mu, [v, v']>`.
pub fn cotangent_symplectic(
    mu: &HermitianMatrix,
    a: &CotangentVector,
    b: &CotangentVector,
    c: PairingConvention,
) -> Result<f64> {
    Ok(pairing(&a.sigma, &b.v, c)? - pairing(&b.sigma, &a.v, c)? + pairing(mu, &a.v.bracket(&b.v)?, c)?)
}

/// `(omega at Ad*_g mu on (Ad_g v, Ad_g v'), <mu, [v, v']>)`.
pub fn reduced_form_pullback_check(
    mu: &HermitianMatrix,
    g: &UnitaryMatrix,
    v: &AntiHermitianMatrix,
    v2: &AntiHermitianMatrix,
    c: PairingConvention,
) -> Result<(f64, f64)> {
    let moved = coadjoint_action(g, mu)?;
    let lhs = kks_form(&moved, &adjoint_action(g, v)?, &adjoint_action(g, v2)?, c)?;
    let rhs = pairing(mu, &v.bracket(v2)?, c)?;
    Ok((lhs, rhs))
}

/// `exp(tT) mu0 exp(-tT)`.
pub fn coadjoint_flow_linear(t: &AntiHermitianMatrix, mu0: &HermitianMatrix, time: f64) -> Result<HermitianMatrix> {
    check_dim(t.dim(), mu0.dim())?;
    coadjoint_action(&matrix_exp(&t.scale(time)), mu0)
}

/// Summary emitted by `orbit-info`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitInfo {
    pub spectrum: Vec<f64>,
    pub multiplicities: Vec<usize>,
    pub isotropy_dim: usize,
    pub orbit_dim: usize,
}

pub fn orbit_info(mu: &HermitianMatrix) -> Result<OrbitInfo> {
    let iso = isotropy_algebra(mu)?;
    let clusters = eigen_clusters(mu)?;
    let n = mu.dim();
    Ok(OrbitInfo {
        spectrum: clusters.values,
        multiplicities: clusters.multiplicities,
        isotropy_dim: iso.dim(),
        orbit_dim: n * n - iso.dim(),
    })
}

/// `-1/2 tr(T T')`, re-exported for callers working with isotropy bases.
pub use lie::algebra_inner;
