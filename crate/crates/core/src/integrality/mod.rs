//! Exact integrality decisions for coadjoint orbits of U(n).
//!
//! A Hermitian `mu` with rational spectrum `lambda_j` (multiplicities `d_j`)
//! takes values in `hbar Z` on the kernel lattice of the exponential map of its
//! isotropy torus, where `hbar` generates the subgroup spanned by the `lambda_j`.
//! That is the condition for a compact contactification `U(n)/U^0_mu` to exist;
//! this module computes `hbar` exactly and the dimensions involved.

mod rational;

pub use rational::{rational_gcd, rationalize, Rational, MAX_DENOMINATOR, RATIONALIZE_TOL};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::{pairing, AntiHermitianMatrix, CMatrix, HermitianMatrix, PairingConvention};
use crate::orbit::{eigen_clusters, isotropy_algebra};

/// Distinct eigenvalues with multiplicities, strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectralBlocks {
    lambdas: Vec<Rational>,
    multiplicities: Vec<u64>,
    n: u64,
}

impl SpectralBlocks {
    pub fn lambdas(&self) -> &[Rational] {
        &self.lambdas
    }

    pub fn multiplicities(&self) -> &[u64] {
        &self.multiplicities
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.lambdas.iter().all(Rational::is_zero)
    }

    /// `sum lambda_j d_j`.
    pub fn trace(&self) -> Rational {
        self.lambdas
            .iter()
            .zip(&self.multiplicities)
            .fold(Rational::zero(), |acc, (l, &d)| acc.add(&l.mul_int(d)))
    }

    /// Diagonal floating-point rendering with eigenvalues repeated by multiplicity.
    pub fn to_hermitian(&self) -> HermitianMatrix {
        HermitianMatrix::from_real_diagonal(&self.diagonal())
    }

    pub fn diagonal(&self) -> Vec<f64> {
        self.lambdas
            .iter()
            .zip(&self.multiplicities)
            .flat_map(|(l, &d)| std::iter::repeat_n(l.to_f64(), d as usize))
            .collect()
    }
}

/// Validates and sorts `(lambda, multiplicity)` pairs.
pub fn spectral_blocks(pairs: Vec<(Rational, i64)>) -> Result<SpectralBlocks> {
    if pairs.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    let mut sorted = Vec::with_capacity(pairs.len());
    for (l, d) in pairs {
        if d <= 0 {
            return Err(Error::NonPositiveMultiplicity(d));
        }
        sorted.push((l, d as u64));
    }
    sorted.sort_by(|a, b| a.0.cmp(&b.0));
    for w in sorted.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::DuplicateEigenvalue(w[0].0.to_string()));
        }
    }
    let n = sorted.iter().map(|p| p.1).sum();
    let (lambdas, multiplicities) = sorted.into_iter().unzip();
    Ok(SpectralBlocks {
        lambdas,
        multiplicities,
        n,
    })
}

/// Clusters the spectrum of a floating-point Hermitian matrix and rationalizes
/// each cluster mean against the spectral norm.
pub fn blocks_from_hermitian(mu: &HermitianMatrix) -> Result<SpectralBlocks> {
    let clusters = eigen_clusters(mu)?;
    let scale = clusters.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let pairs = clusters
        .values
        .iter()
        .zip(&clusters.multiplicities)
        .map(|(&v, &d)| Ok((rationalize(v, scale)?, d as i64)))
        .collect::<Result<Vec<_>>>()?;
    spectral_blocks(pairs)
}

/// Positive generator of the subgroup of Q spanned by the eigenvalues; `None`
/// for the zero matrix.
pub fn hbar_generator(blocks: &SpectralBlocks) -> Option<Rational> {
    rational_gcd(&blocks.lambdas)
}

/// Integer quotients `lambda_j / hbar`, erroring if any is not an integer.
pub fn hbar_quotients(blocks: &SpectralBlocks, hbar: &Rational) -> Result<Vec<Rational>> {
    blocks
        .lambdas
        .iter()
        .map(|l| {
            let q = l.div(hbar)?;
            if q.is_integer() {
                Ok(q)
            } else {
                Err(Error::NotMultipleOfHbar(l.to_string()))
            }
        })
        .collect()
}

/// For a quantum state: `1/hbar = sum_j (lambda_j/hbar) d_j`, i.e. unit trace.
pub fn quantum_state_identity(blocks: &SpectralBlocks, hbar: &Rational) -> Result<bool> {
    if let Some(neg) = blocks.lambdas.iter().find(|l| l.is_negative()) {
        return Err(Error::NegativeEigenvalue(neg.to_string()));
    }
    let quotients = hbar_quotients(blocks, hbar)?;
    let weighted = quotients
        .iter()
        .zip(&blocks.multiplicities)
        .fold(Rational::zero(), |acc, (q, &d)| acc.add(&q.mul_int(d)));
    Ok(weighted == hbar.recip()?)
}

/// Full-rank lattice in R^dim; generators are stored as rational multiples of `2 pi`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalLattice {
    dim: usize,
    generators: Vec<Vec<Rational>>,
}

impl RationalLattice {
    /// `generators[i]` is `gamma_i / (2 pi)`.
    pub fn new(generators: Vec<Vec<Rational>>) -> Result<Self> {
        let dim = generators.len();
        for g in &generators {
            crate::lie::check_dim(dim, g.len())?;
        }
        let rank = exact_rank(&generators);
        if rank != dim || dim == 0 {
            return Err(Error::DegenerateLattice { rank, dim });
        }
        Ok(Self { dim, generators })
    }

    /// `2 pi Z^dim`.
    pub fn standard(dim: usize) -> Self {
        let generators = (0..dim)
            .map(|i| (0..dim).map(|j| Rational::from_integer((i == j) as i64)).collect())
            .collect();
        Self { dim, generators }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<Rational>] {
        &self.generators
    }
}

/// Row rank over Q by fraction-exact Gaussian elimination.
fn exact_rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let p = m[rank][col].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][col].is_zero() {
                let f = m[r][col].div(&p).expect("pivot is nonzero");
                let pivot_row = m[rank].clone();
                for (entry, q) in m[r].iter_mut().zip(&pivot_row).skip(col) {
                    *entry = entry.sub(&f.mul(q));
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Values `mu(gamma_i) / (2 pi)` and their positive generator `hbar`.
///
/// For rational input the values always generate some `2 pi hbar Z`, so the
/// flag is always `true`; `hbar` is `None` when `mu` vanishes on the lattice.
pub fn lattice_mu_check(lattice: &RationalLattice, mu: &[Rational]) -> Result<(bool, Option<Rational>)> {
    crate::lie::check_dim(lattice.dim, mu.len())?;
    let values: Vec<Rational> = lattice
        .generators
        .iter()
        .map(|g| g.iter().zip(mu).fold(Rational::zero(), |acc, (a, b)| acc.add(&a.mul(b))))
        .collect();
    Ok((true, rational_gcd(&values)))
}

/// Orthonormal basis of `g^0_mu = {T in g_mu : <mu, T> = 0}`.
pub fn isotropy_zero_basis(mu: &HermitianMatrix, c: PairingConvention) -> Result<Vec<AntiHermitianMatrix>> {
    let iso = isotropy_algebra(mu)?;
    let f: Vec<f64> = iso
        .basis
        .iter()
        .map(|b| pairing(mu, b, c))
        .collect::<Result<_>>()?;
    let fnorm = f.iter().map(|x| x * x).sum::<f64>().sqrt();
    if fnorm <= 1e-12 * mu.norm() {
        return Err(Error::CodimensionZero);
    }
    let d = f.len();
    // Gram-Schmidt in coefficient space seeded by f; keep what follows it.
    let mut frame: Vec<Vec<f64>> = vec![f.iter().map(|x| x / fnorm).collect()];
    for k in 0..d {
        let mut e = vec![0.0; d];
        e[k] = 1.0;
        for _ in 0..2 {
            for b in &frame {
                let dot: f64 = b.iter().zip(&e).map(|(x, y)| x * y).sum();
                e.iter_mut().zip(b).for_each(|(x, y)| *x -= dot * y);
            }
        }
        let norm = e.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            frame.push(e.into_iter().map(|x| x / norm).collect());
        }
    }
    let n = mu.dim();
    let out = frame[1..]
        .iter()
        .map(|coef| {
            let mut m = CMatrix::zeros(n, n);
            for (a, b) in coef.iter().zip(&iso.basis) {
                m += b.matrix() * Complex64::new(*a, 0.0);
            }
            AntiHermitianMatrix::new(m)
        })
        .collect::<Result<Vec<_>>>()?;
    if out.len() + 1 != d {
        return Err(Error::IsotropyDimension {
            expected: d - 1,
            found: out.len(),
        });
    }
    Ok(out)
}

/// Integrality and dimension summary for the orbit through a rational spectrum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralityReport {
    pub integral: bool,
    pub hbar: Option<Rational>,
    pub blocks: SpectralBlocks,
    pub isotropy_dim: u64,
    pub isotropy_zero_dim: u64,
    pub orbit_dim: u64,
    pub contactification_dim: u64,
    pub is_quantum_state: bool,
    pub state_identity_holds: Option<bool>,
}

/// Assembles the report. The zero spectrum has a one-point orbit and no
/// contactification; it is rejected with [`Error::CentralZero`].
pub fn build_report(blocks: &SpectralBlocks) -> Result<IntegralityReport> {
    let hbar = hbar_generator(blocks).ok_or(Error::CentralZero)?;
    hbar_quotients(blocks, &hbar)?;
    let n = blocks.n;
    let isotropy_dim: u64 = blocks.multiplicities.iter().map(|d| d * d).sum();
    let orbit_dim = n * n - isotropy_dim;
    let nonnegative = blocks.lambdas.iter().all(|l| !l.is_negative());
    let state_identity_holds = if nonnegative {
        Some(quantum_state_identity(blocks, &hbar)?)
    } else {
        None
    };
    Ok(IntegralityReport {
        integral: true,
        hbar: Some(hbar),
        blocks: blocks.clone(),
        isotropy_dim,
        isotropy_zero_dim: isotropy_dim - 1,
        orbit_dim,
        contactification_dim: orbit_dim + 1,
        is_quantum_state: nonnegative && blocks.trace() == Rational::one(),
        state_identity_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::algebra_inner;
    use crate::sampling;
    use num_bigint::BigInt;
    use num_traits::{Signed, ToPrimitive};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn blocks(pairs: &[((i64, i64), i64)]) -> SpectralBlocks {
        spectral_blocks(pairs.iter().map(|&((n, d), m)| (r(n, d), m)).collect()).unwrap()
    }

    fn u3_example() -> SpectralBlocks {
        blocks(&[((1, 6), 1), ((2, 6), 1), ((3, 6), 1)])
    }

    /// Largest rational dividing every value: search over `g / k` with `g` the
    /// gcd-candidate numerators and `k` multiples of the common denominator.
    fn brute_force_generator(values: &[Rational]) -> Rational {
        let den = values.iter().fold(BigInt::from(1), |acc, v| num_integer::lcm(acc, v.denom().clone()));
        let ints: Vec<i64> = values
            .iter()
            .map(|v| (v.numer() * (&den / v.denom())).abs().to_i64().unwrap())
            .filter(|&k| k != 0)
            .collect();
        let min = *ints.iter().min().unwrap();
        let best = (1..=min).rev().find(|g| ints.iter().all(|k| k % g == 0)).unwrap();
        Rational::from_big(best.into(), den).unwrap()
    }

    #[test]
    fn spectral_blocks_examples() {
        let b = u3_example();
        assert_eq!(b.lambdas(), &[r(1, 6), r(1, 3), r(1, 2)]);
        assert_eq!((b.multiplicities(), b.n()), (&[1u64, 1, 1][..], 3));
        let z = blocks(&[((0, 1), 2)]);
        assert_eq!(z.n(), 2);
        assert_eq!(blocks(&[((2, 6), 1), ((1, 6), 1), ((3, 6), 1)]), b);
        assert!(matches!(
            spectral_blocks(vec![(r(1, 2), 1), (r(2, 4), 1)]),
            Err(Error::DuplicateEigenvalue(_))
        ));
        assert!(matches!(spectral_blocks(vec![(r(1, 2), 0)]), Err(Error::NonPositiveMultiplicity(0))));
        assert!(matches!(spectral_blocks(vec![]), Err(Error::EmptySpectrum)));
    }

    #[test]
    fn hbar_examples() {
        assert_eq!(hbar_generator(&u3_example()), Some(r(1, 6)));
        let b = blocks(&[((2, 1), 1), ((4, 1), 1)]);
        assert_eq!(hbar_generator(&b), Some(r(2, 1)));
        assert_eq!(brute_force_generator(b.lambdas()), r(2, 1));
        assert_eq!(hbar_generator(&blocks(&[((1, 1), 1)])), Some(r(1, 1)));
        assert_eq!(hbar_generator(&blocks(&[((0, 1), 3)])), None);
    }

    #[test]
    fn quantum_state_examples() {
        assert!(quantum_state_identity(&u3_example(), &r(1, 6)).unwrap());
        let half = blocks(&[((1, 2), 2)]);
        assert!(quantum_state_identity(&half, &r(1, 2)).unwrap());
        let thirds = blocks(&[((1, 3), 1), ((2, 3), 1)]);
        assert!(quantum_state_identity(&thirds, &hbar_generator(&thirds).unwrap()).unwrap());
        let not_state = blocks(&[((1, 1), 1), ((2, 1), 1)]);
        assert!(!quantum_state_identity(&not_state, &r(1, 1)).unwrap());
        let neg = blocks(&[((-1, 2), 1), ((1, 1), 1)]);
        assert!(matches!(quantum_state_identity(&neg, &r(1, 2)), Err(Error::NegativeEigenvalue(_))));
        assert!(matches!(
            quantum_state_identity(&u3_example(), &r(1, 4)),
            Err(Error::NotMultipleOfHbar(_))
        ));
    }

    #[test]
    fn lattice_examples() {
        let mu = [r(1, 6), r(2, 6), r(3, 6)];
        assert_eq!(lattice_mu_check(&RationalLattice::standard(3), &mu).unwrap(), (true, Some(r(1, 6))));
        let zero = [r(0, 1), r(0, 1), r(0, 1)];
        assert_eq!(lattice_mu_check(&RationalLattice::standard(3), &zero).unwrap(), (true, None));
        assert_eq!(
            lattice_mu_check(&RationalLattice::standard(2), &[r(1, 1), r(1, 1)]).unwrap(),
            (true, Some(r(1, 1)))
        );
        assert!(lattice_mu_check(&RationalLattice::standard(2), &mu).is_err());

        let skew = RationalLattice::new(vec![vec![r(1, 1), r(1, 1)], vec![r(0, 1), r(1, 2)]]).unwrap();
        // values (1 + 3, 3/2) = (4, 3/2) generate (1/2) Z
        assert_eq!(lattice_mu_check(&skew, &[r(1, 1), r(3, 1)]).unwrap().1, Some(r(1, 2)));
        assert!(matches!(
            RationalLattice::new(vec![vec![r(1, 1), r(2, 1)], vec![r(1, 2), r(1, 1)]]),
            Err(Error::DegenerateLattice { rank: 1, dim: 2 })
        ));
    }

    #[test]
    fn isotropy_zero_u3_example() {
        let mu = u3_example().to_hermitian();
        let basis = isotropy_zero_basis(&mu, PairingConvention::Unit).unwrap();
        assert_eq!(basis.len(), 2);
        // every element is diagonal with theta_1 + 2 theta_2 + 3 theta_3 = 0
        let thetas: Vec<[f64; 3]> = basis
            .iter()
            .map(|t| {
                let m = t.matrix();
                for j in 0..3 {
                    for k in 0..3 {
                        if j != k {
                            assert!(m[(j, k)].norm() < 1e-12);
                        }
                    }
                }
                [m[(0, 0)].im, m[(1, 1)].im, m[(2, 2)].im]
            })
            .collect();
        for th in &thetas {
            assert!((th[0] + 2.0 * th[1] + 3.0 * th[2]).abs() < 1e-12);
        }
        // intersect with su(3): the combination with zero trace
        let tr = |t: &[f64; 3]| t[0] + t[1] + t[2];
        let (a, b) = (tr(&thetas[0]), tr(&thetas[1]));
        let dir: Vec<f64> = (0..3).map(|k| b * thetas[0][k] - a * thetas[1][k]).collect();
        let scale = dir[0];
        let residual: Vec<f64> = dir.iter().map(|x| x / scale).collect();
        assert!((residual[1] + 2.0).abs() < 1e-10 && (residual[2] - 1.0).abs() < 1e-10);
        // (a, -a, a) is not in g^0: its pairing is proportional to 1 - 2 + 3 = 2
        let t = AntiHermitianMatrix::from_imaginary_diagonal(&[1.0, -1.0, 1.0]);
        assert!(pairing(&mu, &t, PairingConvention::Unit).unwrap().abs() > 0.1);
    }

    #[test]
    fn isotropy_zero_other_examples() {
        let mu = HermitianMatrix::from_real_diagonal(&[1.0, 0.0]);
        let b = isotropy_zero_basis(&mu, PairingConvention::Unit).unwrap();
        assert_eq!(b.len(), 1);
        // oracle: the kernel is spanned by diag(0, i)
        assert!(b[0].matrix()[(0, 0)].norm() < 1e-12);
        assert!((b[0].matrix()[(1, 1)].im.abs() - std::f64::consts::SQRT_2).abs() < 1e-12);

        let s = HermitianMatrix::identity(3).scale(2.5);
        let b = isotropy_zero_basis(&s, PairingConvention::Half).unwrap();
        assert_eq!(b.len(), 8);
        for t in &b {
            assert!(t.matrix().trace().norm() < 1e-12);
            for u in &b {
                let ip = algebra_inner(t, u).unwrap();
                assert!(ip.abs() < 1e-12 || (ip - 1.0).abs() < 1e-12);
            }
        }
        assert!(matches!(
            isotropy_zero_basis(&HermitianMatrix::zeros(2), PairingConvention::Unit),
            Err(Error::CodimensionZero)
        ));
    }

    #[test]
    fn report_examples() {
        let rep = build_report(&u3_example()).unwrap();
        assert!(rep.integral);
        assert_eq!(rep.hbar, Some(r(1, 6)));
        assert_eq!(
            (rep.isotropy_dim, rep.isotropy_zero_dim, rep.orbit_dim, rep.contactification_dim),
            (3, 2, 6, 7)
        );
        assert!(rep.is_quantum_state);
        assert_eq!(rep.state_identity_holds, Some(true));

        for n in 2..=5i64 {
            let pure = blocks(&[((0, 1), n - 1), ((1, 1), 1)]);
            let rep = build_report(&pure).unwrap();
            assert_eq!((rep.orbit_dim, rep.contactification_dim), (2 * n as u64 - 2, 2 * n as u64 - 1));
            assert!(rep.is_quantum_state);
        }

        let mixed = blocks(&[((1, 4), 4)]);
        let rep = build_report(&mixed).unwrap();
        assert_eq!((rep.orbit_dim, rep.contactification_dim), (0, 1));

        let signed = blocks(&[((-1, 1), 1), ((2, 1), 1)]);
        let rep = build_report(&signed).unwrap();
        assert!(!rep.is_quantum_state);
        assert_eq!(rep.state_identity_holds, None);

        assert!(matches!(build_report(&blocks(&[((0, 1), 2)])), Err(Error::CentralZero)));
    }

    #[test]
    fn report_serializes_rationals_as_string_pairs() {
        let json = serde_json::to_value(build_report(&u3_example()).unwrap()).unwrap();
        assert_eq!(json["hbar"], serde_json::json!(["1", "6"]));
        assert_eq!(json["blocks"]["lambdas"][1], serde_json::json!(["1", "3"]));
        assert_eq!(json["contactification_dim"], 7);
    }

    #[test]
    fn blocks_from_floating_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mu = sampling::hermitian_with_spectrum(&mut rng, &[0.5, 1.0 / 3.0, 0.5, 1.0 / 6.0]);
        let b = blocks_from_hermitian(&mu).unwrap();
        assert_eq!(b, blocks(&[((1, 6), 1), ((1, 3), 1), ((1, 2), 2)]));
    }

    fn small_spectrum() -> impl Strategy<Value = Vec<((i64, i64), i64)>> {
        proptest::collection::vec(((-30i64..30, 1i64..13), 1i64..3), 1..5)
    }

    fn dedup(raw: Vec<((i64, i64), i64)>) -> Option<SpectralBlocks> {
        let mut seen = Vec::new();
        let mut pairs = Vec::new();
        for ((n, d), m) in raw {
            let q = r(n, d);
            if !seen.contains(&q) {
                seen.push(q.clone());
                pairs.push((q, m));
            }
        }
        spectral_blocks(pairs).ok()
    }

    proptest! {
        #[test]
        fn hbar_divides_and_is_maximal(raw in small_spectrum()) {
            let Some(b) = dedup(raw) else { return Ok(()) };
            let Some(h) = hbar_generator(&b) else { return Ok(()) };
            let q = hbar_quotients(&b, &h).unwrap();
            let g = q.iter().fold(BigInt::from(0), |acc, x| num_integer::gcd(acc, x.numer().clone()));
            prop_assert_eq!(g, BigInt::from(1));
            prop_assert_eq!(&h, &brute_force_generator(b.lambdas()));
        }

        #[test]
        fn hbar_scales_covariantly(raw in small_spectrum(), sn in 1i64..20, sd in 1i64..20) {
            let Some(b) = dedup(raw) else { return Ok(()) };
            let s = r(sn, sd);
            let scaled = spectral_blocks(
                b.lambdas().iter().zip(b.multiplicities()).map(|(l, &d)| (l.mul(&s), d as i64)).collect(),
            ).unwrap();
            let lhs = hbar_generator(&scaled);
            let rhs = hbar_generator(&b).map(|h| h.mul(&s));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn report_dimensions_are_consistent(raw in small_spectrum()) {
            let Some(b) = dedup(raw) else { return Ok(()) };
            if b.is_zero() { return Ok(()) }
            let rep = build_report(&b).unwrap();
            prop_assert_eq!(rep.contactification_dim, rep.orbit_dim + 1);
            prop_assert_eq!(rep.isotropy_zero_dim + 1, rep.isotropy_dim);
            prop_assert_eq!(rep.orbit_dim + rep.isotropy_dim, b.n() * b.n());
        }
    }
}
