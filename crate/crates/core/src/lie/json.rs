use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::{AntiHermitianMatrix, CMatrix, HermitianMatrix, UnitaryMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    Hermitian,
    Antihermitian,
    Unitary,
}

/// Row-major wire format: `{"kind", "n", "re": [[..]], "im": [[..]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub kind: MatrixKind,
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    fn from_matrix(kind: MatrixKind, m: &CMatrix) -> Self {
        let n = m.nrows();
        let re = (0..n).map(|j| (0..n).map(|k| m[(j, k)].re).collect()).collect();
        let im = (0..n).map(|j| (0..n).map(|k| m[(j, k)].im).collect()).collect();
        MatrixJson { kind, n, re, im }
    }

    pub fn from_hermitian(a: &HermitianMatrix) -> Self {
        Self::from_matrix(MatrixKind::Hermitian, a.matrix())
    }

    pub fn from_anti_hermitian(t: &AntiHermitianMatrix) -> Self {
        Self::from_matrix(MatrixKind::Antihermitian, t.matrix())
    }

    pub fn from_unitary(u: &UnitaryMatrix) -> Self {
        Self::from_matrix(MatrixKind::Unitary, u.matrix())
    }

    /// Dense matrix after shape validation; the kind tag is not enforced here.
    pub fn to_matrix(&self) -> Result<CMatrix> {
        let rows_ok = |rows: &Vec<Vec<f64>>| rows.len() == self.n && rows.iter().all(|r| r.len() == self.n);
        if !rows_ok(&self.re) || !rows_ok(&self.im) {
            let found = self.re.iter().chain(&self.im).map(Vec::len).find(|&l| l != self.n);
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: found.unwrap_or(self.re.len().min(self.im.len())),
            });
        }
        if self.n == 0 {
            return Err(Error::NotSquare { rows: 0, cols: 0 });
        }
        Ok(CMatrix::from_fn(self.n, self.n, |j, k| Complex64::new(self.re[j][k], self.im[j][k])))
    }

    fn expect_kind(&self, kind: MatrixKind) -> Result<CMatrix> {
        if self.kind != kind {
            return Err(Error::Structure {
                kind: match kind {
                    MatrixKind::Hermitian => "Hermitian",
                    MatrixKind::Antihermitian => "anti-Hermitian",
                    MatrixKind::Unitary => "unitary",
                },
                deviation: f64::INFINITY,
                tolerance: 0.0,
            });
        }
        self.to_matrix()
    }

    pub fn to_hermitian(&self) -> Result<HermitianMatrix> {
        HermitianMatrix::new(self.expect_kind(MatrixKind::Hermitian)?)
    }

    pub fn to_anti_hermitian(&self) -> Result<AntiHermitianMatrix> {
        AntiHermitianMatrix::new(self.expect_kind(MatrixKind::Antihermitian)?)
    }

    pub fn to_unitary(&self) -> Result<UnitaryMatrix> {
        UnitaryMatrix::new(self.expect_kind(MatrixKind::Unitary)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_hermitian() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(0.5, -0.25),
                Complex64::new(0.5, 0.25),
                Complex64::new(-3.0, 0.0),
            ],
        );
        let h = HermitianMatrix::new(m).unwrap();
        let text = serde_json::to_string(&MatrixJson::from_hermitian(&h)).unwrap();
        assert!(text.contains("\"kind\":\"hermitian\""));
        let back: MatrixJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_hermitian().unwrap(), h);
    }

    #[test]
    fn kind_and_shape_are_checked() {
        let j: MatrixJson =
            serde_json::from_str(r#"{"kind":"antihermitian","n":1,"re":[[0.0]],"im":[[2.0]]}"#).unwrap();
        assert!(j.to_anti_hermitian().is_ok());
        assert!(j.to_hermitian().is_err());
        let bad: MatrixJson =
            serde_json::from_str(r#"{"kind":"hermitian","n":2,"re":[[1.0,0.0]],"im":[[0.0,0.0]]}"#).unwrap();
        assert!(matches!(bad.to_matrix(), Err(Error::DimensionMismatch { .. })));
    }
}
