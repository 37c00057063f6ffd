use std::path::Path;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{MsrError, Result};
use crate::msr::{regularized_sqrt, sqrt_integral};
use crate::quadrature::make_rule;
use crate::states::State;
use crate::sym::{order_unit_norm, sqrt_spectral, SymMatrix, ToleranceConfig};

use super::{read_text, write_text};

/// `{"n": 2, "data": [row-major entries]}`, shared by matrices and density
/// matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub n: usize,
    pub data: Vec<f64>,
}

impl MatrixFile {
    pub fn from_sym(a: &SymMatrix) -> Self {
        Self {
            n: a.n(),
            data: a.to_row_major(),
        }
    }

    pub fn to_sym(&self, cfg: &ToleranceConfig) -> Result<SymMatrix> {
        if self.data.len() != self.n * self.n {
            return Err(MsrError::Input(format!(
                "expected {} entries for n = {}, got {}",
                self.n * self.n,
                self.n,
                self.data.len()
            )));
        }
        SymMatrix::from_matrix_with(DMatrix::from_row_slice(self.n, self.n, &self.data), cfg)
    }
}

fn parse_matrix_file(text: &str, path: &Path) -> Result<MatrixFile> {
    serde_json::from_str(text).map_err(|e| MsrError::Input(format!("{}: {e}", path.display())))
}

pub fn read_matrix(path: &Path, cfg: &ToleranceConfig) -> Result<SymMatrix> {
    parse_matrix_file(&read_text(path)?, path)?.to_sym(cfg)
}

/// Reads a density matrix and validates it as a state.
pub fn read_state(path: &Path, cfg: &ToleranceConfig) -> Result<State> {
    State::new(read_matrix(path, cfg)?, cfg)
}

pub fn write_matrix(path: &Path, a: &SymMatrix) -> Result<()> {
    let mut json = serde_json::to_string(&MatrixFile::from_sym(a)).expect("matrix serializes");
    json.push('\n');
    write_text(path, &json)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SqrtMethod {
    Spectral,
    Integral,
    /// Spectral root of `a + 1/n`.
    Regularized,
}

impl FromStr for SqrtMethod {
    type Err = MsrError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spectral" => Ok(SqrtMethod::Spectral),
            "integral" => Ok(SqrtMethod::Integral),
            "regularized" => Ok(SqrtMethod::Regularized),
            _ => Err(MsrError::Input(format!(
                "unknown method `{s}` (spectral, integral or regularized)"
            ))),
        }
    }
}

/// Result matrix plus how it was obtained. Readable as a [`MatrixFile`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SqrtOutput {
    pub n: usize,
    pub data: Vec<f64>,
    pub method: SqrtMethod,
    /// Quadrature nodes (integral) or regularization index (regularized).
    pub nodes: Option<u64>,
    /// `‖result − sqrt_spectral(a)‖`.
    pub oracle_gap: f64,
    /// The input was shifted before taking the root.
    pub regularized: bool,
    pub shift: f64,
}

impl SqrtOutput {
    pub fn matrix(&self) -> Result<SymMatrix> {
        SymMatrix::from_row_major(self.n, &self.data)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("output serializes");
        s.push('\n');
        s
    }
}

/// `a^{1/2}` by the chosen method. `count` is the number of quadrature
/// nodes or the regularization index `n`.
pub fn sqrt_command(a: &SymMatrix, method: SqrtMethod, count: u64, cfg: &ToleranceConfig) -> Result<SqrtOutput> {
    let oracle = sqrt_spectral(a, cfg)?;
    let (value, nodes, regularized, shift) = match method {
        SqrtMethod::Spectral => (oracle.clone(), None, false, 0.0),
        SqrtMethod::Integral => {
            let rule = make_rule(count as usize)?;
            let r = sqrt_integral(a, &rule, cfg)?;
            (r.value, Some(count), r.regularized, r.shift)
        }
        SqrtMethod::Regularized => {
            if count == 0 {
                return Err(MsrError::Input("regularization index must be positive".into()));
            }
            (regularized_sqrt(a, count, cfg)?, Some(count), true, 1.0 / count as f64)
        }
    };
    Ok(SqrtOutput {
        n: value.n(),
        data: value.to_row_major(),
        method,
        nodes,
        oracle_gap: order_unit_norm(&(&value - &oracle)),
        regularized,
        shift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn sqrt_command_examples() {
        let a = SymMatrix::diag(&[4.0, 9.0]);
        let s = sqrt_command(&a, SqrtMethod::Spectral, 0, &cfg()).unwrap();
        assert_eq!(s.data, vec![2.0, 0.0, 0.0, 3.0]);
        assert_eq!(s.oracle_gap, 0.0);

        let s = sqrt_command(&a, SqrtMethod::Integral, 128, &cfg()).unwrap();
        let m = s.matrix().unwrap();
        assert!(m.max_abs_diff(&SymMatrix::diag(&[2.0, 3.0])) <= 1e-8);
        assert_eq!(s.nodes, Some(128));
        assert!(!s.regularized);

        let b = SymMatrix::from_rows(&[[2.0, 1.0], [1.0, 1.0]]).unwrap();
        let s = sqrt_command(&b, SqrtMethod::Integral, 128, &cfg()).unwrap();
        assert!(s.oracle_gap <= 1e-8);

        let s = sqrt_command(&a, SqrtMethod::Regularized, 1_000_000, &cfg()).unwrap();
        assert!(s.oracle_gap <= 1e-6);
    }

    #[test]
    fn rejects_non_psd() {
        let a = SymMatrix::diag(&[1.0, -1.0]);
        for method in [SqrtMethod::Spectral, SqrtMethod::Integral, SqrtMethod::Regularized] {
            assert!(matches!(
                sqrt_command(&a, method, 64, &cfg()),
                Err(MsrError::NotPositive { .. })
            ));
        }
    }

    #[test]
    fn matrix_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        let a = SymMatrix::from_rows(&[[2.0, 1.0], [1.0, 1.0]]).unwrap();
        write_matrix(&path, &a).unwrap();
        assert_eq!(read_matrix(&path, &cfg()).unwrap(), a);

        std::fs::write(&path, r#"{"n": 2, "data": [1, 2, 3]}"#).unwrap();
        assert!(matches!(read_matrix(&path, &cfg()), Err(MsrError::Input(_))));
        std::fs::write(&path, r#"{"n": 2, "data": [1, 2, 0, 1]}"#).unwrap();
        assert!(matches!(read_matrix(&path, &cfg()), Err(MsrError::Input(_))));
        std::fs::write(&path, "not json").unwrap();
        assert!(matches!(read_matrix(&path, &cfg()), Err(MsrError::Input(_))));

        std::fs::write(&path, r#"{"n": 2, "data": [0.5, 0, 0, 0.5]}"#).unwrap();
        assert!(read_state(&path, &cfg()).is_ok());
        std::fs::write(&path, r#"{"n": 2, "data": [1, 0, 0, 1]}"#).unwrap();
        assert!(matches!(read_state(&path, &cfg()), Err(MsrError::NotState(_))));
    }
}
