//! JSON file formats.
//!
//! Tensor files are objects `{"m": int, "n": int, "dense": [...]}` or
//! `{"m": int, "n": int, "coo": [[i1, j1, i2, j2, value], ...]}`. Dense arrays
//! use the row-major layout of [`BiquadraticTensor`]; coordinate entries not
//! listed are zero and a repeated coordinate is an error. The writer always
//! emits `dense` with 17 significant digits, which round-trips bit-exactly.
//!
//! Matrix files are `{"rows": int, "cols": int, "dense": [...]}`.

use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;

use crate::error::{BiquadError, Result};
use crate::tensor::{BiquadraticTensor, Matrix};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TensorFile {
    m: usize,
    n: usize,
    #[serde(default)]
    dense: Option<Vec<f64>>,
    #[serde(default)]
    coo: Option<Vec<(usize, usize, usize, usize, f64)>>,
}

/// Parses a tensor from JSON text.
pub fn parse_tensor(text: &str) -> Result<BiquadraticTensor> {
    let file: TensorFile = serde_json::from_str(text)?;
    match (file.dense, file.coo) {
        (Some(dense), None) => BiquadraticTensor::new_dense(file.m, file.n, dense),
        (None, Some(coo)) => BiquadraticTensor::from_coo(file.m, file.n, &coo),
        (Some(_), Some(_)) => Err(BiquadError::Parse(
            "tensor file has both \"dense\" and \"coo\"".into(),
        )),
        (None, None) => Err(BiquadError::Parse(
            "tensor file needs \"dense\" or \"coo\"".into(),
        )),
    }
}

/// Formats a scalar with 17 significant digits as a JSON number.
pub fn format_scalar(v: f64) -> String {
    format!("{v:.16e}")
}

/// Serializes a tensor to JSON in dense form.
pub fn tensor_to_json(t: &BiquadraticTensor) -> String {
    let mut out = format!("{{\"m\":{},\"n\":{},\"dense\":[", t.m(), t.n());
    for (k, v) in t.entries().iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        let _ = write!(out, "{}", format_scalar(*v));
    }
    out.push_str("]}\n");
    out
}

pub fn read_tensor(path: impl AsRef<Path>) -> Result<BiquadraticTensor> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| BiquadError::Io(format!("{}: {e}", path.as_ref().display())))?;
    parse_tensor(&text)
}

pub fn write_tensor(path: impl AsRef<Path>, t: &BiquadraticTensor) -> Result<()> {
    std::fs::write(path, tensor_to_json(t))?;
    Ok(())
}

pub fn parse_matrix(text: &str) -> Result<Matrix> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct MatrixFile {
        rows: usize,
        cols: usize,
        dense: Vec<f64>,
    }
    let file: MatrixFile = serde_json::from_str(text)?;
    Matrix::from_rows(file.rows, file.cols, file.dense)
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<Matrix> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| BiquadError::Io(format!("{}: {e}", path.as_ref().display())))?;
    parse_matrix(&text)
}

pub fn matrix_to_json(mat: &Matrix) -> String {
    let body: Vec<String> = mat.data().iter().map(|v| format_scalar(*v)).collect();
    format!(
        "{{\"rows\":{},\"cols\":{},\"dense\":[{}]}}\n",
        mat.rows(),
        mat.cols(),
        body.join(",")
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use proptest::prelude::*;

    #[test]
    fn coo_and_dense_agree() {
        let coo = r#"{"m":2,"n":2,"coo":[[0,0,0,0,1.0]]}"#;
        let t = parse_tensor(coo).unwrap();
        assert_eq!(t, catalog::single_corner());
        let back = parse_tensor(&tensor_to_json(&t)).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn malformed_files() {
        let cases = [
            r#"{"m":2,"n":2}"#,
            r#"{"m":2,"n":2,"dense":[0,0],"coo":[]}"#,
            r#"{"m":2,"n":2,"dense":[0,0]}"#,
            r#"{"m":2,"n":2,"coo":[[0,0,0,0,1],[0,0,0,0,2]]}"#,
            r#"{"m":2,"n":2,"coo":[[0,0,0,2,1]]}"#,
            r#"{"m":2,"n":2,"coo":[[0,0,0,-1,1]]}"#,
            r#"{"m":1,"n":2,"dense":[0,0,0,0]}"#,
            r#"{"m":2,"n":2,"dense":[0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0],"extra":1}"#,
            "not json",
        ];
        for c in cases {
            assert!(parse_tensor(c).is_err(), "accepted {c}");
        }
    }

    #[test]
    fn matrix_round_trip() {
        let mat = Matrix::from_rows(2, 2, vec![2.0, 1.0, 1.0, 2.0]).unwrap();
        assert_eq!(parse_matrix(&matrix_to_json(&mat)).unwrap(), mat);
        assert!(parse_matrix(r#"{"rows":2,"cols":2,"dense":[1,2,3]}"#).is_err());
    }

    proptest! {
        #[test]
        fn dense_round_trip_is_bit_exact(
            m in 2usize..4,
            n in 2usize..4,
            seed in proptest::collection::vec(
                prop_oneof![any::<f64>().prop_filter("finite", |v| v.is_finite()), Just(-0.0), Just(0.0)],
                81,
            ),
        ) {
            let len = m * m * n * n;
            let t = BiquadraticTensor::new_dense(m, n, seed[..len].to_vec()).unwrap();
            let back = parse_tensor(&tensor_to_json(&t)).unwrap();
            for (a, b) in t.entries().iter().zip(back.entries()) {
                prop_assert_eq!(a.to_bits(), b.to_bits());
            }
        }
    }
}
