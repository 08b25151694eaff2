//! Text form of complex scalars and matrices: entries are `re`, `re+imi`
//! or `re-imi`, matrices are row-major lists of rows.

use std::str::FromStr;

use num_complex::Complex64;

use crate::algebra::{CMatrix, CVector, PseudoObservable};
use crate::error::{AlgebraError, Result};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid complex literal {literal:?}")]
pub struct LiteralError {
    pub literal: String,
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` (whitespace ignored).
pub fn parse_complex(text: &str) -> std::result::Result<Complex64, LiteralError> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || LiteralError { literal: text.to_string() };
    if compact.is_empty() {
        return Err(err());
    }
    let z = Complex64::from_str(&compact).map_err(|_| err())?;
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(err());
    }
    Ok(z)
}

fn clean(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

/// Shortest round-tripping form; the imaginary part is omitted when zero.
pub fn format_complex(z: Complex64) -> String {
    let (re, im) = (clean(z.re), clean(z.im));
    if im == 0.0 {
        format!("{re}")
    } else if im < 0.0 {
        format!("{re}-{}i", -im)
    } else {
        format!("{re}+{im}i")
    }
}

/// Fixed-precision form for reports; values that round to zero print
/// without a sign.
pub fn format_complex_fixed(z: Complex64, decimals: usize) -> String {
    let re = format_fixed(z.re, decimals);
    let im_abs = format_fixed(z.im.abs(), decimals);
    let zero = format_fixed(0.0, decimals);
    if im_abs == zero {
        re
    } else if z.im < 0.0 {
        format!("{re}-{im_abs}i")
    } else {
        format!("{re}+{im_abs}i")
    }
}

pub fn format_fixed(x: f64, decimals: usize) -> String {
    let s = format!("{x:.decimals$}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

pub fn matrix_from_rows(rows: &[Vec<Complex64>]) -> Result<PseudoObservable> {
    PseudoObservable::from_rows(rows)
}

pub fn matrix_to_rows(m: &CMatrix) -> Vec<Vec<String>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| format_complex(m[(i, j)])).collect())
        .collect()
}

pub fn vector_to_entries(v: &CVector) -> Vec<String> {
    v.iter().map(|&z| format_complex(z)).collect()
}

/// Parses a row-major matrix of literals.
pub fn parse_matrix(rows: &[Vec<String>]) -> std::result::Result<PseudoObservable, MatrixLiteralError> {
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(|e| parse_complex(e)).collect::<std::result::Result<Vec<_>, _>>())
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(PseudoObservable::from_rows(&parsed)?)
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MatrixLiteralError {
    #[error(transparent)]
    Literal(#[from] LiteralError),
    #[error(transparent)]
    Shape(#[from] AlgebraError),
}
