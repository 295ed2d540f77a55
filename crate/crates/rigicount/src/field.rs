//! The two working fields for numeric realisations, plus parsing and
//! printing of complex scalars in `a+bi` form.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NumField {
    Real,
    Complex,
}

impl std::fmt::Display for NumField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NumField::Real => write!(f, "real"),
            NumField::Complex => write!(f, "complex"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("cannot parse {0:?} as a real or complex number")]
pub struct ParseComplexError(pub String);

/// Parses `a`, `bi`, `a+bi`, `a-bi` (also bare `i`/`-i`), with `a` and `b`
/// ordinary floating-point literals.
pub fn parse_complex(text: &str) -> Result<Complex64, ParseComplexError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(ParseComplexError(text.to_string()));
    }
    let err = || ParseComplexError(text.to_string());
    if let Some(body) = s.strip_suffix(['i', 'I']) {
        // Split at the sign separating the real part from the imaginary
        // part; signs in exponents (e+, e-) and a leading sign do not count.
        let bytes = body.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            let c = bytes[i] as char;
            if (c == '+' || c == '-') && !matches!(bytes[i - 1] as char, 'e' | 'E') {
                split = Some(i);
                break;
            }
        }
        let (re_str, im_str) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let im = match im_str {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => other.parse().map_err(|_| err())?,
        };
        let re = if re_str.is_empty() { 0.0 } else { re_str.parse().map_err(|_| err())? };
        Ok(Complex64::new(re, im))
    } else {
        let re: f64 = s.parse().map_err(|_| err())?;
        Ok(Complex64::new(re, 0.0))
    }
}

/// Prints a scalar readably: real numbers plain, complex as `a+bi`.
pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}
