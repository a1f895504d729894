//! JSON form of rational functions.
//!
//! ```json
//! { "constant": [1.0, 0.0],
//!   "monomials": [[0, 0], [0.5, 0]],
//!   "terms": [ { "pole": [2.0, 0.0], "coeffs": [[1, 0], [0, -1]] } ] }
//! ```
//!
//! Each term is `Σ_k coeffs[k−1]·(1 − z/pole)^{−k}`. `monomials` is optional
//! and, when present, replaces `constant` (its entry 0 is the constant).

use serde::{Deserialize, Serialize};

use ratnorm_core::rational::{PoleTerm, RationalFunction};
use ratnorm_core::C64;

use crate::error::{CliError, Result};

pub type Pair = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDto {
    pub pole: Pair,
    pub coeffs: Vec<Pair>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionDto {
    #[serde(default)]
    pub constant: Pair,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monomials: Option<Vec<Pair>>,
    #[serde(default)]
    pub terms: Vec<TermDto>,
}

fn c(p: Pair) -> C64 {
    C64::new(p[0], p[1])
}

fn pair(z: C64) -> Pair {
    [z.re, z.im]
}

impl FunctionDto {
    pub fn to_rational(&self) -> Result<RationalFunction> {
        let terms = self
            .terms
            .iter()
            .map(|t| PoleTerm::new(c(t.pole), t.coeffs.iter().copied().map(c).collect()))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let poly = match &self.monomials {
            Some(m) => m.iter().copied().map(c).collect(),
            None => vec![c(self.constant)],
        };
        Ok(RationalFunction::with_polynomial(poly, terms)?)
    }

    pub fn from_rational(f: &RationalFunction) -> Self {
        let poly = f.polynomial_part();
        FunctionDto {
            constant: pair(f.constant_term()),
            monomials: (poly.len() > 1).then(|| poly.iter().copied().map(pair).collect()),
            terms: f
                .terms()
                .iter()
                .map(|t| TermDto {
                    pole: pair(t.pole()),
                    coeffs: t.coeffs().iter().copied().map(pair).collect(),
                })
                .collect(),
        }
    }
}

/// Reads a function from inline JSON or from a file path.
pub fn read_function(arg: &str) -> Result<RationalFunction> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_owned()
    } else {
        std::fs::read_to_string(arg).map_err(|source| CliError::Read {
            path: arg.into(),
            source,
        })?
    };
    let dto: FunctionDto = serde_json::from_str(&text)?;
    dto.to_rational()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints() {
        let f = read_function(r#"{"constant":[1,0],"terms":[{"pole":[2,0],"coeffs":[[0,0],[1,0]]}]}"#).unwrap();
        let z = C64::new(0.5, 0.0);
        // 1 + 1/(1 − z/2)² at z = 1/2.
        assert!((f.eval(z).unwrap() - C64::new(1.0 + 16.0 / 9.0, 0.0)).norm() < 1e-14);
        let back = FunctionDto::from_rational(&f);
        assert_eq!(back.to_rational().unwrap().eval(z).unwrap(), f.eval(z).unwrap());
        let p = read_function(r#"{"monomials":[[0,0],[0,0],[1,0]]}"#).unwrap();
        assert_eq!(p.eval(C64::new(3.0, 0.0)).unwrap(), C64::new(9.0, 0.0));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(read_function(r#"{"terms":[{"pole":[0.5,0],"coeffs":[[1,0]]}]}"#).is_err());
        assert!(read_function(r#"{"constant":[1,0],"poles":[]}"#).is_err());
        assert!(read_function("/nonexistent/function.json").is_err());
    }
}
