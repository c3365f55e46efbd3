//! The JSON parameter file.

use std::path::Path;

use moishezon_core::models::ModelError;
use moishezon_core::poly::{fmt_rational, parse_rational, PolyError};
use moishezon_core::{ModelParams, Rational, UniPoly};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ParamsError {
    #[error("cannot read {0}: {1}")]
    Io(String, std::io::Error),
    #[error("malformed params file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("field {field}: {source}")]
    Rational { field: String, source: PolyError },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// `{ n, lambdas, g_hat, g_linear?, c? }`, rationals as `"p/q"` strings and
/// `g_hat` in ascending degree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsFile {
    pub n: usize,
    pub lambdas: Vec<String>,
    pub g_hat: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g_linear: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<[String; 2]>,
}

fn parse_list(field: &str, v: &[String]) -> Result<Vec<Rational>, ParamsError> {
    v.iter()
        .enumerate()
        .map(|(i, s)| {
            parse_rational(s).map_err(|source| ParamsError::Rational {
                field: format!("{field}[{i}]"),
                source,
            })
        })
        .collect()
}

impl ParamsFile {
    pub fn read(path: &Path) -> Result<Self, ParamsError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ParamsError::Io(path.display().to_string(), e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ParamsError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Validates and converts. A given `c` must satisfy `|c|² = 1/4`; a given
    /// `g_linear` must agree with `ĝ` and `c`.
    pub fn to_params(&self) -> Result<ModelParams, ParamsError> {
        let lambdas = parse_list("lambdas", &self.lambdas)?;
        let g = parse_list("g_hat", &self.g_hat)?;
        let mut p = ModelParams::new(self.n, lambdas, UniPoly::new(g))?;
        if let Some([re, im]) = &self.c {
            let re = parse_list("c", std::slice::from_ref(re))?.remove(0);
            let im = parse_list("c", std::slice::from_ref(im))?.remove(0);
            p = p.with_c(re, im)?;
        }
        if let Some(gl) = &self.g_linear {
            p.check_g_linear(&parse_list("g_linear", gl)?)?;
        }
        Ok(p)
    }

    /// The file form of `p`, with `g_linear` when `c` is real.
    pub fn from_params(p: &ModelParams) -> Self {
        let strs = |v: &[Rational]| v.iter().map(fmt_rational).collect::<Vec<_>>();
        let g: Vec<Rational> = (0..p.n).map(|k| p.g_hat.coeff(k)).collect();
        ParamsFile {
            n: p.n,
            lambdas: strs(&p.lambdas),
            g_hat: strs(&g),
            g_linear: p.g_linear().ok().map(|v| strs(&v)),
            c: Some([fmt_rational(&p.c.0), fmt_rational(&p.c.1)]),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_round_trips() {
        let f =
            ParamsFile::parse(r#"{"n":3,"lambdas":["1","2"],"g_hat":["1","0","1/2"]}"#).unwrap();
        let p = f.to_params().unwrap();
        let back = ParamsFile::from_params(&p);
        assert_eq!(back.to_params().unwrap(), p);
        assert_eq!(back.g_linear.as_ref().map(|v| v.len()), Some(5));
    }

    #[test]
    fn rejects_decimals_and_bad_c() {
        let dec = ParamsFile::parse(r#"{"n":3,"lambdas":["1.5","2"],"g_hat":["1"]}"#).unwrap();
        assert!(matches!(dec.to_params(), Err(ParamsError::Rational { .. })));
        let num = ParamsFile::parse(r#"{"n":3,"lambdas":[1,2],"g_hat":["1"]}"#);
        assert!(num.is_err());
        let c = ParamsFile::parse(r#"{"n":3,"lambdas":["1","2"],"g_hat":["1"],"c":["1","0"]}"#)
            .unwrap();
        assert!(matches!(
            c.to_params(),
            Err(ParamsError::Model(ModelError::Normalization(_)))
        ));
        let ok =
            ParamsFile::parse(r#"{"n":3,"lambdas":["1","2"],"g_hat":["1"],"c":["3/10","2/5"]}"#)
                .unwrap();
        assert!(ok.to_params().is_ok());
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(ParamsFile::parse(r#"{"n":3,"lambdas":["1","2"],"g_hat":["1"],"x":1}"#).is_err());
    }
}
