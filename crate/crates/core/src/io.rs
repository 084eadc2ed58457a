//! JSON schemas shared with the command-line driver.
//!
//! Complex numbers are `[re, im]` pairs and matrices are arrays of rows.
//! Module specs are tagged by `kind`:
//!
//! ```json
//! { "kind": "even", "dim_plus": 2, "dim_minus": 1, "D": [[[0,0], …], …],
//!   "algebra": { "p": … }, "epsilon": 0.5 }
//! { "kind": "odd", "D": …, "g": …, "epsilon": 0.5 }
//! { "kind": "path", "start": …, "end": … }
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::cocyclic::Chain;
use crate::fredholm::{
    CMatrix, EvenFredholmModule, HeatModule, LinearPath, OddFredholmModule, C64,
};
use crate::rational::{format, parse};
use crate::simplex::{SimplexChain, SimplexPoint};
use crate::{Error, Result};

pub type MatrixJson = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(a: &CMatrix) -> MatrixJson {
    a.row_iter()
        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &MatrixJson) -> Result<CMatrix> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if let Some(bad) = rows.iter().find(|r| r.len() != m) {
        return Err(Error::DimensionMismatch(format!(
            "ragged matrix: rows of length {m} and {}",
            bad.len()
        )));
    }
    if rows.iter().flatten().flatten().any(|x| !x.is_finite()) {
        return Err(Error::InvalidModule("non-finite matrix entry".into()));
    }
    Ok(CMatrix::from_fn(n, m, |i, j| {
        C64::new(rows[i][j][0], rows[i][j][1])
    }))
}

fn default_epsilon() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvenSpec {
    pub dim_plus: usize,
    pub dim_minus: usize,
    #[serde(rename = "D")]
    pub dirac: MatrixJson,
    #[serde(default)]
    pub algebra: BTreeMap<String, MatrixJson>,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OddSpec {
    #[serde(rename = "D")]
    pub dirac: MatrixJson,
    pub g: MatrixJson,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathSpec {
    pub start: MatrixJson,
    pub end: MatrixJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModuleSpec {
    Even(EvenSpec),
    Odd(OddSpec),
    Path(PathSpec),
}

impl ModuleSpec {
    pub fn from_even(m: &EvenFredholmModule) -> Self {
        ModuleSpec::Even(EvenSpec {
            dim_plus: m.dim_plus(),
            dim_minus: m.dim_minus(),
            dirac: matrix_to_json(m.dirac()),
            algebra: m
                .algebra()
                .iter()
                .map(|(k, v)| (k.clone(), matrix_to_json(v)))
                .collect(),
            epsilon: m.epsilon(),
        })
    }

    pub fn from_odd(m: &OddFredholmModule, epsilon: f64) -> Self {
        ModuleSpec::Odd(OddSpec {
            dirac: matrix_to_json(m.dirac()),
            g: matrix_to_json(m.unitary()),
            epsilon,
        })
    }

    pub fn from_path(p: &LinearPath) -> Self {
        ModuleSpec::Path(PathSpec {
            start: matrix_to_json(&p.start),
            end: matrix_to_json(&p.end),
        })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ModuleSpec::Even(_) => "even",
            ModuleSpec::Odd(_) => "odd",
            ModuleSpec::Path(_) => "path",
        }
    }

    pub fn even(&self) -> Result<EvenFredholmModule> {
        let ModuleSpec::Even(s) = self else {
            return Err(Error::InvalidModule(format!("expected an even module, found {}", self.kind())));
        };
        let algebra = s
            .algebra
            .iter()
            .map(|(k, v)| Ok((k.clone(), matrix_from_json(v)?)))
            .collect::<Result<_>>()?;
        EvenFredholmModule::new(
            s.dim_plus,
            s.dim_minus,
            matrix_from_json(&s.dirac)?,
            algebra,
            s.epsilon,
        )
    }

    pub fn odd(&self) -> Result<OddFredholmModule> {
        let ModuleSpec::Odd(s) = self else {
            return Err(Error::InvalidModule(format!("expected an odd module, found {}", self.kind())));
        };
        if !(s.epsilon > 0.0) {
            return Err(Error::InvalidModule(format!("theta margin {} is not positive", s.epsilon)));
        }
        OddFredholmModule::new(matrix_from_json(&s.dirac)?, matrix_from_json(&s.g)?)
    }

    /// The straight path of a `path` spec, or `D → g⁻¹Dg` of an odd module.
    pub fn path(&self) -> Result<LinearPath> {
        match self {
            ModuleSpec::Path(s) => {
                LinearPath::new(matrix_from_json(&s.start)?, matrix_from_json(&s.end)?)
            }
            ModuleSpec::Odd(_) => Ok(self.odd()?.path()),
            ModuleSpec::Even(_) => Err(Error::InvalidModule("an even module has no path".into())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainTermJson {
    pub coords: Vec<String>,
    pub coeff: String,
}

/// A simplex chain as `{ "degree": n, "terms": [{ "coords": ["p/q", …], "coeff": "p/q" }, …] }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplexChainJson {
    pub degree: usize,
    pub terms: Vec<ChainTermJson>,
}

impl From<&SimplexChain> for SimplexChainJson {
    fn from(c: &SimplexChain) -> Self {
        Self {
            degree: c.degree(),
            terms: c
                .iter()
                .map(|(x, v)| ChainTermJson {
                    coords: x.coords().iter().map(format).collect(),
                    coeff: format(v),
                })
                .collect(),
        }
    }
}

impl SimplexChainJson {
    pub fn to_chain(&self) -> Result<SimplexChain> {
        let mut out = Chain::zero(self.degree);
        for t in &self.terms {
            let coords = t.coords.iter().map(|s| parse(s)).collect::<Result<Vec<_>>>()?;
            let x = SimplexPoint::new(coords)?;
            if x.degree() != self.degree {
                return Err(Error::DegreeMismatch {
                    expected: self.degree,
                    found: x.degree(),
                });
            }
            out.add_term(x, &parse(&t.coeff)?);
        }
        Ok(out)
    }
}

pub fn from_json_str<T: DeserializeOwned>(s: &str) -> Result<T> {
    Ok(serde_json::from_str(s)?)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    from_json_str(&text)
}

/// Pretty JSON with a trailing newline; field order follows the types, so
/// equal values always serialise to identical bytes.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    fs::write(path, to_json_string(value)?)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fredholm::examples;
    use crate::simplex::universal_cocycle;

    #[test]
    fn even_spec_round_trip() {
        let m = examples::index_one_module();
        let spec = ModuleSpec::from_even(&m);
        let text = to_json_string(&spec).unwrap();
        assert!(text.contains("\"kind\": \"even\""));
        let back: ModuleSpec = from_json_str(&text).unwrap();
        let m2 = back.even().unwrap();
        assert_eq!(m2.dirac(), m.dirac());
        assert_eq!(m2.algebra(), m.algebra());
        assert!(back.odd().is_err());
    }

    #[test]
    fn odd_and_path_specs() {
        let om = examples::commuting_odd_module();
        let spec = ModuleSpec::from_odd(&om, 0.5);
        let back: ModuleSpec = from_json_str(&to_json_string(&spec).unwrap()).unwrap();
        assert_eq!(back.odd().unwrap().unitary(), om.unitary());
        let p = examples::generic_test_path();
        let ps = ModuleSpec::from_path(&p);
        assert_eq!(ps.path().unwrap().end, p.end);
        assert!(ps.even().is_err());
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(from_json_str::<ModuleSpec>("{\"kind\": \"weird\"}"), Err(Error::Schema(_))));
        assert!(matches!(
            read_json::<ModuleSpec>(Path::new("/nonexistent/spec.json")),
            Err(Error::Io(_))
        ));
        assert!(matrix_from_json(&vec![vec![[0.0, 0.0]], vec![]]).is_err());
    }

    #[test]
    fn chain_round_trip() {
        let phi = universal_cocycle(2).unwrap();
        let j = SimplexChainJson::from(&phi);
        assert_eq!(j.terms.len(), 3);
        assert_eq!(j.to_chain().unwrap(), phi);
    }
}
