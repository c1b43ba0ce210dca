//! JSON family file format.
//!
//! ```json
//! {"variables":[{"name":"x1","support":2,"probs":[0.5,0.5]}],
//!  "functions":[{"name":"y1","vars":[0],"truth_table":"01"}]}
//! ```
//!
//! `probs` may be omitted for uniform variables. `vars` are 0-based.

use serde::{Deserialize, Serialize};

use super::{FamilySpec, Probs, ReadFunction, Variable};
use crate::error::{Error, Result};
use crate::scalar::Weight;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariableEntry {
    pub name: String,
    pub support: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probs: Option<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionEntry {
    pub name: String,
    pub vars: Vec<usize>,
    pub truth_table: String,
}

/// Raw file contents, before validation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    pub variables: Vec<VariableEntry>,
    pub functions: Vec<FunctionEntry>,
}

impl FamilyFile {
    pub fn into_spec(self) -> Result<FamilySpec<f64>> {
        let variables = self
            .variables
            .into_iter()
            .map(|v| match v.probs {
                None => Variable::uniform(v.name, v.support),
                Some(probs) => {
                    if probs.len() != v.support {
                        return Err(Error::validation(format!(
                            "variable {:?}: support {} but {} probabilities",
                            v.name,
                            v.support,
                            probs.len()
                        )));
                    }
                    Variable::weighted(v.name, probs)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let functions = self
            .functions
            .into_iter()
            .map(|f| ReadFunction::from_bits(f.name, f.vars, &f.truth_table))
            .collect::<Result<Vec<_>>>()?;
        FamilySpec::new(variables, functions)
    }
}

impl<W: Weight> From<&FamilySpec<W>> for FamilyFile {
    fn from(spec: &FamilySpec<W>) -> Self {
        let variables = spec
            .variables()
            .iter()
            .map(|v| VariableEntry {
                name: v.name().to_owned(),
                support: v.support(),
                probs: match v.probs() {
                    Probs::Uniform(_) => None,
                    Probs::Weighted(p) => Some(p.iter().map(Weight::to_f64).collect()),
                },
            })
            .collect();
        let functions = spec
            .functions()
            .iter()
            .map(|f| FunctionEntry {
                name: f.name().to_owned(),
                vars: f.vars().to_vec(),
                truth_table: f.bits(),
            })
            .collect();
        FamilyFile { variables, functions }
    }
}

impl FamilySpec<f64> {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: FamilyFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        file.into_spec()
    }
}

impl<W: Weight> FamilySpec<W> {
    /// Serializes to the family file format. Probabilities are written as
    /// the nearest `f64`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&FamilyFile::from(self)).expect("family file is always serializable")
    }

    /// Same as [`to_json`](Self::to_json), indented.
    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&FamilyFile::from(self)).expect("family file is always serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const XOR: &str = r#"{"variables":[{"name":"x1","support":2},{"name":"x2","support":2,"probs":[0.5,0.5]}],
        "functions":[{"name":"y1","vars":[0],"truth_table":"01"},{"name":"y2","vars":[0,1],"truth_table":"0110"}]}"#;

    #[test]
    fn parses_and_reserializes() {
        let spec = FamilySpec::from_json(XOR).unwrap();
        assert_eq!(spec.num_variables(), 2);
        assert_eq!(spec.num_functions(), 2);
        assert_eq!(spec.read_width(), 2);
        let text = spec.to_json();
        assert_eq!(
            text,
            r#"{"variables":[{"name":"x1","support":2},{"name":"x2","support":2,"probs":[0.5,0.5]}],"functions":[{"name":"y1","vars":[0],"truth_table":"01"},{"name":"y2","vars":[0,1],"truth_table":"0110"}]}"#
        );
        assert_eq!(FamilySpec::from_json(&text).unwrap(), spec);
    }

    #[test]
    fn rejects_bad_files() {
        let wrong_len = XOR.replace("\"0110\"", "\"011\"");
        assert!(matches!(FamilySpec::from_json(&wrong_len), Err(Error::Validation(_))));
        let unnormalized = XOR.replace("[0.5,0.5]", "[0.5,0.6]");
        assert!(matches!(FamilySpec::from_json(&unnormalized), Err(Error::Validation(_))));
        let mismatched = XOR.replace("[0.5,0.5]", "[0.25,0.25,0.5]");
        assert!(matches!(FamilySpec::from_json(&mismatched), Err(Error::Validation(_))));
        assert!(matches!(FamilySpec::from_json("{"), Err(Error::Parse(_))));
        let extra = XOR.replace("\"support\":2}", "\"support\":2,\"bogus\":1}");
        assert!(matches!(FamilySpec::from_json(&extra), Err(Error::Parse(_))));
    }
}
