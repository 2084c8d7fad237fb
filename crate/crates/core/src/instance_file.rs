//! The JSON instance format.
//!
//! ```json
//! { "n": 2, "A": [["1","0"],["0","1"],["1","1"]], "c": ["-1","-1"], "norm": "linf",
//!   "b_nominal": ["0","1","0"], "description": "optional" }
//! ```
//!
//! Numbers are rational strings (`"3"`, `"-2/5"`). Unknown fields are rejected
//! unless parsing in lenient mode.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::argmin::ProblemInstance;
use crate::error::{Error, Result};
use crate::exact::{format_vector, parse_rational, Matrix, Rational, Vector};
use crate::geometry::Norm;

pub const KNOWN_FIELDS: [&str; 6] = ["n", "A", "c", "norm", "b_nominal", "description"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub n: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<String>>,
    pub c: Vec<String>,
    #[serde(default = "default_norm")]
    pub norm: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_nominal: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
}

fn default_norm() -> String {
    "linf".into()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ParseMode {
    #[default]
    Strict,
    Lenient,
}

/// Validated contents of an instance file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedInstance {
    pub instance: ProblemInstance,
    pub b_nominal: Option<Vector>,
    pub description: Option<String>,
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse(format!("line {}, column {}: {}", e.line(), e.column(), e))
}

fn field_rational(field: &str, text: &str) -> Result<Rational> {
    parse_rational(text).map_err(|e| Error::Parse(format!("field {field}: {e}")))
}

impl InstanceFile {
    pub fn from_json(text: &str, mode: ParseMode) -> Result<Self> {
        match mode {
            ParseMode::Strict => serde_json::from_str(text).map_err(json_error),
            ParseMode::Lenient => {
                let mut value: serde_json::Value = serde_json::from_str(text).map_err(json_error)?;
                if let Some(obj) = value.as_object_mut() {
                    obj.retain(|k, _| KNOWN_FIELDS.contains(&k.as_str()));
                }
                serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))
            }
        }
    }

    pub fn from_instance(inst: &ProblemInstance, b_nominal: Option<&[Rational]>, description: Option<&str>) -> Self {
        InstanceFile {
            n: inst.n(),
            a: inst.rows().rows().map(format_vector).collect(),
            c: format_vector(inst.objective()),
            norm: inst.norm().name().into(),
            b_nominal: b_nominal.map(format_vector),
            description: description.map(str::to_owned),
        }
    }

    pub fn to_parsed(&self) -> Result<ParsedInstance> {
        if self.n == 0 {
            return Err(Error::Parse("field n: must be at least 1".into()));
        }
        if self.a.is_empty() {
            return Err(Error::Parse("field A: at least one constraint row is required".into()));
        }
        let mut rows = Vec::with_capacity(self.a.len());
        for (t, row) in self.a.iter().enumerate() {
            if row.len() != self.n {
                return Err(Error::Parse(format!("field A[{t}]: expected {} entries, found {}", self.n, row.len())));
            }
            rows.push(
                row.iter()
                    .enumerate()
                    .map(|(j, s)| field_rational(&format!("A[{t}][{j}]"), s))
                    .collect::<Result<Vector>>()?,
            );
        }
        if self.c.len() != self.n {
            return Err(Error::Parse(format!("field c: expected {} entries, found {}", self.n, self.c.len())));
        }
        let c = self
            .c
            .iter()
            .enumerate()
            .map(|(j, s)| field_rational(&format!("c[{j}]"), s))
            .collect::<Result<Vector>>()?;
        let norm = Norm::parse(&self.norm).map_err(|e| Error::Parse(format!("field norm: {e}")))?;
        let b_nominal = match &self.b_nominal {
            None => None,
            Some(b) => {
                if b.len() != rows.len() {
                    return Err(Error::Parse(format!(
                        "field b_nominal: expected {} entries, found {}",
                        rows.len(),
                        b.len()
                    )));
                }
                Some(
                    b.iter()
                        .enumerate()
                        .map(|(t, s)| field_rational(&format!("b_nominal[{t}]"), s))
                        .collect::<Result<Vector>>()?,
                )
            }
        };
        let instance = ProblemInstance::new(Matrix::from_rows(self.n, &rows)?, c, norm)?;
        Ok(ParsedInstance { instance, b_nominal, description: self.description.clone() })
    }

    /// Canonical JSON: fixed field order, reduced rationals, no description.
    /// This is what report digests are taken over.
    pub fn canonical_json(inst: &ProblemInstance) -> String {
        let canonical = InstanceFile::from_instance(inst, None, None);
        serde_json::to_string(&canonical).expect("plain data serializes")
    }
}

pub fn parse_instance_text(text: &str, mode: ParseMode) -> Result<ParsedInstance> {
    InstanceFile::from_json(text, mode)?.to_parsed()
}

pub fn parse_instance_file(path: &Path, mode: ParseMode) -> Result<ParsedInstance> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_instance_text(&text, mode).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}
