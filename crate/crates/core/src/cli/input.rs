//! Model files: either a named family with parameters,
//!
//! ```json
//! {"model": {"type": "dephasing", "gamma_z": 1.0}}
//! ```
//!
//! or explicit matrices with complex entries as `[re, im]` pairs,
//!
//! ```json
//! {"dim": 2,
//!  "hamiltonian": [[[0,0],[0,0]],[[0,0],[0,0]]],
//!  "jumps": [{"rate": 1.0, "matrix": [[[1,0],[0,0]],[[0,0],[-1,0]]]}]}
//! ```
//!
//! A `rate` multiplies its matrix by `√rate`.

use std::fs;
use std::path::Path;

use serde::ser::{SerializeMap, SerializeSeq, Serializer};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::models::{build, ModelKind, ModelSpec};
use crate::superop::{check_dim_cap, LindbladModel};

use super::output::to_json;

/// What a model file describes, before any matrices are assembled.
#[derive(Clone, Debug)]
pub enum ModelSource {
    Named(ModelSpec),
    Explicit(LindbladModel),
}

impl ModelSource {
    pub fn build(&self) -> Result<LindbladModel> {
        match self {
            ModelSource::Named(spec) => build(spec),
            ModelSource::Explicit(m) => Ok(m.clone()),
        }
    }

    pub fn spec(&self) -> Option<&ModelSpec> {
        match self {
            ModelSource::Named(spec) => Some(spec),
            ModelSource::Explicit(_) => None,
        }
    }
}

pub fn read_model_source(path: &Path) -> Result<ModelSource> {
    let text = fs::read_to_string(path)?;
    parse_model_source(&text).map_err(|e| match e {
        Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn parse_model_file(path: &Path) -> Result<LindbladModel> {
    read_model_source(path)?.build()
}

pub fn parse_model_str(text: &str) -> Result<LindbladModel> {
    parse_model_source(text)?.build()
}

pub fn parse_model_source(text: &str) -> Result<ModelSource> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| Error::Config(format!("invalid JSON at line {}, column {}: {e}", e.line(), e.column())))?;
    let obj = value.as_object().ok_or_else(|| Error::Config("top level must be a JSON object".into()))?;
    if obj.contains_key("model") {
        reject_unknown(obj, &["model"], "")?;
        parse_named(&obj["model"]).map(ModelSource::Named)
    } else if obj.contains_key("dim") {
        parse_explicit(obj).map(ModelSource::Explicit)
    } else {
        Err(Error::Config("expected a \"model\" object or an explicit \"dim\"/\"hamiltonian\"/\"jumps\" model".into()))
    }
}

fn reject_unknown(obj: &Map<String, Value>, allowed: &[&str], prefix: &str) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(Error::Config(format!("unknown key {:?}", format!("{prefix}{k}")))),
        None => Ok(()),
    }
}

fn parse_named(value: &Value) -> Result<ModelSpec> {
    let obj = value.as_object().ok_or_else(|| Error::Config("key \"model\" must be an object".into()))?;
    let kind = match obj.get("type") {
        Some(Value::String(s)) => s.parse::<ModelKind>()?,
        Some(_) => return Err(Error::Config("key \"model.type\" must be a string".into())),
        None => return Err(Error::Config("missing key \"model.type\"".into())),
    };
    let mut spec = ModelSpec::new(kind);
    for (key, v) in obj.iter().filter(|(k, _)| k.as_str() != "type") {
        let x = v.as_f64().ok_or_else(|| Error::Config(format!("key \"model.{key}\" must be a number")))?;
        spec = spec.with(key, x);
    }
    spec.validate()?;
    Ok(spec)
}

fn parse_explicit(obj: &Map<String, Value>) -> Result<LindbladModel> {
    reject_unknown(obj, &["dim", "hamiltonian", "jumps", "label"], "")?;
    let dim = obj["dim"]
        .as_u64()
        .filter(|&d| d >= 1)
        .ok_or_else(|| Error::Config("key \"dim\" must be a positive integer".into()))?;
    let dim = usize::try_from(dim).map_err(|_| Error::Model(format!("dimension {dim} is too large")))?;
    check_dim_cap(dim)?;
    let h = parse_matrix(obj.get("hamiltonian"), dim, "hamiltonian")?;
    let jumps = match obj.get("jumps") {
        None => Vec::new(),
        Some(Value::Array(items)) => {
            items.iter().enumerate().map(|(k, item)| parse_jump(item, dim, k)).collect::<Result<_>>()?
        }
        Some(_) => return Err(Error::Config("key \"jumps\" must be an array".into())),
    };
    let label = match obj.get("label") {
        None => "explicit".to_string(),
        Some(Value::String(s)) => s.clone(),
        Some(_) => return Err(Error::Config("key \"label\" must be a string".into())),
    };
    LindbladModel::new(h, jumps, label)
}

fn parse_jump(item: &Value, dim: usize, k: usize) -> Result<ComplexMatrix> {
    let at = format!("jumps[{k}]");
    let obj = item.as_object().ok_or_else(|| Error::Config(format!("key {at:?} must be an object")))?;
    reject_unknown(obj, &["matrix", "rate"], &format!("{at}."))?;
    let m = parse_matrix(obj.get("matrix"), dim, &format!("{at}.matrix"))?;
    match obj.get("rate") {
        None => Ok(m),
        Some(v) => {
            let rate = v
                .as_f64()
                .filter(|r| r.is_finite() && *r >= 0.0)
                .ok_or_else(|| Error::Config(format!("key \"{at}.rate\" must be a finite number >= 0")))?;
            Ok(m.scale_real(rate.sqrt()))
        }
    }
}

fn parse_matrix(value: Option<&Value>, dim: usize, at: &str) -> Result<ComplexMatrix> {
    let bad = |what: String| Error::Config(format!("key {at:?}: {what}"));
    let rows = match value {
        Some(Value::Array(rows)) => rows,
        Some(_) => return Err(bad("must be an array of rows".into())),
        None => return Err(Error::Config(format!("missing key {at:?}"))),
    };
    if rows.len() != dim {
        return Err(bad(format!("has {} rows, dim is {dim}", rows.len())));
    }
    let mut entries = Vec::with_capacity(dim * dim);
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| bad(format!("row {i} must be an array")))?;
        if row.len() != dim {
            return Err(bad(format!("row {i} has {} entries, dim is {dim}", row.len())));
        }
        for (j, z) in row.iter().enumerate() {
            let pair = z.as_array().filter(|p| p.len() == 2);
            let parts = pair.and_then(|p| Some((p[0].as_f64()?, p[1].as_f64()?)));
            let (re, im) = parts.ok_or_else(|| bad(format!("entry [{i}][{j}] must be a [re, im] pair of numbers")))?;
            entries.push(C64::new(re, im));
        }
    }
    ComplexMatrix::from_row_major(dim, dim, entries).map_err(|e| bad(e.to_string()))
}

struct MatrixJson<'a>(&'a ComplexMatrix);

impl Serialize for MatrixJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let m = self.0;
        let mut rows = s.serialize_seq(Some(m.rows()))?;
        for i in 0..m.rows() {
            let row: Vec<[f64; 2]> = (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect();
            rows.serialize_element(&row)?;
        }
        rows.end()
    }
}

struct JumpJson<'a>(&'a ComplexMatrix);

impl Serialize for JumpJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(1))?;
        map.serialize_entry("matrix", &MatrixJson(self.0))?;
        map.end()
    }
}

struct ModelJson<'a>(&'a LindbladModel);

impl Serialize for ModelJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let m = self.0;
        let jumps: Vec<JumpJson<'_>> = m.jumps().iter().map(JumpJson).collect();
        let mut map = s.serialize_map(Some(4))?;
        map.serialize_entry("dim", &m.dim())?;
        map.serialize_entry("label", m.label())?;
        map.serialize_entry("hamiltonian", &MatrixJson(m.hamiltonian()))?;
        map.serialize_entry("jumps", &jumps)?;
        map.end()
    }
}

/// Explicit-matrix form of `model`; reading it back gives bit-identical
/// matrices.
pub fn model_to_json(model: &LindbladModel) -> Result<String> {
    to_json(&ModelJson(model))
}
