//! JSON instance files.
//!
//! ```json
//! { "name": "depot", "m": 2, "n": 2,
//!   "D": [[6, 10], [3, 5]], "G": [7, 7],
//!   "known_optimal": 16, "lambda": 34 }
//! ```
//! `known_optimal` and `lambda` are optional.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use uflp_vqa_core::UflpInstance;

#[derive(Debug, thiserror::Error)]
pub enum InstanceFileError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{origin}: malformed instance: {source}")]
    Parse {
        origin: String,
        source: serde_json::Error,
    },
    #[error("{origin}: field `{field}`: {message}")]
    Invalid {
        origin: String,
        field: &'static str,
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub name: String,
    pub m: usize,
    pub n: usize,
    #[serde(rename = "D")]
    pub service: Vec<Vec<f64>>,
    #[serde(rename = "G")]
    pub opening: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub known_optimal: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
}

impl From<&UflpInstance> for InstanceFile {
    fn from(inst: &UflpInstance) -> Self {
        Self {
            name: inst.name.clone(),
            m: inst.m(),
            n: inst.n(),
            service: inst.service_rows(),
            opening: inst.opening_costs().to_vec(),
            known_optimal: inst.known_optimal,
            lambda: inst.penalty,
        }
    }
}

impl InstanceFile {
    /// Check shapes and values, naming the offending field.
    pub fn into_instance(self, origin: &str) -> Result<UflpInstance, InstanceFileError> {
        let invalid = |field, message: String| InstanceFileError::Invalid {
            origin: origin.to_string(),
            field,
            message,
        };
        if self.service.len() != self.m {
            return Err(invalid(
                "D",
                format!("has {} rows but m = {}", self.service.len(), self.m),
            ));
        }
        if self.opening.len() != self.n {
            return Err(invalid(
                "G",
                format!("has {} entries but n = {}", self.opening.len(), self.n),
            ));
        }
        for (i, row) in self.service.iter().enumerate() {
            if row.len() != self.n {
                return Err(invalid(
                    "D",
                    format!("row {i} has {} entries but n = {}", row.len(), self.n),
                ));
            }
            if let Some((j, d)) = row
                .iter()
                .enumerate()
                .find(|(_, d)| !(d.is_finite() && **d >= 0.0))
            {
                return Err(invalid(
                    "D",
                    format!("D[{i}][{j}] = {d} is not a finite nonnegative cost"),
                ));
            }
        }
        if let Some((j, g)) = self
            .opening
            .iter()
            .enumerate()
            .find(|(_, g)| !(g.is_finite() && **g >= 0.0))
        {
            return Err(invalid(
                "G",
                format!("G[{j}] = {g} is not a finite nonnegative cost"),
            ));
        }
        if let Some(l) = self.lambda {
            if !(l.is_finite() && l >= 0.0) {
                return Err(invalid(
                    "lambda",
                    format!("{l} is not a finite nonnegative penalty"),
                ));
            }
        }
        if let Some(v) = self.known_optimal {
            if !v.is_finite() {
                return Err(invalid("known_optimal", format!("{v} is not finite")));
            }
        }
        let mut inst = UflpInstance::new(self.name, &self.service, &self.opening)
            .map_err(|e| invalid("D", e.to_string()))?;
        inst.known_optimal = self.known_optimal;
        inst.penalty = self.lambda;
        Ok(inst)
    }
}

pub fn parse_instance(text: &str, origin: &str) -> Result<UflpInstance, InstanceFileError> {
    let file: InstanceFile =
        serde_json::from_str(text).map_err(|source| InstanceFileError::Parse {
            origin: origin.to_string(),
            source,
        })?;
    file.into_instance(origin)
}

pub fn load_instance(path: &Path) -> Result<UflpInstance, InstanceFileError> {
    let text = fs::read_to_string(path).map_err(|source| InstanceFileError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_instance(&text, &path.display().to_string())
}

pub fn instance_to_json(inst: &UflpInstance) -> String {
    serde_json::to_string_pretty(&InstanceFile::from(inst)).expect("instance serialises")
}

pub fn save_instance(inst: &UflpInstance, path: &Path) -> Result<(), InstanceFileError> {
    fs::write(path, instance_to_json(inst) + "\n").map_err(|source| InstanceFileError::Write {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn optional_fields_default_to_none() {
        let inst = parse_instance(
            r#"{"name":"a","m":1,"n":2,"D":[[1,2]],"G":[3,4]}"#,
            "inline",
        )
        .unwrap();
        assert_eq!(inst.known_optimal, None);
        assert_eq!(inst.penalty, None);
        assert_eq!(inst.service_cost(0, 1), 2.0);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let err = parse_instance(
            r#"{"name":"a","m":1,"n":1,"D":[[1]],"G":[3],"extra":1}"#,
            "inline",
        )
        .unwrap_err();
        assert!(err.to_string().contains("extra"));
    }

    #[test]
    fn negative_lambda_is_rejected() {
        let err = parse_instance(
            r#"{"name":"a","m":1,"n":1,"D":[[1]],"G":[3],"lambda":-1}"#,
            "inline",
        )
        .unwrap_err();
        assert!(matches!(
            err,
            InstanceFileError::Invalid {
                field: "lambda",
                ..
            }
        ));
    }
}
