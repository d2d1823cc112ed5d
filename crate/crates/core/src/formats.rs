//! Input files and the JSON report envelope.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::simplicial::{SimplicialComplex, MAX_VERTICES};

/// `{"m": 4, "facets": [[1,2],[2,3]]}` or `{"m": 4, "nonfaces": [[1,3]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facets: Option<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nonfaces: Option<Vec<Vec<u32>>>,
}

impl ComplexFile {
    pub fn parse(text: &str) -> Result<Self, Error> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_complex(&self) -> Result<SimplicialComplex, Error> {
        if self.m > MAX_VERTICES {
            return Err(Error::TooManyVertices(self.m));
        }
        match (&self.facets, &self.nonfaces) {
            (Some(f), None) => SimplicialComplex::from_facets(self.m, f),
            (None, Some(n)) => SimplicialComplex::from_nonfaces(self.m, n),
            _ => Err(Error::InvalidInput("exactly one of \"facets\" or \"nonfaces\" is required".into())),
        }
    }

    pub fn from_complex(k: &SimplicialComplex) -> Self {
        ComplexFile { m: k.m(), facets: Some(k.facets()), nonfaces: None }
    }
}

pub fn parse_complex(text: &str) -> Result<SimplicialComplex, Error> {
    ComplexFile::parse(text)?.to_complex()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub command: Vec<String>,
    pub field: String,
    pub results: Value,
    pub version: String,
    /// SHA-256 of the compact serialization of the other four fields.
    pub digest: String,
}

impl ReportFile {
    pub fn new(command: Vec<String>, field: String, results: Value) -> Self {
        let version = env!("CARGO_PKG_VERSION").to_string();
        let digest = Self::compute_digest(&command, &field, &results, &version);
        ReportFile { command, field, results, version, digest }
    }

    pub fn compute_digest(command: &[String], field: &str, results: &Value, version: &str) -> String {
        let body = serde_json::json!({
            "command": command,
            "field": field,
            "results": results,
            "version": version,
        });
        let text = serde_json::to_string(&body).expect("json values serialize");
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    pub fn verify_digest(&self) -> bool {
        self.digest == Self::compute_digest(&self.command, &self.field, &self.results, &self.version)
    }

    pub fn to_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
