//! Run manifests: enough to re-run a command and check the output bytes.

use hecke_core::Budget;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::Command;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: String,
    /// Arguments after the program name, without `--manifest`.
    pub command_line: Vec<String>,
    pub p: Option<i64>,
    pub parameters: Value,
    pub budget: Budget,
    pub output_sha256: String,
}

pub fn digest(output: &str) -> String {
    hex::encode(Sha256::digest(output.as_bytes()))
}

pub fn budget_spec(b: &Budget) -> String {
    format!(
        "cf_steps={},coord_bound={},height_bits={}",
        b.cf_steps, b.coord_bound, b.height_bits
    )
}

fn strip_manifest_flag(args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in args {
        if skip {
            skip = false;
        } else if a == "--manifest" {
            skip = true;
        } else if !a.starts_with("--manifest=") {
            out.push(a.clone());
        }
    }
    out
}

impl Manifest {
    pub fn new(args: &[String], command: &Command, budget: &Budget, output: &str) -> Self {
        let parameters = serde_json::to_value(command).expect("serializable");
        let p = find_p(&parameters);
        Manifest {
            version: env!("CARGO_PKG_VERSION").into(),
            command_line: strip_manifest_flag(args),
            p,
            parameters,
            budget: *budget,
            output_sha256: digest(output),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("bad manifest: {e}"))
    }
}

fn find_p(v: &Value) -> Option<i64> {
    match v {
        Value::Object(m) => m
            .get("p")
            .and_then(Value::as_i64)
            .or_else(|| m.values().find_map(find_p)),
        _ => None,
    }
}
