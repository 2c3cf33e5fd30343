use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use steering_core::scans::write_csv;
use steering_core::Result;

#[derive(Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub seed: Option<u64>,
    pub parameters: Value,
}

impl Metadata {
    pub fn new(command: &'static str, seed: Option<u64>, parameters: Value) -> Self {
        Self { tool: "steer", version: env!("CARGO_PKG_VERSION"), command, seed, parameters }
    }

    /// Flat `key=value` pairs for CSV comment lines.
    fn pairs(&self) -> Vec<(String, String)> {
        let mut out = vec![
            ("tool".to_string(), self.tool.to_string()),
            ("version".to_string(), self.version.to_string()),
            ("command".to_string(), self.command.to_string()),
        ];
        if let Some(seed) = self.seed {
            out.push(("seed".to_string(), seed.to_string()));
        }
        out.push(("parameters".to_string(), self.parameters.to_string()));
        out
    }
}

/// A rendered command result.
pub struct Document {
    body: Vec<u8>,
}

impl Document {
    pub fn json(meta: Metadata, result: Value) -> Self {
        let mut body = serde_json::to_vec_pretty(&json!({ "metadata": meta, "result": result })).expect("JSON values serialize");
        body.push(b'\n');
        Self { body }
    }

    pub fn csv<T: Serialize>(meta: Metadata, rows: &[T]) -> Result<Self> {
        let mut body = Vec::new();
        write_csv(&mut body, rows, &meta.pairs())?;
        Ok(Self { body })
    }

    pub fn svg(meta: Metadata, svg: String) -> Self {
        let comment = meta.pairs().iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ").replace("--", "- -");
        Self { body: format!("<!-- {comment} -->\n{svg}").into_bytes() }
    }

    pub fn write(&self, out: Option<&Path>) -> Result<()> {
        match out {
            Some(path) => std::fs::write(path, &self.body)?,
            None => std::io::stdout().lock().write_all(&self.body)?,
        }
        Ok(())
    }
}
