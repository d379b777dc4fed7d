// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Run manifests: content hashes of every input and output plus the
//! effective parameters. No timestamps or host details, so a rerun with the
//! same inputs reproduces the manifest byte for byte.

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::error::CliResult;

#[derive(Debug, Serialize)]
struct FileEntry {
    path: String,
    sha256: String,
}

#[derive(Debug)]
pub struct Manifest {
    command: String,
    parameters: Map<String, Value>,
    inputs: Vec<PathBuf>,
    outputs: Vec<PathBuf>,
}

pub fn sha256_file(path: &Path) -> CliResult<String> {
    let bytes = std::fs::read(path)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

impl Manifest {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_owned(),
            parameters: Map::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn param(&mut self, name: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.parameters.insert(name.to_owned(), v);
    }

    pub fn input(&mut self, path: &Path) {
        if !self.inputs.iter().any(|p| p == path) {
            self.inputs.push(path.to_owned());
        }
    }

    pub fn output(&mut self, path: &Path) {
        if !self.outputs.iter().any(|p| p == path) {
            self.outputs.push(path.to_owned());
        }
    }

    /// Writes the manifest. Paths under `out_dir` are recorded relative to
    /// it so the manifest does not depend on where the run was placed.
    pub fn write(&self, path: &Path, out_dir: &Path) -> CliResult<()> {
        let entry = |p: &PathBuf| -> CliResult<FileEntry> {
            let shown = p.strip_prefix(out_dir).unwrap_or(p);
            Ok(FileEntry {
                path: shown.to_string_lossy().replace('\\', "/"),
                sha256: sha256_file(p)?,
            })
        };
        let inputs = self.inputs.iter().map(entry).collect::<CliResult<Vec<_>>>()?;
        let outputs = self.outputs.iter().map(entry).collect::<CliResult<Vec<_>>>()?;
        let doc = serde_json::json!({
            "tool": "geosocial",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "parameters": self.parameters,
            "inputs": inputs,
            "outputs": outputs,
        });
        let mut text = serde_json::to_string_pretty(&doc)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }
}
