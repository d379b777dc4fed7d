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

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown node {0}")]
    UnknownNode(usize),
    #[error("graph is empty")]
    EmptyGraph,
    #[error("{path}:{line}: {message}")]
    Malformed {
        path: PathBuf,
        line: u64,
        message: String,
    },
    #[error("duplicate user id `{0}`")]
    DuplicateUser(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("histogram needs at least two distinct samples")]
    DegenerateSamples,
    #[error("interquartile range is zero; Freedman-Diaconis width undefined")]
    ZeroIqr,
    #[error("column `{0}` is constant")]
    ConstantColumn(String),
    #[error("missing population for `{0}`")]
    MissingPopulation(String),
    #[error("origin `{0}` not present in network")]
    UnknownOrigin(String),
    #[error("neighbour count k = {k} requires more than {n} cells")]
    TooFewCells { k: usize, n: usize },
    #[error("invalid polygon for `{code}`: {reason}")]
    InvalidPolygon { code: String, reason: String },
    #[error("bad container: {0}")]
    Container(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn malformed(path: impl Into<PathBuf>, line: u64, message: impl Into<String>) -> Self {
        Error::Malformed {
            path: path.into(),
            line,
            message: message.into(),
        }
    }

    /// True for errors caused by bad input data rather than the environment.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Io(_))
    }
}
