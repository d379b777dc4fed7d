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

use std::collections::HashSet;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawUserRecord {
    pub user_id: String,
    /// Free-text profile location; `None` when blank.
    pub location: Option<String>,
}

impl RawUserRecord {
    pub fn new(user_id: impl Into<String>, location: Option<&str>) -> Self {
        Self {
            user_id: user_id.into(),
            location: location.map(str::to_owned),
        }
    }
}

fn reader_for<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(input)
}

fn expect_header<R: Read>(rdr: &mut csv::Reader<R>, origin: &Path, expected: &[&str]) -> Result<()> {
    let header = rdr.headers()?;
    let got: Vec<&str> = header.iter().map(str::trim).collect();
    if got != expected {
        return Err(Error::malformed(
            origin,
            1,
            format!("expected header `{}`, found `{}`", expected.join(","), got.join(",")),
        ));
    }
    Ok(())
}

fn line_of(record: &csv::StringRecord) -> u64 {
    record.position().map_or(0, |p| p.line())
}

/// Parses `user_id,location` rows. Blank locations become `None`.
pub fn read_users<R: Read>(input: R, origin: &Path) -> Result<Vec<RawUserRecord>> {
    let mut rdr = reader_for(input);
    expect_header(&mut rdr, origin, &["user_id", "location"])?;
    let mut seen = HashSet::new();
    let mut users = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| csv_error(origin, e))?;
        let line = line_of(&row);
        let id = row.get(0).unwrap_or("").trim();
        if id.is_empty() {
            return Err(Error::malformed(origin, line, "empty user_id"));
        }
        if !seen.insert(id.to_owned()) {
            return Err(Error::DuplicateUser(id.to_owned()));
        }
        let location = row.get(1).map(str::trim).filter(|l| !l.is_empty());
        users.push(RawUserRecord::new(id, location));
    }
    Ok(users)
}

/// Parses `src,dst` rows (src = followed account, dst = follower).
/// Repeated pairs collapse into one; first-occurrence order is kept.
pub fn read_edges<R: Read>(input: R, origin: &Path) -> Result<Vec<(String, String)>> {
    let mut rdr = reader_for(input);
    expect_header(&mut rdr, origin, &["src", "dst"])?;
    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| csv_error(origin, e))?;
        let line = line_of(&row);
        let src = row.get(0).unwrap_or("").trim();
        let dst = row.get(1).unwrap_or("").trim();
        if src.is_empty() || dst.is_empty() {
            return Err(Error::malformed(origin, line, "empty endpoint"));
        }
        if src == dst {
            return Err(Error::malformed(origin, line, format!("self-follow `{src}`")));
        }
        let pair = (src.to_owned(), dst.to_owned());
        if seen.insert(pair.clone()) {
            edges.push(pair);
        }
    }
    Ok(edges)
}

fn csv_error(origin: &Path, err: csv::Error) -> Error {
    let line = err.position().map_or(0, |p| p.line());
    Error::malformed(origin, line, err.to_string())
}

pub fn load_users(path: impl AsRef<Path>) -> Result<Vec<RawUserRecord>> {
    let path = path.as_ref();
    read_users(std::fs::File::open(path)?, path)
}

pub fn load_edges(path: impl AsRef<Path>) -> Result<Vec<(String, String)>> {
    let path = path.as_ref();
    read_edges(std::fs::File::open(path)?, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn src() -> &'static Path {
        Path::new("test.csv")
    }

    #[test]
    fn parses_users_with_quoted_locations() {
        let data = "user_id,location\nu1,Vienna\nu2,\nu3,\"Graz, Austria\"\n";
        let users = read_users(data.as_bytes(), src()).unwrap();
        assert_eq!(users[0], RawUserRecord::new("u1", Some("Vienna")));
        assert_eq!(users[1].location, None);
        assert_eq!(users[2].location.as_deref(), Some("Graz, Austria"));
    }

    #[test]
    fn duplicate_user_is_rejected() {
        let data = "user_id,location\nu1,a\nu1,b\n";
        assert!(matches!(read_users(data.as_bytes(), src()), Err(Error::DuplicateUser(_))));
    }

    #[test]
    fn malformed_row_reports_line() {
        let data = "user_id,location\nu1,a\nu2,b,extra\n";
        match read_users(data.as_bytes(), src()) {
            Err(Error::Malformed { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        let data = "src,dst\na,b\n,c\n";
        match read_edges(data.as_bytes(), src()) {
            Err(Error::Malformed { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn wrong_header_is_rejected() {
        assert!(read_edges("from,to\na,b\n".as_bytes(), src()).is_err());
    }

    #[test]
    fn empty_edge_file() {
        assert!(read_edges("src,dst\n".as_bytes(), src()).unwrap().is_empty());
    }

    #[test]
    fn repeated_edges_collapse() {
        let data = "src,dst\na,b\nb,a\na,b\n";
        let edges = read_edges(data.as_bytes(), src()).unwrap();
        assert_eq!(edges.len(), 2);
        assert_eq!(edges[0], ("a".into(), "b".into()));
    }
}
