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

use std::collections::HashMap;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::normalize_location;
use crate::error::{Error, Result};
use crate::GeoPoint;

/// Feature granularity reported for a gazetteer entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    Point,
    City,
    Region,
    Country,
    Continent,
}

impl Precision {
    /// Country and continent names are too coarse for regional analysis.
    pub fn is_precise(self) -> bool {
        !matches!(self, Precision::Country | Precision::Continent)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Precision::Point => "point",
            Precision::City => "city",
            Precision::Region => "region",
            Precision::Country => "country",
            Precision::Continent => "continent",
        }
    }
}

impl std::str::FromStr for Precision {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "point" => Precision::Point,
            "city" => Precision::City,
            "region" => Precision::Region,
            "country" => Precision::Country,
            "continent" => Precision::Continent,
            other => return Err(Error::Invalid(format!("unknown precision `{other}`"))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeocodeResult {
    pub point: GeoPoint,
    pub precision: Precision,
}

/// Offline location table: `location<TAB>lat<TAB>lon<TAB>precision`.
#[derive(Clone, Debug, Default)]
pub struct Gazetteer {
    entries: HashMap<String, GeocodeResult>,
}

impl Gazetteer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, location: &str, result: GeocodeResult) -> Result<()> {
        let key = normalize_location(location);
        if key.is_empty() {
            return Err(Error::Invalid("empty gazetteer key".into()));
        }
        if self.entries.insert(key.clone(), result).is_some() {
            return Err(Error::Invalid(format!("duplicate gazetteer entry `{key}`")));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Case-insensitive, whitespace-trimmed exact lookup.
    pub fn geocode(&self, location: &str) -> Option<GeocodeResult> {
        self.entries.get(&normalize_location(location)).copied()
    }

    pub fn read<R: Read>(input: R, origin: &Path) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .delimiter(b'\t')
            .quoting(false)
            .has_headers(true)
            .from_reader(input);
        let header: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_owned()).collect();
        if header != ["location", "lat", "lon", "precision"] {
            return Err(Error::malformed(origin, 1, "expected header location/lat/lon/precision"));
        }
        let mut gazetteer = Self::new();
        for row in rdr.records() {
            let row = row.map_err(|e| {
                Error::malformed(origin, e.position().map_or(0, |p| p.line()), e.to_string())
            })?;
            let line = row.position().map_or(0, |p| p.line());
            let bad = |msg: String| Error::malformed(origin, line, msg);
            let num = |i: usize| -> Result<f64> {
                row[i]
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| bad(format!("column {}: {e}", i + 1)))
            };
            let point = GeoPoint::new(num(1)?, num(2)?).map_err(|e| bad(e.to_string()))?;
            let precision = row[3].parse().map_err(|e: Error| bad(e.to_string()))?;
            gazetteer
                .insert(&row[0], GeocodeResult { point, precision })
                .map_err(|e| bad(e.to_string()))?;
        }
        Ok(gazetteer)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::read(std::fs::File::open(path)?, path)
    }
}
