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
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use crate::error::{Error, Result};
use crate::GeoPoint;

/// Regular lat/lon population raster.
///
/// File layout: a `#cell_size=<degrees>` line, a `lat<TAB>lon<TAB>count`
/// header, then one row per populated raster cell keyed by its south-west
/// corner. Cells not listed hold zero persons.
#[derive(Clone, Debug)]
pub struct PopulationRaster {
    cell_deg: f64,
    counts: HashMap<(i64, i64), f64>,
}

impl PopulationRaster {
    pub fn new(cell_deg: f64) -> Result<Self> {
        if !(cell_deg.is_finite() && cell_deg > 0.0) {
            return Err(Error::Invalid(format!("raster cell size {cell_deg} must be positive")));
        }
        Ok(Self {
            cell_deg,
            counts: HashMap::new(),
        })
    }

    pub fn cell_deg(&self) -> f64 {
        self.cell_deg
    }

    fn key(&self, lat: f64, lon: f64) -> (i64, i64) {
        (
            (lat / self.cell_deg).floor() as i64,
            (lon / self.cell_deg).floor() as i64,
        )
    }

    /// Adds `count` persons to the raster cell containing `(lat, lon)`.
    pub fn add(&mut self, lat: f64, lon: f64, count: f64) -> Result<()> {
        if !(count.is_finite() && count >= 0.0) {
            return Err(Error::Invalid(format!("population count {count} must be >= 0")));
        }
        *self.counts.entry(self.key(lat, lon)).or_insert(0.0) += count;
        Ok(())
    }

    pub fn population_at(&self, p: &GeoPoint) -> f64 {
        self.counts
            .get(&self.key(p.lat(), p.lon()))
            .copied()
            .unwrap_or(0.0)
    }

    /// Rows `(lat, lon, count)` of the south-west corners, sorted.
    pub fn rows(&self) -> Vec<(f64, f64, f64)> {
        let mut keys: Vec<_> = self.counts.iter().collect();
        keys.sort_by_key(|(k, _)| **k);
        keys.into_iter()
            .map(|(&(r, c), &n)| (r as f64 * self.cell_deg, c as f64 * self.cell_deg, n))
            .collect()
    }

    pub fn read<R: Read>(input: R, origin: &Path) -> Result<Self> {
        let mut lines = BufReader::new(input).lines();
        let first = lines.next().transpose()?.unwrap_or_default();
        let cell_deg = first
            .trim()
            .strip_prefix("#cell_size=")
            .and_then(|v| v.trim().parse::<f64>().ok())
            .ok_or_else(|| Error::malformed(origin, 1, "expected `#cell_size=<degrees>`"))?;
        let mut raster = Self::new(cell_deg).map_err(|e| Error::malformed(origin, 1, e.to_string()))?;
        let header = lines.next().transpose()?.unwrap_or_default();
        let header: Vec<&str> = header.split('\t').map(str::trim).collect();
        if header != ["lat", "lon", "count"] {
            return Err(Error::malformed(origin, 2, "expected header lat/lon/count"));
        }
        for (idx, line) in lines.enumerate() {
            let line_no = idx as u64 + 3;
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(Error::malformed(origin, line_no, "expected 3 tab-separated fields"));
            }
            let num = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::malformed(origin, line_no, e.to_string()))
            };
            let (lat, lon, count) = (num(fields[0])?, num(fields[1])?, num(fields[2])?);
            let aligned = |v: f64| ((v / cell_deg) - (v / cell_deg).round()).abs() < 1e-6;
            if !aligned(lat) || !aligned(lon) {
                return Err(Error::malformed(origin, line_no, "corner not aligned to raster"));
            }
            // nudge into the cell so floor() cannot land on the neighbour
            let half = cell_deg / 2.0;
            raster
                .add(lat + half, lon + half, count)
                .map_err(|e| Error::malformed(origin, line_no, e.to_string()))?;
        }
        Ok(raster)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::read(std::fs::File::open(path)?, path)
    }

    pub fn write<W: std::io::Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "#cell_size={}", self.cell_deg)?;
        writeln!(out, "lat\tlon\tcount")?;
        for (lat, lon, n) in self.rows() {
            writeln!(out, "{lat}\t{lon}\t{n}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_and_missing_cells() {
        let data = "#cell_size=0.5\nlat\tlon\tcount\n48\t16\t1000\n-1.5\t-0.5\t3\n";
        let r = PopulationRaster::read(data.as_bytes(), Path::new("p")).unwrap();
        assert_eq!(r.population_at(&GeoPoint::new(48.2, 16.3).unwrap()), 1000.0);
        assert_eq!(r.population_at(&GeoPoint::new(-1.2, -0.1).unwrap()), 3.0);
        assert_eq!(r.population_at(&GeoPoint::new(21.9, 33.7).unwrap()), 0.0);
    }

    #[test]
    fn write_read_round_trip() {
        let mut r = PopulationRaster::new(0.25).unwrap();
        r.add(47.3, 9.1, 12.0).unwrap();
        r.add(-33.9, 151.2, 5.0).unwrap();
        let mut buf = Vec::new();
        r.write(&mut buf).unwrap();
        let back = PopulationRaster::read(buf.as_slice(), Path::new("p")).unwrap();
        assert_eq!(back.rows(), r.rows());
    }

    #[test]
    fn rejects_bad_header_and_negative_counts() {
        assert!(PopulationRaster::read("lat\tlon\tcount\n".as_bytes(), Path::new("p")).is_err());
        let neg = "#cell_size=1\nlat\tlon\tcount\n1\t1\t-4\n";
        assert!(PopulationRaster::read(neg.as_bytes(), Path::new("p")).is_err());
        let off = "#cell_size=1\nlat\tlon\tcount\n1.3\t1\t4\n";
        assert!(PopulationRaster::read(off.as_bytes(), Path::new("p")).is_err());
    }
}
