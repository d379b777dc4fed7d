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

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geo::point_in_ring;
use crate::GeoPoint;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionShape {
    /// Spherical cap around a centre.
    Disc { lat: f64, lon: f64, radius_km: f64 },
    /// Closed `[lon, lat]` ring.
    Polygon { ring: Vec<[f64; 2]> },
}

/// A sampling area with its planted attributes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub id: String,
    pub country: String,
    /// Name used for country-precision location strings; defaults to `country`.
    #[serde(default)]
    pub country_name: Option<String>,
    pub language: String,
    /// Relative population weight.
    pub weight: f64,
    /// Number of distinct place names sampled inside the region.
    #[serde(default = "default_places")]
    pub places: usize,
    pub shape: RegionShape,
}

fn default_places() -> usize {
    50
}

impl Region {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Invalid(format!("region `{}`: {msg}", self.id)));
        if self.id.is_empty() {
            return Err(Error::Invalid("region id must be nonempty".into()));
        }
        if !(self.weight.is_finite() && self.weight > 0.0) {
            return bad(format!("weight {} must be > 0", self.weight));
        }
        if self.places == 0 {
            return bad("needs at least one place".into());
        }
        match &self.shape {
            RegionShape::Disc { lat, lon, radius_km } => {
                GeoPoint::new(*lat, *lon)?;
                if !(radius_km.is_finite() && *radius_km > 0.0) {
                    return bad("disc radius must be > 0".into());
                }
            }
            RegionShape::Polygon { ring } => {
                if ring.len() < 4 || ring.first() != ring.last() {
                    return bad("polygon ring must be closed with >= 4 points".into());
                }
                if ring.iter().flatten().any(|v| !v.is_finite()) {
                    return bad("polygon coordinates must be finite".into());
                }
            }
        }
        Ok(())
    }

    pub fn country_label(&self) -> &str {
        self.country_name.as_deref().unwrap_or(&self.country)
    }

    /// Representative point: the disc centre or the ring's vertex mean.
    pub fn anchor(&self) -> GeoPoint {
        match &self.shape {
            RegionShape::Disc { lat, lon, .. } => GeoPoint::new(*lat, *lon).expect("validated"),
            RegionShape::Polygon { ring } => {
                let open = &ring[..ring.len() - 1];
                let n = open.len() as f64;
                let lon = open.iter().map(|p| p[0]).sum::<f64>() / n;
                let lat = open.iter().map(|p| p[1]).sum::<f64>() / n;
                GeoPoint::new(lat, lon).expect("validated")
            }
        }
    }

    pub fn contains(&self, p: &GeoPoint) -> bool {
        match &self.shape {
            RegionShape::Disc { lat, lon, radius_km } => {
                let centre = GeoPoint::new(*lat, *lon).expect("validated");
                crate::geo::haversine_km(&centre, p) <= *radius_km
            }
            RegionShape::Polygon { ring } => {
                let ring: Vec<(f64, f64)> = ring.iter().map(|v| (v[0], v[1])).collect();
                point_in_ring(p.lon(), p.lat(), &ring)
            }
        }
    }

    /// Uniform (area-weighted) point inside the region.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> GeoPoint {
        match &self.shape {
            RegionShape::Disc { radius_km, .. } => loop {
                // uniform on the spherical cap: cos(d/R) uniform in [cos(r/R), 1]
                let cap = (radius_km / crate::geo::EARTH_RADIUS_KM).cos();
                let angle = (1.0 - rng.random::<f64>() * (1.0 - cap)).acos();
                let p = self
                    .anchor()
                    .destination(rng.random::<f64>() * 360.0, angle * crate::geo::EARTH_RADIUS_KM);
                // guard against rounding at the rim
                if self.contains(&p) {
                    return p;
                }
            },
            RegionShape::Polygon { ring } => {
                let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
                for v in ring {
                    for a in 0..2 {
                        lo[a] = lo[a].min(v[a]);
                        hi[a] = hi[a].max(v[a]);
                    }
                }
                let (s_lo, s_hi) = (lo[1].to_radians().sin(), hi[1].to_radians().sin());
                loop {
                    let lon = lo[0] + rng.random::<f64>() * (hi[0] - lo[0]);
                    // sin(lat) uniform keeps the draw area-uniform
                    let lat = (s_lo + rng.random::<f64>() * (s_hi - s_lo)).asin().to_degrees();
                    if let Ok(p) = GeoPoint::new(lat, lon) {
                        if self.contains(&p) {
                            return p;
                        }
                    }
                }
            }
        }
    }
}
