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

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Mean Earth radius of the spherical model.
pub const EARTH_RADIUS_KM: f64 = 6371.0;

/// Latitude/longitude in degrees. Longitude is normalised into `[-180, 180)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint<T> {
    lat: T,
    lon: T,
}

impl<T: Real> GeoPoint<T> {
    pub fn new(lat: T, lon: T) -> Result<Self> {
        if !lat.is_finite() || !lon.is_finite() {
            return Err(Error::Invalid("coordinates must be finite".into()));
        }
        if lat < T::lit(-90.0) || lat > T::lit(90.0) {
            return Err(Error::Invalid(format!("latitude {lat:?} out of range")));
        }
        Ok(Self {
            lat,
            lon: normalize_lon(lon),
        })
    }

    /// Vertex constructor that clamps instead of failing and keeps `lon = 180`
    /// so polygon rings stay on one side of the antimeridian.
    pub(crate) fn clamped(lat: T, lon: T) -> Self {
        let lat = lat.max(T::lit(-90.0)).min(T::lit(90.0));
        let lon = lon.max(T::lit(-180.0)).min(T::lit(180.0));
        Self { lat, lon }
    }

    pub fn lat(&self) -> T {
        self.lat
    }

    pub fn lon(&self) -> T {
        self.lon
    }

    /// Point at `distance_km` along the initial `bearing_deg` (clockwise from north).
    pub fn destination(&self, bearing_deg: T, distance_km: T) -> Self {
        let radius = T::lit(EARTH_RADIUS_KM);
        let delta = distance_km / radius;
        let theta = bearing_deg.to_radians();
        let (phi1, lambda1) = (self.lat.to_radians(), self.lon.to_radians());
        let sin_phi2 = phi1.sin() * delta.cos() + phi1.cos() * delta.sin() * theta.cos();
        let phi2 = sin_phi2.max(-T::one()).min(T::one()).asin();
        let lambda2 = lambda1
            + (theta.sin() * delta.sin() * phi1.cos()).atan2(delta.cos() - phi1.sin() * sin_phi2);
        Self {
            lat: phi2.to_degrees(),
            lon: normalize_lon(lambda2.to_degrees()),
        }
    }
}

fn normalize_lon<T: Real>(lon: T) -> T {
    let full = T::lit(360.0);
    let half = T::lit(180.0);
    if lon >= -half && lon < half {
        return lon;
    }
    let wrapped = (lon + half) % full;
    let wrapped = if wrapped < T::zero() { wrapped + full } else { wrapped };
    let out = wrapped - half;
    // `%` can round up to exactly +180
    if out >= half {
        -half
    } else {
        out
    }
}

/// Great-circle distance on the sphere of radius [`EARTH_RADIUS_KM`].
pub fn haversine_km<T: Real>(p: &GeoPoint<T>, q: &GeoPoint<T>) -> T {
    let two = T::lit(2.0);
    let (phi1, phi2) = (p.lat.to_radians(), q.lat.to_radians());
    let dphi = phi2 - phi1;
    let dlambda = (q.lon - p.lon).to_radians();
    let a = (dphi / two).sin().powi(2) + phi1.cos() * phi2.cos() * (dlambda / two).sin().powi(2);
    let a = a.max(T::zero()).min(T::one());
    two * T::lit(EARTH_RADIUS_KM) * a.sqrt().asin()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox<T> {
    pub min_lat: T,
    pub max_lat: T,
    pub min_lon: T,
    pub max_lon: T,
}

impl<T: Real> BoundingBox<T> {
    pub fn new(min_lat: T, max_lat: T, min_lon: T, max_lon: T) -> Result<Self> {
        let all = [min_lat, max_lat, min_lon, max_lon];
        if all.iter().any(|v| !v.is_finite()) || min_lat > max_lat || min_lon > max_lon {
            return Err(Error::Invalid("bounding box needs min <= max per axis".into()));
        }
        Ok(Self {
            min_lat,
            max_lat,
            min_lon,
            max_lon,
        })
    }

    /// Default Europe area of interest: lat [34, 72], lon [-25, 45].
    pub fn europe() -> Self {
        Self {
            min_lat: T::lit(34.0),
            max_lat: T::lit(72.0),
            min_lon: T::lit(-25.0),
            max_lon: T::lit(45.0),
        }
    }

    /// Inclusive containment.
    pub fn contains(&self, p: &GeoPoint<T>) -> bool {
        p.lat >= self.min_lat && p.lat <= self.max_lat && p.lon >= self.min_lon && p.lon <= self.max_lon
    }
}

impl<T: Real> std::str::FromStr for BoundingBox<T> {
    type Err = Error;

    /// Parses `min_lat,max_lat,min_lon,max_lon`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Invalid(format!("bbox `{s}`: {e}")))?;
        let [a, b, c, d] = parts[..] else {
            return Err(Error::Invalid(format!("bbox `{s}` needs four numbers")));
        };
        Self::new(T::lit(a), T::lit(b), T::lit(c), T::lit(d))
    }
}

/// Even-odd containment of `(x, y)` in a closed ring; points on the boundary
/// count as inside.
pub fn point_in_ring<T: Real>(x: T, y: T, ring: &[(T, T)]) -> bool {
    let (boundary, parity) = ring_test(x, y, ring);
    boundary || parity
}

/// Even-odd containment over all rings of a polygon (outer ring plus holes);
/// any ring boundary counts as inside.
pub fn point_in_polygon<T: Real>(x: T, y: T, rings: &[Vec<(T, T)>]) -> bool {
    let mut inside = false;
    for ring in rings {
        let (boundary, parity) = ring_test(x, y, ring);
        if boundary {
            return true;
        }
        inside ^= parity;
    }
    inside
}

fn ring_test<T: Real>(x: T, y: T, ring: &[(T, T)]) -> (bool, bool) {
    let mut inside = false;
    for pair in ring.windows(2) {
        let ((x1, y1), (x2, y2)) = (pair[0], pair[1]);
        if on_segment(x, y, x1, y1, x2, y2) {
            return (true, false);
        }
        if (y1 > y) != (y2 > y) {
            let cross_x = x1 + (y - y1) * (x2 - x1) / (y2 - y1);
            if x < cross_x {
                inside = !inside;
            }
        }
    }
    (false, inside)
}

fn on_segment<T: Real>(x: T, y: T, x1: T, y1: T, x2: T, y2: T) -> bool {
    let cross = (x2 - x1) * (y - y1) - (y2 - y1) * (x - x1);
    cross == T::zero() && x >= x1.min(x2) && x <= x1.max(x2) && y >= y1.min(y2) && y <= y1.max(y2)
}
