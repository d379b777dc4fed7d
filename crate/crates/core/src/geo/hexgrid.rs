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

//! Flat-topped hexagons on the Lambert cylindrical equal-area projection.
//!
//! The projection `x = R * lon`, `y = R * sin(lat)` preserves area, so every
//! full hexagon in the projected plane covers the same surface area. Cells
//! are addressed by axial coordinates (`col` = q, `row` = r). Only cells whose
//! centre lies inside the projected domain exist; points near the
//! antimeridian or the poles go to the nearest such centre, which keeps
//! assignment total and the centroid round trip exact.

use serde::{Deserialize, Serialize};

use super::point::{GeoPoint, EARTH_RADIUS_KM};
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellId {
    pub row: i64,
    pub col: i64,
}

impl CellId {
    pub fn new(row: i64, col: i64) -> Self {
        Self { row, col }
    }
}

impl std::fmt::Display for CellId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.row, self.col)
    }
}

impl std::str::FromStr for CellId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (row, col) = s
            .split_once(':')
            .ok_or_else(|| Error::Invalid(format!("cell id `{s}` is not row:col")))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<i64>()
                .map_err(|e| Error::Invalid(format!("cell id `{s}`: {e}")))
        };
        Ok(Self::new(parse(row)?, parse(col)?))
    }
}

/// A tiling of the globe into cells. [`HexGrid`] is the shipped implementation.
pub trait CellGrid<T> {
    fn cell_for_point(&self, p: &GeoPoint<T>) -> CellId;
    fn cell_centroid(&self, cell: CellId) -> GeoPoint<T>;
    /// Closed ring (first vertex repeated last).
    fn cell_polygon(&self, cell: CellId) -> Vec<GeoPoint<T>>;
    /// Nominal cell area in km².
    fn cell_area(&self) -> T;
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HexGrid<T> {
    cell_area_km2: T,
    edge_km: T,
    radius_km: T,
}

impl<T: Real> HexGrid<T> {
    pub fn new(cell_area_km2: T) -> Result<Self> {
        if !cell_area_km2.is_finite() || cell_area_km2 <= T::zero() {
            return Err(Error::Invalid(format!(
                "cell area must be positive, got {cell_area_km2:?}"
            )));
        }
        // hexagon area = (3 * sqrt(3) / 2) * edge²
        let edge_km = (T::lit(2.0) * cell_area_km2 / (T::lit(3.0) * T::lit(3.0).sqrt())).sqrt();
        Ok(Self {
            cell_area_km2,
            edge_km,
            radius_km: T::lit(EARTH_RADIUS_KM),
        })
    }

    pub fn edge_km(&self) -> T {
        self.edge_km
    }

    pub fn project(&self, p: &GeoPoint<T>) -> (T, T) {
        (
            self.radius_km * p.lon().to_radians(),
            self.radius_km * p.lat().to_radians().sin(),
        )
    }

    pub fn unproject(&self, x: T, y: T) -> GeoPoint<T> {
        let s = (y / self.radius_km).max(-T::one()).min(T::one());
        GeoPoint::clamped(s.asin().to_degrees(), (x / self.radius_km).to_degrees())
    }

    pub fn center_xy(&self, cell: CellId) -> (T, T) {
        let q = T::lit(cell.col as f64);
        let r = T::lit(cell.row as f64);
        let x = self.edge_km * T::lit(1.5) * q;
        let y = self.edge_km * T::lit(3.0).sqrt() * (r + q / T::lit(2.0));
        (x, y)
    }

    /// Projected hexagon vertices, counter-clockwise from angle 0.
    pub fn vertices_xy(&self, cell: CellId) -> [(T, T); 6] {
        let (cx, cy) = self.center_xy(cell);
        std::array::from_fn(|i| {
            let angle = T::lit(60.0 * i as f64).to_radians();
            (cx + self.edge_km * angle.cos(), cy + self.edge_km * angle.sin())
        })
    }

    fn in_domain(&self, x: T, y: T) -> bool {
        let half_width = T::PI() * self.radius_km;
        x >= -half_width && x < half_width && y >= -self.radius_km && y <= self.radius_km
    }

    /// The cell with the nearest in-domain centre. The search ring must be
    /// wide enough to contain that centre; callers pick 1 or 3.
    fn nearest_in(&self, x: T, y: T, around: CellId, radius: i64) -> Option<CellId> {
        let mut best: Option<(T, CellId)> = None;
        for dq in -radius..=radius {
            let lo = (-radius).max(-dq - radius);
            let hi = radius.min(-dq + radius);
            for dr in lo..=hi {
                let cell = CellId::new(around.row + dr, around.col + dq);
                let (cx, cy) = self.center_xy(cell);
                if !self.in_domain(cx, cy) {
                    continue;
                }
                let d = (x - cx) * (x - cx) + (y - cy) * (y - cy);
                let better = match best {
                    None => true,
                    Some((bd, bc)) => d < bd || (d == bd && cell < bc),
                };
                if better {
                    best = Some((d, cell));
                }
            }
        }
        best.map(|(_, c)| c)
    }

    fn round_axial(&self, x: T, y: T) -> CellId {
        let q = (T::lit(2.0) / T::lit(3.0) * x) / self.edge_km;
        let r = (-x / T::lit(3.0) + T::lit(3.0).sqrt() / T::lit(3.0) * y) / self.edge_km;
        let s = -q - r;
        let (mut rq, mut rr, rs) = (q.round(), r.round(), s.round());
        let (dq, dr, ds) = ((rq - q).abs(), (rr - r).abs(), (rs - s).abs());
        if dq > dr && dq > ds {
            rq = -rr - rs;
        } else if dr > ds {
            rr = -rq - rs;
        }
        CellId::new(
            rr.to_i64().expect("finite row"),
            rq.to_i64().expect("finite col"),
        )
    }
}

impl<T: Real> CellGrid<T> for HexGrid<T> {
    fn cell_for_point(&self, p: &GeoPoint<T>) -> CellId {
        let (x, y) = self.project(p);
        let rounded = self.round_axial(x, y);
        let (cx, cy) = self.center_xy(rounded);
        if self.in_domain(cx, cy) {
            // rounded is a nearest centre, so ties can only sit in ring 1
            if let Some(cell) = self.nearest_in(x, y, rounded, 1) {
                return cell;
            }
        }
        self.nearest_in(x, y, rounded, 3)
            .expect("some centre always lies within three rings")
    }

    fn cell_centroid(&self, cell: CellId) -> GeoPoint<T> {
        let (x, y) = self.center_xy(cell);
        self.unproject(x, y)
    }

    fn cell_polygon(&self, cell: CellId) -> Vec<GeoPoint<T>> {
        let mut ring: Vec<_> = self
            .vertices_xy(cell)
            .iter()
            .map(|&(x, y)| self.unproject(x, y))
            .collect();
        ring.push(ring[0]);
        ring
    }

    fn cell_area(&self) -> T {
        self.cell_area_km2
    }
}
