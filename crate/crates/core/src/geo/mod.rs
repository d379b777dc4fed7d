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

//! Spherical geometry, equal-area hexagonal tiling and edge-length histograms.

mod hexgrid;
mod histogram;
mod point;

pub use hexgrid::{CellGrid, CellId, HexGrid};
pub use histogram::{fd_bin_width, fd_histogram, quantile, Histogram};
pub use point::{haversine_km, point_in_polygon, point_in_ring, BoundingBox, GeoPoint, EARTH_RADIUS_KM};
