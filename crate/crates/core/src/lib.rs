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

//! Spatial-social analysis of georeferenced, directed follower networks.
//!
//! The pipeline ingests a user network (edges point from a followed account
//! to its follower, i.e. the direction information travels), geocodes users
//! against an offline gazetteer, aggregates them onto equal-area hexagonal
//! cells or country polygons and then runs the analysis suite: degree,
//! closeness and betweenness centralities, Spearman rank correlations,
//! bivariate binning, Louvain communities and Getis-Ord Gi* hot spots.
//!
//! Numerical kernels are generic over the scalar type (see [`scalar`]); the
//! aliases below fix the common instantiations.

pub mod aggregate;
pub mod analysis;
pub mod centrality;
pub mod error;
pub mod geo;
pub mod graph;
pub mod ingest;
pub mod scalar;
pub mod synth;

pub use error::{Error, Result};
pub use graph::{DirectedGraph, Direction, GraphBuilder, NodeId};

/// Exact rational scalar used by the oracle-checked centrality paths.
pub type Exact = num_rational::Ratio<i128>;

pub type GeoPoint = geo::GeoPoint<f64>;
pub type BoundingBox = geo::BoundingBox<f64>;
pub type HexGrid = geo::HexGrid<f64>;
pub type Histogram = geo::Histogram<f64>;
pub type CentralityTable = centrality::CentralityTable<f64>;
pub type ExactCentralityTable = centrality::CentralityTable<Exact>;
pub type HotSpotResult = analysis::HotSpotResult<f64>;
pub type SpearmanMatrix = analysis::SpearmanMatrix<f64>;

pub type GeoPointF32 = geo::GeoPoint<f32>;
pub type HexGridF32 = geo::HexGrid<f32>;
