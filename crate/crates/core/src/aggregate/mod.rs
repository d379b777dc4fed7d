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

//! Collapsing the user network onto spatial units and country flow tables.

mod cellnet;
mod container;
mod countries;
mod flows;

pub use cellnet::{aggregate_to_grid, subnetwork_by_bbox, CellNetwork};
pub use container::{read_container, write_grid_container, write_label_container, Container, MAGIC};
pub use countries::{aggregate_to_countries, Country, CountryAggregation, CountryPolygons};
pub use flows::{chord_matrix, outflow_table, top_k_flows, within_unit_share, ChordMatrix, Flow};
