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

//! Loading raw crawl output, offline geocoding and location filtering.

mod filter;
mod gazetteer;
mod network;
mod population;
mod records;

pub use filter::{filter_and_build, CountRow, EdgeStats, IngestStats, LocationStats, UserStats};
pub use gazetteer::{GeocodeResult, Gazetteer, Precision};
pub use network::{UserNetwork, forward_edges};
pub use population::PopulationRaster;
pub use records::{load_edges, load_users, read_edges, read_users, RawUserRecord};

/// Lookup key for location strings: trimmed and lower-cased.
pub fn normalize_location(raw: &str) -> String {
    raw.trim().to_lowercase()
}
