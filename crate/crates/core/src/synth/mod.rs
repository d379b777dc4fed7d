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

//! Deterministic simulated snowball crawl.
//!
//! Starting from seed accounts, each crawled account receives followers
//! whose number is drawn log-uniformly from its follower tier. A follower
//! lives in the followed account's region with probability
//! `geo_homophily`; otherwise it is drawn, population-weighted, from the
//! other regions of the same language group (probability
//! `same_language_share`) or from all other regions. Profile locations are
//! degraded by a configurable noise model so that every ingest filter has
//! work to do.

mod config;
mod generate;
mod region;

pub use config::{FollowerTier, LocationNoise, Seed, SnowballConfig};
pub use generate::{
    generate, load_regions, GazetteerRow, GroundTruth, LocationKind, PlaceTruth, RegionTruth, SyntheticCrawl,
    UserTruth, EDGES_FILE, GAZETTEER_FILE, GROUND_TRUTH_FILE, POPULATION_FILE, UNPOPULATED_PLACE, USERS_FILE,
};
pub use region::{Region, RegionShape};
