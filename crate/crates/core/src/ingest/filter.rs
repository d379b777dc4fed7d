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

//! The location filter chain and its accounting.
//!
//! Users are dropped in a fixed order: no profile location, location not in
//! the gazetteer, country/continent precision, zero population at the
//! geocoded point. Edges survive iff both endpoints survive.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{normalize_location, Gazetteer, PopulationRaster, RawUserRecord, UserNetwork};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountRow {
    pub count: u64,
    /// Share of the group's base row in percent, rounded to two decimals.
    pub pct: f64,
}

impl CountRow {
    fn of(count: u64, base: u64) -> Self {
        let pct = if base == 0 {
            0.0
        } else {
            (10_000.0 * count as f64 / base as f64).round() / 100.0
        };
        Self { count, pct }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UserStats {
    pub total: CountRow,
    pub with_location: CountRow,
    pub geocoded: CountRow,
    pub precise: CountRow,
    pub after_filters: CountRow,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeStats {
    pub total: CountRow,
    pub between_geocoded: CountRow,
    pub after_filters: CountRow,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocationStats {
    pub total: CountRow,
    pub geocoded: CountRow,
    pub after_filters: CountRow,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IngestStats {
    pub users: UserStats,
    pub edges: EdgeStats,
    pub locations: LocationStats,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Stage {
    NoLocation,
    NotGeocoded,
    Imprecise,
    Unpopulated,
    Kept,
}

pub fn filter_and_build(
    users: &[RawUserRecord],
    edges: &[(String, String)],
    gazetteer: &Gazetteer,
    population: &PopulationRaster,
) -> (UserNetwork, IngestStats) {
    let mut stages = Vec::with_capacity(users.len());
    let mut geo = Vec::with_capacity(users.len());
    let mut all_locations = BTreeSet::new();
    let mut geocoded_locations = BTreeSet::new();
    let mut kept_locations = BTreeSet::new();

    for user in users {
        let Some(raw) = user.location.as_deref() else {
            stages.push(Stage::NoLocation);
            geo.push(None);
            continue;
        };
        let key = normalize_location(raw);
        all_locations.insert(key.clone());
        let Some(hit) = gazetteer.geocode(raw) else {
            stages.push(Stage::NotGeocoded);
            geo.push(None);
            continue;
        };
        geocoded_locations.insert(key.clone());
        let stage = if !hit.precision.is_precise() {
            Stage::Imprecise
        } else if population.population_at(&hit.point) <= 0.0 {
            Stage::Unpopulated
        } else {
            kept_locations.insert(key);
            Stage::Kept
        };
        stages.push(stage);
        geo.push(Some(hit.point));
    }

    let count_at_least = |min: Stage| stages.iter().filter(|&&s| s >= min).count() as u64;
    let total_users = users.len() as u64;
    let user_stats = UserStats {
        total: CountRow::of(total_users, total_users),
        with_location: CountRow::of(count_at_least(Stage::NotGeocoded), total_users),
        geocoded: CountRow::of(count_at_least(Stage::Imprecise), total_users),
        precise: CountRow::of(count_at_least(Stage::Unpopulated), total_users),
        after_filters: CountRow::of(count_at_least(Stage::Kept), total_users),
    };

    let index: HashMap<&str, usize> = users
        .iter()
        .enumerate()
        .map(|(i, u)| (u.user_id.as_str(), i))
        .collect();
    let mut remap = vec![usize::MAX; users.len()];
    let mut ids = Vec::new();
    let mut locs = Vec::new();
    let mut pts = Vec::new();
    for (i, user) in users.iter().enumerate() {
        if stages[i] == Stage::Kept {
            remap[i] = ids.len();
            ids.push(user.user_id.clone());
            locs.push(user.location.clone().unwrap_or_default());
            pts.push(geo[i].expect("kept users are geocoded"));
        }
    }

    let mut between_geocoded = 0u64;
    let mut kept_edges = Vec::new();
    for (src, dst) in edges {
        let (Some(&s), Some(&t)) = (index.get(src.as_str()), index.get(dst.as_str())) else {
            continue;
        };
        if stages[s] >= Stage::Imprecise && stages[t] >= Stage::Imprecise {
            between_geocoded += 1;
        }
        if remap[s] != usize::MAX && remap[t] != usize::MAX {
            kept_edges.push((remap[s], remap[t]));
        }
    }
    let network = UserNetwork::new(ids, locs, pts, &kept_edges).expect("consistent vectors");

    let total_edges = edges.len() as u64;
    let edge_stats = EdgeStats {
        total: CountRow::of(total_edges, total_edges),
        between_geocoded: CountRow::of(between_geocoded, total_edges),
        after_filters: CountRow::of(network.edge_count() as u64, total_edges),
    };
    let total_locations = all_locations.len() as u64;
    let location_stats = LocationStats {
        total: CountRow::of(total_locations, total_locations),
        geocoded: CountRow::of(geocoded_locations.len() as u64, total_locations),
        after_filters: CountRow::of(kept_locations.len() as u64, total_locations),
    };
    (
        network,
        IngestStats {
            users: user_stats,
            edges: edge_stats,
            locations: location_stats,
        },
    )
}
