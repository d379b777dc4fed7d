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


//! Ingest accounting on the bundled fixtures and container round trips.

use std::path::PathBuf;

use geosocial::aggregate::{aggregate_to_grid, read_container, write_grid_container, write_label_container, CellNetwork};
use geosocial::ingest::{filter_and_build, load_edges, load_users, Gazetteer, PopulationRaster, UserNetwork};
use geosocial::{GeoPoint, HexGrid};
use proptest::prelude::*;

fn fixture(path: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(path)
}

fn ingest(dir: &str) -> (UserNetwork, geosocial::ingest::IngestStats) {
    let d = fixture(dir);
    let users = load_users(d.join("users.csv")).unwrap();
    let edges = load_edges(d.join("edges.csv")).unwrap();
    let gazetteer = Gazetteer::load(d.join("gazetteer.tsv")).unwrap();
    let population = PopulationRaster::load(d.join("population.tsv")).unwrap();
    filter_and_build(&users, &edges, &gazetteer, &population)
}

#[test]
fn table_fixture_counts() {
    let (net, stats) = ingest("accounting");
    assert_eq!(stats.users.total.count, 1582);
    assert_eq!(stats.users.with_location.count, 869);
    assert_eq!(stats.users.geocoded.count, 773);
    assert_eq!(stats.edges.total.count, 4324);
    assert_eq!(stats.edges.between_geocoded.count, 1182);
    assert_eq!(stats.locations.total.count, 245);
    assert_eq!(stats.locations.geocoded.count, 160);
    assert_eq!(net.user_count(), 773);
    assert_eq!(net.edge_count(), 1182);
}

#[test]
fn synthetic_crawl_filters_are_monotone() {
    let (net, s) = ingest("dach/crawl");
    let u = &s.users;
    assert!(u.total.count >= u.with_location.count);
    assert!(u.with_location.count >= u.geocoded.count);
    assert!(u.geocoded.count >= u.precise.count);
    assert!(u.precise.count >= u.after_filters.count);
    assert!(s.edges.between_geocoded.count >= s.edges.after_filters.count);
    assert_eq!(net.user_count() as u64, u.after_filters.count);
    assert_eq!(net.edge_count() as u64, s.edges.after_filters.count);
}

fn arb_network() -> impl Strategy<Value = UserNetwork> {
    (1usize..40).prop_flat_map(|n| {
        (
            prop::collection::vec((-80.0f64..80.0, -179.0f64..179.0), n),
            prop::collection::vec((0..n, 0..n), 0..120),
        )
            .prop_map(|(pts, edges)| {
                let ids = (0..pts.len()).map(|i| format!("u{i}")).collect();
                let locs = vec![String::new(); pts.len()];
                let points = pts.iter().map(|&(a, b)| GeoPoint::new(a, b).unwrap()).collect();
                UserNetwork::new(ids, locs, points, &edges).unwrap()
            })
    })
}

proptest! {
    #[test]
    fn grid_container_round_trips(net in arb_network(), area in 1.0e3f64..1.0e6) {
        let cells = aggregate_to_grid(&net, &HexGrid::new(area).unwrap());
        let mut bytes = Vec::new();
        write_grid_container(&mut bytes, area, &cells).unwrap();
        let back = read_container(bytes.as_slice()).unwrap();
        let (grid, again) = back.grid().unwrap();
        prop_assert_eq!(again, &cells);
        prop_assert_eq!(grid, HexGrid::new(area).unwrap());
        prop_assert!(read_container(&bytes[..bytes.len() - 1]).is_err());
    }

    #[test]
    fn label_container_round_trips(net in arb_network()) {
        let labels: Vec<Option<String>> =
            net.points.iter().map(|p| Some(format!("R{}", (p.lat() / 20.0).floor()))).collect();
        let units = CellNetwork::from_assignment(&net, &labels);
        let mut bytes = Vec::new();
        write_label_container(&mut bytes, &units).unwrap();
        let back = read_container(bytes.as_slice()).unwrap();
        prop_assert_eq!(back.labelled().unwrap(), &units);
        prop_assert!(back.grid().is_err());
    }
}
