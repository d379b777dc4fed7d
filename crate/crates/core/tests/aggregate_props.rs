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


//! Aggregation conservation, bounding-box filtering and outflow tables.

use std::collections::BTreeMap;

use geosocial::aggregate::{
    aggregate_to_countries, aggregate_to_grid, outflow_table, subnetwork_by_bbox, CellNetwork, Country,
    CountryPolygons,
};
use geosocial::ingest::UserNetwork;
use geosocial::{BoundingBox, GeoPoint, HexGrid};
use proptest::prelude::*;

fn arb_network() -> impl Strategy<Value = UserNetwork> {
    (1usize..60).prop_flat_map(|n| {
        (
            prop::collection::vec((30.0f64..60.0, -10.0f64..40.0), n),
            prop::collection::vec((0..n, 0..n), 0..200),
        )
            .prop_map(|(pts, edges)| {
                let ids = (0..pts.len()).map(|i| format!("u{i}")).collect();
                let locs = vec![String::new(); pts.len()];
                let points = pts.iter().map(|&(a, b)| GeoPoint::new(a, b).unwrap()).collect();
                UserNetwork::new(ids, locs, points, &edges).unwrap()
            })
    })
}

fn arb_bbox() -> impl Strategy<Value = BoundingBox> {
    (30.0f64..60.0, 30.0f64..60.0, -10.0f64..40.0, -10.0f64..40.0).prop_map(|(a, b, c, d)| {
        BoundingBox::new(a.min(b), a.max(b), c.min(d), c.max(d)).unwrap()
    })
}

fn square(x0: f64, y0: f64, x1: f64, y1: f64) -> Vec<Vec<(f64, f64)>> {
    vec![vec![(x0, y0), (x1, y0), (x1, y1), (x0, y1), (x0, y0)]]
}

fn three_countries(scale: f64) -> CountryPolygons {
    CountryPolygons::new(vec![
        Country::new("AA", scale * 1.0, vec![square(-10.0, 30.0, 5.0, 60.0)]).unwrap(),
        Country::new("BB", scale * 2.0, vec![square(5.0, 30.0, 20.0, 45.0)]).unwrap(),
        Country::new("CC", scale * 4.0, vec![square(20.0, 30.0, 30.0, 60.0)]).unwrap(),
    ])
    .unwrap()
}

fn sums<K: Ord + Clone>(net: &CellNetwork<K>) -> (u64, u64) {
    (net.graph.total_node_weight(), net.graph.total_edge_weight())
}

/// Hand fixture: from AA, 4 edges stay home, 4 go to BB and 8 to CC.
fn hand_network() -> UserNetwork {
    let at = |lon: f64| GeoPoint::new(40.0, lon).unwrap();
    // a0..a3 in AA, b0..b3 in BB, c0..c1 in CC
    let mut points = vec![at(0.0); 4];
    points.extend(vec![at(10.0); 4]);
    points.extend(vec![at(25.0); 2]);
    let mut edges = vec![(0, 1), (1, 2), (2, 3), (3, 0)];
    edges.extend((0..4).map(|a| (a, 4 + a)));
    edges.extend((0..4).flat_map(|a| [(a, 8), (a, 9)]));
    edges.extend([(4, 8), (9, 4)]);
    let ids = (0..points.len()).map(|i| format!("u{i}")).collect();
    let locs = vec![String::new(); points.len()];
    UserNetwork::new(ids, locs, points, &edges).unwrap()
}

#[test]
fn hand_outflow_tables() {
    let polygons = three_countries(f64::from(1 << 20));
    let agg = aggregate_to_countries(&hand_network(), &polygons);
    let pops = polygons.populations();
    let raw = outflow_table(&agg.network, "AA", &pops, false).unwrap();
    let want: Vec<(String, f64)> = vec![("CC".into(), 50.0), ("AA".into(), 25.0), ("BB".into(), 25.0)];
    assert_eq!(raw, want);
    // per capita: AA 4/1, BB 4/2, CC 8/4
    let norm = outflow_table(&agg.network, "AA", &pops, true).unwrap();
    let want: Vec<(String, f64)> = vec![("AA".into(), 50.0), ("BB".into(), 25.0), ("CC".into(), 25.0)];
    assert_eq!(norm, want);
}

#[test]
fn missing_origin_and_population_are_errors() {
    let polygons = three_countries(1.0);
    let agg = aggregate_to_countries(&hand_network(), &polygons);
    assert!(outflow_table(&agg.network, "ZZ", &polygons.populations(), false).is_err());
    let mut pops = polygons.populations();
    pops.remove("BB");
    assert!(outflow_table(&agg.network, "AA", &pops, false).is_ok());
    assert!(outflow_table(&agg.network, "AA", &pops, true).is_err());
}

proptest! {
    #[test]
    fn grid_aggregation_conserves_users_and_edges(net in arb_network(), area in 1.0e3f64..5.0e5) {
        let grid = HexGrid::new(area).unwrap();
        let cells = aggregate_to_grid(&net, &grid);
        prop_assert_eq!(sums(&cells), (net.user_count() as u64, net.edge_count() as u64));
        prop_assert!(cells.keys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn country_aggregation_accounts_for_everything(net in arb_network()) {
        let agg = aggregate_to_countries(&net, &three_countries(1.0));
        let (users, edges) = sums(&agg.network);
        prop_assert_eq!(users + agg.unassigned_users, net.user_count() as u64);
        prop_assert_eq!(edges + agg.unassigned_edges, net.edge_count() as u64);
    }

    #[test]
    fn bbox_filters_commute(net in arb_network(), a in arb_bbox(), b in arb_bbox()) {
        let ab = subnetwork_by_bbox(&subnetwork_by_bbox(&net, &a), &b);
        let ba = subnetwork_by_bbox(&subnetwork_by_bbox(&net, &b), &a);
        prop_assert_eq!(&ab, &ba);
        if let Ok(both) = BoundingBox::new(
            a.min_lat.max(b.min_lat), a.max_lat.min(b.max_lat),
            a.min_lon.max(b.min_lon), a.max_lon.min(b.max_lon),
        ) {
            prop_assert_eq!(&ab, &subnetwork_by_bbox(&net, &both));
        } else {
            prop_assert_eq!(ab.user_count(), 0);
        }
        prop_assert!(ab.points.iter().all(|p| a.contains(p) && b.contains(p)));
    }

    #[test]
    fn outflow_is_invariant_to_population_rescaling(net in arb_network(), k in 1e-3f64..1e6) {
        let base = three_countries(1e6);
        let agg = aggregate_to_countries(&net, &base);
        let pops = base.populations();
        let scaled: BTreeMap<String, f64> = pops.iter().map(|(c, p)| (c.clone(), p * k)).collect();
        for origin in ["AA", "BB", "CC"] {
            let Ok(a) = outflow_table(&agg.network, origin, &pops, true) else { continue; };
            let b = outflow_table(&agg.network, origin, &scaled, true).unwrap();
            let a: BTreeMap<String, f64> = a.into_iter().collect();
            let b: BTreeMap<String, f64> = b.into_iter().collect();
            prop_assert!(a.keys().eq(b.keys()));
            for (pa, pb) in a.values().zip(b.values()) {
                prop_assert!((pa - pb).abs() <= 1e-12 * 100.0);
            }
            let total: f64 = a.values().sum();
            prop_assert!((total - 100.0).abs() < 1e-9);
        }
    }
}
