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

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::geo::{CellGrid, CellId};
use crate::graph::{DirectedGraph, GraphBuilder, NodeId};
use crate::ingest::UserNetwork;
use crate::BoundingBox;

/// Graph over spatial units. Node weights count users, edge weights count
/// user-follower pairs between (or, on self-loops, within) units. Keys are
/// sorted and node `i` is `keys[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct CellNetwork<K> {
    pub keys: Vec<K>,
    pub graph: DirectedGraph,
}

impl<K: Ord + Clone> CellNetwork<K> {
    /// Groups users by `unit_of`; users mapped to `None` and their edges are
    /// left out.
    pub fn from_assignment(net: &UserNetwork, unit_of: &[Option<K>]) -> Self {
        let mut counts: BTreeMap<K, u64> = BTreeMap::new();
        for key in unit_of.iter().flatten() {
            *counts.entry(key.clone()).or_insert(0) += 1;
        }
        let keys: Vec<K> = counts.keys().cloned().collect();
        let mut builder = GraphBuilder::new();
        for &count in counts.values() {
            builder.add_node(count);
        }
        let node_of: Vec<Option<NodeId>> = unit_of
            .iter()
            .map(|k| k.as_ref().map(|k| keys.binary_search(k).expect("key present")))
            .collect();
        for (s, t, w) in net.graph.edges() {
            if let (Some(a), Some(b)) = (node_of[s], node_of[t]) {
                builder.add_edge(a, b, w).expect("nodes registered");
            }
        }
        Self {
            keys,
            graph: builder.build(),
        }
    }

    pub fn index_of(&self, key: &K) -> Option<NodeId> {
        self.keys.binary_search(key).ok()
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// Keeps the units selected by `keep` and the edges among them.
    pub fn retain(&self, mut keep: impl FnMut(&K) -> bool) -> Self {
        let selected: Vec<bool> = self.keys.iter().map(&mut keep).collect();
        let mut remap = vec![usize::MAX; self.len()];
        let mut keys = Vec::new();
        let mut builder = GraphBuilder::new();
        for (i, key) in self.keys.iter().enumerate() {
            if selected[i] {
                remap[i] = keys.len();
                keys.push(key.clone());
                builder.add_node(self.graph.node_weights()[i]);
            }
        }
        for (s, t, w) in self.graph.edges() {
            if selected[s] && selected[t] {
                builder.add_edge(remap[s], remap[t], w).expect("nodes registered");
            }
        }
        Self {
            keys,
            graph: builder.build(),
        }
    }
}

/// Counts users per grid cell and user-follower pairs per ordered cell pair.
pub fn aggregate_to_grid<G>(net: &UserNetwork, grid: &G) -> CellNetwork<CellId>
where
    G: CellGrid<f64> + Sync,
{
    let cells: Vec<Option<CellId>> = net
        .points
        .par_iter()
        .map(|p| Some(grid.cell_for_point(p)))
        .collect();
    CellNetwork::from_assignment(net, &cells)
}

/// Users inside `bbox` and the edges whose endpoints are both inside.
pub fn subnetwork_by_bbox(net: &UserNetwork, bbox: &BoundingBox) -> UserNetwork {
    net.retain(|v| bbox.contains(&net.points[v]))
}
