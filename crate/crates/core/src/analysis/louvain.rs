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

//! Louvain modularity optimisation on the symmetrised weighted graph.
//!
//! The directed cell graph becomes undirected with `A_ij = w_ij + w_ji`
//! (so a self-loop contributes `2 * w_ii` to the diagonal). Each level runs
//! local moves in a seeded random node order until no move gains more than
//! [`MIN_GAIN`] modularity, then collapses communities into nodes. Levels
//! repeat until the modularity gain of a level drops to [`MIN_GAIN`].

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::DirectedGraph;

pub const MIN_GAIN: f64 = 1e-9;

/// Undirected weights: off-diagonal adjacency plus diagonal entries.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricWeights {
    adj: Vec<Vec<(usize, f64)>>,
    diag: Vec<f64>,
}

impl SymmetricWeights {
    pub fn from_directed(graph: &DirectedGraph) -> Self {
        let n = graph.node_count();
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        let mut diag = vec![0.0; n];
        for v in 0..n {
            // merge the sorted out- and in-lists of v
            let (outs, ins) = (graph.successors(v), graph.predecessors(v));
            let (mut i, mut j) = (0, 0);
            while i < outs.len() || j < ins.len() {
                let next_out = outs.get(i).map_or(usize::MAX, |e| e.0);
                let next_in = ins.get(j).map_or(usize::MAX, |e| e.0);
                let u = next_out.min(next_in);
                let mut w = 0.0;
                if next_out == u {
                    w += outs[i].1 as f64;
                    i += 1;
                }
                if next_in == u {
                    w += ins[j].1 as f64;
                    j += 1;
                }
                if u == v {
                    diag[v] = w;
                } else {
                    adj[v].push((u, w));
                }
            }
        }
        Self { adj, diag }
    }

    pub fn node_count(&self) -> usize {
        self.diag.len()
    }

    pub fn strength(&self, v: usize) -> f64 {
        self.diag[v] + self.adj[v].iter().map(|&(_, w)| w).sum::<f64>()
    }

    /// `2m`: the sum of all matrix entries.
    pub fn total(&self) -> f64 {
        (0..self.node_count()).map(|v| self.strength(v)).sum()
    }
}

/// `Q = (1/2m) * sum_ij [A_ij - k_i k_j / 2m] * delta(c_i, c_j)`.
pub fn modularity(weights: &SymmetricWeights, membership: &[usize]) -> f64 {
    let two_m = weights.total();
    if two_m == 0.0 {
        return 0.0;
    }
    let communities = membership.iter().copied().max().map_or(0, |m| m + 1);
    let mut internal = vec![0.0; communities];
    let mut degree = vec![0.0; communities];
    for v in 0..weights.node_count() {
        let c = membership[v];
        degree[c] += weights.strength(v);
        internal[c] += weights.diag[v];
        for &(u, w) in &weights.adj[v] {
            if membership[u] == c {
                internal[c] += w;
            }
        }
    }
    internal
        .iter()
        .zip(&degree)
        .map(|(&inside, &deg)| inside / two_m - (deg / two_m).powi(2))
        .sum()
}

/// Modularity of the all-singletons partition, `-sum_i (k_i / 2m)^2` plus
/// any diagonal mass.
pub fn singleton_modularity(weights: &SymmetricWeights) -> f64 {
    let singletons: Vec<usize> = (0..weights.node_count()).collect();
    modularity(weights, &singletons)
}

/// Community per node; ids start at 1 and are ordered by descending size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommunityAssignment {
    pub membership: Vec<usize>,
    /// `sizes[id - 1]` = number of nodes in community `id`.
    pub sizes: Vec<usize>,
}

impl CommunityAssignment {
    /// Relabels arbitrary community labels: largest first, ties by the
    /// smallest member index.
    pub fn from_labels(labels: &[usize]) -> Self {
        let slots = labels.iter().copied().max().map_or(0, |m| m + 1);
        let mut size = vec![0usize; slots];
        let mut first = vec![usize::MAX; slots];
        for (v, &c) in labels.iter().enumerate() {
            size[c] += 1;
            first[c] = first[c].min(v);
        }
        let mut used: Vec<usize> = (0..slots).filter(|&c| size[c] > 0).collect();
        used.sort_by(|&a, &b| size[b].cmp(&size[a]).then(first[a].cmp(&first[b])));
        let mut id = vec![0; slots];
        for (rank, &c) in used.iter().enumerate() {
            id[c] = rank + 1;
        }
        Self {
            membership: labels.iter().map(|&c| id[c]).collect(),
            sizes: used.iter().map(|&c| size[c]).collect(),
        }
    }

    pub fn community_count(&self) -> usize {
        self.sizes.len()
    }

    /// Zero-based labels for [`modularity`].
    pub fn zero_based(&self) -> Vec<usize> {
        self.membership.iter().map(|&c| c - 1).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LouvainResult {
    pub assignment: CommunityAssignment,
    pub modularity: f64,
    pub levels: usize,
}

struct Level {
    adj: Vec<Vec<(usize, f64)>>,
    diag: Vec<f64>,
    strength: Vec<f64>,
}

impl Level {
    fn from_weights(w: &SymmetricWeights) -> Self {
        let strength = (0..w.node_count()).map(|v| w.strength(v)).collect();
        Self {
            adj: w.adj.clone(),
            diag: w.diag.clone(),
            strength,
        }
    }

    fn len(&self) -> usize {
        self.diag.len()
    }

    /// Local moves; returns community labels `0..count` and whether any
    /// node moved.
    fn local_moves(&self, two_m: f64, rng: &mut ChaCha8Rng) -> (Vec<usize>, bool) {
        let n = self.len();
        let mut community: Vec<usize> = (0..n).collect();
        let mut total: Vec<f64> = self.strength.clone();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let mut link = vec![0.0; n];
        let mut touched: Vec<usize> = Vec::new();
        let mut any_move = false;
        loop {
            let mut moved = false;
            for &v in &order {
                let kv = self.strength[v];
                let home = community[v];
                for &(u, w) in &self.adj[v] {
                    let c = community[u];
                    if link[c] == 0.0 {
                        touched.push(c);
                    }
                    link[c] += w;
                }
                total[home] -= kv;
                // gain of joining c, up to a common factor 2/2m
                let gain = |c: usize, link: &[f64], total: &[f64]| link[c] - total[c] * kv / two_m;
                let stay = gain(home, &link, &total);
                let (mut best, mut best_gain) = (home, stay);
                for &c in &touched {
                    let g = gain(c, &link, &total);
                    if g > best_gain {
                        best = c;
                        best_gain = g;
                    }
                }
                if best != home && (best_gain - stay) * 2.0 / two_m <= MIN_GAIN {
                    best = home;
                }
                total[best] += kv;
                if best != home {
                    community[v] = best;
                    moved = true;
                }
                for &c in &touched {
                    link[c] = 0.0;
                }
                touched.clear();
            }
            if !moved {
                break;
            }
            any_move = true;
        }
        (compact(&community), any_move)
    }

    fn collapse(&self, labels: &[usize]) -> Level {
        let count = labels.iter().copied().max().map_or(0, |m| m + 1);
        let mut diag = vec![0.0; count];
        let mut maps: Vec<std::collections::BTreeMap<usize, f64>> = vec![Default::default(); count];
        for v in 0..self.len() {
            let c = labels[v];
            diag[c] += self.diag[v];
            for &(u, w) in &self.adj[v] {
                let d = labels[u];
                if d == c {
                    diag[c] += w;
                } else {
                    *maps[c].entry(d).or_insert(0.0) += w;
                }
            }
        }
        let adj: Vec<Vec<(usize, f64)>> = maps.into_iter().map(|m| m.into_iter().collect()).collect();
        let strength = (0..count)
            .map(|c| diag[c] + adj[c].iter().map(|&(_, w)| w).sum::<f64>())
            .collect();
        Level { adj, diag, strength }
    }
}

/// Renumbers labels to `0..count` in order of first appearance.
fn compact(labels: &[usize]) -> Vec<usize> {
    let mut map = vec![usize::MAX; labels.len().max(labels.iter().copied().max().map_or(0, |m| m + 1))];
    let mut next = 0;
    labels
        .iter()
        .map(|&c| {
            if map[c] == usize::MAX {
                map[c] = next;
                next += 1;
            }
            map[c]
        })
        .collect()
}

pub fn louvain(graph: &DirectedGraph, seed: u64) -> LouvainResult {
    let weights = SymmetricWeights::from_directed(graph);
    louvain_weights(&weights, seed)
}

pub fn louvain_weights(weights: &SymmetricWeights, seed: u64) -> LouvainResult {
    let n = weights.node_count();
    let mut membership: Vec<usize> = (0..n).collect();
    let two_m = weights.total();
    if n == 0 || two_m == 0.0 {
        return LouvainResult {
            assignment: CommunityAssignment::from_labels(&membership),
            modularity: modularity(weights, &membership),
            levels: 0,
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut level = Level::from_weights(weights);
    let mut q = modularity(weights, &membership);
    let mut levels = 0;
    loop {
        let (labels, moved) = level.local_moves(two_m, &mut rng);
        if !moved {
            break;
        }
        let candidate: Vec<usize> = membership.iter().map(|&c| labels[c]).collect();
        let q_next = modularity(weights, &candidate);
        levels += 1;
        let gain = q_next - q;
        membership = candidate;
        q = q_next;
        if gain <= MIN_GAIN {
            break;
        }
        level = level.collapse(&labels);
    }
    let assignment = CommunityAssignment::from_labels(&membership);
    let modularity = modularity(weights, &assignment.zero_based());
    LouvainResult {
        assignment,
        modularity,
        levels,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clique_edges(nodes: std::ops::Range<usize>) -> Vec<(usize, usize)> {
        let v: Vec<usize> = nodes.collect();
        let mut e = Vec::new();
        for &a in &v {
            for &b in &v {
                if a < b {
                    e.push((a, b));
                }
            }
        }
        e
    }

    #[test]
    fn single_clique_is_one_community() {
        let g = DirectedGraph::from_edges(5, &clique_edges(0..5)).unwrap();
        let r = louvain(&g, 7);
        assert_eq!(r.assignment.community_count(), 1);
        assert!(r.modularity.abs() < 1e-12);
    }

    #[test]
    fn two_cliques_split() {
        let mut e = clique_edges(0..6);
        e.extend(clique_edges(6..12));
        e.push((5, 6));
        let g = DirectedGraph::from_edges(12, &e).unwrap();
        for seed in 0..10 {
            let r = louvain(&g, seed);
            assert_eq!(r.assignment.sizes, vec![6, 6]);
            assert!(r.assignment.membership[..6].iter().all(|&c| c == r.assignment.membership[0]));
            assert!(r.assignment.membership[6..].iter().all(|&c| c == r.assignment.membership[6]));
        }
    }

    #[test]
    fn symmetrisation_doubles_self_loops() {
        let g = DirectedGraph::from_edges(2, &[(0, 0), (0, 1), (1, 0)]).unwrap();
        let w = SymmetricWeights::from_directed(&g);
        assert_eq!(w.diag, vec![2.0, 0.0]);
        assert_eq!(w.adj[0], vec![(1, 2.0)]);
        assert_eq!(w.total(), 6.0);
    }

    #[test]
    fn edgeless_graph() {
        let g = DirectedGraph::from_edges(3, &[]).unwrap();
        let r = louvain(&g, 1);
        assert_eq!(r.assignment.sizes, vec![1, 1, 1]);
        assert_eq!(r.modularity, 0.0);
    }

    #[test]
    fn relabel_orders_by_size() {
        let a = CommunityAssignment::from_labels(&[4, 4, 2, 9, 9, 9]);
        assert_eq!(a.membership, vec![2, 2, 3, 1, 1, 1]);
        assert_eq!(a.sizes, vec![3, 2, 1]);
    }
}
