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


//! Brandes betweenness and closeness against brute-force enumeration.

use std::time::{Duration, Instant};

use geosocial::centrality::{betweenness_centrality, centrality_table, closeness_centrality};
use geosocial::{DirectedGraph, Direction, Exact};
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const UNREACHED: usize = usize::MAX;

fn random_digraph(rng: &mut ChaCha8Rng, max_n: usize, p: f64) -> (usize, Vec<(usize, usize)>) {
    let n = rng.random_range(2..=max_n);
    let mut edges = Vec::new();
    for s in 0..n {
        for t in 0..n {
            if s != t && rng.random_bool(p) {
                edges.push((s, t));
            }
        }
    }
    (n, edges)
}

/// All-pairs hop distances by Floyd-Warshall.
fn all_pairs(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut d = vec![vec![UNREACHED; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0;
    }
    for &(s, t) in edges {
        d[s][t] = d[s][t].min(1);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] != UNREACHED && d[k][j] != UNREACHED {
                    d[i][j] = d[i][j].min(d[i][k] + d[k][j]);
                }
            }
        }
    }
    d
}

/// Walks every shortest s-t path, counting paths through each interior node.
fn walk(
    v: usize,
    t: usize,
    succ: &[Vec<usize>],
    d: &[Vec<usize>],
    path: &mut Vec<usize>,
    total: &mut i128,
    through: &mut [i128],
) {
    if v == t {
        *total += 1;
        for &u in &path[1..path.len() - 1] {
            through[u] += 1;
        }
        return;
    }
    for &u in &succ[v] {
        if d[u][t] != UNREACHED && d[u][t] + 1 == d[v][t] {
            path.push(u);
            walk(u, t, succ, d, path, total, through);
            path.pop();
        }
    }
}

fn brute_betweenness(n: usize, edges: &[(usize, usize)]) -> Vec<Exact> {
    let d = all_pairs(n, edges);
    let mut succ = vec![Vec::new(); n];
    for &(s, t) in edges {
        succ[s].push(t);
    }
    let mut bc = vec![Exact::zero(); n];
    for s in 0..n {
        for t in 0..n {
            if s == t || d[s][t] == UNREACHED {
                continue;
            }
            let mut total = 0;
            let mut through = vec![0; n];
            walk(s, t, &succ, &d, &mut vec![s], &mut total, &mut through);
            for v in 0..n {
                if through[v] > 0 {
                    bc[v] += Exact::new(through[v], total);
                }
            }
        }
    }
    bc
}

fn brute_closeness(n: usize, edges: &[(usize, usize)]) -> Vec<f64> {
    let d = all_pairs(n, edges);
    d.iter()
        .map(|row| {
            let reached: Vec<usize> = row.iter().copied().filter(|&x| x != UNREACHED).collect();
            let others = reached.len() - 1;
            if others == 0 {
                return 0.0;
            }
            let mean = reached.iter().sum::<usize>() as f64 / others as f64;
            (others as f64 / (n - 1) as f64) / mean
        })
        .collect()
}

fn instances() -> Vec<(usize, Vec<(usize, usize)>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..200).map(|_| random_digraph(&mut rng, 12, 0.3)).collect()
}

#[test]
fn brandes_equals_enumeration_exactly() {
    let mut spent = Duration::ZERO;
    for (n, edges) in instances() {
        let g = DirectedGraph::from_edges(n, &edges).unwrap();
        let start = Instant::now();
        let fast: Vec<Exact> = betweenness_centrality(&g).unwrap();
        spent += start.elapsed();
        assert_eq!(fast, brute_betweenness(n, &edges), "n={n} edges={edges:?}");
    }
    assert!(spent < Duration::from_secs(5), "{spent:?}");
}

#[test]
fn float_betweenness_tracks_exact() {
    for (n, edges) in instances().into_iter().take(50) {
        let g = DirectedGraph::from_edges(n, &edges).unwrap();
        let exact: Vec<Exact> = betweenness_centrality(&g).unwrap();
        let float: Vec<f64> = betweenness_centrality(&g).unwrap();
        for (e, f) in exact.iter().zip(&float) {
            let e = *e.numer() as f64 / *e.denom() as f64;
            assert!((e - f).abs() < 1e-9, "{e} vs {f}");
        }
    }
}

#[test]
fn closeness_matches_all_pairs_oracle() {
    for (n, edges) in instances() {
        let g = DirectedGraph::from_edges(n, &edges).unwrap();
        let fast: Vec<f64> = closeness_centrality(&g).unwrap();
        for (v, (a, b)) in fast.iter().zip(brute_closeness(n, &edges)).enumerate() {
            assert!((a - b).abs() <= 1e-12, "node {v}: {a} vs {b}");
        }
    }
}

#[test]
fn exact_closeness_agrees_with_float() {
    for (n, edges) in instances().into_iter().take(50) {
        let g = DirectedGraph::from_edges(n, &edges).unwrap();
        let exact: Vec<Exact> = closeness_centrality(&g).unwrap();
        for (e, b) in exact.iter().zip(brute_closeness(n, &edges)) {
            let e = *e.numer() as f64 / *e.denom() as f64;
            assert!((e - b).abs() <= 1e-12);
        }
    }
}

fn arb_digraph() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (1usize..15).prop_flat_map(|n| (Just(n), prop::collection::vec((0..n, 0..n), 0..40)))
}

proptest! {
    #[test]
    fn degree_sums_equal_edge_count((n, edges) in arb_digraph()) {
        let g = DirectedGraph::from_edges(n, &edges).unwrap();
        let table = centrality_table::<f64>(&g, false).unwrap();
        let loops = g.edges().filter(|(s, t, _)| s == t).count();
        let ins: f64 = table.in_degree.iter().sum();
        let outs: f64 = table.out_degree.iter().sum();
        prop_assert_eq!(ins, outs);
        prop_assert_eq!(ins as usize, g.edge_count() - loops);
        let raw: u64 = (0..n).map(|v| g.degree(v, Direction::Out, false).unwrap()).sum();
        prop_assert_eq!(raw as usize, g.edge_count());
    }

    #[test]
    fn relabelling_permutes_centralities(
        (n, edges) in arb_digraph(),
        key in any::<u64>(),
    ) {
        let mut perm: Vec<usize> = (0..n).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(key);
        for i in (1..n).rev() {
            perm.swap(i, rng.random_range(0..=i));
        }
        let moved: Vec<(usize, usize)> = edges.iter().map(|&(s, t)| (perm[s], perm[t])).collect();
        let a = DirectedGraph::from_edges(n, &edges).unwrap();
        let b = DirectedGraph::from_edges(n, &moved).unwrap();
        let ta = centrality_table::<Exact>(&a, false).unwrap();
        let tb = centrality_table::<Exact>(&b, false).unwrap();
        for (v, &p) in perm.iter().enumerate() {
            prop_assert_eq!(ta.in_degree[v], tb.in_degree[p]);
            prop_assert_eq!(ta.out_degree[v], tb.out_degree[p]);
            prop_assert_eq!(ta.closeness[v], tb.closeness[p]);
            prop_assert_eq!(ta.betweenness[v], tb.betweenness[p]);
        }
    }

    #[test]
    fn self_loops_do_not_change_paths((n, edges) in arb_digraph()) {
        let plain: Vec<(usize, usize)> = edges.iter().copied().filter(|(s, t)| s != t).collect();
        let a = DirectedGraph::from_edges(n, &edges).unwrap();
        let b = DirectedGraph::from_edges(n, &plain).unwrap();
        prop_assert_eq!(
            betweenness_centrality::<Exact>(&a).unwrap(),
            betweenness_centrality::<Exact>(&b).unwrap()
        );
        prop_assert_eq!(
            closeness_centrality::<Exact>(&a).unwrap(),
            closeness_centrality::<Exact>(&b).unwrap()
        );
    }
}
