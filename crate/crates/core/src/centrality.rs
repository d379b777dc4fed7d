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

//! Degree, closeness and betweenness centralities.
//!
//! Shortest paths treat every edge as unit length and ignore self-loops.
//! Per-source passes run in parallel over fixed-size batches of sources;
//! batch results are summed in source order, so tables are bitwise
//! identical for any thread count.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, Direction, NodeId};
use crate::scalar::Scalar;

/// Number of sources folded sequentially before a batch is merged.
const SOURCE_BATCH: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct CentralityTable<T> {
    pub in_degree: Vec<T>,
    pub out_degree: Vec<T>,
    pub closeness: Vec<T>,
    pub betweenness: Vec<T>,
    /// Whether the degree columns sum edge weights instead of counting edges.
    pub weighted_degree: bool,
}

impl<T: Scalar> CentralityTable<T> {
    pub fn len(&self) -> usize {
        self.in_degree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.in_degree.is_empty()
    }

    /// Columns in the order `in_deg, out_deg, closeness, betweenness`.
    pub fn columns(&self) -> [&[T]; 4] {
        [
            &self.in_degree,
            &self.out_degree,
            &self.closeness,
            &self.betweenness,
        ]
    }

    pub fn to_f64(&self) -> CentralityTable<f64> {
        let conv = |col: &[T]| col.iter().map(|v| v.to_f64_lossy()).collect();
        CentralityTable {
            in_degree: conv(&self.in_degree),
            out_degree: conv(&self.out_degree),
            closeness: conv(&self.closeness),
            betweenness: conv(&self.betweenness),
            weighted_degree: self.weighted_degree,
        }
    }
}

pub const COLUMN_NAMES: [&str; 4] = ["in_deg", "out_deg", "closeness", "betweenness"];

/// Computes all four centralities. Degrees exclude self-loops.
pub fn centrality_table<T: Scalar>(graph: &DirectedGraph, weighted: bool) -> Result<CentralityTable<T>> {
    if graph.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let degrees = |direction| -> Result<Vec<T>> {
        (0..graph.node_count())
            .map(|v| {
                graph
                    .degree_excluding_loops(v, direction, weighted)
                    .map(T::from_count)
            })
            .collect()
    };
    Ok(CentralityTable {
        in_degree: degrees(Direction::In)?,
        out_degree: degrees(Direction::Out)?,
        closeness: closeness_centrality(graph)?,
        betweenness: betweenness_centrality(graph)?,
        weighted_degree: weighted,
    })
}

/// Closeness scaled by the reachable fraction of the graph:
/// `((r-1)/(n-1)) * ((r-1)/sum_dist)` where `r` counts the node itself.
/// Nodes reaching nothing score zero.
pub fn closeness_centrality<T: Scalar>(graph: &DirectedGraph) -> Result<Vec<T>> {
    let n = graph.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    Ok((0..n)
        .into_par_iter()
        .map(|v| closeness_of(graph, v))
        .collect())
}

fn closeness_of<T: Scalar>(graph: &DirectedGraph, source: NodeId) -> T {
    let n = graph.node_count();
    let dist = graph.bfs_distances(source);
    let (reached, total) = dist
        .iter()
        .flatten()
        .fold((0u64, 0u64), |(r, s), &d| (r + 1, s + d as u64));
    if reached < 2 {
        return T::zero();
    }
    let others = T::from_count(reached - 1);
    others / T::from_count(n as u64 - 1) * (others / T::from_count(total))
}

/// Unnormalised directed betweenness over ordered pairs (Brandes).
pub fn betweenness_centrality<T: Scalar>(graph: &DirectedGraph) -> Result<Vec<T>> {
    let n = graph.node_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    let sources: Vec<NodeId> = (0..n).collect();
    let partials: Vec<Vec<T>> = sources
        .par_chunks(SOURCE_BATCH)
        .map(|batch| {
            let mut acc = vec![T::zero(); n];
            let mut scratch = BrandesScratch::new(n);
            for &s in batch {
                scratch.accumulate(graph, s, &mut acc);
            }
            acc
        })
        .collect();
    let mut total = vec![T::zero(); n];
    for part in partials {
        for (t, p) in total.iter_mut().zip(part) {
            *t += p;
        }
    }
    Ok(total)
}

struct BrandesScratch<T> {
    order: Vec<NodeId>,
    dist: Vec<i64>,
    sigma: Vec<T>,
    delta: Vec<T>,
}

impl<T: Scalar> BrandesScratch<T> {
    fn new(n: usize) -> Self {
        Self {
            order: Vec::with_capacity(n),
            dist: vec![-1; n],
            sigma: vec![T::zero(); n],
            delta: vec![T::zero(); n],
        }
    }

    fn accumulate(&mut self, graph: &DirectedGraph, source: NodeId, acc: &mut [T]) {
        for &v in &self.order {
            self.dist[v] = -1;
            self.sigma[v] = T::zero();
            self.delta[v] = T::zero();
        }
        self.order.clear();

        self.dist[source] = 0;
        self.sigma[source] = T::one();
        self.order.push(source);
        // `order` doubles as the BFS queue: entries are visited in
        // non-decreasing distance.
        let mut head = 0;
        while head < self.order.len() {
            let v = self.order[head];
            head += 1;
            let next = self.dist[v] + 1;
            for &(w, _) in graph.successors(v) {
                if self.dist[w] < 0 {
                    self.dist[w] = next;
                    self.order.push(w);
                }
                if self.dist[w] == next {
                    let sv = self.sigma[v];
                    self.sigma[w] += sv;
                }
            }
        }

        for &w in self.order.iter().rev() {
            let dw = self.dist[w];
            let coeff = (T::one() + self.delta[w]) / self.sigma[w];
            for &(v, _) in graph.predecessors(w) {
                if self.dist[v] >= 0 && self.dist[v] + 1 == dw {
                    let sv = self.sigma[v];
                    self.delta[v] += sv * coeff;
                }
            }
            if w != source {
                acc[w] += self.delta[w];
            }
        }
    }
}
