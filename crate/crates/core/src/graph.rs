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

//! Directed weighted graph over dense integer node indices.
//!
//! Edges are stored once per ordered `(source, target)` pair; repeated
//! insertions accumulate into the edge weight. Adjacency is kept in both
//! directions, sorted by neighbour index, so every traversal is
//! deterministic.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

pub type NodeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Edges leaving the node: the node's followers.
    Out,
    /// Edges arriving at the node: the accounts the node follows.
    In,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedGraph {
    node_weights: Vec<u64>,
    out_adj: Vec<Vec<(NodeId, u64)>>,
    in_adj: Vec<Vec<(NodeId, u64)>>,
    edge_count: usize,
}

/// Accumulates nodes and edges before freezing them into a [`DirectedGraph`].
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    node_weights: Vec<u64>,
    edges: BTreeMap<(NodeId, NodeId), u64>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_nodes(count: usize) -> Self {
        Self {
            node_weights: vec![1; count],
            edges: BTreeMap::new(),
        }
    }

    pub fn add_node(&mut self, weight: u64) -> NodeId {
        self.node_weights.push(weight);
        self.node_weights.len() - 1
    }

    pub fn node_count(&self) -> usize {
        self.node_weights.len()
    }

    pub fn set_node_weight(&mut self, node: NodeId, weight: u64) -> Result<()> {
        let slot = self
            .node_weights
            .get_mut(node)
            .ok_or(Error::UnknownNode(node))?;
        *slot = weight;
        Ok(())
    }

    /// Adds `weight` to the `(source, target)` edge, creating it if needed.
    pub fn add_edge(&mut self, source: NodeId, target: NodeId, weight: u64) -> Result<()> {
        let n = self.node_weights.len();
        if source >= n {
            return Err(Error::UnknownNode(source));
        }
        if target >= n {
            return Err(Error::UnknownNode(target));
        }
        if weight == 0 {
            return Err(Error::Invalid("edge weight must be positive".into()));
        }
        *self.edges.entry((source, target)).or_insert(0) += weight;
        Ok(())
    }

    pub fn build(self) -> DirectedGraph {
        let n = self.node_weights.len();
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        // BTreeMap order keeps both adjacency directions sorted.
        for (&(s, t), &w) in &self.edges {
            out_adj[s].push((t, w));
        }
        for (&(s, t), &w) in &self.edges {
            in_adj[t].push((s, w));
        }
        for list in &mut in_adj {
            list.sort_unstable_by_key(|&(s, _)| s);
        }
        DirectedGraph {
            node_weights: self.node_weights,
            out_adj,
            in_adj,
            edge_count: self.edges.len(),
        }
    }
}

impl DirectedGraph {
    /// Builds a unit-weight graph from an edge list; duplicates accumulate.
    pub fn from_edges(node_count: usize, edges: &[(NodeId, NodeId)]) -> Result<Self> {
        let mut builder = GraphBuilder::with_nodes(node_count);
        for &(s, t) in edges {
            builder.add_edge(s, t, 1)?;
        }
        Ok(builder.build())
    }

    pub fn node_count(&self) -> usize {
        self.node_weights.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.node_weights.is_empty()
    }

    pub fn node_weight(&self, node: NodeId) -> Result<u64> {
        self.node_weights
            .get(node)
            .copied()
            .ok_or(Error::UnknownNode(node))
    }

    pub fn node_weights(&self) -> &[u64] {
        &self.node_weights
    }

    pub fn total_node_weight(&self) -> u64 {
        self.node_weights.iter().sum()
    }

    pub fn total_edge_weight(&self) -> u64 {
        self.out_adj.iter().flatten().map(|&(_, w)| w).sum()
    }

    /// Outgoing `(target, weight)` pairs sorted by target.
    pub fn successors(&self, node: NodeId) -> &[(NodeId, u64)] {
        &self.out_adj[node]
    }

    /// Incoming `(source, weight)` pairs sorted by source.
    pub fn predecessors(&self, node: NodeId) -> &[(NodeId, u64)] {
        &self.in_adj[node]
    }

    pub fn edge_weight(&self, source: NodeId, target: NodeId) -> Option<u64> {
        let list = self.out_adj.get(source)?;
        list.binary_search_by_key(&target, |&(t, _)| t)
            .ok()
            .map(|i| list[i].1)
    }

    /// All edges as `(source, target, weight)` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, u64)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(s, list)| list.iter().map(move |&(t, w)| (s, t, w)))
    }

    fn check(&self, node: NodeId) -> Result<()> {
        if node < self.node_count() {
            Ok(())
        } else {
            Err(Error::UnknownNode(node))
        }
    }

    /// Degree of `node`. Self-loops count once in each direction.
    pub fn degree(&self, node: NodeId, direction: Direction, weighted: bool) -> Result<u64> {
        self.check(node)?;
        let list = match direction {
            Direction::Out => &self.out_adj[node],
            Direction::In => &self.in_adj[node],
        };
        Ok(if weighted {
            list.iter().map(|&(_, w)| w).sum()
        } else {
            list.len() as u64
        })
    }

    /// Degree ignoring any self-loop on `node`.
    pub fn degree_excluding_loops(
        &self,
        node: NodeId,
        direction: Direction,
        weighted: bool,
    ) -> Result<u64> {
        self.check(node)?;
        let list = match direction {
            Direction::Out => &self.out_adj[node],
            Direction::In => &self.in_adj[node],
        };
        Ok(list
            .iter()
            .filter(|&&(other, _)| other != node)
            .map(|&(_, w)| if weighted { w } else { 1 })
            .sum())
    }

    /// Number of nodes reachable from `node` along outgoing edges, excluding
    /// `node` itself.
    pub fn reachable_count(&self, node: NodeId) -> Result<usize> {
        self.check(node)?;
        let mut seen = vec![false; self.node_count()];
        seen[node] = true;
        let mut stack = vec![node];
        let mut count = 0;
        while let Some(v) = stack.pop() {
            for &(w, _) in &self.out_adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        Ok(count)
    }

    /// Unit-length BFS distances from `source`; `None` marks unreachable.
    pub fn bfs_distances(&self, source: NodeId) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.node_count()];
        dist[source] = Some(0);
        let mut queue = std::collections::VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            let next = dist[v].unwrap() + 1;
            for &(w, _) in &self.out_adj[v] {
                if dist[w].is_none() {
                    dist[w] = Some(next);
                    queue.push_back(w);
                }
            }
        }
        dist
    }
}
