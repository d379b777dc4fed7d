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

use std::collections::{BTreeSet, HashMap};
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, GraphBuilder, NodeId};
use crate::GeoPoint;

/// Geocoded user network. Node `i` is `user_ids[i]` located at `points[i]`;
/// edges run from a followed account to its follower.
#[derive(Clone, Debug, PartialEq)]
pub struct UserNetwork {
    pub graph: DirectedGraph,
    pub user_ids: Vec<String>,
    /// Original profile location strings.
    pub locations: Vec<String>,
    pub points: Vec<GeoPoint>,
}

impl UserNetwork {
    /// Builds a network from parallel user vectors and edges given as
    /// indices. Duplicate edges are merged.
    pub fn new(
        user_ids: Vec<String>,
        locations: Vec<String>,
        points: Vec<GeoPoint>,
        edges: &[(NodeId, NodeId)],
    ) -> Result<Self> {
        if user_ids.len() != points.len() || user_ids.len() != locations.len() {
            return Err(Error::Invalid("user vectors differ in length".into()));
        }
        let mut builder = GraphBuilder::with_nodes(user_ids.len());
        let unique: BTreeSet<(NodeId, NodeId)> = edges.iter().copied().collect();
        for (s, t) in unique {
            builder.add_edge(s, t, 1)?;
        }
        Ok(Self {
            graph: builder.build(),
            user_ids,
            locations,
            points,
        })
    }

    pub fn empty() -> Self {
        Self {
            graph: GraphBuilder::new().build(),
            user_ids: Vec::new(),
            locations: Vec::new(),
            points: Vec::new(),
        }
    }

    pub fn user_count(&self) -> usize {
        self.user_ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    /// Keeps users for which `keep` is true and the edges between them.
    pub fn retain(&self, mut keep: impl FnMut(NodeId) -> bool) -> Self {
        let mut remap = vec![usize::MAX; self.user_count()];
        let mut ids = Vec::new();
        let mut locs = Vec::new();
        let mut pts = Vec::new();
        for (v, slot) in remap.iter_mut().enumerate() {
            if keep(v) {
                *slot = ids.len();
                ids.push(self.user_ids[v].clone());
                locs.push(self.locations[v].clone());
                pts.push(self.points[v]);
            }
        }
        let mut builder = GraphBuilder::with_nodes(ids.len());
        for (s, t, w) in self.graph.edges() {
            if remap[s] != usize::MAX && remap[t] != usize::MAX {
                builder
                    .add_edge(remap[s], remap[t], w)
                    .expect("remapped endpoints exist");
            }
        }
        Self {
            graph: builder.build(),
            user_ids: ids,
            locations: locs,
            points: pts,
        }
    }

    /// Writes `user_id,location,lat,lon` and `src,dst` tables.
    pub fn write_csv<W1: Write, W2: Write>(&self, users: W1, edges: W2) -> Result<()> {
        let mut u = csv::Writer::from_writer(users);
        u.write_record(["user_id", "location", "lat", "lon"])?;
        for i in 0..self.user_count() {
            let p = self.points[i];
            u.write_record([
                self.user_ids[i].as_str(),
                self.locations[i].as_str(),
                &p.lat().to_string(),
                &p.lon().to_string(),
            ])?;
        }
        u.flush()?;
        let mut e = csv::Writer::from_writer(edges);
        e.write_record(["src", "dst"])?;
        for (s, t, _) in self.graph.edges() {
            e.write_record([self.user_ids[s].as_str(), self.user_ids[t].as_str()])?;
        }
        e.flush()?;
        Ok(())
    }

    pub fn read_csv<R1: Read, R2: Read>(users: R1, edges: R2, origin: &Path) -> Result<Self> {
        let mut ids = Vec::new();
        let mut locs = Vec::new();
        let mut pts = Vec::new();
        let mut index = HashMap::new();
        let mut rdr = csv::Reader::from_reader(users);
        for row in rdr.records() {
            let row = row?;
            let line = row.position().map_or(0, |p| p.line());
            if row.len() != 4 {
                return Err(Error::malformed(origin, line, "expected user_id,location,lat,lon"));
            }
            let num = |i: usize| {
                row[i]
                    .parse::<f64>()
                    .map_err(|e| Error::malformed(origin, line, e.to_string()))
            };
            let point = GeoPoint::new(num(2)?, num(3)?)
                .map_err(|e| Error::malformed(origin, line, e.to_string()))?;
            if index.insert(row[0].to_owned(), ids.len()).is_some() {
                return Err(Error::DuplicateUser(row[0].to_owned()));
            }
            ids.push(row[0].to_owned());
            locs.push(row[1].to_owned());
            pts.push(point);
        }
        let mut pairs = Vec::new();
        let mut rdr = csv::Reader::from_reader(edges);
        for row in rdr.records() {
            let row = row?;
            let line = row.position().map_or(0, |p| p.line());
            let lookup = |id: &str| {
                index
                    .get(id)
                    .copied()
                    .ok_or_else(|| Error::malformed(origin, line, format!("unknown user `{id}`")))
            };
            pairs.push((lookup(&row[0])?, lookup(&row[1])?));
        }
        Self::new(ids, locs, pts, &pairs)
    }

    pub fn save(&self, users_path: &Path, edges_path: &Path) -> Result<()> {
        let u = std::io::BufWriter::new(std::fs::File::create(users_path)?);
        let e = std::io::BufWriter::new(std::fs::File::create(edges_path)?);
        self.write_csv(u, e)
    }

    pub fn load(users_path: &Path, edges_path: &Path) -> Result<Self> {
        Self::read_csv(
            std::fs::File::open(users_path)?,
            std::fs::File::open(edges_path)?,
            users_path,
        )
    }

    /// Great-circle length of every edge, in edge order.
    pub fn edge_lengths_km(&self) -> Vec<f64> {
        self.graph
            .edges()
            .map(|(s, t, _)| crate::geo::haversine_km(&self.points[s], &self.points[t]))
            .collect()
    }
}

/// `(followed, follower)` index pairs of a network, in edge order.
pub fn forward_edges(net: &UserNetwork) -> Vec<(NodeId, NodeId)> {
    net.graph.edges().map(|(s, t, _)| (s, t)).collect()
}
