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

//! `GSNA1` binary container for cell networks.
//!
//! Little-endian layout:
//!
//! ```text
//! magic        5 bytes  "GSNA1"
//! kind         u8       0 = hexagonal cells, 1 = labelled units (countries)
//! cell_area    f64      km² of the hex grid, 0 for labelled units
//! node_count   u64
//! nodes        kind 0: row i64, col i64, users u64
//!              kind 1: byte_len u32, UTF-8 label, users u64
//! edge_count   u64
//! edges        src u64, dst u64, weight u64   (sorted by src, dst)
//! ```
//!
//! Nodes appear in key order, so node indices survive a round trip.

use std::io::{Read, Write};

use super::CellNetwork;
use crate::error::{Error, Result};
use crate::geo::CellId;
use crate::graph::GraphBuilder;
use crate::HexGrid;

pub const MAGIC: &[u8; 5] = b"GSNA1";
const KIND_HEX: u8 = 0;
const KIND_LABEL: u8 = 1;

#[derive(Clone, Debug, PartialEq)]
pub enum Container {
    Grid {
        cell_area_km2: f64,
        network: CellNetwork<CellId>,
    },
    Labelled(CellNetwork<String>),
}

impl Container {
    pub fn grid(&self) -> Result<(HexGrid, &CellNetwork<CellId>)> {
        match self {
            Container::Grid {
                cell_area_km2,
                network,
            } => Ok((HexGrid::new(*cell_area_km2)?, network)),
            Container::Labelled(_) => Err(Error::Container("expected a hex-cell network".into())),
        }
    }

    pub fn labelled(&self) -> Result<&CellNetwork<String>> {
        match self {
            Container::Labelled(n) => Ok(n),
            Container::Grid { .. } => Err(Error::Container("expected a country network".into())),
        }
    }

    pub fn graph(&self) -> &crate::DirectedGraph {
        match self {
            Container::Grid { network, .. } => &network.graph,
            Container::Labelled(n) => &n.graph,
        }
    }

    /// Node labels as text (`row:col` for cells).
    pub fn labels(&self) -> Vec<String> {
        match self {
            Container::Grid { network, .. } => network.keys.iter().map(ToString::to_string).collect(),
            Container::Labelled(n) => n.keys.clone(),
        }
    }
}

fn write_edges<K, W: Write>(out: &mut W, net: &CellNetwork<K>) -> Result<()> {
    out.write_all(&(net.graph.edge_count() as u64).to_le_bytes())?;
    for (s, t, w) in net.graph.edges() {
        out.write_all(&(s as u64).to_le_bytes())?;
        out.write_all(&(t as u64).to_le_bytes())?;
        out.write_all(&w.to_le_bytes())?;
    }
    Ok(())
}

pub fn write_grid_container<W: Write>(
    mut out: W,
    cell_area_km2: f64,
    net: &CellNetwork<CellId>,
) -> Result<()> {
    out.write_all(MAGIC)?;
    out.write_all(&[KIND_HEX])?;
    out.write_all(&cell_area_km2.to_le_bytes())?;
    out.write_all(&(net.len() as u64).to_le_bytes())?;
    for (key, &users) in net.keys.iter().zip(net.graph.node_weights()) {
        out.write_all(&key.row.to_le_bytes())?;
        out.write_all(&key.col.to_le_bytes())?;
        out.write_all(&users.to_le_bytes())?;
    }
    write_edges(&mut out, net)?;
    out.flush()?;
    Ok(())
}

pub fn write_label_container<W: Write>(mut out: W, net: &CellNetwork<String>) -> Result<()> {
    out.write_all(MAGIC)?;
    out.write_all(&[KIND_LABEL])?;
    out.write_all(&0f64.to_le_bytes())?;
    out.write_all(&(net.len() as u64).to_le_bytes())?;
    for (key, &users) in net.keys.iter().zip(net.graph.node_weights()) {
        let bytes = key.as_bytes();
        let len = u32::try_from(bytes.len()).map_err(|_| Error::Container("label too long".into()))?;
        out.write_all(&len.to_le_bytes())?;
        out.write_all(bytes)?;
        out.write_all(&users.to_le_bytes())?;
    }
    write_edges(&mut out, net)?;
    out.flush()?;
    Ok(())
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.data.len())
            .ok_or_else(|| Error::Container(format!("truncated at byte {}", self.pos)))?;
        let slice = &self.data[self.pos..end];
        self.pos = end;
        Ok(slice)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn i64(&mut self) -> Result<i64> {
        Ok(i64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
}

pub fn read_container<R: Read>(mut input: R) -> Result<Container> {
    let mut data = Vec::new();
    input.read_to_end(&mut data)?;
    let mut cur = Cursor { data: &data, pos: 0 };
    if cur.take(MAGIC.len())? != MAGIC {
        return Err(Error::Container("bad magic bytes".into()));
    }
    let kind = cur.u8()?;
    let cell_area_km2 = cur.f64()?;
    let n = usize::try_from(cur.u64()?).map_err(|_| Error::Container("node count overflow".into()))?;
    let mut builder = GraphBuilder::new();
    let container = match kind {
        KIND_HEX => {
            let mut keys = Vec::with_capacity(n.min(1 << 20));
            for _ in 0..n {
                keys.push(CellId::new(cur.i64()?, cur.i64()?));
                builder.add_node(cur.u64()?);
            }
            read_edges(&mut cur, &mut builder, n)?;
            check_sorted(&keys)?;
            Container::Grid {
                cell_area_km2,
                network: CellNetwork {
                    keys,
                    graph: builder.build(),
                },
            }
        }
        KIND_LABEL => {
            let mut keys = Vec::with_capacity(n.min(1 << 20));
            for _ in 0..n {
                let len = cur.u32()? as usize;
                let label = std::str::from_utf8(cur.take(len)?)
                    .map_err(|_| Error::Container("label is not UTF-8".into()))?;
                keys.push(label.to_owned());
                builder.add_node(cur.u64()?);
            }
            read_edges(&mut cur, &mut builder, n)?;
            check_sorted(&keys)?;
            Container::Labelled(CellNetwork {
                keys,
                graph: builder.build(),
            })
        }
        other => return Err(Error::Container(format!("unknown kind {other}"))),
    };
    if cur.pos != data.len() {
        return Err(Error::Container("trailing bytes".into()));
    }
    Ok(container)
}

fn read_edges(cur: &mut Cursor<'_>, builder: &mut GraphBuilder, n: usize) -> Result<()> {
    let m = cur.u64()?;
    for _ in 0..m {
        let (s, t, w) = (cur.u64()? as usize, cur.u64()? as usize, cur.u64()?);
        if s >= n || t >= n {
            return Err(Error::Container(format!("edge ({s}, {t}) outside {n} nodes")));
        }
        builder
            .add_edge(s, t, w)
            .map_err(|e| Error::Container(e.to_string()))?;
    }
    Ok(())
}

fn check_sorted<K: Ord>(keys: &[K]) -> Result<()> {
    if keys.windows(2).all(|w| w[0] < w[1]) {
        Ok(())
    } else {
        Err(Error::Container("node keys not strictly increasing".into()))
    }
}
