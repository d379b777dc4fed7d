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

//! Flow tables over a country-keyed network.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::CellNetwork;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Flow {
    pub src: String,
    pub dst: String,
    pub weight: u64,
    /// Percent of the network's total edge weight.
    pub pct: f64,
}

/// The `k` heaviest flows, within-unit self-loops included. Ties are broken
/// by `(src, dst)`.
pub fn top_k_flows(net: &CellNetwork<String>, k: usize) -> Result<Vec<Flow>> {
    if k == 0 {
        return Err(Error::Invalid("k must be at least 1".into()));
    }
    let total = net.graph.total_edge_weight();
    let mut flows: Vec<Flow> = net
        .graph
        .edges()
        .map(|(s, t, w)| Flow {
            src: net.keys[s].clone(),
            dst: net.keys[t].clone(),
            weight: w,
            pct: 100.0 * w as f64 / total as f64,
        })
        .collect();
    flows.sort_by(|a, b| {
        b.weight
            .cmp(&a.weight)
            .then_with(|| (&a.src, &a.dst).cmp(&(&b.src, &b.dst)))
    });
    flows.truncate(k);
    Ok(flows)
}

/// Fraction of edge weight that stays inside its unit.
pub fn within_unit_share<K: Ord + Clone>(net: &CellNetwork<K>) -> f64 {
    let total = net.graph.total_edge_weight();
    if total == 0 {
        return 0.0;
    }
    let within: u64 = net
        .graph
        .edges()
        .filter(|&(s, t, _)| s == t)
        .map(|(_, _, w)| w)
        .sum();
    within as f64 / total as f64
}

/// Destinations of edges leaving `origin`, ranked by share (descending, ties
/// by code). In normalised mode each raw weight is first divided by the
/// destination's population.
pub fn outflow_table(
    net: &CellNetwork<String>,
    origin: &str,
    populations: &BTreeMap<String, f64>,
    normalized: bool,
) -> Result<Vec<(String, f64)>> {
    let o = net
        .index_of(&origin.to_owned())
        .ok_or_else(|| Error::UnknownOrigin(origin.to_owned()))?;
    let mut values = Vec::new();
    for &(t, w) in net.graph.successors(o) {
        let code = &net.keys[t];
        let v = if normalized {
            let pop = populations
                .get(code)
                .copied()
                .filter(|p| *p > 0.0)
                .ok_or_else(|| Error::MissingPopulation(code.clone()))?;
            w as f64 / pop
        } else {
            w as f64
        };
        values.push((code.clone(), v));
    }
    let total: f64 = values.iter().map(|(_, v)| v).sum();
    if total <= 0.0 {
        return Err(Error::Invalid(format!("`{origin}` has no outgoing edges")));
    }
    let mut table: Vec<(String, f64)> = values
        .into_iter()
        .map(|(c, v)| (c, 100.0 * v / total))
        .collect();
    table.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Ok(table)
}

/// Square weight matrix over the units touched by `flows`, for chord plots.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChordMatrix {
    pub codes: Vec<String>,
    /// `matrix[i][j]` = weight of the flow `codes[i] -> codes[j]`.
    pub matrix: Vec<Vec<u64>>,
}

pub fn chord_matrix(flows: &[Flow]) -> ChordMatrix {
    let codes: Vec<String> = flows
        .iter()
        .flat_map(|f| [f.src.clone(), f.dst.clone()])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let idx = |c: &String| codes.binary_search(c).expect("code collected");
    let mut matrix = vec![vec![0; codes.len()]; codes.len()];
    for f in flows {
        matrix[idx(&f.src)][idx(&f.dst)] += f.weight;
    }
    ChordMatrix { codes, matrix }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;

    fn network(codes: &[&str], edges: &[(usize, usize, u64)]) -> CellNetwork<String> {
        let mut b = GraphBuilder::with_nodes(codes.len());
        for &(s, t, w) in edges {
            b.add_edge(s, t, w).unwrap();
        }
        CellNetwork {
            keys: codes.iter().map(|c| c.to_string()).collect(),
            graph: b.build(),
        }
    }

    fn pops(entries: &[(&str, f64)]) -> BTreeMap<String, f64> {
        entries.iter().map(|&(c, p)| (c.to_owned(), p)).collect()
    }

    #[test]
    fn single_country_self_loop() {
        let net = network(&["AT"], &[(0, 0, 12)]);
        let top = top_k_flows(&net, 1).unwrap();
        assert_eq!(top.len(), 1);
        assert_eq!((top[0].src.as_str(), top[0].dst.as_str(), top[0].pct), ("AT", "AT", 100.0));
        let p = pops(&[("AT", 9e6)]);
        for normalized in [false, true] {
            assert_eq!(outflow_table(&net, "AT", &p, normalized).unwrap(), vec![("AT".into(), 100.0)]);
        }
        assert_eq!(within_unit_share(&net), 1.0);
    }

    #[test]
    fn ordering_and_ties() {
        let net = network(&["AT", "DE", "US"], &[(0, 1, 5), (1, 2, 5), (0, 0, 9), (2, 0, 1)]);
        let top = top_k_flows(&net, 3).unwrap();
        let pairs: Vec<_> = top.iter().map(|f| (f.src.as_str(), f.dst.as_str())).collect();
        assert_eq!(pairs, vec![("AT", "AT"), ("AT", "DE"), ("DE", "US")]);
        assert!(top.iter().map(|f| f.pct).sum::<f64>() <= 100.0);
        assert!(top_k_flows(&net, 0).is_err());
    }

    #[test]
    fn two_destination_outflow() {
        let net = network(&["A", "B", "C"], &[(0, 1, 30), (0, 2, 10)]);
        let p = pops(&[("B", 1e6), ("C", 1e5)]);
        let raw = outflow_table(&net, "A", &p, false).unwrap();
        assert_eq!(raw, vec![("B".into(), 75.0), ("C".into(), 25.0)]);
        let norm = outflow_table(&net, "A", &p, true).unwrap();
        // 30/1e6 = 3e-5 and 10/1e5 = 1e-4 -> 3/13 and 10/13
        assert_eq!(norm[0].0, "C");
        assert!((norm[0].1 - 1000.0 / 13.0).abs() < 1e-12);
        assert!((norm[1].1 - 300.0 / 13.0).abs() < 1e-12);
    }

    #[test]
    fn outflow_errors() {
        let net = network(&["A", "B"], &[(0, 1, 3)]);
        assert!(matches!(
            outflow_table(&net, "A", &pops(&[]), true),
            Err(Error::MissingPopulation(c)) if c == "B"
        ));
        assert!(matches!(
            outflow_table(&net, "Z", &pops(&[]), false),
            Err(Error::UnknownOrigin(_))
        ));
    }

    #[test]
    fn chord_matrix_layout() {
        let net = network(&["AT", "DE"], &[(0, 1, 4), (0, 0, 6)]);
        let m = chord_matrix(&top_k_flows(&net, 5).unwrap());
        assert_eq!(m.codes, vec!["AT", "DE"]);
        assert_eq!(m.matrix, vec![vec![6, 4], vec![0, 0]]);
    }
}
