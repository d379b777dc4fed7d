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

//! Pipeline stages. Each stage reads its inputs, writes its artifacts into
//! the output directory and registers both with the run manifest.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use geosocial::aggregate::{
    aggregate_to_countries, aggregate_to_grid, chord_matrix, outflow_table, read_container, subnetwork_by_bbox,
    top_k_flows, within_unit_share, write_grid_container, write_label_container, CellNetwork, Container,
    CountryPolygons, Flow,
};
use geosocial::analysis::{
    adjusted_rand_index, bivariate_bins, community_country_distribution, getis_ord_gi_star, louvain,
    majority_labels, spearman_matrix, CommunityShares, HotSpotClass,
};
use geosocial::centrality::{centrality_table, COLUMN_NAMES};
use geosocial::geo::{fd_histogram, CellGrid, CellId};
use geosocial::ingest::{filter_and_build, load_edges, load_users, Gazetteer, IngestStats, PopulationRaster, UserNetwork};
use geosocial::synth::{generate, load_regions, GroundTruth, SnowballConfig};
use geosocial::{BoundingBox, CentralityTable, HexGrid, SpearmanMatrix};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::manifest::Manifest;

pub const GEOCODED_USERS: &str = "geocoded_users.csv";
pub const GEOCODED_EDGES: &str = "geocoded_edges.csv";
pub const INGEST_STATS: &str = "ingest_stats.json";
pub const CELLS: &str = "cells.gsna";
pub const COUNTRIES: &str = "countries.gsna";
pub const COUNTRY_SUMMARY: &str = "country_aggregation.json";
pub const SUBNET_USERS: &str = "subnet_users.csv";
pub const SUBNET_EDGES: &str = "subnet_edges.csv";
pub const CENTRALITIES: &str = "centralities.csv";
pub const SPEARMAN: &str = "spearman.csv";
pub const BIVARIATE: &str = "bivariate.geojson";
pub const COMMUNITIES: &str = "communities.csv";
pub const COMMUNITY_SUMMARY: &str = "communities.json";
pub const HOTSPOTS: &str = "hotspots.geojson";
pub const FLOWS: &str = "flows.csv";
pub const CHORD: &str = "chord.json";
pub const OUTFLOW: &str = "outflow.csv";
pub const HISTOGRAM: &str = "histogram.csv";
pub const HISTOGRAM_SUMMARY: &str = "histogram.json";
pub const REPORT: &str = "report.json";

/// Per-cell value fed to hot-spot and bivariate analysis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueColumn {
    Users,
    InDeg,
    OutDeg,
    Closeness,
    Betweenness,
}

impl FromStr for ValueColumn {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        Ok(match s {
            "users" => ValueColumn::Users,
            "in_deg" => ValueColumn::InDeg,
            "out_deg" => ValueColumn::OutDeg,
            "closeness" => ValueColumn::Closeness,
            "betweenness" => ValueColumn::Betweenness,
            other => {
                return Err(CliError::invalid(format!(
                    "unknown value column `{other}` (users, in_deg, out_deg, closeness, betweenness)"
                )))
            }
        })
    }
}

impl ValueColumn {
    fn extract(self, graph: &geosocial::DirectedGraph, table: &CentralityTable) -> Vec<f64> {
        match self {
            ValueColumn::Users => graph.node_weights().iter().map(|&w| w as f64).collect(),
            ValueColumn::InDeg => table.in_degree.clone(),
            ValueColumn::OutDeg => table.out_degree.clone(),
            ValueColumn::Closeness => table.closeness.clone(),
            ValueColumn::Betweenness => table.betweenness.clone(),
        }
    }
}

fn write_text(path: &Path, text: &str, m: &mut Manifest) -> CliResult<()> {
    std::fs::write(path, text)?;
    m.output(path);
    Ok(())
}

fn write_json(path: &Path, value: &impl Serialize, m: &mut Manifest) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text, m)
}

pub fn synth(snowball: &Path, regions: &Path, seed: Option<u64>, out: &Path, m: &mut Manifest) -> CliResult<()> {
    m.input(snowball);
    m.input(regions);
    let text = std::fs::read_to_string(snowball)?;
    let mut config: SnowballConfig =
        serde_json::from_str(&text).map_err(|e| CliError::invalid(format!("{}: {e}", snowball.display())))?;
    if let Some(seed) = seed {
        config.rng_seed = seed;
    }
    m.param("rng_seed", config.rng_seed);
    let regions = load_regions(regions)?;
    let crawl = generate(&config, &regions)?;
    crawl.write_to(out)?;
    use geosocial::synth::{EDGES_FILE, GAZETTEER_FILE, GROUND_TRUTH_FILE, POPULATION_FILE, USERS_FILE};
    for f in [USERS_FILE, EDGES_FILE, GAZETTEER_FILE, POPULATION_FILE, GROUND_TRUTH_FILE] {
        m.output(&out.join(f));
    }
    Ok(())
}

pub struct IngestInputs {
    pub users: PathBuf,
    pub edges: PathBuf,
    pub gazetteer: PathBuf,
    pub population: PathBuf,
}

pub fn ingest(inputs: &IngestInputs, out: &Path, m: &mut Manifest) -> CliResult<(UserNetwork, IngestStats)> {
    for p in [&inputs.users, &inputs.edges, &inputs.gazetteer, &inputs.population] {
        m.input(p);
    }
    let users = load_users(&inputs.users)?;
    let edges = load_edges(&inputs.edges)?;
    let gazetteer = Gazetteer::load(&inputs.gazetteer)?;
    let population = PopulationRaster::load(&inputs.population)?;
    let (net, stats) = filter_and_build(&users, &edges, &gazetteer, &population);
    let (u, e) = (out.join(GEOCODED_USERS), out.join(GEOCODED_EDGES));
    net.save(&u, &e)?;
    m.output(&u);
    m.output(&e);
    write_json(&out.join(INGEST_STATS), &stats, m)?;
    Ok((net, stats))
}

pub fn load_network(users: &Path, edges: &Path, m: &mut Manifest) -> CliResult<UserNetwork> {
    m.input(users);
    m.input(edges);
    Ok(UserNetwork::load(users, edges)?)
}

pub fn aggregate_grid(net: &UserNetwork, area_km2: f64, path: &Path, m: &mut Manifest) -> CliResult<CellNetwork<CellId>> {
    let grid = HexGrid::new(area_km2)?;
    let cells = aggregate_to_grid(net, &grid);
    write_grid_container(BufWriter::new(std::fs::File::create(path)?), area_km2, &cells)?;
    m.output(path);
    Ok(cells)
}

#[derive(Clone, Debug, Serialize)]
pub struct CountrySummary {
    pub countries: usize,
    pub assigned_users: u64,
    pub assigned_edges: u64,
    pub unassigned_users: u64,
    pub unassigned_edges: u64,
    /// Share of assigned edges whose endpoints lie in the same country.
    pub within_nation_share: f64,
}

pub fn aggregate_countries(
    net: &UserNetwork,
    countries: &Path,
    path: &Path,
    summary_path: &Path,
    m: &mut Manifest,
) -> CliResult<(CellNetwork<String>, CountrySummary)> {
    m.input(countries);
    let polygons = CountryPolygons::load(countries)?;
    let agg = aggregate_to_countries(net, &polygons);
    write_label_container(BufWriter::new(std::fs::File::create(path)?), &agg.network)?;
    m.output(path);
    let summary = CountrySummary {
        countries: agg.network.len(),
        assigned_users: agg.network.graph.total_node_weight(),
        assigned_edges: agg.network.graph.total_edge_weight(),
        unassigned_users: agg.unassigned_users,
        unassigned_edges: agg.unassigned_edges,
        within_nation_share: within_unit_share(&agg.network),
    };
    write_json(summary_path, &summary, m)?;
    Ok((agg.network, summary))
}

pub fn subnet(net: &UserNetwork, bbox: &BoundingBox, out: &Path, m: &mut Manifest) -> CliResult<UserNetwork> {
    let sub = subnetwork_by_bbox(net, bbox);
    let (u, e) = (out.join(SUBNET_USERS), out.join(SUBNET_EDGES));
    sub.save(&u, &e)?;
    m.output(&u);
    m.output(&e);
    Ok(sub)
}

pub fn load_container(path: &Path, m: &mut Manifest) -> CliResult<Container> {
    m.input(path);
    let file = std::fs::File::open(path)?;
    Ok(read_container(std::io::BufReader::new(file))?)
}

pub fn centrality(container: &Container, weighted: bool, path: &Path, m: &mut Manifest) -> CliResult<CentralityTable> {
    let table: CentralityTable = centrality_table(container.graph(), weighted)?;
    let mut text = format!("cell,{}\n", COLUMN_NAMES.join(","));
    for (i, label) in container.labels().iter().enumerate() {
        writeln!(
            text,
            "{label},{},{},{},{}",
            table.in_degree[i], table.out_degree[i], table.closeness[i], table.betweenness[i]
        )
        .expect("string write");
    }
    write_text(path, &text, m)?;
    Ok(table)
}

pub fn spearman(table: &CentralityTable, path: &Path, m: &mut Manifest) -> CliResult<SpearmanMatrix> {
    let matrix = spearman_matrix(table)?;
    let mut text = format!("column,{}\n", matrix.names.join(","));
    for (name, row) in matrix.names.iter().zip(&matrix.values) {
        let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
        writeln!(text, "{name},{}", cells.join(",")).expect("string write");
    }
    write_text(path, &text, m)?;
    Ok(matrix)
}

fn cell_feature(grid: &HexGrid, cell: CellId, properties: Value) -> Value {
    let ring: Vec<[f64; 2]> = grid.cell_polygon(cell).iter().map(|p| [p.lon(), p.lat()]).collect();
    json!({
        "type": "Feature",
        "properties": properties,
        "geometry": { "type": "Polygon", "coordinates": [ring] },
    })
}

fn write_feature_collection(path: &Path, features: Vec<Value>, m: &mut Manifest) -> CliResult<()> {
    let doc = json!({ "type": "FeatureCollection", "features": features });
    let mut text = serde_json::to_string(&doc)?;
    text.push('\n');
    write_text(path, &text, m)
}

pub fn bivariate(
    container: &Container,
    table: &CentralityTable,
    columns: (ValueColumn, ValueColumn),
    path: &Path,
    m: &mut Manifest,
) -> CliResult<BTreeMap<String, usize>> {
    let (grid, cells) = container.grid()?;
    let a = columns.0.extract(&cells.graph, table);
    let b = columns.1.extract(&cells.graph, table);
    let classes = bivariate_bins(&a, &b)?;
    let mut counts = BTreeMap::new();
    let features = cells
        .keys
        .iter()
        .enumerate()
        .map(|(i, &cell)| {
            let (ca, cb) = classes[i];
            *counts.entry(format!("{}-{}", ca.as_str(), cb.as_str())).or_insert(0) += 1;
            cell_feature(
                &grid,
                cell,
                json!({
                    "cell": cell.to_string(),
                    "value_a": a[i],
                    "value_b": b[i],
                    "class_a": ca.as_str(),
                    "class_b": cb.as_str(),
                }),
            )
        })
        .collect();
    write_feature_collection(path, features, m)?;
    Ok(counts)
}

#[derive(Clone, Debug, Serialize)]
pub struct CommunitySummary {
    pub cells: usize,
    pub communities: usize,
    pub modularity: f64,
    pub sizes: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub country_shares: Option<Vec<SharesRow>>,
    /// Adjusted Rand index against the planted majority language per cell.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub language_ari: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SharesRow {
    pub community: usize,
    pub cells: usize,
    pub shares: BTreeMap<String, f64>,
}

impl From<CommunityShares> for SharesRow {
    fn from(s: CommunityShares) -> Self {
        Self {
            community: s.community,
            cells: s.cells,
            shares: s.shares,
        }
    }
}

pub struct CommunityOptions<'a> {
    pub seed: u64,
    pub countries: Option<&'a CountryPolygons>,
    /// Geocoded users behind a grid network. With them, a cell's country is
    /// the majority country of its users instead of the one under its
    /// centroid.
    pub users: Option<&'a UserNetwork>,
    /// Planted structure; needs `users`.
    pub truth: Option<&'a GroundTruth>,
}

/// Container index of every user's cell.
fn user_cells(grid: &HexGrid, cells: &CellNetwork<CellId>, users: &UserNetwork) -> Vec<Option<usize>> {
    users
        .points
        .iter()
        .map(|p| cells.index_of(&grid.cell_for_point(p)))
        .collect()
}

pub fn communities(
    container: &Container,
    options: &CommunityOptions<'_>,
    csv_path: &Path,
    summary_path: &Path,
    m: &mut Manifest,
) -> CliResult<CommunitySummary> {
    let graph = container.graph();
    if graph.is_empty() {
        return Err(CliError::invalid("community detection needs a nonempty network"));
    }
    let result = louvain(graph, options.seed);
    let labels = container.labels();
    let mut text = String::from("cell,community\n");
    for (label, c) in labels.iter().zip(&result.assignment.membership) {
        writeln!(text, "{label},{c}").expect("string write");
    }
    write_text(csv_path, &text, m)?;

    let country_of_cell: Option<Vec<Option<String>>> = match (container, options.countries) {
        (Container::Labelled(net), _) => Some(net.keys.iter().cloned().map(Some).collect()),
        (Container::Grid { .. }, Some(polygons)) => {
            let (grid, cells) = container.grid()?;
            Some(match options.users {
                Some(users) => {
                    let members = user_cells(&grid, cells, users)
                        .into_iter()
                        .zip(&users.points)
                        .filter_map(|(c, p)| Some((c?, polygons.country_of(p)?.to_owned())));
                    majority_labels(cells.len(), members)
                }
                None => cells
                    .keys
                    .iter()
                    .map(|&c| polygons.country_of(&grid.cell_centroid(c)).map(str::to_owned))
                    .collect(),
            })
        }
        (Container::Grid { .. }, None) => None,
    };
    let country_shares = match country_of_cell {
        Some(c) => Some(
            community_country_distribution(&result.assignment, &c)?
                .into_iter()
                .map(SharesRow::from)
                .collect(),
        ),
        None => None,
    };
    let language_ari = match (options.truth, options.users) {
        (Some(truth), Some(users)) => {
            let (grid, cells) = container.grid()?;
            let language = truth.language_of_users();
            let members = user_cells(&grid, cells, users)
                .into_iter()
                .zip(&users.user_ids)
                .filter_map(|(c, id)| Some((c?, *language.get(id.as_str())?)));
            let majority = majority_labels(cells.len(), members);
            let (ours, theirs): (Vec<usize>, Vec<&str>) = result
                .assignment
                .membership
                .iter()
                .zip(&majority)
                .filter_map(|(&c, l)| Some((c, (*l)?)))
                .unzip();
            Some(adjusted_rand_index(&ours, &theirs)?)
        }
        (Some(_), None) => return Err(CliError::invalid("ground truth needs the geocoded users")),
        (None, _) => None,
    };
    let summary = CommunitySummary {
        cells: labels.len(),
        communities: result.assignment.community_count(),
        modularity: result.modularity,
        sizes: result.assignment.sizes.clone(),
        country_shares,
        language_ari,
    };
    write_json(summary_path, &summary, m)?;
    Ok(summary)
}

pub fn hotspots(
    container: &Container,
    table: &CentralityTable,
    value: ValueColumn,
    k: usize,
    path: &Path,
    m: &mut Manifest,
) -> CliResult<BTreeMap<&'static str, usize>> {
    let (grid, cells) = container.grid()?;
    let values = value.extract(&cells.graph, table);
    let centroids: Vec<_> = cells.keys.iter().map(|&c| grid.cell_centroid(c)).collect();
    let result = getis_ord_gi_star(&values, &centroids, k)?;
    let mut counts: BTreeMap<&'static str, usize> = BTreeMap::new();
    let features = cells
        .keys
        .iter()
        .enumerate()
        .map(|(i, &cell)| {
            let class: HotSpotClass = result.class[i];
            *counts.entry(class.as_str()).or_insert(0) += 1;
            cell_feature(
                &grid,
                cell,
                json!({
                    "cell": cell.to_string(),
                    "value": values[i],
                    "z": result.z[i],
                    "class": class.as_str(),
                }),
            )
        })
        .collect();
    write_feature_collection(path, features, m)?;
    Ok(counts)
}

#[derive(Clone, Debug, Serialize)]
pub struct FlowSummary {
    pub top: Vec<Flow>,
    pub origin: String,
    pub outflow_raw: Vec<(String, f64)>,
    pub outflow_normalized: Vec<(String, f64)>,
}

pub fn flows(
    container: &Container,
    top_k: usize,
    origin: &str,
    populations: &BTreeMap<String, f64>,
    out: &Path,
    m: &mut Manifest,
) -> CliResult<FlowSummary> {
    let net = container.labelled()?;
    let top = top_k_flows(net, top_k)?;
    let mut text = String::from("src,dst,weight,pct\n");
    for f in &top {
        writeln!(text, "{},{},{},{}", f.src, f.dst, f.weight, f.pct).expect("string write");
    }
    write_text(&out.join(FLOWS), &text, m)?;
    write_json(&out.join(CHORD), &chord_matrix(&top), m)?;

    let raw = outflow_table(net, origin, populations, false)?;
    let normalized = outflow_table(net, origin, populations, true)?;
    let mut text = String::from("mode,rank,dst,pct\n");
    for (mode, table) in [("raw", &raw), ("normalized", &normalized)] {
        for (rank, (code, pct)) in table.iter().enumerate() {
            writeln!(text, "{mode},{},{code},{pct}", rank + 1).expect("string write");
        }
    }
    write_text(&out.join(OUTFLOW), &text, m)?;
    Ok(FlowSummary {
        top,
        origin: origin.to_owned(),
        outflow_raw: raw,
        outflow_normalized: normalized,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct HistogramSummary {
    pub edges: usize,
    pub origin_km: f64,
    pub bin_width_km: f64,
    pub bins: usize,
    pub mode_center_km: f64,
    pub mean_km: f64,
    pub median_km: f64,
    pub skewness: f64,
}

fn skewness(samples: &[f64]) -> f64 {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let m2 = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let m3 = samples.iter().map(|x| (x - mean).powi(3)).sum::<f64>() / n;
    if m2 == 0.0 {
        0.0
    } else {
        m3 / m2.powf(1.5)
    }
}

pub fn histogram(net: &UserNetwork, out: &Path, m: &mut Manifest) -> CliResult<HistogramSummary> {
    let mut lengths = net.edge_lengths_km();
    let hist = fd_histogram(&lengths)?;
    let mut text = String::from("bin_start_km,bin_end_km,fraction\n");
    for (lo, hi, f) in hist.bins() {
        writeln!(text, "{lo},{hi},{f}").expect("string write");
    }
    write_text(&out.join(HISTOGRAM), &text, m)?;
    lengths.sort_by(f64::total_cmp);
    let summary = HistogramSummary {
        edges: lengths.len(),
        origin_km: hist.origin,
        bin_width_km: hist.bin_width,
        bins: hist.fractions.len(),
        mode_center_km: hist.mode_center(),
        mean_km: lengths.iter().sum::<f64>() / lengths.len() as f64,
        median_km: geosocial::geo::quantile(&lengths, 0.5),
        skewness: skewness(&lengths),
    };
    write_json(&out.join(HISTOGRAM_SUMMARY), &summary, m)?;
    Ok(summary)
}
