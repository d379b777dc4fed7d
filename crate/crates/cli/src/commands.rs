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

//! Resolves flags against the config and dispatches to the stages.

use std::path::{Path, PathBuf};

use geosocial::aggregate::{Container, CountryPolygons};
use geosocial::synth::GroundTruth;
use geosocial::BoundingBox;
use serde_json::json;

use crate::config::{
    input_file, positive, required, PipelineConfig, DEFAULT_AOI_AREA_KM2, DEFAULT_GI_K, DEFAULT_GLOBAL_AREA_KM2,
    DEFAULT_ORIGIN, DEFAULT_TOP_K,
};
use crate::error::{CliError, CliResult};
use crate::manifest::Manifest;
use crate::stages::{self, CommunityOptions, IngestInputs, ValueColumn};
use crate::{Cli, Command, NetworkArgs};

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Synth { .. } => "synth",
        Command::Ingest { .. } => "ingest",
        Command::Aggregate { .. } => "aggregate",
        Command::Subnet { .. } => "subnet",
        Command::Centrality { .. } => "centrality",
        Command::Spearman { .. } => "spearman",
        Command::Bivariate { .. } => "bivariate",
        Command::Communities { .. } => "communities",
        Command::Hotspots { .. } => "hotspots",
        Command::Flows { .. } => "flows",
        Command::Histogram { .. } => "histogram",
        Command::Report { .. } => "report",
    }
}

/// An existing file given by flag, else `<out>/<default_name>`.
fn stage_input(flag: Option<PathBuf>, out: &Path, default_name: &str) -> CliResult<PathBuf> {
    let path = flag.unwrap_or_else(|| out.join(default_name));
    if !path.is_file() {
        return Err(CliError::invalid(format!("input {} does not exist", path.display())));
    }
    Ok(path)
}

fn network_inputs(args: NetworkArgs, out: &Path) -> CliResult<(PathBuf, PathBuf)> {
    Ok((
        stage_input(args.users, out, stages::GEOCODED_USERS)?,
        stage_input(args.edges, out, stages::GEOCODED_EDGES)?,
    ))
}

fn parse_bbox(text: &str) -> CliResult<BoundingBox> {
    text.parse().map_err(|e: geosocial::Error| CliError::invalid(format!("--bbox: {e}")))
}

pub fn run(cli: Cli) -> CliResult<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::invalid("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    let cfg = match &cli.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    let out = cli.out.clone();
    let name = command_name(&cli.command);
    let mut m = Manifest::new(name);
    if let Some(path) = &cli.config {
        m.input(path);
    }
    // validate inputs before touching the output directory
    let job = prepare(cli.command, &cfg, &out, &mut m)?;
    std::fs::create_dir_all(&out)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", out.display())))?;
    job(&out, &mut m)?;
    let manifest_path = cli.manifest.unwrap_or_else(|| out.join(format!("{name}.manifest.json")));
    m.write(&manifest_path, &out)
}

type Job<'a> = Box<dyn FnOnce(&Path, &mut Manifest) -> CliResult<()> + 'a>;

fn weighted_param(flag: bool, cfg: &PipelineConfig) -> bool {
    flag || cfg.weighted_degree.unwrap_or(false)
}

fn louvain_seed(flag: Option<u64>, cfg: &PipelineConfig) -> u64 {
    flag.or(cfg.louvain_seed).unwrap_or(0)
}

fn prepare<'a>(command: Command, cfg: &'a PipelineConfig, out: &Path, m: &mut Manifest) -> CliResult<Job<'a>> {
    Ok(match command {
        Command::Synth { snowball, regions, seed } => {
            let snowball = input_file(snowball, &cfg.snowball, "snowball")?;
            let regions = input_file(regions, &cfg.regions, "regions")?;
            Box::new(move |out, m| stages::synth(&snowball, &regions, seed, out, m))
        }
        Command::Ingest {
            users,
            edges,
            gazetteer,
            population,
        } => {
            let inputs = ingest_inputs(users, edges, gazetteer, population, cfg)?;
            Box::new(move |out, m| stages::ingest(&inputs, out, m).map(drop))
        }
        Command::Aggregate {
            grid,
            countries,
            area,
            country_file,
            network,
        } => {
            let (u, e) = network_inputs(network, out)?;
            if grid {
                let area = positive("--area", area.or(cfg.global_area_km2).unwrap_or(DEFAULT_GLOBAL_AREA_KM2))?;
                m.param("grid_area_km2", area);
                Box::new(move |out, m| {
                    let net = stages::load_network(&u, &e, m)?;
                    stages::aggregate_grid(&net, area, &out.join(stages::CELLS), m).map(drop)
                })
            } else {
                debug_assert!(countries);
                let polygons = input_file(country_file, &cfg.countries, "country-file")?;
                Box::new(move |out, m| {
                    let net = stages::load_network(&u, &e, m)?;
                    stages::aggregate_countries(
                        &net,
                        &polygons,
                        &out.join(stages::COUNTRIES),
                        &out.join(stages::COUNTRY_SUMMARY),
                        m,
                    )
                    .map(drop)
                })
            }
        }
        Command::Subnet { bbox, network } => {
            let (u, e) = network_inputs(network, out)?;
            let text = required(bbox, &cfg.aoi_bbox, "bbox")?;
            let bbox = parse_bbox(&text)?;
            m.param("bbox", [bbox.min_lat, bbox.max_lat, bbox.min_lon, bbox.max_lon]);
            Box::new(move |out, m| {
                let net = stages::load_network(&u, &e, m)?;
                stages::subnet(&net, &bbox, out, m).map(drop)
            })
        }
        Command::Centrality { network, weighted } => {
            let path = stage_input(network, out, stages::CELLS)?;
            let weighted = weighted_param(weighted, cfg);
            m.param("weighted_degree", weighted);
            Box::new(move |out, m| {
                let c = stages::load_container(&path, m)?;
                stages::centrality(&c, weighted, &out.join(stages::CENTRALITIES), m).map(drop)
            })
        }
        Command::Spearman { network, weighted } => {
            let path = stage_input(network, out, stages::CELLS)?;
            let weighted = weighted_param(weighted, cfg);
            m.param("weighted_degree", weighted);
            Box::new(move |out, m| {
                let c = stages::load_container(&path, m)?;
                let table = geosocial::centrality::centrality_table(c.graph(), weighted)?;
                stages::spearman(&table, &out.join(stages::SPEARMAN), m).map(drop)
            })
        }
        Command::Bivariate { network, a, b, weighted } => {
            let path = stage_input(network, out, stages::CELLS)?;
            let columns: (ValueColumn, ValueColumn) = (a.parse()?, b.parse()?);
            let weighted = weighted_param(weighted, cfg);
            m.param("columns", [columns.0, columns.1]);
            m.param("weighted_degree", weighted);
            Box::new(move |out, m| {
                let c = stages::load_container(&path, m)?;
                let table = geosocial::centrality::centrality_table(c.graph(), weighted)?;
                stages::bivariate(&c, &table, columns, &out.join(stages::BIVARIATE), m).map(drop)
            })
        }
        Command::Communities {
            network,
            seed,
            country_file,
            ground_truth,
            users,
        } => {
            let path = stage_input(network, out, stages::CELLS)?;
            let seed = louvain_seed(seed, cfg);
            m.param("louvain_seed", seed);
            let polygons = match country_file.or_else(|| cfg.countries.clone()) {
                Some(p) => Some(input_file(Some(p), &None, "country-file")?),
                None => None,
            };
            let truth = match ground_truth.or_else(|| cfg.ground_truth.clone()) {
                Some(p) => Some(input_file(Some(p), &None, "ground-truth")?),
                None => None,
            };
            // the users table is optional unless ground truth needs it
            let user_tables = match (&users.users, &users.edges, &truth) {
                (None, None, None) => {
                    let (u, e) = (out.join(stages::GEOCODED_USERS), out.join(stages::GEOCODED_EDGES));
                    (u.is_file() && e.is_file()).then_some((u, e))
                }
                _ => Some(network_inputs(users, out)?),
            };
            Box::new(move |out, m| {
                let c = stages::load_container(&path, m)?;
                let polygons = polygons.map(|p| load_polygons(&p, m)).transpose()?;
                let net = match user_tables {
                    Some((u, e)) if matches!(c, Container::Grid { .. }) => Some(stages::load_network(&u, &e, m)?),
                    _ => None,
                };
                let truth = match truth {
                    Some(t) => {
                        m.input(&t);
                        Some(GroundTruth::load(&t)?)
                    }
                    None => None,
                };
                let options = CommunityOptions {
                    seed,
                    countries: polygons.as_ref(),
                    users: net.as_ref(),
                    truth: truth.as_ref(),
                };
                stages::communities(
                    &c,
                    &options,
                    &out.join(stages::COMMUNITIES),
                    &out.join(stages::COMMUNITY_SUMMARY),
                    m,
                )
                .map(drop)
            })
        }
        Command::Hotspots {
            network,
            k,
            value,
            weighted,
        } => {
            let path = stage_input(network, out, stages::CELLS)?;
            let k = k.or(cfg.gi_k).unwrap_or(DEFAULT_GI_K);
            if k == 0 {
                return Err(CliError::invalid("--k must be positive"));
            }
            let value: ValueColumn = value
                .or_else(|| cfg.hotspot_value.clone())
                .unwrap_or_else(|| "betweenness".into())
                .parse()?;
            let weighted = weighted_param(weighted, cfg);
            m.param("k", k);
            m.param("value", value);
            m.param("weighted_degree", weighted);
            Box::new(move |out, m| {
                let c = stages::load_container(&path, m)?;
                let table = geosocial::centrality::centrality_table(c.graph(), weighted)?;
                stages::hotspots(&c, &table, value, k, &out.join(stages::HOTSPOTS), m).map(drop)
            })
        }
        Command::Flows {
            network,
            top_k,
            origin,
            country_file,
        } => {
            let path = stage_input(network, out, stages::COUNTRIES)?;
            let top_k = top_k.or(cfg.top_k).unwrap_or(DEFAULT_TOP_K);
            if top_k == 0 {
                return Err(CliError::invalid("--top-k must be positive"));
            }
            let origin = origin.or_else(|| cfg.origin.clone()).unwrap_or_else(|| DEFAULT_ORIGIN.into());
            let polygons = input_file(country_file, &cfg.countries, "country-file")?;
            m.param("top_k", top_k);
            m.param("origin", &origin);
            Box::new(move |out, m| {
                let c = stages::load_container(&path, m)?;
                let populations = load_polygons(&polygons, m)?.populations();
                stages::flows(&c, top_k, &origin, &populations, out, m).map(drop)
            })
        }
        Command::Histogram { network } => {
            let (u, e) = network_inputs(network, out)?;
            Box::new(move |out, m| {
                let net = stages::load_network(&u, &e, m)?;
                stages::histogram(&net, out, m).map(drop)
            })
        }
        Command::Report {
            users,
            edges,
            gazetteer,
            population,
            country_file,
            ground_truth,
        } => {
            let inputs = ingest_inputs(users, edges, gazetteer, population, cfg)?;
            let polygons = input_file(country_file, &cfg.countries, "country-file")?;
            let truth = match ground_truth.or_else(|| cfg.ground_truth.clone()) {
                Some(p) => Some(input_file(Some(p), &None, "ground-truth")?),
                None => None,
            };
            let params = ReportParams::resolve(cfg)?;
            params.record(m);
            Box::new(move |out, m| report(&inputs, &polygons, truth.as_deref(), &params, out, m))
        }
    })
}

fn load_polygons(path: &Path, m: &mut Manifest) -> CliResult<CountryPolygons> {
    m.input(path);
    Ok(CountryPolygons::load(path)?)
}

fn ingest_inputs(
    users: Option<PathBuf>,
    edges: Option<PathBuf>,
    gazetteer: Option<PathBuf>,
    population: Option<PathBuf>,
    cfg: &PipelineConfig,
) -> CliResult<IngestInputs> {
    Ok(IngestInputs {
        users: input_file(users, &cfg.users, "users")?,
        edges: input_file(edges, &cfg.edges, "edges")?,
        gazetteer: input_file(gazetteer, &cfg.gazetteer, "gazetteer")?,
        population: input_file(population, &cfg.population, "population")?,
    })
}

struct ReportParams {
    global_area: f64,
    aoi_area: f64,
    aoi_bbox: BoundingBox,
    gi_k: usize,
    seed: u64,
    top_k: usize,
    weighted: bool,
    origin: String,
    hotspot_value: ValueColumn,
}

impl ReportParams {
    fn resolve(cfg: &PipelineConfig) -> CliResult<Self> {
        Ok(Self {
            global_area: cfg.global_area_km2.unwrap_or(DEFAULT_GLOBAL_AREA_KM2),
            aoi_area: cfg.aoi_area_km2.unwrap_or(DEFAULT_AOI_AREA_KM2),
            aoi_bbox: match &cfg.aoi_bbox {
                Some(t) => parse_bbox(t)?,
                None => BoundingBox::europe(),
            },
            gi_k: cfg.gi_k.unwrap_or(DEFAULT_GI_K),
            seed: louvain_seed(None, cfg),
            top_k: cfg.top_k.unwrap_or(DEFAULT_TOP_K),
            weighted: weighted_param(false, cfg),
            origin: cfg.origin.clone().unwrap_or_else(|| DEFAULT_ORIGIN.into()),
            hotspot_value: cfg.hotspot_value.as_deref().unwrap_or("betweenness").parse()?,
        })
    }

    fn record(&self, m: &mut Manifest) {
        let b = &self.aoi_bbox;
        m.param("global_area_km2", self.global_area);
        m.param("aoi_area_km2", self.aoi_area);
        m.param("aoi_bbox", [b.min_lat, b.max_lat, b.min_lon, b.max_lon]);
        m.param("gi_k", self.gi_k);
        m.param("louvain_seed", self.seed);
        m.param("top_k", self.top_k);
        m.param("weighted_degree", self.weighted);
        m.param("origin", &self.origin);
        m.param("hotspot_value", self.hotspot_value);
    }
}

fn report(
    inputs: &IngestInputs,
    polygons_path: &Path,
    truth_path: Option<&Path>,
    p: &ReportParams,
    out: &Path,
    m: &mut Manifest,
) -> CliResult<()> {
    let (net, ingest) = stages::ingest(inputs, out, m)?;
    let polygons = load_polygons(polygons_path, m)?;
    let truth = match truth_path {
        Some(t) => {
            m.input(t);
            Some(GroundTruth::load(t)?)
        }
        None => None,
    };

    let (countries, country_summary) = stages::aggregate_countries(
        &net,
        polygons_path,
        &out.join(stages::COUNTRIES),
        &out.join(stages::COUNTRY_SUMMARY),
        m,
    )?;
    let flows = stages::flows(
        &Container::Labelled(countries),
        p.top_k,
        &p.origin,
        &polygons.populations(),
        out,
        m,
    )?;
    let histogram = stages::histogram(&net, out, m)?;

    let cells = stages::aggregate_grid(&net, p.global_area, &out.join(stages::CELLS), m)?;
    let global = Container::Grid {
        cell_area_km2: p.global_area,
        network: cells,
    };
    let table = stages::centrality(&global, p.weighted, &out.join(stages::CENTRALITIES), m)?;
    let spearman = stages::spearman(&table, &out.join(stages::SPEARMAN), m)?;
    let bivariate = stages::bivariate(
        &global,
        &table,
        (ValueColumn::Closeness, ValueColumn::Betweenness),
        &out.join(stages::BIVARIATE),
        m,
    )?;
    let options = CommunityOptions {
        seed: p.seed,
        countries: Some(&polygons),
        users: Some(&net),
        truth: truth.as_ref(),
    };
    let communities = stages::communities(
        &global,
        &options,
        &out.join(stages::COMMUNITIES),
        &out.join(stages::COMMUNITY_SUMMARY),
        m,
    )?;
    let hotspots = stages::hotspots(&global, &table, p.hotspot_value, p.gi_k, &out.join(stages::HOTSPOTS), m)?;

    let sub = stages::subnet(&net, &p.aoi_bbox, out, m)?;
    let aoi_cells = stages::aggregate_grid(&sub, p.aoi_area, &out.join("aoi_cells.gsna"), m)?;
    let aoi = Container::Grid {
        cell_area_km2: p.aoi_area,
        network: aoi_cells,
    };
    let aoi_table = stages::centrality(&aoi, p.weighted, &out.join("aoi_centralities.csv"), m)?;
    let aoi_options = CommunityOptions {
        seed: p.seed,
        countries: Some(&polygons),
        users: Some(&sub),
        truth: None,
    };
    let aoi_communities = stages::communities(
        &aoi,
        &aoi_options,
        &out.join("aoi_communities.csv"),
        &out.join("aoi_communities.json"),
        m,
    )?;

    let doc = json!({
        "ingest": ingest,
        "countries": country_summary,
        "flows": flows,
        "edge_lengths": histogram,
        "global_grid": {
            "cell_area_km2": p.global_area,
            "cells": table.len(),
            "spearman": { "names": spearman.names, "values": spearman.values },
            "bivariate_classes": bivariate,
            "communities": communities,
            "hotspots": hotspots,
        },
        "aoi": {
            "cell_area_km2": p.aoi_area,
            "users": sub.user_count(),
            "edges": sub.edge_count(),
            "cells": aoi_table.len(),
            "communities": aoi_communities,
        },
    });
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    let path = out.join(stages::REPORT);
    std::fs::write(&path, text)?;
    m.output(&path);
    Ok(())
}
