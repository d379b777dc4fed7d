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

//! `geosocial`: batch pipeline over georeferenced follower networks.
//!
//! Stages run one per invocation (`ingest`, `aggregate`, `centrality`, ...)
//! or all at once (`report`). Every invocation writes its artifacts into
//! `--out` together with a `<command>.manifest.json` that hashes inputs and
//! outputs. Exit status: 0 success, 1 runtime failure, 2 invalid input or
//! configuration, 64 unknown subcommand.

mod commands;
mod config;
mod error;
mod manifest;
mod stages;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "geosocial", version, about = "Spatial-social analysis of georeferenced follower networks")]
pub struct Cli {
    /// JSON pipeline configuration; flags override its fields.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory (created if missing).
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Manifest path (default: <out>/<command>.manifest.json).
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Default)]
pub struct NetworkArgs {
    /// Geocoded users table (default: <out>/geocoded_users.csv).
    #[arg(long)]
    pub users: Option<PathBuf>,
    /// Geocoded edges table (default: <out>/geocoded_edges.csv).
    #[arg(long)]
    pub edges: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic snowball crawl.
    Synth {
        #[arg(long)]
        snowball: Option<PathBuf>,
        #[arg(long)]
        regions: Option<PathBuf>,
        /// Overrides the generator's rng_seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Geocode and filter raw users and edges.
    Ingest {
        #[arg(long)]
        users: Option<PathBuf>,
        #[arg(long)]
        edges: Option<PathBuf>,
        #[arg(long)]
        gazetteer: Option<PathBuf>,
        #[arg(long)]
        population: Option<PathBuf>,
    },
    /// Aggregate the geocoded network onto hex cells or countries.
    Aggregate {
        #[arg(long, conflicts_with = "countries", required_unless_present = "countries")]
        grid: bool,
        #[arg(long)]
        countries: bool,
        /// Cell area in km² (default: global_area_km2, then 80000).
        #[arg(long)]
        area: Option<f64>,
        /// Country polygons GeoJSON.
        #[arg(long)]
        country_file: Option<PathBuf>,
        #[command(flatten)]
        network: NetworkArgs,
    },
    /// Keep the users inside a bounding box and the edges between them.
    Subnet {
        /// min_lat,max_lat,min_lon,max_lon
        #[arg(long, allow_hyphen_values = true)]
        bbox: Option<String>,
        #[command(flatten)]
        network: NetworkArgs,
    },
    /// Degree, closeness and betweenness per unit.
    Centrality {
        #[arg(long)]
        network: Option<PathBuf>,
        #[arg(long)]
        weighted: bool,
    },
    /// Spearman matrix of the centralities.
    Spearman {
        #[arg(long)]
        network: Option<PathBuf>,
        #[arg(long)]
        weighted: bool,
    },
    /// Joint 3x3 classes of two cell values.
    Bivariate {
        #[arg(long)]
        network: Option<PathBuf>,
        #[arg(long, default_value = "closeness")]
        a: String,
        #[arg(long, default_value = "betweenness")]
        b: String,
        #[arg(long)]
        weighted: bool,
    },
    /// Louvain communities.
    Communities {
        #[arg(long)]
        network: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Country polygons for per-community country shares.
        #[arg(long)]
        country_file: Option<PathBuf>,
        /// Synthetic ground truth; reports the ARI against planted languages.
        #[arg(long)]
        ground_truth: Option<PathBuf>,
        #[command(flatten)]
        users: NetworkArgs,
    },
    /// Getis-Ord Gi* hot spots.
    Hotspots {
        #[arg(long)]
        network: Option<PathBuf>,
        #[arg(long)]
        k: Option<usize>,
        /// users, in_deg, out_deg, closeness or betweenness.
        #[arg(long)]
        value: Option<String>,
        #[arg(long)]
        weighted: bool,
    },
    /// Top flows, chord matrix and outflow tables between countries.
    Flows {
        #[arg(long)]
        network: Option<PathBuf>,
        #[arg(long)]
        top_k: Option<usize>,
        #[arg(long)]
        origin: Option<String>,
        /// Country polygons GeoJSON (for populations).
        #[arg(long)]
        country_file: Option<PathBuf>,
    },
    /// Freedman-Diaconis histogram of edge lengths.
    Histogram {
        #[command(flatten)]
        network: NetworkArgs,
    },
    /// Run the whole pipeline and bundle the results.
    Report {
        #[arg(long)]
        users: Option<PathBuf>,
        #[arg(long)]
        edges: Option<PathBuf>,
        #[arg(long)]
        gazetteer: Option<PathBuf>,
        #[arg(long)]
        population: Option<PathBuf>,
        #[arg(long)]
        country_file: Option<PathBuf>,
        #[arg(long)]
        ground_truth: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                ErrorKind::InvalidSubcommand
                | ErrorKind::MissingSubcommand
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 64,
                _ => 2,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
