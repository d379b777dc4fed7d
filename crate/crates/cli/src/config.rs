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

//! JSON pipeline configuration. Relative paths resolve against the config
//! file's directory; command-line flags take precedence over every field.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{CliError, CliResult};

pub const DEFAULT_GLOBAL_AREA_KM2: f64 = 80_000.0;
pub const DEFAULT_AOI_AREA_KM2: f64 = 100.0;
pub const DEFAULT_GI_K: usize = 30;
pub const DEFAULT_TOP_K: usize = 15;
pub const DEFAULT_ORIGIN: &str = "AT";

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub users: Option<PathBuf>,
    pub edges: Option<PathBuf>,
    pub gazetteer: Option<PathBuf>,
    pub population: Option<PathBuf>,
    pub countries: Option<PathBuf>,
    pub ground_truth: Option<PathBuf>,
    pub snowball: Option<PathBuf>,
    pub regions: Option<PathBuf>,
    pub global_area_km2: Option<f64>,
    pub aoi_area_km2: Option<f64>,
    /// `min_lat,max_lat,min_lon,max_lon`.
    pub aoi_bbox: Option<String>,
    pub gi_k: Option<usize>,
    pub louvain_seed: Option<u64>,
    pub top_k: Option<usize>,
    pub weighted_degree: Option<bool>,
    pub origin: Option<String>,
    /// Column analysed by `hotspots`: users, in_deg, out_deg, closeness or betweenness.
    pub hotspot_value: Option<String>,
}

impl PipelineConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::invalid(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg: PipelineConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::invalid(format!("config {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [
            &mut cfg.users,
            &mut cfg.edges,
            &mut cfg.gazetteer,
            &mut cfg.population,
            &mut cfg.countries,
            &mut cfg.ground_truth,
            &mut cfg.snowball,
            &mut cfg.regions,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> CliResult<()> {
        for (name, v) in [("global_area_km2", self.global_area_km2), ("aoi_area_km2", self.aoi_area_km2)] {
            if let Some(v) = v {
                positive(name, v)?;
            }
        }
        for (name, v) in [("gi_k", self.gi_k), ("top_k", self.top_k)] {
            if v == Some(0) {
                return Err(CliError::invalid(format!("{name} must be positive")));
            }
        }
        Ok(())
    }
}

pub fn positive(name: &str, v: f64) -> CliResult<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::invalid(format!("{name} must be positive, got {v}")))
    }
}

/// Flag value, else config value, else an error naming both.
pub fn required<T: Clone>(flag: Option<T>, config: &Option<T>, name: &str) -> CliResult<T> {
    flag.or_else(|| config.clone())
        .ok_or_else(|| CliError::invalid(format!("missing --{name} (or `{}` in the config)", name.replace('-', "_"))))
}

/// Input file that must exist before the stage starts.
pub fn input_file(flag: Option<PathBuf>, config: &Option<PathBuf>, name: &str) -> CliResult<PathBuf> {
    let path = required(flag, config, name)?;
    if !path.is_file() {
        return Err(CliError::invalid(format!("{name} file {} does not exist", path.display())));
    }
    Ok(path)
}
