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

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Follower-count class of a crawled account.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FollowerTier {
    /// Fewer than 500 followers.
    Few,
    /// 500 to 5000 followers.
    Medium,
    /// More than 5000 followers (capped at 50000 here).
    Many,
}

impl FollowerTier {
    pub const ALL: [FollowerTier; 3] = [FollowerTier::Few, FollowerTier::Medium, FollowerTier::Many];

    /// Inclusive follower-count range.
    pub fn range(self) -> (u64, u64) {
        match self {
            FollowerTier::Few => (1, 499),
            FollowerTier::Medium => (500, 5000),
            FollowerTier::Many => (5001, 50_000),
        }
    }

    /// Log-uniform follower count within the tier.
    pub fn sample<R: Rng>(self, rng: &mut R) -> u64 {
        let (lo, hi) = self.range();
        let (a, b) = ((lo as f64).ln(), ((hi + 1) as f64).ln());
        let v = (a + rng.random::<f64>() * (b - a)).exp().floor() as u64;
        v.clamp(lo, hi)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Seed {
    pub region: String,
    pub tier: FollowerTier,
}

/// Probabilities of the degraded location strings; the remainder gets a
/// resolvable place name.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LocationNoise {
    pub missing: f64,
    pub unresolvable: f64,
    /// Country name only (filtered as imprecise).
    pub country: f64,
    /// A place in an unpopulated raster cell.
    pub unpopulated: f64,
}

impl Default for LocationNoise {
    fn default() -> Self {
        Self {
            missing: 0.45,
            unresolvable: 0.06,
            country: 0.13,
            unpopulated: 0.005,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SnowballConfig {
    pub seeds: Vec<Seed>,
    /// Follower generations crawled beyond the seeds.
    pub iterations: u32,
    /// Probability that a follower comes from the followed user's region.
    pub geo_homophily: f64,
    /// Otherwise, probability of drawing among same-language regions.
    pub same_language_share: f64,
    /// Region id → language group; overrides the region's own label.
    pub language_groups: BTreeMap<String, String>,
    /// Tier distribution `[few, medium, many]` of non-seed accounts.
    pub tier_weights: [f64; 3],
    /// Fraction of each account's followers that is actually generated.
    pub follower_scale: f64,
    /// Probability that a follower is an already generated account.
    pub reuse_prob: f64,
    /// Exponent of the Zipf weights over a region's place names.
    pub place_zipf: f64,
    pub raster_cell_deg: f64,
    pub noise: LocationNoise,
    pub rng_seed: u64,
}

impl Default for SnowballConfig {
    fn default() -> Self {
        Self {
            seeds: Vec::new(),
            iterations: 2,
            geo_homophily: 0.45,
            same_language_share: 0.8,
            language_groups: BTreeMap::new(),
            tier_weights: [0.9, 0.09, 0.01],
            follower_scale: 0.05,
            reuse_prob: 0.1,
            place_zipf: 1.0,
            raster_cell_deg: 0.5,
            noise: LocationNoise::default(),
            rng_seed: 0,
        }
    }
}

fn probability(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Invalid(format!("{name} = {p} is not a probability")))
    }
}

impl SnowballConfig {
    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::Invalid("at least one seed is required".into()));
        }
        probability("geo_homophily", self.geo_homophily)?;
        probability("same_language_share", self.same_language_share)?;
        probability("reuse_prob", self.reuse_prob)?;
        let n = &self.noise;
        for (name, p) in [
            ("noise.missing", n.missing),
            ("noise.unresolvable", n.unresolvable),
            ("noise.country", n.country),
            ("noise.unpopulated", n.unpopulated),
        ] {
            probability(name, p)?;
        }
        probability("sum of noise probabilities", n.missing + n.unresolvable + n.country + n.unpopulated)?;
        if self.tier_weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) || self.tier_weights.iter().sum::<f64>() <= 0.0 {
            return Err(Error::Invalid("tier_weights must be >= 0 with a positive sum".into()));
        }
        for (name, v) in [
            ("follower_scale", self.follower_scale),
            ("raster_cell_deg", self.raster_cell_deg),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Invalid(format!("{name} must be > 0")));
            }
        }
        if !(self.place_zipf.is_finite() && self.place_zipf >= 0.0) {
            return Err(Error::Invalid("place_zipf must be >= 0".into()));
        }
        Ok(())
    }
}
