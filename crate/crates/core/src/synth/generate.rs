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

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::config::{FollowerTier, SnowballConfig};
use super::region::Region;
use crate::error::{Error, Result};
use crate::ingest::{PopulationRaster, Precision, RawUserRecord};
use crate::GeoPoint;

/// Geocodable but uninhabited place used for the population filter.
pub const UNPOPULATED_PLACE: (&str, f64, f64) = ("Bir Tawil", 21.87, 33.75);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocationKind {
    Place,
    Country,
    Unresolvable,
    Unpopulated,
    Missing,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GazetteerRow {
    pub location: String,
    pub lat: f64,
    pub lon: f64,
    pub precision: Precision,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionTruth {
    pub id: String,
    pub country: String,
    pub language: String,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UserTruth {
    pub id: String,
    pub region: String,
    pub language: String,
    pub depth: u32,
    pub location_kind: LocationKind,
    /// Coordinates of the user's place, for `Place` users only.
    pub point: Option<GeoPoint>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlaceTruth {
    pub location: String,
    pub region: String,
    pub point: GeoPoint,
}

/// Planted structure of a generated crawl.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub rng_seed: u64,
    pub iterations: u32,
    pub geo_homophily: f64,
    pub regions: Vec<RegionTruth>,
    pub places: Vec<PlaceTruth>,
    pub users: Vec<UserTruth>,
}

impl GroundTruth {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_reader(std::io::BufReader::new(std::fs::File::open(path)?))?)
    }

    /// User id → language group.
    pub fn language_of_users(&self) -> BTreeMap<&str, &str> {
        self.users.iter().map(|u| (u.id.as_str(), u.language.as_str())).collect()
    }
}

#[derive(Clone, Debug)]
pub struct SyntheticCrawl {
    pub users: Vec<RawUserRecord>,
    /// `(followed, follower)` pairs.
    pub edges: Vec<(String, String)>,
    pub gazetteer: Vec<GazetteerRow>,
    pub population: PopulationRaster,
    pub ground_truth: GroundTruth,
}

pub const USERS_FILE: &str = "users.csv";
pub const EDGES_FILE: &str = "edges.csv";
pub const GAZETTEER_FILE: &str = "gazetteer.tsv";
pub const POPULATION_FILE: &str = "population.tsv";
pub const GROUND_TRUTH_FILE: &str = "ground_truth.json";

impl SyntheticCrawl {
    /// Writes the five output files into `dir` (created if needed).
    pub fn write_to(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;

        let mut users = csv::Writer::from_path(dir.join(USERS_FILE))?;
        users.write_record(["user_id", "location"])?;
        for u in &self.users {
            users.write_record([u.user_id.as_str(), u.location.as_deref().unwrap_or("")])?;
        }
        users.flush()?;

        let mut edges = csv::Writer::from_path(dir.join(EDGES_FILE))?;
        edges.write_record(["src", "dst"])?;
        for (s, d) in &self.edges {
            edges.write_record([s, d])?;
        }
        edges.flush()?;

        let mut gaz = csv::WriterBuilder::new()
            .delimiter(b'\t')
            .quote_style(csv::QuoteStyle::Never)
            .from_path(dir.join(GAZETTEER_FILE))?;
        gaz.write_record(["location", "lat", "lon", "precision"])?;
        for row in &self.gazetteer {
            gaz.write_record([
                row.location.clone(),
                row.lat.to_string(),
                row.lon.to_string(),
                row.precision.as_str().to_owned(),
            ])?;
        }
        gaz.flush()?;

        let mut pop = std::io::BufWriter::new(std::fs::File::create(dir.join(POPULATION_FILE))?);
        self.population.write(&mut pop)?;

        let mut truth = serde_json::to_string(&self.ground_truth)?;
        truth.push('\n');
        std::fs::write(dir.join(GROUND_TRUTH_FILE), truth)?;
        Ok(())
    }
}

struct Draft {
    region: usize,
    depth: u32,
    tier: FollowerTier,
    kind: LocationKind,
    location: Option<String>,
    point: Option<GeoPoint>,
}

struct Places {
    names: Vec<String>,
    points: Vec<GeoPoint>,
    pick: WeightedIndex<f64>,
}

struct Generator<'a> {
    config: &'a SnowballConfig,
    regions: &'a [Region],
    languages: Vec<String>,
    places: Vec<Places>,
    tiers: WeightedIndex<f64>,
    rng: ChaCha8Rng,
    users: Vec<Draft>,
    by_region: Vec<Vec<usize>>,
}

impl Generator<'_> {
    fn new_user(&mut self, region: usize, depth: u32, tier: Option<FollowerTier>) -> usize {
        let tier = tier.unwrap_or_else(|| FollowerTier::ALL[self.tiers.sample(&mut self.rng)]);
        let noise = &self.config.noise;
        // seeds are always located precisely
        let kind = if depth == 0 {
            LocationKind::Place
        } else {
            let u: f64 = self.rng.random();
            let cuts = [
                (noise.missing, LocationKind::Missing),
                (noise.unresolvable, LocationKind::Unresolvable),
                (noise.country, LocationKind::Country),
                (noise.unpopulated, LocationKind::Unpopulated),
            ];
            let mut acc = 0.0;
            cuts.iter()
                .find(|(p, _)| {
                    acc += p;
                    u < acc
                })
                .map_or(LocationKind::Place, |&(_, k)| k)
        };
        let (location, point) = match kind {
            LocationKind::Missing => (None, None),
            LocationKind::Unresolvable => (Some(format!("nowhere {}", self.rng.random_range(0..40))), None),
            LocationKind::Country => (Some(self.regions[region].country_label().to_owned()), None),
            LocationKind::Unpopulated => (Some(UNPOPULATED_PLACE.0.to_owned()), None),
            LocationKind::Place => {
                let places = &self.places[region];
                let i = places.pick.sample(&mut self.rng);
                (Some(places.names[i].clone()), Some(places.points[i]))
            }
        };
        let id = self.users.len();
        self.users.push(Draft {
            region,
            depth,
            tier,
            kind,
            location,
            point,
        });
        self.by_region[region].push(id);
        id
    }

    fn weighted_pick(&mut self, candidates: &[usize]) -> usize {
        let weights = candidates.iter().map(|&r| self.regions[r].weight);
        let dist = WeightedIndex::new(weights).expect("weights validated");
        candidates[dist.sample(&mut self.rng)]
    }

    /// Region of a new follower of a user in `home`.
    fn follower_region(&mut self, home: usize) -> usize {
        if self.rng.random_bool(self.config.geo_homophily) {
            return home;
        }
        let others: Vec<usize> = (0..self.regions.len()).filter(|&r| r != home).collect();
        if others.is_empty() {
            return home;
        }
        let same: Vec<usize> = others
            .iter()
            .copied()
            .filter(|&r| self.languages[r] == self.languages[home])
            .collect();
        if !same.is_empty() && self.rng.random_bool(self.config.same_language_share) {
            self.weighted_pick(&same)
        } else {
            self.weighted_pick(&others)
        }
    }
}

/// Runs the simulated snowball crawl.
pub fn generate(config: &SnowballConfig, regions: &[Region]) -> Result<SyntheticCrawl> {
    if regions.is_empty() {
        return Err(Error::Invalid("at least one region is required".into()));
    }
    config.validate()?;
    let mut ids = BTreeSet::new();
    for r in regions {
        r.validate()?;
        if !ids.insert(r.id.as_str()) {
            return Err(Error::Invalid(format!("duplicate region id `{}`", r.id)));
        }
    }
    let region_index: BTreeMap<&str, usize> = regions.iter().enumerate().map(|(i, r)| (r.id.as_str(), i)).collect();
    let seeds: Vec<(usize, FollowerTier)> = config
        .seeds
        .iter()
        .map(|s| {
            region_index
                .get(s.region.as_str())
                .map(|&i| (i, s.tier))
                .ok_or_else(|| Error::Invalid(format!("seed region `{}` is not defined", s.region)))
        })
        .collect::<Result<_>>()?;
    let languages: Vec<String> = regions
        .iter()
        .map(|r| config.language_groups.get(&r.id).unwrap_or(&r.language).clone())
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut population = PopulationRaster::new(config.raster_cell_deg)?;
    let mut gazetteer = Vec::new();
    let mut place_truth = Vec::new();
    let mut places = Vec::with_capacity(regions.len());
    for r in regions {
        let zipf: Vec<f64> = (0..r.places).map(|i| ((i + 1) as f64).powf(-config.place_zipf)).collect();
        let mut names = Vec::with_capacity(r.places);
        let mut points = Vec::with_capacity(r.places);
        for (i, w) in zipf.iter().enumerate() {
            let p = r.sample(&mut rng);
            let name = format!("{} place {}", r.id, i + 1);
            population.add(p.lat(), p.lon(), (1e5 * r.weight * w).round().max(1.0))?;
            gazetteer.push(GazetteerRow {
                location: name.clone(),
                lat: p.lat(),
                lon: p.lon(),
                precision: Precision::City,
            });
            place_truth.push(PlaceTruth {
                location: name.clone(),
                region: r.id.clone(),
                point: p,
            });
            names.push(name);
            points.push(p);
        }
        let pick = WeightedIndex::new(zipf).expect("positive weights");
        places.push(Places { names, points, pick });
    }
    let mut countries = BTreeSet::new();
    for r in regions {
        if countries.insert(crate::ingest::normalize_location(r.country_label())) {
            let a = r.anchor();
            gazetteer.push(GazetteerRow {
                location: r.country_label().to_owned(),
                lat: a.lat(),
                lon: a.lon(),
                precision: Precision::Country,
            });
        }
    }
    let (name, lat, lon) = UNPOPULATED_PLACE;
    let empty = GeoPoint::new(lat, lon)?;
    if population.population_at(&empty) > 0.0 {
        return Err(Error::Invalid(format!("a region overlaps the unpopulated place `{name}`")));
    }
    gazetteer.push(GazetteerRow {
        location: name.to_owned(),
        lat,
        lon,
        precision: Precision::Region,
    });

    let mut g = Generator {
        config,
        regions,
        languages,
        places,
        tiers: WeightedIndex::new(config.tier_weights).expect("validated"),
        rng,
        users: Vec::new(),
        by_region: vec![Vec::new(); regions.len()],
    };
    let mut frontier: Vec<usize> = seeds.iter().map(|&(r, t)| g.new_user(r, 0, Some(t))).collect();
    let mut seen = BTreeSet::new();
    let mut edges = Vec::new();
    for depth in 1..=config.iterations {
        let mut next = Vec::new();
        for &followed in &frontier {
            let tier = g.users[followed].tier;
            let drawn = tier.sample(&mut g.rng) as f64 * config.follower_scale;
            let count = (drawn.round() as u64).max(1);
            let home = g.users[followed].region;
            for _ in 0..count {
                let region = g.follower_region(home);
                let pool = &g.by_region[region];
                let follower = if !pool.is_empty() && g.rng.random_bool(config.reuse_prob) {
                    pool[g.rng.random_range(0..pool.len())]
                } else {
                    let id = g.new_user(region, depth, None);
                    next.push(id);
                    id
                };
                if follower != followed && seen.insert((followed, follower)) {
                    edges.push((followed, follower));
                }
            }
        }
        frontier = next;
    }

    let user_id = |i: usize| format!("u{i:06}");
    let users = g
        .users
        .iter()
        .enumerate()
        .map(|(i, d)| RawUserRecord::new(user_id(i), d.location.as_deref()))
        .collect();
    let truth_users = g
        .users
        .iter()
        .enumerate()
        .map(|(i, d)| UserTruth {
            id: user_id(i),
            region: regions[d.region].id.clone(),
            language: g.languages[d.region].clone(),
            depth: d.depth,
            location_kind: d.kind,
            point: d.point,
        })
        .collect();
    let ground_truth = GroundTruth {
        rng_seed: config.rng_seed,
        iterations: config.iterations,
        geo_homophily: config.geo_homophily,
        regions: regions
            .iter()
            .zip(&g.languages)
            .map(|(r, l)| RegionTruth {
                id: r.id.clone(),
                country: r.country.clone(),
                language: l.clone(),
                weight: r.weight,
            })
            .collect(),
        places: place_truth,
        users: truth_users,
    };
    let edges = edges.into_iter().map(|(s, d)| (user_id(s), user_id(d))).collect();
    Ok(SyntheticCrawl {
        users,
        edges,
        gazetteer,
        population,
        ground_truth,
    })
}

/// Loads a JSON array of regions.
pub fn load_regions(path: impl AsRef<Path>) -> Result<Vec<Region>> {
    Ok(serde_json::from_reader(std::io::BufReader::new(std::fs::File::open(path)?))?)
}
