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

//! Country polygons from GeoJSON and point-in-polygon assignment.

use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;
use serde_json::Value;

use super::CellNetwork;
use crate::error::{Error, Result};
use crate::geo::point_in_polygon;
use crate::ingest::UserNetwork;
use crate::GeoPoint;

/// Rings as `(lon, lat)` vertex lists; the first ring of each polygon is the
/// outer boundary, the rest are holes.
pub type Polygon = Vec<Vec<(f64, f64)>>;

#[derive(Clone, Debug, PartialEq)]
pub struct Country {
    pub code: String,
    pub population: f64,
    pub polygons: Vec<Polygon>,
    bbox: [f64; 4],
}

impl Country {
    pub fn new(code: impl Into<String>, population: f64, polygons: Vec<Polygon>) -> Result<Self> {
        let code = code.into();
        let invalid = |reason: &str| Error::InvalidPolygon {
            code: code.clone(),
            reason: reason.into(),
        };
        if !(population.is_finite() && population > 0.0) {
            return Err(invalid("population must be positive"));
        }
        if polygons.is_empty() {
            return Err(invalid("no polygons"));
        }
        let mut bbox = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
        for ring in polygons.iter().flatten() {
            if ring.len() < 4 {
                return Err(invalid("ring has fewer than 4 positions"));
            }
            if ring.first() != ring.last() {
                return Err(invalid("ring is not closed"));
            }
            for &(lon, lat) in ring {
                if !lon.is_finite() || !lat.is_finite() {
                    return Err(invalid("non-finite coordinate"));
                }
                bbox = [bbox[0].min(lon), bbox[1].min(lat), bbox[2].max(lon), bbox[3].max(lat)];
            }
        }
        Ok(Self {
            code,
            population,
            polygons,
            bbox,
        })
    }

    pub fn contains(&self, p: &GeoPoint) -> bool {
        let (x, y) = (p.lon(), p.lat());
        if x < self.bbox[0] || y < self.bbox[1] || x > self.bbox[2] || y > self.bbox[3] {
            return false;
        }
        self.polygons.iter().any(|rings| point_in_polygon(x, y, rings))
    }
}

/// Countries sorted by code; the first container wins on shared borders.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CountryPolygons {
    countries: Vec<Country>,
}

impl CountryPolygons {
    pub fn new(mut countries: Vec<Country>) -> Result<Self> {
        countries.sort_by(|a, b| a.code.cmp(&b.code));
        if let Some(w) = countries.windows(2).find(|w| w[0].code == w[1].code) {
            return Err(Error::Invalid(format!("duplicate country code `{}`", w[0].code)));
        }
        Ok(Self { countries })
    }

    pub fn countries(&self) -> &[Country] {
        &self.countries
    }

    pub fn country_of(&self, p: &GeoPoint) -> Option<&str> {
        self.countries
            .iter()
            .find(|c| c.contains(p))
            .map(|c| c.code.as_str())
    }

    pub fn populations(&self) -> BTreeMap<String, f64> {
        self.countries
            .iter()
            .map(|c| (c.code.clone(), c.population))
            .collect()
    }

    /// Reads a FeatureCollection whose features carry `code` and
    /// `population` properties and Polygon or MultiPolygon geometry.
    pub fn from_geojson(text: &str) -> Result<Self> {
        let doc: Value = serde_json::from_str(text)?;
        let features = doc
            .get("features")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Invalid("GeoJSON without `features` array".into()))?;
        let mut countries = Vec::with_capacity(features.len());
        for (i, feature) in features.iter().enumerate() {
            let props = feature.get("properties");
            let code = props
                .and_then(|p| p.get("code"))
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Invalid(format!("feature {i} lacks a string `code`")))?;
            let population = props
                .and_then(|p| p.get("population"))
                .and_then(Value::as_f64)
                .ok_or_else(|| Error::Invalid(format!("feature `{code}` lacks numeric `population`")))?;
            let geometry = feature
                .get("geometry")
                .ok_or_else(|| Error::Invalid(format!("feature `{code}` lacks geometry")))?;
            let polygons = parse_geometry(code, geometry)?;
            countries.push(Country::new(code, population, polygons)?);
        }
        Self::new(countries)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_geojson(&std::fs::read_to_string(path)?)
    }
}

fn parse_geometry(code: &str, geometry: &Value) -> Result<Vec<Polygon>> {
    let bad = |reason: &str| Error::InvalidPolygon {
        code: code.to_owned(),
        reason: reason.to_owned(),
    };
    let kind = geometry.get("type").and_then(Value::as_str).unwrap_or("");
    let coords = geometry.get("coordinates").ok_or_else(|| bad("missing coordinates"))?;
    let ring = |v: &Value| -> Result<Vec<(f64, f64)>> {
        v.as_array()
            .ok_or_else(|| bad("ring is not an array"))?
            .iter()
            .map(|pos| {
                let pair = pos.as_array().filter(|a| a.len() >= 2).ok_or_else(|| bad("bad position"))?;
                match (pair[0].as_f64(), pair[1].as_f64()) {
                    (Some(lon), Some(lat)) => Ok((lon, lat)),
                    _ => Err(bad("non-numeric position")),
                }
            })
            .collect()
    };
    let polygon = |v: &Value| -> Result<Polygon> {
        v.as_array()
            .ok_or_else(|| bad("polygon is not an array"))?
            .iter()
            .map(ring)
            .collect()
    };
    match kind {
        "Polygon" => Ok(vec![polygon(coords)?]),
        "MultiPolygon" => coords
            .as_array()
            .ok_or_else(|| bad("multipolygon is not an array"))?
            .iter()
            .map(polygon)
            .collect(),
        other => Err(bad(&format!("unsupported geometry `{other}`"))),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CountryAggregation {
    pub network: CellNetwork<String>,
    /// Users outside every polygon, excluded from `network`.
    pub unassigned_users: u64,
    /// Edges with at least one unassigned endpoint.
    pub unassigned_edges: u64,
}

pub fn aggregate_to_countries(net: &UserNetwork, polygons: &CountryPolygons) -> CountryAggregation {
    let unit_of: Vec<Option<String>> = net
        .points
        .par_iter()
        .map(|p| polygons.country_of(p).map(str::to_owned))
        .collect();
    let unassigned_users = unit_of.iter().filter(|u| u.is_none()).count() as u64;
    let unassigned_edges = net
        .graph
        .edges()
        .filter(|&(s, t, _)| unit_of[s].is_none() || unit_of[t].is_none())
        .count() as u64;
    CountryAggregation {
        network: CellNetwork::from_assignment(net, &unit_of),
        unassigned_users,
        unassigned_edges,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(x0: f64, y0: f64, x1: f64, y1: f64) -> Polygon {
        vec![vec![(x0, y0), (x1, y0), (x1, y1), (x0, y1), (x0, y0)]]
    }

    fn europe() -> CountryPolygons {
        CountryPolygons::new(vec![
            Country::new("DE", 83e6, vec![square(6.0, 47.3, 15.0, 55.0)]).unwrap(),
            Country::new("AT", 9e6, vec![square(9.5, 46.4, 17.2, 47.3)]).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn containment_and_tie_break() {
        let c = europe();
        assert_eq!(c.country_of(&GeoPoint::new(47.0, 16.37).unwrap()), Some("AT"));
        assert_eq!(c.country_of(&GeoPoint::new(52.5, 13.4).unwrap()), Some("DE"));
        assert_eq!(c.country_of(&GeoPoint::new(40.0, 0.0).unwrap()), None);
        // shared edge at lat 47.3 belongs to both; AT sorts first
        assert_eq!(c.country_of(&GeoPoint::new(47.3, 12.0).unwrap()), Some("AT"));
    }

    #[test]
    fn geojson_parsing() {
        let text = r#"{"type":"FeatureCollection","features":[
          {"type":"Feature","properties":{"code":"AT","population":9000000},
           "geometry":{"type":"Polygon","coordinates":[[[9.5,46.4],[17.2,46.4],[17.2,49.0],[9.5,49.0],[9.5,46.4]]]}},
          {"type":"Feature","properties":{"code":"XX","population":5},
           "geometry":{"type":"MultiPolygon","coordinates":[[[[0,0],[1,0],[1,1],[0,0]]],[[[5,5],[6,5],[6,6],[5,5]]]]}}]}"#;
        let c = CountryPolygons::from_geojson(text).unwrap();
        assert_eq!(c.countries().len(), 2);
        assert_eq!(c.country_of(&GeoPoint::new(48.2, 16.37).unwrap()), Some("AT"));
        assert_eq!(c.country_of(&GeoPoint::new(5.2, 5.5).unwrap()), Some("XX"));
        assert_eq!(c.populations()["AT"], 9e6);
    }

    #[test]
    fn invalid_rings_fail_at_load() {
        let open = r#"{"features":[{"properties":{"code":"A","population":1},
          "geometry":{"type":"Polygon","coordinates":[[[0,0],[1,0],[1,1],[0,1]]]}}]}"#;
        assert!(matches!(CountryPolygons::from_geojson(open), Err(Error::InvalidPolygon { .. })));
        let short = r#"{"features":[{"properties":{"code":"A","population":1},
          "geometry":{"type":"Polygon","coordinates":[[[0,0],[1,0],[0,0]]]}}]}"#;
        assert!(CountryPolygons::from_geojson(short).is_err());
        let nopop = r#"{"features":[{"properties":{"code":"A","population":0},
          "geometry":{"type":"Polygon","coordinates":[[[0,0],[1,0],[1,1],[0,0]]]}}]}"#;
        assert!(CountryPolygons::from_geojson(nopop).is_err());
    }

    #[test]
    fn unassigned_users_are_separated() {
        let pts = vec![
            GeoPoint::new(47.0, 16.37).unwrap(),
            GeoPoint::new(52.5, 13.4).unwrap(),
            GeoPoint::new(-30.0, 20.0).unwrap(),
        ];
        let net = UserNetwork::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![String::new(); 3],
            pts,
            &[(0, 1), (0, 2), (1, 1 + 1)],
        )
        .unwrap();
        let agg = aggregate_to_countries(&net, &europe());
        assert_eq!(agg.unassigned_users, 1);
        assert_eq!(agg.unassigned_edges, 2);
        assert_eq!(agg.network.keys, vec!["AT".to_string(), "DE".to_string()]);
        assert_eq!(agg.network.graph.total_node_weight() + agg.unassigned_users, 3);
        assert_eq!(agg.network.graph.total_edge_weight() + agg.unassigned_edges, 3);
    }
}
