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

//! Getis-Ord Gi* with binary k-nearest-neighbour weights.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geo::{haversine_km, GeoPoint};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HotSpotClass {
    Cold99,
    Cold95,
    Cold90,
    NonSig,
    Hot90,
    Hot95,
    Hot99,
}

impl HotSpotClass {
    pub fn as_str(self) -> &'static str {
        match self {
            HotSpotClass::Cold99 => "cold99",
            HotSpotClass::Cold95 => "cold95",
            HotSpotClass::Cold90 => "cold90",
            HotSpotClass::NonSig => "nonsig",
            HotSpotClass::Hot90 => "hot90",
            HotSpotClass::Hot95 => "hot95",
            HotSpotClass::Hot99 => "hot99",
        }
    }
}

/// Two-sided normal critical values for 90, 95 and 99 % confidence.
pub const Z_90: f64 = 1.645;
pub const Z_95: f64 = 1.960;
pub const Z_99: f64 = 2.576;

pub fn classify_z<T: Real>(z: T) -> HotSpotClass {
    let a = z.abs();
    let hot = z > T::zero();
    let level = if a >= T::lit(Z_99) {
        3
    } else if a >= T::lit(Z_95) {
        2
    } else if a >= T::lit(Z_90) {
        1
    } else {
        0
    };
    match (level, hot) {
        (0, _) => HotSpotClass::NonSig,
        (1, true) => HotSpotClass::Hot90,
        (2, true) => HotSpotClass::Hot95,
        (_, true) => HotSpotClass::Hot99,
        (1, false) => HotSpotClass::Cold90,
        (2, false) => HotSpotClass::Cold95,
        (_, false) => HotSpotClass::Cold99,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HotSpotResult<T> {
    pub z: Vec<T>,
    pub class: Vec<HotSpotClass>,
}

/// The `k` nearest other cells by great-circle distance, sorted by
/// `(distance, index)`. Cells tied with the k-th distance are all admitted.
pub fn knn_neighbours<T: Real>(centroids: &[GeoPoint<T>], k: usize) -> Result<Vec<Vec<usize>>> {
    let n = centroids.len();
    if k == 0 || k >= n {
        return Err(Error::TooFewCells { k, n });
    }
    Ok((0..n)
        .into_par_iter()
        .map(|i| {
            let mut dist: Vec<(T, usize)> = (0..n)
                .filter(|&j| j != i)
                .map(|j| (haversine_km(&centroids[i], &centroids[j]), j))
                .collect();
            let cmp = |a: &(T, usize), b: &(T, usize)| {
                a.0.partial_cmp(&b.0).expect("finite distance").then(a.1.cmp(&b.1))
            };
            dist.select_nth_unstable_by(k - 1, cmp);
            let cutoff = dist[k - 1].0;
            let mut chosen: Vec<(T, usize)> = dist.into_iter().filter(|d| d.0 <= cutoff).collect();
            chosen.sort_by(cmp);
            chosen.into_iter().map(|(_, j)| j).collect()
        })
        .collect())
}

/// Gi* z-scores: binary weights over each cell's neighbours plus the cell
/// itself, standardised with the global mean and population deviation.
/// A constant field scores zero everywhere.
pub fn getis_ord_gi_star<T: Real>(
    values: &[T],
    centroids: &[GeoPoint<T>],
    k: usize,
) -> Result<HotSpotResult<T>> {
    let n = values.len();
    if centroids.len() != n {
        return Err(Error::Invalid("values and centroids differ in length".into()));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Invalid("Gi* values must be finite".into()));
    }
    let neighbours = knn_neighbours(centroids, k)?;
    let nf = T::lit(n as f64);
    let mean = values.iter().copied().sum::<T>() / nf;
    let var = values.iter().map(|&x| (x - mean) * (x - mean)).sum::<T>() / nf;
    let sd = var.sqrt();
    let constant = values.iter().all(|&x| x == values[0]) || sd == T::zero();

    let z: Vec<T> = neighbours
        .par_iter()
        .enumerate()
        .map(|(i, nb)| {
            if constant {
                return T::zero();
            }
            let local = values[i] + nb.iter().map(|&j| values[j]).sum::<T>();
            let w = T::lit((nb.len() + 1) as f64);
            // binary weights: sum of squared weights equals the weight sum
            let spread = (nf * w - w * w) / (nf - T::one());
            if spread <= T::zero() {
                return T::zero();
            }
            (local - mean * w) / (sd * spread.sqrt())
        })
        .collect();
    let class = z.iter().map(|&v| classify_z(v)).collect();
    Ok(HotSpotResult { z, class })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(n: usize) -> Vec<GeoPoint<f64>> {
        (0..n).map(|i| GeoPoint::new(0.0, i as f64 * 0.1).unwrap()).collect()
    }

    #[test]
    fn thresholds() {
        assert_eq!(classify_z(0.0), HotSpotClass::NonSig);
        assert_eq!(classify_z(1.7), HotSpotClass::Hot90);
        assert_eq!(classify_z(-2.0), HotSpotClass::Cold95);
        assert_eq!(classify_z(3.0), HotSpotClass::Hot99);
        assert_eq!(classify_z(-2.576), HotSpotClass::Cold99);
        assert_eq!(classify_z(1.64), HotSpotClass::NonSig);
    }

    #[test]
    fn constant_field() {
        let r = getis_ord_gi_star(&[4.2; 20], &line(20), 3).unwrap();
        assert!(r.z.iter().all(|&z| z == 0.0));
        assert!(r.class.iter().all(|&c| c == HotSpotClass::NonSig));
    }

    #[test]
    fn k_must_be_below_n() {
        assert!(matches!(
            getis_ord_gi_star(&[1.0, 2.0], &line(2), 2),
            Err(Error::TooFewCells { .. })
        ));
        assert!(getis_ord_gi_star(&[1.0, 2.0], &line(2), 0).is_err());
    }

    #[test]
    fn ties_at_kth_distance_are_admitted() {
        // middle point of three equally spaced points: both neighbours tie
        let nb = knn_neighbours(&line(3), 1).unwrap();
        assert_eq!(nb[1], vec![0, 2]);
        assert_eq!(nb[0], vec![1]);
    }

    #[test]
    fn spike_is_hot() {
        let mut v = vec![0.0; 100];
        v[50] = 100.0;
        let r = getis_ord_gi_star(&v, &line(100), 3).unwrap();
        assert!(r.z[50] > 0.0 && r.z[49] > 0.0 && r.z[51] > 0.0);
        assert!(r.z[0] < 0.0 && r.z[99] < 0.0);
    }
}
