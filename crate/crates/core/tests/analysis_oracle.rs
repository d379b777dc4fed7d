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


//! Gi*, Spearman and bivariate binning against independent oracles.

use geosocial::analysis::{
    bivariate_bins, classify_values, getis_ord_gi_star, spearman, HotSpotClass, SpearmanMatrix, ValueClass,
};
use geosocial::geo::haversine_km;
use geosocial::GeoPoint;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_cells(rng: &mut ChaCha8Rng, n: usize) -> (Vec<GeoPoint>, Vec<f64>) {
    let points = (0..n)
        .map(|_| GeoPoint::new(rng.random_range(35.0..60.0), rng.random_range(-10.0..30.0)).unwrap())
        .collect();
    let values = (0..n).map(|_| rng.random_range(0.0..100.0f64).powi(2)).collect();
    (points, values)
}

/// Gi* from its definition with binary weights on the k nearest cells (ties
/// at the k-th distance included) plus the cell itself.
fn oracle_gi(values: &[f64], points: &[GeoPoint], k: usize) -> Vec<f64> {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let s = (values.iter().map(|x| x * x).sum::<f64>() / n - mean * mean).sqrt();
    (0..values.len())
        .map(|i| {
            let mut d: Vec<f64> = (0..values.len())
                .filter(|&j| j != i)
                .map(|j| haversine_km(&points[i], &points[j]))
                .collect();
            d.sort_by(f64::total_cmp);
            let cutoff = d[k - 1];
            let w: Vec<f64> = (0..values.len())
                .map(|j| {
                    if j == i || haversine_km(&points[i], &points[j]) <= cutoff {
                        1.0
                    } else {
                        0.0
                    }
                })
                .collect();
            let sw: f64 = w.iter().sum();
            let sw2: f64 = w.iter().map(|x| x * x).sum();
            let sx: f64 = w.iter().zip(values).map(|(a, b)| a * b).sum();
            (sx - mean * sw) / (s * ((n * sw2 - sw * sw) / (n - 1.0)).sqrt())
        })
        .collect()
}

#[test]
fn gi_star_matches_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in [1, 5, 8, 30] {
        for _ in 0..5 {
            let (points, values) = random_cells(&mut rng, 100);
            let got = getis_ord_gi_star(&values, &points, k).unwrap();
            for (a, b) in got.z.iter().zip(oracle_gi(&values, &points, k)) {
                assert!((a - b).abs() <= 1e-9, "k={k}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn constant_field_is_nonsignificant() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (points, _) = random_cells(&mut rng, 100);
    for c in [0.0, 1.0, 17.25, 1e9] {
        let r = getis_ord_gi_star(&vec![c; 100], &points, 8).unwrap();
        assert!(r.class.iter().all(|&c| c == HotSpotClass::NonSig));
        assert!(r.z.iter().all(|&z| z == 0.0));
    }
}

#[test]
fn classes_are_affine_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..50 {
        let (points, values) = random_cells(&mut rng, 100);
        let scale = rng.random_range(0.01..100.0);
        let shift = rng.random_range(-1e3..1e3);
        let moved: Vec<f64> = values.iter().map(|v| scale * v + shift).collect();
        let a = getis_ord_gi_star(&values, &points, 8).unwrap();
        let b = getis_ord_gi_star(&moved, &points, 8).unwrap();
        assert_eq!(a.class, b.class);
    }
}

#[test]
fn clustered_field_has_hot_and_cold_spots() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let (points, _) = random_cells(&mut rng, 100);
    let values: Vec<f64> = points.iter().map(|p| if p.lon() > 10.0 { 100.0 } else { 1.0 }).collect();
    let r = getis_ord_gi_star(&values, &points, 8).unwrap();
    assert!(r.class.contains(&HotSpotClass::Hot99));
    assert!(r.class.contains(&HotSpotClass::Cold99));
}

fn oracle_ranks(x: &[f64]) -> Vec<f64> {
    x.iter()
        .map(|v| {
            let below = x.iter().filter(|w| *w < v).count() as f64;
            let equal = x.iter().filter(|w| *w == v).count() as f64;
            below + (equal + 1.0) / 2.0
        })
        .collect()
}

fn oracle_pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (sx, sy): (f64, f64) = (x.iter().sum(), y.iter().sum());
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
    let sxx: f64 = x.iter().map(|a| a * a).sum();
    let syy: f64 = y.iter().map(|b| b * b).sum();
    (n * sxy - sx * sy) / ((n * sxx - sx * sx).sqrt() * (n * syy - sy * sy).sqrt())
}

fn tied_column() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0u8..6, 3..60).prop_map(|v| v.into_iter().map(f64::from).collect())
}

proptest! {
    #[test]
    fn spearman_matches_rank_then_pearson(
        (x, y) in (3usize..60).prop_flat_map(|n| (
            prop::collection::vec(0u8..8, n),
            prop::collection::vec(-1e3f64..1e3, n),
        ))
    ) {
        let x: Vec<f64> = x.into_iter().map(f64::from).collect();
        prop_assume!(x.windows(2).any(|w| w[0] != w[1]));
        prop_assume!(y.windows(2).any(|w| w[0] != w[1]));
        let rho = spearman(&x, &y).unwrap();
        let oracle = oracle_pearson(&oracle_ranks(&x), &oracle_ranks(&y));
        prop_assert!((rho - oracle).abs() <= 1e-12, "{} vs {}", rho, oracle);
        prop_assert!((-1.0..=1.0).contains(&rho));
    }

    #[test]
    fn self_correlation_is_exactly_one(x in tied_column()) {
        prop_assume!(x.windows(2).any(|w| w[0] != w[1]));
        prop_assert_eq!(spearman(&x, &x).unwrap(), 1.0);
        let m = SpearmanMatrix::from_columns(&[("a", &x), ("b", &x)]).unwrap();
        prop_assert_eq!(m.get("a", "b"), Some(1.0));
        prop_assert_eq!(m.get("a", "a"), Some(1.0));
    }

    #[test]
    fn spearman_ignores_monotone_transforms(x in tied_column(), y in tied_column()) {
        let n = x.len().min(y.len());
        let (x, y) = (&x[..n], &y[..n]);
        prop_assume!(n >= 3);
        prop_assume!(x.windows(2).any(|w| w[0] != w[1]) && y.windows(2).any(|w| w[0] != w[1]));
        let fx: Vec<f64> = x.iter().map(|v| (v * 0.7).exp() + 3.0).collect();
        let a = spearman(x, y).unwrap();
        let b = spearman(&fx, y).unwrap();
        prop_assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn bivariate_ties_share_a_class(
        v in prop::collection::vec(prop_oneof![Just(0.0f64), Just(2.5), 0.0f64..10.0], 1..50)
    ) {
        let classes = classify_values(&v);
        for i in 0..v.len() {
            for j in 0..v.len() {
                if v[i] == v[j] {
                    prop_assert_eq!(classes[i], classes[j]);
                }
                if v[i] != 0.0 && v[j] != 0.0 && v[i] < v[j] {
                    prop_assert!(classes[i] <= classes[j]);
                }
            }
            prop_assert_eq!(classes[i] == ValueClass::Low, v[i] == 0.0);
        }
        let pairs = bivariate_bins(&v, &v).unwrap();
        prop_assert!(pairs.iter().all(|(a, b)| a == b));
    }
}
