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

//! Freedman-Diaconis histograms.


use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_BINS: usize = 10_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct Histogram<T> {
    /// Left edge of the first bin (the sample minimum).
    pub origin: T,
    pub bin_width: T,
    /// Fraction of samples per bin; sums to one.
    pub fractions: Vec<T>,
}

impl<T: Real> Histogram<T> {
    /// `(left, right, fraction)` for every bin.
    pub fn bins(&self) -> impl Iterator<Item = (T, T, T)> + '_ {
        self.fractions.iter().enumerate().map(move |(i, &f)| {
            let left = self.origin + self.bin_width * T::lit(i as f64);
            (left, left + self.bin_width, f)
        })
    }

    /// Centre of the most populated bin (first one on ties).
    pub fn mode_center(&self) -> T {
        let mut best = 0;
        for (i, f) in self.fractions.iter().enumerate() {
            if *f > self.fractions[best] {
                best = i;
            }
        }
        self.origin + self.bin_width * (T::lit(best as f64) + T::lit(0.5))
    }
}

/// Quantile by linear interpolation between order statistics of `sorted`.
pub fn quantile<T: Real>(sorted: &[T], p: T) -> T {
    let h = T::lit((sorted.len() - 1) as f64) * p;
    let lo = h.floor();
    let i = lo.to_usize().expect("index within range");
    if i + 1 >= sorted.len() {
        return sorted[sorted.len() - 1];
    }
    sorted[i] + (h - lo) * (sorted[i + 1] - sorted[i])
}

fn sorted_samples<T: Real>(samples: &[T]) -> Result<Vec<T>> {
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::Invalid("histogram samples must be finite".into()));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    if sorted.len() < 2 || sorted[0] == sorted[sorted.len() - 1] {
        return Err(Error::DegenerateSamples);
    }
    Ok(sorted)
}

/// `2 * IQR * n^(-1/3)`.
pub fn fd_bin_width<T: Real>(samples: &[T]) -> Result<T> {
    let sorted = sorted_samples(samples)?;
    width_of_sorted(&sorted)
}

fn width_of_sorted<T: Real>(sorted: &[T]) -> Result<T> {
    let iqr = quantile(sorted, T::lit(0.75)) - quantile(sorted, T::lit(0.25));
    if iqr <= T::zero() {
        return Err(Error::ZeroIqr);
    }
    let n = T::lit(sorted.len() as f64);
    Ok(T::lit(2.0) * iqr * n.powf(T::lit(-1.0 / 3.0)))
}

/// Histogram with Freedman-Diaconis bin width, anchored at the minimum.
/// The maximum falls into the last bin.
pub fn fd_histogram<T: Real>(samples: &[T]) -> Result<Histogram<T>> {
    let sorted = sorted_samples(samples)?;
    let width = width_of_sorted(&sorted)?;
    let (min, max) = (sorted[0], sorted[sorted.len() - 1]);
    let span = ((max - min) / width).ceil();
    let bins = span.to_usize().unwrap_or(usize::MAX).max(1);
    if bins > MAX_BINS {
        return Err(Error::Invalid(format!("{bins} bins exceeds the limit")));
    }
    let mut counts = vec![0u64; bins];
    for &v in &sorted {
        let idx = ((v - min) / width).floor().to_usize().unwrap_or(0).min(bins - 1);
        counts[idx] += 1;
    }
    let total = T::lit(sorted.len() as f64);
    Ok(Histogram {
        origin: min,
        bin_width: width,
        fractions: counts.iter().map(|&c| T::lit(c as f64) / total).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_to_eight() {
        let xs: Vec<f64> = (1..=8).map(f64::from).collect();
        assert_eq!(quantile(&xs, 0.25), 2.75);
        assert_eq!(quantile(&xs, 0.75), 6.25);
        let h = fd_bin_width(&xs).unwrap();
        assert!((h - 3.5).abs() < 1e-12, "{h}");
        let hist = fd_histogram(&xs).unwrap();
        assert_eq!(hist.fractions.len(), 2);
        assert_eq!(hist.fractions, vec![0.5, 0.5]);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(matches!(fd_histogram(&[1.0f64]), Err(Error::DegenerateSamples)));
        assert!(matches!(fd_histogram(&[2.0f64; 5]), Err(Error::DegenerateSamples)));
        assert!(matches!(fd_histogram::<f64>(&[]), Err(Error::DegenerateSamples)));
        assert!(matches!(
            fd_histogram(&[1.0f64, 1.0, 1.0, 1.0, 1.0, 9.0]),
            Err(Error::ZeroIqr)
        ));
        assert!(fd_histogram(&[1.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn mode_center_picks_densest_bin() {
        let mut xs = vec![0.0f64, 1.0, 1.1, 1.2, 1.3, 1.4, 5.0, 9.0, 10.0];
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let h = fd_histogram(&xs).unwrap();
        let m = h.mode_center();
        assert!(m > 0.0 && m < 3.0, "{m}");
    }
}
