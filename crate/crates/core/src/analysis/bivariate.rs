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

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueClass {
    Low,
    Mid,
    High,
}

impl ValueClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ValueClass::Low => "low",
            ValueClass::Mid => "mid",
            ValueClass::High => "high",
        }
    }
}

/// Zero goes to `Low`; nonzero values below their median to `Mid`, the rest
/// (median included) to `High`.
pub fn classify_values<T: Real>(values: &[T]) -> Vec<ValueClass> {
    let mut nonzero: Vec<T> = values.iter().copied().filter(|v| *v != T::zero()).collect();
    if nonzero.is_empty() {
        return vec![ValueClass::Low; values.len()];
    }
    nonzero.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    let mid = nonzero.len() / 2;
    let median = if nonzero.len() % 2 == 1 {
        nonzero[mid]
    } else {
        (nonzero[mid - 1] + nonzero[mid]) / T::lit(2.0)
    };
    values
        .iter()
        .map(|&v| {
            if v == T::zero() {
                ValueClass::Low
            } else if v < median {
                ValueClass::Mid
            } else {
                ValueClass::High
            }
        })
        .collect()
}

pub fn bivariate_bins<T: Real>(a: &[T], b: &[T]) -> Result<Vec<(ValueClass, ValueClass)>> {
    if a.len() != b.len() {
        return Err(Error::Invalid("bivariate inputs differ in length".into()));
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(Error::Invalid("bivariate inputs must be finite".into()));
    }
    Ok(classify_values(a).into_iter().zip(classify_values(b)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ValueClass::*;

    #[test]
    fn zeros_are_low() {
        let bins = bivariate_bins(&[0.0; 4], &[0.0; 4]).unwrap();
        assert!(bins.iter().all(|&c| c == (Low, Low)));
    }

    #[test]
    fn median_goes_high() {
        assert_eq!(classify_values(&[0.0, 1.0, 2.0, 3.0]), vec![Low, Mid, High, High]);
        assert_eq!(classify_values(&[4.0, 1.0, 3.0, 2.0, 0.0]), vec![High, Mid, High, Mid, Low]);
    }

    #[test]
    fn monotone_transform_invariance() {
        let a: [f64; 7] = [0.0, 0.5, 3.0, 3.0, 7.0, 12.0, 0.0];
        let t: Vec<f64> = a.iter().map(|&v| if v == 0.0 { 0.0 } else { v.ln() + 10.0 }).collect();
        assert_eq!(classify_values(&a), classify_values(&t));
    }

    #[test]
    fn length_mismatch() {
        assert!(bivariate_bins(&[1.0], &[1.0, 2.0]).is_err());
    }
}
