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

use crate::centrality::{CentralityTable, COLUMN_NAMES};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// 1-based ranks; tied values share the mean of their positions.
pub fn average_ranks<T: Real>(values: &[T]) -> Vec<T> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite values"));
    let mut ranks = vec![T::zero(); values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start+1 ..= end
        let rank = T::lit((start + 1 + end) as f64) / T::lit(2.0);
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

pub fn pearson<T: Real>(x: &[T], y: &[T]) -> T {
    let n = T::lit(x.len() as f64);
    let mx = x.iter().copied().sum::<T>() / n;
    let my = y.iter().copied().sum::<T>() / n;
    let (mut sxy, mut sxx, mut syy) = (T::zero(), T::zero(), T::zero());
    for (&a, &b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    sxy / (sxx * syy).sqrt()
}

fn check_column<T: Real>(name: &str, values: &[T]) -> Result<()> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Invalid(format!("column `{name}` has non-finite values")));
    }
    if values.windows(2).all(|w| w[0] == w[1]) {
        return Err(Error::ConstantColumn(name.to_owned()));
    }
    Ok(())
}

/// Spearman's rho: Pearson correlation of average ranks.
pub fn spearman<T: Real>(x: &[T], y: &[T]) -> Result<T> {
    if x.len() != y.len() {
        return Err(Error::Invalid("columns differ in length".into()));
    }
    if x.len() < 3 {
        return Err(Error::Invalid("need at least 3 observations".into()));
    }
    check_column("x", x)?;
    check_column("y", y)?;
    Ok(pearson(&average_ranks(x), &average_ranks(y)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpearmanMatrix<T> {
    pub names: Vec<String>,
    /// Row-major, symmetric, unit diagonal.
    pub values: Vec<Vec<T>>,
}

impl<T: Real> SpearmanMatrix<T> {
    pub fn from_columns(columns: &[(&str, &[T])]) -> Result<Self> {
        let n = columns.first().map_or(0, |(_, c)| c.len());
        if n < 3 {
            return Err(Error::Invalid("need at least 3 observations".into()));
        }
        for (name, col) in columns {
            if col.len() != n {
                return Err(Error::Invalid(format!("column `{name}` differs in length")));
            }
            check_column(name, col)?;
        }
        let ranks: Vec<Vec<T>> = columns.iter().map(|(_, c)| average_ranks(c)).collect();
        let k = columns.len();
        let mut values = vec![vec![T::one(); k]; k];
        for i in 0..k {
            for j in i + 1..k {
                let rho = pearson(&ranks[i], &ranks[j]);
                values[i][j] = rho;
                values[j][i] = rho;
            }
        }
        Ok(Self {
            names: columns.iter().map(|(n, _)| (*n).to_owned()).collect(),
            values,
        })
    }

    pub fn get(&self, a: &str, b: &str) -> Option<T> {
        let i = self.names.iter().position(|n| n == a)?;
        let j = self.names.iter().position(|n| n == b)?;
        Some(self.values[i][j])
    }
}

pub fn spearman_matrix<T: Real>(table: &CentralityTable<T>) -> Result<SpearmanMatrix<T>> {
    let cols = table.columns();
    let named: Vec<(&str, &[T])> = COLUMN_NAMES.iter().copied().zip(cols).collect();
    SpearmanMatrix::from_columns(&named)
}
