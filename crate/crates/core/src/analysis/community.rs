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

use super::louvain::CommunityAssignment;
use crate::error::{Error, Result};

/// Percent of a community's cells per country (`"none"` for unassigned).
#[derive(Clone, Debug, PartialEq)]
pub struct CommunityShares {
    pub community: usize,
    pub cells: usize,
    pub shares: BTreeMap<String, f64>,
}

pub fn community_country_distribution(
    assignment: &CommunityAssignment,
    country_of_cell: &[Option<String>],
) -> Result<Vec<CommunityShares>> {
    if country_of_cell.len() != assignment.membership.len() {
        return Err(Error::Invalid(format!(
            "{} cells but {} country labels",
            assignment.membership.len(),
            country_of_cell.len()
        )));
    }
    let mut counts: Vec<BTreeMap<String, usize>> = vec![BTreeMap::new(); assignment.community_count()];
    for (&c, country) in assignment.membership.iter().zip(country_of_cell) {
        let code = country.as_deref().unwrap_or("none");
        *counts[c - 1].entry(code.to_string()).or_insert(0) += 1;
    }
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(i, by_country)| {
            let cells = assignment.sizes[i];
            let shares = by_country
                .into_iter()
                .map(|(code, n)| (code, 100.0 * n as f64 / cells as f64))
                .collect();
            CommunityShares {
                community: i + 1,
                cells,
                shares,
            }
        })
        .collect())
}

/// Most frequent label per group (`None` for empty groups); ties go to the
/// smallest label.
pub fn majority_labels<L: Ord + Clone>(groups: usize, members: impl IntoIterator<Item = (usize, L)>) -> Vec<Option<L>> {
    let mut counts: Vec<BTreeMap<L, usize>> = vec![BTreeMap::new(); groups];
    for (g, label) in members {
        *counts[g].entry(label).or_insert(0) += 1;
    }
    counts
        .into_iter()
        .map(|c| {
            let best = c.values().copied().max()?;
            c.into_iter().find(|&(_, n)| n == best).map(|(l, _)| l)
        })
        .collect()
}

/// Hubert–Arabie adjusted Rand index between two labelings.
pub fn adjusted_rand_index<A: Ord, B: Ord>(a: &[A], b: &[B]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Invalid("labelings differ in length".into()));
    }
    let pairs = |n: usize| (n as f64) * (n as f64 - 1.0) / 2.0;
    let mut joint: BTreeMap<(&A, &B), usize> = BTreeMap::new();
    let mut rows: BTreeMap<&A, usize> = BTreeMap::new();
    let mut cols: BTreeMap<&B, usize> = BTreeMap::new();
    for (x, y) in a.iter().zip(b) {
        *joint.entry((x, y)).or_insert(0) += 1;
        *rows.entry(x).or_insert(0) += 1;
        *cols.entry(y).or_insert(0) += 1;
    }
    let index: f64 = joint.values().map(|&n| pairs(n)).sum();
    let sum_a: f64 = rows.values().map(|&n| pairs(n)).sum();
    let sum_b: f64 = cols.values().map(|&n| pairs(n)).sum();
    let total = pairs(a.len());
    let expected = if total > 0.0 { sum_a * sum_b / total } else { 0.0 };
    let max = 0.5 * (sum_a + sum_b);
    if max == expected {
        // both labelings trivial (all-one or all-singletons) and identical in form
        return Ok(1.0);
    }
    Ok((index - expected) / (max - expected))
}
