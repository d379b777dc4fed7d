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

//! Statistics over cell networks: centrality suite, rank correlation,
//! bivariate classes, communities and hot spots.

mod bivariate;
mod community;
mod hotspot;
mod louvain;
mod spearman;

pub use bivariate::{bivariate_bins, classify_values, ValueClass};
pub use community::{adjusted_rand_index, community_country_distribution, majority_labels, CommunityShares};
pub use hotspot::{classify_z, getis_ord_gi_star, knn_neighbours, HotSpotClass, HotSpotResult};
pub use louvain::{louvain, modularity, singleton_modularity, CommunityAssignment, LouvainResult, SymmetricWeights};
pub use spearman::{average_ranks, pearson, spearman, spearman_matrix, SpearmanMatrix};

use crate::aggregate::CellNetwork;
use crate::centrality::{centrality_table, CentralityTable};
use crate::error::Result;
use crate::scalar::Scalar;

/// In/out degree, closeness and betweenness of every unit. Self-loops are
/// excluded from degrees and never lie on a shortest path.
pub fn centrality_suite<T: Scalar, K>(net: &CellNetwork<K>, weighted_degree: bool) -> Result<CentralityTable<T>> {
    centrality_table(&net.graph, weighted_degree)
}
