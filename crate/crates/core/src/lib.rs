//! Weighted-network toolkit: force-directed layouts minimizing the
//! (a,r)-energy model, clusterings maximizing generalized modularity, and the
//! simplex-embedding transformation showing that the two quality measures
//! coincide.
//!
//! The pieces fit together like this:
//!
//! * [`graph`] holds the immutable weighted [`Network`] with its density
//!   analytics and structural transformations,
//! * [`energy`] evaluates (a,r)-energy, forces, and gradients, with
//!   [`bhtree`] providing Barnes-Hut-approximated repulsion,
//! * [`layout`] minimizes the energy iteratively,
//! * [`cluster`] maximizes modularity by agglomeration and multi-level
//!   refinement,
//! * [`equivalence`] embeds clusterings as simplex layouts and verifies
//!   modularity = -energy,
//! * [`netgen`], [`io`], and [`svg`] supply fixtures, file formats, and
//!   rendering.

pub mod bhtree;
pub mod cluster;
pub mod energy;
pub mod equivalence;
pub mod error;
pub mod graph;
pub mod io;
pub mod layout;
pub mod netgen;
pub mod svg;

pub use bhtree::BhTree;
pub use cluster::{
    agglomerate, auto_repulsion_exponent, cluster_graph, exhaustive_best_clustering, join_delta,
    maximize_modularity, modularity, move_delta, refine, ClusterGraph, Clustering, MergeHierarchy,
};
pub use energy::{
    ar_energy, ar_gradient, attraction_force, net_force, repulsion_force,
    two_vertex_optimal_distance, EnergyParams,
};
pub use equivalence::{
    clustering_to_simplex_layout, consistency_report, normalized_energy, normalized_params,
    simplex_corners, verify_equivalence, ConsistencyReport, EquivalenceCheck,
};
pub use error::{Error, Result};
pub use graph::{Edge, Network, VertexWeightMode};
pub use layout::{minimize_energy, Layout, LayoutOptions, LayoutResult, LayoutState, StepOutcome};
pub use netgen::{figure2_networks, planted_partition, two_vertex_network, PlantedPartitionSpec};
pub use svg::render_svg;
