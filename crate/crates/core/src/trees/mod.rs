//! Perfect-tree combinatorics: finite split structure, E0-trees with their
//! branch maps and prunes, and finite-horizon E2-trees.

pub mod e0;
pub mod e2;
pub mod finite;
pub mod prune;

pub use e0::{e0_level_bounds, e0_phi, same_block_trees, BlockPair, E0Tree};
pub use e2::{
    build_e2_family, build_e2_tree, e2_phi, gap_sum, verify_e2_family, verify_e2_tree,
    window_delta, E2Tree, E2TreeFamily, GMap,
};
pub use finite::{all_words, lambda_map, splits, xi_map, FiniteTree};
pub use prune::{three_prune, two_prune};
