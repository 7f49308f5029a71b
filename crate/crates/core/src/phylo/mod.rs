//! Phylogenetic trees and their ultrametric vectors.

mod newick;
mod ultrametric;

pub use newick::{parse_newick, Node, RootedTree};
pub use ultrametric::{
    default_labels, is_ultrametric, leaf_count, pair_index, subdominant_ultrametric,
    tree_to_vector, vector_to_tree, UltrametricVector, RECONSTRUCT_TOL,
};
