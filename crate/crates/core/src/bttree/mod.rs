//! The Bruhat-Tits tree of PGL_2(k_p).

pub mod padic;
pub mod tree;

pub use padic::PadicScalar;
pub use tree::{
    center, count_outgoing_paths, count_outgoing_paths_exact, endomorphism_count_bound, enumerate_outgoing_paths,
    triple_invariant, triple_to_curve_data, vertex_from_matrix, CurveData, Matrix2, TreeVertex, TripleInvariant,
};
