//! Finite-scale experiments: copies of a pattern in the matrix hypergraph,
//! colorings and color vectors, copy-count bounds, search for subtrees with
//! monochromatic height-`k` subtrees, and the end-to-end pipeline.

mod coloring;
mod copies;
mod milliken;
mod pipeline;

pub use coloring::{ColorRule, ColorVector, Colorable, Coloring};
pub use copies::{
    color_vector, color_vector_of, copies_in_g, copies_in_g_with, degree_upper_bound,
    degree_upper_bound_at, edge_triple_count, DegreeBound, MatrixCopy, COPY_SEARCH_LIMIT,
    MAX_PATTERN_VERTICES,
};
pub use milliken::{
    is_monochromatic, milliken_exhaustive_reversed, milliken_search, milliken_search_by,
    MillikenOutcome, MillikenReport, DEFAULT_MILLIKEN_BUDGET,
};
pub use pipeline::{run_pipeline, PipelineConfig, PipelineReport, ThetaRoute};
