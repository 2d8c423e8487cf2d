//! The constructive reduction pipeline: good query sets, disjoint
//! matchings, the Pauli sequence search, randomized-code construction,
//! derandomization, and the smooth/locally-decodable parameter conversions.

pub mod bias;
pub mod build;
pub mod convert;
pub mod derand;
pub mod matching;
pub mod pipeline;
pub mod search;

pub use bias::{
    decomposition_bound_check, measurement_bias, pauli_bias, pauli_bias_raw, DecompositionReport,
};
pub use build::{build_parity_decoder, build_randomized_code};
pub use convert::{ldc_to_smooth, smooth_to_ldc, ConvertedParams, SmoothedDecoder};
pub use derand::{derandomize, DerandResult, RandomnessCoupling};
pub use matching::{
    build_matching, canonical_edge_order, good_query_sets, GoodEdgeSet, Matching, MatchingFamily,
};
pub use pipeline::{
    parameter_arithmetic, pipeline_ldqc_to_ldc, pipeline_ldqc_to_rldc, run_smooth_pipeline,
    DerandStage, PipelineConfig, PipelineResult, PipelineTarget, SmoothPipelineResult,
    SmoothSuccess, StageParams,
};
pub use search::{
    find_pauli_sequence, BiasReport, IndexBias, SearchConfig, SearchOutcome, SearchResult,
    SearchStrategy, SetBias,
};
