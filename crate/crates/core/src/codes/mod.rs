//! Code species (classical, randomized, quantum), their decoders, exact
//! success evaluation, claim verification, adversary search, and the example
//! code corpus.

pub mod adversary;
pub mod bits;
pub mod decoder;
pub mod dist;
pub mod embed;
pub mod eval;
pub mod generators;
pub mod types;
pub mod verify;

pub use adversary::{worst_case_error, Corruption, Replacement, WorstCase};
pub use bits::Word;
pub use decoder::{ClassicalDecoder, OutputTable, QuantumDecoder, QueryPlan, QuerySet};
pub use dist::InputDistribution;
pub use embed::{embed_classical, embed_randomized};
pub use eval::{
    bias_classical, query_marginal, success_classical, success_quantum, ClassicalCodeRef,
};
pub use generators::{
    basis_code, binary_entropy, hadamard_code, qrac_2to1, qrac_3to1, qrac_length_bound,
    random_smooth_instance, QracInstance, RandomSmoothInstance,
};
pub use types::{
    ClassicalCode, CodeFamily, CodeInstance, CodeKind, CodeParams, ErrorPattern, QuantumCode,
    RandomizedCode,
};
pub use verify::{verify_params, Clause, VerifyReport, Witness};
