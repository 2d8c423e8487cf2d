//! Private information retrieval from smooth codes: scheme construction,
//! exact privacy auditing, retrieval simulation, and the minimax
//! worst-case decoder via zero-sum linear programming.

pub mod game;
pub mod lp;
pub mod privacy;
pub mod scheme;

pub use game::{
    enumerate_candidate_pool, game_matrix, minimax_decoder, Candidate, CandidatePool, GameMatrix,
    MinimaxSolution,
};
pub use lp::{solve_zero_sum, GameSolution};
pub use privacy::{
    audit_transcript, server_marginals, verify_privacy, EmpiricalAudit, PrivacyReport, ServerAudit,
};
pub use scheme::{
    build_pir_scheme, complete_matching, simulate_retrievals, PirReconstruction, PirScheme,
    TranscriptLog, TranscriptRow,
};
