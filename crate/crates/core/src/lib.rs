//! Exact workbench for locally decodable codes at small scale.
//!
//! Models classical, randomized, and quantum codes with local decoders,
//! evaluates success probabilities and query smoothness by full enumeration,
//! runs the quantum-to-classical reduction pipeline (good query sets, disjoint
//! matchings, Pauli measurement sequence, randomized code, derandomized
//! code), and builds private information retrieval schemes from smooth codes,
//! including the minimax worst-case decoder via linear programming.
//!
//! Everything is sized for exhaustive verification: dense matrices up to
//! ~10 qubits, explicit enumeration with declared budgets, and exact
//! rational arithmetic where a claim is "exactly zero" or "exactly equal".

pub mod cert;
pub mod codes;
pub mod error;
pub mod pir;
pub mod quantum;
pub mod reduce;
pub mod rng;
pub mod specfile;
pub mod tol;

pub use error::{Error, Result};
pub use tol::Tolerances;
