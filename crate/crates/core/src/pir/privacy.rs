//! Privacy audit: each server's query marginal must be identical across
//! every requested index, checked in exact rational arithmetic.

use super::lp::rational_to_f64;
use super::scheme::PirScheme;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct ServerAudit {
    pub server: usize,
    /// Largest total-variation distance between the query marginals of any
    /// two indices, as a float for display.
    pub max_tv: f64,
    /// The exact check: every pairwise distance is the zero rational.
    pub exactly_uniform_across_indices: bool,
    pub worst_pair: Option<(usize, usize)>,
}

#[derive(Debug, Serialize)]
pub struct PrivacyReport {
    pub servers: Vec<ServerAudit>,
    pub private: bool,
}

/// Per-(server, index) marginal over positions, exact.
pub fn server_marginals(scheme: &PirScheme) -> Vec<Vec<Vec<BigRational>>> {
    let mut out = vec![vec![vec![BigRational::zero(); scheme.m]; scheme.n]; scheme.q];
    for (i, dist) in scheme.query_dists.iter().enumerate() {
        for (p, tuple) in dist {
            for (server, &pos) in tuple.iter().enumerate() {
                out[server][i][pos] += p;
            }
        }
    }
    out
}

pub fn verify_privacy(scheme: &PirScheme) -> PrivacyReport {
    let marginals = server_marginals(scheme);
    let mut servers = Vec::with_capacity(scheme.q);
    let mut private = true;
    for (server, per_index) in marginals.iter().enumerate() {
        let mut max_tv = BigRational::zero();
        let mut worst_pair = None;
        for i1 in 0..scheme.n {
            for i2 in (i1 + 1)..scheme.n {
                let tv: BigRational = (0..scheme.m)
                    .map(|p| (&per_index[i1][p] - &per_index[i2][p]).abs())
                    .sum::<BigRational>()
                    / BigRational::from_integer(2.into());
                if tv > max_tv {
                    max_tv = tv.clone();
                    worst_pair = Some((i1, i2));
                }
            }
        }
        let exact = max_tv.is_zero();
        private &= exact;
        servers.push(ServerAudit {
            server,
            max_tv: rational_to_f64(&max_tv),
            exactly_uniform_across_indices: exact,
            worst_pair,
        });
    }
    PrivacyReport { servers, private }
}

/// Empirical counterpart computed from a transcript log: per-server query
/// frequencies per index, and the largest pairwise TV distance. Sampling
/// noise makes these approximate; the exact audit above is authoritative.
#[derive(Debug, Serialize)]
pub struct EmpiricalAudit {
    pub per_server_max_tv: Vec<f64>,
    pub retrievals: usize,
}

pub fn audit_transcript(
    log: &super::scheme::TranscriptLog,
    n: usize,
    m: usize,
    q: usize,
) -> EmpiricalAudit {
    let mut counts = vec![vec![vec![0usize; m]; n]; q];
    let mut per_index = vec![0usize; n];
    for row in &log.rows {
        per_index[row.i] += 1;
        for (server, &pos) in row.queries.iter().enumerate() {
            counts[server][row.i][pos] += 1;
        }
    }
    let per_server_max_tv = counts
        .iter()
        .map(|per_i| {
            let mut max_tv = 0.0f64;
            for i1 in 0..n {
                for i2 in (i1 + 1)..n {
                    if per_index[i1] == 0 || per_index[i2] == 0 {
                        continue;
                    }
                    let tv: f64 = (0..m)
                        .map(|p| {
                            (per_i[i1][p] as f64 / per_index[i1] as f64
                                - per_i[i2][p] as f64 / per_index[i2] as f64)
                                .abs()
                        })
                        .sum::<f64>()
                        / 2.0;
                    max_tv = max_tv.max(tv);
                }
            }
            max_tv
        })
        .collect();
    EmpiricalAudit {
        per_server_max_tv,
        retrievals: log.rows.len(),
    }
}
