use crate::common::{
    load_spec, parse_tolerances, resolve_claim, resolve_mu, species_summary, write_output,
    EXIT_CLAIM_VIOLATED, EXIT_OK,
};
use anyhow::{anyhow, bail};
use clap::Args;
use qldc_core::codes::{ClassicalCodeRef, CodeFamily, CodeInstance};
use qldc_core::pir::{
    audit_transcript, build_pir_scheme, enumerate_candidate_pool, minimax_decoder,
    simulate_retrievals, verify_privacy,
};
use qldc_core::reduce::matching::{build_matching, good_query_sets_classical};
use std::collections::BTreeMap;
use std::path::PathBuf;

#[derive(Args)]
pub struct PirArgs {
    /// Classical smooth code spec (TOML).
    #[arg(long)]
    pub spec: PathBuf,
    /// Smooth claim q:c:eps.
    #[arg(long)]
    pub claim: String,
    /// Claim kind override (else the spec file's `kind`).
    #[arg(long)]
    pub kind: Option<String>,
    /// Input distribution: "uniform" or a TOML file.
    #[arg(long, default_value = "uniform")]
    pub mu: String,
    /// Number of simulated retrievals.
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also solve the worst-case decoder game for every index.
    #[arg(long, default_value_t = false)]
    pub minimax: bool,
    /// Candidate budget for the minimax pool.
    #[arg(long, default_value_t = 200_000)]
    pub budget: u64,
    /// Write the retrieval transcript (CSV) here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Tolerance overrides, e.g. trace=1e-10,recon=1e-9,max-qubits=8.
    #[arg(long)]
    pub tolerances: Option<String>,
}

pub fn run(args: PirArgs) -> anyhow::Result<i32> {
    let tol = parse_tolerances(args.tolerances.as_deref())?;
    let spec = load_spec(&args.spec, &tol)?;
    let claim = resolve_claim(&args.claim, args.kind.as_deref(), spec.claimed_kind)?;
    if claim.kind.family != CodeFamily::Smooth {
        bail!("pir expects a smooth classical claim, got {}", claim.kind);
    }
    let CodeInstance::Classical { code, decoder } = &spec.instance else {
        bail!(
            "pir needs a classical code spec, got {}",
            spec.instance.species()
        );
    };
    let (mu, mu_label) = resolve_mu(&args.mu, code.n(), &tol)?;
    let q = claim.q;
    let (c, eps) = (claim.second, claim.eps);
    let m = code.m();
    if q == 0 || m % q != 0 {
        bail!("q = {q} does not divide m = {m}");
    }

    println!("input       {}", species_summary(&spec.instance));
    println!("claim       {claim}");
    println!("mu          {mu_label}");

    // Matchings from the good-edge structure under μ.
    let mut matchings = Vec::new();
    let mut tables = BTreeMap::new();
    for i in 0..code.n() {
        let edges =
            good_query_sets_classical(ClassicalCodeRef::Plain(code), decoder, i, &mu, eps, &tol)
                .map_err(|e| anyhow!("{e}"))?;
        let matching = build_matching(&edges, m, q, c, eps).map_err(|e| anyhow!("{e}"))?;
        for set in &matching.sets {
            let table = decoder
                .output(i, set)
                .ok_or_else(|| anyhow!("decoder has no output table for set {set}"))?;
            tables.insert((i, *set), table.clone());
        }
        matchings.push(matching.sets);
    }
    let scheme = build_pir_scheme(code, q, matchings, tables).map_err(|e| anyhow!("{e}"))?;

    // Privacy audit: exact rational marginals.
    let privacy = verify_privacy(&scheme);
    for audit in &privacy.servers {
        println!(
            "server {}   max TV {}  ({})",
            audit.server + 1,
            audit.max_tv,
            if audit.exactly_uniform_across_indices {
                "identical across indices"
            } else {
                "LEAKS the requested index"
            }
        );
    }

    // Analytic and simulated success.
    let bound = 0.5 + eps * eps / (2.0 * c);
    let mut worst_analytic = f64::INFINITY;
    for i in 0..code.n() {
        let s = scheme
            .analytic_success(i, &mu)
            .map_err(|e| anyhow!("{e}"))?;
        worst_analytic = worst_analytic.min(s);
        println!("analytic    index {} success {:.9}", i + 1, s);
    }
    println!("bound       1/2 + ε²/(2c) = {bound:.9}");
    let log =
        simulate_retrievals(&scheme, args.trials, args.seed, &mu).map_err(|e| anyhow!("{e}"))?;
    println!(
        "simulated   {} retrievals, success rate {:.6} (seed {})",
        args.trials,
        log.success_rate(),
        args.seed
    );
    let empirical = audit_transcript(&log, scheme.n, scheme.m, scheme.q);
    for (server, tv) in empirical.per_server_max_tv.iter().enumerate() {
        println!(
            "empirical   server {} max TV {:.4} over {} retrievals",
            server + 1,
            tv,
            empirical.retrievals
        );
    }
    if let Some(path) = &args.out {
        write_output(Some(path), &log.to_csv())?;
        println!("transcript  {}", path.display());
    }

    if args.minimax {
        for i in 0..code.n() {
            let pool =
                enumerate_candidate_pool(code, decoder, i, q, c, eps, args.budget, args.seed, &tol)
                    .map_err(|e| anyhow!("{e}"))?;
            let solution = minimax_decoder(code, i, &pool).map_err(|e| anyhow!("{e}"))?;
            println!(
                "minimax     index {} value {:.9}{} (gap {:.3e}, {} candidates, {} pivots)",
                i + 1,
                solution.value_f64(),
                if solution.pool_exhaustive {
                    ""
                } else {
                    " [lower bound: pool truncated]"
                },
                solution.gap_f64(),
                pool.candidates.len(),
                solution.pivots
            );
        }
    }

    let ok = privacy.private && worst_analytic + 1e-9 >= bound;
    if !ok {
        println!("audit       FLAGGED");
    }
    Ok(if ok { EXIT_OK } else { EXIT_CLAIM_VIOLATED })
}
