use crate::common::{load_spec, resolve_mu, EXIT_CLAIM_VIOLATED, EXIT_OK};
use anyhow::{anyhow, Context};
use clap::Args;
use qldc_core::cert::{replay, Certificate};
use qldc_core::Tolerances;
use std::path::PathBuf;

#[derive(Args)]
pub struct ReportArgs {
    /// Certificate file written by `reduce`.
    pub certificate: PathBuf,
    /// Recompute the recorded biases against this spec file.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Input distribution for the replay.
    #[arg(long, default_value = "uniform")]
    pub mu: String,
    /// human | json
    #[arg(long, default_value = "human")]
    pub format: String,
}

pub fn run(args: ReportArgs) -> anyhow::Result<i32> {
    let text = std::fs::read_to_string(&args.certificate)
        .with_context(|| format!("reading {}", args.certificate.display()))?;
    let cert: Certificate =
        serde_json::from_str(&text).with_context(|| "parsing certificate JSON")?;

    if args.format == "json" {
        println!("{}", serde_json::to_string_pretty(&cert)?);
    } else {
        println!(
            "certificate v{}  seed {}  strategy {}",
            cert.version, cert.seed, cert.strategy
        );
        println!(
            "input       {} {} n={} m={} (q={}, {}={}, ε={})  hash {}",
            cert.input.species,
            cert.input.kind,
            cert.input.n,
            cert.input.m,
            cert.input.q,
            if cert.input.kind.contains("ldc") || cert.input.kind.contains("ldqc") {
                "δ"
            } else {
                "c"
            },
            cert.input.second,
            cert.input.eps,
            cert.input.code_hash
        );
        println!("mu          {}", cert.mu);
        println!("stages:");
        for s in &cert.stages {
            println!(
                "  {:<22} {:<34} q={} c|δ={:<10.6} ε={:<10.6} {}",
                s.stage, s.kind, s.q, s.second, s.eps, s.formula
            );
        }
        println!(
            "search      {} via {} ({} candidates, threshold {:.6}, best {} at {:.6})",
            if cert.search.success {
                "SUCCESS"
            } else {
                "FAILED"
            },
            cert.search.strategy,
            cert.search.candidates_evaluated,
            cert.search.threshold,
            cert.search.best,
            cert.search.best_min_bias
        );
        if let Some(s_star) = &cert.s_star {
            println!("S*          {s_star}");
        }
        for mrec in &cert.matchings {
            let sets: Vec<String> = mrec
                .sets
                .iter()
                .zip(mrec.signs.iter().chain(std::iter::repeat(&0)))
                .map(|(set, sign)| {
                    let inner: Vec<String> = set.iter().map(|p| p.to_string()).collect();
                    let sign_str = match sign {
                        1 => "+",
                        -1 => "-",
                        _ => "·",
                    };
                    format!("{sign_str}{{{}}}", inner.join(","))
                })
                .collect();
            println!("matching    i={}  {}", mrec.index, sets.join(" "));
        }
        if let Some(biases) = &cert.biases {
            for idx in &biases.per_index {
                println!(
                    "bias        i={}  B̄={:.6} (threshold {:.6})",
                    idx.index + 1,
                    idx.b_bar,
                    biases.threshold
                );
            }
        }
        for v in &cert.verdicts {
            println!(
                "verdict     {:<20} {:<9} {}",
                v.stage,
                if v.holds { "HOLDS" } else { "VIOLATED" },
                v.witness.as_deref().unwrap_or("")
            );
        }
        if let Some(d) = &cert.derand {
            println!(
                "derand      {} cells, chose {}, E[good] = {:.6}, good = {:?} (bound {})",
                d.cells, d.chosen_cell, d.expected_good, d.good_indices, d.good_bound
            );
        }
    }

    if let Some(spec_path) = &args.spec {
        let tol = Tolerances::default();
        let spec = load_spec(spec_path, &tol)?;
        let (mu, _) = resolve_mu(&args.mu, spec.instance.n(), &tol)?;
        let result = replay(&cert, &spec.instance, &mu, &tol).map_err(|e| anyhow!("{e}"))?;
        println!(
            "replay      hash {} | {} biases | max ΔB {:.3e} | max ΔB' {:.3e} | {}",
            if result.hash_matches {
                "matches"
            } else {
                "MISMATCH"
            },
            result.biases_checked,
            result.max_b_deviation,
            result.max_b_prime_deviation,
            if result.ok { "OK" } else { "FAILED" }
        );
        if !result.ok {
            return Ok(EXIT_CLAIM_VIOLATED);
        }
    }
    Ok(EXIT_OK)
}
