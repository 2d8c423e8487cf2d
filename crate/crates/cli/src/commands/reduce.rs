use crate::common::{
    load_spec, measured_line, parse_tolerances, resolve_claim, resolve_mu, species_summary,
    write_output, EXIT_OK, EXIT_SEARCH_FAILED,
};
use anyhow::{anyhow, bail};
use clap::Args;
use qldc_core::cert::{certificate_from_pipeline, certificate_from_smooth};
use qldc_core::codes::{CodeFamily, CodeInstance};
use qldc_core::reduce::{
    parameter_arithmetic, pipeline_ldqc_to_ldc, pipeline_ldqc_to_rldc, run_smooth_pipeline,
    PipelineConfig, PipelineTarget, SearchConfig, SearchStrategy, StageParams,
};
use std::path::PathBuf;

#[derive(Args)]
pub struct ReduceArgs {
    /// Code spec file (TOML); must be a quantum code.
    #[arg(long)]
    pub spec: PathBuf,
    /// Claimed parameters: q:delta:eps for ldqc inputs, q:c:eps for
    /// smooth-quantum inputs.
    #[arg(long)]
    pub claim: String,
    /// Claim kind override (else the spec file's `kind`).
    #[arg(long)]
    pub kind: Option<String>,
    /// Final stage for ldqc inputs: rldc (randomized) or ldc (deterministic).
    #[arg(long, default_value = "rldc")]
    pub target: String,
    /// Noise rate δ' claimed for the output code.
    #[arg(long, default_value_t = 0.0)]
    pub delta_prime: f64,
    /// Input distribution: "uniform" or a TOML file.
    #[arg(long, default_value = "uniform")]
    pub mu: String,
    /// auto | exhaustive | sample | greedy
    #[arg(long, default_value = "auto")]
    pub strategy: String,
    /// Sample budget for the sampling strategy.
    #[arg(long, default_value_t = 100_000)]
    pub budget: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the certificate here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Parameter arithmetic only; no search, no certificate.
    #[arg(long, default_value_t = false)]
    pub dry_run: bool,
    /// Skip verification of the input claim (the restricted-adversary
    /// enumeration can be expensive).
    #[arg(long, default_value_t = false)]
    pub no_verify_input: bool,
    /// Tolerance overrides, e.g. trace=1e-10,recon=1e-9,max-qubits=8.
    #[arg(long)]
    pub tolerances: Option<String>,
}

fn print_stage_table(stages: &[StageParams]) {
    println!(
        "{:<22} {:<34} {:>3} {:>12} {:>12}  formula",
        "stage", "kind", "q", "c|δ", "ε"
    );
    for s in stages {
        println!(
            "{:<22} {:<34} {:>3} {:>12.6} {:>12.6}  {}",
            s.stage, s.kind, s.q, s.second, s.eps, s.formula
        );
    }
}

pub fn run(args: ReduceArgs) -> anyhow::Result<i32> {
    let tol = parse_tolerances(args.tolerances.as_deref())?;
    let spec = load_spec(&args.spec, &tol)?;
    let claim = resolve_claim(&args.claim, args.kind.as_deref(), spec.claimed_kind)?;
    let (mu, mu_label) = resolve_mu(&args.mu, spec.instance.n(), &tol)?;
    let target = match args.target.as_str() {
        "rldc" => PipelineTarget::RandomizedLdc,
        "ldc" => PipelineTarget::Ldc,
        other => bail!("unknown target {other:?}; use rldc or ldc"),
    };
    let config = PipelineConfig {
        search: SearchConfig {
            strategy: SearchStrategy::parse(&args.strategy).map_err(|e| anyhow!("{e}"))?,
            seed: args.seed,
            sample_budget: args.budget,
            ..SearchConfig::default()
        },
        verify_input: !args.no_verify_input,
        verify_stages: true,
        snap_bits: 48,
    };

    if args.dry_run {
        let stages = match claim.kind.family {
            CodeFamily::Ldqc => parameter_arithmetic(&claim, args.delta_prime, target)
                .map_err(|e| anyhow!("{e}"))?,
            CodeFamily::SmoothQuantum => vec![
                StageParams {
                    stage: "input".into(),
                    kind: claim.kind.to_string(),
                    q: claim.q,
                    second: claim.second,
                    eps: claim.eps,
                    formula: "(q, c, ε)".into(),
                },
                StageParams {
                    stage: "randomized-smooth".into(),
                    kind: "mu-average-randomized-smooth".into(),
                    q: claim.q,
                    second: claim.q as f64 * claim.second / claim.eps,
                    eps: claim.eps / 4f64.powi(claim.q as i32 + 1),
                    formula: "(q, qc/ε, ε/4^(q+1))".into(),
                },
            ],
            other => bail!(
                "reduce expects ldqc or smooth-quantum claims, got {}",
                other.name()
            ),
        };
        print_stage_table(&stages);
        return Ok(EXIT_OK);
    }

    let CodeInstance::Quantum { code, decoder } = &spec.instance else {
        bail!(
            "reduce needs a quantum code spec, got {}",
            spec.instance.species()
        );
    };

    println!("input       {}", species_summary(&spec.instance));
    if let Some(line) = measured_line(&spec.measured) {
        println!("{line}");
    }
    println!("claim       {claim}");
    println!("mu          {mu_label}");
    println!("seed        {}", args.seed);

    let (certificate, succeeded, diagnostics) = match claim.kind.family {
        CodeFamily::Ldqc => {
            let result = match target {
                PipelineTarget::RandomizedLdc => pipeline_ldqc_to_rldc(
                    code,
                    decoder,
                    &claim,
                    &mu,
                    args.delta_prime,
                    &config,
                    &tol,
                ),
                PipelineTarget::Ldc => pipeline_ldqc_to_ldc(
                    code,
                    decoder,
                    &claim,
                    &mu,
                    args.delta_prime,
                    &config,
                    &tol,
                ),
            }
            .map_err(|e| anyhow!("{e}"))?;
            print_stage_table(&result.arithmetic);
            let succeeded = result.search_succeeded();
            let diag = failure_diag(&result.smooth_run.search);
            let cert = certificate_from_pipeline(&result, &spec.instance, &mu_label, args.seed);
            (cert, succeeded, diag)
        }
        CodeFamily::SmoothQuantum => {
            let result = run_smooth_pipeline(code, decoder, &claim, &mu, &config, &tol)
                .map_err(|e| anyhow!("{e}"))?;
            let succeeded = result.search_succeeded();
            let diag = failure_diag(&result.search);
            let cert = certificate_from_smooth(&result, &spec.instance, &mu_label, args.seed);
            print_stage_table(&cert.stages);
            (cert, succeeded, diag)
        }
        other => bail!(
            "reduce expects ldqc or smooth-quantum claims, got {}",
            other.name()
        ),
    };

    println!(
        "search      {} ({} candidates, threshold {:.6})",
        if succeeded { "SUCCESS" } else { "FAILED" },
        certificate.search.candidates_evaluated,
        certificate.search.threshold
    );
    if let Some(s_star) = &certificate.s_star {
        println!("S*          {s_star}");
    }
    for v in &certificate.verdicts {
        println!(
            "verdict     {:<20} {}  {}",
            v.stage,
            if v.holds { "HOLDS" } else { "VIOLATED" },
            v.witness.as_deref().unwrap_or("")
        );
    }
    if !succeeded {
        println!("diagnostics {diagnostics}");
    }

    let body = serde_json::to_string_pretty(&certificate)? + "\n";
    match &args.out {
        Some(path) => {
            write_output(Some(path), &body)?;
            println!("certificate {}", path.display());
        }
        None => {
            // No --out: certificate goes to stdout after the table.
            print!("{body}");
        }
    }
    Ok(if succeeded {
        EXIT_OK
    } else {
        EXIT_SEARCH_FAILED
    })
}

fn failure_diag(search: &qldc_core::reduce::SearchResult) -> String {
    match &search.outcome {
        qldc_core::reduce::SearchOutcome::Found { .. } => String::new(),
        qldc_core::reduce::SearchOutcome::Failed {
            best,
            best_min,
            per_index,
            violating,
            ..
        } => {
            let indices: Vec<String> = violating.iter().map(|i| (i + 1).to_string()).collect();
            format!(
                "best {best} reaches min bias {best_min:.6}; per-index {per_index:?}; below threshold at indices [{}]",
                indices.join(",")
            )
        }
    }
}
