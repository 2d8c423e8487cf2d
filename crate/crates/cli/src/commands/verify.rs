use crate::common::{
    load_spec, measured_line, parse_tolerances, resolve_claim, resolve_mu, species_summary,
    write_output, EXIT_CLAIM_VIOLATED, EXIT_OK,
};
use anyhow::anyhow;
use clap::Args;
use qldc_core::cert::code_hash;
use qldc_core::codes::verify_params;
use serde_json::json;
use std::path::PathBuf;

#[derive(Args)]
pub struct VerifyArgs {
    /// Code spec file (TOML).
    #[arg(long)]
    pub spec: PathBuf,
    /// Claimed parameters, q:c:eps or q:delta:eps.
    #[arg(long)]
    pub claim: String,
    /// Claim kind override (else the spec file's `kind`).
    #[arg(long)]
    pub kind: Option<String>,
    /// Input distribution: "uniform" or a TOML file.
    #[arg(long, default_value = "uniform")]
    pub mu: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write the structured report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// human | json
    #[arg(long, default_value = "human")]
    pub format: String,
    /// Tolerance overrides, e.g. trace=1e-10,recon=1e-9,max-qubits=8.
    #[arg(long)]
    pub tolerances: Option<String>,
}

pub fn run(args: VerifyArgs) -> anyhow::Result<i32> {
    let tol = parse_tolerances(args.tolerances.as_deref())?;
    let spec = load_spec(&args.spec, &tol)?;
    let claim = resolve_claim(&args.claim, args.kind.as_deref(), spec.claimed_kind)?;
    let (mu, mu_label) = resolve_mu(&args.mu, spec.instance.n(), &tol)?;

    let report =
        verify_params(&spec.instance, &claim, Some(&mu), &tol).map_err(|e| anyhow!("{e}"))?;

    let structured = json!({
        "command": "verify",
        "seed": args.seed,
        "spec": args.spec.display().to_string(),
        "code_hash": code_hash(&spec.instance),
        "code": species_summary(&spec.instance),
        "mu": mu_label,
        "claim": claim.to_string(),
        "holds": report.holds,
        "witness": report.witness.as_ref().map(|w| w.to_string()),
        "success_cases": report.success_cases,
        "corruptions_checked": report.corruptions_checked,
    });

    match args.format.as_str() {
        "json" => {
            let body = serde_json::to_string_pretty(&structured)? + "\n";
            write_output(args.out.as_deref(), &body)?;
        }
        "human" => {
            let mut body = String::new();
            body.push_str(&format!("spec        {}\n", args.spec.display()));
            body.push_str(&format!(
                "code        {}\n",
                species_summary(&spec.instance)
            ));
            if let Some(line) = measured_line(&spec.measured) {
                body.push_str(&line);
                body.push('\n');
            }
            body.push_str(&format!("mu          {mu_label}\n"));
            body.push_str(&format!("seed        {}\n", args.seed));
            body.push_str(&format!("claim       {claim}\n"));
            body.push_str(&format!(
                "checked     {} success cases, {} corruptions\n",
                report.success_cases, report.corruptions_checked
            ));
            match &report.witness {
                None => body.push_str("verdict     HOLDS\n"),
                Some(w) => body.push_str(&format!("verdict     VIOLATED\nwitness     {w}\n")),
            }
            write_output(args.out.as_deref(), &body)?;
        }
        other => anyhow::bail!("unknown format {other:?}"),
    }
    Ok(if report.holds {
        EXIT_OK
    } else {
        EXIT_CLAIM_VIOLATED
    })
}
