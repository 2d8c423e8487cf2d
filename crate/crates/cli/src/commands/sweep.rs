use crate::common::{parse_claim_numbers, write_output, EXIT_OK};
use anyhow::bail;
use clap::Args;
use qldc_core::codes::{CodeFamily, CodeKind, CodeParams};
use qldc_core::reduce::{parameter_arithmetic, smooth_to_ldc, PipelineTarget};
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(Args)]
pub struct SweepArgs {
    /// Grid to sweep: "delta-prime" (pipeline output parameters over δ')
    /// or "delta" (smooth→LDC tradeoff over δ).
    #[arg(long, default_value = "delta-prime")]
    pub grid: String,
    /// Claim numbers: q:delta:eps for delta-prime sweeps (ldqc input),
    /// q:c:eps for delta sweeps (smooth input).
    #[arg(long)]
    pub claim: String,
    /// rldc | ldc (delta-prime sweeps).
    #[arg(long, default_value = "rldc")]
    pub target: String,
    /// Number of grid points.
    #[arg(long, default_value_t = 20)]
    pub points: usize,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: SweepArgs) -> anyhow::Result<i32> {
    let (q, second, eps) = parse_claim_numbers(&args.claim)?;
    if args.points < 2 {
        bail!("--points must be at least 2");
    }
    let csv = match args.grid.as_str() {
        "delta-prime" => {
            let target = match args.target.as_str() {
                "rldc" => PipelineTarget::RandomizedLdc,
                "ldc" => PipelineTarget::Ldc,
                other => bail!("unknown target {other:?}"),
            };
            let input = CodeParams::new(CodeKind::plain(CodeFamily::Ldqc), q, second, eps)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            let four_q1 = 4f64.powi(q as i32 + 1);
            let bound = match target {
                PipelineTarget::RandomizedLdc => {
                    second * eps * eps / (q as f64 * q as f64 * four_q1)
                }
                PipelineTarget::Ldc => second * eps * eps / (2.0 * q as f64 * q as f64 * four_q1),
            };
            let mut csv = String::from("delta_prime,final_kind,final_q,final_delta,final_eps\n");
            for k in 0..args.points {
                let dp = bound * k as f64 / (args.points - 1) as f64;
                let stages =
                    parameter_arithmetic(&input, dp, target).map_err(|e| anyhow::anyhow!("{e}"))?;
                let last = stages.last().expect("nonempty");
                let _ = writeln!(
                    csv,
                    "{dp},{},{},{},{}",
                    last.kind, last.q, last.second, last.eps
                );
            }
            csv
        }
        "delta" => {
            let input = CodeParams::new(CodeKind::plain(CodeFamily::Smooth), q, second, eps)
                .map_err(|e| anyhow::anyhow!("{e}"))?;
            let bound = eps / second;
            let mut csv = String::from("delta,kind,q,eps_out,degenerate\n");
            for k in 0..args.points {
                let delta = bound * k as f64 / (args.points - 1) as f64;
                let out = smooth_to_ldc(&input, delta).map_err(|e| anyhow::anyhow!("{e}"))?;
                let _ = writeln!(
                    csv,
                    "{delta},{},{},{},{}",
                    out.kind, out.q, out.eps, out.degenerate
                );
            }
            csv
        }
        other => bail!("unknown grid {other:?}; use delta-prime or delta"),
    };
    write_output(args.out.as_deref(), &csv)?;
    Ok(EXIT_OK)
}
