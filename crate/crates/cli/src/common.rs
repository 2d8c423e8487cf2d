//! Shared plumbing: spec loading, claim parsing, μ resolution, output.

use anyhow::{anyhow, bail, Context};
use qldc_core::codes::{CodeInstance, CodeKind, CodeParams, InputDistribution};
use qldc_core::specfile::{parse_code_spec, parse_mu, ParsedSpec};
use qldc_core::Tolerances;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CLAIM_VIOLATED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SEARCH_FAILED: i32 = 3;

/// Comma-separated overrides: `trace=1e-10,sum=1e-10,herm=1e-10,psd=1e-10,
/// recon=1e-9,max-qubits=8,budget=1000000`.
pub fn parse_tolerances(spec: Option<&str>) -> anyhow::Result<Tolerances> {
    let mut tol = Tolerances::default();
    let Some(spec) = spec else { return Ok(tol) };
    for part in spec.split(',') {
        let Some((key, value)) = part.split_once('=') else {
            bail!("tolerance override {part:?} is not key=value");
        };
        match key.trim() {
            "trace" => tol.trace = value.parse().context("trace tolerance")?,
            "sum" => tol.sum = value.parse().context("sum tolerance")?,
            "herm" => tol.herm = value.parse().context("herm tolerance")?,
            "psd" => tol.psd = value.parse().context("psd tolerance")?,
            "recon" => tol.recon = value.parse().context("recon tolerance")?,
            "max-qubits" => tol.max_qubits = value.parse().context("max-qubits")?,
            "budget" => tol.enumeration_budget = value.parse().context("budget")?,
            other => bail!("unknown tolerance key {other:?}"),
        }
    }
    Ok(tol)
}

/// One line summarizing measured parameters of generated instances.
pub fn measured_line(measured: &Option<CodeParams>) -> Option<String> {
    measured.as_ref().map(|p| format!("measured    {p}"))
}

pub fn load_spec(path: &Path, tol: &Tolerances) -> anyhow::Result<ParsedSpec> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading spec file {}", path.display()))?;
    parse_code_spec(&text, tol).map_err(|e| anyhow!("{}: {e}", path.display()))
}

/// `q:second:eps`, e.g. `2:2:0.5`. The kind comes from the spec file or the
/// --kind flag.
pub fn parse_claim_numbers(s: &str) -> anyhow::Result<(usize, f64, f64)> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        bail!("claim must be q:c:eps or q:delta:eps, got {s:?}");
    }
    let q = parts[0].parse::<usize>().context("claim q")?;
    let second = parts[1].parse::<f64>().context("claim second parameter")?;
    let eps = parts[2].parse::<f64>().context("claim eps")?;
    Ok((q, second, eps))
}

pub fn resolve_claim(
    claim: &str,
    kind_flag: Option<&str>,
    spec_kind: Option<CodeKind>,
) -> anyhow::Result<CodeParams> {
    let (q, second, eps) = parse_claim_numbers(claim)?;
    let kind = match kind_flag {
        Some(k) => CodeKind::parse(k).map_err(|e| anyhow!("{e}"))?,
        None => spec_kind.ok_or_else(|| {
            anyhow!("no claim kind: set `kind = ...` in the spec file or pass --kind")
        })?,
    };
    CodeParams::new(kind, q, second, eps).map_err(|e| anyhow!("{e}"))
}

pub fn resolve_mu(
    mu_flag: &str,
    n: usize,
    tol: &Tolerances,
) -> anyhow::Result<(InputDistribution, String)> {
    if mu_flag == "uniform" {
        return Ok((InputDistribution::uniform(n), "uniform".into()));
    }
    let path = PathBuf::from(mu_flag);
    let text = std::fs::read_to_string(&path)
        .with_context(|| format!("reading mu file {}", path.display()))?;
    let mu = parse_mu(&text, n, tol).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    Ok((mu, format!("file:{}", path.display())))
}

pub fn write_output(out: Option<&Path>, body: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
        }
        None => print!("{body}"),
    }
    Ok(())
}

pub fn species_summary(instance: &CodeInstance) -> String {
    format!(
        "{} code, n = {}, m = {}",
        instance.species(),
        instance.n(),
        instance.m()
    )
}
