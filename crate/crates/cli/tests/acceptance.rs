//! Acceptance suite: one test per criterion, each printing a PASS line.
//!
//! The corpus for criteria 3-5 and 7 is a deterministic family of seeded
//! random smooth quantum codes (n ≤ 3, m ≤ 4, q ≤ 2) whose parameters are
//! measured, not assumed, so every instance verifies by construction and
//! each quantitative guarantee is checked with zero slack beyond the stated
//! tolerances.

use qldc_core::codes::{hadamard_code, qrac_length_bound};
use qldc_core::codes::{
    qrac_2to1, qrac_3to1, random_smooth_instance, success_classical, success_quantum,
    verify_params, ClassicalCodeRef, CodeInstance, InputDistribution, QuantumCode, QuerySet,
    RandomSmoothInstance, Word,
};
use qldc_core::pir::{
    build_pir_scheme, enumerate_candidate_pool, minimax_decoder, simulate_retrievals,
    verify_privacy,
};
use qldc_core::reduce::matching::{build_matching, good_query_sets, good_query_sets_classical};
use qldc_core::reduce::{
    decomposition_bound_check, derandomize, find_pauli_sequence, ldc_to_smooth,
    run_smooth_pipeline, smooth_to_ldc, Matching, MatchingFamily, PipelineConfig, SearchConfig,
    SearchOutcome,
};
use qldc_core::Tolerances;
use std::time::Instant;

fn tol() -> Tolerances {
    Tolerances::default()
}

/// Deterministic corpus: at least 50 verified smooth quantum codes with
/// n ≤ 3, m ≤ 4, q ≤ 2.
fn corpus() -> Vec<RandomSmoothInstance> {
    let shapes = [
        (1usize, 2usize, 1usize),
        (1, 3, 2),
        (2, 2, 1),
        (2, 3, 2),
        (2, 4, 2),
        (3, 3, 1),
        (3, 4, 2),
        (3, 4, 1),
    ];
    let mut out = Vec::new();
    let mut seed = 0u64;
    while out.len() < 56 && seed < 400 {
        let (n, m, q) = shapes[(seed as usize) % shapes.len()];
        if let Ok(inst) = random_smooth_instance(seed, n, m, q, &tol()) {
            out.push(inst);
        }
        seed += 1;
    }
    assert!(
        out.len() >= 50,
        "only {} corpus instances generated",
        out.len()
    );
    out
}

fn verified_matchings(inst: &RandomSmoothInstance) -> MatchingFamily {
    let mu = InputDistribution::uniform(inst.code.n());
    let p = inst.params;
    let mut matchings = Vec::new();
    for i in 0..inst.code.n() {
        let edges = good_query_sets(&inst.code, &inst.decoder, i, &mu, p.eps, &tol()).unwrap();
        let matching = build_matching(&edges, inst.code.m(), p.q, p.second, p.eps)
            .unwrap_or_else(|e| panic!("seed {}: matching guarantee failed: {e}", inst.seed));
        matchings.push(matching);
    }
    MatchingFamily::new(inst.code.m(), p.q, matchings).unwrap()
}

#[test]
fn criterion_01_qrac_exemplar_success() {
    let start = Instant::now();
    let mu2 = InputDistribution::uniform(2);
    let two = qrac_2to1(&tol()).unwrap();
    for i in 0..2 {
        let s = success_quantum(&two.code, &two.decoder, i, &mu2, None, &tol()).unwrap();
        assert!(
            (s - 0.8535533906).abs() <= 1e-9,
            "2->1 bit {i}: success {s}"
        );
    }
    let mu3 = InputDistribution::uniform(3);
    let three = qrac_3to1(&tol()).unwrap();
    for i in 0..3 {
        let s = success_quantum(&three.code, &three.decoder, i, &mu3, None, &tol()).unwrap();
        assert!(
            (s - 0.7886751346).abs() <= 1e-9,
            "3->1 bit {i}: success {s}"
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("criterion 1 (QRAC exemplar success probabilities): PASS ({elapsed:?})");
}

#[test]
fn criterion_02_qrac_length_bound() {
    let eps2 = 0.5 / 2f64.sqrt();
    let bound2 = qrac_length_bound(2, eps2).unwrap();
    assert!(bound2 <= 1.0, "2->1 bound {bound2} exceeds m = 1");
    let eps3 = 0.5 / 3f64.sqrt();
    let bound3 = qrac_length_bound(3, eps3).unwrap();
    assert!(bound3 <= 1.0, "3->1 bound {bound3} exceeds m = 1");

    // Fabricated claim: 10 bits in 1 qubit at ε = 0.45 is rejected.
    let fabricated = qrac_length_bound(10, 0.45).unwrap();
    assert!(
        fabricated > 1.0,
        "fabricated claim not rejected: bound {fabricated}"
    );
    println!(
        "criterion 2 (length bound): PASS (2->1 slack {:.6}, 3->1 slack {:.6}, fabricated bound {:.3} > 1)",
        1.0 - bound2,
        1.0 - bound3,
        fabricated
    );
}

#[test]
fn criterion_03_matching_guarantee_on_corpus() {
    let corpus = corpus();
    assert!(corpus.len() >= 50);
    let mut checked = 0usize;
    for inst in &corpus {
        let claim = inst.params;
        let instance = CodeInstance::Quantum {
            code: inst.code.clone(),
            decoder: inst.decoder.clone(),
        };
        let report = verify_params(&instance, &claim, None, &tol()).unwrap();
        assert!(
            report.holds,
            "seed {}: measured claim did not verify: {:?}",
            inst.seed, report.witness
        );
        let family = verified_matchings(inst);
        let bound = claim.eps * inst.code.m() as f64 / (claim.q as f64 * claim.second);
        for i in 0..inst.code.n() {
            let sets = family.sets(i);
            assert!(
                sets.len() as f64 + 1e-12 >= bound,
                "seed {}: |M_{}| = {} below {bound}",
                inst.seed,
                i + 1,
                sets.len()
            );
            for (a, sa) in sets.iter().enumerate() {
                for sb in &sets[a + 1..] {
                    assert!(
                        sa.is_disjoint(sb),
                        "seed {}: overlap in M_{}",
                        inst.seed,
                        i + 1
                    );
                }
            }
            checked += 1;
        }
    }
    println!(
        "criterion 3 (matching size and disjointness): PASS ({} instances, {} matchings, zero violations)",
        corpus.len(),
        checked
    );
}

#[test]
fn criterion_04_decomposition_chain_on_corpus() {
    let corpus = corpus();
    let mut checked = 0usize;
    for inst in &corpus {
        let mu = InputDistribution::uniform(inst.code.n());
        let family = verified_matchings(inst);
        for i in 0..inst.code.n() {
            for set in family.sets(i) {
                let report = decomposition_bound_check(
                    &inst.code,
                    &inst.decoder,
                    i,
                    set,
                    &mu,
                    inst.params.q,
                    &tol(),
                )
                .unwrap();
                assert!(
                    (report.b - report.reconstructed).abs() <= 1e-8,
                    "seed {}: equality off by {:.3e}",
                    inst.seed,
                    (report.b - report.reconstructed).abs()
                );
                assert!(
                    report.chain_holds,
                    "seed {}: chain violated: {report:?}",
                    inst.seed
                );
                assert!(
                    report.max_term + 1e-9 >= report.b / 4f64.powi(inst.params.q as i32),
                    "seed {}: best word below B/4^q: {report:?}",
                    inst.seed
                );
                checked += 1;
            }
        }
    }
    println!(
        "criterion 4 (decomposition equality and quarter bound): PASS ({checked} (i,r) pairs)"
    );
}

#[test]
fn criterion_05_reduction_end_to_end_on_corpus() {
    let start = Instant::now();
    let corpus = corpus();
    let config = PipelineConfig {
        verify_input: false, // criterion 3 already verifies every instance
        ..PipelineConfig::default()
    };
    let mut successes = 0usize;
    let mut failures = 0usize;
    for inst in &corpus {
        let mu = InputDistribution::uniform(inst.code.n());
        let result = run_smooth_pipeline(
            &inst.code,
            &inst.decoder,
            &inst.params,
            &mu,
            &config,
            &tol(),
        )
        .unwrap();
        match &result.success {
            Some(success) => {
                successes += 1;
                let eps = inst.params.eps;
                let q = inst.params.q;
                let needed = 0.5 + eps / 4f64.powi(q as i32 + 1);
                for i in 0..inst.code.n() {
                    let s = success_classical(
                        ClassicalCodeRef::Randomized(&success.randomized),
                        &success.decoder,
                        i,
                        &mu,
                        None,
                    )
                    .unwrap();
                    assert!(
                        s + 1e-12 >= needed,
                        "seed {}: index {} success {s} below {needed}",
                        inst.seed,
                        i + 1
                    );
                }
                let verified = success.verified.as_ref().unwrap();
                assert!(verified.holds, "seed {}: {:?}", inst.seed, verified.witness);
            }
            None => failures += 1,
        }
    }
    assert!(
        successes >= 10,
        "too few successful searches to exercise the guarantee: {successes}"
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 300.0, "took {elapsed:?}");
    println!(
        "criterion 5 (end-to-end randomized smooth code): PASS ({successes} successes, {failures} documented failures, {elapsed:?})"
    );
}

#[test]
fn criterion_06_qrac_failure_regime() {
    let two = qrac_2to1(&tol()).unwrap();
    let family = MatchingFamily::new(
        1,
        1,
        vec![
            Matching {
                i: 0,
                sets: vec![QuerySet::from_positions(&[0])],
            },
            Matching {
                i: 1,
                sets: vec![QuerySet::from_positions(&[0])],
            },
        ],
    )
    .unwrap();
    let mu = InputDistribution::uniform(2);
    let eps = 0.5 / 2f64.sqrt();
    let result =
        find_pauli_sequence(&two.code, &family, &mu, eps, 1, &SearchConfig::default()).unwrap();
    match &result.outcome {
        SearchOutcome::Failed {
            best_min, table, ..
        } => {
            assert!(best_min.abs() < 1e-12);
            let table = table.as_ref().expect("single-qubit space is tabulated");
            assert_eq!(table.len(), 4, "all four Pauli letters");
            for (word, min_bias) in table {
                assert!(
                    min_bias.abs() < 1e-12,
                    "letter {word} has min bias {min_bias}, expected 0"
                );
            }
        }
        SearchOutcome::Found { .. } => panic!("the 2->1 instance must fail the search"),
    }
    println!("criterion 6 (documented failure regime): PASS (all four letters at min bias 0)");
}

#[test]
fn criterion_07_derandomization_on_corpus() {
    let corpus = corpus();
    let config = PipelineConfig {
        verify_input: false,
        ..PipelineConfig::default()
    };
    let mut runs = 0usize;
    for inst in &corpus {
        let n = inst.code.n();
        let mu = InputDistribution::uniform(n);
        let result = run_smooth_pipeline(
            &inst.code,
            &inst.decoder,
            &inst.params,
            &mu,
            &config,
            &tol(),
        )
        .unwrap();
        let Some(success) = &result.success else {
            continue;
        };
        let eps_r = inst.params.eps / 4f64.powi(inst.params.q as i32 + 1);
        let derand = derandomize(&success.randomized, &success.decoder, &mu, eps_r, 48).unwrap();
        let needed = ((eps_r * n as f64) - 1e-9).ceil().max(1.0) as usize;
        assert!(
            derand.good_indices.len() >= needed,
            "seed {}: {} good indices, need {needed}",
            inst.seed,
            derand.good_indices.len()
        );
        assert!(
            derand.expected_good + 1e-9 >= eps_r * n as f64,
            "seed {}: E[X_z] = {} below {}",
            inst.seed,
            derand.expected_good,
            eps_r * n as f64
        );
        for &i in &derand.good_indices {
            let s = success_classical(
                ClassicalCodeRef::Plain(&derand.code),
                &success.decoder,
                i,
                &mu,
                None,
            )
            .unwrap();
            assert!(
                s + 1e-9 >= 0.5 + eps_r / 2.0,
                "seed {}: good index {} has success {s}",
                inst.seed,
                i + 1
            );
        }
        runs += 1;
    }
    assert!(runs >= 10, "too few successful pipelines: {runs}");
    println!("criterion 7 (derandomization guarantees): PASS ({runs} pipeline runs)");
}

#[test]
fn criterion_08_conversion_arithmetic_golden_table() {
    use qldc_core::codes::{basis_code, CodeFamily, CodeKind, CodeParams};
    // Golden table: (kind, q, c, ε, δ) → expected (δ, ε − δc), exact.
    let smooth_cases: [(CodeFamily, usize, f64, f64, f64, f64); 10] = [
        (CodeFamily::Smooth, 2, 3.0, 0.4, 0.1, 0.1),
        (CodeFamily::Smooth, 2, 3.0, 0.4, 0.0, 0.4),
        (CodeFamily::Smooth, 1, 2.0, 0.5, 0.25, 0.0),
        (CodeFamily::Smooth, 1, 2.0, 0.5, 0.1, 0.3),
        (CodeFamily::SmoothQuantum, 1, 2.0, 0.5, 0.2, 0.1),
        (CodeFamily::SmoothQuantum, 2, 4.0, 0.25, 0.05, 0.05),
        (CodeFamily::SmoothQuantum, 2, 2.0, 0.5, 0.125, 0.25),
        (CodeFamily::RandomizedSmooth, 1, 2.0, 0.25, 0.05, 0.15),
        (CodeFamily::RandomizedSmooth, 2, 5.0, 0.5, 0.02, 0.4),
        (CodeFamily::RandomizedSmooth, 3, 6.0, 0.3, 0.01, 0.24),
    ];
    for (family, q, c, eps, delta, expect_eps) in smooth_cases {
        let params = CodeParams::new(CodeKind::plain(family), q, c, eps).unwrap();
        let out = smooth_to_ldc(&params, delta).unwrap();
        assert_eq!(out.second, delta);
        assert!(
            (out.eps - expect_eps).abs() < 1e-12,
            "{family:?} q={q} c={c} eps={eps} delta={delta}: got {}",
            out.eps
        );
        assert_eq!(out.q, q);
        assert_eq!(out.degenerate, expect_eps <= 0.0);
    }

    // (q, δ, ε) → (q, q/δ, ε), exact.
    let ldc_cases: [(usize, f64, f64, f64); 10] = [
        (1, 0.5, 0.5, 2.0),
        (1, 0.25, 0.5, 4.0),
        (1, 0.4, 0.3, 2.5),
        (2, 0.5, 0.25, 4.0),
        (2, 0.2, 0.4, 10.0),
        (2, 0.1, 0.1, 20.0),
        (3, 0.3, 0.2, 10.0),
        (3, 0.75, 0.5, 4.0),
        (2, 0.4, 0.5, 5.0),
        (1, 0.9, 0.2, 1.0 / 0.9),
    ];
    use qldc_core::codes::CodeParams as CP;
    let (code, dec) = basis_code(2, &tol()).unwrap();
    for (q, delta, eps, expect_c) in ldc_cases {
        let params = CP::new(CodeKind::plain(CodeFamily::Ldqc), q, delta, eps).unwrap();
        let out = ldc_to_smooth(&code, &dec, &params, &tol()).unwrap();
        assert!(
            (out.params.second - expect_c).abs() < 1e-12,
            "q={q} delta={delta}: c = {}",
            out.params.second
        );
        assert!((out.params.eps - eps).abs() < 1e-15);
        // Output marginals sit at or below q/(δm).
        let bound = q as f64 / (delta * code.m() as f64);
        for i in 0..code.n() {
            for p in out.decoder.plan().marginal(i) {
                assert!(p <= bound + 1e-9, "marginal {p} above {bound}");
            }
        }
        // Success identity: the transformed decoder on Q(x) equals the
        // original on the heavy-replaced state; with no heavy positions the
        // decoder is literally unchanged.
        let mu = InputDistribution::uniform(code.n());
        for i in 0..code.n() {
            let heavy = out.heavy[i].positions();
            let replaced: Vec<_> = Word::all(code.n())
                .map(|x| {
                    code.encode(&x)
                        .replace_with_maximally_mixed(&heavy)
                        .unwrap()
                })
                .collect();
            let replaced_code = QuantumCode::new(code.n(), code.m(), replaced).unwrap();
            let lhs = success_quantum(&code, &out.decoder, i, &mu, None, &tol()).unwrap();
            let rhs = success_quantum(&replaced_code, &dec, i, &mu, None, &tol()).unwrap();
            assert!((lhs - rhs).abs() < 1e-12);
            if heavy.is_empty() {
                let original = success_quantum(&code, &dec, i, &mu, None, &tol()).unwrap();
                assert!((lhs - original).abs() < 1e-12);
            }
        }
    }
    println!("criterion 8 (conversion arithmetic golden table): PASS (20 tuples)");
}

#[test]
fn criterion_09_pir_hadamard() {
    let (code, dec) = hadamard_code(2, &tol()).unwrap();
    let mu = InputDistribution::uniform(2);
    let (q, c, eps) = (2usize, 2.0f64, 0.5f64);

    let mut matchings = Vec::new();
    let mut tables = std::collections::BTreeMap::new();
    for i in 0..2 {
        let edges =
            good_query_sets_classical(ClassicalCodeRef::Plain(&code), &dec, i, &mu, eps, &tol())
                .unwrap();
        let matching = build_matching(&edges, 4, q, c, eps).unwrap();
        for set in &matching.sets {
            tables.insert((i, *set), dec.output(i, set).unwrap().clone());
        }
        matchings.push(matching.sets);
    }
    let scheme = build_pir_scheme(&code, q, matchings, tables).unwrap();

    // Exact privacy: all pairwise TV distances are the zero rational.
    let privacy = verify_privacy(&scheme);
    assert!(privacy.private);
    for audit in &privacy.servers {
        assert!(audit.exactly_uniform_across_indices);
        assert_eq!(audit.max_tv, 0.0);
    }

    // Empirical success 1.0 over 10^4 seeded retrievals.
    let log = simulate_retrievals(&scheme, 10_000, 42, &mu).unwrap();
    assert_eq!(log.successes, 10_000);

    // Analytic success meets 1/2 + ε²/(2c).
    let bound = 0.5 + eps * eps / (2.0 * c);
    for i in 0..2 {
        let s = scheme.analytic_success(i, &mu).unwrap();
        assert!(s + 1e-12 >= bound, "index {i}: {s} < {bound}");
    }

    // Minimax LP on the exhaustive pool: value exactly 1, gap 0 ≤ 1e-7.
    for i in 0..2 {
        let pool = enumerate_candidate_pool(&code, &dec, i, q, c, eps, 200_000, 1, &tol()).unwrap();
        assert!(pool.exhaustive);
        let solution = minimax_decoder(&code, i, &pool).unwrap();
        assert!(
            (solution.value_f64() - 1.0).abs() < 1e-12,
            "index {i}: value {}",
            solution.value_f64()
        );
        assert!(solution.gap_f64() <= 1e-7);
    }
    println!("criterion 9 (Hadamard PIR: privacy, success, minimax): PASS");
}

#[test]
fn criterion_10_reduce_determinism() {
    let dir = std::env::temp_dir().join(format!("qldc-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let spec_path = dir.join("basis2.toml");
    std::fs::write(
        &spec_path,
        "kind = \"ldqc\"\n\n[code]\ntype = \"quantum\"\ngenerator = \"basis\"\nn = 2\n",
    )
    .unwrap();
    let bin = env!("CARGO_BIN_EXE_qldc");
    let run = |out: &std::path::Path| {
        let status = std::process::Command::new(bin)
            .args([
                "reduce",
                "--spec",
                spec_path.to_str().unwrap(),
                "--claim",
                "1:0.4:0.5",
                "--target",
                "ldc",
                "--seed",
                "11",
                "--out",
                out.to_str().unwrap(),
            ])
            .stdout(std::process::Stdio::null())
            .status()
            .unwrap();
        assert!(status.success());
    };
    let out1 = dir.join("cert1.json");
    let out2 = dir.join("cert2.json");
    run(&out1);
    run(&out2);
    let b1 = std::fs::read(&out1).unwrap();
    let b2 = std::fs::read(&out2).unwrap();
    assert!(!b1.is_empty());
    assert_eq!(b1, b2, "certificates differ between identical runs");
    let _ = std::fs::remove_dir_all(&dir);
    println!(
        "criterion 10 (byte-identical certificates): PASS ({} bytes)",
        b1.len()
    );
}
