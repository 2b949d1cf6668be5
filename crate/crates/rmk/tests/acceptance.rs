//! Acceptance gate: one test per criterion, so `cargo test --test
//! acceptance` prints a single pass/fail line for each of the twelve.

use rmk::lab::{
    adequacy_suite, definability_probe, directed_suite, hm_suite, principle_suite, registry,
    run_examples, st_suite, symmetric_suite, union_suite, witness_suite, Report,
};
use rmk::syntax::parse_formula;
use rmk::trials::TrialConfig;
use std::time::{Duration, Instant};

fn jobs() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

/// Replays the golden registry and asserts that no failure touches the
/// given entry id; the whole replay stays inside the per-example budget.
fn golden(id: &str) {
    let start = Instant::now();
    let report = run_examples();
    let elapsed = start.elapsed();
    let mine: Vec<_> = report
        .failures
        .iter()
        .filter(|f| f.detail.starts_with(&format!("{id}:")))
        .collect();
    assert!(mine.is_empty(), "{id}: {mine:?}");
    assert!(elapsed < Duration::from_secs(1), "{id}: took {elapsed:?}");
}

fn assert_clean(report: &Report, budget: Duration, elapsed: Duration, min_trials: u64) {
    assert!(report.ok(), "{}", report.to_json());
    assert!(report.trials >= min_trials, "only {} trials", report.trials);
    assert!(elapsed < budget, "{} took {elapsed:?}", report.suite);
}

#[test]
fn criterion_01_three_world_example_and_smile_certificate() {
    golden("smile_vsmile");
    let entry = registry()
        .into_iter()
        .find(|e| e.id == "smile_vsmile")
        .unwrap();
    let cert = definability_probe(
        &parse_formula("smile p0").unwrap(),
        &entry.lambda,
        &TrialConfig {
            trials: 5,
            ..TrialConfig::default()
        },
    )
    .expect("certificate for `smile p0`");
    assert!(cert.verify());
}

#[test]
fn criterion_02_four_world_example_and_negation_certificate() {
    golden("neg");
    // negation stays undefinable when the type swaps inc for con
    let cert = definability_probe(
        &parse_formula("not p0").unwrap(),
        &"smile,con".parse().unwrap(),
        &TrialConfig {
            trials: 5,
            ..TrialConfig::default()
        },
    )
    .expect("certificate for `not p0`");
    assert!(cert.verify());
}

#[test]
fn criterion_03_dashed_disjunct_example() {
    golden("dashed");
}

#[test]
fn criterion_04_loop_example_and_box_certificate() {
    golden("undef_new");
}

#[test]
fn criterion_05_similarity_equals_subsumption() {
    let cfg = TrialConfig::default();
    let start = Instant::now();
    let report = hm_suite(&cfg, jobs());
    assert_clean(&report, Duration::from_secs(60), start.elapsed(), 1000);
}

#[test]
fn criterion_06_truth_preserved_along_simulations() {
    let cfg = TrialConfig::default();
    let start = Instant::now();
    let report = adequacy_suite(&cfg, jobs());
    assert_clean(&report, Duration::from_secs(60), start.elapsed(), 10_000);
}

#[test]
fn criterion_07_first_order_translation_agrees() {
    let cfg = TrialConfig::default();
    let start = Instant::now();
    let report = st_suite(&cfg, jobs());
    assert_clean(&report, Duration::from_secs(60), start.elapsed(), 10_000);
}

#[test]
fn criterion_08_directed_similarity_matches_cross_blocks() {
    let cfg = TrialConfig {
        trials: 500,
        ..TrialConfig::default()
    };
    let start = Instant::now();
    let report = directed_suite(&cfg, jobs());
    assert_clean(&report, Duration::from_secs(60), start.elapsed(), 500);
}

#[test]
fn criterion_09_symmetric_similarity_collapses() {
    let cfg = TrialConfig {
        trials: 500,
        ..TrialConfig::default()
    };
    let start = Instant::now();
    let report = symmetric_suite(&cfg, jobs());
    assert_clean(&report, Duration::from_secs(60), start.elapsed(), 500);
}

#[test]
fn criterion_10_witness_formulas_recheck() {
    let cfg = TrialConfig {
        trials: 200,
        ..TrialConfig::default()
    };
    let start = Instant::now();
    let report = witness_suite(&cfg, jobs());
    // the report counts generated witnesses, at least one per model pair
    assert_clean(&report, Duration::from_secs(60), start.elapsed(), 200);
}

#[test]
fn criterion_11_principle_square() {
    let cfg = TrialConfig::default();
    let start = Instant::now();
    let report = principle_suite(&cfg);
    assert_clean(&report, Duration::from_secs(30), start.elapsed(), 38);
}

#[test]
fn criterion_12_disjoint_union_truth_invariance() {
    let cfg = TrialConfig::default();
    let start = Instant::now();
    let report = union_suite(&cfg, jobs());
    assert_clean(&report, Duration::from_secs(60), start.elapsed(), 1000);
}
