//! Acceptance gate: ten end-to-end checks covering the operator algebra,
//! the exhaustive no-assignment sweep, the frozen reference replays, the
//! statistical agreement suites, and the three experiment reanalyses.
//!
//! Each check prints exactly one `criterion NN PASS/FAIL` line (visible with
//! `--nocapture`, and always on failure) and then asserts, so a red run
//! names every failed criterion. Scales and tolerances are pinned below;
//! everything is seeded, so a pass is bit-reproducible.

use magicsq_core::contexts::{ks_exhaustive_check, ContextKind};
use magicsq_core::expsuite::{analyze_cabello, analyze_hasegawa, analyze_huang, replay, ReplayId};
use magicsq_core::harness::{
    standard_state_set, verify_corollary, verify_cup, verify_marginals, verify_theorem1,
};
use magicsq_core::qcore::{verify_square_algebra, Sign, MATRIX_TOL};

const SEED: u64 = 42;
const TV_N: u64 = 100_000;
const TV_TOL: f64 = 0.02;
const PERSIST_N: u64 = 10_000;
const CUP_N: u64 = 10_000;
const MARGINAL_N: u64 = 100_000;
const MARGINAL_TOL: f64 = 0.01;
const HUANG_N: u64 = 100_000;
const HASEGAWA_N: u64 = 100_000;
const CABELLO_N: u64 = 10_000;

fn gate(number: u8, label: &str, pass: bool, detail: String) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("criterion {number:02} {verdict} {label}: {detail}");
    assert!(pass, "criterion {number:02} {label}: {detail}");
}

#[test]
fn criterion_01_square_algebra() {
    let report = verify_square_algebra();
    let pass = report.all_pass() && report.max_deviation() <= MATRIX_TOL;
    gate(
        1,
        "square algebra",
        pass,
        format!(
            "{} identities, max deviation {:.2e} (bound {MATRIX_TOL:.0e})",
            report.checks.len(),
            report.max_deviation()
        ),
    );
}

#[test]
fn criterion_02_no_global_assignment() {
    let report = ks_exhaustive_check();
    let pass =
        report.tables_checked == 512 && report.satisfy_all_six == 0 && report.max_satisfied == 5;
    gate(
        2,
        "exhaustive sign-table sweep",
        pass,
        format!(
            "{} tables, {} satisfy all six, best satisfies {}",
            report.tables_checked, report.satisfy_all_six, report.max_satisfied
        ),
    );
}

#[test]
fn criterion_03_exact_replays() {
    use Sign::{Minus as M, Plus as P};
    let mut pass = true;
    let mut notes = Vec::new();
    for id in ReplayId::ALL {
        let report = replay(id).expect("replay runs");
        pass &= report.pass;
        notes.push(format!(
            "{}:{}",
            id,
            if report.pass { "ok" } else { "DIVERGED" }
        ));
    }
    let r1 = replay(ReplayId::Exp1).unwrap();
    pass &= r1.observed_codes == [8, 25, 6] && r1.observed_outcomes == [M, P, M];
    let r2 = replay(ReplayId::Exp2).unwrap();
    pass &= r2.observed_codes == [8, 5, 2] && r2.observed_outcomes == [M, M, M];
    let r3 = replay(ReplayId::Exp3).unwrap();
    pass &= r3.observed_codes == r1.observed_codes
        && matches!(&r3.unobserved, Some(b) if b.line == ContextKind::Col3
            && b.observed == [P, P, M]);
    let r3c = replay(ReplayId::Exp3Col3).unwrap();
    pass &= matches!(&r3c.unobserved, Some(b) if b.line == ContextKind::Row3
        && b.observed == [P, P, M]);
    let r4 = replay(ReplayId::Exp4).unwrap();
    pass &= r4.observed_codes == [24, 7, 8] && r4.observed_outcomes == [P, M, M];
    gate(3, "exact replays (zero tolerance)", pass, notes.join(" "));
}

#[test]
fn criterion_04_sequential_statistics() {
    let states = standard_state_set(SEED);
    let report = verify_theorem1(&states, TV_N, SEED, TV_TOL).expect("suite runs");
    let worst = report
        .cases
        .iter()
        .map(|c| c.statistic)
        .fold(0.0f64, f64::max);
    gate(
        4,
        "sampled vs exact sequence statistics",
        report.pass,
        format!(
            "{} cases at n={TV_N}, worst TV {worst:.4} (bound {TV_TOL})",
            report.cases.len()
        ),
    );
}

#[test]
fn criterion_05_repeat_persistence() {
    let states = standard_state_set(SEED);
    let report = verify_corollary(&states, PERSIST_N, SEED).expect("suite runs");
    let worst = report
        .cases
        .iter()
        .map(|c| c.statistic)
        .fold(0.0f64, f64::max);
    gate(
        5,
        "repeat-measurement persistence",
        report.pass && worst == 0.0,
        format!(
            "{} patterns x {PERSIST_N} runs, mismatch fraction {worst}",
            report.cases.len()
        ),
    );
}

#[test]
fn criterion_06_post_context_constraint() {
    let states = standard_state_set(SEED);
    let report = verify_cup(&states, CUP_N, SEED).expect("suite runs");
    let worst = report
        .cases
        .iter()
        .map(|c| c.statistic)
        .fold(0.0f64, f64::max);
    gate(
        6,
        "post-context value tables satisfy their constraint",
        report.pass && worst == 0.0,
        format!(
            "{} state-context pairs x {CUP_N} samples, violation fraction {worst}",
            report.cases.len()
        ),
    );
}

#[test]
fn criterion_07_marginal_noncontextuality() {
    let states = standard_state_set(SEED);
    let report = verify_marginals(&states, MARGINAL_N, SEED, MARGINAL_TOL).expect("suite runs");
    let worst = report
        .cases
        .iter()
        .map(|c| c.statistic)
        .fold(0.0f64, f64::max);
    gate(
        7,
        "corner marginal independent of context order",
        report.pass,
        format!(
            "{} comparisons at n={MARGINAL_N}, worst gap {worst:.4} (bound {MARGINAL_TOL})",
            report.cases.len()
        ),
    );
}

#[test]
fn criterion_08_huang_reanalysis() {
    let result = analyze_huang(HUANG_N, SEED).expect("analysis runs");
    let agg = &result.aggregates;
    let pass = result.pass
        && agg.fraction_equal == 0.0
        && (agg.mixed_control_fraction_equal - 0.5).abs() <= 0.01;
    gate(
        8,
        "commuting pair never agrees on the mapped state",
        pass,
        format!(
            "equal fraction {} over {HUANG_N} runs, mixed control {:.4}",
            agg.fraction_equal, agg.mixed_control_fraction_equal
        ),
    );
}

#[test]
fn criterion_09_hasegawa_reanalysis() {
    let result = analyze_hasegawa(HASEGAWA_N, SEED).expect("analysis runs");
    let agg = &result.aggregates;
    let pass = result.pass
        && agg.witness == 4.0
        && agg.within_col3_always_four
        && result.per_run.iter().all(|r| r.witness_within_col3 == 4);
    gate(
        9,
        "witness is exactly 4, per run and in aggregate",
        pass,
        format!(
            "witness {} at n={HASEGAWA_N}/axis, mixed control {:.4}",
            agg.witness, agg.mixed_control_witness
        ),
    );
}

#[test]
fn criterion_10_cabello_reanalysis() {
    let result = analyze_cabello(CABELLO_N, SEED).expect("analysis runs");
    let agg = &result.aggregates;
    let pass = result.pass
        && agg.every_run_matches
        && agg.product_means == [-1.0, -1.0, 1.0, 1.0, -1.0]
        && agg.no_table_satisfies_all_five
        && agg.max_relations_satisfiable == 4;
    gate(
        10,
        "five relations certain per run yet jointly unsatisfiable",
        pass,
        format!(
            "products {:?} over {CABELLO_N} runs each; best table satisfies {}/5",
            agg.product_means, agg.max_relations_satisfiable
        ),
    );
}
