//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//! Run with `cargo test --release -p operad-homology-cli --test acceptance`
//! (add `-- --nocapture` to see the lines for passing criteria too).

use operad_homology::checks::{self, CheckResult};

const SEED: u64 = 20240905;

fn report(criterion: &str, results: &[CheckResult]) {
    let all = results.iter().all(|r| r.passed);
    println!("ACCEPTANCE {criterion}: {}", if all { "PASS" } else { "FAIL" });
    for r in results {
        println!(
            "  {} {}{}",
            if r.passed { "pass" } else { "FAIL" },
            r.name,
            if r.detail.is_empty() { String::new() } else { format!("  [{}]", r.detail) }
        );
    }
    let failures: Vec<String> = results
        .iter()
        .filter(|r| !r.passed)
        .map(|r| format!("{}: {}", r.name, r.detail))
        .collect();
    assert!(all, "criterion {criterion} failed: {}", failures.join(" | "));
}

#[test]
fn criterion_01_dimension_formulas() {
    report("1 (dimension formulas)", &checks::suite_dimensions());
}

#[test]
fn criterion_02_boundary_squared() {
    report("2 (d^2 = 0)", &checks::suite_d_squared(4, 6));
}

#[test]
fn criterion_03_acyclicity_of_assoc_and_comm() {
    report("3 (acyclicity)", &checks::suite_acyclicity(6));
}

#[test]
fn criterion_04_e0_f1_splitting() {
    let mut results = checks::suite_e0_f1_splitting(3);
    results.push(checks::suite_e0_closure(SEED, 100));
    report("4 (E0/F1 splitting)", &results);
}

#[test]
fn criterion_05_zero_quotient_betti() {
    // as stated: zero quotient vs normalized Poisson per bigrading. The
    // suite also reports the comparison against the star-diagram complex
    // (the first term of the auxiliary spectral sequence), which is the
    // statement the homology equivalence actually provides.
    report("5 (zero quotient Betti)", &checks::suite_zero_quotient_betti(4));
}

#[test]
fn criterion_05a_zero_quotient_structure() {
    report(
        "5a (zero quotient freeness and boundary invariance)",
        &checks::suite_zero_quotient_structure(4),
    );
}

#[test]
fn criterion_06_star_diagram_dictionaries() {
    report("6 (star-diagram dictionaries)", &checks::suite_star_dictionaries(3));
}

#[test]
fn criterion_07_chord_diagrams_vs_oracle() {
    report("7 (chords vs four-term oracle)", &checks::suite_chords(4));
}

#[test]
fn criterion_08_algebraic_identities() {
    let mut results = checks::suite_identities(SEED, 100);
    results.push(checks::suite_star_commutator(SEED.wrapping_add(9), 20));
    report("8 (algebraic identities)", &results);
}

#[test]
fn criterion_09_tensor_factor_cross_check() {
    // the criterion requires the cross-check to run and discrepancies to be
    // reported with full tables; the bigraded refinement itself is printed
    // as an informational line (the underlying equivalence is one of
    // graded bialgebras, not of bigraded ones)
    let results = checks::suite_tensor_cross_check(3);
    for r in &results {
        println!(
            "  {} {}  [{}]",
            if r.passed { "pass" } else { "info: bigraded relation fails" },
            r.name,
            r.detail
        );
    }
    let reported = results
        .iter()
        .find(|r| r.name == "tensor_tables_and_discrepancies_reported")
        .expect("reporting check present");
    println!(
        "ACCEPTANCE 9 (Betti tensor cross-check): {}",
        if reported.passed { "PASS" } else { "FAIL" }
    );
    assert!(reported.passed, "{}", reported.detail);
}

#[test]
fn criterion_10_deterministic_reports() {
    let run = |args: &[&str]| {
        std::process::Command::new(env!("CARGO_BIN_EXE_ophom"))
            .args(args)
            .output()
            .unwrap()
    };
    let args = [
        "homology", "--complex", "poiss-zero", "--d", "3", "--max-i", "2", "--ring", "q",
        "--format", "json",
    ];
    let a = run(&args);
    let b = run(&args);
    let ok = a.status.success() && a.stdout == b.stdout;
    let verify_args = ["verify", "--suite", "pre_lie", "--seed", "42", "--format", "json"];
    let va = run(&verify_args);
    let vb = run(&verify_args);
    let vok = va.status.success() && va.stdout == vb.stdout;
    println!(
        "ACCEPTANCE 10 (determinism): {}",
        if ok && vok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "homology reports differ between identical runs");
    assert!(vok, "verify reports differ between identical runs");
}
