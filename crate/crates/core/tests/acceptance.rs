//! Prints one PASS/FAIL line per acceptance criterion.
//!
//! Two checks fail for mathematical reasons and are expected to: the product
//! lemma on `L`/`R` has counterexamples, and `Ψ₃*(β)` is only conjugate to
//! `α₄²`. This target fails if any other check fails, or if either of those
//! starts passing.

use std::process::ExitCode;

use confbraid::acceptance::{run_all, AcceptanceConfig};

const EXPECTED_FAILURES: [(u8, &str); 2] = [
    (3, "product_keeps_an_end"),
    (4, "psi3_beta_equals_alpha4_squared"),
];

fn main() -> ExitCode {
    let cfg = AcceptanceConfig::default();
    let criteria = run_all(&cfg);
    let mut unexpected = Vec::new();
    for c in &criteria {
        println!("{}", c.summary_line());
        for check in &c.checks {
            let expected_fail = EXPECTED_FAILURES.contains(&(c.id, check.name.as_str()));
            if check.passed == expected_fail {
                unexpected.push(format!(
                    "criterion {} check {} passed={}",
                    c.id, check.name, check.passed
                ));
            }
            if !check.passed {
                println!("    {} {}", check.name, check.detail);
            }
        }
    }
    let c4 = &criteria[3];
    let psi = c4
        .checks
        .iter()
        .find(|c| c.name == "psi3_beta_equals_alpha4_squared")
        .expect("check present");
    if psi.detail["conjugate_by_sigma3_equal"] != true {
        unexpected.push("psi3(beta) is not sigma3-conjugate to alpha4^2".into());
    }
    let c3 = &criteria[2];
    let prod = c3
        .checks
        .iter()
        .find(|c| c.name == "product_keeps_an_end")
        .expect("check present");
    if prod.detail["smallest_known_fails"] != true {
        unexpected.push("recorded product counterexample no longer fails".into());
    }
    if unexpected.is_empty() {
        println!(
            "acceptance: all outcomes as expected ({} criteria)",
            criteria.len()
        );
        ExitCode::SUCCESS
    } else {
        for u in &unexpected {
            println!("UNEXPECTED: {u}");
        }
        ExitCode::FAILURE
    }
}
