//! The eleven acceptance criteria at their pinned tolerances, one line each.

use billiard_wkb::validation::{run_check, CheckResult};

fn run_all() -> Vec<CheckResult> {
    (1..=11).map(|id| run_check(id).unwrap()).collect()
}

#[test]
fn all_criteria_pass() {
    let results = run_all();
    println!();
    for r in &results {
        println!("{r}");
    }
    let failed: Vec<u32> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}

#[test]
fn criteria_are_numbered_in_order() {
    let ids: Vec<u32> = run_all().iter().map(|r| r.id).collect();
    assert_eq!(ids, (1..=11).collect::<Vec<_>>());
}
