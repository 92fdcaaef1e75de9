//! Every worked example against its bundled expectations.

use party_approval::instances::{paper_example, verify, EXAMPLE_IDS};
use party_approval::SearchConfig;

#[test]
fn all_examples_meet_expectations() {
    let config = SearchConfig::default();
    let mut failures = Vec::new();
    for (id, _) in EXAMPLE_IDS {
        let example = paper_example(id, None).unwrap();
        for check in verify(&example, &config).unwrap() {
            println!(
                "{id:<18} {:<40} {} {}",
                check.description,
                if check.pass { "PASS" } else { "FAIL" },
                check.detail
            );
            if !check.pass {
                failures.push(format!("{id}: {} ({})", check.description, check.detail));
            }
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}
