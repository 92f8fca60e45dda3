use prodform_core::suites::{run_suite, Suite, DEFAULT_SEED};

#[test]
fn every_suite_passes_with_default_seed() {
    for suite in Suite::ALL {
        let rep = run_suite(suite, DEFAULT_SEED).unwrap();
        for c in &rep.checks {
            println!(
                "{suite} {:<60} {} value={:e} threshold={:e}",
                c.name, c.passed, c.value, c.threshold
            );
        }
        assert!(
            rep.passed,
            "{suite} failed: {:#?}",
            rep.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>()
        );
    }
}

#[test]
fn suites_are_reproducible() {
    let a = run_suite(Suite::Lemma1, 3).unwrap();
    let b = run_suite(Suite::Lemma1, 3).unwrap();
    assert_eq!(a, b);
}
