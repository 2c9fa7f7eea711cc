use polyspan::check::{run_suite, SUITES};

#[test]
fn every_suite_passes_at_default_count() {
    for suite in &SUITES {
        let t = std::time::Instant::now();
        let report = run_suite(suite.name, 42, suite.default_count).unwrap();
        eprintln!("{} {:?}", suite.name, t.elapsed());
        assert!(report.passed(), "{}", report.render());
    }
}

#[test]
fn reports_are_deterministic() {
    let a = run_suite("rel-kleisli", 7, 40).unwrap().render();
    let b = run_suite("rel-kleisli", 7, 40).unwrap().render();
    assert_eq!(a, b);
}

#[test]
fn unknown_suite_is_an_input_error() {
    assert!(run_suite("nope", 0, 1).is_err());
}
