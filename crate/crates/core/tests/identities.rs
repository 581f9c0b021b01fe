use prismal::verify::{run_suite, summarize, CheckOptions, Suite};

#[test]
fn every_identity_holds_in_the_default_universe() {
    let reports = run_suite(Suite::All, CheckOptions::default());
    for (name, ok, bad) in summarize(&reports) {
        println!("{name}: {ok} passed, {bad} failed");
    }
    let failed: Vec<_> = reports.iter().filter(|r| !r.passed).take(10).collect();
    assert!(failed.is_empty(), "{failed:#?}");
}

#[test]
fn reports_come_back_in_case_order() {
    let opts = CheckOptions {
        max_dim: 2,
        ..CheckOptions::default()
    };
    assert_eq!(run_suite(Suite::Satrap, opts), run_suite(Suite::Satrap, opts));
}
