use spincalc_core::verify::{CheckConfig, CheckRegistry};

#[test]
fn acceptance() {
    let outcomes = CheckRegistry::default().run_all(&CheckConfig::default());
    for o in &outcomes {
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("{status} criterion {}: {} ({} cases, {} ms)", o.id, o.name, o.cases, o.millis);
        if let Some(f) = &o.failure {
            println!("    {f}");
        }
    }
    assert!(outcomes.iter().all(|o| o.passed));
}
