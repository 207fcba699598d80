#[test]
fn builtin_checks_pass() {
    let results = eclift::selftest::run_all(eclift::weierstrass::DEFAULT_ORACLE_LIMIT);
    for r in &results {
        println!("{}", r.line());
    }
    assert!(results.iter().all(|r| r.passed));
}
