//! Runs the ten acceptance criteria under the default configuration and
//! prints one line per criterion.

use std::io::Write;

use perfectoid_core::acceptance::run_all;
use perfectoid_core::config::GlobalConfig;

#[test]
fn acceptance_criteria() {
    let report = run_all(&GlobalConfig::default()).expect("default configuration is valid");
    // bypass libtest capture so the summary is always visible
    let mut out = std::io::stdout().lock();
    writeln!(out).unwrap();
    out.write_all(report.render().as_bytes()).unwrap();
    out.flush().unwrap();
    let failed: Vec<_> = report.results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
    assert_eq!(report.results.len(), 10);
}
