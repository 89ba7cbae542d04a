//! Acceptance criteria 1-13: one PASS/FAIL line each, then a single verdict.

use std::io::Write;

use dplab_core::selftest::{run_criterion, SelftestOptions, CRITERIA};
use rayon::prelude::*;

#[test]
fn acceptance_criteria() {
    let opts = SelftestOptions { long: std::env::var_os("DPLAB_LONG").is_some() };
    let reports: Vec<_> = CRITERIA.par_iter().map(|&(id, _)| run_criterion(id, &opts)).collect();
    let mut out = String::new();
    for r in &reports {
        out += &format!("criterion {:2} {}: {} ({:.1?})\n", r.id, if r.passed { "PASS" } else { "FAIL" }, r.title, r.elapsed);
        for n in &r.notes {
            out += &format!("    {n}\n");
        }
        for f in &r.failures {
            out += &format!("    FAILURE: {f}\n");
        }
    }
    // written to the raw handle so the report shows without --nocapture
    std::io::stderr().write_all(out.as_bytes()).unwrap();
    let failed: Vec<u32> = reports.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
