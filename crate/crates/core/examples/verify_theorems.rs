//! Runs every check on a valid instance and on a waived degenerate one.

use logfol::foliation::{validate_spec, FoliationSpec, Residues, ValidationLevel, ValidationOptions};
use logfol::poly::{parse_poly, rat};
use logfol::schemes::{run_checks, CheckEntry, CheckKind, VerifyOptions};

fn show(entry: &CheckEntry, depth: usize) {
    println!("{}[{}] {}", "  ".repeat(depth), entry.status, entry.name);
    for note in &entry.notes {
        println!("{}    {note}", "  ".repeat(depth));
    }
    entry.parts.iter().for_each(|p| show(p, depth + 1));
}

fn lines(fs: &[&str]) -> FoliationSpec {
    FoliationSpec {
        n: 2,
        q: 1,
        divisors: fs.iter().map(|f| parse_poly(f, 3).unwrap()).collect(),
        residues: Residues::Matrix(vec![vec![rat(1), rat(2), rat(-3)]]),
    }
}

fn main() {
    let good = validate_spec(&lines(&["x0", "x1", "x2"]), ValidationOptions::at(ValidationLevel::FullSnc)).unwrap();
    let report = run_checks(&good, &CheckKind::ALL, VerifyOptions::default());
    report.checks.iter().for_each(|c| show(c, 0));
    println!("all passed: {}\n", report.all_passed());

    let mut opts = ValidationOptions::at(ValidationLevel::FullSnc);
    opts.waive = true;
    let concurrent = validate_spec(&lines(&["x0", "x1", "x0 + x1"]), opts).unwrap();
    let verify = VerifyOptions { waive_preconditions: true, ..VerifyOptions::default() };
    let report = run_checks(&concurrent, &[CheckKind::Lemma, CheckKind::Persistent], verify);
    report.checks.iter().for_each(|c| show(c, 0));
}
