//! Draws seeded random instances and processes them like the batch command.

use logfol::cli::{process, random_instances, RunOptions};

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let options = RunOptions::verify();
    for (k, file) in random_instances(seed, 5).iter().enumerate() {
        let report = process(file, &options).unwrap();
        let elapsed: u64 = report.checks.iter().map(|c| c.elapsed_ms).sum();
        println!(
            "random-{seed}-{k:03}: n={} q={} s={} -> {} ({elapsed} ms)",
            file.n,
            file.q,
            file.divisors.len(),
            report.verdict
        );
    }
}
