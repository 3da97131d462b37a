//! Random generic instances for batch runs.

use itertools::Itertools;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::foliation::{validate_spec, ValidationLevel, ValidationOptions};
use crate::poly::{default_names, parse_poly, Rational};
use crate::schemes::CheckKind;

use super::format::{RationalValue, SpecFile};

fn random_form(rng: &mut ChaCha8Rng, arity: usize, degree: u32) -> String {
    let names = default_names(arity);
    let monomials: Vec<Vec<usize>> = (0..arity).combinations_with_replacement(degree as usize).collect();
    loop {
        let terms: Vec<String> = monomials
            .iter()
            .filter_map(|m| {
                let c: i64 = rng.gen_range(-3..=3);
                (c != 0).then(|| format!("{c}*{}", m.iter().map(|&i| names[i].as_str()).join("*")))
            })
            .collect();
        if !terms.is_empty() {
            let poly = parse_poly(&terms.join(" + "), arity).expect("generated polynomial parses");
            return poly.to_string();
        }
    }
}

/// One residue row with small integer entries, the last one solving
/// `Σ_i Λ_i d_i = 0`.
fn random_row(rng: &mut ChaCha8Rng, degrees: &[u32]) -> Vec<RationalValue> {
    let s = degrees.len();
    let mut row: Vec<Rational> = (0..s - 1)
        .map(|_| Rational::from_integer(rng.gen_range(-5i64..=5).into()))
        .collect();
    let weighted: Rational = row
        .iter()
        .zip(degrees)
        .map(|(l, &d)| l * Rational::from_integer(d.into()))
        .sum();
    row.push(-weighted / Rational::from_integer(degrees[s - 1].into()));
    row.into_iter().map(RationalValue).collect()
}

/// Draws shapes and coefficients until the result validates at level full-snc.
fn draw(rng: &mut ChaCha8Rng) -> SpecFile {
    loop {
        let n: usize = rng.gen_range(2..=4);
        let q: usize = if n == 2 { 1 } else { rng.gen_range(1..=2) };
        let s: usize = if q == 1 { rng.gen_range(3..=n.min(3) + 2) } else { rng.gen_range(4..=5) };
        let degrees: Vec<u32> = (0..s)
            .map(|_| if n == 2 && rng.gen_bool(0.3) { 2 } else { 1 })
            .collect();
        let file = SpecFile {
            n,
            q,
            variables: None,
            divisors: degrees.iter().map(|&d| random_form(rng, n + 1, d)).collect(),
            residue_matrix: Some((0..q).map(|_| random_row(rng, &degrees)).collect()),
            lambdas: None,
            validation_level: ValidationLevel::FullSnc,
            checks: CheckKind::ALL.to_vec(),
        };
        let spec = file.to_spec().expect("generated spec parses");
        if validate_spec(&spec, ValidationOptions::at(ValidationLevel::FullSnc)).is_ok() {
            return file;
        }
    }
}

/// `count` validated instances drawn from a ChaCha stream seeded by `seed`.
pub fn random_instances(seed: u64, count: usize) -> Vec<SpecFile> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| draw(&mut rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_valid() {
        let a = random_instances(7, 4);
        assert_eq!(a, random_instances(7, 4));
        for file in &a {
            let spec = file.to_spec().unwrap();
            assert!(validate_spec(&spec, ValidationOptions::at(ValidationLevel::FullSnc)).is_ok());
            assert!(file.q < file.divisors.len());
        }
    }
}
