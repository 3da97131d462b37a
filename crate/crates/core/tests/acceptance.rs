//! Acceptance suite: one PASS/FAIL line per criterion.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use logfol::cli::{random_instances, ReportFile, SpecFile};
use logfol::exterior::PForm;
use logfol::foliation::{
    build_form, validate_spec, FoliationSpec, Residues, ValidatedSpec, ValidationLevel,
    ValidationOptions,
};
use logfol::groebner::Ideal;
use logfol::poly::{parse_poly, rat, Monomial, MonomialOrder, Poly, Rational};
use logfol::schemes::{
    kupka_ideal, persistent_cap, persistent_cap_of, persistent_sum_of, residual_ideal,
    singular_ideal, verify_decomposition, CheckStatus, VerifyOptions,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn monomials_up_to(arity: usize, max_degree: u32) -> Vec<Monomial> {
    (0..=max_degree)
        .flat_map(|d| {
            (0..arity).combinations_with_replacement(d as usize).map(move |vars| {
                let mut exps = vec![0u32; arity];
                vars.into_iter().for_each(|v| exps[v] += 1);
                Monomial::new(exps)
            })
        })
        .collect()
}

fn mono_poly(m: &Monomial) -> Poly {
    Poly::monomial(m.clone(), rat(1))
}

fn divisible_by_any(m: &Monomial, gens: &[Monomial]) -> bool {
    gens.iter().any(|g| g.divides(m))
}

fn coordinate_divisors(arity: usize) -> Vec<Poly> {
    (0..arity).map(|i| Poly::var(arity, i).unwrap()).collect()
}

// 1. Lemma identity on coordinate arrangements.
fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    for s in 2..=6usize {
        let divisors = coordinate_divisors(s);
        let monomials = monomials_up_to(s, s as u32);
        for q in 1..s {
            let sum = persistent_sum_of(&divisors, q);
            let cap = persistent_cap_of(&divisors, q);
            ensure(sum.same_ideal(&cap).unwrap(), || format!("s={s} q={q}: P_sum != P_cap"))?;
            let complements: Vec<Monomial> = (0..s)
                .combinations(q)
                .map(|subset| {
                    Monomial::new((0..s).map(|i| u32::from(!subset.contains(&i))))
                })
                .collect();
            let caps: Vec<Vec<usize>> = (0..s).combinations(q + 1).collect();
            for m in &monomials {
                let in_sum = divisible_by_any(m, &complements);
                let in_cap = caps.iter().all(|k| k.iter().any(|&i| m.exponent(i) > 0));
                ensure(in_sum == in_cap, || format!("oracle disagrees with itself at {m:?}"))?;
                let p = mono_poly(m);
                ensure(sum.contains(&p) == in_sum, || format!("s={s} q={q}: P_sum membership of {p}"))?;
                ensure(cap.contains(&p) == in_cap, || format!("s={s} q={q}: P_cap membership of {p}"))?;
            }
            cases += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("{cases} arrangements in {:.2}s", elapsed.as_secs_f64()))
}

fn matrix_spec(n: usize, divisors: &[&str], rows: &[&[i64]]) -> FoliationSpec {
    FoliationSpec {
        n,
        q: rows.len(),
        divisors: divisors.iter().map(|f| parse_poly(f, n + 1).unwrap()).collect(),
        residues: Residues::Matrix(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()),
    }
}

fn ideal(arity: usize, gens: &[&str]) -> Ideal {
    Ideal::new(arity, gens.iter().map(|g| parse_poly(g, arity).unwrap())).unwrap()
}

// 2. The worked instance in P^2.
fn criterion_2() -> Outcome {
    let spec = matrix_spec(2, &["x0", "x1", "x2"], &[&[1, 2, -3]]);
    let vs = validate_spec(&spec, ValidationOptions::at(ValidationLevel::FullSnc)).map_err(|e| e.to_string())?;
    let omega = build_form(&vs);
    let j = singular_ideal(&omega).unwrap();
    let expected_j = ideal(3, &["x0*x1", "x0*x2", "x1*x2"]);
    ensure(*j.basis() == *expected_j.basis(), || format!("J = {j}"))?;
    let d_omega = omega.exterior_derivative();
    let expected_d = PForm::from_terms(
        3,
        2,
        [
            (vec![0, 1], parse_poly("x2", 3).unwrap()),
            (vec![0, 2], parse_poly("-4*x1", 3).unwrap()),
            (vec![1, 2], parse_poly("-5*x0", 3).unwrap()),
        ],
    )
    .unwrap();
    ensure(d_omega == expected_d, || format!("dω = {d_omega}"))?;
    let k = kupka_ideal(&omega, &j);
    ensure(*k.basis() == *j.basis(), || format!("K = {k}"))?;
    let h = residual_ideal(&j, &k);
    ensure(h.is_unit(), || format!("H = {h}"))?;
    Ok("J, dω, K and H match exactly".into())
}

/// Generic instances for criteria 3, 4 and 7: fixed coordinate arrangements
/// plus seeded random draws.
fn generic_instances() -> Vec<ValidatedSpec> {
    let mut specs = vec![
        matrix_spec(2, &["x0", "x1", "x2"], &[&[1, 2, -3]]),
        matrix_spec(3, &["x0", "x1", "x2", "x3"], &[&[1, 2, 3, -6]]),
        matrix_spec(4, &["x0", "x1", "x2", "x3", "x4"], &[&[1, 2, 3, 4, -10]]),
        matrix_spec(3, &["x0", "x1", "x2", "x3"], &[&[1, 2, 3, -6], &[-4, -4, -3, 11]]),
        matrix_spec(4, &["x0", "x1", "x2", "x3", "x4"], &[&[1, 2, 3, -1, -5], &[0, 4, 2, 5, -11]]),
        matrix_spec(
            2,
            &["x0^2 + x1^2 - x2^2", "x0^2 - 2*x1^2 + x0*x2 + x2^2", "x0*x1 + 2*x1*x2 - 3*x2^2 + x0*x2"],
            &[&[1, 2, -3]],
        ),
    ];
    for file in random_instances(2024, 20) {
        specs.push(file.to_spec().unwrap());
    }
    specs
        .iter()
        .map(|s| validate_spec(s, ValidationOptions::at(ValidationLevel::FullSnc)).expect("generic instance"))
        .collect()
}

// 3. Decomposition theorem on generic instances.
fn criterion_3(instances: &[ValidatedSpec]) -> Outcome {
    let start = Instant::now();
    for (idx, vs) in instances.iter().enumerate() {
        let entry = verify_decomposition(vs, VerifyOptions::default());
        for name in ["codim", "residual", "disjoint", "kupka-formula"] {
            let part = entry
                .parts
                .iter()
                .find(|p| p.name == name)
                .ok_or_else(|| format!("instance {idx}: no {name} entry"))?;
            ensure(part.status == CheckStatus::Pass, || {
                format!("instance {idx} (n={}, q={}): {name} failed: {part:?}", vs.n(), vs.q())
            })?;
        }
    }
    let elapsed = start.elapsed();
    ensure(instances.len() >= 20, || "too few instances".into())?;
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    let q2 = instances.iter().filter(|v| v.q() == 2).count();
    let quadric = instances.iter().filter(|v| v.degrees().contains(&2)).count();
    Ok(format!(
        "{} instances ({q2} with q=2, {quadric} with conics) in {:.2}s",
        instances.len(),
        elapsed.as_secs_f64()
    ))
}

// 4. Identities on the constructed forms.
fn criterion_4(instances: &[ValidatedSpec]) -> Outcome {
    for (idx, vs) in instances.iter().enumerate() {
        let omega = build_form(vs);
        ensure(omega.radial_contraction().is_zero(), || format!("instance {idx}: i_R ω != 0"))?;
        ensure(omega.frobenius_check(), || format!("instance {idx}: not integrable"))?;
        if vs.is_matrix_mode() {
            ensure(omega.plucker_check(), || format!("instance {idx}: Plücker fails"))?;
        }
    }
    Ok(format!("{} forms", instances.len()))
}

fn random_poly(rng: &mut ChaCha8Rng, arity: usize) -> Poly {
    let terms = rng.gen_range(1..=3);
    Poly::from_terms(
        arity,
        MonomialOrder::GrevLex,
        (0..terms).map(|_| {
            let exps: Vec<u32> = (0..arity).map(|_| rng.gen_range(0..=2)).collect();
            (Monomial::new(exps), rat(rng.gen_range(-3..=3)))
        }),
    )
}

fn random_form(rng: &mut ChaCha8Rng, arity: usize, degree: usize) -> PForm {
    let mut terms: Vec<(Vec<usize>, Poly)> = Vec::new();
    for idx in (0..arity).combinations(degree) {
        if rng.gen_bool(0.6) {
            terms.push((idx, random_poly(rng, arity)));
        }
    }
    PForm::from_terms(arity, degree, terms).unwrap()
}

fn sign(k: usize) -> Rational {
    if k % 2 == 0 {
        rat(1)
    } else {
        rat(-1)
    }
}

// 5. Exterior algebra laws on random forms.
fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let samples = 400;
    let mut nontrivial = 0;
    for k in 0..samples {
        let arity = rng.gen_range(2..=4);
        let p = rng.gen_range(0..arity);
        let r = rng.gen_range(0..=arity - p);
        let a = random_form(&mut rng, arity, p);
        let b = random_form(&mut rng, arity, r);
        ensure(a.exterior_derivative().exterior_derivative().is_zero(), || format!("sample {k}: d∘d != 0"))?;
        let lhs = a.wedge(&b).unwrap().exterior_derivative();
        let rhs = a
            .exterior_derivative()
            .wedge(&b)
            .unwrap()
            .add(&a.wedge(&b.exterior_derivative()).unwrap().scale(&sign(p)))
            .unwrap();
        ensure(lhs == rhs, || format!("sample {k}: d is not an anti-derivation"))?;
        let ab = a.wedge(&b).unwrap();
        nontrivial += usize::from(!ab.is_zero() && !a.exterior_derivative().is_zero());
        let ba = b.wedge(&a).unwrap().scale(&sign(p * r));
        ensure(ab == ba, || format!("sample {k}: graded commutativity fails"))?;
        if p + r >= 1 && p + r <= arity {
            let j = rng.gen_range(0..arity);
            let lhs = ab.contract_index(j).unwrap();
            let left = if p > 0 { a.contract_index(j).unwrap().wedge(&b).unwrap() } else { PForm::zero(arity, p + r - 1) };
            let right = if r > 0 {
                a.wedge(&b.contract_index(j).unwrap()).unwrap().scale(&sign(p))
            } else {
                PForm::zero(arity, p + r - 1)
            };
            ensure(lhs == left.add(&right).unwrap(), || format!("sample {k}: contraction is not an anti-derivation"))?;
        }
    }
    Ok(format!("{samples} random pairs of forms, {nontrivial} with a∧b and da nonzero"))
}

fn random_monomial_ideal(rng: &mut ChaCha8Rng, arity: usize, max_gens: usize) -> Vec<Monomial> {
    let count = rng.gen_range(1..=max_gens);
    (0..count)
        .map(|_| loop {
            let degree = rng.gen_range(1..=4u32);
            let mut exps = vec![0u32; arity];
            for _ in 0..degree {
                exps[rng.gen_range(0..arity)] += 1;
            }
            break Monomial::new(exps);
        })
        .collect()
}

fn monomial_ideal(arity: usize, gens: &[Monomial]) -> Ideal {
    Ideal::new(arity, gens.iter().map(mono_poly)).unwrap()
}

fn is_monomial_basis(i: &Ideal) -> bool {
    i.basis().elements().iter().all(|g| g.num_terms() == 1)
}

/// Krull dimension from the growth of the Hilbert function of a monomial ideal.
fn hilbert_dimension(arity: usize, gens: &[Monomial]) -> i64 {
    let count = |d: usize| -> i64 {
        (0..arity)
            .combinations_with_replacement(d)
            .filter(|vars| {
                let mut exps = vec![0u32; arity];
                vars.iter().for_each(|&v| exps[v] += 1);
                !divisible_by_any(&Monomial::new(exps), gens)
            })
            .count() as i64
    };
    let mut values: Vec<i64> = (20..20 + arity + 2).map(count).collect();
    if values.iter().all(|&v| v == 0) {
        return 0;
    }
    // the Hilbert polynomial has degree dim - 1; difference until constant
    let mut dim = 1;
    while values.windows(2).any(|w| w[0] != w[1]) {
        values = values.windows(2).map(|w| w[1] - w[0]).collect();
        dim += 1;
    }
    dim
}

// 6. Gröbner engine against monomial-ideal oracles.
fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let samples = 120;
    for k in 0..samples {
        let arity = rng.gen_range(2..=4);
        let a = random_monomial_ideal(&mut rng, arity, 4);
        let b = random_monomial_ideal(&mut rng, arity, 3);
        let (ia, ib) = (monomial_ideal(arity, &a), monomial_ideal(arity, &b));
        let meet = ia.intersection(&ib).unwrap();
        let divisor = &b[0];
        let colon = ia.quotient(&mono_poly(divisor)).unwrap();
        let sat = ia.saturation(&ib).unwrap();
        for (name, i) in [("intersection", &meet), ("colon", &colon), ("saturation", &sat)] {
            ensure(is_monomial_basis(i), || format!("sample {k}: {name} basis not monomial"))?;
        }
        // products of 3r+1 generators of b contain some generator 4 times
        let power = 3 * b.len() + 1;
        let products: Vec<Monomial> = (0..b.len())
            .combinations_with_replacement(power)
            .map(|idx| idx.iter().fold(Monomial::one(arity), |acc, &i| acc.mul(&b[i])))
            .collect();
        for m in monomials_up_to(arity, 8) {
            let p = mono_poly(&m);
            let in_a = divisible_by_any(&m, &a);
            let in_meet = in_a && divisible_by_any(&m, &b);
            ensure(meet.contains(&p) == in_meet, || format!("sample {k}: intersection at {p}"))?;
            let in_colon = divisible_by_any(&m.mul(divisor), &a);
            ensure(colon.contains(&p) == in_colon, || format!("sample {k}: colon at {p}"))?;
            let in_sat = products.iter().all(|g| divisible_by_any(&m.mul(g), &a));
            ensure(sat.contains(&p) == in_sat, || format!("sample {k}: saturation at {p}"))?;
        }
        let dim = hilbert_dimension(arity, &a);
        ensure(ia.krull_dimension() == dim, || {
            format!("sample {k}: dimension {} != {dim}", ia.krull_dimension())
        })?;
    }
    Ok(format!("{samples} random monomial ideal pairs"))
}

fn jkh(omega: &PForm) -> [Ideal; 3] {
    let j = singular_ideal(omega).unwrap();
    let k = kupka_ideal(omega, &j);
    let h = residual_ideal(&j, &k);
    [j, k, h]
}

// 7. Scaling and permutation invariance of J, K, H.
fn criterion_7(instances: &[ValidatedSpec]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let scalars = [rat(-3), Rational::new(2.into(), 5.into()), rat(7)];
    let mut checked = 0;
    for (idx, vs) in instances.iter().enumerate().filter(|(i, _)| i % 2 == 0) {
        let omega = build_form(vs);
        let base = jkh(&omega);
        let c = &scalars[idx % scalars.len()];
        let scaled = jkh(&omega.scale(c));
        for (a, b) in base.iter().zip(&scaled) {
            ensure(*a.basis() == *b.basis(), || format!("instance {idx}: scaling by {c} changed an ideal"))?;
        }

        let arity = vs.arity();
        let mut perm: Vec<usize> = (0..arity).collect();
        perm.shuffle(&mut rng);
        let spec = vs.spec();
        let permuted_spec = FoliationSpec {
            divisors: spec.divisors.iter().map(|f| f.permute_variables(&perm)).collect(),
            ..spec.clone()
        };
        let permuted_vs = validate_spec(&permuted_spec, ValidationOptions::at(ValidationLevel::FullSnc))
            .map_err(|e| format!("instance {idx}: permuted spec invalid: {e}"))?;
        let permuted_omega = build_form(&permuted_vs);
        ensure(permuted_omega == omega.permute_variables(&perm), || format!("instance {idx}: ω not equivariant"))?;
        let permuted = jkh(&permuted_omega);
        for (a, b) in base.iter().zip(&permuted) {
            ensure(*a.permute_variables(&perm).basis() == *b.basis(), || {
                format!("instance {idx}: permutation {perm:?} not equivariant")
            })?;
        }
        // the persistent ideal follows the same substitution
        ensure(
            *persistent_cap(vs).permute_variables(&perm).basis() == *persistent_cap(&permuted_vs).basis(),
            || format!("instance {idx}: P_cap not equivariant"),
        )?;
        checked += 1;
    }
    Ok(format!("{checked} instances, scaled and permuted"))
}

fn logfol(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_logfol"))
        .args(args)
        .output()
        .expect("run logfol");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

// 8. CLI exit codes, determinism and round trip.
fn criterion_8() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = dir.path();
    let valid = write(
        d,
        "valid.json",
        r#"{"n": 2, "q": 1, "divisors": ["x0", "x1", "x2"], "residue_matrix": [[1, 2, -3]], "validation_level": "full-snc"}"#,
    );
    let duplicate = write(
        d,
        "dup.json",
        r#"{"n": 2, "q": 1, "divisors": ["x0", "x1", "x2"], "residue_matrix": [[1, 1, -2]], "validation_level": "generic"}"#,
    );
    let descent = write(
        d,
        "descent.json",
        r#"{"n": 2, "q": 1, "divisors": ["x0", "x1", "x2"], "residue_matrix": [[1, 2, 3]]}"#,
    );
    let concurrent = write(
        d,
        "concurrent.json",
        r#"{"n": 2, "q": 1, "divisors": ["x0", "x1", "x0 + x1"], "residue_matrix": [[1, 2, -3]], "validation_level": "full-snc", "checks": ["lemma", "decomposition"]}"#,
    );
    let broken = write(d, "broken.json", r#"{"n": 2, "q": 1, "divisors": ["x0 +"], "residue_matrix": [[1]]}"#);
    let missing = d.join("missing.json").to_string_lossy().into_owned();

    let (code, out, _) = logfol(&["check", &valid]);
    ensure(code == 0 && out.contains("[ok] transversal"), || format!("check valid: exit {code}\n{out}"))?;
    let (code, _, err) = logfol(&["check", &missing]);
    ensure(code == 1, || format!("missing file: exit {code} {err}"))?;
    let (code, _, err) = logfol(&["verify", &broken]);
    ensure(code == 1, || format!("malformed spec: exit {code} {err}"))?;
    let (code, _, _) = logfol(&["verify", "--bogus-flag", &valid]);
    ensure(code == 1, || format!("bad flag: exit {code}"))?;
    let (code, _, err) = logfol(&["check", &duplicate]);
    ensure(code == 2 && err.contains("{1} and {2}"), || format!("duplicate λ: exit {code} {err}"))?;
    let (code, _, err) = logfol(&["check", &descent]);
    ensure(code == 2 && err.contains("row 1"), || format!("descent: exit {code} {err}"))?;
    let (code, out, _) = logfol(&["verify", &concurrent, "--waive-preconditions"]);
    ensure(code == 3 && out.contains("precondition violated: snc at {1,2,3}"), || {
        format!("waived concurrent lines: exit {code}\n{out}")
    })?;
    let (code, _, _) = logfol(&["verify", &valid]);
    ensure(code == 0, || format!("verify valid: exit {code}"))?;

    let (_, first, _) = logfol(&["verify", &valid, "--format", "machine"]);
    let (_, second, _) = logfol(&["verify", &valid, "--format", "machine"]);
    let a = ReportFile::from_json(&first).map_err(|e| e.to_string())?.without_timings();
    let b = ReportFile::from_json(&second).map_err(|e| e.to_string())?.without_timings();
    ensure(a.to_json() == b.to_json(), || "machine reports differ".into())?;
    let (_, batch1, _) = logfol(&["batch", "--random", "3", "--seed", "11", "--format", "machine", "--workers", "2"]);
    let (_, batch2, _) = logfol(&["batch", "--random", "3", "--seed", "11", "--format", "machine", "--workers", "1"]);
    ensure(batch1 == batch2, || "batch summaries differ".into())?;

    let report_path = d.join("report.json").to_string_lossy().into_owned();
    let (code, _, _) = logfol(&["verify", &valid, "--output", &report_path, "--format", "machine"]);
    ensure(code == 0, || "verify with --output".into())?;
    let report = ReportFile::from_json(&std::fs::read_to_string(&report_path).unwrap()).map_err(|e| e.to_string())?;
    ensure(ReportFile::from_json(&report.to_json()).unwrap() == report, || "report does not round-trip".into())?;
    let echoed = write(d, "echo.json", &report.spec.to_json());
    ensure(SpecFile::from_json(&report.spec.to_json()).unwrap() == report.spec, || "spec does not round-trip".into())?;
    let (_, again, _) = logfol(&["verify", &echoed, "--format", "machine"]);
    let again = ReportFile::from_json(&again).map_err(|e| e.to_string())?.without_timings();
    ensure(again == report.without_timings(), || "echoed spec gives a different report".into())?;
    Ok("exit codes 0/1/2/3, deterministic reports, round trip".into())
}

fn run(label: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|panic| {
        let msg = panic
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    let secs = start.elapsed().as_secs_f64();
    match result {
        Ok(detail) => {
            println!("PASS {label}: {detail} [{secs:.2}s]");
            true
        }
        Err(why) => {
            println!("FAIL {label}: {why} [{secs:.2}s]");
            false
        }
    }
}

fn main() {
    let instances = generic_instances();
    let results = [
        run("1 lemma identity on coordinate arrangements", criterion_1),
        run("2 worked instance in P^2", criterion_2),
        run("3 decomposition on generic instances", || criterion_3(&instances)),
        run("4 identities on constructed forms", || criterion_4(&instances)),
        run("5 exterior algebra laws", criterion_5),
        run("6 Gröbner engine vs monomial oracles", criterion_6),
        run("7 scaling and permutation invariance", || criterion_7(&instances)),
        run("8 CLI contract", criterion_8),
    ];
    let failed = results.iter().filter(|ok| !**ok).count();
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    let distinct: BTreeSet<usize> = instances.iter().map(|v| v.n()).collect();
    println!("generic instances span P^n for n in {distinct:?}");
    if failed > 0 {
        std::process::exit(1);
    }
}
