//! Validates an arrangement and builds its logarithmic 2-form.

use logfol::foliation::{
    build_form, format_residues, residues, validate_spec, FoliationSpec, Residues, ValidationLevel,
    ValidationOptions,
};
use logfol::poly::{parse_poly, rat};

fn main() {
    let divisors = ["x0", "x1", "x2", "x0 + x1 + x2 + x3"];
    let spec = FoliationSpec {
        n: 3,
        q: 2,
        divisors: divisors.iter().map(|f| parse_poly(f, 4).unwrap()).collect(),
        residues: Residues::Matrix(vec![
            vec![rat(1), rat(2), rat(3), rat(-6)],
            vec![rat(-4), rat(-4), rat(-3), rat(11)],
        ]),
    };
    let vs = validate_spec(&spec, ValidationOptions::at(ValidationLevel::FullSnc)).unwrap();
    for check in &vs.certificate().checks {
        println!("[{}] {}: {}", if check.passed { "ok" } else { "!!" }, check.name, check.detail);
    }
    println!("residues: {}", format_residues(residues(&vs)));
    let omega = build_form(&vs);
    println!("ω = {omega}");
    println!("Plücker: {}, Frobenius: {}", omega.plucker_check(), omega.frobenius_check());

    let mut degenerate = spec.clone();
    degenerate.residues = Residues::Matrix(vec![
        vec![rat(1), rat(2), rat(3), rat(-6)],
        vec![rat(2), rat(-1), rat(4), rat(-5)],
    ]);
    match validate_spec(&degenerate, ValidationOptions::at(ValidationLevel::Generic)) {
        Ok(_) => println!("unexpectedly valid"),
        Err(e) => println!("second residue matrix rejected: {e}"),
    }
}
