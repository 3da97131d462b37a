//! Singular, Kupka, persistent and residual ideals of a pencil of conics.

use logfol::foliation::{validate_spec, FoliationSpec, Residues, ValidationLevel, ValidationOptions};
use logfol::poly::{parse_poly, rat};
use logfol::schemes::{Dim, SchemeIdeals};

fn main() {
    let conics = ["x0^2 + x1^2 - x2^2", "x0^2 - 2*x1^2 + x0*x2 + x2^2", "x0*x1 + 2*x1*x2 - 3*x2^2 + x0*x2"];
    let spec = FoliationSpec {
        n: 2,
        q: 1,
        divisors: conics.iter().map(|f| parse_poly(f, 3).unwrap()).collect(),
        residues: Residues::Matrix(vec![vec![rat(1), rat(2), rat(-3)]]),
    };
    let vs = validate_spec(&spec, ValidationOptions::at(ValidationLevel::FullSnc)).unwrap();
    let ideals = SchemeIdeals::compute(&vs).unwrap();
    for (name, ideal) in [("J", &ideals.j), ("K", &ideals.k), ("P_sum", &ideals.p_sum), ("P_cap", &ideals.p_cap), ("H", &ideals.h)] {
        println!("{name}: {} generators, projective dimension {}", ideal.generators().len(), Dim::of(ideal));
    }
    println!("K and P_cap have the same radical: {}", ideals.k.same_radical(&ideals.p_cap).unwrap());
    println!("P_sum = P_cap: {}", ideals.p_sum.same_ideal(&ideals.p_cap).unwrap());
}
