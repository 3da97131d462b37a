//! Ideal operations on the singular ideal of three coordinate lines.

use logfol::groebner::Ideal;
use logfol::poly::parse_poly;

fn ideal(gens: &[&str]) -> Ideal {
    Ideal::new(3, gens.iter().map(|g| parse_poly(g, 3).unwrap())).unwrap()
}

fn main() {
    let j = ideal(&["x0*x1", "x0*x2", "x1*x2"]);
    println!("J = {j}");
    println!("reduced basis: {:?}", j.basis().elements().iter().map(|p| p.to_string()).collect::<Vec<_>>());

    let x2 = parse_poly("x2", 3).unwrap();
    println!("J : x2 = {}", j.quotient(&x2).unwrap());

    let pairs = ideal(&["x0", "x1"])
        .intersection(&ideal(&["x0", "x2"]))
        .unwrap()
        .intersection(&ideal(&["x1", "x2"]))
        .unwrap();
    println!("(x0,x1) ∩ (x0,x2) ∩ (x1,x2) = {pairs}, equal to J: {}", pairs.same_ideal(&j).unwrap());

    println!("J : J^∞ = {}", j.saturation(&j).unwrap());
    println!("Krull dimension of S/J = {}", j.krull_dimension());

    let cube = ideal(&["(x0 + x1)^3*x2", "x2 - 1"]);
    let f = parse_poly("x0 + x1", 3).unwrap();
    println!("x0 + x1 in radical of {cube}: {}", cube.radical_contains(&f).unwrap());
}
