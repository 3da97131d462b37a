//! Parsing, arithmetic and derivatives of exact rational polynomials.

use logfol::poly::{parse_poly, rat};

fn main() {
    let a = parse_poly("x0 + x1", 3).unwrap();
    let b = parse_poly("x0 - x1", 3).unwrap();
    println!("({a}) * ({b}) = {}", a.checked_mul(&b).unwrap());
    println!("({a})^3 = {}", a.pow(3));

    let p = parse_poly("x0^2*x1 + 1/3*x2^3", 3).unwrap();
    println!("p = {p}, homogeneous of degree {}", p.homogeneous_degree().unwrap());
    for i in 0..3 {
        println!("  dp/dx{i} = {}", p.partial_derivative(i).unwrap());
    }

    // Euler: sum of x_i * dp/dx_i equals deg(p) * p
    let euler = (0..3)
        .map(|i| {
            let xi = parse_poly(&format!("x{i}"), 3).unwrap();
            xi.checked_mul(&p.partial_derivative(i).unwrap()).unwrap()
        })
        .fold(parse_poly("0", 3).unwrap(), |acc, t| acc.checked_add(&t).unwrap());
    println!("euler sum = {euler}  (3p = {})", p.scale(&rat(3)));

    match parse_poly("x0 + x1^2", 2).unwrap().homogeneous_degree() {
        Ok(d) => println!("degree {d}"),
        Err(e) => println!("x0 + x1^2: {e}"),
    }
}
