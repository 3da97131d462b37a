//! Differential forms: wedge, d, contraction and integrability.

use logfol::exterior::PForm;
use logfol::poly::parse_poly;

fn main() {
    let p = |s: &str| parse_poly(s, 3).unwrap();
    let a = PForm::one_form(vec![p("x1*x2"), p("2*x0*x2"), p("-3*x0*x1")]).unwrap();
    println!("ω = {a}");
    println!("dω = {}", a.exterior_derivative());
    println!("ω ∧ dω = {}", a.wedge(&a.exterior_derivative()).unwrap());
    println!("i_R ω = {}", a.radial_contraction());
    println!("integrable: {}", a.frobenius_check());

    let df = PForm::differential(&p("x0^2 + x1*x2"));
    println!("d(x0^2 + x1*x2) = {df}, d^2 = {}", df.exterior_derivative());

    let area = PForm::basis(3, &[0, 1]).unwrap().wedge(&PForm::basis(3, &[2]).unwrap()).unwrap();
    println!("dx0∧dx1∧dx2 contracted with ∂/∂x1: {}", area.contract_index(1).unwrap());
}
