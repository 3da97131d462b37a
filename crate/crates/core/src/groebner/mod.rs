//! Reduced Gröbner bases, normal forms and the ideal operations built on them.

mod buchberger;
mod ideal;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::poly::{Monomial, MonomialOrder, Poly, Rational, Term};

pub use ideal::{intersect_all, module_annihilator, Ideal, IdealError};

/// Reduced Gröbner basis: monic elements, no term of any element divisible
/// by the leading monomial of another, sorted by increasing leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    arity: usize,
    order: MonomialOrder,
    elements: Vec<Poly>,
}

impl GroebnerBasis {
    /// Runs Buchberger's algorithm on `generators` and reduces the result.
    pub fn compute(arity: usize, generators: &[Poly], order: MonomialOrder) -> GroebnerBasis {
        let input: Vec<Vec<(Monomial, BigInt)>> = generators
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| {
                assert_eq!(g.arity(), arity, "generator arity");
                g.with_order(order).primitive_integer_terms()
            })
            .collect();
        let elements = match buchberger::groebner(order, input) {
            None => vec![Poly::one(arity).with_order(order)],
            Some(basis) => {
                let polys = basis
                    .into_iter()
                    .map(|p| {
                        let terms: Vec<Term> = p
                            .terms
                            .into_iter()
                            .map(|(m, c)| (m, Rational::from_integer(c)))
                            .collect();
                        Poly::from_sorted(arity, order, terms).monic()
                    })
                    .collect();
                interreduce(order, polys)
            }
        };
        GroebnerBasis {
            arity,
            order,
            elements,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn elements(&self) -> &[Poly] {
        &self.elements
    }

    pub fn leading_monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.elements.iter().filter_map(|p| p.leading_monomial())
    }

    /// True for the basis `{1}`.
    pub fn is_unit(&self) -> bool {
        self.elements.len() == 1 && self.elements[0].is_constant()
    }

    /// True for the empty basis of the zero ideal.
    pub fn is_zero(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn normal_form(&self, p: &Poly) -> Poly {
        normal_form(p, self)
    }

    pub fn contains(&self, p: &Poly) -> bool {
        normal_form(p, self).is_zero()
    }
}

/// Remainder of `p` on division by `gb`: no term of the result is divisible
/// by a leading monomial of `gb`, and `p - result` lies in the ideal.
pub fn normal_form(p: &Poly, gb: &GroebnerBasis) -> Poly {
    assert_eq!(p.arity(), gb.arity, "normal_form arity mismatch");
    reduce_by(gb.order, p.with_order(gb.order), &gb.elements)
}

/// Full reduction by monic polynomials sorted under `order`.
fn reduce_by(order: MonomialOrder, p: Poly, divisors: &[Poly]) -> Poly {
    let arity = p.arity();
    let mut rest: Vec<Term> = p.into_terms();
    let mut done: Vec<Term> = Vec::new();
    let mut start = 0;
    while start < rest.len() {
        let (m, c) = &rest[start];
        let Some(g) = divisors
            .iter()
            .find(|g| g.leading_monomial().is_some_and(|lm| lm.divides(m)))
        else {
            done.push(rest[start].clone());
            start += 1;
            continue;
        };
        let shift = m.div(g.leading_monomial().unwrap()).unwrap();
        let c = c.clone();
        rest = sub_shifted(order, &rest[start + 1..], &g.terms()[1..], &c, &shift);
        start = 0;
    }
    Poly::from_sorted(arity, order, done)
}

/// `a - c * shift * b` for descending term lists.
fn sub_shifted(order: MonomialOrder, a: &[Term], b: &[Term], c: &Rational, shift: &Monomial) -> Vec<Term> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut bi = b.iter().map(|(m, d)| (m.mul(shift), -(d * c))).peekable();
    let mut ai = a.iter().peekable();
    loop {
        match (ai.peek(), bi.peek()) {
            (Some(x), Some(y)) => match order.compare(&x.0, &y.0) {
                Ordering::Greater => out.push(ai.next().unwrap().clone()),
                Ordering::Less => out.push(bi.next().unwrap()),
                Ordering::Equal => {
                    let (m, d) = ai.next().unwrap();
                    let (_, e) = bi.next().unwrap();
                    let s = d + e;
                    if !s.is_zero() {
                        out.push((m.clone(), s));
                    }
                }
            },
            (Some(_), None) => out.push(ai.next().unwrap().clone()),
            (None, Some(_)) => out.push(bi.next().unwrap()),
            (None, None) => break,
        }
    }
    out
}

/// Minimalizes and tail-reduces a monic Gröbner basis.
fn interreduce(order: MonomialOrder, mut polys: Vec<Poly>) -> Vec<Poly> {
    polys.sort_by(|a, b| {
        order.compare(a.leading_monomial().unwrap(), b.leading_monomial().unwrap())
    });
    let mut minimal: Vec<Poly> = Vec::new();
    for p in polys {
        let lm = p.leading_monomial().unwrap();
        if !minimal
            .iter()
            .any(|q| q.leading_monomial().unwrap().divides(lm))
        {
            minimal.push(p);
        }
    }
    let reduced: Vec<Poly> = (0..minimal.len())
        .map(|k| {
            let p = &minimal[k];
            let others: Vec<Poly> = minimal
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, q)| q.clone())
                .collect();
            let (lm, lc) = p.leading_term().unwrap().clone();
            debug_assert!(lc.is_one());
            let tail = Poly::from_sorted(p.arity(), order, p.terms()[1..].to_vec());
            let tail = reduce_by(order, tail, &others);
            let mut terms = vec![(lm, lc)];
            terms.extend(tail.into_terms());
            Poly::from_sorted(p.arity(), order, terms)
        })
        .collect();
    reduced
}

/// Convenience wrapper: reduced Gröbner basis of an ideal (cached on it).
pub fn reduced_groebner(ideal: &Ideal, order: MonomialOrder) -> std::sync::Arc<GroebnerBasis> {
    ideal.groebner(order)
}

pub(crate) fn unit_basis(arity: usize, order: MonomialOrder) -> GroebnerBasis {
    GroebnerBasis {
        arity,
        order,
        elements: vec![Poly::constant(arity, Rational::one()).with_order(order)],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn p(s: &str, n: usize) -> Poly {
        parse_poly(s, n).unwrap()
    }

    fn gb(gens: &[&str], n: usize, order: MonomialOrder) -> GroebnerBasis {
        let gens: Vec<Poly> = gens.iter().map(|s| p(s, n)).collect();
        GroebnerBasis::compute(n, &gens, order)
    }

    #[test]
    fn monomial_ideal_is_its_own_basis() {
        let g = gb(&["x0*x1", "x0*x2", "x1*x2"], 3, MonomialOrder::GrevLex);
        let mut els: Vec<String> = g.elements().iter().map(|e| e.to_string()).collect();
        els.sort();
        assert_eq!(els, ["x0*x1", "x0*x2", "x1*x2"]);
    }

    #[test]
    fn linear_reduction_and_unit() {
        let g = gb(&["x0", "x0 + x1"], 2, MonomialOrder::GrevLex);
        assert_eq!(g.elements(), &[p("x1", 2), p("x0", 2)]);
        assert!(gb(&["1"], 3, MonomialOrder::GrevLex).is_unit());
        assert!(gb(&["x0*x1 - 1", "x0"], 2, MonomialOrder::GrevLex).is_unit());
    }

    #[test]
    fn normal_forms() {
        let g = gb(&["x0"], 2, MonomialOrder::GrevLex);
        assert!(g.normal_form(&p("x0*x1", 2)).is_zero());
        assert_eq!(g.normal_form(&p("x1^2", 2)), p("x1^2", 2));
        // substitute x0 -> x1 under lex
        let g = gb(&["x0 - x1"], 2, MonomialOrder::Lex);
        let r = g.normal_form(&p("x0^2 + x1", 2));
        assert_eq!(r, p("x1^2 + x1", 2));
        assert_eq!(g.normal_form(&r), r);
    }

    #[test]
    fn twisted_cubic_grevlex() {
        // Classic example: the ideal of the twisted cubic.
        let g = gb(&["x1^2 - x0*x2", "x1*x2 - x0*x3", "x2^2 - x1*x3"], 4, MonomialOrder::GrevLex);
        assert_eq!(g.elements().len(), 3);
        let g_lex = gb(&["x1^2 - x0*x2", "x1*x2 - x0*x3", "x2^2 - x1*x3"], 4, MonomialOrder::Lex);
        for e in g_lex.elements() {
            assert!(g.contains(e));
        }
        for e in g.elements() {
            assert!(g_lex.contains(e));
        }
    }

    #[test]
    fn basis_is_independent_of_generating_set() {
        let a = gb(&["x0^2 - x1*x2", "x1^2 - x0*x2"], 3, MonomialOrder::GrevLex);
        let b = gb(
            &["x0^2 - x1*x2 + 3*(x1^2 - x0*x2)", "x1^2 - x0*x2", "x0*(x0^2 - x1*x2)"],
            3,
            MonomialOrder::GrevLex,
        );
        assert_eq!(a, b);
    }
}
