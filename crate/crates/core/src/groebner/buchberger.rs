//! Buchberger's algorithm over the integers (fraction-free), with the
//! Gebauer–Möller pair update and normal pair selection.
//!
//! Working polynomials are kept primitive with positive leading coefficient;
//! the caller converts the final basis to monic rational form.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::poly::{Monomial, MonomialOrder};

pub(crate) type ITerm = (Monomial, BigInt);

#[derive(Clone, Debug)]
pub(crate) struct IPoly {
    pub terms: Vec<ITerm>,
}

impl IPoly {
    fn lm(&self) -> &Monomial {
        &self.terms[0].0
    }

    fn lc(&self) -> &BigInt {
        &self.terms[0].1
    }

    fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

/// `a_mul * a - b_mul * shift * b`, both inputs sorted descending.
fn combine(
    order: MonomialOrder,
    a: &[ITerm],
    a_mul: &BigInt,
    b: &[ITerm],
    b_mul: &BigInt,
    shift: &Monomial,
) -> Vec<ITerm> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let scale_a = |c: &BigInt| if a_mul.is_one() { c.clone() } else { c * a_mul };
    let (mut i, mut j) = (0, 0);
    let mut pending_b: Option<Monomial> = b.first().map(|t| t.0.mul(shift));
    while i < a.len() {
        let Some(mb) = pending_b.as_ref() else { break };
        match order.compare(&a[i].0, mb) {
            Ordering::Greater => {
                out.push((a[i].0.clone(), scale_a(&a[i].1)));
                i += 1;
            }
            Ordering::Less => {
                out.push((pending_b.take().unwrap(), -(b_mul * &b[j].1)));
                j += 1;
                pending_b = b.get(j).map(|t| t.0.mul(shift));
            }
            Ordering::Equal => {
                let c = scale_a(&a[i].1) - b_mul * &b[j].1;
                let m = pending_b.take().unwrap();
                if !c.is_zero() {
                    out.push((m, c));
                }
                i += 1;
                j += 1;
                pending_b = b.get(j).map(|t| t.0.mul(shift));
            }
        }
    }
    out.extend(a[i..].iter().map(|(m, c)| (m.clone(), scale_a(c))));
    if let Some(m) = pending_b {
        out.push((m, -(b_mul * &b[j].1)));
        out.extend(b[j + 1..].iter().map(|(m, c)| (m.mul(shift), -(b_mul * c))));
    }
    out
}

fn content(terms: &[ITerm]) -> BigInt {
    let mut g = BigInt::zero();
    for (_, c) in terms {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

pub(crate) fn make_primitive(terms: &mut [ITerm]) {
    let mut g = content(terms);
    if terms.first().is_some_and(|(_, c)| c.is_negative()) {
        g = -g;
    }
    if !g.is_zero() && !g.is_one() {
        for (_, c) in terms.iter_mut() {
            *c = &*c / &g;
        }
    }
}

fn find_reducer<'a>(m: &Monomial, basis: &'a [IPoly], active: &[usize]) -> Option<&'a IPoly> {
    active
        .iter()
        .map(|&k| &basis[k])
        .find(|g| g.lm().divides(m))
}

/// Full reduction of `p` against the active basis elements; the result is
/// primitive (or empty).
fn full_reduce(order: MonomialOrder, p: Vec<ITerm>, basis: &[IPoly], active: &[usize]) -> Vec<ITerm> {
    let mut rest = p;
    let mut done: Vec<ITerm> = Vec::new();
    let mut done_content = BigInt::zero();
    while let Some((m, c)) = rest.first() {
        let Some(g) = find_reducer(m, basis, active) else {
            let t = rest.remove(0);
            done_content = done_content.gcd(&t.1);
            done.push(t);
            continue;
        };
        let shift = m.div(g.lm()).expect("divisor");
        let gc = c.gcd(g.lc());
        let a = g.lc() / &gc;
        let b = c / &gc;
        rest = combine(order, &rest[1..], &a, &g.terms[1..], &b, &shift);
        if !a.is_one() {
            for (_, d) in done.iter_mut() {
                *d *= &a;
            }
            done_content *= a.abs();
        }
        // Divide out the common content of both parts whenever it is nontrivial.
        let mut g_all = done_content.clone();
        if !g_all.is_one() {
            for (_, d) in &rest {
                g_all = g_all.gcd(d);
                if g_all.is_one() {
                    break;
                }
            }
            if !g_all.is_zero() && !g_all.is_one() {
                for (_, d) in rest.iter_mut().chain(done.iter_mut()) {
                    *d = &*d / &g_all;
                }
                done_content = &done_content / &g_all;
            }
        }
    }
    make_primitive(&mut done);
    done
}

fn spoly(order: MonomialOrder, f: &IPoly, g: &IPoly, lcm: &Monomial) -> Vec<ITerm> {
    let sf = lcm.div(f.lm()).expect("lcm");
    let sg = lcm.div(g.lm()).expect("lcm");
    let gc = f.lc().gcd(g.lc());
    let a = g.lc() / &gc;
    let b = f.lc() / &gc;
    // a*sf*f - b*sg*g; leading terms cancel.
    let f_shifted: Vec<ITerm> = f.terms[1..].iter().map(|(m, c)| (m.mul(&sf), c.clone())).collect();
    combine(order, &f_shifted, &a, &g.terms[1..], &b, &sg)
}

fn pair_cmp(a: &Pair, b: &Pair, order: MonomialOrder) -> Ordering {
    a.lcm
        .degree()
        .cmp(&b.lcm.degree())
        .then_with(|| order.compare(&a.lcm, &b.lcm))
        .then_with(|| (a.i, a.j).cmp(&(b.i, b.j)))
}

/// Gebauer–Möller installation of the new element `h` into `(basis, pairs)`.
fn update(basis: &[IPoly], active: &mut Vec<usize>, pairs: &mut Vec<Pair>, h: usize) {
    let hm = basis[h].lm().clone();
    let mut candidates: Vec<Pair> = active
        .iter()
        .map(|&g| Pair {
            i: g,
            j: h,
            lcm: basis[g].lm().lcm(&hm),
        })
        .collect();

    let mut kept: Vec<Pair> = Vec::new();
    while let Some(p) = candidates.pop() {
        let coprime = basis[p.i].lm().is_coprime(&hm);
        let dominated = candidates
            .iter()
            .chain(kept.iter())
            .any(|q| q.lcm.divides(&p.lcm));
        if coprime || !dominated {
            kept.push(p);
        }
    }
    kept.retain(|p| !basis[p.i].lm().is_coprime(&hm));

    pairs.retain(|p| {
        !(hm.divides(&p.lcm)
            && basis[p.i].lm().lcm(&hm) != p.lcm
            && basis[p.j].lm().lcm(&hm) != p.lcm)
    });
    pairs.extend(kept);

    active.retain(|&g| !hm.divides(basis[g].lm()));
    active.push(h);
}

/// Computes a Gröbner basis (not yet reduced) of the given primitive integer
/// polynomials. Returns `None` when the ideal is the unit ideal.
pub(crate) fn groebner(order: MonomialOrder, input: Vec<Vec<ITerm>>) -> Option<Vec<IPoly>> {
    let mut basis: Vec<IPoly> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    let mut input = input;
    input.retain(|t| !t.is_empty());
    input.sort_by(|a, b| order.compare(&a[0].0, &b[0].0));

    for terms in input {
        let reduced = full_reduce(order, terms, &basis, &active);
        if reduced.is_empty() {
            continue;
        }
        let p = IPoly { terms: reduced };
        if p.is_constant() {
            return None;
        }
        basis.push(p);
        update(&basis, &mut active, &mut pairs, basis.len() - 1);
    }

    while !pairs.is_empty() {
        let best = (0..pairs.len())
            .min_by(|&a, &b| pair_cmp(&pairs[a], &pairs[b], order))
            .expect("nonempty");
        let pair = pairs.swap_remove(best);
        let s = spoly(order, &basis[pair.i], &basis[pair.j], &pair.lcm);
        if s.is_empty() {
            continue;
        }
        let reduced = full_reduce(order, s, &basis, &active);
        if reduced.is_empty() {
            continue;
        }
        let p = IPoly { terms: reduced };
        if p.is_constant() {
            return None;
        }
        basis.push(p);
        update(&basis, &mut active, &mut pairs, basis.len() - 1);
    }

    Some(active.into_iter().map(|k| basis[k].clone()).collect())
}
