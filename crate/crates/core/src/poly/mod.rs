//! Sparse multivariate polynomials over the rationals.
//!
//! A [`Poly`] keeps its terms sorted in descending order under the
//! [`MonomialOrder`] it was built with. Changing the order is always an
//! explicit [`Poly::with_order`] call; binary operations on polynomials with
//! different orders or arities are rejected.

mod monomial;
mod parse;

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;
use thiserror::Error;

pub use monomial::{Monomial, MonomialOrder};
pub use parse::{format_rational, parse_poly, parse_poly_with, parse_rational, default_names};

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("parse error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("negative exponent at offset {0}")]
    NegativeExponent(usize),
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("monomial order mismatch: {left:?} vs {right:?}")]
    OrderMismatch {
        left: MonomialOrder,
        right: MonomialOrder,
    },
    #[error("variable index {index} out of range for {arity} variables")]
    VariableOutOfRange { index: usize, arity: usize },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("zero polynomial has no degree")]
    ZeroPolynomial,
    #[error("division by zero")]
    DivisionByZero,
    #[error("division by a non-constant polynomial")]
    NonConstantDivisor,
}

pub type Term = (Monomial, Rational);

/// Polynomial in `arity` variables with rational coefficients.
#[derive(Clone)]
pub struct Poly {
    arity: usize,
    order: MonomialOrder,
    terms: Vec<Term>,
}

impl Poly {
    pub fn zero(arity: usize) -> Self {
        Poly {
            arity,
            order: MonomialOrder::default(),
            terms: Vec::new(),
        }
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, Rational::one())
    }

    pub fn constant(arity: usize, c: Rational) -> Self {
        Self::monomial(Monomial::one(arity), c)
    }

    pub fn from_int(arity: usize, c: i64) -> Self {
        Self::constant(arity, Rational::from_integer(c.into()))
    }

    /// The variable `x_i`.
    pub fn var(arity: usize, i: usize) -> Result<Self, PolyError> {
        if i >= arity {
            return Err(PolyError::VariableOutOfRange { index: i, arity });
        }
        Ok(Self::monomial(Monomial::var(arity, i), Rational::one()))
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let arity = m.arity();
        let terms = if c.is_zero() { vec![] } else { vec![(m, c)] };
        Poly {
            arity,
            order: MonomialOrder::default(),
            terms,
        }
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates and
    /// dropping zeros.
    pub fn from_terms<I>(arity: usize, order: MonomialOrder, terms: I) -> Self
    where
        I: IntoIterator<Item = Term>,
    {
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.arity(), arity, "monomial arity mismatch");
            if c.is_zero() {
                continue;
            }
            *acc.entry(m).or_insert_with(Rational::zero) += c;
        }
        let mut terms: Vec<Term> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| order.compare(&b.0, &a.0));
        Poly {
            arity,
            order,
            terms,
        }
    }

    /// Trusted constructor: `terms` already sorted descending, nonzero, unique.
    pub(crate) fn from_sorted(arity: usize, order: MonomialOrder, terms: Vec<Term>) -> Self {
        debug_assert!(terms
            .windows(2)
            .all(|w| order.compare(&w[0].0, &w[1].0).is_gt()));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        Poly {
            arity,
            order,
            terms,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    /// Terms in descending order.
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn leading_term(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms
            .iter()
            .find(|(t, _)| t == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    /// Common degree of all terms.
    pub fn homogeneous_degree(&self) -> Result<u32, PolyError> {
        let d = self
            .terms
            .first()
            .map(|(m, _)| m.degree())
            .ok_or(PolyError::ZeroPolynomial)?;
        if self.terms.iter().all(|(m, _)| m.degree() == d) {
            Ok(d)
        } else {
            Err(PolyError::NotHomogeneous)
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_ok()
    }

    /// Re-sorts the terms under `order`.
    pub fn with_order(&self, order: MonomialOrder) -> Poly {
        if order == self.order {
            return self.clone();
        }
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| order.compare(&b.0, &a.0));
        Poly {
            arity: self.arity,
            order,
            terms,
        }
    }

    fn check_compatible(&self, other: &Poly) -> Result<(), PolyError> {
        if self.arity != other.arity {
            return Err(PolyError::ArityMismatch {
                left: self.arity,
                right: other.arity,
            });
        }
        // Zero and constants sort identically under every order.
        if self.order != other.order && self.terms.len() > 1 && other.terms.len() > 1 {
            return Err(PolyError::OrderMismatch {
                left: self.order,
                right: other.order,
            });
        }
        Ok(())
    }

    fn common_order(&self, other: &Poly) -> MonomialOrder {
        if self.terms.len() > 1 || other.terms.len() <= 1 {
            self.order
        } else {
            other.order
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_compatible(other)?;
        let order = self.common_order(other);
        Ok(Poly::from_sorted(
            self.arity,
            order,
            merge_terms(order, &self.terms, &other.terms, |c| c.clone()),
        ))
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_compatible(other)?;
        let order = self.common_order(other);
        Ok(Poly::from_sorted(
            self.arity,
            order,
            merge_terms(order, &self.terms, &other.terms, |c| -c),
        ))
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_compatible(other)?;
        let order = self.common_order(other);
        if self.is_zero() || other.is_zero() {
            return Ok(Poly {
                arity: self.arity,
                order,
                terms: vec![],
            });
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return Ok(self.mul_term(m, c).with_order(order));
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return Ok(other.mul_term(m, c).with_order(order));
        }
        let mut acc: HashMap<Monomial, Rational> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                *acc.entry(ma.mul(mb)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        let mut terms: Vec<Term> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| order.compare(&b.0, &a.0));
        Ok(Poly::from_sorted(self.arity, order, terms))
    }

    /// Multiplies by the single term `c * m`; order is preserved since term
    /// orders are multiplicative.
    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly {
                arity: self.arity,
                order: self.order,
                terms: vec![],
            };
        }
        let terms = self
            .terms
            .iter()
            .map(|(t, d)| (t.mul(m), d * c))
            .collect();
        Poly::from_sorted(self.arity, self.order, terms)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        self.mul_term(&Monomial::one(self.arity), c)
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.arity).with_order(self.order);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Divides by a nonzero constant polynomial.
    pub fn checked_div_constant(&self, other: &Poly) -> Result<Poly, PolyError> {
        if other.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        if !other.is_constant() {
            return Err(PolyError::NonConstantDivisor);
        }
        Ok(self.scale(&other.terms[0].1.recip()))
    }

    /// Scales so that the leading coefficient is one.
    pub fn monic(&self) -> Poly {
        match self.leading_coefficient() {
            Some(c) if !c.is_one() => self.scale(&c.recip()),
            _ => self.clone(),
        }
    }

    pub fn partial_derivative(&self, i: usize) -> Result<Poly, PolyError> {
        if i >= self.arity {
            return Err(PolyError::VariableOutOfRange {
                index: i,
                arity: self.arity,
            });
        }
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponent(i);
            if e == 0 {
                return None;
            }
            let mut exps: SmallVec<[u32; 8]> = m.exponents().into();
            exps[i] -= 1;
            Some((m.with_exponents(exps), c * Rational::from_integer(BigInt::from(e))))
        });
        // Differentiation can reorder terms under graded orders.
        Ok(Poly::from_terms(self.arity, self.order, terms))
    }

    /// Exact quotient by `divisor`, or `None` if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Poly) -> Result<Option<Poly>, PolyError> {
        self.check_compatible(divisor)?;
        if divisor.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let divisor = divisor.with_order(self.order);
        let (lm, lc) = divisor.leading_term().expect("nonzero");
        let lc_inv = lc.recip();
        let mut rest = self.clone();
        let mut quotient = Vec::new();
        while let Some((m, c)) = rest.leading_term() {
            let Some(q) = m.div(lm) else {
                return Ok(None);
            };
            let qc = c * &lc_inv;
            rest = &rest - &divisor.mul_term(&q, &qc);
            quotient.push((q, qc));
        }
        Ok(Some(Poly::from_terms(self.arity, self.order, quotient)))
    }

    /// Substitutes `x_i -> x_{perm[i]}`.
    pub fn permute_variables(&self, perm: &[usize]) -> Poly {
        assert_eq!(perm.len(), self.arity, "permutation length");
        let terms = self.terms.iter().map(|(m, c)| {
            let mut exps: SmallVec<[u32; 8]> = SmallVec::from_elem(0, self.arity);
            for (i, &e) in m.exponents().iter().enumerate() {
                exps[perm[i]] += e;
            }
            (m.with_exponents(exps), c.clone())
        });
        Poly::from_terms(self.arity, self.order, terms)
    }

    /// Embeds into a ring with `k` new variables placed before `x0`.
    pub fn extend_front(&self, k: usize, order: MonomialOrder) -> Poly {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut exps: SmallVec<[u32; 8]> = SmallVec::from_elem(0, k);
            exps.extend_from_slice(m.exponents());
            (m.with_exponents(exps), c.clone())
        });
        Poly::from_terms(self.arity + k, order, terms)
    }

    /// Drops the first `k` variables; `None` if any of them occurs.
    pub fn drop_front(&self, k: usize, order: MonomialOrder) -> Option<Poly> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            if m.exponents()[..k].iter().any(|&e| e > 0) {
                return None;
            }
            terms.push((m.with_exponents(m.exponents()[k..].into()), c.clone()));
        }
        Some(Poly::from_terms(self.arity - k, order, terms))
    }

    /// Multiplies by the lcm of the denominators and divides by the content,
    /// giving a primitive integer polynomial with positive leading coefficient.
    pub fn primitive_integer_terms(&self) -> Vec<(Monomial, BigInt)> {
        let mut denom = BigInt::one();
        for (_, c) in &self.terms {
            denom = denom.lcm(c.denom());
        }
        let mut ints: Vec<(Monomial, BigInt)> = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), c.numer() * (&denom / c.denom())))
            .collect();
        let mut content = BigInt::zero();
        for (_, c) in &ints {
            content = content.gcd(c);
        }
        if ints.first().is_some_and(|(_, c)| c.is_negative()) {
            content = -content;
        }
        if !content.is_zero() && !content.is_one() {
            for (_, c) in ints.iter_mut() {
                *c = &*c / &content;
            }
        }
        ints
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

fn merge_terms(
    order: MonomialOrder,
    a: &[Term],
    b: &[Term],
    map_b: impl Fn(&Rational) -> Rational,
) -> Vec<Term> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match order.compare(&a[i].0, &b[j].0) {
            std::cmp::Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Less => {
                out.push((b[j].0.clone(), map_b(&b[j].1)));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let c = &a[i].1 + map_b(&b[j].1);
                if !c.is_zero() {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    out.extend(b[j..].iter().map(|(m, c)| (m.clone(), map_b(c))));
    out
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        if self.arity != other.arity || self.terms.len() != other.terms.len() {
            return false;
        }
        if self.order == other.order {
            self.terms == other.terms
        } else {
            self.terms == other.with_order(self.order).terms
        }
    }
}

impl Eq for Poly {}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_names(self.arity);
        write!(f, "{}", self.display_with(&names))
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.poly.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(format_rational(&abs));
            }
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.names[i].clone()),
                    _ => factors.push(format!("{}^{}", self.names[i], e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<'a> $trait<&'a Poly> for &'a Poly {
            type Output = Poly;
            fn $method(self, rhs: &'a Poly) -> Poly {
                self.$checked(rhs)
                    .unwrap_or_else(|e| panic!("polynomial {}: {e}", stringify!($method)))
            }
        }
        impl $trait<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            arity: self.arity,
            order: self.order,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}
