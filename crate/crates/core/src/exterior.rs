//! Differential forms with polynomial coefficients on affine `(n+1)`-space.
//!
//! A p-form is stored as `Σ c_J dx_J` over strictly increasing index sets `J`
//! of size p. Interior products use `i_{∂j}(dx_J) = (-1)^k dx_{J∖j}` where k
//! is the (zero-based) position of `j` in `J`.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use thiserror::Error;

use crate::poly::{Poly, PolyError, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("index set {0:?} is not strictly increasing within range")]
    InvalidIndexSet(Vec<usize>),
    #[error("cannot contract a {degree}-form with a {size}-vector")]
    ContractionTooLarge { size: usize, degree: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Coordinate multivector `∂_{j1} ∧ ... ∧ ∂_{jp}` with `j1 < ... < jp`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoordMultivector(Vec<usize>);

impl CoordMultivector {
    pub fn new(indices: Vec<usize>, arity: usize) -> Result<Self, FormError> {
        check_index_set(&indices, arity)?;
        Ok(CoordMultivector(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    /// All coordinate multivectors of the given size.
    pub fn all(arity: usize, size: usize) -> impl Iterator<Item = CoordMultivector> {
        (0..arity).combinations(size).map(CoordMultivector)
    }
}

fn check_index_set(indices: &[usize], arity: usize) -> Result<(), FormError> {
    let increasing = indices.windows(2).all(|w| w[0] < w[1]);
    if !increasing || indices.iter().any(|&i| i >= arity) {
        return Err(FormError::InvalidIndexSet(indices.to_vec()));
    }
    Ok(())
}

/// Sign of the shuffle that sorts the concatenation `a ++ b`, or `None` if the
/// sets overlap.
fn shuffle_sign(a: &[usize], b: &[usize]) -> Option<(bool, Vec<usize>)> {
    let mut inversions = 0usize;
    let mut merged = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] == b[j] {
            return None;
        }
        if a[i] < b[j] {
            merged.push(a[i]);
            i += 1;
        } else {
            // b[j] jumps over the remaining elements of a.
            inversions += a.len() - i;
            merged.push(b[j]);
            j += 1;
        }
    }
    merged.extend_from_slice(&a[i..]);
    merged.extend_from_slice(&b[j..]);
    Some((inversions % 2 == 1, merged))
}

#[derive(Clone, PartialEq, Eq)]
pub struct PForm {
    arity: usize,
    degree: usize,
    coeffs: BTreeMap<Vec<usize>, Poly>,
}

impl PForm {
    pub fn zero(arity: usize, degree: usize) -> Self {
        PForm {
            arity,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// The 0-form given by a polynomial.
    pub fn function(f: Poly) -> Self {
        let mut form = PForm::zero(f.arity(), 0);
        form.insert(vec![], f);
        form
    }

    /// `dx_J` for a strictly increasing `J`.
    pub fn basis(arity: usize, indices: &[usize]) -> Result<Self, FormError> {
        check_index_set(indices, arity)?;
        let mut form = PForm::zero(arity, indices.len());
        form.insert(indices.to_vec(), Poly::one(arity));
        Ok(form)
    }

    /// `Σ coeffs[i] dx_i`.
    pub fn one_form(coeffs: Vec<Poly>) -> Result<Self, FormError> {
        let arity = coeffs.len();
        let mut form = PForm::zero(arity, 1);
        for (i, c) in coeffs.into_iter().enumerate() {
            if c.arity() != arity {
                return Err(FormError::ArityMismatch {
                    left: arity,
                    right: c.arity(),
                });
            }
            form.insert(vec![i], c);
        }
        Ok(form)
    }

    /// Builds a p-form from `(J, c_J)` pairs; repeated index sets are summed.
    pub fn from_terms<I>(arity: usize, degree: usize, terms: I) -> Result<Self, FormError>
    where
        I: IntoIterator<Item = (Vec<usize>, Poly)>,
    {
        let mut form = PForm::zero(arity, degree);
        for (j, c) in terms {
            check_index_set(&j, arity)?;
            if j.len() != degree {
                return Err(FormError::DegreeMismatch {
                    left: degree,
                    right: j.len(),
                });
            }
            if c.arity() != arity {
                return Err(FormError::ArityMismatch {
                    left: arity,
                    right: c.arity(),
                });
            }
            form.add_term(j, c);
        }
        Ok(form)
    }

    /// `df = Σ ∂f/∂x_i dx_i`.
    pub fn differential(f: &Poly) -> Self {
        PForm::function(f.clone()).exterior_derivative()
    }

    fn insert(&mut self, j: Vec<usize>, c: Poly) {
        if !c.is_zero() {
            self.coeffs.insert(j, c);
        }
    }

    fn add_term(&mut self, j: Vec<usize>, c: Poly) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.remove(&j) {
            Some(old) => self.insert(j, &old + &c),
            None => self.insert(j, c),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Nonzero coefficients keyed by increasing index sets.
    pub fn coefficients(&self) -> impl Iterator<Item = (&[usize], &Poly)> {
        self.coeffs.iter().map(|(j, c)| (j.as_slice(), c))
    }

    pub fn coefficient(&self, indices: &[usize]) -> Poly {
        self.coeffs
            .get(indices)
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.arity))
    }

    /// Common degree of the coefficients when they are all homogeneous of the
    /// same degree.
    pub fn coefficient_degree(&self) -> Option<u32> {
        let mut degrees = self.coeffs.values().map(|c| c.homogeneous_degree().ok());
        let first = degrees.next()??;
        degrees.all(|d| d == Some(first)).then_some(first)
    }

    fn check_same_shape(&self, other: &PForm) -> Result<(), FormError> {
        if self.arity != other.arity {
            return Err(FormError::ArityMismatch {
                left: self.arity,
                right: other.arity,
            });
        }
        if self.degree != other.degree {
            return Err(FormError::DegreeMismatch {
                left: self.degree,
                right: other.degree,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &PForm) -> Result<PForm, FormError> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (j, c) in &other.coeffs {
            out.add_term(j.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &PForm) -> Result<PForm, FormError> {
        self.add(&other.scale(&Rational::from_integer((-1).into())))
    }

    pub fn scale(&self, c: &Rational) -> PForm {
        let mut out = PForm::zero(self.arity, self.degree);
        for (j, p) in &self.coeffs {
            out.insert(j.clone(), p.scale(c));
        }
        out
    }

    /// Multiplies every coefficient by the function `f`.
    pub fn mul_function(&self, f: &Poly) -> Result<PForm, FormError> {
        if f.arity() != self.arity {
            return Err(FormError::ArityMismatch {
                left: self.arity,
                right: f.arity(),
            });
        }
        let mut out = PForm::zero(self.arity, self.degree);
        for (j, p) in &self.coeffs {
            out.insert(j.clone(), p.checked_mul(f)?);
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &PForm) -> Result<PForm, FormError> {
        if self.arity != other.arity {
            return Err(FormError::ArityMismatch {
                left: self.arity,
                right: other.arity,
            });
        }
        let mut out = PForm::zero(self.arity, self.degree + other.degree);
        if self.degree + other.degree > self.arity {
            return Ok(out);
        }
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                if let Some((negative, merged)) = shuffle_sign(a, b) {
                    let prod = ca.checked_mul(cb)?;
                    out.add_term(merged, if negative { -prod } else { prod });
                }
            }
        }
        Ok(out)
    }

    pub fn exterior_derivative(&self) -> PForm {
        let mut out = PForm::zero(self.arity, self.degree + 1);
        for (j, c) in &self.coeffs {
            for i in 0..self.arity {
                if j.contains(&i) {
                    continue;
                }
                let partial = c.partial_derivative(i).expect("index in range");
                if partial.is_zero() {
                    continue;
                }
                let (negative, merged) = shuffle_sign(&[i], j).expect("disjoint");
                out.add_term(merged, if negative { -partial } else { partial });
            }
        }
        out
    }

    /// Interior product with the coordinate field `∂_j`.
    pub fn contract_index(&self, j: usize) -> Result<PForm, FormError> {
        if j >= self.arity {
            return Err(FormError::InvalidIndexSet(vec![j]));
        }
        if self.degree == 0 {
            return Err(FormError::ContractionTooLarge { size: 1, degree: 0 });
        }
        let mut out = PForm::zero(self.arity, self.degree - 1);
        for (set, c) in &self.coeffs {
            if let Some(pos) = set.iter().position(|&k| k == j) {
                let mut rest = set.clone();
                rest.remove(pos);
                out.add_term(rest, if pos % 2 == 1 { -c } else { c.clone() });
            }
        }
        Ok(out)
    }

    /// `i_{∂_{j1}} ... i_{∂_{jp}} a`, innermost contraction by `j_p`.
    pub fn contract(&self, xi: &CoordMultivector) -> Result<PForm, FormError> {
        if xi.0.len() > self.degree {
            return Err(FormError::ContractionTooLarge {
                size: xi.0.len(),
                degree: self.degree,
            });
        }
        let mut out = self.clone();
        for &j in xi.0.iter().rev() {
            out = out.contract_index(j)?;
        }
        Ok(out)
    }

    /// Contraction with the radial field `R = Σ x_i ∂/∂x_i`. Zero on 0-forms.
    pub fn radial_contraction(&self) -> PForm {
        if self.degree == 0 {
            return PForm::zero(self.arity, 0);
        }
        let mut out = PForm::zero(self.arity, self.degree - 1);
        for i in 0..self.arity {
            let xi = Poly::var(self.arity, i).expect("index in range");
            let part = self
                .contract_index(i)
                .expect("degree >= 1")
                .mul_function(&xi)
                .expect("same arity");
            out = out.add(&part).expect("same shape");
        }
        out
    }

    /// Plücker relations `i_Ξ a ∧ a = 0` over all coordinate (p-1)-vectors.
    pub fn plucker_check(&self) -> bool {
        if self.degree == 0 {
            return true;
        }
        CoordMultivector::all(self.arity, self.degree - 1).all(|xi| {
            self.contract(&xi)
                .and_then(|c| c.wedge(self))
                .map(|w| w.is_zero())
                .unwrap_or(false)
        })
    }

    /// Integrability `d(i_Ξ a) ∧ a = 0` over all coordinate (p-1)-vectors.
    pub fn frobenius_check(&self) -> bool {
        if self.degree == 0 {
            return true;
        }
        CoordMultivector::all(self.arity, self.degree - 1).all(|xi| {
            self.contract(&xi)
                .and_then(|c| c.exterior_derivative().wedge(self))
                .map(|w| w.is_zero())
                .unwrap_or(false)
        })
    }

    /// Substitutes `x_i -> x_{perm[i]}` (pullback along the coordinate
    /// permutation), re-sorting index sets with the matching sign.
    pub fn permute_variables(&self, perm: &[usize]) -> PForm {
        let mut out = PForm::zero(self.arity, self.degree);
        for (set, c) in &self.coeffs {
            let mapped: Vec<usize> = set.iter().map(|&i| perm[i]).collect();
            let mut sorted = mapped.clone();
            sorted.sort_unstable();
            let inversions = (0..mapped.len())
                .flat_map(|a| (a + 1..mapped.len()).map(move |b| (a, b)))
                .filter(|&(a, b)| mapped[a] > mapped[b])
                .count();
            let c = c.permute_variables(perm);
            out.add_term(sorted, if inversions % 2 == 1 { -c } else { c });
        }
        out
    }
}

impl fmt::Display for PForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(j, c)| {
                let basis = j.iter().map(|i| format!("dx{i}")).join("^");
                if basis.is_empty() {
                    format!("({c})")
                } else {
                    format!("({c})*{basis}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for PForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PForm[{}]({self})", self.degree)
    }
}
