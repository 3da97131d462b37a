use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use rayon::prelude::*;
use thiserror::Error;

use super::{unit_basis, GroebnerBasis};
use crate::poly::{MonomialOrder, Poly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdealError {
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("colon by the zero polynomial")]
    ZeroDivisor,
}

/// Finitely generated ideal of `Q[x0..x{arity-1}]` with a per-order cache of
/// reduced Gröbner bases.
pub struct Ideal {
    arity: usize,
    generators: Vec<Poly>,
    cache: RwLock<HashMap<MonomialOrder, Arc<GroebnerBasis>>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        Ideal {
            arity: self.arity,
            generators: self.generators.clone(),
            cache: RwLock::new(self.cache.read().expect("cache lock").clone()),
        }
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal{self}")
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "({})", gens.join(", "))
    }
}

impl Ideal {
    /// Zero generators are dropped. All generators must have `arity` variables.
    pub fn new<I>(arity: usize, generators: I) -> Result<Ideal, IdealError>
    where
        I: IntoIterator<Item = Poly>,
    {
        let mut gens = Vec::new();
        for g in generators {
            if g.arity() != arity {
                return Err(IdealError::ArityMismatch {
                    left: arity,
                    right: g.arity(),
                });
            }
            if !g.is_zero() {
                gens.push(g.with_order(MonomialOrder::GrevLex));
            }
        }
        Ok(Ideal {
            arity,
            generators: gens,
            cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn zero(arity: usize) -> Ideal {
        Ideal::new(arity, []).expect("empty")
    }

    pub fn unit(arity: usize) -> Ideal {
        let ideal = Ideal::new(arity, [Poly::one(arity)]).expect("arity");
        ideal.insert_basis(Arc::new(unit_basis(arity, MonomialOrder::GrevLex)));
        ideal
    }

    pub fn principal(p: Poly) -> Ideal {
        Ideal::new(p.arity(), [p]).expect("arity")
    }

    /// The ideal generated by the elements of a reduced basis; the basis is
    /// seeded into the cache.
    pub fn from_basis(gb: GroebnerBasis) -> Ideal {
        let ideal = Ideal::new(gb.arity(), gb.elements().iter().cloned()).expect("arity");
        ideal.insert_basis(Arc::new(gb));
        ideal
    }

    fn insert_basis(&self, gb: Arc<GroebnerBasis>) {
        self.cache
            .write()
            .expect("cache lock")
            .entry(gb.order())
            .or_insert(gb);
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn is_homogeneous(&self) -> bool {
        self.generators.iter().all(Poly::is_homogeneous)
    }

    /// Reduced Gröbner basis under `order`, computed once and cached.
    pub fn groebner(&self, order: MonomialOrder) -> Arc<GroebnerBasis> {
        if let Some(gb) = self.cache.read().expect("cache lock").get(&order) {
            return Arc::clone(gb);
        }
        let gb = Arc::new(GroebnerBasis::compute(self.arity, &self.generators, order));
        let mut cache = self.cache.write().expect("cache lock");
        Arc::clone(cache.entry(order).or_insert(gb))
    }

    pub fn basis(&self) -> Arc<GroebnerBasis> {
        self.groebner(MonomialOrder::GrevLex)
    }

    /// Copy generated by the reduced grevlex basis.
    pub fn reduced(&self) -> Ideal {
        Ideal::from_basis((*self.basis()).clone())
    }

    pub fn contains(&self, p: &Poly) -> bool {
        p.is_zero() || self.basis().contains(p)
    }

    pub fn is_unit(&self) -> bool {
        self.generators.iter().any(Poly::is_constant) || self.basis().is_unit()
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_subset_of(&self, other: &Ideal) -> bool {
        self.generators.iter().all(|g| other.contains(g))
    }

    fn check_arity(&self, other: &Ideal) -> Result<(), IdealError> {
        if self.arity != other.arity {
            return Err(IdealError::ArityMismatch {
                left: self.arity,
                right: other.arity,
            });
        }
        Ok(())
    }

    /// `I + J`, generated by the union of the generator lists.
    pub fn sum(&self, other: &Ideal) -> Result<Ideal, IdealError> {
        self.check_arity(other)?;
        Ideal::new(
            self.arity,
            self.generators.iter().chain(other.generators.iter()).cloned(),
        )
    }

    /// `I ∩ J` by eliminating `t` from `t*I + (1 - t)*J`.
    pub fn intersection(&self, other: &Ideal) -> Result<Ideal, IdealError> {
        self.check_arity(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Ideal::zero(self.arity));
        }
        if self.is_unit() {
            return Ok(other.clone());
        }
        if other.is_unit() {
            return Ok(self.clone());
        }
        let n = self.arity;
        let order = MonomialOrder::Block(1);
        let t = Poly::var(n + 1, 0).expect("t");
        let one_minus_t = (&Poly::one(n + 1) - &t).with_order(order);
        let gens: Vec<Poly> = self
            .basis()
            .elements()
            .iter()
            .map(|f| &f.extend_front(1, order) * &t)
            .chain(
                other
                    .basis()
                    .elements()
                    .iter()
                    .map(|g| &g.extend_front(1, order) * &one_minus_t),
            )
            .collect();
        let gb = GroebnerBasis::compute(n + 1, &gens, order);
        let kept = gb
            .elements()
            .iter()
            .filter_map(|p| p.drop_front(1, MonomialOrder::GrevLex));
        Ideal::new(n, kept)
    }

    /// Colon ideal `I : g = {h : h*g ∈ I}`.
    pub fn quotient(&self, g: &Poly) -> Result<Ideal, IdealError> {
        if g.arity() != self.arity {
            return Err(IdealError::ArityMismatch {
                left: self.arity,
                right: g.arity(),
            });
        }
        if g.is_zero() {
            return Err(IdealError::ZeroDivisor);
        }
        if g.is_constant() || self.is_unit() {
            return Ok(self.clone());
        }
        if self.contains(g) {
            return Ok(Ideal::unit(self.arity));
        }
        let g = g.with_order(MonomialOrder::GrevLex);
        let meet = self.intersection(&Ideal::principal(g.clone()))?;
        let gens = meet.generators.iter().map(|h| {
            h.div_exact(&g)
                .expect("same order")
                .expect("element of (g) is divisible by g")
        });
        Ideal::new(self.arity, gens)
    }

    /// `I : J^∞`, iterating `I_{k+1} = ∩_{g ∈ J} (I_k : g)` until the reduced
    /// basis stops changing.
    pub fn saturation(&self, other: &Ideal) -> Result<Ideal, IdealError> {
        self.check_arity(other)?;
        if other.is_zero() {
            return Ok(Ideal::unit(self.arity));
        }
        if other.is_unit() {
            return Ok(self.clone());
        }
        let divisors: Vec<Poly> = other.basis().elements().to_vec();
        let mut current = self.reduced();
        loop {
            if current.is_unit() {
                return Ok(current);
            }
            let next = intersect_all(
                self.arity,
                divisors
                    .par_iter()
                    .map(|g| current.quotient(g))
                    .collect::<Result<Vec<_>, _>>()?,
            )?
            .reduced();
            if *next.basis() == *current.basis() {
                return Ok(current);
            }
            current = next;
        }
    }

    /// Rabinowitsch test: `f ∈ √I` iff `1 ∈ I + (1 - t*f)`.
    pub fn radical_contains(&self, f: &Poly) -> Result<bool, IdealError> {
        if f.arity() != self.arity {
            return Err(IdealError::ArityMismatch {
                left: self.arity,
                right: f.arity(),
            });
        }
        if self.contains(f) {
            return Ok(true);
        }
        let n = self.arity;
        let order = MonomialOrder::GrevLex;
        let t = Poly::var(n + 1, 0).expect("t");
        let witness = &Poly::one(n + 1) - &(&t * &f.extend_front(1, order));
        let gens: Vec<Poly> = self
            .generators
            .iter()
            .map(|g| g.extend_front(1, order))
            .chain(std::iter::once(witness))
            .collect();
        Ok(GroebnerBasis::compute(n + 1, &gens, order).is_unit())
    }

    /// `√I = √J`, decided by radical membership of every generator both ways.
    pub fn same_radical(&self, other: &Ideal) -> Result<bool, IdealError> {
        self.check_arity(other)?;
        for g in &self.generators {
            if !other.radical_contains(g)? {
                return Ok(false);
            }
        }
        for g in &other.generators {
            if !self.radical_contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality of reduced grevlex bases.
    pub fn same_ideal(&self, other: &Ideal) -> Result<bool, IdealError> {
        self.check_arity(other)?;
        Ok(*self.basis() == *other.basis())
    }

    /// Krull dimension of `S/I` (affine cone dimension), or -1 for `I = (1)`.
    ///
    /// Computed as the largest set of variables containing the support of no
    /// leading monomial of the grevlex basis.
    pub fn krull_dimension(&self) -> i64 {
        let gb = self.basis();
        if gb.is_unit() {
            return -1;
        }
        let masks: Vec<u64> = gb
            .leading_monomials()
            .map(|m| m.support().fold(0u64, |acc, i| acc | (1 << i)))
            .collect();
        max_independent_set(self.arity, &masks) as i64
    }

    /// Projective dimension of the zero locus in `P^{arity-1}`; `None` when
    /// the locus is empty.
    pub fn projective_dimension(&self) -> Option<usize> {
        let d = self.krull_dimension();
        (d > 0).then(|| (d - 1) as usize)
    }

    /// Applies `x_i -> x_{perm[i]}` to every generator.
    pub fn permute_variables(&self, perm: &[usize]) -> Ideal {
        Ideal::new(
            self.arity,
            self.generators.iter().map(|g| g.permute_variables(perm)),
        )
        .expect("arity")
    }
}

fn max_independent_set(arity: usize, masks: &[u64]) -> usize {
    assert!(arity < 64, "too many variables for subset search");
    let full: u64 = (1u64 << arity) - 1;
    let mut best = 0;
    // A set is independent iff no leading monomial is supported inside it.
    for set in 0..=full {
        let size = set.count_ones() as usize;
        if size > best && masks.iter().all(|&m| m & !set != 0) {
            best = size;
        }
    }
    best
}

/// Intersection of a nonempty family of ideals; the empty family gives `(1)`.
pub fn intersect_all<I>(arity: usize, ideals: I) -> Result<Ideal, IdealError>
where
    I: IntoIterator<Item = Ideal>,
{
    let mut acc: Option<Ideal> = None;
    for ideal in ideals {
        acc = Some(match acc {
            None => ideal,
            Some(a) => a.intersection(&ideal)?,
        });
    }
    Ok(acc.unwrap_or_else(|| Ideal::unit(arity)))
}

/// Annihilator of the class of `(B_1, ..., B_m)` in `(S/I)^m`:
/// `{h : h*B_k ∈ I for all k}`. The zero class has annihilator `(1)`.
pub fn module_annihilator(components: &[Poly], ideal: &Ideal) -> Result<Ideal, IdealError> {
    let gb = ideal.basis();
    let mut live: Vec<Poly> = Vec::new();
    for b in components {
        let r = gb.normal_form(b);
        if !r.is_zero() {
            let r = r.monic();
            if !live.contains(&r) {
                live.push(r);
            }
        }
    }
    live.sort_by_key(|b| (b.total_degree(), b.num_terms()));
    let mut acc: Option<Ideal> = None;
    for b in &live {
        if let Some(a) = &acc {
            let annihilates = a
                .basis()
                .elements()
                .iter()
                .all(|h| gb.contains(&(h * b)));
            if annihilates {
                continue;
            }
        }
        let colon = ideal.quotient(b)?;
        acc = Some(match acc {
            None => colon,
            Some(a) => a.intersection(&colon)?,
        });
    }
    Ok(acc.unwrap_or_else(|| Ideal::unit(ideal.arity())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn id(gens: &[&str], n: usize) -> Ideal {
        Ideal::new(n, gens.iter().map(|s| parse_poly(s, n).unwrap())).unwrap()
    }

    fn p(s: &str, n: usize) -> Poly {
        parse_poly(s, n).unwrap()
    }

    fn same(a: &Ideal, b: &Ideal) -> bool {
        a.same_ideal(b).unwrap()
    }

    #[test]
    fn sums() {
        assert!(same(&id(&["x0"], 2).sum(&id(&["x1"], 2)).unwrap(), &id(&["x0", "x1"], 2)));
        let i = id(&["x0*x1", "x2"], 3);
        assert!(same(&i.sum(&Ideal::zero(3)).unwrap(), &i));
        assert!(matches!(
            i.sum(&Ideal::zero(2)),
            Err(IdealError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn intersections() {
        let r = id(&["x0"], 2).intersection(&id(&["x1"], 2)).unwrap();
        assert!(same(&r, &id(&["x0*x1"], 2)));
        let r = id(&["x0", "x1"], 3)
            .intersection(&id(&["x0", "x2"], 3))
            .unwrap()
            .intersection(&id(&["x1", "x2"], 3))
            .unwrap();
        assert!(same(&r, &id(&["x0*x1", "x0*x2", "x1*x2"], 3)));
        let i = id(&["x0^2 - x1*x2", "x1^3"], 3);
        assert!(same(&i.intersection(&i).unwrap(), &i));
    }

    #[test]
    fn quotients() {
        let i = id(&["x0*x1", "x0*x2", "x1*x2"], 3);
        assert!(same(&i.quotient(&p("x2", 3)).unwrap(), &id(&["x0", "x1"], 3)));
        assert!(same(&i.quotient(&Poly::one(3)).unwrap(), &i));
        assert!(same(&id(&["x0^2"], 2).quotient(&p("x0", 2)).unwrap(), &id(&["x0"], 2)));
        assert_eq!(i.quotient(&Poly::zero(3)).unwrap_err(), IdealError::ZeroDivisor);
    }

    #[test]
    fn saturations() {
        let r = id(&["x0*x1"], 2).saturation(&id(&["x0"], 2)).unwrap();
        assert!(same(&r, &id(&["x1"], 2)));
        let i = id(&["x0*x1", "x0*x2", "x1*x2"], 3);
        assert!(i.saturation(&i).unwrap().is_unit());
        assert!(same(&i.saturation(&Ideal::unit(3)).unwrap(), &i));
        // an embedded point: (x0^2, x0*x1) = (x0) ∩ (x0^2, x1)
        let j = id(&["x0^2", "x0*x1"], 3);
        assert!(same(&j.saturation(&id(&["x0", "x1"], 3)).unwrap(), &id(&["x0"], 3)));
    }

    #[test]
    fn radical_membership() {
        let i = id(&["x0^2"], 2);
        assert!(i.radical_contains(&p("x0", 2)).unwrap());
        assert!(!i.radical_contains(&p("x1", 2)).unwrap());
        let j = id(&["(x0+x1)^3*x2", "x2 - 1"], 3);
        assert!(j.radical_contains(&p("x0 + x1", 3)).unwrap());
        assert!(!j.radical_contains(&p("x0", 3)).unwrap());
    }

    #[test]
    fn dimensions() {
        assert_eq!(id(&["x0*x1", "x0*x2", "x1*x2"], 3).krull_dimension(), 1);
        assert_eq!(Ideal::zero(4).krull_dimension(), 4);
        assert_eq!(id(&["x0", "x1", "x2", "x3"], 4).krull_dimension(), 0);
        assert_eq!(Ideal::unit(4).krull_dimension(), -1);
        assert_eq!(id(&["x0", "x1", "x2", "x3"], 4).projective_dimension(), None);
        assert_eq!(id(&["x0*x1", "x0*x2", "x1*x2"], 3).projective_dimension(), Some(0));
    }

    #[test]
    fn equality() {
        assert!(same(&id(&["x0", "x1"], 2), &id(&["x1", "x0 + x1"], 2)));
        assert!(!same(&id(&["x0"], 2), &id(&["x0^2"], 2)));
        assert!(id(&["x0"], 2).same_radical(&id(&["x0^2"], 2)).unwrap());
    }

    #[test]
    fn annihilators() {
        let i = id(&["x0*x1", "x0*x2", "x1*x2"], 3);
        let b = [p("x2", 3), p("-4*x1", 3), p("-5*x0", 3)];
        assert!(same(&module_annihilator(&b, &i).unwrap(), &i));
        let inside = [p("x0*x1", 3), p("3*x1*x2", 3)];
        assert!(module_annihilator(&inside, &i).unwrap().is_unit());
        let r = module_annihilator(&[p("x0", 2)], &id(&["x0*x1"], 2)).unwrap();
        assert!(same(&r, &id(&["x1"], 2)));
    }
}
