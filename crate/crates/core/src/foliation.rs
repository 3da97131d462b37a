//! Logarithmic foliations on projective space: validation of the divisor and
//! residue data, and construction of the polynomial q-form
//! `ω = Σ_I λ_I F_Î df_I` with `F_Î = Π_{j ∉ I} f_j`.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exterior::PForm;
use crate::groebner::Ideal;
use crate::poly::{format_rational, Poly, Rational};

/// 0-based index set of divisors, strictly increasing.
pub type Subset = Vec<usize>;

/// Residue data of a logarithmic form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Residues {
    /// `q × s` matrix Λ; row k gives `η_k = Σ_i Λ_{k,i} df_i/f_i` and
    /// `λ_I` is the minor on the columns `I`.
    Matrix(Vec<Vec<Rational>>),
    /// Raw `λ_I` per q-subset; absent subsets are zero.
    Scalars(BTreeMap<Subset, Rational>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoliationSpec {
    /// Dimension of the ambient projective space; polynomials have `n + 1` variables.
    pub n: usize,
    /// Codimension of the foliation.
    pub q: usize,
    pub divisors: Vec<Poly>,
    pub residues: Residues,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValidationLevel {
    /// Homogeneity and projective descent.
    #[default]
    Basic,
    /// Basic plus nonzero pairwise distinct residues, nonvanishing alternating
    /// residue sums and smooth divisors.
    Generic,
    /// Generic plus transversality of the divisors.
    FullSnc,
}

impl ValidationLevel {
    pub fn as_str(&self) -> &'static str {
        match self {
            ValidationLevel::Basic => "basic",
            ValidationLevel::Generic => "generic",
            ValidationLevel::FullSnc => "full-snc",
        }
    }
}

impl fmt::Display for ValidationLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ValidationLevel {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "basic" => Ok(ValidationLevel::Basic),
            "generic" => Ok(ValidationLevel::Generic),
            "full-snc" => Ok(ValidationLevel::FullSnc),
            other => Err(format!("unknown validation level `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ValidationOptions {
    pub level: ValidationLevel,
    /// Check transversality for every subset size up to `min(s, n + 1)`
    /// instead of `min(s, q + 2)`.
    pub exhaustive_snc: bool,
    /// Record failed checks instead of rejecting the spec.
    pub waive: bool,
}

impl ValidationOptions {
    pub fn at(level: ValidationLevel) -> Self {
        ValidationOptions {
            level,
            ..Default::default()
        }
    }
}

/// Structural problems that make a spec meaningless (as opposed to failed
/// validation checks).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("codimension q = {q} must satisfy 1 <= q <= n - 1 = {}", .n.saturating_sub(1))]
    BadCodimension { n: usize, q: usize },
    #[error("need more divisors than the codimension (s = {s}, q = {q})")]
    TooFewDivisors { s: usize, q: usize },
    #[error("divisor {index} has {arity} variables, expected {expected}")]
    DivisorArity {
        index: usize,
        arity: usize,
        expected: usize,
    },
    #[error("divisor {0} is zero")]
    ZeroDivisor(usize),
    #[error("residue matrix must be {q} x {s}")]
    MatrixShape { q: usize, s: usize },
    #[error("residue subset {subset:?} is not a strictly increasing {q}-subset of 1..={s}")]
    BadSubset { subset: Subset, q: usize, s: usize },
}

/// A failed validation check, naming the offending divisor, row or subset
/// (all 1-based in messages).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationFailure {
    NotHomogeneous { divisor: usize },
    ConstantDivisor { divisor: usize },
    DescentViolated { row: usize },
    RawDescentViolated,
    NotDecomposable,
    NotIntegrable,
    ZeroResidue { subset: Subset },
    DuplicateResidue { first: Subset, second: Subset },
    SingularDivisor { divisor: usize },
    VanishingAlternatingSum { subset: Subset },
    NotTransversal { subset: Subset, codim: usize },
}

pub(crate) fn subset_label(s: &[usize]) -> String {
    s.iter().map(|i| (i + 1).to_string()).join(",")
}

impl fmt::Display for ValidationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ValidationFailure::*;
        match self {
            NotHomogeneous { divisor } => write!(f, "divisor {} is not homogeneous", divisor + 1),
            ConstantDivisor { divisor } => write!(f, "divisor {} is constant", divisor + 1),
            DescentViolated { row } => write!(
                f,
                "residue row {} violates sum_i L[k,i]*d_i = 0 (form does not descend)",
                row + 1
            ),
            RawDescentViolated => write!(f, "radial contraction of the form is nonzero (form does not descend)"),
            NotDecomposable => write!(f, "Plücker relations fail (form not locally decomposable)"),
            NotIntegrable => write!(f, "integrability condition fails"),
            ZeroResidue { subset } => write!(f, "residue at {{{}}} is zero", subset_label(subset)),
            DuplicateResidue { first, second } => write!(
                f,
                "λ not pairwise distinct: {{{}}} and {{{}}} collide",
                subset_label(first),
                subset_label(second)
            ),
            SingularDivisor { divisor } => write!(f, "divisor {} is singular", divisor + 1),
            VanishingAlternatingSum { subset } => write!(
                f,
                "alternating residue sum vanishes at {{{}}} (dω vanishes on that intersection)",
                subset_label(subset)
            ),
            NotTransversal { subset, codim } => write!(
                f,
                "snc at {{{}}}: codimension {} != {}",
                subset_label(subset),
                codim,
                subset.len()
            ),
        }
    }
}

/// One validation check and its outcome.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub level: ValidationLevel,
    pub checks: Vec<CheckRecord>,
}

impl Certificate {
    fn record(&mut self, name: &str, failures: &[ValidationFailure], ok_detail: &str) {
        let detail = if failures.is_empty() {
            ok_detail.to_string()
        } else {
            failures.iter().map(|f| f.to_string()).join("; ")
        };
        self.checks.push(CheckRecord {
            name: name.to_string(),
            passed: failures.is_empty(),
            detail,
        });
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValidationError {
    #[error(transparent)]
    Malformed(#[from] SpecError),
    #[error("validation failed: {}", .failures.iter().map(|f| f.to_string()).join("; "))]
    Failed {
        failures: Vec<ValidationFailure>,
        certificate: Certificate,
    },
}

/// A spec that passed validation (or whose failures were waived), with the
/// derived residue table and products.
#[derive(Clone, Debug)]
pub struct ValidatedSpec {
    spec: FoliationSpec,
    degrees: Vec<u32>,
    lambdas: BTreeMap<Subset, Rational>,
    certificate: Certificate,
    waived: Vec<ValidationFailure>,
}

impl ValidatedSpec {
    pub fn spec(&self) -> &FoliationSpec {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.spec.n
    }

    pub fn q(&self) -> usize {
        self.spec.q
    }

    pub fn arity(&self) -> usize {
        self.spec.n + 1
    }

    pub fn divisors(&self) -> &[Poly] {
        &self.spec.divisors
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn certificate(&self) -> &Certificate {
        &self.certificate
    }

    /// Failed checks that were waived; empty for a fully valid spec.
    pub fn waived_failures(&self) -> &[ValidationFailure] {
        &self.waived
    }

    pub fn is_matrix_mode(&self) -> bool {
        matches!(self.spec.residues, Residues::Matrix(_))
    }

    /// `F = Π f_i`.
    pub fn product(&self) -> Poly {
        product_except(&self.spec.divisors, &[])
    }

    /// `F_Î = Π_{j ∉ I} f_j`.
    pub fn complement_product(&self, subset: &[usize]) -> Poly {
        product_except(&self.spec.divisors, subset)
    }
}

fn product_except(divisors: &[Poly], skip: &[usize]) -> Poly {
    let arity = divisors.first().map(Poly::arity).unwrap_or(0);
    divisors
        .iter()
        .enumerate()
        .filter(|(i, _)| !skip.contains(i))
        .fold(Poly::one(arity), |acc, (_, f)| &acc * f)
}

fn determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &p;
            for c in col..n {
                let delta = &factor * &m[col][c];
                m[r][c] -= delta;
            }
        }
    }
    det
}

/// `λ_I` for every q-subset `I`: the minors of Λ in matrix mode, the given
/// scalars (zero when absent) in raw mode.
fn lambda_table(q: usize, s: usize, residues: &Residues) -> BTreeMap<Subset, Rational> {
    (0..s)
        .combinations(q)
        .map(|subset| {
            let value = match residues {
                Residues::Matrix(rows) => determinant(
                    rows.iter()
                        .map(|row| subset.iter().map(|&i| row[i].clone()).collect())
                        .collect(),
                ),
                Residues::Scalars(map) => map.get(&subset).cloned().unwrap_or_else(Rational::zero),
            };
            (subset, value)
        })
        .collect()
}

/// `Σ_m (-1)^m λ_{K \ k_m}` for `K = {k_0 < ... < k_q}`: up to a unit, the
/// coefficient of `df_K` in `dω` at a general point of `∩_{i ∈ K} D_i`.
pub fn alternating_sum(lambdas: &BTreeMap<Subset, Rational>, subset: &[usize]) -> Rational {
    (0..subset.len())
        .map(|m| {
            let face: Subset = subset.iter().enumerate().filter(|&(i, _)| i != m).map(|(_, &k)| k).collect();
            let value = lambdas.get(&face).cloned().unwrap_or_else(Rational::zero);
            if m % 2 == 0 {
                value
            } else {
                -value
            }
        })
        .sum()
}

fn check_structure(spec: &FoliationSpec) -> Result<(), SpecError> {
    let (n, q, s) = (spec.n, spec.q, spec.divisors.len());
    if q < 1 || q + 1 > n {
        return Err(SpecError::BadCodimension { n, q });
    }
    if s <= q {
        return Err(SpecError::TooFewDivisors { s, q });
    }
    for (index, f) in spec.divisors.iter().enumerate() {
        if f.arity() != n + 1 {
            return Err(SpecError::DivisorArity {
                index,
                arity: f.arity(),
                expected: n + 1,
            });
        }
        if f.is_zero() {
            return Err(SpecError::ZeroDivisor(index));
        }
    }
    match &spec.residues {
        Residues::Matrix(rows) => {
            if rows.len() != q || rows.iter().any(|r| r.len() != s) {
                return Err(SpecError::MatrixShape { q, s });
            }
        }
        Residues::Scalars(map) => {
            for subset in map.keys() {
                let ok = subset.len() == q
                    && subset.windows(2).all(|w| w[0] < w[1])
                    && subset.iter().all(|&i| i < s);
                if !ok {
                    return Err(SpecError::BadSubset {
                        subset: subset.clone(),
                        q,
                        s,
                    });
                }
            }
        }
    }
    Ok(())
}

fn assemble_form(spec: &FoliationSpec, lambdas: &BTreeMap<Subset, Rational>) -> PForm {
    let arity = spec.n + 1;
    let differentials: Vec<PForm> = spec.divisors.iter().map(PForm::differential).collect();
    let mut omega = PForm::zero(arity, spec.q);
    for (subset, lambda) in lambdas {
        if lambda.is_zero() {
            continue;
        }
        let df = subset
            .iter()
            .skip(1)
            .fold(differentials[subset[0]].clone(), |acc, &i| {
                acc.wedge(&differentials[i]).expect("same arity")
            });
        let coefficient = product_except(&spec.divisors, subset).scale(lambda);
        let term = df.mul_function(&coefficient).expect("same arity");
        omega = omega.add(&term).expect("same shape");
    }
    omega
}

/// Projective codimension of `V(f_i : i ∈ subset)` in `P^n`, or `None` when empty.
fn locus_codim(n: usize, polys: Vec<Poly>) -> Option<usize> {
    let ideal = Ideal::new(n + 1, polys).expect("arity");
    ideal.projective_dimension().map(|d| n - d)
}

fn is_smooth_hypersurface(n: usize, f: &Poly) -> bool {
    if f.total_degree() == Some(1) {
        return true;
    }
    let mut gens = vec![f.clone()];
    gens.extend((0..=n).map(|i| f.partial_derivative(i).expect("index")));
    locus_codim(n, gens).is_none()
}

/// Validates `spec` at the requested level. With `opts.waive`, failed checks
/// are recorded on the result instead of rejecting it; structural errors are
/// never waived.
pub fn validate_spec(
    spec: &FoliationSpec,
    opts: ValidationOptions,
) -> Result<ValidatedSpec, ValidationError> {
    check_structure(spec)?;
    let (n, q, s) = (spec.n, spec.q, spec.divisors.len());
    let mut certificate = Certificate {
        level: opts.level,
        checks: Vec::new(),
    };
    let mut failures: Vec<ValidationFailure> = Vec::new();

    // basic: homogeneity and descent
    let mut homog = Vec::new();
    let mut degrees = Vec::with_capacity(s);
    for (i, f) in spec.divisors.iter().enumerate() {
        match f.homogeneous_degree() {
            Ok(0) => homog.push(ValidationFailure::ConstantDivisor { divisor: i }),
            Ok(d) => {
                degrees.push(d);
                continue;
            }
            Err(_) => homog.push(ValidationFailure::NotHomogeneous { divisor: i }),
        }
        degrees.push(f.total_degree().unwrap_or(0));
    }
    certificate.record("homogeneous", &homog, "every divisor is homogeneous of positive degree");
    failures.extend(homog);
    certificate.record("ample", &[], "positive-degree hypersurfaces in projective space are ample");

    let lambdas = lambda_table(q, s, &spec.residues);
    let mut descent = Vec::new();
    let mut gates = Vec::new();
    match &spec.residues {
        Residues::Matrix(rows) => {
            for (k, row) in rows.iter().enumerate() {
                let total: Rational = row
                    .iter()
                    .zip(&degrees)
                    .map(|(l, &d)| l * Rational::from_integer(d.into()))
                    .sum();
                if !total.is_zero() {
                    descent.push(ValidationFailure::DescentViolated { row: k });
                }
            }
        }
        Residues::Scalars(_) => {
            let omega = assemble_form(spec, &lambdas);
            if !omega.radial_contraction().is_zero() {
                descent.push(ValidationFailure::RawDescentViolated);
            }
            if !omega.plucker_check() {
                gates.push(ValidationFailure::NotDecomposable);
            }
            if !omega.frobenius_check() {
                gates.push(ValidationFailure::NotIntegrable);
            }
        }
    }
    certificate.record("descent", &descent, "radial contraction vanishes");
    failures.extend(descent);
    if !matches!(spec.residues, Residues::Matrix(_)) {
        certificate.record("decomposable-integrable", &gates, "Plücker and integrability relations hold");
        failures.extend(gates);
    }

    if opts.level >= ValidationLevel::Generic {
        let mut residue_failures = Vec::new();
        for (subset, value) in &lambdas {
            if value.is_zero() {
                residue_failures.push(ValidationFailure::ZeroResidue {
                    subset: subset.clone(),
                });
            }
        }
        let entries: Vec<(&Subset, &Rational)> = lambdas.iter().collect();
        for (a, b) in entries.iter().tuple_combinations() {
            if a.1 == b.1 {
                residue_failures.push(ValidationFailure::DuplicateResidue {
                    first: a.0.clone(),
                    second: b.0.clone(),
                });
            }
        }
        certificate.record("residues", &residue_failures, "residues nonzero and pairwise distinct");
        failures.extend(residue_failures);

        let kupka_failures: Vec<ValidationFailure> = (0..s)
            .combinations(q + 1)
            .filter(|_| q >= 2)
            .filter(|subset| alternating_sum(&lambdas, subset).is_zero())
            .map(|subset| ValidationFailure::VanishingAlternatingSum { subset })
            .collect();
        certificate.record(
            "kupka-residues",
            &kupka_failures,
            "alternating residue sums over (q+1)-subsets are nonzero",
        );
        failures.extend(kupka_failures);

        let smooth: Vec<ValidationFailure> = spec
            .divisors
            .par_iter()
            .enumerate()
            .filter(|(_, f)| f.is_homogeneous() && !is_smooth_hypersurface(n, f))
            .map(|(i, _)| ValidationFailure::SingularDivisor { divisor: i })
            .collect();
        certificate.record("smooth", &smooth, "every divisor is smooth");
        failures.extend(smooth);
    }

    if opts.level >= ValidationLevel::FullSnc {
        let max = if opts.exhaustive_snc { s.min(n + 1) } else { s.min(q + 2) };
        let subsets: Vec<Subset> = (2..=max).flat_map(|k| (0..s).combinations(k)).collect();
        let transversal: Vec<ValidationFailure> = subsets
            .par_iter()
            .filter_map(|subset| {
                let polys = subset.iter().map(|&i| spec.divisors[i].clone()).collect();
                match locus_codim(n, polys) {
                    Some(codim) if codim != subset.len() => Some(ValidationFailure::NotTransversal {
                        subset: subset.clone(),
                        codim,
                    }),
                    _ => None,
                }
            })
            .collect();
        certificate.record(
            "transversal",
            &transversal,
            &format!("every intersection of at most {max} divisors has the expected codimension"),
        );
        failures.extend(transversal);
    }

    if !failures.is_empty() && !opts.waive {
        return Err(ValidationError::Failed {
            failures,
            certificate,
        });
    }
    Ok(ValidatedSpec {
        spec: spec.clone(),
        degrees,
        lambdas,
        certificate,
        waived: failures,
    })
}

/// `ω = Σ_{|I| = q} λ_I F_Î df_I`.
pub fn build_form(vs: &ValidatedSpec) -> PForm {
    assemble_form(&vs.spec, &vs.lambdas)
}

/// The residue table `I ↦ λ_I` (0-based subsets).
pub fn residues(vs: &ValidatedSpec) -> &BTreeMap<Subset, Rational> {
    &vs.lambdas
}

/// Residues of the foliation induced on the divisor `D_i`: the `λ_I` with `i ∈ I`.
pub fn residues_along(vs: &ValidatedSpec, divisor: usize) -> BTreeMap<Subset, Rational> {
    vs.lambdas
        .iter()
        .filter(|(subset, _)| subset.contains(&divisor))
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect()
}

/// Human-readable residue table with 1-based subsets.
pub fn format_residues(table: &BTreeMap<Subset, Rational>) -> String {
    table
        .iter()
        .map(|(k, v)| format!("{{{}}}: {}", subset_label(k), format_rational(v)))
        .join(", ")
}
