//! The singular, Kupka, persistent and residual ideals of a logarithmic
//! foliation, and the checks relating them.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;
use std::time::Instant;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exterior::PForm;
use crate::foliation::{build_form, subset_label, ValidatedSpec, ValidationLevel};
use crate::groebner::{intersect_all, module_annihilator, Ideal};
use crate::poly::{default_names, Poly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemeError {
    #[error("the form is identically zero")]
    ZeroForm,
}

/// Ideal generated by the coefficients of `ω`.
pub fn singular_ideal(omega: &PForm) -> Result<Ideal, SchemeError> {
    if omega.is_zero() {
        return Err(SchemeError::ZeroForm);
    }
    let gens: Vec<Poly> = omega.coefficients().map(|(_, c)| c.clone()).collect();
    Ok(Ideal::new(omega.arity(), gens).expect("coefficients share the form's arity"))
}

/// `K = J + ann(dω mod J)`.
pub fn kupka_ideal(omega: &PForm, j: &Ideal) -> Ideal {
    let d_omega = omega.exterior_derivative();
    let components: Vec<Poly> = d_omega.coefficients().map(|(_, c)| c.clone()).collect();
    let ann = module_annihilator(&components, j).expect("same arity");
    j.sum(&ann).expect("same arity")
}

/// `Σ_{|I| = q} (F_Î)` for the given divisors.
pub fn persistent_sum_of(divisors: &[Poly], q: usize) -> Ideal {
    let arity = divisors[0].arity();
    let gens: Vec<Poly> = (0..divisors.len())
        .combinations(q)
        .map(|subset| {
            divisors
                .iter()
                .enumerate()
                .filter(|(i, _)| !subset.contains(i))
                .fold(Poly::one(arity), |acc, (_, f)| &acc * f)
        })
        .collect();
    Ideal::new(arity, gens).expect("same arity")
}

/// `∩_{|K| = q+1} (f_i : i ∈ K)` for the given divisors.
pub fn persistent_cap_of(divisors: &[Poly], q: usize) -> Ideal {
    let arity = divisors[0].arity();
    let subsets: Vec<Vec<usize>> = (0..divisors.len()).combinations(q + 1).collect();
    subsets
        .par_iter()
        .map(|subset| {
            Ideal::new(arity, subset.iter().map(|&i| divisors[i].clone())).expect("same arity")
        })
        .reduce_with(|a, b| a.intersection(&b).expect("same arity"))
        .unwrap_or_else(|| intersect_all(arity, std::iter::empty()).expect("empty family"))
}

pub fn persistent_sum(vs: &ValidatedSpec) -> Ideal {
    persistent_sum_of(vs.divisors(), vs.q())
}

pub fn persistent_cap(vs: &ValidatedSpec) -> Ideal {
    persistent_cap_of(vs.divisors(), vs.q())
}

/// `H = (J : K^∞)`.
pub fn residual_ideal(j: &Ideal, k: &Ideal) -> Ideal {
    j.saturation(k).expect("same arity")
}

/// All five ideals attached to a foliation.
#[derive(Clone, Debug)]
pub struct SchemeIdeals {
    pub j: Ideal,
    pub k: Ideal,
    pub p_sum: Ideal,
    pub p_cap: Ideal,
    pub h: Ideal,
}

impl SchemeIdeals {
    pub fn compute(vs: &ValidatedSpec) -> Result<SchemeIdeals, SchemeError> {
        let omega = build_form(vs);
        let j = singular_ideal(&omega)?;
        let k = kupka_ideal(&omega, &j);
        let h = residual_ideal(&j, &k);
        let (p_sum, p_cap) = rayon::join(|| persistent_sum(vs), || persistent_cap(vs));
        Ok(SchemeIdeals { j, k, p_sum, p_cap, h })
    }
}

/// Projective dimension, with `None` for the empty locus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dim(pub Option<usize>);

impl Dim {
    pub fn of(ideal: &Ideal) -> Dim {
        Dim(ideal.projective_dimension())
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Some(d) => write!(f, "{d}"),
            None => f.write_str("empty"),
        }
    }
}

impl Serialize for Dim {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            Some(d) => s.serialize_u64(d as u64),
            None => s.serialize_str("empty"),
        }
    }
}

impl<'de> Deserialize<'de> for Dim {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Dim, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(usize),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(n) => Ok(Dim(Some(n))),
            Raw::Text(t) if t == "empty" => Ok(Dim(None)),
            Raw::Text(t) => Err(serde::de::Error::custom(format!("bad dimension `{t}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Skipped => "skipped",
        })
    }
}

/// One named check with its outcome, the dimensions and generators it
/// computed, free-form notes, and nested sub-checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub name: String,
    pub status: CheckStatus,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub dimensions: BTreeMap<String, Dim>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub generators: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<CheckEntry>,
    pub elapsed_ms: u64,
}

impl CheckEntry {
    fn new(name: &str, status: CheckStatus) -> CheckEntry {
        CheckEntry {
            name: name.to_string(),
            status,
            dimensions: BTreeMap::new(),
            generators: BTreeMap::new(),
            notes: Vec::new(),
            parts: Vec::new(),
            elapsed_ms: 0,
        }
    }

    fn pass_if(name: &str, ok: bool) -> CheckEntry {
        CheckEntry::new(name, if ok { CheckStatus::Pass } else { CheckStatus::Fail })
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }

    /// Sets every `elapsed_ms` in the tree to zero.
    pub fn clear_timings(&mut self) {
        self.elapsed_ms = 0;
        self.parts.iter_mut().for_each(CheckEntry::clear_timings);
    }
}

/// Checks that can be requested for a spec.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Sing,
    Kupka,
    Persistent,
    Lemma,
    Decomposition,
    Identities,
}

impl CheckKind {
    pub const ALL: [CheckKind; 6] = [
        CheckKind::Sing,
        CheckKind::Kupka,
        CheckKind::Persistent,
        CheckKind::Lemma,
        CheckKind::Decomposition,
        CheckKind::Identities,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CheckKind::Sing => "sing",
            CheckKind::Kupka => "kupka",
            CheckKind::Persistent => "persistent",
            CheckKind::Lemma => "lemma",
            CheckKind::Decomposition => "decomposition",
            CheckKind::Identities => "identities",
        }
    }

    /// True for checks that test a statement rather than report a computation.
    pub fn is_theorem_check(&self) -> bool {
        matches!(self, CheckKind::Lemma | CheckKind::Decomposition | CheckKind::Identities)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckEntry>,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&CheckEntry> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// Run theorem checks even when their hypotheses are not met.
    pub waive_preconditions: bool,
    /// Names used when printing generators; defaults to `x0, x1, ...`.
    pub variable_names: Option<Vec<String>>,
}

/// Lazily computed ideals and form of one validated spec, shared between checks.
pub struct Analysis<'a> {
    vs: &'a ValidatedSpec,
    opts: VerifyOptions,
    omega: OnceLock<PForm>,
    j: OnceLock<Result<Ideal, SchemeError>>,
    k: OnceLock<Ideal>,
    h: OnceLock<Ideal>,
    p_sum: OnceLock<Ideal>,
    p_cap: OnceLock<Ideal>,
}

impl<'a> Analysis<'a> {
    pub fn new(vs: &'a ValidatedSpec, opts: VerifyOptions) -> Analysis<'a> {
        Analysis {
            vs,
            opts,
            omega: OnceLock::new(),
            j: OnceLock::new(),
            k: OnceLock::new(),
            h: OnceLock::new(),
            p_sum: OnceLock::new(),
            p_cap: OnceLock::new(),
        }
    }

    pub fn omega(&self) -> &PForm {
        self.omega.get_or_init(|| build_form(self.vs))
    }

    pub fn singular(&self) -> Result<&Ideal, SchemeError> {
        self.j
            .get_or_init(|| singular_ideal(self.omega()))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn kupka(&self) -> Result<&Ideal, SchemeError> {
        let j = self.singular()?;
        Ok(self.k.get_or_init(|| kupka_ideal(self.omega(), j)))
    }

    pub fn residual(&self) -> Result<&Ideal, SchemeError> {
        let j = self.singular()?;
        let k = self.kupka()?;
        Ok(self.h.get_or_init(|| residual_ideal(j, k)))
    }

    pub fn persistent_sum(&self) -> &Ideal {
        self.p_sum.get_or_init(|| persistent_sum(self.vs))
    }

    pub fn persistent_cap(&self) -> &Ideal {
        self.p_cap.get_or_init(|| persistent_cap(self.vs))
    }

    fn names(&self) -> Vec<String> {
        self.opts
            .variable_names
            .clone()
            .unwrap_or_else(|| default_names(self.vs.arity()))
    }

    fn describe(&self, entry: &mut CheckEntry, label: &str, ideal: &Ideal) {
        let names = self.names();
        let gens = ideal
            .basis()
            .elements()
            .iter()
            .map(|g| g.display_with(&names).to_string())
            .collect();
        entry.generators.insert(label.to_string(), gens);
        entry.dimensions.insert(label.to_string(), Dim::of(ideal));
    }

    /// Problems with the hypotheses of the theorem checks, beyond the
    /// per-check ones: failures waived during validation.
    fn waived_problems(&self) -> Vec<String> {
        self.vs
            .waived_failures()
            .iter()
            .map(|f| f.to_string())
            .collect()
    }

    /// Marks a theorem check according to its unmet hypotheses: skipped when
    /// not waived, otherwise flagged on failure.
    fn apply_preconditions(&self, mut entry: CheckEntry, problems: &[String], compute: impl FnOnce() -> CheckEntry) -> CheckEntry {
        if problems.is_empty() {
            return compute();
        }
        if !self.opts.waive_preconditions {
            entry.status = CheckStatus::Skipped;
            entry
                .notes
                .extend(problems.iter().map(|p| format!("precondition not met: {p}")));
            return entry;
        }
        let mut result = compute();
        let prefix = if result.status == CheckStatus::Fail {
            "precondition violated"
        } else {
            "precondition waived"
        };
        result
            .notes
            .extend(problems.iter().map(|p| format!("{prefix}: {p}")));
        result
    }

    fn zero_form_entry(name: &str, err: SchemeError) -> CheckEntry {
        let mut e = CheckEntry::new(name, CheckStatus::Fail);
        e.notes.push(err.to_string());
        e
    }

    pub fn sing_entry(&self) -> CheckEntry {
        match self.singular() {
            Ok(j) => {
                let mut e = CheckEntry::new("sing", CheckStatus::Pass);
                self.describe(&mut e, "J", j);
                e
            }
            Err(err) => Self::zero_form_entry("sing", err),
        }
    }

    pub fn kupka_entry(&self) -> CheckEntry {
        match self.kupka() {
            Ok(k) => {
                let mut e = CheckEntry::new("kupka", CheckStatus::Pass);
                self.describe(&mut e, "K", k);
                e
            }
            Err(err) => Self::zero_form_entry("kupka", err),
        }
    }

    pub fn persistent_entry(&self) -> CheckEntry {
        let (sum, cap) = (self.persistent_sum(), self.persistent_cap());
        let mut e = CheckEntry::new("persistent", CheckStatus::Pass);
        self.describe(&mut e, "P_sum", sum);
        self.describe(&mut e, "P_cap", cap);
        let equal = sum.same_ideal(cap).expect("same arity");
        e.notes.push(format!("P_sum = P_cap: {equal}"));
        e
    }

    /// Heights of the `(s - q)`-subsets that differ from `s - q`.
    fn lemma_height_problems(&self) -> Vec<String> {
        let (n, q) = (self.vs.n(), self.vs.q());
        let divisors = self.vs.divisors();
        let size = divisors.len() - q;
        let subsets: Vec<Vec<usize>> = (0..divisors.len()).combinations(size).collect();
        subsets
            .par_iter()
            .filter_map(|subset| {
                let ideal = Ideal::new(n + 1, subset.iter().map(|&i| divisors[i].clone())).expect("arity");
                let height = (n as i64 + 1) - ideal.krull_dimension();
                (height != size as i64).then(|| {
                    format!("ht(f_{{{}}}) = {} != {}", subset_label(subset), height, size)
                })
            })
            .collect()
    }

    pub fn lemma_entry(&self) -> CheckEntry {
        let mut problems = self.lemma_height_problems();
        problems.extend(self.waived_problems());
        self.apply_preconditions(CheckEntry::new("lemma", CheckStatus::Skipped), &problems, || {
            let (sum, cap) = (self.persistent_sum(), self.persistent_cap());
            let equal = sum.same_ideal(cap).expect("same arity");
            let mut e = CheckEntry::pass_if("lemma", equal);
            self.describe(&mut e, "P_sum", sum);
            self.describe(&mut e, "P_cap", cap);
            e
        })
    }

    pub fn decomposition_entry(&self) -> CheckEntry {
        let mut problems = Vec::new();
        if self.vs.certificate().level < ValidationLevel::Generic {
            problems.push(format!(
                "spec validated only at level {}",
                self.vs.certificate().level
            ));
        }
        problems.extend(self.waived_problems());
        self.apply_preconditions(
            CheckEntry::new("decomposition", CheckStatus::Skipped),
            &problems,
            || match self.decomposition_parts() {
                Ok(parts) => {
                    let ok = parts.iter().all(CheckEntry::passed);
                    let mut e = CheckEntry::pass_if("decomposition", ok);
                    e.parts = parts;
                    e
                }
                Err(err) => Self::zero_form_entry("decomposition", err),
            },
        )
    }

    fn decomposition_parts(&self) -> Result<Vec<CheckEntry>, SchemeError> {
        let (n, q) = (self.vs.n(), self.vs.q());
        let j = self.singular()?;
        let k = self.kupka()?;
        let h = self.residual()?;
        let cap = self.persistent_cap();
        let mut parts = Vec::new();

        let timed = |f: &dyn Fn() -> CheckEntry| {
            let start = Instant::now();
            let mut e = f();
            e.elapsed_ms = start.elapsed().as_millis() as u64;
            e
        };

        parts.push(timed(&|| {
            let dim = Dim::of(k);
            let mut e = CheckEntry::pass_if("codim", dim.0.is_some() && dim.0 == (n - 1).checked_sub(q));
            self.describe(&mut e, "K", k);
            e.notes.push(format!("expected projective codimension {}", q + 1));
            e
        }));
        parts.push(timed(&|| {
            let dim = Dim::of(h);
            let ok = match dim.0 {
                None => true,
                Some(d) => d + 1 <= q,
            };
            let mut e = CheckEntry::pass_if("residual", ok);
            self.describe(&mut e, "H", h);
            e
        }));
        parts.push(timed(&|| {
            let radical = k.same_radical(cap).expect("same arity");
            let mut e = CheckEntry::pass_if("kupka-formula", radical);
            self.describe(&mut e, "P_cap", cap);
            let strict = k.same_ideal(cap).expect("same arity");
            e.notes.push(format!("K = P_cap as ideals: {strict}"));
            e
        }));
        parts.push(timed(&|| {
            let sum = k.sum(h).expect("same arity");
            let mut e = CheckEntry::pass_if("disjoint", Dim::of(&sum).0.is_none());
            e.dimensions.insert("K+H".to_string(), Dim::of(&sum));
            e
        }));
        parts.push(timed(&|| {
            let cap_kh = k.intersection(h).expect("same arity");
            let ok = j.same_radical(&cap_kh).expect("same arity");
            let mut e = CheckEntry::pass_if("radical-sanity", ok);
            self.describe(&mut e, "J", j);
            e
        }));
        Ok(parts)
    }

    pub fn identities_entry(&self) -> CheckEntry {
        let omega = self.omega();
        let radial = omega.radial_contraction().is_zero();
        let frobenius = omega.frobenius_check();
        let plucker = omega.plucker_check();
        let n = self.vs.n();
        let proper = self
            .singular()
            .map(|j| Dim::of(j).0.map_or(true, |d| d < n))
            .unwrap_or(false);
        let mut e = CheckEntry::pass_if("identities", radial && frobenius && plucker && proper);
        e.notes.push(format!("radial contraction vanishes: {radial}"));
        e.notes.push(format!("integrability: {frobenius}"));
        e.notes.push(format!("Plücker relations: {plucker}"));
        e.notes.push(format!("singular locus has positive codimension: {proper}"));
        e
    }

    pub fn entry(&self, kind: CheckKind) -> CheckEntry {
        let start = Instant::now();
        let mut e = match kind {
            CheckKind::Sing => self.sing_entry(),
            CheckKind::Kupka => self.kupka_entry(),
            CheckKind::Persistent => self.persistent_entry(),
            CheckKind::Lemma => self.lemma_entry(),
            CheckKind::Decomposition => self.decomposition_entry(),
            CheckKind::Identities => self.identities_entry(),
        };
        e.elapsed_ms = start.elapsed().as_millis() as u64;
        e
    }
}

/// Runs the requested checks (each at most once, in the order given).
pub fn run_checks(vs: &ValidatedSpec, checks: &[CheckKind], opts: VerifyOptions) -> VerificationReport {
    let analysis = Analysis::new(vs, opts);
    let checks: Vec<CheckKind> = checks.iter().copied().unique().collect();
    VerificationReport {
        checks: checks.iter().map(|&kind| analysis.entry(kind)).collect(),
    }
}

pub fn verify_lemma(vs: &ValidatedSpec, opts: VerifyOptions) -> CheckEntry {
    Analysis::new(vs, opts).entry(CheckKind::Lemma)
}

pub fn verify_decomposition(vs: &ValidatedSpec, opts: VerifyOptions) -> CheckEntry {
    Analysis::new(vs, opts).entry(CheckKind::Decomposition)
}
