//! JSON spec and report files.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::foliation::{CheckRecord, FoliationSpec, Residues, ValidationLevel};
use crate::poly::{default_names, format_rational, parse_poly_with, parse_rational, Rational};
use crate::schemes::{CheckEntry, CheckKind};

use super::CliError;

/// A rational number written either as a JSON integer or as a string such
/// as `"-3/4"`. Always written back as a string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalValue(pub Rational);

impl Serialize for RationalValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for RationalValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        let text = match Raw::deserialize(d)? {
            Raw::Int(i) => return Ok(RationalValue(Rational::from_integer(i.into()))),
            Raw::Text(t) => t,
        };
        parse_rational(&text)
            .map(RationalValue)
            .map_err(|e| serde::de::Error::custom(format!("bad rational `{text}`: {e}")))
    }
}

fn default_checks() -> Vec<CheckKind> {
    CheckKind::ALL.to_vec()
}

/// Input file describing one logarithmic foliation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub n: usize,
    pub q: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variables: Option<Vec<String>>,
    pub divisors: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residue_matrix: Option<Vec<Vec<RationalValue>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambdas: Option<BTreeMap<String, RationalValue>>,
    #[serde(default)]
    pub validation_level: ValidationLevel,
    #[serde(default = "default_checks")]
    pub checks: Vec<CheckKind>,
}

impl SpecFile {
    pub fn from_json(text: &str) -> Result<SpecFile, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("spec: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes") + "\n"
    }

    pub fn variable_names(&self) -> Vec<String> {
        self.variables
            .clone()
            .unwrap_or_else(|| default_names(self.n + 1))
    }

    /// Parses the polynomials and residues into a [`FoliationSpec`].
    pub fn to_spec(&self) -> Result<FoliationSpec, CliError> {
        let names = self.variable_names();
        if names.len() != self.n + 1 {
            return Err(CliError::Parse(format!(
                "expected {} variable names, got {}",
                self.n + 1,
                names.len()
            )));
        }
        let divisors = self
            .divisors
            .iter()
            .enumerate()
            .map(|(i, text)| {
                parse_poly_with(text, &names)
                    .map_err(|e| CliError::Parse(format!("divisor {}: `{text}`: {e}", i + 1)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let residues = match (&self.residue_matrix, &self.lambdas) {
            (Some(rows), None) => Residues::Matrix(
                rows.iter()
                    .map(|row| row.iter().map(|v| v.0.clone()).collect())
                    .collect(),
            ),
            (None, Some(map)) => {
                let mut table = BTreeMap::new();
                for (key, value) in map {
                    table.insert(parse_subset(key)?, value.0.clone());
                }
                Residues::Scalars(table)
            }
            _ => {
                return Err(CliError::Parse(
                    "exactly one of `residue_matrix` and `lambdas` must be given".into(),
                ))
            }
        };
        Ok(FoliationSpec {
            n: self.n,
            q: self.q,
            divisors,
            residues,
        })
    }
}

/// Parses `"1,3"` into the 0-based subset `[0, 2]`.
fn parse_subset(key: &str) -> Result<Vec<usize>, CliError> {
    key.split(',')
        .map(|part| match part.trim().parse::<usize>() {
            Ok(i) if i >= 1 => Ok(i - 1),
            _ => Err(CliError::Parse(format!("bad subset `{key}`: indices start at 1"))),
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Ok,
    Invalid,
    Failed,
}

impl Verdict {
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Ok => 0,
            Verdict::Invalid => 2,
            Verdict::Failed => 3,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Ok => "ok",
            Verdict::Invalid => "invalid",
            Verdict::Failed => "failed",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationSection {
    pub level: ValidationLevel,
    pub passed: bool,
    pub checks: Vec<CheckRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub waived: Vec<String>,
    /// `λ_I` keyed by 1-based subsets such as `"1,2"`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub residues: BTreeMap<String, RationalValue>,
}

/// Output of `check`, `compute` and `verify`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportFile {
    pub engine: String,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub spec: SpecFile,
    pub validation: ValidationSection,
    pub checks: Vec<CheckEntry>,
    pub verdict: Verdict,
}

impl ReportFile {
    pub fn from_json(text: &str) -> Result<ReportFile, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("report: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// Copy with every timing field zeroed, for comparing runs.
    pub fn without_timings(&self) -> ReportFile {
        let mut r = self.clone();
        r.checks.iter_mut().for_each(CheckEntry::clear_timings);
        r
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        let s = &self.spec;
        out += &format!("{} {}\n", self.engine, self.command);
        out += &format!(
            "spec: n={} q={} s={} level={}\n",
            s.n,
            s.q,
            s.divisors.len(),
            self.validation.level
        );
        for (i, d) in s.divisors.iter().enumerate() {
            out += &format!("  f{} = {}\n", i + 1, d);
        }
        if let Some(seed) = self.seed {
            out += &format!("seed: {seed}\n");
        }
        let status = if self.validation.passed { "passed" } else { "failed" };
        out += &format!("validation: {status}\n");
        for c in &self.validation.checks {
            out += &format!("  [{}] {}: {}\n", if c.passed { "ok" } else { "!!" }, c.name, c.detail);
        }
        for w in &self.validation.waived {
            out += &format!("  waived: {w}\n");
        }
        if !self.validation.residues.is_empty() {
            let table: Vec<String> = self
                .validation
                .residues
                .iter()
                .map(|(k, v)| format!("{{{k}}}: {}", format_rational(&v.0)))
                .collect();
            out += &format!("residues: {}\n", table.join(", "));
        }
        for c in &self.checks {
            write_entry(&mut out, c, 0);
        }
        out += &format!("verdict: {}\n", self.verdict);
        out
    }
}

fn write_entry(out: &mut String, e: &CheckEntry, depth: usize) {
    let pad = "  ".repeat(depth);
    *out += &format!("{pad}[{}] {} ({} ms)\n", e.status, e.name, e.elapsed_ms);
    for (label, dim) in &e.dimensions {
        *out += &format!("{pad}    dim {label} = {dim}\n");
    }
    for (label, gens) in &e.generators {
        *out += &format!("{pad}    {label} = ({})\n", gens.join(", "));
    }
    for note in &e.notes {
        *out += &format!("{pad}    {note}\n");
    }
    for part in &e.parts {
        write_entry(out, part, depth + 1);
    }
}
