//! Measurement scenarios, empirical models and global distributions.
//!
//! Joint outcomes are indexed lexicographically with the first measurement of a
//! context as the most significant digit. The same convention is used for
//! global assignments over the full measurement list, for every row of an
//! [`EmpiricalModel`] and for the JSON file formats.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used when checking that a probability row sums to one.
pub const PROB_TOL: f64 = 1e-9;

/// Largest number of global assignments we are willing to enumerate.
pub const MAX_GLOBAL_ASSIGNMENTS: usize = 1 << 20;

/// A measurement scenario `(X, M, O)`.
///
/// Contexts are kept as ordered lists of measurement indices; two scenarios
/// are equal only if their measurements and contexts appear in the same order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementScenario {
    measurements: Vec<String>,
    contexts: Vec<Vec<usize>>,
    outcome_arity: usize,
}

impl MeasurementScenario {
    pub fn new<M, C, S>(measurements: M, contexts: C, outcome_arity: usize) -> Result<Self>
    where
        M: IntoIterator,
        M::Item: Into<String>,
        C: IntoIterator,
        C::Item: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let measurements: Vec<String> = measurements.into_iter().map(Into::into).collect();
        if outcome_arity < 2 {
            return Err(Error::InvalidScenario(format!(
                "outcome arity must be at least 2, got {outcome_arity}"
            )));
        }
        let mut seen = HashSet::new();
        for m in &measurements {
            if !seen.insert(m.as_str()) {
                return Err(Error::InvalidScenario(format!(
                    "duplicate measurement label {m:?}"
                )));
            }
        }

        let mut resolved = Vec::new();
        for (ci, ctx) in contexts.into_iter().enumerate() {
            let mut indices = Vec::new();
            for label in ctx {
                let label = label.as_ref();
                let idx = measurements
                    .iter()
                    .position(|m| m == label)
                    .ok_or_else(|| {
                        Error::InvalidScenario(format!(
                            "context {ci} refers to unknown measurement {label:?}"
                        ))
                    })?;
                if indices.contains(&idx) {
                    return Err(Error::InvalidScenario(format!(
                        "context {ci} lists {label:?} twice"
                    )));
                }
                indices.push(idx);
            }
            if indices.is_empty() {
                return Err(Error::InvalidScenario(format!("context {ci} is empty")));
            }
            resolved.push(indices);
        }
        if resolved.is_empty() {
            return Err(Error::InvalidScenario("no contexts".into()));
        }
        for (mi, m) in measurements.iter().enumerate() {
            if !resolved.iter().any(|c| c.contains(&mi)) {
                return Err(Error::InvalidScenario(format!(
                    "measurement {m:?} belongs to no context"
                )));
            }
        }

        Ok(Self {
            measurements,
            contexts: resolved,
            outcome_arity,
        })
    }

    pub fn measurements(&self) -> &[String] {
        &self.measurements
    }

    /// Contexts as lists of indices into [`Self::measurements`].
    pub fn contexts(&self) -> &[Vec<usize>] {
        &self.contexts
    }

    pub fn context(&self, index: usize) -> Result<&[usize]> {
        self.contexts
            .get(index)
            .map(Vec::as_slice)
            .ok_or(Error::ContextIndex {
                index,
                count: self.contexts.len(),
            })
    }

    pub fn context_labels(&self, index: usize) -> Result<Vec<&str>> {
        Ok(self
            .context(index)?
            .iter()
            .map(|&m| self.measurements[m].as_str())
            .collect())
    }

    pub fn outcome_arity(&self) -> usize {
        self.outcome_arity
    }

    /// Number of joint outcomes of context `index`.
    pub fn row_len(&self, index: usize) -> Result<usize> {
        Ok(self.outcome_arity.pow(self.context(index)?.len() as u32))
    }

    /// `|O|^|X|`, refusing scenarios above [`MAX_GLOBAL_ASSIGNMENTS`].
    pub fn global_assignment_count(&self) -> Result<usize> {
        let count = (self.outcome_arity as u128)
            .checked_pow(self.measurements.len() as u32)
            .unwrap_or(u128::MAX);
        if count > MAX_GLOBAL_ASSIGNMENTS as u128 {
            return Err(Error::TooManyAssignments {
                count,
                limit: MAX_GLOBAL_ASSIGNMENTS,
            });
        }
        Ok(count as usize)
    }

    /// For every global assignment, the index of its restriction to `subset`.
    ///
    /// `subset` holds measurement indices; the result has one entry per global
    /// assignment in canonical order.
    pub fn restriction_map(&self, subset: &[usize]) -> Result<Vec<usize>> {
        let total = self.global_assignment_count()?;
        let arity = self.outcome_arity;
        let n = self.measurements.len();
        if let Some(&bad) = subset.iter().find(|&&m| m >= n) {
            return Err(Error::InvalidArgument(format!(
                "measurement index {bad} out of range"
            )));
        }
        // weight of each measurement's digit inside a global index
        let strides: Vec<usize> = (0..n).map(|m| arity.pow((n - 1 - m) as u32)).collect();
        Ok((0..total)
            .map(|g| {
                subset
                    .iter()
                    .fold(0, |acc, &m| acc * arity + (g / strides[m]) % arity)
            })
            .collect())
    }
}

/// A joint outcome over an ordered list of measurements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct JointOutcome {
    digits: Vec<usize>,
}

impl JointOutcome {
    pub fn new(digits: Vec<usize>, arity: usize) -> Result<Self> {
        if let Some(&d) = digits.iter().find(|&&d| d >= arity) {
            return Err(Error::InvalidArgument(format!(
                "outcome digit {d} not below arity {arity}"
            )));
        }
        Ok(Self { digits })
    }

    /// Decodes a lexicographic index into `len` digits.
    pub fn from_index(mut index: usize, len: usize, arity: usize) -> Self {
        let mut digits = vec![0; len];
        for slot in digits.iter_mut().rev() {
            *slot = index % arity;
            index /= arity;
        }
        Self { digits }
    }

    pub fn index(&self, arity: usize) -> usize {
        self.digits.iter().fold(0, |acc, &d| acc * arity + d)
    }

    pub fn digits(&self) -> &[usize] {
        &self.digits
    }
}

impl fmt::Display for JointOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.digits {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// A single failed check reported by [`EmpiricalModel::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub context: usize,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ViolationKind {
    /// Smallest entry of the row.
    Negative(f64),
    /// Row sum.
    Normalisation(f64),
    NonFinite,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ViolationKind::Negative(v) => {
                write!(f, "context {}: negative probability {v}", self.context)
            }
            ViolationKind::Normalisation(s) => {
                write!(f, "context {}: row sums to {s}, not 1", self.context)
            }
            ViolationKind::NonFinite => write!(f, "context {}: non-finite entry", self.context),
        }
    }
}

/// One probability distribution per context, indexed by joint outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModelFile", into = "ModelFile")]
pub struct EmpiricalModel {
    scenario: MeasurementScenario,
    rows: Vec<Vec<f64>>,
}

impl EmpiricalModel {
    /// Checks only the table shape; probability checks live in [`Self::validate`].
    pub fn new(scenario: MeasurementScenario, rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() != scenario.contexts.len() {
            return Err(Error::Shape {
                what: "model rows",
                expected: scenario.contexts.len(),
                found: rows.len(),
            });
        }
        for (ci, row) in rows.iter().enumerate() {
            let expected = scenario.row_len(ci)?;
            if row.len() != expected {
                return Err(Error::Shape {
                    what: "model row length",
                    expected,
                    found: row.len(),
                });
            }
        }
        Ok(Self { scenario, rows })
    }

    pub fn scenario(&self) -> &MeasurementScenario {
        &self.scenario
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn row(&self, context: usize) -> Result<&[f64]> {
        self.rows
            .get(context)
            .map(Vec::as_slice)
            .ok_or(Error::ContextIndex {
                index: context,
                count: self.rows.len(),
            })
    }

    /// Lists every violated probability invariant; empty means the model is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for (context, row) in self.rows.iter().enumerate() {
            if row.iter().any(|p| !p.is_finite()) {
                out.push(Violation {
                    context,
                    kind: ViolationKind::NonFinite,
                });
                continue;
            }
            let min = row.iter().copied().fold(f64::INFINITY, f64::min);
            if min < 0.0 {
                out.push(Violation {
                    context,
                    kind: ViolationKind::Negative(min),
                });
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > PROB_TOL {
                out.push(Violation {
                    context,
                    kind: ViolationKind::Normalisation(sum),
                });
            }
        }
        out
    }

    pub(crate) fn ensure_valid(&self) -> Result<()> {
        let violations = self.validate();
        if violations.is_empty() {
            return Ok(());
        }
        let msg = violations
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("; ");
        Err(Error::InvalidModel(msg))
    }

    /// Largest entrywise absolute difference to `other` (same scenario required).
    pub fn max_deviation(&self, other: &EmpiricalModel) -> Result<f64> {
        if self.scenario != other.scenario {
            return Err(Error::ScenarioMismatch);
        }
        Ok(self
            .rows
            .iter()
            .flatten()
            .zip(other.rows.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    /// Relabels the outcomes of measurement `measurement` as `o -> arity - 1 - o`
    /// in every context that contains it.
    pub fn reverse_outcomes(&self, measurement: usize) -> Result<EmpiricalModel> {
        if measurement >= self.scenario.measurements.len() {
            return Err(Error::InvalidArgument(format!(
                "measurement index {measurement} out of range"
            )));
        }
        let arity = self.scenario.outcome_arity;
        let rows = self
            .rows
            .iter()
            .zip(&self.scenario.contexts)
            .map(|(row, ctx)| {
                let Some(pos) = ctx.iter().position(|&m| m == measurement) else {
                    return row.clone();
                };
                let mut out = vec![0.0; row.len()];
                for (i, p) in row.iter().enumerate() {
                    let mut joint = JointOutcome::from_index(i, ctx.len(), arity);
                    joint.digits[pos] = arity - 1 - joint.digits[pos];
                    out[joint.index(arity)] = *p;
                }
                out
            })
            .collect();
        EmpiricalModel::new(self.scenario.clone(), rows)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serialisation cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Validates a model; see [`EmpiricalModel::validate`].
pub fn validate_model(model: &EmpiricalModel) -> Vec<Violation> {
    model.validate()
}

/// On-disk form of an empirical model.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    measurements: Vec<String>,
    outcome_arity: usize,
    contexts: Vec<Vec<String>>,
    rows: Vec<Vec<f64>>,
}

impl TryFrom<ModelFile> for EmpiricalModel {
    type Error = Error;

    fn try_from(file: ModelFile) -> Result<Self> {
        let scenario =
            MeasurementScenario::new(file.measurements, file.contexts, file.outcome_arity)?;
        EmpiricalModel::new(scenario, file.rows)
    }
}

impl From<EmpiricalModel> for ModelFile {
    fn from(model: EmpiricalModel) -> Self {
        let sc = model.scenario;
        let contexts = sc
            .contexts
            .iter()
            .map(|c| c.iter().map(|&m| sc.measurements[m].clone()).collect())
            .collect();
        ModelFile {
            measurements: sc.measurements,
            outcome_arity: sc.outcome_arity,
            contexts,
            rows: model.rows,
        }
    }
}

/// A (possibly sub-normalised) distribution over global assignments.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalDistribution {
    scenario: MeasurementScenario,
    weights: Vec<f64>,
    total_mass: f64,
}

impl GlobalDistribution {
    pub fn new(scenario: MeasurementScenario, weights: Vec<f64>) -> Result<Self> {
        let count = scenario.global_assignment_count()?;
        if weights.len() != count {
            return Err(Error::Shape {
                what: "global distribution weights",
                expected: count,
                found: weights.len(),
            });
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidDistribution(format!("weight {w}")));
        }
        let total_mass: f64 = weights.iter().sum();
        if total_mass > 1.0 + PROB_TOL {
            return Err(Error::InvalidDistribution(format!(
                "total mass {total_mass} exceeds 1"
            )));
        }
        Ok(Self {
            scenario,
            weights,
            total_mass,
        })
    }

    pub fn scenario(&self) -> &MeasurementScenario {
        &self.scenario
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    /// Marginal onto an arbitrary ordered subset of measurements.
    pub fn marginal_onto(&self, subset: &[usize]) -> Result<Vec<f64>> {
        let map = self.scenario.restriction_map(subset)?;
        let mut out = vec![0.0; self.scenario.outcome_arity.pow(subset.len() as u32)];
        for (g, &s) in map.iter().enumerate() {
            out[s] += self.weights[g];
        }
        Ok(out)
    }

    /// Marginal onto context `context`, ordered like that context's row.
    pub fn marginalize(&self, context: usize) -> Result<Vec<f64>> {
        let ctx = self.scenario.context(context)?.to_vec();
        self.marginal_onto(&ctx)
    }

    /// The empirical model made of all context marginals.
    pub fn marginal_model(&self) -> Result<EmpiricalModel> {
        let rows = (0..self.scenario.contexts.len())
            .map(|c| self.marginalize(c))
            .collect::<Result<Vec<_>>>()?;
        EmpiricalModel::new(self.scenario.clone(), rows)
    }

    /// JSON witness export: measurements, arity, weights and total mass.
    pub fn to_witness_json(&self) -> String {
        #[derive(Serialize)]
        struct Witness<'a> {
            measurements: &'a [String],
            outcome_arity: usize,
            weights: &'a [f64],
            total_mass: f64,
        }
        serde_json::to_string_pretty(&Witness {
            measurements: &self.scenario.measurements,
            outcome_arity: self.scenario.outcome_arity,
            weights: &self.weights,
            total_mass: self.total_mass,
        })
        .expect("witness serialisation cannot fail")
    }
}

/// See [`GlobalDistribution::marginalize`].
pub fn marginalize(d: &GlobalDistribution, context: usize) -> Result<Vec<f64>> {
    d.marginalize(context)
}

/// Marginalises a row over the ordered measurements `from` onto `onto ⊆ from`.
pub fn restrict_row(arity: usize, from: &[usize], row: &[f64], onto: &[usize]) -> Result<Vec<f64>> {
    let expected = arity.pow(from.len() as u32);
    if row.len() != expected {
        return Err(Error::Shape {
            what: "row length",
            expected,
            found: row.len(),
        });
    }
    let positions = onto
        .iter()
        .map(|m| {
            from.iter().position(|f| f == m).ok_or_else(|| {
                Error::InvalidArgument(format!("measurement {m} is not in the source context"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = vec![0.0; arity.pow(onto.len() as u32)];
    for (i, p) in row.iter().enumerate() {
        let joint = JointOutcome::from_index(i, from.len(), arity);
        let idx = positions
            .iter()
            .fold(0, |acc, &pos| acc * arity + joint.digits[pos]);
        out[idx] += p;
    }
    Ok(out)
}

/// Row-wise convex combination `lambda * e1 + (1 - lambda) * e2`.
pub fn mix_models(e1: &EmpiricalModel, e2: &EmpiricalModel, lambda: f64) -> Result<EmpiricalModel> {
    if e1.scenario != e2.scenario {
        return Err(Error::ScenarioMismatch);
    }
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::MixingWeight(lambda));
    }
    let rows = e1
        .rows
        .iter()
        .zip(&e2.rows)
        .map(|(r1, r2)| {
            r1.iter()
                .zip(r2)
                .map(|(a, b)| lambda * a + (1.0 - lambda) * b)
                .collect()
        })
        .collect();
    EmpiricalModel::new(e1.scenario.clone(), rows)
}

/// The scenario `X = {a1, a2, b}`, `M = {{a1, b}, {a2, b}}` with binary outcomes.
pub fn two_context_scenario() -> MeasurementScenario {
    MeasurementScenario::new(["a1", "a2", "b"], [["a1", "b"], ["a2", "b"]], 2)
        .expect("fixed scenario is valid")
}

/// The three example tables `table1a`, `table1b` and `table1c`.
pub fn fixture_model(name: &str) -> Result<EmpiricalModel> {
    let rows = match name {
        "table1a" => vec![vec![1.0, 0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0, 0.0]],
        "table1b" => vec![vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 0.0, 0.0, 1.0]],
        "table1c" => vec![vec![1.0, 0.0, 0.0, 0.0], vec![0.5, 0.0, 0.0, 0.5]],
        other => return Err(Error::UnknownFixture(other.to_string())),
    };
    EmpiricalModel::new(two_context_scenario(), rows)
}

pub const FIXTURE_NAMES: [&str; 3] = ["table1a", "table1b", "table1c"];
