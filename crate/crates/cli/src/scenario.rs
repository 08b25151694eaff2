//! Scenario files: a TOML document naming observables, an initial
//! distribution and a sequence of measurement steps.

use std::collections::BTreeMap;
use std::path::Path;

use poalg::literal::{format_complex, parse_complex};
use poalg::{complete_compatible_basis, make_basis, make_density, AlgebraError, CVector, Complex64, Observable, ProjectorBasis, PseudoObservable, Tolerances};
use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = r#"# Scenario schema (TOML)
#
# dim          integer >= 1
# samples      integer, Monte Carlo trajectories
# seed         unsigned integer, root of every random stream
#
# [observables]
# NAME = [[entry, ...], ...]     row-major d x d Hermitian matrix
#                                entries: numbers or strings "a", "bi", "a+bi", "a-bi"
#
# [initial]
# basis = "computational"        the standard basis, or
# basis = "NAME"                 eigenbasis of one observable, or
# basis = ["NAME", ...]          joint eigenbasis of a commuting family, or
# vectors = [[entry, ...], ...]  explicit orthonormal basis vectors
# probabilities = [p_0, ...]     one per basis element, summing to 1
#
# [[steps]]
# measure = ["NAME", ...]        commuting family measured at this step

dim = 2
samples = 100000
seed = 1

[observables]
X = [[0, 1], [1, 0]]
Z = [[1, 0], [0, -1]]

[initial]
basis = "computational"
probabilities = [1, 0]

[[steps]]
measure = ["X"]
"#;

const COMPUTATIONAL: &str = "computational";

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error{}{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default(), field.as_ref().map(|f| format!(" in {f}")).unwrap_or_default())]
    Parse {
        line: Option<usize>,
        field: Option<String>,
        message: String,
    },
    #[error("validation error: {0}")]
    Validation(String),
}

impl ScenarioError {
    fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        ScenarioError::Parse {
            line: None,
            field: Some(field.into()),
            message: message.into(),
        }
    }
}

/// How the initial distribution's basis is specified.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialBasis {
    Computational,
    Family(Vec<String>),
    Vectors(Vec<CVector>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Initial {
    pub basis: InitialBasis,
    pub probabilities: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub measure: Vec<String>,
}

/// A validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub dim: usize,
    pub observables: BTreeMap<String, Observable>,
    pub initial: Initial,
    pub steps: Vec<Step>,
    pub samples: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum Entry {
    Int(i64),
    Float(f64),
    Text(String),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum BasisSpec {
    One(String),
    Many(Vec<String>),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInitial {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    basis: Option<BasisSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vectors: Option<Vec<Vec<Entry>>>,
    probabilities: Vec<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStep {
    measure: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    dim: usize,
    samples: u64,
    seed: u64,
    observables: BTreeMap<String, Vec<Vec<Entry>>>,
    initial: RawInitial,
    #[serde(default)]
    steps: Vec<RawStep>,
}

fn entry_value(entry: &Entry, field: &str) -> Result<Complex64, ScenarioError> {
    match entry {
        Entry::Int(i) => Ok(Complex64::new(*i as f64, 0.0)),
        Entry::Float(x) if x.is_finite() => Ok(Complex64::new(*x, 0.0)),
        Entry::Float(x) => Err(ScenarioError::field(field, format!("non-finite entry {x}"))),
        Entry::Text(s) => parse_complex(s).map_err(|e| ScenarioError::field(field, e.to_string())),
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Parses and validates scenario text.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let raw: RawScenario = toml::from_str(text).map_err(|e| ScenarioError::Parse {
        line: e.span().map(|s| line_of(text, s.start)),
        field: None,
        message: e.message().to_string(),
    })?;
    from_raw(raw)
}

/// Reads, parses and validates a scenario file.
pub fn load_scenario(path: &Path) -> Result<Scenario, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|e| ScenarioError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_scenario(&text)
}

fn from_raw(raw: RawScenario) -> Result<Scenario, ScenarioError> {
    let d = raw.dim;
    if d == 0 {
        return Err(ScenarioError::field("dim", "must be at least 1"));
    }
    let mut observables = BTreeMap::new();
    for (name, rows) in &raw.observables {
        if name == COMPUTATIONAL {
            return Err(ScenarioError::field(format!("observables.{name}"), "name is reserved"));
        }
        let field = format!("observables.{name}");
        if rows.len() != d || rows.iter().any(|r| r.len() != d) {
            return Err(ScenarioError::field(field, format!("expected a {d}x{d} matrix")));
        }
        let mut parsed = Vec::with_capacity(d);
        for (i, row) in rows.iter().enumerate() {
            let mut out = Vec::with_capacity(d);
            for (j, e) in row.iter().enumerate() {
                out.push(entry_value(e, &format!("{field}[{i}][{j}]"))?);
            }
            parsed.push(out);
        }
        let matrix = PseudoObservable::from_rows(&parsed).map_err(|e| ScenarioError::field(&field, e.to_string()))?;
        observables.insert(name.clone(), matrix);
    }

    let basis = match (&raw.initial.basis, &raw.initial.vectors) {
        (Some(_), Some(_)) => return Err(ScenarioError::field("initial", "give either basis or vectors, not both")),
        (None, None) => return Err(ScenarioError::field("initial", "missing basis or vectors")),
        (Some(BasisSpec::One(name)), None) if name == COMPUTATIONAL => InitialBasis::Computational,
        (Some(BasisSpec::One(name)), None) => InitialBasis::Family(vec![name.clone()]),
        (Some(BasisSpec::Many(names)), None) => InitialBasis::Family(names.clone()),
        (None, Some(vectors)) => {
            let mut out = Vec::with_capacity(vectors.len());
            for (i, v) in vectors.iter().enumerate() {
                let values = v
                    .iter()
                    .enumerate()
                    .map(|(j, e)| entry_value(e, &format!("initial.vectors[{i}][{j}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                out.push(CVector::from_vec(values));
            }
            InitialBasis::Vectors(out)
        }
    };

    let scenario = Scenario {
        dim: d,
        observables: BTreeMap::new(),
        initial: Initial {
            basis,
            probabilities: raw.initial.probabilities,
        },
        steps: raw.steps.into_iter().map(|s| Step { measure: s.measure }).collect(),
        samples: raw.samples,
        seed: raw.seed,
    };
    validate(scenario, observables)
}

fn validate(mut scenario: Scenario, matrices: BTreeMap<String, PseudoObservable>) -> Result<Scenario, ScenarioError> {
    let tol = Tolerances::default();
    for (name, m) in matrices {
        let o = Observable::with_tolerance(m, tol.herm).map_err(|e| match e {
            AlgebraError::NotHermitian { .. } => ScenarioError::Validation(format!("observable {name} not Hermitian")),
            other => ScenarioError::Validation(format!("observable {name}: {other}")),
        })?;
        scenario.observables.insert(name, o);
    }
    check(&scenario)?;
    Ok(scenario)
}

/// Checks every invariant of an in-memory scenario.
pub fn check(scenario: &Scenario) -> Result<(), ScenarioError> {
    let tol = Tolerances::default();
    let d = scenario.dim;
    if d == 0 {
        return Err(ScenarioError::Validation("dim must be at least 1".into()));
    }
    for (name, o) in &scenario.observables {
        if o.dim() != d {
            return Err(ScenarioError::Validation(format!("observable {name} has dimension {}, expected {d}", o.dim())));
        }
        if !o.as_pseudo().is_hermitian(tol.herm) {
            return Err(ScenarioError::Validation(format!("observable {name} not Hermitian")));
        }
    }
    let basis = initial_basis(scenario)?;
    make_density(&basis, &scenario.initial.probabilities, &tol)
        .map_err(|e| ScenarioError::Validation(format!("initial distribution: {e}")))?;
    for (i, step) in scenario.steps.iter().enumerate() {
        family_basis(scenario, &step.measure).map_err(|e| match e {
            ScenarioError::Validation(m) => ScenarioError::Validation(format!("step {}: {m}", i + 1)),
            other => other,
        })?;
    }
    Ok(())
}

/// The named observables, in the order given.
pub fn family<'a>(scenario: &'a Scenario, names: &[String]) -> Result<Vec<&'a Observable>, ScenarioError> {
    if names.is_empty() {
        return Err(ScenarioError::Validation("empty observable family".into()));
    }
    names
        .iter()
        .map(|n| {
            scenario
                .observables
                .get(n)
                .ok_or_else(|| ScenarioError::Validation(format!("unknown observable {n}")))
        })
        .collect()
}

/// Joint eigenbasis of a named family, with its eigenvalue labels.
pub fn family_basis(scenario: &Scenario, names: &[String]) -> Result<poalg::CompatibleBasis, ScenarioError> {
    let members: Vec<Observable> = family(scenario, names)?.into_iter().cloned().collect();
    complete_compatible_basis(&members, &Tolerances::default()).map_err(|e| match e {
        AlgebraError::NotCommuting { .. } => ScenarioError::Validation("family not commuting".into()),
        other => ScenarioError::Validation(other.to_string()),
    })
}

pub fn initial_basis(scenario: &Scenario) -> Result<ProjectorBasis, ScenarioError> {
    let d = scenario.dim;
    match &scenario.initial.basis {
        InitialBasis::Computational => Ok(ProjectorBasis::computational(d)),
        InitialBasis::Family(names) => family_basis(scenario, names)
            .map(|c| c.basis)
            .map_err(|e| match e {
                ScenarioError::Validation(m) => ScenarioError::Validation(format!("initial basis: {m}")),
                other => other,
            }),
        InitialBasis::Vectors(vectors) => {
            if vectors.len() != d || vectors.iter().any(|v| v.len() != d) {
                return Err(ScenarioError::Validation(format!("initial basis: expected {d} vectors of length {d}")));
            }
            make_basis(vectors, Tolerances::default().orth)
                .map_err(|e| ScenarioError::Validation(format!("initial basis: {e}")))
        }
    }
}

fn text_entries(values: impl Iterator<Item = Complex64>) -> Vec<Entry> {
    values.map(|z| Entry::Text(format_complex(z))).collect()
}

/// Serializes to the TOML schema. Entries are written as exact literals,
/// so parsing the output reproduces the scenario.
pub fn to_toml(scenario: &Scenario) -> String {
    let observables = scenario
        .observables
        .iter()
        .map(|(name, o)| {
            let m = o.components();
            let rows = (0..m.nrows()).map(|i| text_entries((0..m.ncols()).map(|j| m[(i, j)]))).collect();
            (name.clone(), rows)
        })
        .collect();
    let (basis, vectors) = match &scenario.initial.basis {
        InitialBasis::Computational => (Some(BasisSpec::One(COMPUTATIONAL.into())), None),
        InitialBasis::Family(names) if names.len() == 1 => (Some(BasisSpec::One(names[0].clone())), None),
        InitialBasis::Family(names) => (Some(BasisSpec::Many(names.clone())), None),
        InitialBasis::Vectors(vs) => (None, Some(vs.iter().map(|v| text_entries(v.iter().copied())).collect())),
    };
    let raw = RawScenario {
        dim: scenario.dim,
        samples: scenario.samples,
        seed: scenario.seed,
        observables,
        initial: RawInitial {
            basis,
            vectors,
            probabilities: scenario.initial.probabilities.clone(),
        },
        steps: scenario
            .steps
            .iter()
            .map(|s| RawStep { measure: s.measure.clone() })
            .collect(),
    };
    toml::to_string(&raw).expect("scenario serializes")
}
