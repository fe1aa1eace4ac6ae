//! Input documents, structured reports and the command runners behind the
//! `torpure` binary.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::abelian::GroupElement;
use crate::completion::{completable_without_new_rays, CompletionError};
use crate::fans::{
    enumerate_complete_fans, is_complete, is_fan, m_sigma, Fan, FanError, FanMatrix,
};
use crate::linalg::IntMatrix;
use crate::toric::{
    cartier_lattice, cf_decomposition, class_group, class_group_with, is_pure, picard_subgroup,
    transport_fan, ClassGroupPresentation, DecisionPath, Purity, ToricError,
};

/// Exit-code contract: 0 success (verdicts like "impure" or "not completable"
/// are answers, not failures), 2 parse or schema error, 3 validation or
/// precondition failure.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("validation error: {0}")]
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Validation(_) => 3,
        }
    }
}

impl From<FanError> for CliError {
    fn from(e: FanError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<ToricError> for CliError {
    fn from(e: ToricError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<CompletionError> for CliError {
    fn from(e: CompletionError) -> Self {
        CliError::Validation(e.to_string())
    }
}

/// Arbitrary-precision integer field: accepts a JSON number or a decimal
/// string on input, always emits a decimal string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigIntField(pub BigInt);

impl Serialize for BigIntField {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for BigIntField {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl serde::de::Visitor<'_> for V {
            type Value = BigIntField;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "an integer or a decimal string")
            }
            fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<Self::Value, E> {
                Ok(BigIntField(BigInt::from(v)))
            }
            fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<Self::Value, E> {
                Ok(BigIntField(BigInt::from(v)))
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<Self::Value, E> {
                v.parse::<BigInt>()
                    .map(BigIntField)
                    .map_err(|_| E::custom(format!("not a decimal integer: {v}")))
            }
        }
        d.deserialize_any(V)
    }
}

/// On-disk input: dimension, ray columns, named fans and optional weight and
/// torsion matrix overrides reproducing a reference basis.
#[derive(Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub n: usize,
    pub rays: Vec<Vec<BigIntField>>,
    #[serde(default)]
    pub fans: BTreeMap<String, Vec<Vec<usize>>>,
    #[serde(default)]
    pub weight_matrix: Option<Vec<Vec<BigIntField>>>,
    #[serde(default)]
    pub torsion_matrix: Option<Vec<Vec<BigIntField>>>,
}

pub fn parse_document(text: &str) -> Result<InputDocument, CliError> {
    let doc: InputDocument =
        serde_json::from_str(text).map_err(|e| CliError::Input(e.to_string()))?;
    if doc.n == 0 {
        return Err(CliError::Input("dimension n must be positive".into()));
    }
    if doc.rays.is_empty() {
        return Err(CliError::Input("at least one ray is required".into()));
    }
    for (i, ray) in doc.rays.iter().enumerate() {
        if ray.len() != doc.n {
            return Err(CliError::Input(format!(
                "ray {} has {} coordinates, expected {}",
                i + 1,
                ray.len(),
                doc.n
            )));
        }
    }
    for (name, cones) in &doc.fans {
        for cone in cones {
            for &i in cone {
                if i == 0 || i > doc.rays.len() {
                    return Err(CliError::Input(format!(
                        "fan {name:?}: cone index {i} out of range 1..={}",
                        doc.rays.len()
                    )));
                }
            }
        }
    }
    Ok(doc)
}

impl InputDocument {
    pub fn fan_matrix(&self) -> FanMatrix {
        FanMatrix::new(
            self.n,
            self.rays
                .iter()
                .map(|r| r.iter().map(|x| x.0.clone()).collect())
                .collect(),
        )
        .expect("ray lengths checked at parse time")
    }

    pub fn named_fan(&self, matrix: &FanMatrix, name: &str) -> Result<Fan, CliError> {
        let cones = self
            .fans
            .get(name)
            .ok_or_else(|| CliError::Validation(format!("no fan named {name:?} in document")))?;
        Fan::from_index_lists(matrix.clone(), cones).map_err(CliError::from)
    }

    fn override_matrix(rows: &[Vec<BigIntField>], cols: usize) -> Result<IntMatrix, CliError> {
        for row in rows {
            if row.len() != cols {
                return Err(CliError::Validation(format!(
                    "override matrix row has {} entries, expected {cols}",
                    row.len()
                )));
            }
        }
        Ok(IntMatrix::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|x| x.0.clone()).collect())
                .collect(),
        ))
    }

    /// Presentation used by class-group-dependent commands; `paper_basis`
    /// selects the document's override matrices instead of the canonical one.
    pub fn presentation(
        &self,
        matrix: &FanMatrix,
        paper_basis: bool,
    ) -> Result<ClassGroupPresentation, CliError> {
        if !paper_basis {
            return class_group(matrix).map_err(CliError::from);
        }
        let weight_rows = self.weight_matrix.as_ref().ok_or_else(|| {
            CliError::Validation("--paper-basis requires a weight_matrix override".into())
        })?;
        let weight = Self::override_matrix(weight_rows, self.rays.len())?;
        let torsion = match &self.torsion_matrix {
            Some(rows) => Self::override_matrix(rows, self.rays.len())?,
            None => IntMatrix::zero(0, self.rays.len()),
        };
        class_group_with(matrix, weight, torsion).map_err(CliError::from)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Validate,
    ClassGroup,
    Cartier,
    Picard,
    Purity,
    Mult,
    Enumerate,
    Complete,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::ClassGroup => "classgroup",
            Command::Cartier => "cartier",
            Command::Picard => "picard",
            Command::Purity => "purity",
            Command::Mult => "mult",
            Command::Enumerate => "enumerate",
            Command::Complete => "complete",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct CommandOptions {
    pub fan: Option<String>,
    pub paper_basis: bool,
    pub jobs: usize,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct ClassGroupReport {
    pub rank: usize,
    pub torsion: Vec<String>,
    pub weight_matrix: Vec<Vec<String>>,
    pub torsion_matrix: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct GeneratorReport {
    pub free: Vec<String>,
    pub torsion: Vec<String>,
    pub display: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct PicardReport {
    pub generators: Vec<GeneratorReport>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct MultReport {
    pub cones: Vec<Vec<usize>>,
    pub multiplicities: Vec<String>,
    pub m: String,
    pub covering_multiplicities: Vec<String>,
    pub covering_m: String,
    pub torsion_order: String,
}

/// Machine-readable result of a command. Serialization is deterministic:
/// identical inputs produce byte-identical JSON (timing is not serialized).
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct Report {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fan: Option<String>,
    pub paper_basis: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decision_path: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_group: Option<ClassGroupReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub picard: Option<PicardReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicities: Option<MultReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cartier_basis: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fans: Option<Vec<Vec<Vec<usize>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violations: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<String>>,
    #[serde(skip)]
    pub timing_ms: Option<u128>,
}

impl Report {
    fn new(command: Command, opts: &CommandOptions) -> Report {
        Report {
            command: command.name().to_string(),
            fan: opts.fan.clone(),
            paper_basis: opts.paper_basis,
            verdict: None,
            decision_path: None,
            class_group: None,
            picard: None,
            multiplicities: None,
            cartier_basis: None,
            fans: None,
            steps: None,
            violations: None,
            witnesses: None,
            timing_ms: None,
        }
    }

    /// 0 for answers (including negative verdicts), 3 for validation failures
    /// surfaced inside a report.
    pub fn exit_code(&self) -> i32 {
        match &self.violations {
            Some(v) if !v.is_empty() => 3,
            _ => 0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn matrix_strings(m: &IntMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(|x| x.to_string()).collect())
        .collect()
}

pub fn format_element(g: &GroupElement, orders: &[BigInt]) -> String {
    let free = g
        .free()
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ");
    let mut out = format!("({free})");
    for (t, d) in g.torsion().iter().zip(orders) {
        if !t.to_string().eq("0") {
            out.push_str(&format!(" + [{t}]_{d}"));
        }
    }
    out
}

fn generator_reports(gens: &[GroupElement], orders: &[BigInt]) -> Vec<GeneratorReport> {
    gens.iter()
        .map(|g| GeneratorReport {
            free: g.free().iter().map(|x| x.to_string()).collect(),
            torsion: g.torsion().iter().map(|x| x.to_string()).collect(),
            display: format_element(g, orders),
        })
        .collect()
}

fn class_group_report(pres: &ClassGroupPresentation) -> ClassGroupReport {
    ClassGroupReport {
        rank: pres.rank,
        torsion: pres.torsion_orders.iter().map(|d| d.to_string()).collect(),
        weight_matrix: matrix_strings(&pres.weight),
        torsion_matrix: matrix_strings(&pres.torsion),
    }
}

fn require_fan(
    doc: &InputDocument,
    matrix: &FanMatrix,
    opts: &CommandOptions,
) -> Result<Fan, CliError> {
    let name = opts
        .fan
        .as_ref()
        .ok_or_else(|| CliError::Validation("this command requires --fan NAME".into()))?;
    doc.named_fan(matrix, name)
}

/// Execute one command against a parsed document.
pub fn run(
    command: Command,
    doc: &InputDocument,
    opts: &CommandOptions,
) -> Result<Report, CliError> {
    let started = std::time::Instant::now();
    let matrix = doc.fan_matrix();
    let mut report = Report::new(command, opts);
    match command {
        Command::Validate => {
            let mut violations: Vec<String> =
                matrix.validate().iter().map(|v| v.to_string()).collect();
            if violations.is_empty() && doc.weight_matrix.is_some() {
                if let Err(e) = doc.presentation(&matrix, true) {
                    violations.push(format!("override matrices: {e}"));
                }
            }
            let mut fan_lines = Vec::new();
            for (name, cones) in &doc.fans {
                match Fan::from_index_lists(matrix.clone(), cones) {
                    Ok(fan) => match is_fan(&fan) {
                        Ok(()) => {
                            let completeness = if violations.is_empty() {
                                match is_complete(&fan) {
                                    Ok(true) => "complete",
                                    Ok(false) => "not complete",
                                    Err(_) => "not checkable",
                                }
                            } else {
                                "not checked"
                            };
                            fan_lines.push(format!("{name}: fan, {completeness}"));
                        }
                        Err(v) => violations.push(format!(
                            "fan {name:?}: cones {} and {} do not meet in a common face",
                            v.first, v.second
                        )),
                    },
                    Err(e) => violations.push(format!("fan {name:?}: {e}")),
                }
            }
            report.verdict = Some(
                if violations.is_empty() {
                    "ok"
                } else {
                    "invalid"
                }
                .to_string(),
            );
            report.steps = Some(fan_lines);
            report.violations = Some(violations);
        }
        Command::ClassGroup => {
            let pres = doc.presentation(&matrix, opts.paper_basis)?;
            report.class_group = Some(class_group_report(&pres));
        }
        Command::Cartier => {
            let fan = require_fan(doc, &matrix, opts)?;
            let lattice = cartier_lattice(&matrix, &fan)?;
            report.cartier_basis = Some(matrix_strings(lattice.basis()));
        }
        Command::Picard => {
            let fan = require_fan(doc, &matrix, opts)?;
            let pres = doc.presentation(&matrix, opts.paper_basis)?;
            let gens = picard_subgroup(&matrix, &fan, &pres)?;
            report.class_group = Some(class_group_report(&pres));
            report.picard = Some(PicardReport {
                generators: generator_reports(&gens, &pres.torsion_orders),
            });
        }
        Command::Purity => {
            let fan = require_fan(doc, &matrix, opts)?;
            let pres = doc.presentation(&matrix, opts.paper_basis)?;
            let purity = is_pure(&matrix, &fan, &pres)?;
            report.verdict = Some(
                match purity.verdict {
                    Purity::Pure => "pure",
                    Purity::Impure => "impure",
                }
                .to_string(),
            );
            report.decision_path = Some(match &purity.via {
                DecisionPath::SufficientCondition {
                    torsion_order,
                    covering_m_sigma,
                } => format!("sufficient condition: gcd({torsion_order}, {covering_m_sigma}) = 1"),
                DecisionPath::FreePartTest {
                    failing_index: Some(i),
                    ..
                } => {
                    format!("free-part test: divisor {} fails torsion division", i + 1)
                }
                DecisionPath::FreePartTest { .. } => "free-part test: witness found".to_string(),
            });
            report.class_group = Some(class_group_report(&pres));
            report.picard = Some(PicardReport {
                generators: generator_reports(&purity.pic_generators, &pres.torsion_orders),
            });
        }
        Command::Mult => {
            let fan = require_fan(doc, &matrix, opts)?;
            if let Err(v) = is_fan(&fan) {
                return Err(CliError::Validation(format!(
                    "cones {} and {} do not meet in a common face",
                    v.first, v.second
                )));
            }
            let decomp = cf_decomposition(&matrix)?;
            let covering_fan = transport_fan(&decomp.covering, &fan)?;
            // multiplicities reported in the document's cone order
            let name = opts.fan.as_ref().expect("checked by require_fan");
            let cones: Vec<Vec<usize>> = doc.fans[name].clone();
            let per_cone = |m: &FanMatrix| -> Vec<String> {
                cones
                    .iter()
                    .map(|c| {
                        crate::fans::multiplicity(m, &crate::fans::Cone::new(c.clone())).to_string()
                    })
                    .collect()
            };
            let multiplicities = per_cone(&matrix);
            let covering_multiplicities = per_cone(&decomp.covering);
            report.multiplicities = Some(MultReport {
                cones,
                multiplicities,
                m: m_sigma(&fan)?.to_string(),
                covering_multiplicities,
                covering_m: m_sigma(&covering_fan)?.to_string(),
                torsion_order: decomp.torsion_order().to_string(),
            });
        }
        Command::Enumerate => {
            let fans = enumerate_complete_fans(&matrix)?;
            report.verdict = Some(format!("{} complete fan(s)", fans.len()));
            report.fans = Some(
                fans.iter()
                    .map(|f| f.max_cones().iter().map(|c| c.indices().to_vec()).collect())
                    .collect(),
            );
        }
        Command::Complete => {
            let fan = require_fan(doc, &matrix, opts)?;
            match completable_without_new_rays(&fan)? {
                Some(completion) => {
                    let already = completion.max_cones() == fan.max_cones();
                    report.verdict = Some(
                        if already {
                            "already complete"
                        } else {
                            "completable"
                        }
                        .to_string(),
                    );
                    report.fans = Some(vec![completion
                        .max_cones()
                        .iter()
                        .map(|c| c.indices().to_vec())
                        .collect()]);
                    let added: Vec<String> = completion
                        .max_cones()
                        .iter()
                        .filter(|c| !fan.max_cones().contains(c))
                        .map(|c| format!("add {c}"))
                        .collect();
                    report.steps = Some(added);
                }
                None => {
                    report.verdict = Some("not completable without new rays".to_string());
                }
            }
        }
    }
    report.timing_ms = Some(started.elapsed().as_millis());
    Ok(report)
}

/// Human-readable rendering of a report.
pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    out.push_str(&format!("command: {}\n", report.command));
    if let Some(fan) = &report.fan {
        out.push_str(&format!("fan: {fan}\n"));
    }
    if let Some(v) = &report.verdict {
        out.push_str(&format!("verdict: {v}\n"));
    }
    if let Some(d) = &report.decision_path {
        out.push_str(&format!("decided by: {d}\n"));
    }
    if let Some(cg) = &report.class_group {
        let torsion = if cg.torsion.is_empty() {
            "free".to_string()
        } else {
            cg.torsion
                .iter()
                .map(|d| format!("Z/{d}"))
                .collect::<Vec<_>>()
                .join(" + ")
        };
        out.push_str(&format!("class group: Z^{} + {}\n", cg.rank, torsion));
        for row in &cg.weight_matrix {
            out.push_str(&format!("  Q row: [{}]\n", row.join(" ")));
        }
        for row in &cg.torsion_matrix {
            out.push_str(&format!("  torsion row: [{}]\n", row.join(" ")));
        }
    }
    if let Some(p) = &report.picard {
        out.push_str("picard generators:\n");
        for g in &p.generators {
            out.push_str(&format!("  {}\n", g.display));
        }
    }
    if let Some(m) = &report.multiplicities {
        out.push_str(&format!(
            "multiplicities: {}\n  m = {}\n",
            m.multiplicities.join(" "),
            m.m
        ));
        out.push_str(&format!(
            "covering multiplicities: {}\n  covering m = {}\n  torsion order = {}\n",
            m.covering_multiplicities.join(" "),
            m.covering_m,
            m.torsion_order
        ));
    }
    if let Some(basis) = &report.cartier_basis {
        out.push_str("cartier lattice basis rows:\n");
        for row in basis {
            out.push_str(&format!("  [{}]\n", row.join(" ")));
        }
    }
    if let Some(fans) = &report.fans {
        for (i, cones) in fans.iter().enumerate() {
            let rendered: Vec<String> = cones
                .iter()
                .map(|c| {
                    format!(
                        "<{}>",
                        c.iter()
                            .map(|i| i.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    )
                })
                .collect();
            out.push_str(&format!("fan {}: {}\n", i + 1, rendered.join(" ")));
        }
    }
    if let Some(steps) = &report.steps {
        for s in steps {
            out.push_str(&format!("  {s}\n"));
        }
    }
    if let Some(violations) = &report.violations {
        if violations.is_empty() {
            out.push_str("no violations\n");
        } else {
            for v in violations {
                out.push_str(&format!("violation: {v}\n"));
            }
        }
    }
    if let Some(ms) = report.timing_ms {
        out.push_str(&format!("elapsed: {ms} ms\n"));
    }
    out
}
