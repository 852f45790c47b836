//! On-disk formats: wave CSV dumps, JSON traces and reports, and the
//! truth-table and program JSON schemas.

use std::fmt::Write as _;
use std::path::Path;

use qhist_core::dyadic::DyadicWave;
use qhist_core::processor::{NamedGate, Operation, Program, ProgramStep, StepMetrics};
use qhist_core::revcomp::{Mode, TruthTable};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::grid::GridWave;

pub const CSV_HEADER: &str = "x_left,x_right,re,im,abs2";

/// Shortest decimal that parses back to the same double; `-0` prints as `0`.
pub fn num(v: f64) -> String {
    format!("{}", v + 0.0)
}

fn csv_row(out: &mut String, left: f64, right: f64, z: qhist_core::C64) {
    let _ = writeln!(
        out,
        "{},{},{},{},{}",
        num(left),
        num(right),
        num(z.re),
        num(z.im),
        num(z.norm_sqr())
    );
}

/// One row per cell of the stored span, interior zero cells included.
pub fn wave_csv(w: &DyadicWave) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    if w.is_zero() {
        return out;
    }
    for (left, right, z) in w.cells() {
        csv_row(&mut out, left, right, z);
    }
    out
}

/// One row per sample `[x_j, x_j + h)`.
pub fn grid_csv(g: &GridWave) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for (j, &z) in g.samples().iter().enumerate() {
        let x = g.x(j);
        csv_row(&mut out, x, x + g.h(), z);
    }
    out
}

/// Entry of the erase-demo trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub step: usize,
    pub qubit: Option<usize>,
    pub level: u32,
    pub norm2: f64,
    pub ancilla_residual: f64,
    pub wave: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsLine {
    pub step: usize,
    pub ancilla_residual: f64,
    pub data_purity: f64,
    pub cv_level: u32,
    pub joint_cells: usize,
    pub norm2: f64,
}

impl From<StepMetrics> for MetricsLine {
    fn from(m: StepMetrics) -> Self {
        Self {
            step: m.step,
            ancilla_residual: m.ancilla_residual,
            data_purity: m.data_purity,
            cv_level: m.cv_level,
            joint_cells: m.joint_cells,
            norm2: m.norm2,
        }
    }
}

/// JSON lines, one object per step.
pub fn metrics_jsonl(metrics: &[StepMetrics]) -> String {
    let mut out = String::new();
    for m in metrics {
        out.push_str(&serde_json::to_string(&MetricsLine::from(*m)).expect("metrics serialize"));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceJson {
    pub plain_reversible_ancillas: usize,
    pub cv_scheme_qubits: usize,
    pub cv_final_level: u64,
    pub joint_cells: u64,
}

impl From<qhist_core::processor::ResourceReport> for ResourceJson {
    fn from(r: qhist_core::processor::ResourceReport) -> Self {
        Self {
            plain_reversible_ancillas: r.plain_reversible_ancillas,
            cv_scheme_qubits: r.cv_scheme_qubits,
            cv_final_level: r.cv_final_level,
            joint_cells: r.joint_cells,
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

/// Parses `text` and reports failures with the path of the offending field.
pub fn parse_json<T: DeserializeOwned>(text: &str, file: &str) -> CliResult<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CliError::Schema {
            file: file.to_string(),
            path: if path.is_empty() { ".".into() } else { path },
            message: e.into_inner().to_string(),
        }
    })
}

pub fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruthTableJson {
    pub n_in: u32,
    pub m_out: u32,
    pub outputs: Vec<u64>,
}

impl TruthTableJson {
    pub fn into_table(self) -> qhist_core::Result<TruthTable> {
        TruthTable::new(self.n_in, self.m_out, self.outputs)
    }
}

impl From<&TruthTable> for TruthTableJson {
    fn from(t: &TruthTable) -> Self {
        Self {
            n_in: t.n_in(),
            m_out: t.m_out(),
            outputs: t.outputs().to_vec(),
        }
    }
}

/// A table given inline or by the name of a built-in (`and`, `or`, `xor`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TableJson {
    Named(String),
    Inline(TruthTableJson),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeJson {
    Xor,
    ModSub,
}

impl From<ModeJson> for Mode {
    fn from(m: ModeJson) -> Self {
        match m {
            ModeJson::Xor => Mode::Xor,
            ModeJson::ModSub => Mode::ModSub,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateJson {
    X,
    Y,
    Z,
    H,
    S,
    T,
    Cnot,
    Swap,
    Toffoli,
}

impl From<GateJson> for NamedGate {
    fn from(g: GateJson) -> Self {
        match g {
            GateJson::X => NamedGate::X,
            GateJson::Y => NamedGate::Y,
            GateJson::Z => NamedGate::Z,
            GateJson::H => NamedGate::H,
            GateJson::S => NamedGate::S,
            GateJson::T => NamedGate::T,
            GateJson::Cnot => NamedGate::Cnot,
            GateJson::Swap => NamedGate::Swap,
            GateJson::Toffoli => NamedGate::Toffoli,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum OpJson {
    Function {
        table: TableJson,
        #[serde(default = "default_mode")]
        mode: ModeJson,
        x: Vec<usize>,
        y: Vec<usize>,
    },
    Gate {
        gate: GateJson,
        targets: Vec<usize>,
    },
}

fn default_mode() -> ModeJson {
    ModeJson::Xor
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepJson {
    pub op: OpJson,
    #[serde(default)]
    pub clean: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProgramJson {
    pub data: usize,
    pub ancilla: usize,
    pub cv_level: u32,
    /// Basis index of the data register; defaults to 0.
    #[serde(default)]
    pub data_init: usize,
    pub steps: Vec<StepJson>,
}

fn schema(file: &str, path: String, message: String) -> CliError {
    CliError::Schema {
        file: file.to_string(),
        path,
        message,
    }
}

fn builtin_table(name: &str) -> Option<TruthTable> {
    match name {
        "and" => Some(TruthTable::and()),
        "or" => Some(TruthTable::or()),
        "xor" => Some(TruthTable::xor()),
        _ => None,
    }
}

impl ProgramJson {
    /// Converts and validates. `file` labels error messages.
    pub fn into_program(self, file: &str) -> CliResult<Program> {
        let mut steps = Vec::with_capacity(self.steps.len());
        for (s, step) in self.steps.into_iter().enumerate() {
            let op = match step.op {
                OpJson::Function { table, mode, x, y } => {
                    let table = match table {
                        TableJson::Named(name) => builtin_table(&name).ok_or_else(|| {
                            schema(
                                file,
                                format!("steps[{s}].op.table"),
                                format!("unknown table {name:?} (expected and, or, xor or an inline table)"),
                            )
                        })?,
                        TableJson::Inline(t) => t.into_table().map_err(|e| {
                            schema(file, format!("steps[{s}].op.table"), e.to_string())
                        })?,
                    };
                    Operation::Function {
                        table,
                        mode: mode.into(),
                        x_qubits: x,
                        y_qubits: y,
                    }
                }
                OpJson::Gate { gate, targets } => Operation::Gate {
                    gate: gate.into(),
                    targets,
                },
            };
            steps.push(ProgramStep {
                op,
                clean: step.clean,
            });
        }
        let program = Program {
            data: self.data,
            ancilla: self.ancilla,
            cv_level: self.cv_level,
            data_init: self.data_init,
            steps,
        };
        program.validate().map_err(|e| match e {
            qhist_core::Error::Resource(_) => CliError::Core(e),
            other => CliError::Config(format!("{file}: {}", inner_message(&other))),
        })?;
        Ok(program)
    }
}

fn inner_message(e: &qhist_core::Error) -> String {
    match e {
        qhist_core::Error::Domain(m)
        | qhist_core::Error::Validation(m)
        | qhist_core::Error::Resource(m)
        | qhist_core::Error::Contract(m) => m.clone(),
    }
}
