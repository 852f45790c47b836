//! A toy programmable processor with a constant ancilla pool.
//!
//! Each step applies a reversible operation (a lifted truth table or a
//! named gate) to data and ancilla qubits, then erases the listed ancillas
//! into the shared CV history mode so they can be reused by the next step.

use alloc::{format, string::String, vec::Vec};

use crate::dyadic::DyadicWave;
use crate::hybrid::{HybridState, Limits};
use crate::qubit::{BasisPermutation, RegisterState, Unitary2, MAX_QUBITS};
use crate::revcomp::{Mode, ReversiblePermutation, TruthTable};
use crate::{Error, Result};

/// Residual weight above which a cleaned ancilla counts as dirty.
pub const CLEAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedGate {
    X,
    Y,
    Z,
    H,
    S,
    T,
    /// targets `[control, target]`
    Cnot,
    Swap,
    /// targets `[control, control, target]`
    Toffoli,
}

impl NamedGate {
    pub fn arity(self) -> usize {
        match self {
            NamedGate::Cnot | NamedGate::Swap => 2,
            NamedGate::Toffoli => 3,
            _ => 1,
        }
    }

    fn single(self) -> Option<Unitary2> {
        Some(match self {
            NamedGate::X => Unitary2::x(),
            NamedGate::Y => Unitary2::y(),
            NamedGate::Z => Unitary2::z(),
            NamedGate::H => Unitary2::h(),
            NamedGate::S => Unitary2::s(),
            NamedGate::T => Unitary2::t(),
            _ => return None,
        })
    }

    fn permutation(self, targets: &[usize], n: usize) -> BasisPermutation {
        let map = (0..1usize << n)
            .map(|i| match (self, targets) {
                (NamedGate::Cnot, &[c, t]) => i ^ ((i >> c & 1) << t),
                (NamedGate::Toffoli, &[c1, c2, t]) => i ^ ((i >> c1 & i >> c2 & 1) << t),
                (NamedGate::Swap, &[a, b]) => {
                    let diff = (i >> a ^ i >> b) & 1;
                    i ^ (diff << a | diff << b)
                }
                _ => i,
            })
            .collect();
        BasisPermutation::new(map).expect("named gates are permutations")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Operation {
    /// The reversible lift of `table`, reading `x_qubits` and updating
    /// `y_qubits`.
    Function {
        table: TruthTable,
        mode: Mode,
        x_qubits: Vec<usize>,
        y_qubits: Vec<usize>,
    },
    Gate {
        gate: NamedGate,
        targets: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProgramStep {
    pub op: Operation,
    /// Ancillas erased after the operation, in ascending order.
    pub clean: Vec<usize>,
}

/// Qubits `0..data` hold data, `data..data + ancilla` are ancillas.
#[derive(Debug, Clone, PartialEq)]
pub struct Program {
    pub data: usize,
    pub ancilla: usize,
    pub cv_level: u32,
    /// Basis index the data register starts in.
    pub data_init: usize,
    pub steps: Vec<ProgramStep>,
}

impl Program {
    pub fn n_qubits(&self) -> usize {
        self.data + self.ancilla
    }

    /// Checks qubit indices, gate arities and that only ancillas are
    /// cleaned. Messages name the offending field, e.g. `steps[2].clean[0]`.
    pub fn validate(&self) -> Result<()> {
        let n = self.n_qubits();
        if n == 0 {
            return Err(Error::Validation("program has no qubits".into()));
        }
        if n > MAX_QUBITS {
            return Err(Error::Resource(format!("{n} qubits exceeds {MAX_QUBITS}")));
        }
        if self.data_init >= 1 << self.data {
            return Err(Error::Validation(format!(
                "data_init: basis index {} out of range for {} data qubits",
                self.data_init, self.data
            )));
        }
        for (s, step) in self.steps.iter().enumerate() {
            step.validate(s, self.data, n)?;
        }
        Ok(())
    }

    pub fn initial_state(&self, limits: Limits) -> Result<ProcessorState> {
        self.validate()?;
        let data = RegisterState::basis_state(self.data, self.data_init)?;
        ProcessorState::init(self.data, self.ancilla, &data, self.cv_level, limits)
    }

    pub fn resource_report(&self) -> ResourceReport {
        resource_report(&self.steps, self.cv_level)
    }
}

impl ProgramStep {
    fn validate(&self, s: usize, data: usize, n: usize) -> Result<()> {
        let field = |name: &str, i: usize, msg: String| {
            Error::Validation(format!("steps[{s}].{name}[{i}]: {msg}"))
        };
        let check = |name: &str, qs: &[usize], used: &mut usize| -> Result<()> {
            for (i, &q) in qs.iter().enumerate() {
                if q >= n {
                    return Err(field(
                        name,
                        i,
                        format!("qubit {q} out of range for {n} qubits"),
                    ));
                }
                if *used & 1 << q != 0 {
                    return Err(field(name, i, format!("qubit {q} used twice")));
                }
                *used |= 1 << q;
            }
            Ok(())
        };
        let mut used = 0;
        match &self.op {
            Operation::Function {
                table,
                x_qubits,
                y_qubits,
                ..
            } => {
                if x_qubits.len() != table.n_in() as usize
                    || y_qubits.len() != table.m_out() as usize
                {
                    return Err(Error::Validation(format!(
                        "steps[{s}].op: table needs {} x and {} y qubits, got {} and {}",
                        table.n_in(),
                        table.m_out(),
                        x_qubits.len(),
                        y_qubits.len()
                    )));
                }
                check("op.x", x_qubits, &mut used)?;
                check("op.y", y_qubits, &mut used)?;
            }
            Operation::Gate { gate, targets } => {
                if targets.len() != gate.arity() {
                    return Err(Error::Validation(format!(
                        "steps[{s}].op.targets: {gate:?} takes {} targets, got {}",
                        gate.arity(),
                        targets.len()
                    )));
                }
                check("op.targets", targets, &mut used)?;
            }
        }
        let mut cleaned = 0;
        check("clean", &self.clean, &mut cleaned)?;
        if let Some(i) = self.clean.iter().position(|&q| q < data) {
            return Err(field(
                "clean",
                i,
                format!(
                    "qubit {} is a data qubit and cannot be erased",
                    self.clean[i]
                ),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepMetrics {
    /// 1-based index of the step these metrics follow; 0 for the initial state.
    pub step: usize,
    /// Total weight on rows where any ancilla is 1.
    pub ancilla_residual: f64,
    pub data_purity: f64,
    pub cv_level: u32,
    pub joint_cells: usize,
    pub norm2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProcessorState {
    hybrid: HybridState,
    data_count: usize,
    anc_count: usize,
    step_index: usize,
    erasures: usize,
    initial_level: u32,
}

impl ProcessorState {
    /// `data ⊗ |0…0⟩_anc ⊗ 1_[0,1)` at CV level `cv_level`.
    pub fn init(
        n_data: usize,
        n_anc: usize,
        data: &RegisterState,
        cv_level: u32,
        limits: Limits,
    ) -> Result<Self> {
        if data.n_qubits() != n_data {
            return Err(Error::Validation(format!(
                "data register has {} qubits, expected {n_data}",
                data.n_qubits()
            )));
        }
        if cv_level > limits.max_level {
            return Err(Error::Resource(format!(
                "initial CV level {cv_level} exceeds the limit of {}",
                limits.max_level
            )));
        }
        let anc = RegisterState::basis_state(n_anc, 0)?;
        let reg = data.tensor(&anc)?;
        let hybrid =
            HybridState::lift(&reg, &DyadicWave::indicator_unit(cv_level)?)?.with_limits(limits)?;
        Ok(Self {
            hybrid,
            data_count: n_data,
            anc_count: n_anc,
            step_index: 0,
            erasures: 0,
            initial_level: cv_level,
        })
    }

    pub fn hybrid(&self) -> &HybridState {
        &self.hybrid
    }

    pub fn data_count(&self) -> usize {
        self.data_count
    }

    pub fn anc_count(&self) -> usize {
        self.anc_count
    }

    pub fn step_index(&self) -> usize {
        self.step_index
    }

    /// Erasures performed so far; the CV level is the initial level plus
    /// this count.
    pub fn erasures(&self) -> usize {
        self.erasures
    }

    pub fn initial_level(&self) -> u32 {
        self.initial_level
    }

    fn ancilla_mask(&self) -> usize {
        ((1 << self.anc_count) - 1) << self.data_count
    }

    pub fn metrics(&self) -> Result<StepMetrics> {
        let data_purity = if self.data_count == 0 {
            1.0
        } else {
            let keep: Vec<usize> = (0..self.data_count).collect();
            self.hybrid.reduced_density(&keep)?.purity()
        };
        Ok(StepMetrics {
            step: self.step_index,
            ancilla_residual: self.hybrid.weight_where(self.ancilla_mask()),
            data_purity,
            cv_level: self.hybrid.level(),
            joint_cells: self.hybrid.joint_cells(),
            norm2: self.hybrid.norm2(),
        })
    }

    /// Applies the step's operation, then erases its `clean` list in
    /// ascending order.
    pub fn run_step(&self, step: &ProgramStep) -> Result<(Self, StepMetrics)> {
        let n = self.data_count + self.anc_count;
        step.validate(self.step_index, self.data_count, n)?;
        let mut hybrid = match &step.op {
            Operation::Function {
                table,
                mode,
                x_qubits,
                y_qubits,
            } => {
                let perm = ReversiblePermutation::build(table, *mode)?
                    .as_register_permutation(x_qubits, y_qubits, n)?;
                self.hybrid.apply_permutation(&perm)?
            }
            Operation::Gate { gate, targets } => match gate.single() {
                Some(u) => self.hybrid.apply_single_qubit(targets[0], &u)?,
                None => self
                    .hybrid
                    .apply_permutation(&gate.permutation(targets, n))?,
            },
        };
        let mut clean = step.clean.clone();
        clean.sort_unstable();
        for &q in &clean {
            hybrid = hybrid.erase(q)?;
            let residual = hybrid.weight_where(1 << q);
            if residual > CLEAN_TOL {
                return Err(Error::Contract(format!(
                    "ancilla {q} kept weight {residual:e} after erasure"
                )));
            }
        }
        let next = Self {
            hybrid,
            step_index: self.step_index + 1,
            erasures: self.erasures + clean.len(),
            ..self.clone()
        };
        let metrics = next.metrics()?;
        Ok((next, metrics))
    }

    pub fn run_program(&self, steps: &[ProgramStep]) -> Result<(Self, Vec<StepMetrics>)> {
        let mut state = self.clone();
        let mut trace = Vec::with_capacity(steps.len());
        for step in steps {
            let (next, m) = state.run_step(step)?;
            state = next;
            trace.push(m);
        }
        Ok((state, trace))
    }
}

/// Ancilla cost of a program under the plain reversible design (a fresh
/// zeroed register for every clean) versus the history-mode design.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResourceReport {
    /// `Σ_steps |clean|`: grows linearly with the number of steps.
    pub plain_reversible_ancillas: usize,
    /// Largest number of ancillas cleaned in one step; constant in the
    /// number of steps.
    pub cv_scheme_qubits: usize,
    /// `ℓ₀ + Σ_steps |clean|`.
    pub cv_final_level: u64,
    /// `2^(cv_scheme_qubits + cv_final_level)`, the dense amplitude count of
    /// the ancilla pool joined with the CV on `[0, 1)`; saturates at
    /// `u64::MAX`.
    pub joint_cells: u64,
}

pub fn resource_report(steps: &[ProgramStep], cv_level: u32) -> ResourceReport {
    let total: usize = steps.iter().map(|s| s.clean.len()).sum();
    let pool = steps.iter().map(|s| s.clean.len()).max().unwrap_or(0);
    let level = cv_level as u64 + total as u64;
    let bits = pool as u64 + level;
    ResourceReport {
        plain_reversible_ancillas: total,
        cv_scheme_qubits: pool,
        cv_final_level: level,
        joint_cells: if bits < 64 { 1u64 << bits } else { u64::MAX },
    }
}
