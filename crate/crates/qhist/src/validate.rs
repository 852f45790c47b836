//! Seeded property suites behind the `validate` command.
//!
//! Suites run in a fixed order, each from its own random stream, and each
//! reports the worst error seen against an oracle computed independently of
//! the operator under test.

use qhist_core::dyadic::DyadicWave;
use qhist_core::hybrid::{tensor_oracle, FlipVariant, HybridState, Limits};
use qhist_core::processor::{
    resource_report, NamedGate, Operation, ProcessorState, Program, ProgramStep, StepMetrics,
};
use qhist_core::qubit::RegisterState;
use qhist_core::revcomp::{eval_forward, Mode, ReversiblePermutation, TruthTable};
use qhist_core::{Result, C64};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::{PI, SQRT_2};

use crate::grid::{GridHybrid, GridWave};
use crate::random;
use crate::scenario::{Backend, GridOptions, Scenario};

pub const TRIALS: usize = 100;

const ZERO: C64 = C64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub trials: usize,
    /// `None` when the suite aborted; see `error`.
    pub max_error: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub seed: u64,
    pub backend: &'static str,
    pub pass: bool,
    pub suites: Vec<SuiteReport>,
}

impl ValidationReport {
    pub fn failed(&self) -> usize {
        self.suites.iter().filter(|s| !s.pass).count()
    }
}

/// Trial count and worst error of one suite.
struct Outcome {
    trials: usize,
    max_error: f64,
}

type SuiteFn = fn(&mut ChaCha8Rng, &Context) -> Result<Outcome>;

struct Context {
    grid: Option<GridOptions>,
    max_level: u32,
}

struct Suite {
    name: &'static str,
    tolerance: f64,
    run: SuiteFn,
    grid_only: bool,
}

const SUITES: &[Suite] = &[
    Suite {
        name: "translate_contract",
        tolerance: 0.0,
        run: translate_contract,
        grid_only: false,
    },
    Suite {
        name: "flip_contract",
        tolerance: 0.0,
        run: flip_contract,
        grid_only: false,
    },
    Suite {
        name: "tft_contract",
        tolerance: 1e-15,
        run: tft_contract,
        grid_only: false,
    },
    Suite {
        name: "erase_contract",
        tolerance: 1e-15,
        run: erase_contract,
        grid_only: false,
    },
    Suite {
        name: "erase_norm",
        tolerance: 1e-12,
        run: erase_norm,
        grid_only: false,
    },
    Suite {
        name: "erase_sequence_oracle",
        tolerance: 1e-12,
        run: erase_sequence_oracle,
        grid_only: false,
    },
    Suite {
        name: "unitarity",
        tolerance: 1e-12,
        run: unitarity,
        grid_only: false,
    },
    Suite {
        name: "revcomp_involution",
        tolerance: 0.0,
        run: revcomp_involution,
        grid_only: false,
    },
    Suite {
        name: "processor_history",
        tolerance: 1e-12,
        run: processor_history,
        grid_only: false,
    },
    Suite {
        name: "processor_ancilla",
        tolerance: 1e-15,
        run: processor_ancilla,
        grid_only: false,
    },
    Suite {
        name: "processor_norm",
        tolerance: 1e-12,
        run: processor_norm,
        grid_only: false,
    },
    Suite {
        name: "processor_decoherence",
        tolerance: 1e-12,
        run: processor_decoherence,
        grid_only: false,
    },
    Suite {
        name: "resource_accounting",
        tolerance: 0.0,
        run: resource_accounting,
        grid_only: false,
    },
    Suite {
        name: "grid_cross_check",
        tolerance: 1e-9,
        run: grid_cross_check,
        grid_only: true,
    },
    Suite {
        name: "grid_spectral_shift",
        tolerance: 1e-9,
        run: grid_spectral_shift,
        grid_only: true,
    },
    Suite {
        name: "grid_generator",
        tolerance: 1e-4,
        run: grid_generator,
        grid_only: true,
    },
];

/// Names of the suites that run for `backend`, in report order.
pub fn suite_names(backend: Backend) -> Vec<&'static str> {
    SUITES
        .iter()
        .filter(|s| !s.grid_only || backend == Backend::Grid)
        .map(|s| s.name)
        .collect()
}

pub fn run(scenario: &Scenario, seed: u64) -> ValidationReport {
    let ctx = Context {
        grid: scenario.grid,
        max_level: scenario.max_level,
    };
    let suites: Vec<SuiteReport> = SUITES
        .iter()
        .enumerate()
        .filter(|(_, s)| !s.grid_only || scenario.backend == Backend::Grid)
        .map(|(i, s)| {
            let tolerance = scenario.tolerance_for(s.name, s.tolerance);
            let mut rng = random::suite_rng(seed, i as u64);
            match (s.run)(&mut rng, &ctx) {
                Ok(o) => SuiteReport {
                    suite: s.name,
                    trials: o.trials,
                    max_error: Some(o.max_error),
                    tolerance,
                    pass: o.max_error <= tolerance,
                    error: None,
                },
                Err(e) => SuiteReport {
                    suite: s.name,
                    trials: 0,
                    max_error: None,
                    tolerance,
                    pass: false,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    ValidationReport {
        seed,
        backend: match scenario.backend {
            Backend::Dyadic => "dyadic",
            Backend::Grid => "grid",
        },
        pass: suites.iter().all(|s| s.pass),
        suites,
    }
}

/// Error returned for a structural mismatch (wrong level, wrong count):
/// fails every finite tolerance.
const MISMATCH: f64 = f64::INFINITY;

/// Largest `|out.row(i)(x) − expected(i, x)|` over the midpoints of level
/// `level` cells in `[lo, hi)` (cell indices).
fn rows_error<F>(out: &HybridState, level: u32, lo: i64, hi: i64, expected: F) -> f64
where
    F: Fn(usize, f64) -> C64,
{
    let w = qhist_core::dyadic::cell_width(level);
    let mut worst: f64 = 0.0;
    for i in 0..out.dim() {
        let row = out.row(i);
        for k in lo..hi {
            let x = (k as f64 + 0.5) * w;
            worst = worst.max((row.value_at(x) - expected(i, x)).norm());
        }
    }
    worst
}

fn span(h: &HybridState) -> (i64, i64) {
    (h.offset(), h.offset() + h.cells() as i64)
}

fn translate_contract(rng: &mut ChaCha8Rng, _: &Context) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for _ in 0..TRIALS {
        let n = rng.gen_range(1..=4);
        let level = rng.gen_range(0..=6);
        let q = rng.gen_range(0..n);
        let t: i64 = rng.gen_range(-3..=3);
        let h = random::hybrid(rng, n, level, -2, 3)?;
        let out = h.cond_translate(q, t)?;
        let (lo, hi) = span(&h);
        let rows: Vec<DyadicWave> = (0..h.dim()).map(|i| h.row(i)).collect();
        let err = rows_error(
            &out,
            level,
            lo - 3 * (1 << level),
            hi + 3 * (1 << level),
            |i, x| {
                let src = if i & 1 << q != 0 { x - t as f64 } else { x };
                rows[i].value_at(src)
            },
        );
        worst = worst.max(err);
    }
    let unit = DyadicWave::indicator_unit(0)?;
    let one = HybridState::lift(&RegisterState::basis_state(1, 1)?, &unit)?.cond_translate(0, 1)?;
    if one.row(1).support() != (1.0, 2.0) {
        worst = MISMATCH;
    }
    Ok(Outcome {
        trials: TRIALS + 1,
        max_error: worst,
    })
}

fn flip_contract(rng: &mut ChaCha8Rng, _: &Context) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for _ in 0..TRIALS {
        let n = rng.gen_range(1..=4);
        let level = rng.gen_range(0..=6);
        let q = rng.gen_range(0..n);
        let h = random::hybrid(rng, n, level, -2, 3)?;
        let out = h.cond_flip(q, FlipVariant::OutsideUnit)?;
        let (lo, hi) = span(&h);
        let rows: Vec<DyadicWave> = (0..h.dim()).map(|i| h.row(i)).collect();
        worst = worst.max(rows_error(&out, level, lo, hi, |i, x| {
            let inside = (0.0..1.0).contains(&x);
            rows[if inside { i } else { i ^ 1 << q }].value_at(x)
        }));
        for v in [FlipVariant::OutsideUnit, FlipVariant::InsideOneTwo] {
            if h.cond_flip(q, v)?.cond_flip(q, v)? != h {
                worst = MISMATCH;
            }
        }
        // variants agree on states supported in [0, 2)
        let g = random::hybrid(rng, n, level, 0, 2)?;
        let a = g.cond_flip(q, FlipVariant::OutsideUnit)?;
        let b = g.cond_flip(q, FlipVariant::InsideOneTwo)?;
        if a != b {
            worst = MISMATCH;
        }
    }
    Ok(Outcome {
        trials: TRIALS,
        max_error: worst,
    })
}

fn tft_contract(rng: &mut ChaCha8Rng, _: &Context) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for _ in 0..TRIALS {
        let (alpha, beta) = random::pair(rng);
        let level = rng.gen_range(0..=6);
        let psi = random::wave_in(rng, level, 0, 1)?;
        let h = HybridState::lift(&RegisterState::qubit(alpha, beta)?, &psi)?;
        let out = h.tft(0)?;
        let cells = 1i64 << level;
        worst = worst.max(rows_error(&out, level, -cells, 3 * cells, |i, x| {
            if i == 0 {
                alpha * psi.value_at(x) + beta * psi.value_at(x - 1.0)
            } else {
                ZERO
            }
        }));
    }
    Ok(Outcome {
        trials: TRIALS,
        max_error: worst,
    })
}

/// `√2(αψ(2x) + βψ(2x − 1))` built cell by cell at level `ℓ + 1`.
fn erase_oracle(alpha: C64, beta: C64, psi: &DyadicWave) -> Result<DyadicWave> {
    let level = psi.level();
    let n = 1usize << level;
    let mut full = vec![ZERO; n];
    for (k, &c) in psi.coeffs().iter().enumerate() {
        full[(psi.offset() as usize) + k] = c;
    }
    let coeffs = full
        .iter()
        .map(|&c| alpha * c * SQRT_2)
        .chain(full.iter().map(|&c| beta * c * SQRT_2))
        .collect();
    DyadicWave::new(level + 1, 0, coeffs)
}

fn erase_contract(rng: &mut ChaCha8Rng, _: &Context) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for _ in 0..TRIALS {
        let (alpha, beta) = random::pair(rng);
        let level = rng.gen_range(0..=6);
        let psi = random::wave_in(rng, level, 0, 1)?;
        let psi = psi.scale(C64::new(1.0 / psi.norm2().sqrt(), 0.0));
        let out = HybridState::lift(&RegisterState::qubit(alpha, beta)?, &psi)?.erase(0)?;
        if out.level() != level + 1 {
            worst = MISMATCH;
        }
        worst = worst
            .max(out.row(0).max_abs_diff(&erase_oracle(alpha, beta, &psi)?)?)
            .max(out.weight_where(1));
    }
    Ok(Outcome {
        trials: TRIALS,
        max_error: worst,
    })
}

fn erase_norm(rng: &mut ChaCha8Rng, _: &Context) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for _ in 0..TRIALS {
        let n = rng.gen_range(1..=4);
        let level = rng.gen_range(0..=6);
        let q = rng.gen_range(0..n);
        let h = random::hybrid(rng, n, level, 0, 1)?;
        worst = worst.max((h.erase(q)?.norm2() - 1.0).abs());
    }
    Ok(Outcome {
        trials: TRIALS,
        max_error: worst,
    })
}

fn product_register(pairs: &[(C64, C64)]) -> Result<RegisterState> {
    let mut reg = RegisterState::new(0, vec![C64::new(1.0, 0.0)])?;
    for &(a, b) in pairs {
        reg = reg.tensor(&RegisterState::qubit(a, b)?)?;
    }
    Ok(reg)
}

fn erase_sequence_oracle(rng: &mut ChaCha8Rng, ctx: &Context) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let trials = 20;
    for _ in 0..trials {
        let n = rng.gen_range(0..=12);
        let pairs: Vec<(C64, C64)> = (0..n).map(|_| random::pair(rng)).collect();
        let base = DyadicWave::indicator_unit(0)?;
        let limits = Limits {
            max_level: ctx.max_level,
            ..Limits::default()
        };
        let h = HybridState::lift(&product_register(&pairs)?, &base)?.with_limits(limits)?;
        let order: Vec<usize> = (0..n).collect();
        let (out, steps) = h.erase_sequence(&order)?;
        if out.level() != n as u32 || steps.len() != n {
            worst = MISMATCH;
        }
        let expected = tensor_oracle(&pairs, &base)?;
        worst = worst.max(out.row(0).max_abs_diff(&expected)?);
        worst = worst.max(out.weight_where((1 << n) - 1));
    }
    Ok(Outcome {
        trials,
        max_error: worst,
    })
}

fn unitarity(rng: &mut ChaCha8Rng, _: &Context) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for _ in 0..TRIALS {
        let n = rng.gen_range(1..=4);
        let level = rng.gen_range(0..=6);
        let q = rng.gen_range(0..n);
        let t = rng.gen_range(-3..=3);
        let h = random::hybrid(rng, n, level, -2, 3)?;
        let unit = random::hybrid(rng, n, level, 0, 1)?;
        let outs = [
            h.cond_translate(q, t)?,
            h.cond_flip(q, FlipVariant::OutsideUnit)?,
            h.cond_flip(q, FlipVariant::InsideOneTwo)?,
            h.squeeze_all()?,
            h.tft(q)?,
            unit.erase(q)?,
        ];
        for (out, input) in outs.iter().zip([&h, &h, &h, &h, &h, &unit]) {
            worst = worst.max((out.norm2() - input.norm2()).abs());
        }
    }
    Ok(Outcome {
        trials: TRIALS,
        max_error: worst,
    })
}

fn revcomp_involution(rng: &mut ChaCha8Rng, _: &Context) -> Result<Outcome> {
    let mut violations = 0usize;
    let mut trials = 0;
    for total in 2..=12u32 {
        for n_in in 1..total {
            let m_out = total - n_in;
            let table = TruthTable::from_fn(n_in, m_out, |_| rng.gen_range(0..1u64 << m_out))?;
            for mode in [Mode::Xor, Mode::ModSub] {
                trials += 1;
                let p = ReversiblePermutation::build(&table, mode)?;
                for x in 0..1u64 << n_in {
                    for y in 0..1u64 << m_out {
                        let (x1, y1) = p.apply(x, y);
                        if p.apply(x1, y1) != (x, y)
                            || (x1, y1) != eval_forward(&table, mode, x, y)?
                        {
                            violations += 1;
                        }
                    }
                    if p.apply(x, 0).1 != table.outputs()[x as usize] {
                        violations += 1;
                    }
                }
            }
        }
    }
    Ok(Outcome {
        trials,
        max_error: violations as f64,
    })
}

fn and_step() -> ProgramStep {
    ProgramStep {
        op: Operation::Function {
            table: TruthTable::and(),
            mode: Mode::Xor,
            x_qubits: vec![0, 1],
            y_qubits: vec![2],
        },
        clean: vec![2],
    }
}

fn and_program(data_init: usize, steps: usize) -> Program {
    Program {
        data: 2,
        ancilla: 1,
        cv_level: 0,
        data_init,
        steps: vec![and_step(); steps],
    }
}

/// Basis data run through `k` AND steps: the CV must equal the oracle for
/// the recorded bit history.
fn processor_history(rng: &mut ChaCha8Rng, ctx: &Context) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let trials = 20;
    for _ in 0..trials {
        let d = rng.gen_range(0..4usize);
        let k = rng.gen_range(0..=10);
        let program = and_program(d, k);
        let limits = Limits {
            max_level: ctx.max_level,
            ..Limits::default()
        };
        let (end, trace) = program.initial_state(limits)?.run_program(&program.steps)?;
        let bit = (d & 1) & (d >> 1);
        let history = vec![
            if bit == 1 {
                (ZERO, C64::new(1.0, 0.0))
            } else {
                (C64::new(1.0, 0.0), ZERO)
            };
            k
        ];
        let expected = tensor_oracle(&history, &DyadicWave::indicator_unit(0)?)?;
        let got = end
            .hybrid()
            .project_qubits(&RegisterState::basis_state(3, d)?)?;
        worst = worst.max(got.max_abs_diff(&expected)?);
        if end.hybrid().level() != k as u32
            || trace
                .iter()
                .enumerate()
                .any(|(s, m)| m.cv_level != s as u32 + 1)
        {
            worst = MISMATCH;
        }
    }
    Ok(Outcome {
        trials,
        max_error: worst,
    })
}

fn random_and_traces(
    rng: &mut ChaCha8Rng,
    ctx: &Context,
    trials: usize,
) -> Result<Vec<StepMetrics>> {
    let mut all = Vec::new();
    for _ in 0..trials {
        let amps: Vec<C64> = (0..4).map(|_| random::amp(rng)).collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let data = RegisterState::new(2, amps.iter().map(|a| a / norm).collect())?;
        let limits = Limits {
            max_level: ctx.max_level,
            ..Limits::default()
        };
        let state = ProcessorState::init(2, 1, &data, 0, limits)?;
        all.extend(state.run_program(&vec![and_step(); 10])?.1);
    }
    Ok(all)
}

/// Superposed data through 10 AND steps: worst ancilla residual.
fn processor_ancilla(rng: &mut ChaCha8Rng, ctx: &Context) -> Result<Outcome> {
    let trials = 20;
    let trace = random_and_traces(rng, ctx, trials)?;
    let worst = trace.iter().map(|m| m.ancilla_residual).fold(0.0, f64::max);
    Ok(Outcome {
        trials,
        max_error: worst,
    })
}

/// Superposed data through 10 AND steps: worst norm drift.
fn processor_norm(rng: &mut ChaCha8Rng, ctx: &Context) -> Result<Outcome> {
    let trials = 20;
    let trace = random_and_traces(rng, ctx, trials)?;
    let worst = trace
        .iter()
        .map(|m| (m.norm2 - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(Outcome {
        trials,
        max_error: worst,
    })
}

/// `|+⟩` data copied into the ancilla and cleaned: the data register ends
/// maximally mixed.
fn processor_decoherence(_: &mut ChaCha8Rng, _: &Context) -> Result<Outcome> {
    let steps = vec![
        ProgramStep {
            op: Operation::Gate {
                gate: NamedGate::H,
                targets: vec![0],
            },
            clean: vec![],
        },
        ProgramStep {
            op: Operation::Gate {
                gate: NamedGate::Cnot,
                targets: vec![0, 1],
            },
            clean: vec![1],
        },
    ];
    let program = Program {
        data: 1,
        ancilla: 1,
        cv_level: 0,
        data_init: 0,
        steps,
    };
    let (_, trace) = program
        .initial_state(Limits::default())?
        .run_program(&program.steps)?;
    let last = trace.last().map(|m| m.data_purity).unwrap_or(f64::NAN);
    Ok(Outcome {
        trials: 1,
        max_error: (last - 0.5).abs(),
    })
}

fn resource_accounting(rng: &mut ChaCha8Rng, _: &Context) -> Result<Outcome> {
    let mut mismatches = 0usize;
    for _ in 0..TRIALS {
        let anc = rng.gen_range(1..=3usize);
        let level = rng.gen_range(0..=4u32);
        let steps: Vec<ProgramStep> = (0..rng.gen_range(0..=12))
            .map(|_| {
                let count = rng.gen_range(0..=anc);
                ProgramStep {
                    op: Operation::Gate {
                        gate: NamedGate::X,
                        targets: vec![0],
                    },
                    clean: (1..=count).collect(),
                }
            })
            .collect();
        let mut total = 0;
        let mut pool = 0;
        for s in &steps {
            total += s.clean.len();
            pool = pool.max(s.clean.len());
        }
        let r = resource_report(&steps, level);
        if r.plain_reversible_ancillas != total
            || r.cv_scheme_qubits != pool
            || r.cv_final_level != level as u64 + total as u64
        {
            mismatches += 1;
        }
    }
    Ok(Outcome {
        trials: TRIALS,
        max_error: mismatches as f64,
    })
}

fn grid_of(ctx: &Context) -> Result<GridOptions> {
    ctx.grid
        .ok_or_else(|| qhist_core::Error::Validation("grid options missing".into()))
}

/// Full erasure pipeline on both backends from the same piecewise-constant
/// input.
fn grid_cross_check(rng: &mut ChaCha8Rng, ctx: &Context) -> Result<Outcome> {
    let g = grid_of(ctx)?;
    let mut worst: f64 = 0.0;
    let trials = 10;
    for _ in 0..trials {
        let n = rng.gen_range(1..=2);
        let level = rng.gen_range(0..=3);
        let amps: Vec<C64> = (0..1 << n).map(|_| random::amp(rng)).collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let reg = RegisterState::new(n, amps.iter().map(|a| a / norm).collect())?;
        let psi = random::wave_in(rng, level, 0, 1)?;
        let psi = psi.scale(C64::new(1.0 / psi.norm2().sqrt(), 0.0));
        let mut exact = HybridState::lift(&reg, &psi)?;
        let mut grid = GridHybrid::lift(
            &reg,
            &GridWave::from_dyadic(&psi, g.x_min, g.h, g.n)?,
            g.translate,
        );
        for q in 0..n {
            exact = exact.erase(q)?;
            grid = grid.erase(q)?;
        }
        worst = worst.max(grid.l2_distance_to(&exact)?);
    }
    Ok(Outcome {
        trials,
        max_error: worst,
    })
}

fn grid_spectral_shift(rng: &mut ChaCha8Rng, ctx: &Context) -> Result<Outcome> {
    let g = grid_of(ctx)?;
    let mut worst: f64 = 0.0;
    let trials = 10;
    for _ in 0..trials {
        let level = rng.gen_range(0..=4);
        let psi = random::wave_in(rng, level, 0, 1)?;
        let w = GridWave::from_dyadic(&psi, g.x_min, g.h, g.n)?;
        worst = worst.max(
            w.translate_spectral(1.0)
                .l2_distance(&w.translate_shift(1)?),
        );
    }
    Ok(Outcome {
        trials,
        max_error: worst,
    })
}

/// Relative L² error of the generator form of the squeeze on a unit
/// Gaussian (fixed 512-point window `[−12, 12)`).
fn grid_generator(_: &mut ChaCha8Rng, _: &Context) -> Result<Outcome> {
    let (x_min, n) = (-12.0, 512);
    let h = 24.0 / n as f64;
    let norm = PI.powf(-0.25);
    let g = GridWave::sample_function(|x| C64::new(norm * (-x * x / 2.0).exp(), 0.0), x_min, h, n)?;
    let analytic = GridWave::sample_function(
        |x| C64::new(SQRT_2 * norm * (-2.0 * x * x).exp(), 0.0),
        x_min,
        h,
        n,
    )?;
    let out = g.dilation_generator();
    Ok(Outcome {
        trials: 1,
        max_error: out.l2_distance(&analytic) / analytic.norm2().sqrt(),
    })
}
