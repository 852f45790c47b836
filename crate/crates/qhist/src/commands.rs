//! The four commands. Each writes its files under `out_dir` and a short
//! summary to `stdout`.

use std::io::Write;
use std::path::Path;

use qhist_core::dyadic::DyadicWave;
use qhist_core::hybrid::{HybridState, Limits};
use qhist_core::qubit::RegisterState;
use qhist_core::C64;

use crate::error::{CliError, CliResult};
use crate::formats::{grid_csv, metrics_jsonl, to_json, wave_csv, ResourceJson, TraceEntry};
use crate::grid::{GridHybrid, GridWave};
use crate::scenario::{Backend, Kind, Scenario};
use crate::validate;

fn write_file(dir: &Path, name: &str, contents: &str) -> CliResult<()> {
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|source| CliError::Write { path, source })
}

fn prepare_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Write {
        path: dir.to_path_buf(),
        source,
    })
}

fn say(stdout: &mut dyn Write, text: &str) -> CliResult<()> {
    stdout
        .write_all(text.as_bytes())
        .map_err(|source| CliError::Write {
            path: "<stdout>".into(),
            source,
        })
}

fn limits(s: &Scenario) -> Limits {
    Limits {
        max_level: s.max_level,
        ..Limits::default()
    }
}

fn wave_name(step: usize) -> String {
    format!("wave_{step:03}.csv")
}

/// `|0…0⟩` on the first `erased` qubits, the prepared pairs on the rest.
/// Projecting onto it yields the CV wave times `⟨reg|reg⟩`, which
/// [`cv_scale`] divides out.
fn after_erasures(pairs: &[(C64, C64)], erased: usize) -> CliResult<RegisterState> {
    let one = C64::new(1.0, 0.0);
    let mut reg = RegisterState::new(0, vec![one])?;
    for (i, &(a, b)) in pairs.iter().enumerate() {
        let q = if i < erased {
            RegisterState::basis_state(1, 0)?
        } else {
            RegisterState::qubit(a, b)?
        };
        reg = reg.tensor(&q)?;
    }
    Ok(reg)
}

fn cv_scale(reg: &RegisterState) -> C64 {
    C64::new(1.0 / reg.norm2(), 0.0)
}

/// Erases the scenario's qubits one by one from `1_[0,1)` at `cv_level`,
/// dumping the CV wave before the first step and after every step.
pub fn erase_demo(s: &Scenario, out_dir: &Path, stdout: &mut dyn Write) -> CliResult<()> {
    s.expect_kind(Kind::EraseDemo)?;
    prepare_dir(out_dir)?;
    let base = DyadicWave::indicator_unit(s.cv_level)?;
    let initial = after_erasures(&s.pairs, 0)?;
    let n = s.pairs.len();
    let mut trace = Vec::with_capacity(n + 1);
    match s.backend {
        Backend::Dyadic => {
            let mut h = HybridState::lift(&initial, &base)?.with_limits(limits(s))?;
            let w = h.project_qubits(&initial)?.scale(cv_scale(&initial));
            write_file(out_dir, &wave_name(0), &wave_csv(&w))?;
            trace.push(TraceEntry {
                step: 0,
                qubit: None,
                level: h.level(),
                norm2: h.norm2(),
                ancilla_residual: 0.0,
                wave: wave_name(0),
            });
            for q in 0..n {
                h = h.erase(q)?;
                let reg = after_erasures(&s.pairs, q + 1)?;
                let w = h.project_qubits(&reg)?.scale(cv_scale(&reg));
                write_file(out_dir, &wave_name(q + 1), &wave_csv(&w))?;
                trace.push(TraceEntry {
                    step: q + 1,
                    qubit: Some(q),
                    level: h.level(),
                    norm2: h.norm2(),
                    ancilla_residual: h.weight_where(1 << q),
                    wave: wave_name(q + 1),
                });
            }
        }
        Backend::Grid => {
            let g = s.grid.expect("grid backend carries grid options");
            let start = GridWave::from_dyadic(&base, g.x_min, g.h, g.n)?;
            let mut h = GridHybrid::lift(&initial, &start, g.translate);
            let w = h.project_qubits(&initial)?.scale(cv_scale(&initial));
            write_file(out_dir, &wave_name(0), &grid_csv(&w))?;
            trace.push(TraceEntry {
                step: 0,
                qubit: None,
                level: s.cv_level,
                norm2: h.norm2(),
                ancilla_residual: 0.0,
                wave: wave_name(0),
            });
            for q in 0..n {
                let level = s.cv_level + q as u32 + 1;
                if level > s.max_level {
                    return Err(qhist_core::Error::Resource(format!(
                        "erasure {} would reach level {level}, above the limit of {}",
                        q + 1,
                        s.max_level
                    ))
                    .into());
                }
                h = h.erase(q)?;
                let reg = after_erasures(&s.pairs, q + 1)?;
                let w = h.project_qubits(&reg)?.scale(cv_scale(&reg));
                write_file(out_dir, &wave_name(q + 1), &grid_csv(&w))?;
                trace.push(TraceEntry {
                    step: q + 1,
                    qubit: Some(q),
                    level,
                    norm2: h.norm2(),
                    ancilla_residual: h.weight_where(1 << q),
                    wave: wave_name(q + 1),
                });
            }
        }
    }
    write_file(out_dir, "trace.json", &to_json(&trace))?;
    say(
        stdout,
        &format!(
            "erased {n} qubit(s); wrote {} wave dump(s) and trace.json\n",
            n + 1
        ),
    )
}

/// Runs the program and writes `metrics.jsonl` plus one CV dump per data
/// basis state with nonzero weight, for the initial and final states.
pub fn processor(s: &Scenario, out_dir: &Path, stdout: &mut dyn Write) -> CliResult<()> {
    s.expect_kind(Kind::Processor)?;
    if s.backend != Backend::Dyadic {
        return Err(CliError::Config(
            "the processor command runs on the dyadic backend only".into(),
        ));
    }
    let program = s.require_program()?;
    prepare_dir(out_dir)?;
    let state = program.initial_state(limits(s))?;
    let (end, trace) = state.run_program(&program.steps)?;
    write_file(out_dir, "metrics.jsonl", &metrics_jsonl(&trace))?;
    let n = program.n_qubits();
    for (label, h) in [("initial", state.hybrid()), ("final", end.hybrid())] {
        for d in 0..1usize << program.data {
            let w = h.project_qubits(&RegisterState::basis_state(n, d)?)?;
            if !w.is_zero() {
                write_file(out_dir, &format!("{label}_data{d}.csv"), &wave_csv(&w))?;
            }
        }
    }
    let worst = trace.iter().map(|m| m.ancilla_residual).fold(0.0, f64::max);
    say(
        stdout,
        &format!(
            "ran {} step(s); cv_level {}; max ancilla residual {}\n",
            trace.len(),
            end.hybrid().level(),
            worst
        ),
    )
}

pub fn resource(s: &Scenario, out_dir: &Path, stdout: &mut dyn Write) -> CliResult<()> {
    s.expect_kind(Kind::Resource)?;
    let program = s.require_program()?;
    prepare_dir(out_dir)?;
    let report = ResourceJson::from(program.resource_report());
    let json = serde_json::to_string(&report).expect("report serializes") + "\n";
    write_file(out_dir, "resource.json", &json)?;
    say(stdout, &json)
}

/// Runs every suite and writes `validate.json`. Fails with
/// [`CliError::SuitesFailed`] after writing the report if any suite failed.
pub fn validate(s: &Scenario, out_dir: &Path, stdout: &mut dyn Write) -> CliResult<()> {
    s.expect_kind(Kind::Validate)?;
    let seed = s.seed.ok_or_else(|| {
        CliError::Config("validate needs a seed (scenario \"seed\" or --seed)".into())
    })?;
    prepare_dir(out_dir)?;
    let report = validate::run(s, seed);
    let json = to_json(&report);
    write_file(out_dir, "validate.json", &json)?;
    say(stdout, &json)?;
    match report.failed() {
        0 => Ok(()),
        failed => Err(CliError::SuitesFailed { failed }),
    }
}
