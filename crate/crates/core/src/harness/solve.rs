//! Retrieval from files.

use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::{Method, SolverConfig};
use super::io::{read_coherence, read_matrix, read_phase_data, read_vector};
use super::trial::{run_method, Measurement};
use crate::coherence::CoherenceStructure;
use crate::error::{Error, Result};
use crate::metrics::{deviation, format_db};
use crate::{CMatrix, CVector, PhaseData};

#[derive(Debug, Clone)]
pub struct SolveFiles {
    pub operator: PathBuf,
    pub magnitudes: PathBuf,
    pub coherence: PathBuf,
    /// Reference field `b` to score `A z` against.
    pub reference: Option<PathBuf>,
}

/// Summary written next to the solution vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveSummary {
    pub method: String,
    pub iterations: usize,
    pub final_objective: f64,
    pub anchor_group: Option<usize>,
    pub underdetermined: bool,
    pub condition_warning: bool,
    pub converged: bool,
    pub flags: Vec<String>,
    /// dB with four decimals; present with a reference.
    pub epsilon_c: Option<String>,
    pub epsilon_m: Option<String>,
    pub aligned_phase: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SolveOutput {
    pub z: CVector,
    pub summary: SolveSummary,
}

/// Solves an in-memory problem. The coherent method is rejected: the inputs
/// carry no absolute phase.
pub fn solve_problem(
    a: &CMatrix,
    data: &PhaseData,
    structure: &CoherenceStructure,
    reference: Option<&CVector>,
    method: Method,
    solver: &SolverConfig,
) -> Result<SolveOutput> {
    if method == Method::Coherent {
        return Err(Error::Config("the coherent method needs a complex field and is not available here".into()));
    }
    if a.rows() != structure.m() {
        return Err(Error::Config(format!(
            "operator has {} rows but the data has {} measurements",
            a.rows(),
            structure.m()
        )));
    }
    let meas = Measurement {
        a,
        structure,
        data,
        field: None,
    };
    let run = run_method(method, &meas, solver)?;
    let dev = match reference {
        Some(b) => {
            if b.len() != a.rows() {
                return Err(Error::Config(format!("reference has {} entries, operator {} rows", b.len(), a.rows())));
            }
            Some(deviation(&a.matvec(&run.z)?, b)?)
        }
        None => None,
    };
    let r = &run.report;
    Ok(SolveOutput {
        summary: SolveSummary {
            method: method.to_string(),
            iterations: r.iterations_used,
            final_objective: r.final_objective,
            anchor_group: r.anchor_index,
            underdetermined: r.underdetermined,
            condition_warning: r.condition_warning,
            converged: r.converged,
            flags: run.flags.iter().map(|s| s.to_string()).collect(),
            epsilon_c: dev.as_ref().map(|d| format_db(d.epsilon_c)),
            epsilon_m: dev.as_ref().map(|d| format_db(d.epsilon_m)),
            aligned_phase: dev.as_ref().map(|d| d.aligned_phase),
        },
        z: run.z,
    })
}

pub fn run_solve(files: &SolveFiles, method: Method, solver: &SolverConfig) -> Result<SolveOutput> {
    let a = read_matrix(&files.operator)?;
    let structure = read_coherence(&files.coherence, a.rows())?;
    let data = read_phase_data(&files.magnitudes, &structure)?;
    let reference = files.reference.as_deref().map(read_vector).transpose()?;
    solve_problem(&a, &data, &structure, reference.as_ref(), method, solver)
}

/// Writes `solution.csv` and `report.json`.
pub fn write_solve(output: &SolveOutput, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    super::io::write_vector(std::fs::File::create(dir.join("solution.csv"))?, &output.z)?;
    let json = serde_json::to_string_pretty(&output.summary).expect("summary serializes");
    std::fs::write(dir.join("report.json"), json + "\n")?;
    Ok(())
}
