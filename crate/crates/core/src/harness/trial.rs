//! Method dispatch and per-trial records.

use std::time::Instant;

use super::config::{Method, SolverConfig};
use crate::coherence::{augment_by_groups, CoherenceStructure};
use crate::error::{Error, Result};
use crate::metrics::{epsilon_c, epsilon_m, format_db};
use crate::solvers::{
    choose_anchor, coherent_resolve, coherent_solve, solve_linear_pc, solve_nonconvex, spectral_initialize, Solution,
};
use crate::{CMatrix, CVector, PhaseData, Report};

/// What one retrieval run sees.
#[derive(Debug, Clone, Copy)]
pub struct Measurement<'a> {
    pub a: &'a CMatrix,
    pub structure: &'a CoherenceStructure,
    pub data: &'a PhaseData,
    /// Complex measured field, needed only by the coherent method.
    pub field: Option<&'a CVector>,
}

#[derive(Debug, Clone)]
pub struct MethodRun {
    pub z: CVector,
    pub report: Report,
    pub flags: Vec<&'static str>,
}

/// Runs one method.
pub fn run_method(method: Method, meas: &Measurement<'_>, solver: &SolverConfig) -> Result<MethodRun> {
    let Measurement { a, structure, data, field } = *meas;
    let mut flags = Vec::new();
    let report = match method {
        Method::LinearPc | Method::LinearPcRefined => {
            let s = choose_anchor(structure, data)?;
            let mut report = solve_linear_pc(a, data, structure, s)?;
            if method == Method::LinearPcRefined {
                let psi = match &report.solution {
                    Solution::Stacked(st) => st.psi.clone(),
                    Solution::Coefficients(_) => unreachable!("linear solve returns stacked unknowns"),
                };
                match coherent_resolve(a, data, structure, &psi)? {
                    Some(z) => report.solution = Solution::Coefficients(z),
                    None => flags.push("no-refinement"),
                }
            }
            report
        }
        Method::NonconvexAugmented => {
            let (aug, mags) = augment_by_groups(a, data, structure)?;
            nonconvex(&aug, &mags, solver)?
        }
        Method::NonconvexIncoherent => nonconvex(a, data.magnitudes(), solver)?,
        Method::Coherent => {
            let b = field.ok_or_else(|| Error::Config("the coherent method needs the complex field".into()))?;
            coherent_solve(a, b)?
        }
    };
    if report.underdetermined {
        flags.push("underdetermined");
    }
    if report.condition_warning {
        flags.push("ill-conditioned");
    }
    if !report.converged {
        flags.push("not-converged");
    }
    Ok(MethodRun {
        z: report.solution.z().clone(),
        report,
        flags,
    })
}

fn nonconvex(a: &CMatrix, mags: &[f64], solver: &SolverConfig) -> Result<Report> {
    let z0 = spectral_initialize(a, mags, solver.spectral_iterations)?;
    solve_nonconvex(a, mags, &z0, &solver.nonconvex)
}

/// One row of a result table.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    /// Number of coherent pairs (the sweep variable).
    pub m2: usize,
    pub trial: usize,
    pub seed: u64,
    pub method: Method,
    pub epsilon_c: f64,
    pub epsilon_m: f64,
    pub iterations: usize,
    pub success: bool,
    /// `;`-separated warnings; `numerical-error` marks a failed run.
    pub flags: String,
    /// Seconds; kept out of the deterministic tables.
    pub wall_time: f64,
}

pub const TRIAL_HEADER: [&str; 9] = [
    "m2",
    "trial",
    "seed",
    "method",
    "epsilon_c",
    "epsilon_m",
    "iterations",
    "success",
    "flags",
];

impl TrialRecord {
    pub fn csv_fields(&self) -> [String; 9] {
        [
            self.m2.to_string(),
            self.trial.to_string(),
            self.seed.to_string(),
            self.method.to_string(),
            format_db(self.epsilon_c),
            format_db(self.epsilon_m),
            self.iterations.to_string(),
            u8::from(self.success).to_string(),
            self.flags.clone(),
        ]
    }
}

/// Identifies a trial within an experiment.
#[derive(Debug, Clone, Copy)]
pub struct TrialId {
    pub m2: usize,
    pub trial: usize,
    pub seed: u64,
}

/// Runs `method` and scores `A z` against `truth`. Numerical failures become
/// failed records; other errors propagate.
pub fn evaluate(
    id: TrialId,
    method: Method,
    meas: &Measurement<'_>,
    truth: &CVector,
    solver: &SolverConfig,
    threshold_db: f64,
) -> Result<(TrialRecord, Option<CVector>)> {
    let start = Instant::now();
    let outcome = run_method(method, meas, solver).and_then(|run| {
        let fit = meas.a.matvec(&run.z)?;
        let ec = epsilon_c(&fit, truth)?;
        let em = epsilon_m(&fit, truth)?;
        Ok((run, ec, em))
    });
    let wall_time = start.elapsed().as_secs_f64();
    let base = TrialRecord {
        m2: id.m2,
        trial: id.trial,
        seed: id.seed,
        method,
        epsilon_c: f64::NAN,
        epsilon_m: f64::NAN,
        iterations: 0,
        success: false,
        flags: String::new(),
        wall_time,
    };
    match outcome {
        Ok((run, ec, em)) => Ok((
            TrialRecord {
                epsilon_c: ec,
                epsilon_m: em,
                iterations: run.report.iterations_used,
                success: ec < threshold_db,
                flags: run.flags.join(";"),
                ..base
            },
            Some(run.z),
        )),
        Err(e) if e.exit_code() == 3 => Ok((
            TrialRecord {
                flags: "numerical-error".into(),
                ..base
            },
            None,
        )),
        Err(e) => Err(e),
    }
}

/// Writes records with [`TRIAL_HEADER`].
pub fn write_trials(w: impl std::io::Write, records: &[TrialRecord]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(TRIAL_HEADER).map_err(csv_error)?;
    for r in records {
        wtr.write_record(r.csv_fields()).map_err(csv_error)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Writes per-record wall times, which vary between runs.
pub fn write_timings(w: impl std::io::Write, records: &[TrialRecord]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(["m2", "trial", "method", "wall_time"]).map_err(csv_error)?;
    for r in records {
        wtr.write_record([r.m2.to_string(), r.trial.to_string(), r.method.to_string(), format!("{:.6}", r.wall_time)])
            .map_err(csv_error)?;
    }
    wtr.flush()?;
    Ok(())
}

pub(crate) fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Io(std::io::Error::other(format!("{other:?}"))),
    }
}
