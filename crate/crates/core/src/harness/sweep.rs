//! Success-rate sweep over the number of coherent pairs on Gaussian
//! instances.

use std::fs::File;
use std::path::Path;

use rayon::prelude::*;

use super::config::{ExperimentConfig, ExperimentKind, Method};
use super::trial::{csv_error, evaluate, write_timings, write_trials, Measurement, TrialId, TrialRecord};
use crate::coherence::{extract_phase_data, CoherenceStructure};
use crate::error::Result;
use crate::models::sample_gaussian_instance;
use crate::seeds::trial_seed;
use crate::solvers::unknowns_after_anchoring;

/// Problem dimensions at one sweep point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub m2: usize,
    pub m: usize,
    pub n: usize,
    pub q: usize,
}

impl SweepPoint {
    pub fn new(n: usize, m1: usize, m2: usize) -> Self {
        Self {
            m2,
            m: m1 + 2 * m2,
            n,
            q: m1 + m2,
        }
    }

    pub fn unknowns(&self) -> usize {
        unknowns_after_anchoring(self.n, self.q)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub m2: usize,
    pub method: Method,
    pub trials: usize,
    pub successes: usize,
}

impl SummaryRow {
    pub fn rate(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
    /// Ordered by sweep point, trial, then configured method order.
    pub records: Vec<TrialRecord>,
    pub summary: Vec<SummaryRow>,
}

impl SweepResult {
    pub fn row(&self, m2: usize, method: Method) -> Option<&SummaryRow> {
        self.summary.iter().find(|r| r.m2 == m2 && r.method == method)
    }
}

/// Runs every configured method on one trial of one sweep point.
///
/// The trial seed is `trial_seed(master_seed, m2, trial)`, so records do not
/// depend on which other points or trials are run, or in which order.
pub fn gauss_trial(config: &ExperimentConfig, m2: usize, trial: usize) -> Result<Vec<TrialRecord>> {
    let g = &config.gauss;
    let point = SweepPoint::new(g.n, g.m1, m2);
    let seed = trial_seed(config.master_seed, m2, trial);
    let inst = sample_gaussian_instance(g.n, point.m, seed)?;
    let structure = CoherenceStructure::singletons_and_pairs(g.m1, m2)?;
    let data = extract_phase_data(&inst.b_true, &structure)?;
    let meas = Measurement {
        a: &inst.a,
        structure: &structure,
        data: &data,
        field: Some(&inst.b_true),
    };
    let id = TrialId { m2, trial, seed };
    config
        .methods_for(ExperimentKind::GaussSweep)
        .into_iter()
        .map(|method| {
            evaluate(id, method, &meas, &inst.b_true, &config.solver, config.success_threshold_db).map(|(r, _)| r)
        })
        .collect()
}

pub fn run_gauss_sweep(config: &ExperimentConfig) -> Result<SweepResult> {
    config.validate(ExperimentKind::GaussSweep)?;
    let g = &config.gauss;
    let trials = config.trials_for(ExperimentKind::GaussSweep);
    let methods = config.methods_for(ExperimentKind::GaussSweep);
    let work: Vec<(usize, usize)> = g.m2.iter().flat_map(|&m2| (0..trials).map(move |t| (m2, t))).collect();
    let per_trial: Vec<Vec<TrialRecord>> =
        work.par_iter().map(|&(m2, t)| gauss_trial(config, m2, t)).collect::<Result<_>>()?;
    let records: Vec<TrialRecord> = per_trial.into_iter().flatten().collect();

    let mut summary = Vec::with_capacity(g.m2.len() * methods.len());
    for &m2 in &g.m2 {
        for &method in &methods {
            let successes = records.iter().filter(|r| r.m2 == m2 && r.method == method && r.success).count();
            summary.push(SummaryRow {
                m2,
                method,
                trials,
                successes,
            });
        }
    }
    Ok(SweepResult {
        points: g.m2.iter().map(|&m2| SweepPoint::new(g.n, g.m1, m2)).collect(),
        records,
        summary,
    })
}

/// Writes `trials.csv`, `summary.csv`, `points.csv` and `timings.csv`.
pub fn write_sweep(result: &SweepResult, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    write_trials(File::create(dir.join("trials.csv"))?, &result.records)?;
    write_timings(File::create(dir.join("timings.csv"))?, &result.records)?;

    let mut w = csv::Writer::from_path(dir.join("summary.csv")).map_err(csv_error)?;
    w.write_record(["m2", "method", "trials", "successes", "rate"]).map_err(csv_error)?;
    for r in &result.summary {
        w.write_record([
            r.m2.to_string(),
            r.method.to_string(),
            r.trials.to_string(),
            r.successes.to_string(),
            format!("{:.4}", r.rate()),
        ])
        .map_err(csv_error)?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(dir.join("points.csv")).map_err(csv_error)?;
    w.write_record(["m2", "m", "n", "q", "unknowns", "m_over_n", "m_over_unknowns"]).map_err(csv_error)?;
    for p in &result.points {
        w.write_record([
            p.m2.to_string(),
            p.m.to_string(),
            p.n.to_string(),
            p.q.to_string(),
            p.unknowns().to_string(),
            format!("{:.4}", p.m as f64 / p.n as f64),
            format!("{:.4}", p.m as f64 / p.unknowns() as f64),
        ])
        .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}
