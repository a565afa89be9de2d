//! Antenna benchmark: three measurement sets from a dipole AUT, noise, all
//! retrieval methods, near-field deviations and a far-field cut.

use std::fs::File;
use std::path::Path;

use rayon::prelude::*;

use super::config::{ExperimentConfig, ExperimentKind, Method};
use super::trial::{csv_error, evaluate, write_timings, write_trials, Measurement, TrialId, TrialRecord};
use crate::coherence::extract_phase_data;
use crate::error::Result;
use crate::metrics::{ff_cut_deviation, format_db, normalize_to_peak};
use crate::models::{add_noise, AntennaScenario};
use crate::seeds::derive;
use crate::CVector;

/// Noise stream of a realization, distinct from the scenario streams.
const NOISE_STREAM: u64 = 5;

/// Far-field cut of one realization: normalized patterns in dB and
/// per-angle deviations from the reference.
#[derive(Debug, Clone)]
pub struct CutTable {
    pub theta_deg: Vec<f64>,
    pub reference_db: Vec<f64>,
    /// `(method, pattern_db, deviation_db)`.
    pub methods: Vec<(Method, Vec<f64>, Vec<f64>)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeviationRow {
    pub method: Method,
    pub realizations: usize,
    pub median_epsilon_c: f64,
    pub median_epsilon_m: f64,
}

/// Dimensions and conditioning of one realization.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioRow {
    pub trial: usize,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub condition_number: f64,
}

#[derive(Debug, Clone)]
pub struct AntennaResult {
    pub scenarios: Vec<ScenarioRow>,
    /// `trial` is the realization index; `m2` the number of coherent pairs.
    pub records: Vec<TrialRecord>,
    pub table: Vec<DeviationRow>,
    /// Cut of realization 0.
    pub cut: CutTable,
}

impl AntennaResult {
    pub fn row(&self, method: Method) -> Option<&DeviationRow> {
        self.table.iter().find(|r| r.method == method)
    }
}

/// Median with NaN (failed runs) ordered above every number.
pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v: Vec<f64> = values.iter().map(|&x| if x.is_nan() { f64::INFINITY } else { x }).collect();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2.0
    }
}

/// Realization seed `derive(master_seed, index)`.
pub fn realization_seed(master_seed: u64, index: usize) -> u64 {
    derive(master_seed, index as u64)
}

/// Record and recovered coefficients (`None` for failed runs) of one method.
pub type MethodOutcome = (TrialRecord, Option<CVector>);

/// Runs every configured method on one scenario realization.
pub fn antenna_realization(config: &ExperimentConfig, index: usize) -> Result<(AntennaScenario, Vec<MethodOutcome>)> {
    let seed = realization_seed(config.master_seed, index);
    let sc = &config.antenna.scenario;
    let scenario = AntennaScenario::build(sc, seed)?;
    let a = scenario.stacked_operator();
    let truth = scenario.stacked_field();
    let measured = match config.antenna.snr_db {
        Some(snr) => add_noise(&truth, snr, derive(seed, NOISE_STREAM))?,
        None => truth.clone(),
    };
    let data = extract_phase_data(&measured, &scenario.structure)?;
    let meas = Measurement {
        a: &a,
        structure: &scenario.structure,
        data: &data,
        field: Some(&measured),
    };
    let id = TrialId {
        m2: sc.samples_per_set,
        trial: index,
        seed,
    };
    let runs = config
        .methods_for(ExperimentKind::Antenna)
        .into_iter()
        .map(|method| evaluate(id, method, &meas, &truth, &config.solver, config.success_threshold_db))
        .collect::<Result<Vec<_>>>()?;
    Ok((scenario, runs))
}

fn to_db(pattern: &[num_complex::Complex64]) -> Result<Vec<f64>> {
    Ok(normalize_to_peak(pattern)?.iter().map(|z| 20.0 * z.norm().log10()).collect())
}

pub fn run_antenna_benchmark(config: &ExperimentConfig) -> Result<AntennaResult> {
    config.validate(ExperimentKind::Antenna)?;
    let realizations = config.trials_for(ExperimentKind::Antenna);
    let methods = config.methods_for(ExperimentKind::Antenna);
    let results: Vec<_> = (0..realizations)
        .into_par_iter()
        .map(|i| antenna_realization(config, i))
        .collect::<Result<_>>()?;

    let (scenario, first) = &results[0];
    let (pol, reference) = scenario.reference_cut.dominant();
    let mut cut = CutTable {
        theta_deg: scenario.reference_cut.theta_deg.clone(),
        reference_db: to_db(reference)?,
        methods: Vec::new(),
    };
    for (record, z) in first {
        let Some(z) = z else { continue };
        let result = scenario.cut_for(z, &config.antenna.scenario)?;
        let pattern = result.component(pol);
        // An identically zero pattern has no peak to normalize by.
        let (Ok(db), Ok(dev)) = (to_db(pattern), ff_cut_deviation(pattern, reference)) else {
            continue;
        };
        cut.methods.push((record.method, db, dev));
    }

    let scenarios = results
        .iter()
        .enumerate()
        .map(|(i, (sc, _))| ScenarioRow {
            trial: i,
            seed: realization_seed(config.master_seed, i),
            n: sc.basis.len(),
            m: sc.structure.m(),
            condition_number: sc.condition_number,
        })
        .collect();
    let records: Vec<TrialRecord> = results.iter().flat_map(|(_, runs)| runs.iter().map(|(r, _)| r.clone())).collect();
    let table = methods
        .iter()
        .map(|&method| {
            let rows: Vec<&TrialRecord> = records.iter().filter(|r| r.method == method).collect();
            DeviationRow {
                method,
                realizations: rows.len(),
                median_epsilon_c: median(&rows.iter().map(|r| r.epsilon_c).collect::<Vec<_>>()),
                median_epsilon_m: median(&rows.iter().map(|r| r.epsilon_m).collect::<Vec<_>>()),
            }
        })
        .collect();
    Ok(AntennaResult {
        scenarios,
        records,
        table,
        cut,
    })
}

/// Writes `trials.csv`, `deviations.csv`, `ff_cut.csv`, `scenarios.csv`
/// and `timings.csv`.
pub fn write_antenna(result: &AntennaResult, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut w = csv::Writer::from_path(dir.join("scenarios.csv")).map_err(csv_error)?;
    w.write_record(["trial", "seed", "n", "m", "condition_number"]).map_err(csv_error)?;
    for r in &result.scenarios {
        w.write_record([
            r.trial.to_string(),
            r.seed.to_string(),
            r.n.to_string(),
            r.m.to_string(),
            format!("{:.6e}", r.condition_number),
        ])
        .map_err(csv_error)?;
    }
    w.flush()?;
    write_trials(File::create(dir.join("trials.csv"))?, &result.records)?;
    write_timings(File::create(dir.join("timings.csv"))?, &result.records)?;

    let mut w = csv::Writer::from_path(dir.join("deviations.csv")).map_err(csv_error)?;
    w.write_record(["method", "realizations", "median_epsilon_c", "median_epsilon_m"]).map_err(csv_error)?;
    for r in &result.table {
        w.write_record([
            r.method.to_string(),
            r.realizations.to_string(),
            format_db(r.median_epsilon_c),
            format_db(r.median_epsilon_m),
        ])
        .map_err(csv_error)?;
    }
    w.flush()?;

    let cut = &result.cut;
    let mut w = csv::Writer::from_path(dir.join("ff_cut.csv")).map_err(csv_error)?;
    let mut header = vec!["theta_deg".to_string(), "reference_db".to_string()];
    for (m, _, _) in &cut.methods {
        header.push(format!("{m}_db"));
        header.push(format!("{m}_deviation_db"));
    }
    w.write_record(&header).map_err(csv_error)?;
    for (i, theta) in cut.theta_deg.iter().enumerate() {
        let mut row = vec![format!("{theta:.4}"), format_db(cut.reference_db[i])];
        for (_, db, dev) in &cut.methods {
            row.push(format_db(db[i]));
            row.push(format_db(dev[i]));
        }
        w.write_record(&row).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}
