//! The desk-scale antenna benchmark scenario.

use serde::{Deserialize, Serialize};

use super::antenna::{
    build_forward_operator, condition_number, far_field_cut, horn_like_coefficients, tangential_box_dipoles, DipoleAut,
    FarFieldCut, ProbeArrayGeometry, SamplingPlan,
};
use crate::coherence::CoherenceStructure;
use crate::error::{Error, Result};
use crate::seeds::derive;
use crate::{CMatrix, CVector};

/// How the reference field is generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenerationMode {
    /// Finer, jittered dipole set distinct from the inversion basis.
    Mismatched,
    /// Same dipoles as the inversion basis (inverse crime; for checks only).
    Matched,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AntennaScenarioConfig {
    pub frequency_hz: f64,
    /// Full edge length of the cubic AUT box.
    pub box_size_m: f64,
    pub sphere_radius_m: f64,
    pub samples_per_set: usize,
    /// Per-face lattice of the inversion basis: `24 * g0 * g1` dipoles.
    pub inversion_grid: [usize; 2],
    /// Per-face lattice of the generating source.
    pub generation_grid: [usize; 2],
    /// Position jitter of generating dipoles, in cell widths.
    pub generation_jitter: f64,
    pub generation: GenerationMode,
    /// Relative random excitation outside the radiating aperture.
    pub leakage: f64,
    pub probe_offsets_m: Vec<[f64; 2]>,
    /// Azimuth of the evaluated far-field cut.
    pub cut_phi_deg: f64,
    pub cut_points: usize,
}

impl Default for AntennaScenarioConfig {
    fn default() -> Self {
        Self {
            frequency_hz: 2.6e9,
            box_size_m: 0.02,
            sphere_radius_m: 1.5,
            samples_per_set: 300,
            inversion_grid: [1, 2],
            generation_grid: [2, 4],
            generation_jitter: 0.25,
            generation: GenerationMode::Mismatched,
            leakage: 0.05,
            probe_offsets_m: ProbeArrayGeometry::l_shape().element_offsets,
            cut_phi_deg: 90.0,
            cut_points: 361,
        }
    }
}

impl AntennaScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.frequency_hz > 0.0 && self.box_size_m > 0.0 && self.sphere_radius_m > 0.0) {
            return Err(Error::Config("frequency, box size and sphere radius must be positive".into()));
        }
        if self.samples_per_set == 0 {
            return Err(Error::Config("samples_per_set must be positive".into()));
        }
        if self.probe_offsets_m.len() < 3 {
            return Err(Error::Config("the probe array needs three elements".into()));
        }
        if self.cut_points < 2 {
            return Err(Error::Config("cut_points must be at least 2".into()));
        }
        ProbeArrayGeometry::new(self.probe_offsets_m.clone())?;
        Ok(())
    }

    pub fn half_extent(&self) -> [f64; 3] {
        [self.box_size_m / 2.0; 3]
    }
}

/// Three measurement sets: set 1 from element 1 at its own positions, sets 2
/// and 3 from elements 2 and 3 acquired simultaneously at shared positions.
#[derive(Debug, Clone)]
pub struct AntennaScenario {
    /// Inversion basis (coefficients are zero).
    pub basis: DipoleAut,
    /// Generating source with its true coefficients.
    pub reference: DipoleAut,
    pub operators: [CMatrix; 3],
    /// Noiseless fields of the reference source, per set.
    pub fields: [CVector; 3],
    pub structure: CoherenceStructure,
    pub reference_cut: FarFieldCut,
    /// Ratio of extreme singular values of the stacked inversion operator.
    pub condition_number: f64,
}

/// Scenarios whose stacked operator is worse conditioned are rejected.
pub const MAX_CONDITION_NUMBER: f64 = 1e12;

impl AntennaScenario {
    pub fn build(config: &AntennaScenarioConfig, seed: u64) -> Result<Self> {
        config.validate()?;
        let half = config.half_extent();
        let basis_dipoles = tangential_box_dipoles(half, config.inversion_grid, 0.0, 0)?;
        let zeros = CVector::zeros(basis_dipoles.len());
        let basis = DipoleAut::new(basis_dipoles.clone(), zeros, config.frequency_hz, half)?;

        let gen_dipoles = match config.generation {
            GenerationMode::Matched => basis_dipoles,
            GenerationMode::Mismatched => tangential_box_dipoles(
                half,
                config.generation_grid,
                config.generation_jitter,
                derive(seed, 1),
            )?,
        };
        let coefficients = horn_like_coefficients(&gen_dipoles, half, config.leakage, derive(seed, 2));
        let reference = DipoleAut::new(gen_dipoles, coefficients, config.frequency_hz, half)?;

        let array = ProbeArrayGeometry::new(config.probe_offsets_m.clone())?;
        let plan1 = SamplingPlan::random(config.samples_per_set, config.sphere_radius_m, derive(seed, 3))?;
        let plan23 = SamplingPlan::random(config.samples_per_set, config.sphere_radius_m, derive(seed, 4))?;
        let sets = [(&plan1, 0), (&plan23, 1), (&plan23, 2)];

        let mut operators = Vec::with_capacity(3);
        let mut fields = Vec::with_capacity(3);
        for (plan, element) in sets {
            operators.push(build_forward_operator(&basis, plan, &array, element)?);
            let gen_op = build_forward_operator(&reference, plan, &array, element)?;
            fields.push(gen_op.matvec(&reference.coefficients)?);
        }
        let structure = CoherenceStructure::singletons_and_pairs(config.samples_per_set, config.samples_per_set)?;
        let reference_cut = far_field_cut(&reference.coefficients, &reference, config.cut_phi_deg, &cut_grid(config.cut_points))?;
        let [a1, a2, a3]: [CMatrix; 3] = operators.try_into().expect("three operators");
        let [b1, b2, b3]: [CVector; 3] = fields.try_into().expect("three fields");
        let cond = condition_number(&CMatrix::vstack(&[&a1, &a2, &a3])?);
        if !(cond <= MAX_CONDITION_NUMBER) {
            return Err(Error::Geometry(format!(
                "stacked operator is numerically rank deficient (condition number {cond:.3e})"
            )));
        }
        Ok(Self {
            basis,
            reference,
            operators: [a1, a2, a3],
            fields: [b1, b2, b3],
            structure,
            reference_cut,
            condition_number: cond,
        })
    }

    /// Stacked operator `[A1; A2; A3]`.
    pub fn stacked_operator(&self) -> CMatrix {
        CMatrix::vstack(&[&self.operators[0], &self.operators[1], &self.operators[2]]).expect("equal column counts")
    }

    /// Stacked noiseless field `[b1; b2; b3]`.
    pub fn stacked_field(&self) -> CVector {
        CVector::concat(&[&self.fields[0], &self.fields[1], &self.fields[2]])
    }

    pub fn cut_for(&self, coefficients: &CVector, config: &AntennaScenarioConfig) -> Result<FarFieldCut> {
        far_field_cut(coefficients, &self.basis, config.cut_phi_deg, &self.reference_cut.theta_deg)
    }
}

/// Uniform grid over [-180, 180] degrees.
pub fn cut_grid(points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| -180.0 + 360.0 * i as f64 / (points - 1) as f64)
        .collect()
}
