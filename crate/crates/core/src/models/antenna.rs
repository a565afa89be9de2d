//! Synthetic near-field antenna measurement: a dipole AUT on an enclosing
//! box, random spherical sampling, an L-shaped probe array and far-field
//! cuts.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::dipole::{add_scaled3, norm3, project, wavenumber, CVec3, Dipole, DipoleKind, Vec3};
use super::gaussian::complex_normal;
use crate::error::{Error, Result};
use crate::{CMatrix, CVector};

/// Dipoles with coefficients, tangential on an origin-centred box.
#[derive(Debug, Clone, PartialEq)]
pub struct DipoleAut {
    pub dipoles: Vec<Dipole>,
    pub coefficients: CVector,
    pub frequency_hz: f64,
    pub box_half_extent: Vec3,
}

impl DipoleAut {
    pub fn new(dipoles: Vec<Dipole>, coefficients: CVector, frequency_hz: f64, box_half_extent: Vec3) -> Result<Self> {
        if dipoles.len() != coefficients.len() {
            return Err(Error::Dimension(format!(
                "{} dipoles but {} coefficients",
                dipoles.len(),
                coefficients.len()
            )));
        }
        if !(frequency_hz > 0.0) {
            return Err(Error::Config("frequency must be positive".into()));
        }
        Ok(Self {
            dipoles,
            coefficients,
            frequency_hz,
            box_half_extent,
        })
    }

    pub fn wavenumber(&self) -> f64 {
        wavenumber(self.frequency_hz)
    }

    pub fn len(&self) -> usize {
        self.dipoles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dipoles.is_empty()
    }

    /// Distance from the origin to the farthest box corner.
    pub fn max_extent(&self) -> f64 {
        norm3(self.box_half_extent)
    }

    fn contains(&self, p: Vec3) -> bool {
        (0..3).all(|i| p[i].abs() <= self.box_half_extent[i])
    }

    /// Superposed field of all dipoles at `point`.
    pub fn field(&self, point: Vec3) -> Result<CVec3> {
        let k = self.wavenumber();
        let mut e = [Complex64::new(0.0, 0.0); 3];
        for (d, &c) in self.dipoles.iter().zip(&self.coefficients) {
            let f = d.field(c, point, k)?;
            for i in 0..3 {
                e[i] += f[i];
            }
        }
        Ok(e)
    }
}

/// Places dipoles tangentially on the six faces of a box with half extent
/// `half`. Each face carries a `grid[0] x grid[1]` lattice of cell-centred
/// positions, optionally jittered by up to `jitter` cell widths; every
/// position holds an electric and a magnetic dipole along each of the two
/// tangential axes. Total count: `24 * grid[0] * grid[1]`.
pub fn tangential_box_dipoles(half: Vec3, grid: [usize; 2], jitter: f64, seed: u64) -> Result<Vec<Dipole>> {
    if grid[0] == 0 || grid[1] == 0 {
        return Err(Error::Config("dipole grid must be at least 1x1".into()));
    }
    if !(0.0..0.5).contains(&jitter) {
        return Err(Error::Config("jitter must lie in [0, 0.5)".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(24 * grid[0] * grid[1]);
    for normal_axis in 0..3 {
        let (ua, va) = ((normal_axis + 1) % 3, (normal_axis + 2) % 3);
        for sign in [1.0, -1.0] {
            for i in 0..grid[0] {
                for j in 0..grid[1] {
                    let cell_u = 2.0 * half[ua] / grid[0] as f64;
                    let cell_v = 2.0 * half[va] / grid[1] as f64;
                    let mut du = 0.0;
                    let mut dv = 0.0;
                    if jitter > 0.0 {
                        du = rng.random_range(-jitter..jitter) * cell_u;
                        dv = rng.random_range(-jitter..jitter) * cell_v;
                    }
                    let mut p = [0.0; 3];
                    p[normal_axis] = sign * half[normal_axis];
                    p[ua] = -half[ua] + (i as f64 + 0.5) * cell_u + du;
                    p[va] = -half[va] + (j as f64 + 0.5) * cell_v + dv;
                    for axis in [ua, va] {
                        let mut o = [0.0; 3];
                        o[axis] = 1.0;
                        for kind in [DipoleKind::Electric, DipoleKind::Magnetic] {
                            out.push(Dipole::new(p, o, kind)?);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Coefficients of a horn-like reference source on tangential box dipoles:
/// a tapered Huygens aperture on the `+z` face (electric `y`, magnetic `x`,
/// radiating towards `+z` with `y` polarization) plus weak random
/// excitation of every other dipole at `leakage` relative amplitude.
pub fn horn_like_coefficients(dipoles: &[Dipole], half: Vec3, leakage: f64, seed: u64) -> CVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let taper = |p: Vec3| {
        let tx = (std::f64::consts::FRAC_PI_2 * p[0] / half[0]).cos().max(0.0);
        let ty = (std::f64::consts::FRAC_PI_2 * p[1] / half[1]).cos().max(0.0);
        tx * ty
    };
    let front = |d: &Dipole| (d.position[2] - half[2]).abs() < 1e-12;
    CVector::from_raw(
        dipoles
            .iter()
            .map(|d| {
                let noise = complex_normal(&mut rng) * leakage;
                if !front(d) {
                    return noise;
                }
                let w = taper(d.position);
                match d.kind {
                    DipoleKind::Electric if d.orientation[1].abs() > 0.5 => noise - w,
                    DipoleKind::Magnetic if d.orientation[0].abs() > 0.5 => noise + w,
                    _ => noise,
                }
            })
            .collect(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarization {
    Theta,
    Phi,
}

/// Orthonormal frame `(rhat, theta_hat, phi_hat)` at a unit direction.
pub fn local_frame(rhat: Vec3) -> (Vec3, Vec3, Vec3) {
    let theta = rhat[2].clamp(-1.0, 1.0).acos();
    let phi = rhat[1].atan2(rhat[0]);
    spherical_frame(theta, phi)
}

/// Frame at signed polar angle `theta` and azimuth `phi` (radians).
pub fn spherical_frame(theta: f64, phi: f64) -> (Vec3, Vec3, Vec3) {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    ([st * cp, st * sp, ct], [ct * cp, ct * sp, -st], [-sp, cp, 0.0])
}

/// Measurement sample locations on a sphere and the tangential component
/// each sample records.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingPlan {
    pub sphere_radius: f64,
    pub directions: Vec<Vec3>,
    pub polarization: Vec<Polarization>,
    pub seed: u64,
}

impl SamplingPlan {
    /// `count` directions uniform on the sphere; polarization alternates
    /// theta, phi, theta, ...
    pub fn random(count: usize, sphere_radius: f64, seed: u64) -> Result<Self> {
        if !(sphere_radius > 0.0) {
            return Err(Error::Config("sphere radius must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let directions = (0..count)
            .map(|_| {
                let z: f64 = rng.random_range(-1.0..1.0);
                let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
                let s = (1.0 - z * z).sqrt();
                [s * phi.cos(), s * phi.sin(), z]
            })
            .collect();
        let polarization = (0..count)
            .map(|k| if k % 2 == 0 { Polarization::Theta } else { Polarization::Phi })
            .collect();
        Ok(Self {
            sphere_radius,
            directions,
            polarization,
            seed,
        })
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }
}

/// Element offsets of a probe array in the transversal `(theta_hat,
/// phi_hat)` coordinates of the nominal probe position, in meters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeArrayGeometry {
    pub element_offsets: Vec<[f64; 2]>,
}

impl ProbeArrayGeometry {
    pub fn new(element_offsets: Vec<[f64; 2]>) -> Result<Self> {
        match element_offsets.first() {
            Some(&[0.0, 0.0]) => Ok(Self { element_offsets }),
            _ => Err(Error::Geometry("first probe element must sit at offset (0, 0)".into())),
        }
    }

    /// Three elements at the corners of an "L": (0, 0), (1, 0), (0, 0.8) m.
    pub fn l_shape() -> Self {
        Self {
            element_offsets: vec![[0.0, 0.0], [1.0, 0.0], [0.0, 0.8]],
        }
    }
}

impl Default for ProbeArrayGeometry {
    fn default() -> Self {
        Self::l_shape()
    }
}

/// Probe position and measured polarization vector of sample `k` for array
/// element `element`.
pub fn probe_position(plan: &SamplingPlan, array: &ProbeArrayGeometry, element: usize, k: usize) -> (Vec3, Vec3) {
    let (rhat, th, ph) = local_frame(plan.directions[k]);
    let [du, dv] = array.element_offsets[element];
    let nominal = rhat.map(|c| c * plan.sphere_radius);
    let pos = add_scaled3(add_scaled3(nominal, du, th), dv, ph);
    let pol = match plan.polarization[k] {
        Polarization::Theta => th,
        Polarization::Phi => ph,
    };
    (pos, pol)
}

/// Operator mapping the AUT's dipole coefficients to the samples measured by
/// one element of the probe array. Probes are ideal: each row samples the
/// tangential component selected by the plan at the displaced position.
pub fn build_forward_operator(
    aut: &DipoleAut,
    plan: &SamplingPlan,
    array: &ProbeArrayGeometry,
    element_index: usize,
) -> Result<CMatrix> {
    if element_index >= array.element_offsets.len() {
        return Err(Error::Geometry(format!(
            "probe element {element_index} does not exist ({} elements)",
            array.element_offsets.len()
        )));
    }
    if plan.polarization.len() != plan.directions.len() {
        return Err(Error::Dimension("sampling plan polarization list has the wrong length".into()));
    }
    if plan.sphere_radius <= aut.max_extent() {
        return Err(Error::Geometry("measurement sphere intersects the AUT box".into()));
    }
    let k = aut.wavenumber();
    let one = Complex64::new(1.0, 0.0);
    let mut data = Vec::with_capacity(plan.len() * aut.len());
    for s in 0..plan.len() {
        let (pos, pol) = probe_position(plan, array, element_index, s);
        if aut.contains(pos) {
            return Err(Error::Geometry(format!("probe position of sample {s} lies inside the AUT box")));
        }
        for d in &aut.dipoles {
            data.push(project(&d.field(one, pos, k)?, pol));
        }
    }
    CMatrix::new(plan.len(), aut.len(), data)
}

/// Far-field pattern along a constant-`phi` cut, both tangential
/// components. Negative `theta` continues the cut through the pole.
#[derive(Debug, Clone, PartialEq)]
pub struct FarFieldCut {
    pub theta_deg: Vec<f64>,
    pub e_theta: Vec<Complex64>,
    pub e_phi: Vec<Complex64>,
}

impl FarFieldCut {
    /// The component with the larger peak magnitude.
    pub fn dominant(&self) -> (Polarization, &[Complex64]) {
        let peak = |v: &[Complex64]| v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if peak(&self.e_phi) > peak(&self.e_theta) {
            (Polarization::Phi, &self.e_phi)
        } else {
            (Polarization::Theta, &self.e_theta)
        }
    }

    pub fn component(&self, pol: Polarization) -> &[Complex64] {
        match pol {
            Polarization::Theta => &self.e_theta,
            Polarization::Phi => &self.e_phi,
        }
    }
}

/// Radiated far field of `coefficients` on the dipoles of `aut` along the
/// cut at azimuth `phi_deg`.
pub fn far_field_cut(coefficients: &CVector, aut: &DipoleAut, phi_deg: f64, theta_grid_deg: &[f64]) -> Result<FarFieldCut> {
    if coefficients.len() != aut.len() {
        return Err(Error::Dimension(format!(
            "{} coefficients for {} dipoles",
            coefficients.len(),
            aut.len()
        )));
    }
    if let Some(t) = theta_grid_deg.iter().find(|t| !(-180.0..=180.0).contains(*t)) {
        return Err(Error::Config(format!("theta {t} outside [-180, 180] degrees")));
    }
    let k = aut.wavenumber();
    let phi = phi_deg.to_radians();
    let mut e_theta = Vec::with_capacity(theta_grid_deg.len());
    let mut e_phi = Vec::with_capacity(theta_grid_deg.len());
    for &t in theta_grid_deg {
        let (rhat, th, ph) = spherical_frame(t.to_radians(), phi);
        let mut e = [Complex64::new(0.0, 0.0); 3];
        for (d, &c) in aut.dipoles.iter().zip(coefficients) {
            let f = d.far_field(c, rhat, k);
            for i in 0..3 {
                e[i] += f[i];
            }
        }
        e_theta.push(project(&e, th));
        e_phi.push(project(&e, ph));
    }
    Ok(FarFieldCut {
        theta_deg: theta_grid_deg.to_vec(),
        e_theta,
        e_phi,
    })
}

/// Ratio of largest to smallest singular value (`inf` if rank deficient).
pub fn condition_number(a: &CMatrix) -> f64 {
    let m = nalgebra::DMatrix::from_row_slice(a.rows(), a.cols(), a.as_slice());
    let sv = m.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}
