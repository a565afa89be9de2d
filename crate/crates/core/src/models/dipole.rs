//! Hertzian (electric) and Fitzgerald (magnetic) dipole fields.
//!
//! Time convention `e^{+j omega t}`; propagators are `e^{-jkR}`. Both dipole
//! kinds share the prefactor `jk e^{-jkR} / (4 pi R)`, so the free-space
//! impedance is absorbed into electric-dipole coefficients.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec3 = [f64; 3];
pub type CVec3 = [Complex64; 3];

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

pub fn wavenumber(frequency_hz: f64) -> f64 {
    2.0 * PI * frequency_hz / SPEED_OF_LIGHT
}

pub(crate) fn dot3(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross3(a: Vec3, b: Vec3) -> Vec3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub(crate) fn sub3(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn add_scaled3(a: Vec3, s: f64, b: Vec3) -> Vec3 {
    [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]]
}

pub(crate) fn norm3(a: Vec3) -> f64 {
    dot3(a, a).sqrt()
}

/// `Re/Im` projection `p . E` of a complex field on a real direction.
pub fn project(field: &CVec3, direction: Vec3) -> Complex64 {
    field[0] * direction[0] + field[1] * direction[1] + field[2] * direction[2]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DipoleKind {
    Electric,
    Magnetic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dipole {
    pub position: Vec3,
    /// Unit vector.
    pub orientation: Vec3,
    pub kind: DipoleKind,
}

impl Dipole {
    pub fn new(position: Vec3, orientation: Vec3, kind: DipoleKind) -> Result<Self> {
        let len = norm3(orientation);
        if !(len > 0.0) || !len.is_finite() {
            return Err(Error::Geometry("dipole orientation must be a nonzero finite vector".into()));
        }
        let o = [orientation[0] / len, orientation[1] / len, orientation[2] / len];
        Ok(Self { position, orientation: o, kind })
    }

    /// Electric field at `point` for the given coefficient, including all
    /// near-field terms.
    pub fn field(&self, coefficient: Complex64, point: Vec3, k: f64) -> Result<CVec3> {
        let rvec = sub3(point, self.position);
        let r = norm3(rvec);
        if !(r > 0.0) {
            return Err(Error::Singularity);
        }
        let rhat = [rvec[0] / r, rvec[1] / r, rvec[2] / r];
        let kr = k * r;
        let j = Complex64::i();
        let prefactor = j * k * Complex64::from_polar(1.0, -kr) / (4.0 * PI * r) * coefficient;
        let inv_jkr = 1.0 / (j * kr);
        let u = self.orientation;
        let out = match self.kind {
            DipoleKind::Electric => {
                let ur = dot3(rhat, u);
                let ut = add_scaled3(u, -ur, rhat);
                let transverse = 1.0 + inv_jkr - 1.0 / (kr * kr);
                let radial = 2.0 * ur * (inv_jkr - 1.0 / (kr * kr));
                [0, 1, 2].map(|i| prefactor * (-ut[i] * transverse + rhat[i] * radial))
            }
            DipoleKind::Magnetic => {
                let c = cross3(rhat, u);
                let factor = prefactor * (1.0 + inv_jkr);
                [0, 1, 2].map(|i| factor * c[i])
            }
        };
        Ok(out)
    }

    /// Far-field pattern `F` with `E ~ F e^{-jkr} / r` along unit direction
    /// `rhat` (phase referenced to the origin).
    pub fn far_field(&self, coefficient: Complex64, rhat: Vec3, k: f64) -> CVec3 {
        let j = Complex64::i();
        let phase = Complex64::from_polar(1.0, k * dot3(rhat, self.position));
        let prefactor = j * k / (4.0 * PI) * phase * coefficient;
        let u = self.orientation;
        match self.kind {
            DipoleKind::Electric => {
                let ur = dot3(rhat, u);
                let ut = add_scaled3(u, -ur, rhat);
                [0, 1, 2].map(|i| prefactor * -ut[i])
            }
            DipoleKind::Magnetic => {
                let c = cross3(rhat, u);
                [0, 1, 2].map(|i| prefactor * c[i])
            }
        }
    }
}

/// Free-function form of [`Dipole::field`].
pub fn dipole_field(dipole: &Dipole, coefficient: Complex64, point: Vec3, k: f64) -> Result<CVec3> {
    dipole.field(coefficient, point, k)
}
