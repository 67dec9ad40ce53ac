//! Physical constants and the derived gravitational coupling constants.
//!
//! The gravitational analogs of the vacuum permittivity and permeability are
//!
//! ```text
//! eps_g = 1 / (4 pi G)        mu_g = 4 pi G / c^2
//! ```
//!
//! so that `eps_g * mu_g * c^2 == 1`, mirroring `eps_0 * mu_0 * c^2 == 1`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Result};

/// Which numerical values back a [`PhysicalConstants`] set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstantsMode {
    /// CODATA 2018 recommended values.
    Codata,
    /// `G = 6.67e-11` and `c = 3.00e8`, the rounded values behind the printed
    /// three-figure estimates. All other constants stay CODATA.
    Paper,
    /// Caller-supplied values (used for nondimensional test problems).
    Custom,
}

impl fmt::Display for ConstantsMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstantsMode::Codata => "codata",
            ConstantsMode::Paper => "paper",
            ConstantsMode::Custom => "custom",
        })
    }
}

impl std::str::FromStr for ConstantsMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "codata" => Ok(ConstantsMode::Codata),
            "paper" => Ok(ConstantsMode::Paper),
            other => Err(format!("unknown constants mode '{other}' (expected paper|codata)")),
        }
    }
}

/// The single source of unit-bearing constants. Immutable once built.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// Newton's constant, m^3 kg^-1 s^-2.
    pub g: f64,
    /// Vacuum light speed, m/s.
    pub c: f64,
    /// Reduced Planck constant, J s.
    pub hbar: f64,
    /// Elementary charge, C.
    pub e: f64,
    /// Electron mass, kg.
    pub m_e: f64,
    /// Vacuum permeability, H/m.
    pub mu_0: f64,
    /// Gravitational permittivity analog, `1/(4 pi G)`.
    pub eps_g: f64,
    /// Gravitational permeability analog, `4 pi G / c^2`.
    pub mu_g: f64,
    pub mode: ConstantsMode,
}

const CODATA_G: f64 = 6.674_30e-11;
const CODATA_C: f64 = 299_792_458.0;
const CODATA_HBAR: f64 = 1.054_571_817e-34;
const CODATA_E: f64 = 1.602_176_634e-19;
const CODATA_M_E: f64 = 9.109_383_701_5e-31;
const CODATA_MU_0: f64 = 1.256_637_062_12e-6;

impl PhysicalConstants {
    pub fn codata() -> Self {
        Self::build(
            CODATA_G,
            CODATA_C,
            CODATA_HBAR,
            CODATA_E,
            CODATA_M_E,
            CODATA_MU_0,
            ConstantsMode::Codata,
        )
    }

    pub fn paper() -> Self {
        Self::build(
            6.67e-11,
            3.00e8,
            CODATA_HBAR,
            CODATA_E,
            CODATA_M_E,
            CODATA_MU_0,
            ConstantsMode::Paper,
        )
    }

    pub fn for_mode(mode: ConstantsMode) -> Self {
        match mode {
            ConstantsMode::Paper => Self::paper(),
            _ => Self::codata(),
        }
    }

    /// Arbitrary constant set; every value must be positive and finite.
    pub fn custom(g: f64, c: f64, hbar: f64, e: f64, m_e: f64, mu_0: f64) -> Result<Self> {
        ensure_positive("G", g)?;
        ensure_positive("c", c)?;
        ensure_positive("hbar", hbar)?;
        ensure_positive("e", e)?;
        ensure_positive("m_e", m_e)?;
        ensure_positive("mu_0", mu_0)?;
        Ok(Self::build(g, c, hbar, e, m_e, mu_0, ConstantsMode::Custom))
    }

    /// Nondimensional set with `G = 1/(4 pi)` and every other constant 1, so
    /// `eps_g = mu_g = 1`. Handy for test problems with O(1) fields.
    pub fn unit() -> Self {
        Self::build(1.0 / (4.0 * PI), 1.0, 1.0, 1.0, 1.0, 1.0, ConstantsMode::Custom)
    }

    fn build(g: f64, c: f64, hbar: f64, e: f64, m_e: f64, mu_0: f64, mode: ConstantsMode) -> Self {
        PhysicalConstants {
            g,
            c,
            hbar,
            e,
            m_e,
            mu_0,
            eps_g: 1.0 / (4.0 * PI * g),
            mu_g: 4.0 * PI * g / (c * c),
            mode,
        }
    }

    /// Vacuum permittivity implied by `mu_0` and `c`.
    pub fn eps_0(&self) -> f64 {
        1.0 / (self.mu_0 * self.c * self.c)
    }

    /// Planck constant `h = 2 pi hbar`.
    pub fn planck(&self) -> f64 {
        2.0 * PI * self.hbar
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::codata()
    }
}

/// `1/(4 pi G)` in SI units.
pub fn gravitational_permittivity(g: f64) -> Result<f64> {
    ensure_positive("G", g)?;
    Ok(1.0 / (4.0 * PI * g))
}

/// `4 pi G / c^2` in SI units.
pub fn gravitational_permeability(g: f64, c: f64) -> Result<f64> {
    ensure_positive("G", g)?;
    ensure_positive("c", c)?;
    Ok(4.0 * PI * g / (c * c))
}
