//! Cylindrical cavity resonances, wire-split doublets and synthetic S21 traces.
//!
//! Mode frequencies follow the closed cylinder dispersion relation
//!
//! ```text
//! f_lmn = (c / 2 pi) sqrt((x_lm / a)^2 + (n pi / L)^2)
//! ```
//!
//! with `x_lm` the `m`-th zero of `J_l'` (TE) or `J_l` (TM) and `a = D/2`.

mod bessel;

pub use bessel::{bessel_j, bessel_j_prime, bessel_prime_root, bessel_root, MAX_INDEX};

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_non_negative, ensure_positive, Error, Result};
use crate::{PhysicalConstants, Tabular};

/// Metres per inch.
pub const INCH: f64 = 0.0254;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityGeometry {
    /// Length `L`, m.
    pub length: f64,
    /// Diameter `D`, m.
    pub diameter: f64,
}

impl CavityGeometry {
    pub fn new(length: f64, diameter: f64) -> Result<Self> {
        ensure_positive("length", length)?;
        ensure_positive("diameter", diameter)?;
        Ok(CavityGeometry { length, diameter })
    }

    pub fn from_inches(length_in: f64, diameter_in: f64) -> Result<Self> {
        Self::new(length_in * INCH, diameter_in * INCH)
    }

    pub fn radius(&self) -> f64 {
        0.5 * self.diameter
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ModeKind {
    Te,
    Tm,
}

/// Mode label `TE_lmn` / `TM_lmn`: azimuthal, radial and axial indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModeIndex {
    pub kind: ModeKind,
    pub l: u32,
    pub m: u32,
    pub n: u32,
}

impl ModeIndex {
    pub fn te(l: u32, m: u32, n: u32) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::Range(format!("TE{l}{m}{n} needs m >= 1 and n >= 1")));
        }
        Ok(ModeIndex { kind: ModeKind::Te, l, m, n })
    }

    pub fn tm(l: u32, m: u32, n: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::Range(format!("TM{l}{m}{n} needs m >= 1")));
        }
        Ok(ModeIndex { kind: ModeKind::Tm, l, m, n })
    }
}

impl std::fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let kind = match self.kind {
            ModeKind::Te => "TE",
            ModeKind::Tm => "TM",
        };
        write!(f, "{kind}{}{}{}", self.l, self.m, self.n)
    }
}

fn mode_frequency(geometry: &CavityGeometry, x: f64, n: u32, constants: &PhysicalConstants) -> f64 {
    let kr = x / geometry.radius();
    let kz = n as f64 * PI / geometry.length;
    constants.c / (2.0 * PI) * kr.hypot(kz)
}

/// Resonance of a TE mode, Hz.
pub fn te_mode_frequency(geometry: &CavityGeometry, index: &ModeIndex, constants: &PhysicalConstants) -> Result<f64> {
    if index.kind != ModeKind::Te {
        return Err(Error::Kind(format!("{index} is not a TE mode")));
    }
    if index.n == 0 {
        return Err(Error::Range("TE modes need n >= 1".into()));
    }
    let x = bessel_prime_root(index.l, index.m)?;
    Ok(mode_frequency(geometry, x, index.n, constants))
}

/// Resonance of a TM mode, Hz.
pub fn tm_mode_frequency(geometry: &CavityGeometry, index: &ModeIndex, constants: &PhysicalConstants) -> Result<f64> {
    if index.kind != ModeKind::Tm {
        return Err(Error::Kind(format!("{index} is not a TM mode")));
    }
    let x = bessel_root(index.l, index.m)?;
    Ok(mode_frequency(geometry, x, index.n, constants))
}

/// Either kind of mode, Hz.
pub fn mode_frequency_of(geometry: &CavityGeometry, index: &ModeIndex, constants: &PhysicalConstants) -> Result<f64> {
    match index.kind {
        ModeKind::Te => te_mode_frequency(geometry, index, constants),
        ModeKind::Tm => tm_mode_frequency(geometry, index, constants),
    }
}

/// Pump/Stokes pair produced by splitting one resonance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DoubletSpec {
    /// Lower member, Hz.
    pub f_s: f64,
    /// Upper member, Hz.
    pub f_p: f64,
    pub q_s: f64,
    pub q_p: f64,
}

impl DoubletSpec {
    /// Builds the pair in either order; the lower frequency becomes the
    /// Stokes member and keeps its own Q.
    pub fn new(f_a: f64, q_a: f64, f_b: f64, q_b: f64) -> Result<Self> {
        for (name, v) in [("frequency", f_a), ("frequency", f_b), ("Q", q_a), ("Q", q_b)] {
            ensure_positive(name, v)?;
        }
        let ((f_s, q_s), (f_p, q_p)) = if f_a <= f_b { ((f_a, q_a), (f_b, q_b)) } else { ((f_b, q_b), (f_a, q_a)) };
        Ok(DoubletSpec { f_s, f_p, q_s, q_p })
    }

    /// Angular splitting `2 pi (f_p - f_S)`, rad/s.
    pub fn omega(&self) -> f64 {
        2.0 * PI * (self.f_p - self.f_s)
    }

    pub fn splitting_hz(&self) -> f64 {
        self.f_p - self.f_s
    }

    pub fn is_degenerate(&self) -> bool {
        self.f_p == self.f_s
    }
}

/// Two identical modes coupled with strength `g` (Hz) split symmetrically
/// to `f0 -+ g/2`.
pub fn doublet_from_coupling(f0: f64, g: f64, q_s: f64, q_p: f64) -> Result<DoubletSpec> {
    ensure_positive("f0", f0)?;
    ensure_non_negative("coupling", g)?;
    if g >= 2.0 * f0 {
        return Err(Error::Domain(format!("coupling {g} Hz would push the lower mode below zero")));
    }
    DoubletSpec::new(f0 - 0.5 * g, q_s, f0 + 0.5 * g, q_p)
}

/// Uniform frequency grid, Hz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl FrequencyGrid {
    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self> {
        ensure_positive("start", start)?;
        ensure_positive("stop", stop)?;
        if stop <= start || count < 2 {
            return Err(Error::Configuration(format!(
                "grid needs stop > start and count >= 2, got [{start}, {stop}] x {count}"
            )));
        }
        Ok(FrequencyGrid { start, stop, count })
    }

    pub fn step(&self) -> f64 {
        (self.stop - self.start) / (self.count - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.count {
            self.stop
        } else {
            self.start + i as f64 * self.step()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.point(i)).collect()
    }
}

/// Synthetic `|S21|^2` on a frequency grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTrace {
    pub freq_hz: Vec<f64>,
    pub s21_power: Vec<f64>,
    pub doublet: DoubletSpec,
    pub amplitudes: [f64; 2],
}

impl SpectrumTrace {
    /// Frequencies of strict interior local maxima.
    pub fn local_maxima(&self) -> Vec<f64> {
        let p = &self.s21_power;
        (1..p.len().saturating_sub(1))
            .filter(|&i| p[i] > p[i - 1] && p[i] >= p[i + 1])
            .map(|i| self.freq_hz[i])
            .collect()
    }

    /// Trapezoid integral of the power over the grid, Hz.
    pub fn area(&self) -> f64 {
        self.freq_hz
            .windows(2)
            .zip(self.s21_power.windows(2))
            .map(|(f, p)| 0.5 * (f[1] - f[0]) * (p[0] + p[1]))
            .sum()
    }
}

impl Tabular for SpectrumTrace {
    fn columns(&self) -> Vec<String> {
        ["freq_hz", "s21_power"].map(String::from).to_vec()
    }

    fn rows(&self) -> Vec<Vec<f64>> {
        self.freq_hz.iter().zip(&self.s21_power).map(|(f, p)| vec![*f, *p]).collect()
    }
}

/// One Lorentzian power profile `A / (1 + 4 Q^2 (f/f0 - 1)^2)`.
pub fn lorentzian(f: f64, f0: f64, q: f64, amplitude: f64) -> f64 {
    let x = 2.0 * q * (f / f0 - 1.0);
    amplitude / (1.0 + x * x)
}

/// Sum of the Stokes and pump Lorentzians; `amplitudes = [A_S, A_p]`.
pub fn synth_s21(doublet: &DoubletSpec, amplitudes: [f64; 2], grid: &FrequencyGrid) -> Result<SpectrumTrace> {
    ensure_positive("Q_S", doublet.q_s)?;
    ensure_positive("Q_p", doublet.q_p)?;
    ensure_non_negative("A_S", amplitudes[0])?;
    ensure_non_negative("A_p", amplitudes[1])?;
    let freq_hz = grid.points();
    let s21_power = freq_hz
        .par_iter()
        .map(|&f| {
            lorentzian(f, doublet.f_s, doublet.q_s, amplitudes[0])
                + lorentzian(f, doublet.f_p, doublet.q_p, amplitudes[1])
        })
        .collect();
    Ok(SpectrumTrace { freq_hz, s21_power, doublet: *doublet, amplitudes })
}

/// Role assignment of the doublet members.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StokesPumpAssignment {
    /// Stokes (lower) angular frequency, rad/s.
    pub omega_s: f64,
    /// Pump (upper) angular frequency, rad/s.
    pub omega_p: f64,
    /// Beat frequency `omega_p - omega_S`, rad/s.
    #[serde(rename = "Omega")]
    pub omega: f64,
    /// Where the anti-Stokes sideband `omega_p + Omega` would fall, rad/s.
    pub omega_anti_stokes: f64,
    /// True when the anti-Stokes line sits more than three pump half-widths
    /// away from the pump resonance, so no cavity mode supports it.
    pub anti_stokes_suppressed: bool,
    pub warnings: Vec<String>,
}

pub fn stokes_pump_assignment(doublet: &DoubletSpec) -> StokesPumpAssignment {
    let omega_s = 2.0 * PI * doublet.f_s;
    let omega_p = 2.0 * PI * doublet.f_p;
    let omega = doublet.omega();
    let half_width_hz = doublet.f_p / (2.0 * doublet.q_p);
    let mut warnings = Vec::new();
    if doublet.is_degenerate() {
        warnings.push("degenerate doublet: pump and Stokes coincide, Omega = 0".to_string());
    }
    StokesPumpAssignment {
        omega_s,
        omega_p,
        omega,
        omega_anti_stokes: omega_p + omega,
        anti_stokes_suppressed: doublet.splitting_hz() > 3.0 * half_width_hz,
        warnings,
    }
}
