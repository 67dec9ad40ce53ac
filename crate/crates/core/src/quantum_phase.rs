//! Minimal coupling to both vector potentials, Aharonov-Bohm phases, time
//! holonomy and the London moment of a rotating superconductor.
//!
//! A particle of charge `q` and mass `m` couples through the kinetic momentum
//! `p - qA - mh`, so a loop enclosing magnetic flux `Phi` and gravito-magnetic
//! flux `Phi_g` picks up the phase `(q Phi + m Phi_g) / hbar`.
//!
//! The time-holonomy functions take the dimensionless metric components
//! `h_0i`; they are related to the vector potential by `h_i = c h_0i`, which
//! makes the Compton phase of the holonomy equal to the `m Phi_g / hbar` term.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};
use crate::gem_field::{line_integral_flux, ClosedCurve};
use crate::{PhysicalConstants, Vec3};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParticleSpecies {
    /// Charge, C.
    pub charge: f64,
    /// Mass, kg.
    pub mass: f64,
    pub label: String,
}

impl ParticleSpecies {
    pub fn new(label: impl Into<String>, charge: f64, mass: f64) -> Result<Self> {
        ensure_positive("mass", mass)?;
        if !charge.is_finite() {
            return Err(Error::Domain(format!("charge must be finite, got {charge}")));
        }
        Ok(ParticleSpecies { charge, mass, label: label.into() })
    }

    /// Charge `-e`, mass `m_e`.
    pub fn electron(k: &PhysicalConstants) -> Self {
        ParticleSpecies { charge: -k.e, mass: k.m_e, label: "electron".into() }
    }

    /// Charge `2e`, mass `2 m_e`.
    pub fn cooper_pair(k: &PhysicalConstants) -> Self {
        ParticleSpecies { charge: 2.0 * k.e, mass: 2.0 * k.m_e, label: "cooper_pair".into() }
    }
}

/// Magnetic flux (Wb) and gravito-magnetic flux (m^2/s) through one loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluxPair {
    pub phi: f64,
    pub phi_g: f64,
}

impl FluxPair {
    /// Fluxes as circulations of the two vector potentials around `curve`.
    pub fn from_potentials<A, H>(a: A, h: H, curve: &ClosedCurve) -> Result<Self>
    where
        A: Fn(&Vec3) -> Vec3,
        H: Fn(&Vec3) -> Vec3,
    {
        Ok(FluxPair { phi: line_integral_flux(a, curve)?, phi_g: line_integral_flux(h, curve)? })
    }
}

/// Terms of `(p - qA - mh)^2 / 2m + V`, J.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HamiltonianBreakdown {
    /// `p^2/2m + V`
    #[serde(rename = "H0")]
    pub h0: f64,
    /// `-(q/m) p.A`
    #[serde(rename = "H_pA")]
    pub h_pa: f64,
    /// `-p.h`
    #[serde(rename = "H_ph")]
    pub h_ph: f64,
    /// `q A.h`
    #[serde(rename = "H_Ah")]
    pub h_ah: f64,
    /// `q^2 A^2 / 2m`
    #[serde(rename = "H_AA")]
    pub h_aa: f64,
    /// `m h^2 / 2`
    #[serde(rename = "H_hh")]
    pub h_hh: f64,
    #[serde(rename = "V")]
    pub v: f64,
    pub total: f64,
}

/// Kinetic momentum `p - qA - mh`.
pub fn dewitt_momentum(p: &Vec3, species: &ParticleSpecies, a: &Vec3, h: &Vec3) -> Vec3 {
    p - a * species.charge - h * species.mass
}

pub fn hamiltonian_terms(
    p: &Vec3,
    species: &ParticleSpecies,
    a: &Vec3,
    h: &Vec3,
    potential: f64,
) -> HamiltonianBreakdown {
    let (q, m) = (species.charge, species.mass);
    let h0 = p.norm_squared() / (2.0 * m) + potential;
    let h_pa = -(q / m) * p.dot(a);
    let h_ph = -p.dot(h);
    let h_ah = q * a.dot(h);
    let h_aa = q * q * a.norm_squared() / (2.0 * m);
    let h_hh = 0.5 * m * h.norm_squared();
    HamiltonianBreakdown {
        h0,
        h_pa,
        h_ph,
        h_ah,
        h_aa,
        h_hh,
        v: potential,
        total: h0 + h_pa + h_ph + h_ah + h_aa + h_hh,
    }
}

/// `q Phi / hbar + m Phi_g / hbar`, rad.
pub fn total_ab_phase(species: &ParticleSpecies, fluxes: &FluxPair, constants: &PhysicalConstants) -> f64 {
    (species.charge * fluxes.phi + species.mass * fluxes.phi_g) / constants.hbar
}

/// Metric components `h_0i = h_i / c` from a gravitational vector potential.
pub fn metric_from_potential<H>(h: H, constants: &PhysicalConstants) -> impl Fn(&Vec3) -> Vec3
where
    H: Fn(&Vec3) -> Vec3,
{
    let inv_c = 1.0 / constants.c;
    move |p: &Vec3| h(p) * inv_c
}

/// Synchronisation defect around a loop, s.
///
/// Without `g00` this is the first-order form `(1/c) oint h_0i dx^i`. With
/// `g00` it is `-(1/c) oint (h_0i / g00) dx^i`, which reduces to the first
/// form for `g00 = -1`.
pub fn time_holonomy<M>(
    h0i: M,
    curve: &ClosedCurve,
    constants: &PhysicalConstants,
    g00: Option<&dyn Fn(&Vec3) -> f64>,
) -> Result<f64>
where
    M: Fn(&Vec3) -> Vec3,
{
    curve.validate()?;
    let inv_c = 1.0 / constants.c;
    match g00 {
        None => Ok(line_integral_flux(h0i, curve)? * inv_c),
        Some(g) => {
            for (p, _) in curve.nodes() {
                let v = g(&p);
                if !v.is_finite() || v.abs() < f64::EPSILON {
                    return Err(Error::SingularMetric(format!("({:e}, {:e}, {:e})", p.x, p.y, p.z)));
                }
            }
            Ok(-line_integral_flux(|p| h0i(p) / g(p), curve)? * inv_c)
        }
    }
}

/// `(m c^2 / hbar) dt`, rad.
pub fn compton_phase(dt: f64, mass: f64, constants: &PhysicalConstants) -> f64 {
    mass * constants.c * constants.c / constants.hbar * dt
}

/// London field `2 m_e Omega / e`, T. Signed along the rotation vector.
pub fn london_moment(omega_rot: f64, constants: &PhysicalConstants) -> f64 {
    2.0 * constants.m_e * omega_rot / constants.e
}

/// Magnetic flux through a rotating superconducting ring with fluxoid number
/// `n`, Wb.
///
/// Solves `q Phi + m Phi_g = 2 pi n hbar` for Cooper pairs, where the rigid
/// rotation potential `h = Omega x r` gives `Phi_g = 2 pi R^2 Omega`.
pub fn fluxoid_solve(ring_radius: f64, omega_rot: f64, n: i64, constants: &PhysicalConstants) -> Result<f64> {
    ensure_positive("ring_radius", ring_radius)?;
    let pair = ParticleSpecies::cooper_pair(constants);
    let phi_g = 2.0 * PI * ring_radius * ring_radius * omega_rot;
    Ok((2.0 * PI * n as f64 * constants.hbar - pair.mass * phi_g) / pair.charge)
}

/// Largest change of `|psi|^2` under `psi -> psi e^{i phi}` over `points`.
pub fn local_gauge_check<P, F>(psi: P, phase: F, points: &[Vec3]) -> f64
where
    P: Fn(&Vec3) -> Complex64,
    F: Fn(&Vec3) -> f64,
{
    points
        .iter()
        .map(|p| {
            let a = psi(p);
            let b = a * Complex64::from_polar(1.0, phase(p));
            (b.norm_sqr() - a.norm_sqr()).abs()
        })
        .fold(0.0, f64::max)
}

/// `(-i hbar grad - qA - mh) psi` at `point`, with a fourth-order
/// central-difference gradient of step `step`.
pub fn kinetic_momentum_action<P, A, H>(
    psi: P,
    a: A,
    h: H,
    species: &ParticleSpecies,
    constants: &PhysicalConstants,
    point: &Vec3,
    step: f64,
) -> [Complex64; 3]
where
    P: Fn(&Vec3) -> Complex64,
    A: Fn(&Vec3) -> Vec3,
    H: Fn(&Vec3) -> Vec3,
{
    let value = psi(point);
    let shift = a(point) * species.charge + h(point) * species.mass;
    let mut out = [Complex64::new(0.0, 0.0); 3];
    for (d, o) in out.iter_mut().enumerate() {
        let mut e = Vec3::zeros();
        e[d] = step;
        let grad = (psi(&(point - e * 2.0)) - psi(&(point + e * 2.0))
            + (psi(&(point + e)) - psi(&(point - e))) * 8.0)
            / (12.0 * step);
        *o = Complex64::new(0.0, -constants.hbar) * grad - value * shift[d];
    }
    out
}
