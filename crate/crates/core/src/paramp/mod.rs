//! Radiation-pressure parametric amplification by a moving superconducting
//! membrane.
//!
//! Two analyses are provided. The unseparated one treats a vibrating wire in
//! a single cavity driven at the beat of a pump and a Stokes mode; its gain
//! coefficient `kappa_S` is balanced against the Stokes cavity loss. The
//! separated one puts the signal (membrane motion) and the idler in different
//! cavities, coupled by a pump of complex amplitude `B_p`:
//!
//! ```text
//! d|eps|/dt = K1 |B_i| - (2/tau_s) |eps|      K1 = A |B_p| / (mu0 m Omega)
//! d|B_i|/dt = K2 |eps| - (2/tau_i) |B_i|      K2 = Omega |B_p| / L
//! ```
//!
//! Threshold is reached when `K1 K2 = 4 / (tau_i tau_s)`.

mod separated;

pub use separated::{
    coupling_constants, growth_eigenvalue, integrate_envelopes, net_growth_rate, power_flow,
    separated_threshold, threshold_report, Couplings, EnvelopeRun, EnvelopeState, PowerFlow,
    SeparatedCavityParams,
};

use nalgebra::Matrix3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_non_negative, ensure_positive, Error, Result};
use crate::{PhysicalConstants, Vec3};

/// Charge above which the membrane motion is dominated by the Coulomb force of
/// the cavity field.
pub const SLAVING_CHARGE: f64 = 20e-12;

/// Mechanical side of the amplifier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MembraneParams {
    /// Mass, kg.
    pub mass: f64,
    /// Mechanical resonance `Omega`, rad/s.
    pub omega: f64,
    /// Amplitude damping rate `gamma = Omega / Q_Omega`, s^-1.
    pub gamma: f64,
    /// Effective area, m^2.
    pub a_eff: f64,
    /// London penetration depth, m.
    pub delta: f64,
    /// Membrane charge, C.
    pub charge: f64,
}

impl MembraneParams {
    pub fn new(mass: f64, omega: f64, q_omega: f64, a_eff: f64) -> Result<Self> {
        ensure_positive("mass", mass)?;
        ensure_positive("Omega", omega)?;
        ensure_positive("Q_Omega", q_omega)?;
        ensure_positive("A_eff", a_eff)?;
        Ok(MembraneParams { mass, omega, gamma: omega / q_omega, a_eff, delta: 1e-7, charge: 0.0 })
    }

    pub fn q_omega(&self) -> f64 {
        self.omega / self.gamma
    }

    pub fn is_slaved(&self) -> bool {
        self.charge >= SLAVING_CHARGE
    }
}

/// Pump field of complex amplitude `B_p = |B_p| e^{i phi_p}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PumpDrive {
    /// Complex magnetic amplitude, T.
    pub b_p: Complex64,
    /// Pump angular frequency, rad/s.
    pub omega_p: f64,
}

impl PumpDrive {
    pub fn new(magnitude: f64, phase: f64, omega_p: f64) -> Result<Self> {
        ensure_non_negative("|B_p|", magnitude)?;
        ensure_positive("omega_p", omega_p)?;
        Ok(PumpDrive { b_p: Complex64::from_polar(magnitude, phase), omega_p })
    }

    /// Pump whose time-averaged stored energy `|B_p|^2 A L / mu0` is `energy`.
    pub fn from_stored_energy(
        energy: f64,
        a_eff: f64,
        l_eff: f64,
        phase: f64,
        omega_p: f64,
        constants: &PhysicalConstants,
    ) -> Result<Self> {
        ensure_non_negative("U_p", energy)?;
        ensure_positive("A_eff", a_eff)?;
        ensure_positive("L_eff", l_eff)?;
        Self::new((constants.mu_0 * energy / (a_eff * l_eff)).sqrt(), phase, omega_p)
    }

    pub fn magnitude(&self) -> f64 {
        self.b_p.norm()
    }

    pub fn phase(&self) -> f64 {
        self.b_p.arg()
    }

    /// Stored energy `|B_p|^2 A L / mu0`, J.
    pub fn stored_energy(&self, a_eff: f64, l_eff: f64, constants: &PhysicalConstants) -> f64 {
        self.b_p.norm_sqr() * a_eff * l_eff / constants.mu_0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Below,
    At,
    Above,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Below => "below",
            Regime::At => "at",
            Regime::Above => "above",
        })
    }
}

/// Relative band inside which gain and loss count as balanced.
pub const AT_THRESHOLD_TOLERANCE: f64 = 1e-9;

impl Regime {
    pub fn classify(gain: f64, loss: f64) -> Self {
        if (gain - loss).abs() <= AT_THRESHOLD_TOLERANCE * loss.abs().max(gain.abs()) {
            Regime::At
        } else if gain > loss {
            Regime::Above
        } else {
            Regime::Below
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossRates {
    /// s^-1
    pub idler: f64,
    /// s^-1
    pub signal: f64,
}

/// Threshold summary.
///
/// In the separated analysis `Lambda_at_pump` is `sqrt(K1 K2)` at the supplied
/// pump (at the threshold energy if none is given) and the loss rates are
/// `2/tau_i`, `2/tau_s`. In the unseparated analysis `Lambda_at_pump` and
/// `kappa_S` both hold the Stokes energy gain, the signal loss is
/// `omega_S / Q_S` and the idler entry is the mechanical damping `gamma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct ThresholdReport {
    pub U_p_threshold: f64,
    pub P_p_threshold: f64,
    pub Lambda_at_pump: f64,
    pub kappa_S: Option<f64>,
    pub loss_rates: LossRates,
    pub regime: Regime,
}

/// `T_ij = eps0 (E_i E_j - d_ij E^2/2) + (B_i B_j - d_ij B^2/2) / mu0`, Pa.
pub fn maxwell_stress(e: &Vec3, b: &Vec3, constants: &PhysicalConstants) -> Matrix3<f64> {
    let eps0 = constants.eps_0();
    let id = Matrix3::identity();
    (e * e.transpose() - id * (0.5 * e.norm_squared())) * eps0
        + (b * b.transpose() - id * (0.5 * b.norm_squared())) / constants.mu_0
}

/// `B^2 / (2 mu0)`, Pa.
pub fn magnetic_pressure(b: f64, constants: &PhysicalConstants) -> f64 {
    b * b / (2.0 * constants.mu_0)
}

/// Complex force amplitude at the beat frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeatForce {
    /// `B_p conj(B_other) A / mu0`, N.
    pub amplitude: Complex64,
    /// The weak-field expansion assumes `|B_p| >= 10 |B_other|`.
    pub weak_pump: bool,
}

pub fn beat_force(b_p: Complex64, b_other: Complex64, a_eff: f64, constants: &PhysicalConstants) -> BeatForce {
    BeatForce {
        amplitude: b_p * b_other.conj() * (a_eff / constants.mu_0),
        weak_pump: b_other.norm() > 0.0 && b_p.norm() < 10.0 * b_other.norm(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShoResponse {
    /// Displacement amplitude, m.
    pub z_max: Complex64,
    /// Velocity amplitude `-i Omega z_max`, m/s.
    pub v_max: Complex64,
}

/// On-resonance response of the damped membrane to a force amplitude.
pub fn driven_sho_response(force: Complex64, params: &MembraneParams) -> Result<ShoResponse> {
    if !(params.gamma > 0.0) {
        return Err(Error::UndampedResonance);
    }
    let denom = params.mass * params.gamma;
    let z_max = Complex64::i() * force / (denom * params.omega);
    Ok(ShoResponse { z_max, v_max: force / denom })
}

/// Stokes energy gain `2 |B_p|^2 A / (mu0 m gamma L)`, s^-1.
pub fn stokes_gain(pump: &PumpDrive, params: &MembraneParams, l_eff: f64, constants: &PhysicalConstants) -> f64 {
    2.0 * pump.b_p.norm_sqr() * params.a_eff / (constants.mu_0 * params.mass * params.gamma * l_eff)
}

/// Pump energy at which `kappa_S = omega_S / Q_S`:
/// `U_p = m Omega omega_S L^2 / (2 Q_S Q_Omega)`, J.
pub fn unseparated_threshold(mass: f64, omega: f64, omega_s: f64, l_eff: f64, q_s: f64, q_omega: f64) -> Result<f64> {
    for (n, v) in [("mass", mass), ("Omega", omega), ("omega_S", omega_s), ("L_eff", l_eff), ("Q_S", q_s), ("Q_Omega", q_omega)] {
        ensure_positive(n, v)?;
    }
    Ok(0.5 * mass * omega * omega_s * l_eff * l_eff / (q_s * q_omega))
}

/// Braginsky's estimate `m omega_s^2 L^2 / (2 Q_i Q_s)`, J.
pub fn braginsky_threshold(mass: f64, omega_s: f64, l: f64, q_i: f64, q_s: f64) -> Result<f64> {
    for (n, v) in [("mass", mass), ("omega_s", omega_s), ("L", l), ("Q_i", q_i), ("Q_s", q_s)] {
        ensure_positive(n, v)?;
    }
    Ok(0.5 * mass * omega_s * omega_s * l * l / (q_i * q_s))
}

/// Unseparated-branch report; `pump` defaults to the threshold energy.
#[allow(clippy::too_many_arguments)]
pub fn unseparated_report(
    membrane: &MembraneParams,
    omega_s: f64,
    q_s: f64,
    omega_p: f64,
    q_p: f64,
    l_eff: f64,
    pump: Option<&PumpDrive>,
    constants: &PhysicalConstants,
) -> Result<ThresholdReport> {
    ensure_positive("omega_p", omega_p)?;
    ensure_positive("Q_p", q_p)?;
    let u = unseparated_threshold(membrane.mass, membrane.omega, omega_s, l_eff, q_s, membrane.q_omega())?;
    let pump = match pump {
        Some(p) => *p,
        None => PumpDrive::from_stored_energy(u, membrane.a_eff, l_eff, 0.0, omega_p, constants)?,
    };
    let kappa = stokes_gain(&pump, membrane, l_eff, constants);
    let loss = omega_s / q_s;
    Ok(ThresholdReport {
        U_p_threshold: u,
        P_p_threshold: u * omega_p / q_p,
        Lambda_at_pump: kappa,
        kappa_S: Some(kappa),
        loss_rates: LossRates { idler: membrane.gamma, signal: loss },
        regime: Regime::classify(kappa, loss),
    })
}

/// Idler field from the motional EMF, `conj(v) B_p`, V/m.
pub fn motional_idler_field(v: Complex64, b_p: Complex64) -> Complex64 {
    v.conj() * b_p
}

/// Supercurrent density carried within a penetration depth, `B / (mu0 delta)`.
pub fn surface_current_from_field(b: Complex64, delta: f64, constants: &PhysicalConstants) -> Result<Complex64> {
    ensure_positive("delta", delta)?;
    Ok(b / (constants.mu_0 * delta))
}
