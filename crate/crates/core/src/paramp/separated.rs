//! Separated signal/idler oscillator: couplings, threshold and the
//! slowly-varying envelope integrator.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{LossRates, PumpDrive, Regime, ThresholdReport};
use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::ode::{rk4_step, step_count};
use crate::{PhysicalConstants, Tabular};

/// Largest accepted `dt * max(rate)`.
pub const STABILITY_FRACTION: f64 = 0.01;

/// Stored envelope states are thinned to roughly this many rows.
const MAX_RECORDED: usize = 4000;

/// Signal cavity (which carries the membrane motion), idler cavity and pump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparatedCavityParams {
    /// Signal angular frequency, equal to the membrane `Omega`, rad/s.
    pub omega_s: f64,
    pub omega_i: f64,
    pub omega_p: f64,
    pub q_s: f64,
    pub q_i: f64,
    pub q_p: f64,
    /// Effective length, m.
    pub l_eff: f64,
    /// Effective membrane area, m^2.
    pub a_eff: f64,
}

impl SeparatedCavityParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(omega_s: f64, omega_i: f64, omega_p: f64, q_s: f64, q_i: f64, q_p: f64, l_eff: f64, a_eff: f64) -> Result<Self> {
        let p = SeparatedCavityParams { omega_s, omega_i, omega_p, q_s, q_i, q_p, l_eff, a_eff };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (n, v) in [
            ("omega_s", self.omega_s),
            ("omega_i", self.omega_i),
            ("omega_p", self.omega_p),
            ("Q_s", self.q_s),
            ("Q_i", self.q_i),
            ("Q_p", self.q_p),
            ("L_eff", self.l_eff),
            ("A_eff", self.a_eff),
        ] {
            ensure_positive(n, v)?;
        }
        Ok(())
    }

    /// `Q_s / omega_s`, s.
    pub fn tau_s(&self) -> f64 {
        self.q_s / self.omega_s
    }

    pub fn tau_i(&self) -> f64 {
        self.q_i / self.omega_i
    }

    pub fn tau_p(&self) -> f64 {
        self.q_p / self.omega_p
    }

    /// Amplitude loss rates `2/tau`.
    pub fn loss_rates(&self) -> LossRates {
        LossRates { idler: 2.0 / self.tau_i(), signal: 2.0 / self.tau_s() }
    }

    /// `omega_p - omega_s - omega_i`, rad/s.
    pub fn detuning(&self) -> f64 {
        self.omega_p - self.omega_s - self.omega_i
    }

    pub fn v_eff(&self) -> f64 {
        self.a_eff * self.l_eff
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Couplings {
    /// `A |B_p| / (mu0 m Omega)`, m T^-1 s^-1.
    pub k1: f64,
    /// `Omega |B_p| / L`, T m^-1 s^-1.
    pub k2: f64,
}

pub fn coupling_constants(
    pump: &PumpDrive,
    mass: f64,
    cav: &SeparatedCavityParams,
    constants: &PhysicalConstants,
) -> Result<Couplings> {
    ensure_positive("mass", mass)?;
    cav.validate()?;
    let b = pump.magnitude();
    Ok(Couplings {
        k1: cav.a_eff * b / (constants.mu_0 * mass * cav.omega_s),
        k2: cav.omega_s * b / cav.l_eff,
    })
}

/// Lossless growth rate `Lambda = sqrt(K1 K2)`, s^-1.
pub fn growth_eigenvalue(c: &Couplings) -> Result<f64> {
    let prod = c.k1 * c.k2;
    if !(prod >= 0.0) {
        return Err(Error::Domain(format!("K1 K2 = {prod:e} must be non-negative")));
    }
    Ok(prod.sqrt())
}

/// Larger eigenvalue of the linear envelope system with amplitude losses
/// `a` (signal) and `b` (idler); positive above threshold.
pub fn net_growth_rate(lambda: f64, a: f64, b: f64) -> f64 {
    let half_diff = 0.5 * (a - b);
    -0.5 * (a + b) + (half_diff * half_diff + lambda * lambda).sqrt()
}

/// Threshold figures without reference to a particular pump.
///
/// `U_p = 4 m omega_i omega_s L^2 / (Q_i Q_s)` and `P_p = U_p omega_p / Q_p`.
pub fn separated_threshold(cav: &SeparatedCavityParams, mass: f64) -> Result<ThresholdReport> {
    ensure_positive("mass", mass)?;
    cav.validate()?;
    let u = 4.0 * mass * cav.omega_i * cav.omega_s * cav.l_eff * cav.l_eff / (cav.q_i * cav.q_s);
    let lambda = (u / (mass * cav.l_eff * cav.l_eff)).sqrt();
    Ok(report(cav, u, lambda))
}

/// Threshold figures with `Lambda_at_pump` and `regime` evaluated for `pump`.
pub fn threshold_report(
    cav: &SeparatedCavityParams,
    mass: f64,
    pump: Option<&PumpDrive>,
    constants: &PhysicalConstants,
) -> Result<ThresholdReport> {
    let base = separated_threshold(cav, mass)?;
    match pump {
        None => Ok(base),
        Some(p) => {
            let lambda = growth_eigenvalue(&coupling_constants(p, mass, cav, constants)?)?;
            Ok(report(cav, base.U_p_threshold, lambda))
        }
    }
}

fn report(cav: &SeparatedCavityParams, u: f64, lambda: f64) -> ThresholdReport {
    let loss = cav.loss_rates();
    ThresholdReport {
        U_p_threshold: u,
        P_p_threshold: u * cav.omega_p / cav.q_p,
        Lambda_at_pump: lambda,
        kappa_S: None,
        loss_rates: loss,
        regime: Regime::classify(lambda, (loss.idler * loss.signal).sqrt()),
    }
}

/// Complex envelopes at time `t`: membrane displacement `eps` (m) and idler
/// field `b_i` (T).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeState {
    pub t: f64,
    pub eps: Complex64,
    pub b_i: Complex64,
}

impl EnvelopeState {
    pub fn from_polar(eps_abs: f64, phi_s: f64, b_abs: f64, phi_i: f64) -> Self {
        EnvelopeState {
            t: 0.0,
            eps: Complex64::from_polar(eps_abs, phi_s),
            b_i: Complex64::from_polar(b_abs, phi_i),
        }
    }

    /// `phi_p - phi_i - phi_s`; growth is fastest at `-pi/2`.
    pub fn relative_phase(&self, pump: &PumpDrive) -> f64 {
        let z = pump.b_p * self.b_i.conj() * self.eps.conj();
        z.arg()
    }
}

/// Instantaneous energy bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerFlow {
    /// Pump to signal, `-2 Im(F Omega conj(eps))`, W.
    pub signal: f64,
    /// Pump to idler, `2 Re(i Omega conj(eps) B_p conj(B_i)) A / mu0`, W.
    pub idler: f64,
    /// `m Omega^2 |eps|^2`, J.
    pub signal_energy: f64,
    /// `|B_i|^2 A L / mu0`, J.
    pub idler_energy: f64,
}

pub fn power_flow(
    state: &EnvelopeState,
    pump: &PumpDrive,
    mass: f64,
    cav: &SeparatedCavityParams,
    constants: &PhysicalConstants,
) -> PowerFlow {
    let omega = cav.omega_s;
    let a_over_mu = cav.a_eff / constants.mu_0;
    let force = pump.b_p * state.b_i.conj() * a_over_mu;
    let idler = Complex64::i() * omega * state.eps.conj() * pump.b_p * state.b_i.conj() * a_over_mu;
    PowerFlow {
        signal: -2.0 * (force * omega * state.eps.conj()).im,
        idler: 2.0 * idler.re,
        signal_energy: mass * omega * omega * state.eps.norm_sqr(),
        idler_energy: state.b_i.norm_sqr() * cav.v_eff() / constants.mu_0,
    }
}

/// Result of [`integrate_envelopes`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeRun {
    /// Thinned time series, always including both end points.
    pub states: Vec<EnvelopeState>,
    /// Least-squares slope of `ln|eps|` over the second half of the run, s^-1.
    pub fitted_rate: Option<f64>,
    /// [`net_growth_rate`] for the same parameters, s^-1.
    pub predicted_rate: f64,
    pub couplings: Couplings,
    pub steps: usize,
}

impl EnvelopeRun {
    pub fn last(&self) -> &EnvelopeState {
        self.states.last().expect("run holds at least the initial state")
    }
}

impl Tabular for EnvelopeRun {
    fn columns(&self) -> Vec<String> {
        ["t_s", "eps_abs_m", "eps_phase_rad", "bi_abs_t", "bi_phase_rad"].map(String::from).to_vec()
    }

    fn rows(&self) -> Vec<Vec<f64>> {
        self.states
            .iter()
            .map(|s| vec![s.t, s.eps.norm(), s.eps.arg(), s.b_i.norm(), s.b_i.arg()])
            .collect()
    }
}

/// Fixed-step RK4 integration of the coupled envelopes
///
/// ```text
/// d eps/dt = i (A / (mu0 m Omega)) B_p e^{i delta t} conj(B_i) - (2/tau_s) eps
/// d B_i/dt = i (Omega / L)         B_p e^{i delta t} conj(eps) - (2/tau_i) B_i
/// ```
///
/// where `delta = omega_p - omega_s - omega_i`. Refuses a mismatch larger than
/// the slower linewidth and a step above `0.01 / max(Lambda, 2/tau_s, 2/tau_i)`.
pub fn integrate_envelopes(
    cav: &SeparatedCavityParams,
    pump: &PumpDrive,
    mass: f64,
    initial: EnvelopeState,
    t_end: f64,
    dt: f64,
    constants: &PhysicalConstants,
) -> Result<EnvelopeRun> {
    ensure_positive("t_end", t_end)?;
    ensure_positive("dt", dt)?;
    ensure_finite("eps", initial.eps.norm())?;
    ensure_finite("B_i", initial.b_i.norm())?;
    let couplings = coupling_constants(pump, mass, cav, constants)?;
    let lambda = growth_eigenvalue(&couplings)?;
    let loss = cav.loss_rates();

    let tau = cav.tau_s().max(cav.tau_i());
    let detuning = cav.detuning();
    if detuning.abs() * tau > 1.0 {
        return Err(Error::Detuned { detuning, linewidth: 1.0 / tau });
    }
    let limit = STABILITY_FRACTION / lambda.max(loss.signal).max(loss.idler);
    if dt >= limit {
        return Err(Error::Stability { dt, limit });
    }

    let c1 = cav.a_eff / (constants.mu_0 * mass * cav.omega_s);
    let c2 = cav.omega_s / cav.l_eff;
    let b_p = pump.b_p;
    let i = Complex64::i();
    let mut rhs = |t: f64, y: [Complex64; 2]| -> std::result::Result<[Complex64; 2], Error> {
        let drive = i * b_p * Complex64::from_polar(1.0, detuning * t);
        Ok([
            drive * y[1].conj() * c1 - y[0] * loss.signal,
            drive * y[0].conj() * c2 - y[1] * loss.idler,
        ])
    };

    let n = step_count(t_end, dt).max(1);
    let stride = n.div_ceil(MAX_RECORDED).max(1);
    let fit_from = n / 2;
    let mut fit = LineFit::default();
    let mut states = Vec::with_capacity(n / stride + 2);
    let start = EnvelopeState { t: 0.0, ..initial };
    states.push(start);
    let mut y = [start.eps, start.b_i];
    for step in 1..=n {
        let t0 = (step - 1) as f64 * dt;
        y = rk4_step(&mut rhs, t0, y, dt)?;
        let t = step as f64 * dt;
        if !(y[0].re.is_finite() && y[0].im.is_finite() && y[1].re.is_finite() && y[1].im.is_finite()) {
            return Err(Error::NonFinite { t, step });
        }
        if step >= fit_from {
            fit.push(t, y[0].norm().ln());
        }
        if step % stride == 0 || step == n {
            states.push(EnvelopeState { t, eps: y[0], b_i: y[1] });
        }
    }

    Ok(EnvelopeRun {
        states,
        fitted_rate: fit.slope(),
        predicted_rate: net_growth_rate(lambda, loss.signal, loss.idler),
        couplings,
        steps: n,
    })
}

#[derive(Default)]
struct LineFit {
    n: f64,
    sx: f64,
    sy: f64,
    sxx: f64,
    sxy: f64,
}

impl LineFit {
    fn push(&mut self, x: f64, y: f64) {
        self.n += 1.0;
        self.sx += x;
        self.sy += y;
        self.sxx += x * x;
        self.sxy += x * y;
    }

    fn slope(&self) -> Option<f64> {
        let denom = self.n * self.sxx - self.sx * self.sx;
        let s = (self.n * self.sxy - self.sx * self.sy) / denom;
        (self.n >= 2.0 && s.is_finite()).then_some(s)
    }
}
