//! Command dispatch: each command turns a validated [`RunConfig`] into typed
//! outputs.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use gempl_core::cavity_spectrum::{
    doublet_from_coupling, mode_frequency_of, stokes_pump_assignment, synth_s21, CavityGeometry, DoubletSpec,
    FrequencyGrid, ModeIndex, SpectrumTrace, StokesPumpAssignment,
};
use gempl_core::gem_field::{line_integral_flux, ClosedCurve, SolenoidConfig, SolenoidField};
use gempl_core::paramp::{
    braginsky_threshold, coupling_constants, integrate_envelopes, threshold_report, unseparated_report,
    EnvelopeRun, EnvelopeState, MembraneParams, PumpDrive, SeparatedCavityParams, ThresholdReport,
};
use gempl_core::quantum_phase::{
    compton_phase, fluxoid_solve, london_moment, metric_from_potential, time_holonomy, total_ab_phase, FluxPair,
    ParticleSpecies,
};
use gempl_core::{ConstantsMode, PhysicalConstants, Tabular, Vec3};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{Command, RunConfig};
use crate::error::CliError;

pub const TOOL_VERSION: &str = concat!("gempl ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultEnvelope {
    pub command: Command,
    /// Validated configuration, without the output directory.
    pub input: RunConfig,
    pub outputs: Outputs,
    pub tool_version: String,
    pub constants_mode: ConstantsMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Outputs {
    Modes(ModesOutput),
    Spectrum(SpectrumOutput),
    AbPhase(AbPhaseOutput),
    Threshold(ThresholdOutput),
    Simulate(SimulateOutput),
    Sweep(SweepOutput),
}

impl Outputs {
    /// Series written to CSV next to the JSON envelope, if any.
    pub fn table(&self) -> Option<&dyn Tabular> {
        match self {
            Outputs::Spectrum(s) => Some(&s.trace),
            Outputs::Simulate(s) => Some(&s.run),
            Outputs::Sweep(s) => Some(s),
            _ => None,
        }
    }

    /// Headline scalars, used as sweep columns.
    pub fn summary(&self) -> BTreeMap<String, Option<f64>> {
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: Option<f64>| {
            m.insert(k.to_string(), v);
        };
        match self {
            Outputs::Modes(o) => put("frequency_hz", Some(o.requested.frequency_hz)),
            Outputs::Spectrum(o) => {
                put("splitting_hz", Some(o.doublet.splitting_hz()));
                put("area_hz", Some(o.area_hz));
                put("maxima", Some(o.maxima_hz.len() as f64));
            }
            Outputs::AbPhase(o) => {
                put("ab_phase_rad", Some(o.ab_phase_rad));
                put("phi_g_m2_s", Some(o.phi_g_m2_s));
                put("time_holonomy_s", Some(o.time_holonomy_s));
            }
            Outputs::Threshold(o) => {
                put("separated_U_p_j", Some(o.separated.U_p_threshold));
                put("separated_P_p_w", Some(o.separated.P_p_threshold));
                put("separated_Lambda_s", Some(o.separated.Lambda_at_pump));
                put("unseparated_U_p_j", Some(o.unseparated.U_p_threshold));
                put("kappa_S_s", o.unseparated.kappa_S);
            }
            Outputs::Simulate(o) => {
                put("fitted_rate_s", o.run.fitted_rate);
                put("predicted_rate_s", Some(o.run.predicted_rate));
                put("pump_b_t", Some(o.pump.magnitude()));
            }
            Outputs::Sweep(_) => {}
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeRow {
    pub mode: String,
    pub frequency_hz: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModesOutput {
    pub geometry: CavityGeometry,
    pub requested: ModeRow,
    /// All TE/TM modes with indices up to `max_index`, by frequency.
    pub table: Vec<ModeRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumOutput {
    pub doublet: DoubletSpec,
    pub assignment: StokesPumpAssignment,
    pub maxima_hz: Vec<f64>,
    pub area_hz: f64,
    pub trace: SpectrumTrace,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbPhaseOutput {
    pub species: ParticleSpecies,
    pub phi_wb: f64,
    pub phi_g_m2_s: f64,
    /// `Phi_g` of the whole shell, for comparison with the loop value.
    pub shell_flux_m2_s: f64,
    pub ab_phase_rad: f64,
    pub time_holonomy_s: f64,
    pub compton_phase_rad: f64,
    pub london_moment_t: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fluxoid_flux_wb: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdOutput {
    pub separated: ThresholdReport,
    pub unseparated: ThresholdReport,
    pub braginsky_u_j: f64,
    /// Pump field at the separated threshold energy, T.
    pub threshold_pump_b_t: f64,
    pub tau_s_s: f64,
    pub tau_i_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateOutput {
    pub pump: PumpDrive,
    pub threshold_pump_b_t: f64,
    pub run: EnvelopeRun,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub value: f64,
    pub summary: BTreeMap<String, Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOutput {
    pub command: Command,
    pub param: String,
    pub points: Vec<SweepPoint>,
}

impl Tabular for SweepOutput {
    fn columns(&self) -> Vec<String> {
        let mut cols = vec![self.param.clone()];
        if let Some(p) = self.points.first() {
            cols.extend(p.summary.keys().cloned());
        }
        cols
    }

    fn rows(&self) -> Vec<Vec<f64>> {
        self.points
            .iter()
            .map(|p| {
                let mut row = vec![p.value];
                row.extend(p.summary.values().map(|v| v.unwrap_or(f64::NAN)));
                row
            })
            .collect()
    }
}

fn numeric(command: Command) -> impl Fn(gempl_core::Error) -> CliError {
    move |source| CliError::Numeric { command: command.name(), source }
}

/// Run the configured command. Identical configs give identical envelopes.
pub fn run_command(config: &RunConfig) -> Result<ResultEnvelope, CliError> {
    let k = PhysicalConstants::for_mode(config.constants);
    let outputs = match config.command {
        Command::Sweep => sweep(config)?,
        c => run_single(c, config, &k)?,
    };
    let mut input = config.clone();
    input.out = None;
    Ok(ResultEnvelope {
        command: config.command,
        input,
        outputs,
        tool_version: TOOL_VERSION.to_string(),
        constants_mode: config.constants,
    })
}

fn run_single(command: Command, cfg: &RunConfig, k: &PhysicalConstants) -> Result<Outputs, CliError> {
    match command {
        Command::Modes => modes(cfg, k).map(Outputs::Modes),
        Command::Spectrum => spectrum(cfg).map(Outputs::Spectrum),
        Command::AbPhase => ab_phase(cfg, k).map(Outputs::AbPhase),
        Command::Threshold => threshold(cfg, k).map(Outputs::Threshold),
        Command::Simulate => simulate(cfg, k).map(Outputs::Simulate),
        Command::Sweep => Err(CliError::Config("a sweep cannot sweep another sweep".into())),
    }
}

fn sweep(cfg: &RunConfig) -> Result<Outputs, CliError> {
    let spec = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Config("command 'sweep' needs a [sweep] table".into()))?;
    let k = PhysicalConstants::for_mode(cfg.constants);
    let points = spec
        .values()
        .par_iter()
        .map(|&v| {
            let point = cfg.with_param(spec.command, &spec.param, v);
            run_single(spec.command, &point, &k).map(|o| SweepPoint { value: v, summary: o.summary() })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Outputs::Sweep(SweepOutput { command: spec.command, param: spec.param.clone(), points }))
}

/// `TE112`, `TM010`, or with separators for multi-digit indices: `TE_1_1_12`.
pub fn parse_mode(s: &str) -> Result<ModeIndex, CliError> {
    let bad = || CliError::Config(format!("cannot read mode '{s}' (expected e.g. TE112 or TE_1_1_12)"));
    let upper = s.trim().to_ascii_uppercase();
    let (kind, rest) = upper.split_at(upper.len().min(2));
    let digits: Vec<u32> = if rest.contains(['_', ',']) {
        rest.split(['_', ','])
            .filter(|p| !p.is_empty())
            .map(|p| p.parse().map_err(|_| bad()))
            .collect::<Result<_, _>>()?
    } else {
        rest.chars().map(|c| c.to_digit(10).ok_or_else(bad)).collect::<Result<_, _>>()?
    };
    let [l, m, n] = digits[..] else { return Err(bad()) };
    let idx = match kind {
        "TE" => ModeIndex::te(l, m, n),
        "TM" => ModeIndex::tm(l, m, n),
        _ => return Err(bad()),
    };
    idx.map_err(|e| CliError::Config(e.to_string()))
}

fn modes(cfg: &RunConfig, k: &PhysicalConstants) -> Result<ModesOutput, CliError> {
    let num = numeric(Command::Modes);
    let geometry = CavityGeometry::new(cfg.number("length_m")?, cfg.number("diameter_m")?).map_err(&num)?;
    let requested = parse_mode(cfg.text("mode")?)?;
    let max = cfg.integer("max_index")?;
    if !(1..=20).contains(&max) {
        return Err(CliError::Config(format!("max_index must lie in 1..=20, got {max}")));
    }
    let max = max as u32;
    let mut table = Vec::new();
    for l in 0..=max {
        for m in 1..=max {
            for n in 0..=max {
                let mut idx = vec![ModeIndex::tm(l, m, n).map_err(&num)?];
                if n >= 1 {
                    idx.push(ModeIndex::te(l, m, n).map_err(&num)?);
                }
                for i in idx {
                    let f = mode_frequency_of(&geometry, &i, k).map_err(&num)?;
                    table.push(ModeRow { mode: i.to_string(), frequency_hz: f });
                }
            }
        }
    }
    table.sort_by(|a, b| a.frequency_hz.total_cmp(&b.frequency_hz).then_with(|| a.mode.cmp(&b.mode)));
    let f = mode_frequency_of(&geometry, &requested, k).map_err(&num)?;
    Ok(ModesOutput { geometry, requested: ModeRow { mode: requested.to_string(), frequency_hz: f }, table })
}

fn spectrum(cfg: &RunConfig) -> Result<SpectrumOutput, CliError> {
    let num = numeric(Command::Spectrum);
    let f0 = cfg.number("f0_hz")?;
    let g = cfg.number("coupling_hz")?;
    let doublet = doublet_from_coupling(f0, g, cfg.number("q_s")?, cfg.number("q_p")?).map_err(&num)?;
    let margin = (2.0 * g).max(20.0 * f0 / cfg.number("q_s")?.min(cfg.number("q_p")?));
    let start = cfg.optional("f_start_hz")?.unwrap_or(f0 - margin);
    let stop = cfg.optional("f_stop_hz")?.unwrap_or(f0 + margin);
    let points = cfg.integer("points")?;
    if points < 2 {
        return Err(CliError::Config(format!("points must be at least 2, got {points}")));
    }
    let grid = FrequencyGrid::new(start, stop, points as usize).map_err(&num)?;
    let trace = synth_s21(&doublet, [cfg.number("amp_s")?, cfg.number("amp_p")?], &grid).map_err(&num)?;
    Ok(SpectrumOutput {
        doublet,
        assignment: stokes_pump_assignment(&doublet),
        maxima_hz: trace.local_maxima(),
        area_hz: trace.area(),
        trace,
    })
}

fn ab_phase(cfg: &RunConfig, k: &PhysicalConstants) -> Result<AbPhaseOutput, CliError> {
    let num = numeric(Command::AbPhase);
    let omega = cfg.number("angular_velocity_rad_s")?;
    let shell = SolenoidConfig::along_z(
        cfg.number("radius_m")?,
        cfg.number("shell_thickness_m")?,
        cfg.number("mass_per_length_kg_m")?,
        omega,
    )
    .map_err(&num)?;
    let field = SolenoidField::new(shell, *k);
    let species = match cfg.text("species")? {
        "electron" => ParticleSpecies::electron(k),
        "cooper_pair" => ParticleSpecies::cooper_pair(k),
        other => return Err(CliError::Config(format!("unknown species '{other}' (electron|cooper_pair)"))),
    };
    let samples = cfg.integer("samples")?;
    if samples < 16 {
        return Err(CliError::Config(format!("samples must be at least 16, got {samples}")));
    }
    let center = Vec3::new(cfg.number("loop_center_x_m")?, cfg.number("loop_center_y_m")?, cfg.number("loop_center_z_m")?);
    let curve = ClosedCurve::circle(center, Vec3::z(), cfg.number("loop_radius_m")?, samples as usize).map_err(&num)?;
    let h = |p: &Vec3| field.vector_potential(p);
    let phi_g = line_integral_flux(h, &curve).map_err(&num)?;
    let fluxes = FluxPair { phi: cfg.number("em_flux_wb")?, phi_g };
    let dt = time_holonomy(metric_from_potential(h, k), &curve, k, None).map_err(&num)?;
    let fluxoid_flux_wb = match cfg.optional("ring_radius_m")? {
        Some(r) => Some(fluxoid_solve(r, omega, cfg.integer("fluxoid_n")?, k).map_err(&num)?),
        None => None,
    };
    Ok(AbPhaseOutput {
        ab_phase_rad: total_ab_phase(&species, &fluxes, k),
        compton_phase_rad: compton_phase(dt, species.mass, k),
        species,
        phi_wb: fluxes.phi,
        phi_g_m2_s: phi_g,
        shell_flux_m2_s: field.enclosed_flux(),
        time_holonomy_s: dt,
        london_moment_t: london_moment(omega, k),
        fluxoid_flux_wb,
    })
}

fn cavity(cfg: &RunConfig, command: Command) -> Result<SeparatedCavityParams, CliError> {
    let w = |key: &str| cfg.number(key).map(|f| 2.0 * PI * f);
    SeparatedCavityParams::new(
        w("f_s_hz")?,
        w("f_i_hz")?,
        w("f_p_hz")?,
        cfg.number("q_s")?,
        cfg.number("q_i")?,
        cfg.number("q_p")?,
        cfg.number("l_eff_m")?,
        cfg.number("a_eff_m2")?,
    )
    .map_err(numeric(command))
}

fn threshold(cfg: &RunConfig, k: &PhysicalConstants) -> Result<ThresholdOutput, CliError> {
    let num = numeric(Command::Threshold);
    let cav = cavity(cfg, Command::Threshold)?;
    let mass = cfg.number("mass_kg")?;
    let pump = match cfg.optional("pump_b_t")? {
        Some(b) => Some(PumpDrive::new(b, 0.0, cav.omega_p).map_err(&num)?),
        None => None,
    };
    let separated = threshold_report(&cav, mass, pump.as_ref(), k).map_err(&num)?;
    let membrane =
        MembraneParams::new(mass, 2.0 * PI * cfg.number("membrane_f_hz")?, cfg.number("q_membrane")?, cav.a_eff)
            .map_err(&num)?;
    let unseparated = unseparated_report(
        &membrane,
        2.0 * PI * cfg.number("stokes_f_hz")?,
        cfg.number("q_stokes")?,
        cav.omega_p,
        cav.q_p,
        cav.l_eff,
        pump.as_ref(),
        k,
    )
    .map_err(&num)?;
    let thr = PumpDrive::from_stored_energy(separated.U_p_threshold, cav.a_eff, cav.l_eff, 0.0, cav.omega_p, k)
        .map_err(&num)?;
    Ok(ThresholdOutput {
        braginsky_u_j: braginsky_threshold(mass, cav.omega_s, cav.l_eff, cav.q_i, cav.q_s).map_err(&num)?,
        threshold_pump_b_t: thr.magnitude(),
        tau_s_s: cav.tau_s(),
        tau_i_s: cav.tau_i(),
        separated,
        unseparated,
    })
}

fn simulate(cfg: &RunConfig, k: &PhysicalConstants) -> Result<SimulateOutput, CliError> {
    let num = numeric(Command::Simulate);
    let cav = cavity(cfg, Command::Simulate)?;
    let mass = cfg.number("mass_kg")?;
    let phase = cfg.number("pump_phase_rad")?;
    let u_thr = gempl_core::paramp::separated_threshold(&cav, mass).map_err(&num)?.U_p_threshold;
    let thr = PumpDrive::from_stored_energy(u_thr, cav.a_eff, cav.l_eff, phase, cav.omega_p, k).map_err(&num)?;
    let pump = match cfg.optional("pump_b_t")? {
        Some(b) => PumpDrive::new(b, phase, cav.omega_p),
        None => {
            let u = u_thr * cfg.number("pump_energy_factor")?;
            PumpDrive::from_stored_energy(u, cav.a_eff, cav.l_eff, phase, cav.omega_p, k)
        }
    }
    .map_err(&num)?;
    // seed along the growing eigenvector: |eps|/|B_i| = sqrt(K1/K2), which
    // does not depend on the pump amplitude
    let bi0 = cfg.number("bi0_t")?;
    let ratio = (cav.a_eff / (k.mu_0 * mass * cav.l_eff)).sqrt() / cav.omega_s;
    let eps0 = cfg.optional("eps0_m")?.unwrap_or(ratio * bi0);
    let theta = cfg.number("relative_phase_rad")?;
    let initial = EnvelopeState::from_polar(eps0, phase - theta, bi0, 0.0);
    // couplings validate the inputs before a long run
    coupling_constants(&pump, mass, &cav, k).map_err(&num)?;
    let run = integrate_envelopes(&cav, &pump, mass, initial, cfg.number("t_end_s")?, cfg.number("dt_s")?, k)
        .map_err(&num)?;
    Ok(SimulateOutput { pump, threshold_pump_b_t: thr.magnitude(), run })
}
