//! End-to-end acceptance checks. Run with
//! `cargo test -p gempl-core --test acceptance -- --nocapture`
//! to see one PASS/FAIL line per criterion.

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::{Duration, Instant};

use gempl_core::cavity_spectrum::{
    doublet_from_coupling, synth_s21, te_mode_frequency, CavityGeometry, FrequencyGrid, ModeIndex,
};
use gempl_core::constants::{gravitational_permeability, gravitational_permittivity};
use gempl_core::gem_field::{
    gauge_transform, integrate_trajectory, line_integral_flux, maxwell_residuals, ClosedCurve, GridSpec,
    SolenoidConfig, SolenoidField,
};
use gempl_core::paramp::{
    braginsky_threshold, coupling_constants, growth_eigenvalue, integrate_envelopes, net_growth_rate,
    separated_threshold, EnvelopeState, PumpDrive, SeparatedCavityParams,
};
use gempl_core::quantum_phase::{
    compton_phase, fluxoid_solve, london_moment, metric_from_potential, time_holonomy, total_ab_phase, FluxPair,
    ParticleSpecies,
};
use gempl_core::{PhysicalConstants, Vec3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Tolerances and budgets.
const SIG3: f64 = 5e-3;
const TE112_TOL: f64 = 5e-3;
const P_PUMP_BAND: f64 = 0.15;
const EIGEN_TOL: f64 = 1e-10;
const RATE_TOL: f64 = 0.02;
const GAUGE_TOL: f64 = 1e-8;
const ORDER_BAND: f64 = 0.5;
const LZ_TOL: f64 = 1e-9;
const LONDON_TOL: f64 = 1e-12;
const HOLONOMY_TOL: f64 = 1e-6;

const MASS: f64 = 2e-6;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn reference_cavity(q: f64) -> SeparatedCavityParams {
    let w = 2.0 * PI * 1e10;
    SeparatedCavityParams::new(w, w, 2.0 * w, q, q, q, 0.03, 9e-4).unwrap()
}

fn round3(x: f64) -> f64 {
    let scale = 10f64.powf(x.abs().log10().floor() - 2.0);
    (x / scale).round() * scale
}

fn c1_constants() -> Outcome {
    let k = PhysicalConstants::paper();
    let eps = gravitational_permittivity(k.g).map_err(|e| e.to_string())?;
    let mu = gravitational_permeability(k.g, k.c).map_err(|e| e.to_string())?;
    check(
        rel(round3(eps), 1.19e9) < 1e-12 && rel(round3(mu), 9.31e-27) < 1e-12 && rel(eps, 1.19e9) < SIG3,
        format!("eps_g = {eps:.4e}, mu_g = {mu:.4e}"),
    )
}

fn c2_te112() -> Outcome {
    let geo = CavityGeometry::from_inches(1.284, 1.02).unwrap();
    let f = te_mode_frequency(&geo, &ModeIndex::te(1, 1, 2).unwrap(), &PhysicalConstants::codata())
        .map_err(|e| e.to_string())?;
    check(rel(f, 11.42e9) < TE112_TOL, format!("f_TE112 = {:.4} GHz", f / 1e9))
}

fn c3_doublet() -> Outcome {
    let d = doublet_from_coupling(11.42e9, 400e6, 1e4, 1e4).map_err(|e| e.to_string())?;
    let grid = FrequencyGrid::new(11.0e9, 11.9e9, 9001).unwrap();
    let trace = synth_s21(&d, [1.0, 1.0], &grid).map_err(|e| e.to_string())?;
    let peaks = trace.local_maxima();
    if peaks.len() != 2 {
        return Err(format!("expected two maxima, found {}", peaks.len()));
    }
    let sep = peaks[1] - peaks[0];
    check((sep - 400e6).abs() <= grid.step(), format!("peak separation {:.3} MHz", sep / 1e6))
}

fn c4_separated_threshold() -> Outcome {
    let r = separated_threshold(&reference_cavity(1e10), MASS).map_err(|e| e.to_string())?;
    let p = r.P_p_threshold;
    check(
        rel(p, 3.57e-6) < SIG3 && rel(p, 4e-6) < P_PUMP_BAND,
        format!("P_p = {p:.4e} W, U_p = {:.4e} J", r.U_p_threshold),
    )
}

fn c5_eigen_identity() -> Outcome {
    let k = PhysicalConstants::codata();
    let cav = reference_cavity(1e10);
    let u = separated_threshold(&cav, MASS).unwrap().U_p_threshold;
    let pump = PumpDrive::from_stored_energy(u, cav.a_eff, cav.l_eff, 0.0, cav.omega_p, &k).unwrap();
    let lambda0 = growth_eigenvalue(&coupling_constants(&pump, MASS, &cav, &k).unwrap()).unwrap();
    if (lambda0 - 12.566).abs() > 0.01 {
        return Err(format!("Lambda at threshold {lambda0}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let ws = 10f64.powf(rng.gen_range(8.0..11.0));
        let wi = 10f64.powf(rng.gen_range(8.0..11.0));
        let cav = SeparatedCavityParams::new(
            ws,
            wi,
            ws + wi,
            10f64.powf(rng.gen_range(3.0..11.0)),
            10f64.powf(rng.gen_range(3.0..11.0)),
            10f64.powf(rng.gen_range(3.0..11.0)),
            rng.gen_range(0.005..0.3),
            rng.gen_range(1e-5..1e-2),
        )
        .unwrap();
        let m = 10f64.powf(rng.gen_range(-8.0..-3.0));
        let u = separated_threshold(&cav, m).unwrap().U_p_threshold;
        let pump = PumpDrive::from_stored_energy(u, cav.a_eff, cav.l_eff, 0.0, cav.omega_p, &k).unwrap();
        let lambda = growth_eigenvalue(&coupling_constants(&pump, m, &cav, &k).unwrap()).unwrap();
        worst = worst.max(rel(lambda, 2.0 / (cav.tau_i() * cav.tau_s()).sqrt()));
    }
    check(worst < EIGEN_TOL, format!("Lambda(thr) = {lambda0:.4} s^-1, worst rel err {worst:.1e} over 100 sets"))
}

fn c6_time_domain() -> Outcome {
    let k = PhysicalConstants::codata();
    let cav = reference_cavity(1e10);
    let u = separated_threshold(&cav, MASS).unwrap().U_p_threshold;
    let loss = cav.loss_rates();
    let mut detail = Vec::new();
    let mut ok = true;
    for factor in [0.9, 1.1] {
        let pump = PumpDrive::from_stored_energy(factor * u, cav.a_eff, cav.l_eff, 0.0, cav.omega_p, &k).unwrap();
        let c = coupling_constants(&pump, MASS, &cav, &k).unwrap();
        let lambda = growth_eigenvalue(&c).unwrap();
        let dt = 0.25 * 0.01 / lambda.max(loss.signal);
        let expect = net_growth_rate(lambda, loss.signal, loss.idler);
        let seed = (c.k1 / c.k2).sqrt() * 1e-9;
        for theta in [-FRAC_PI_2, FRAC_PI_2] {
            let init = EnvelopeState::from_polar(seed, 0.0, 1e-9, -theta);
            let t_end = if theta < 0.0 { 8.0 } else { 0.05 };
            let run = integrate_envelopes(&cav, &pump, MASS, init, t_end, dt, &k).map_err(|e| e.to_string())?;
            let fitted = run.fitted_rate.ok_or("no fit")?;
            if theta < 0.0 {
                ok &= fitted.signum() == expect.signum() && rel(fitted, expect) < RATE_TOL;
                detail.push(format!("{factor}x: {fitted:+.4} vs {expect:+.4} s^-1"));
            } else {
                // opposite phase: both loss and pump drain the signal
                let target = -0.5 * (loss.signal + loss.idler) - (0.25 * (loss.signal - loss.idler).powi(2) + lambda * lambda).sqrt();
                ok &= fitted < 0.0 && rel(fitted, target) < RATE_TOL;
                detail.push(format!("{factor}x flipped: {fitted:+.3}"));
            }
        }
    }
    check(ok, detail.join(", "))
}

fn c7_braginsky() -> Outcome {
    let mut worst = 0.0f64;
    for (ws, wi) in [(1.0, 1.0), (2.0, 1.0), (0.7, 1.9)] {
        let cav = SeparatedCavityParams::new(ws * 6e10, wi * 6e10, (ws + wi) * 6e10, 1e10, 1e10, 1e10, 0.03, 9e-4).unwrap();
        let sep = separated_threshold(&cav, MASS).unwrap().U_p_threshold;
        let b = braginsky_threshold(MASS, cav.omega_s, cav.l_eff, cav.q_i, cav.q_s).unwrap();
        worst = worst.max(rel(b / sep, ws / (8.0 * wi)));
    }
    check(worst < 1e-14, format!("ratio = omega_s / (8 omega_i), worst rel err {worst:.1e}"))
}

fn c8_gem_suite() -> Outcome {
    let k = PhysicalConstants::codata();
    // gauge invariance of the gravito-magnetic flux
    let f = SolenoidField::new(SolenoidConfig::along_z(1.0, 0.1, 1e3, 10.0).unwrap(), k);
    let lp = ClosedCurve::circle(Vec3::new(0.1, 0.05, 0.0), Vec3::new(0.1, 0.0, 1.0), 1.8, 4096).unwrap();
    let base = line_integral_flux(|p| f.vector_potential(p), &lp).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut gauge_err = 0.0f64;
    for _ in 0..20 {
        let (a, b, c, s) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(-1.0..1.0), rng.gen_range(0.1..10.0));
        let mu = move |p: &Vec3| s * base.abs() * ((a * p.x).sin() * (b * p.y).cos() + c * p.x * p.y * p.z);
        let h2 = gauge_transform(|p: &Vec3| f.vector_potential(p), mu, 1e-3);
        gauge_err = gauge_err.max(rel(line_integral_flux(h2, &lp).unwrap(), base));
    }

    // residual convergence on halving h
    let thick = SolenoidField::new(SolenoidConfig::along_z(1.0, 0.4, 1.0, 1.0).unwrap(), PhysicalConstants::unit());
    let slab = |n: usize| GridSpec {
        origin: Vec3::new(0.2, 0.1, -0.3),
        spacing: 1.6 / (n - 1) as f64,
        resolution: [n, n, 9],
    };
    let coarse = maxwell_residuals(&slab(41), &thick).unwrap();
    let fine = maxwell_residuals(&slab(81), &thick).unwrap();
    let ratio = coarse.div_eg_minus_source / fine.div_eg_minus_source;
    let curl_ratio = coarse.curl_bg_minus_source / fine.curl_bg_minus_source;

    // exterior axial angular momentum
    let lambda = 1e9;
    let orbit = SolenoidField::new(SolenoidConfig::along_z(1.0, 0.1, lambda, 100.0).unwrap(), k);
    let v = (2.0 * k.g * lambda).sqrt();
    let tr = integrate_trajectory(
        1.0,
        Vec3::new(3.0, 0.0, 0.2),
        Vec3::new(0.1 * v, 0.9 * v, 0.05),
        |p| orbit.forces(p),
        100.0,
        0.01,
        &k,
    )
    .map_err(|e| e.to_string())?;
    let lz = tr.axial_angular_momentum(&Vec3::z());
    let drift = lz.iter().map(|l| rel(*l, lz[0])).fold(0.0, f64::max);

    check(
        gauge_err < GAUGE_TOL
            && (ratio - 4.0).abs() < ORDER_BAND
            && (curl_ratio - 4.0).abs() < ORDER_BAND
            && drift < LZ_TOL
            && tr.error.is_none(),
        format!(
            "gauge err {gauge_err:.1e}, residual ratios {ratio:.3}/{curl_ratio:.3}, L_z drift {drift:.1e}"
        ),
    )
}

fn c9_ab_london() -> Outcome {
    let k = PhysicalConstants::codata();
    let el = ParticleSpecies::electron(&k);
    let phi = 3.7e-15;
    let ab = total_ab_phase(&el, &FluxPair { phi, phi_g: 0.0 }, &k);
    let em_ok = rel(ab, el.charge * phi / k.hbar) < 1e-15;

    let omega = 2.0 * PI * 150.0;
    let r = 0.02;
    let flux = fluxoid_solve(r, omega, 0, &k).map_err(|e| e.to_string())?;
    let b = flux / (PI * r * r);
    let london_err = rel(-b, london_moment(omega, &k));

    let f = SolenoidField::new(SolenoidConfig::along_z(1.0, 0.01, 1e3, 10.0).unwrap(), k);
    let lp = ClosedCurve::circle(Vec3::new(0.2, -0.1, 0.3), Vec3::new(0.05, 0.1, 1.0), 2.2, 4096).unwrap();
    let dt = time_holonomy(metric_from_potential(|p| f.vector_potential(p), &k), &lp, &k, None)
        .map_err(|e| e.to_string())?;
    let phi_g = line_integral_flux(|p| f.vector_potential(p), &lp).unwrap();
    let mass_term = el.mass * phi_g / k.hbar;
    let hol_err = rel(compton_phase(dt, el.mass, &k), mass_term);

    check(
        em_ok && london_err < LONDON_TOL && hol_err < HOLONOMY_TOL,
        format!("EM limit {em_ok}, London rel err {london_err:.1e}, holonomy rel err {hol_err:.1e}"),
    )
}

fn c10_non_reproducible() -> Outcome {
    // Formula values are asserted; the printed 11.50 GHz and 400 uW are not.
    let geo = CavityGeometry::from_inches(1.284, 1.02).unwrap();
    let f = te_mode_frequency(&geo, &ModeIndex::te(1, 1, 2).unwrap(), &PhysicalConstants::codata()).unwrap();
    let p9 = separated_threshold(&reference_cavity(1e9), MASS).unwrap().P_p_threshold;
    let p10 = separated_threshold(&reference_cavity(1e10), MASS).unwrap().P_p_threshold;
    check(
        rel(f, 11.423e9) < 1e-3 && rel(f, 11.50e9) > 5e-3 && rel(p9, 3.57e-3) < SIG3 && rel(p9 / p10, 1e3) < 1e-12
            && rel(p9, 400e-6) > 1.0,
        format!("TE112 {:.3} GHz (not 11.50), P_p(Q=1e9) {p9:.3e} W (not 4.0e-4)", f / 1e9),
    )
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("1 constants", c1_constants, Duration::from_millis(1)),
        ("2 TE112 frequency", c2_te112, Duration::from_millis(10)),
        ("3 doublet", c3_doublet, Duration::from_millis(100)),
        ("4 separated threshold", c4_separated_threshold, Duration::from_millis(1)),
        ("5 threshold eigenvalue", c5_eigen_identity, Duration::from_secs(1)),
        ("6 time-domain crossing", c6_time_domain, Duration::from_secs(30)),
        ("7 Braginsky ratio", c7_braginsky, Duration::from_millis(1)),
        ("8 GEM property suite", c8_gem_suite, Duration::from_secs(60)),
        ("9 AB/London suite", c9_ab_london, Duration::from_secs(1)),
        ("10 non-reproducible values", c10_non_reproducible, Duration::from_secs(1)),
    ];
    let mut failed = Vec::new();
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        let slow = took > budget;
        let verdict = if ok && !slow { "PASS" } else { "FAIL" };
        println!("{verdict} {name}: {detail} [{:.3} ms, budget {:?}]", took.as_secs_f64() * 1e3, budget);
        if verdict == "FAIL" {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
