//! Gravito-electromagnetic fields of a rotating cylindrical mass shell.
//!
//! The shell has radius `R`, linear mass density `lambda` and rotates at
//! `Omega` about its axis. Its mass current per unit axial length is
//! `I'_g = lambda * Omega / (2 pi)` and the interior gravito-magnetic field has
//! magnitude `4 mu_g I'_g`; outside the shell `B_g` vanishes.
//!
//! The ideal sheet is replaced by a shell of finite width `w` whose radial mass
//! profile is a squared raised cosine, so every field here is smooth enough
//! for second-order finite differences. Outside the shell
//! (`r < R - w/2` or `r > R + w/2`) the closed forms are the ideal ones.
//!
//! Sign conventions follow the Maxwell-like equations with attractive sources:
//!
//! ```text
//! div E_g = -rho_g / eps_g        curl B_g = -4 mu_g j_g   (static)
//! ```
//!
//! so a shell spinning counter-clockwise about `axis` produces an interior
//! `B_g` pointing along `-axis`, and `E_g` points toward the axis.

mod curve;
mod residuals;
mod trajectory;

pub use curve::{
    ampere_circuital_check, amperian_rectangle, central_gradient, gauge_transform,
    line_integral_flux, ClosedCurve,
};
pub use residuals::{maxwell_residuals, GridSpec, MaxwellResiduals};
pub use trajectory::{integrate_trajectory, Trajectory, TrajectoryState};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_non_negative, ensure_positive, Error, Result};
use crate::{PhysicalConstants, Vec3};

/// Geometry and motion of the rotating mass shell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolenoidConfig {
    /// Shell radius `R`, m.
    pub radius: f64,
    /// Smoothing width `w` of the shell, m. `0 < w < R`.
    pub shell_thickness: f64,
    /// Mass per unit axial length `lambda`, kg/m.
    pub mass_per_length: f64,
    /// Rotation rate about `axis`, rad/s (sign gives the sense).
    pub angular_velocity: f64,
    /// Unit vector along the symmetry axis, which passes through the origin.
    pub axis: Vec3,
}

impl SolenoidConfig {
    pub fn new(
        radius: f64,
        shell_thickness: f64,
        mass_per_length: f64,
        angular_velocity: f64,
        axis: Vec3,
    ) -> Result<Self> {
        ensure_positive("radius", radius)?;
        ensure_positive("shell_thickness", shell_thickness)?;
        if shell_thickness >= radius {
            return Err(Error::Geometry(format!(
                "shell thickness {shell_thickness} must be smaller than radius {radius}"
            )));
        }
        ensure_non_negative("mass_per_length", mass_per_length)?;
        ensure_finite("angular_velocity", angular_velocity)?;
        let norm = axis.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Geometry("axis must be a non-zero finite vector".into()));
        }
        Ok(SolenoidConfig {
            radius,
            shell_thickness,
            mass_per_length,
            angular_velocity,
            axis: axis / norm,
        })
    }

    /// Shell along the z axis.
    pub fn along_z(
        radius: f64,
        shell_thickness: f64,
        mass_per_length: f64,
        angular_velocity: f64,
    ) -> Result<Self> {
        Self::new(radius, shell_thickness, mass_per_length, angular_velocity, Vec3::z())
    }

    /// `I'_g = lambda * Omega / (2 pi)`, kg s^-1 per metre of axis.
    pub fn mass_current_per_length(&self) -> f64 {
        self.mass_per_length * self.angular_velocity / (2.0 * PI)
    }

    pub fn inner_radius(&self) -> f64 {
        self.radius - 0.5 * self.shell_thickness
    }

    pub fn outer_radius(&self) -> f64 {
        self.radius + 0.5 * self.shell_thickness
    }

    /// Split `p` into (axial coordinate, radial vector, radial distance).
    fn cylindrical(&self, p: &Vec3) -> (f64, Vec3, f64) {
        let z = p.dot(&self.axis);
        let radial = p - self.axis * z;
        let r = radial.norm();
        (z, radial, r)
    }

    /// Normalised position across the shell, clamped to `[0, 1]`.
    fn shell_coordinate(&self, r: f64) -> f64 {
        ((r - self.inner_radius()) / self.shell_thickness).clamp(0.0, 1.0)
    }
}

/// Interior gravito-magnetic field magnitude `4 mu_g I'_g`, s^-1.
pub fn interior_bg(config: &SolenoidConfig, constants: &PhysicalConstants) -> f64 {
    4.0 * constants.mu_g * config.mass_current_per_length()
}

/// Gauge in which a vector potential is expressed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gauge {
    /// `h_phi = B_g r / 2` inside the shell.
    Symmetric,
}

/// Field values at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub position: Vec3,
    /// Gravito-electric field, m/s^2. `None` on the axis where it is undefined.
    pub e_g: Option<Vec3>,
    /// Gravito-magnetic field, s^-1.
    pub b_g: Vec3,
    /// Gravitational vector potential, m/s.
    pub h: Vec3,
    pub gauge: Gauge,
}

// Squared raised-cosine shell profile on s in [0, 1]: the mass weight
// d(s) = (2/3)(1 - cos 2 pi s)^2 integrates to 1 and g(s) is its running
// integral. d, d' and d'' vanish at both edges.
const PROFILE_A: f64 = 2.0 / (3.0 * PI);
const PROFILE_B: f64 = 1.0 / (12.0 * PI);

fn profile_weight(s: f64) -> f64 {
    let c = 1.0 - (2.0 * PI * s).cos();
    (2.0 / 3.0) * c * c
}

fn profile_cumulative(s: f64) -> f64 {
    s - PROFILE_A * (2.0 * PI * s).sin() + PROFILE_B * (4.0 * PI * s).sin()
}

/// `int_0^sigma g(s) ds`
fn profile_first_moment(sigma: f64) -> f64 {
    0.5 * sigma * sigma + PROFILE_A * ((2.0 * PI * sigma).cos() - 1.0) / (2.0 * PI)
        - PROFILE_B * ((4.0 * PI * sigma).cos() - 1.0) / (4.0 * PI)
}

/// `int_0^sigma s g(s) ds`
fn profile_second_moment(sigma: f64) -> f64 {
    let s_sin = |k: f64| (k * sigma).sin() / (k * k) - sigma * (k * sigma).cos() / k;
    sigma.powi(3) / 3.0 - PROFILE_A * s_sin(2.0 * PI) + PROFILE_B * s_sin(4.0 * PI)
}

/// Field evaluator for one shell and constant set.
#[derive(Debug, Clone, Copy)]
pub struct SolenoidField {
    pub config: SolenoidConfig,
    pub constants: PhysicalConstants,
    b0: f64,
}

impl SolenoidField {
    pub fn new(config: SolenoidConfig, constants: PhysicalConstants) -> Self {
        let b0 = interior_bg(&config, &constants);
        SolenoidField { config, constants, b0 }
    }

    /// Signed axial component of `B_g` at radius `r`.
    fn bz(&self, r: f64) -> f64 {
        -self.b0 * (1.0 - profile_cumulative(self.config.shell_coordinate(r)))
    }

    /// `r * h_phi(r) = int_0^r B_z(rho) rho d rho`.
    fn r_h_phi(&self, r: f64) -> f64 {
        let cfg = &self.config;
        let r_in = cfg.inner_radius();
        let w = cfg.shell_thickness;
        let sigma = cfg.shell_coordinate(r);
        let shell = w * (r_in * profile_first_moment(sigma) + w * profile_second_moment(sigma));
        let r_eff = r.min(cfg.outer_radius());
        self.b0 * (shell - 0.5 * r_eff * r_eff)
    }

    pub fn gravito_magnetic(&self, p: &Vec3) -> Vec3 {
        let (_, _, r) = self.config.cylindrical(p);
        self.config.axis * self.bz(r)
    }

    /// Symmetric-gauge vector potential: azimuthal, zero on the axis.
    pub fn vector_potential(&self, p: &Vec3) -> Vec3 {
        let (_, radial, r) = self.config.cylindrical(p);
        if r == 0.0 {
            return Vec3::zeros();
        }
        let h_phi = self.r_h_phi(r) / r;
        self.config.axis.cross(&radial) * (h_phi / r)
    }

    /// Line-mass gravito-electric field `-2 G lambda g(s) / r` (radial).
    pub fn gravito_electric(&self, p: &Vec3) -> Result<Vec3> {
        let (_, radial, r) = self.config.cylindrical(p);
        if r == 0.0 {
            return Err(Error::AxisSingular);
        }
        let enclosed = self.config.mass_per_length * profile_cumulative(self.config.shell_coordinate(r));
        Ok(radial * (-2.0 * self.constants.g * enclosed / (r * r)))
    }

    /// Mass density of the shell, kg/m^3.
    pub fn mass_density(&self, p: &Vec3) -> f64 {
        let (_, _, r) = self.config.cylindrical(p);
        let cfg = &self.config;
        if r <= cfg.inner_radius() || r >= cfg.outer_radius() {
            return 0.0;
        }
        cfg.mass_per_length * profile_weight(cfg.shell_coordinate(r))
            / (2.0 * PI * r * cfg.shell_thickness)
    }

    /// Mass current density `rho * Omega x r` of the rigidly rotating shell.
    pub fn mass_current_density(&self, p: &Vec3) -> Vec3 {
        let rho = self.mass_density(p);
        if rho == 0.0 {
            return Vec3::zeros();
        }
        let (_, radial, _) = self.config.cylindrical(p);
        self.config.axis.cross(&radial) * (rho * self.config.angular_velocity)
    }

    /// Signed gravito-magnetic flux through a coaxial disk enclosing the whole
    /// shell, oriented along `axis`. Tends to `-interior_bg * pi R^2` as `w -> 0`.
    pub fn enclosed_flux(&self) -> f64 {
        2.0 * PI * self.r_h_phi(self.config.outer_radius())
    }

    /// Signed flux through a coaxial disk of radius `r`.
    pub fn flux_within(&self, r: f64) -> f64 {
        2.0 * PI * self.r_h_phi(r)
    }

    pub fn sample(&self, p: &Vec3) -> FieldSample {
        FieldSample {
            position: *p,
            e_g: self.gravito_electric(p).ok(),
            b_g: self.gravito_magnetic(p),
            h: self.vector_potential(p),
            gauge: Gauge::Symmetric,
        }
    }

    /// `(E_g, B_g)` pair for trajectory integration.
    pub fn forces(&self, p: &Vec3) -> Result<(Vec3, Vec3)> {
        Ok((self.gravito_electric(p)?, self.gravito_magnetic(p)))
    }
}

/// Convenience wrapper: all fields of the shell at `point`.
pub fn solenoid_field(config: &SolenoidConfig, constants: &PhysicalConstants, point: &Vec3) -> FieldSample {
    SolenoidField::new(*config, *constants).sample(point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn unit_field() -> SolenoidField {
        let cfg = SolenoidConfig::along_z(1.0, 0.2, 1.0, 2.0 * PI).unwrap();
        SolenoidField::new(cfg, PhysicalConstants::unit())
    }

    /// Simpson's rule, independent of the closed-form profile moments.
    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let n = n + n % 2;
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for k in 1..n {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + k as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn config_validation() {
        assert!(SolenoidConfig::along_z(1.0, 1.0, 1.0, 1.0).is_err());
        assert!(SolenoidConfig::along_z(1.0, 0.0, 1.0, 1.0).is_err());
        assert!(SolenoidConfig::along_z(-1.0, 0.1, 1.0, 1.0).is_err());
        assert!(SolenoidConfig::along_z(1.0, 0.1, -1.0, 1.0).is_err());
        assert!(SolenoidConfig::new(1.0, 0.1, 1.0, 1.0, Vec3::zeros()).is_err());
        let cfg = SolenoidConfig::new(1.0, 0.1, 1.0, 1.0, Vec3::new(0.0, 0.0, 3.0)).unwrap();
        assert_eq!(cfg.axis, Vec3::z());
    }

    #[test]
    fn interior_bg_examples() {
        let k = PhysicalConstants::paper();
        let zero = SolenoidConfig::along_z(1.0, 0.01, 0.0, 5.0).unwrap();
        assert_eq!(interior_bg(&zero, &k), 0.0);

        let cfg = SolenoidConfig::along_z(1.0, 0.01, 1.0, 2.0 * PI).unwrap();
        let with_printed_mu_g = 4.0 * 9.31e-27 * 1.0 * (2.0 * PI) / (2.0 * PI);
        assert!((with_printed_mu_g - 3.724e-26).abs() < 1e-30);
        let b = interior_bg(&cfg, &k);
        assert!(((b - 3.72e-26) / 3.72e-26).abs() < 3e-3, "{b}");

        let doubled = SolenoidConfig::along_z(1.0, 0.01, 1.0, 4.0 * PI).unwrap();
        assert!((interior_bg(&doubled, &k) / b - 2.0).abs() < 1e-14);
    }

    #[test]
    fn profile_moments_match_quadrature() {
        for sigma in [0.0, 0.1, 0.37, 0.5, 0.9, 1.0] {
            let m1 = simpson(profile_cumulative, 0.0, sigma, 2000);
            let m2 = simpson(|s| s * profile_cumulative(s), 0.0, sigma, 2000);
            assert!((m1 - profile_first_moment(sigma)).abs() < 1e-12, "sigma {sigma}");
            assert!((m2 - profile_second_moment(sigma)).abs() < 1e-12, "sigma {sigma}");
            let w = simpson(profile_weight, 0.0, sigma, 2000);
            assert!((w - profile_cumulative(sigma)).abs() < 1e-12);
        }
        assert!((profile_cumulative(1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn interior_and_exterior_values() {
        let f = unit_field();
        let b0 = interior_bg(&f.config, &f.constants);
        assert!((f.gravito_magnetic(&Vec3::new(0.3, 0.2, 5.0)) - Vec3::new(0.0, 0.0, -b0)).norm() < 1e-15);
        assert_eq!(f.gravito_magnetic(&Vec3::new(10.0, 0.0, 0.0)), Vec3::zeros());

        // on axis: h vanishes, B is the interior value, E undefined
        let s = f.sample(&Vec3::new(0.0, 0.0, 1.0));
        assert_eq!(s.h, Vec3::zeros());
        assert_eq!(s.b_g, Vec3::new(0.0, 0.0, -b0));
        assert!(s.e_g.is_none());
        assert_eq!(f.gravito_electric(&Vec3::zeros()), Err(Error::AxisSingular));

        // symmetric gauge inside
        let p = Vec3::new(0.5, 0.0, 0.0);
        let h = f.vector_potential(&p);
        assert!((h - Vec3::new(0.0, -b0 * 0.5 / 2.0, 0.0)).norm() < 1e-15);

        // line-mass field outside, zero inside
        let e = f.gravito_electric(&Vec3::new(3.0, 0.0, 0.0)).unwrap();
        assert!((e.x + 2.0 * f.constants.g * 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(f.gravito_electric(&Vec3::new(0.5, 0.1, 0.0)).unwrap(), Vec3::zeros());
    }

    #[test]
    fn exterior_potential_is_flux_over_circumference() {
        let f = unit_field();
        let phi = f.enclosed_flux();
        for r in [1.2, 2.0, 10.0] {
            let h = f.vector_potential(&Vec3::new(0.0, r, 0.0));
            // phi_hat at +y is -x
            assert!((h.x + phi / (2.0 * PI * r)).abs() < 1e-14);
        }
        // thin-shell limit of the total flux
        let b0 = interior_bg(&f.config, &f.constants);
        let w = f.config.shell_thickness;
        assert!((phi + b0 * PI * 1.0).abs() < 0.05 * w * w * b0 * PI);
    }

    #[test]
    fn flux_matches_area_integral_of_bg() {
        let f = unit_field();
        for r in [0.5, 0.95, 1.05, 2.0] {
            let area = simpson(|rho| f.bz(rho) * 2.0 * PI * rho, 0.0, r, 20000);
            assert!((area - f.flux_within(r)).abs() < 1e-10, "r {r}");
        }
    }

    #[test]
    fn tilted_axis_fields() {
        let axis = Vec3::new(1.0, 1.0, 0.0).normalize();
        let cfg = SolenoidConfig::new(1.0, 0.2, 1.0, 1.0, axis).unwrap();
        let f = SolenoidField::new(cfg, PhysicalConstants::unit());
        let b0 = interior_bg(&cfg, &f.constants);
        assert!((f.gravito_magnetic(&Vec3::new(0.1, 0.0, 0.2)) + axis * b0).norm() < 1e-15);
        let p = Vec3::new(0.0, 0.0, 3.0);
        let e = f.gravito_electric(&p).unwrap();
        assert!(e.dot(&axis).abs() < 1e-15);
        assert!(e.z < 0.0);
    }

    #[test]
    fn sources_integrate_to_line_density_and_current() {
        let f = unit_field();
        let mass = simpson(|r| f.mass_density(&Vec3::new(r, 0.0, 0.0)) * 2.0 * PI * r, 0.85, 1.15, 4000);
        assert!((mass - 1.0).abs() < 1e-10);
        let current = simpson(|r| f.mass_current_density(&Vec3::new(r, 0.0, 0.0)).y, 0.85, 1.15, 4000);
        assert!((current - f.config.mass_current_per_length()).abs() < 1e-10);
    }

    proptest! {
        #[test]
        fn exterior_bg_is_exactly_zero(r in 1.1001f64..100.0, theta in 0.0f64..6.3, z in -50.0f64..50.0) {
            let f = unit_field();
            let p = Vec3::new(r * theta.cos(), r * theta.sin(), z);
            prop_assert_eq!(f.gravito_magnetic(&p), Vec3::zeros());
        }

        #[test]
        fn curl_h_matches_bg(r in 0.05f64..3.0, theta in 0.0f64..6.3, z in -2.0f64..2.0) {
            let f = unit_field();
            let p = Vec3::new(r * theta.cos(), r * theta.sin(), z);
            let step = 1e-4;
            let d = |i: usize, j: usize| {
                let mut e = Vec3::zeros();
                e[j] = step;
                (f.vector_potential(&(p + e))[i] - f.vector_potential(&(p - e))[i]) / (2.0 * step)
            };
            let curl = Vec3::new(d(2, 1) - d(1, 2), d(0, 2) - d(2, 0), d(1, 0) - d(0, 1));
            let b = f.gravito_magnetic(&p);
            prop_assert!((curl - b).norm() < 1e-5, "curl {:?} vs b {:?}", curl, b);
        }
    }
}
