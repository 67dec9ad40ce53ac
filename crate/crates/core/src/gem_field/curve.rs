//! Closed loops, circulation integrals and gauge transforms.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{ensure_positive, Error, Result};
use crate::{PhysicalConstants, Vec3};

use super::SolenoidConfig;

type PathFn = Arc<dyn Fn(f64) -> Vec3 + Send + Sync>;

const MIN_SAMPLES: usize = 16;

/// A closed curve parametrised on `t in [0, 1)`.
///
/// Circulation integrals use the trapezoid rule on the periodic parameter,
/// which converges spectrally for smooth loops. Polygon edges are traversed
/// with a speed that vanishes to second order at each vertex, so the
/// integrand stays smooth across corners.
#[derive(Clone)]
pub struct ClosedCurve {
    point: PathFn,
    tangent: PathFn,
    pub sample_count: usize,
}

impl fmt::Debug for ClosedCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ClosedCurve")
            .field("start", &(self.point)(0.0))
            .field("sample_count", &self.sample_count)
            .finish()
    }
}

impl ClosedCurve {
    /// Arbitrary path; the tangent is taken by fourth-order central
    /// differences in the parameter.
    pub fn from_fn<F>(point: F, sample_count: usize) -> Self
    where
        F: Fn(f64) -> Vec3 + Send + Sync + 'static,
    {
        let point: PathFn = Arc::new(point);
        let p = point.clone();
        let tangent: PathFn = Arc::new(move |t| {
            let d = 1e-5;
            (p(t - 2.0 * d) - p(t + 2.0 * d) + (p(t + d) - p(t - d)) * 8.0) / (12.0 * d)
        });
        ClosedCurve { point, tangent, sample_count }
    }

    /// Path with an analytic tangent `d point / dt`.
    pub fn with_tangent<F, G>(point: F, tangent: G, sample_count: usize) -> Self
    where
        F: Fn(f64) -> Vec3 + Send + Sync + 'static,
        G: Fn(f64) -> Vec3 + Send + Sync + 'static,
    {
        ClosedCurve { point: Arc::new(point), tangent: Arc::new(tangent), sample_count }
    }

    /// Circle traversed counter-clockwise about `normal`.
    pub fn circle(center: Vec3, normal: Vec3, radius: f64, sample_count: usize) -> Result<Self> {
        ensure_positive("radius", radius)?;
        let n = normal.try_normalize(0.0).ok_or_else(|| Error::Geometry("zero normal".into()))?;
        let (e1, e2) = orthonormal_pair(&n);
        Ok(Self::with_tangent(
            move |t| {
                let a = 2.0 * PI * t;
                center + (e1 * a.cos() + e2 * a.sin()) * radius
            },
            move |t| {
                let a = 2.0 * PI * t;
                (e2 * a.cos() - e1 * a.sin()) * (2.0 * PI * radius)
            },
            sample_count,
        ))
    }

    /// Closed polygon through `vertices` (the last edge returns to the first).
    pub fn polygon(vertices: Vec<Vec3>, sample_count: usize) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::Geometry("polygon needs at least 3 vertices".into()));
        }
        let verts: Arc<[Vec3]> = vertices.into();
        let segments = verts.len();
        let locate = move |t: f64| {
            let u = t.rem_euclid(1.0) * segments as f64;
            let j = (u.floor() as usize).min(segments - 1);
            (j, u - j as f64)
        };
        let v1 = verts.clone();
        let v2 = verts;
        Ok(Self::with_tangent(
            move |t| {
                let (j, u) = locate(t);
                let a = v1[j];
                let b = v1[(j + 1) % segments];
                a + (b - a) * (u - (2.0 * PI * u).sin() / (2.0 * PI))
            },
            move |t| {
                let (j, u) = locate(t);
                let a = v2[j];
                let b = v2[(j + 1) % segments];
                (b - a) * ((1.0 - (2.0 * PI * u).cos()) * segments as f64)
            },
            sample_count,
        ))
    }

    /// Same loop traversed the other way.
    pub fn reversed(&self) -> Self {
        let p = self.point.clone();
        let d = self.tangent.clone();
        ClosedCurve {
            point: Arc::new(move |t| p(1.0 - t)),
            tangent: Arc::new(move |t| -d(1.0 - t)),
            sample_count: self.sample_count,
        }
    }

    pub fn point(&self, t: f64) -> Vec3 {
        (self.point)(t)
    }

    pub fn tangent(&self, t: f64) -> Vec3 {
        (self.tangent)(t)
    }

    /// Sample nodes `(point, tangent)` at `t_k = k / n`.
    pub fn nodes(&self) -> impl Iterator<Item = (Vec3, Vec3)> + '_ {
        let n = self.sample_count;
        (0..n).map(move |k| {
            let t = k as f64 / n as f64;
            (self.point(t), self.tangent(t))
        })
    }

    /// Checks the sample count and that `point(1)` returns to `point(0)`.
    pub fn validate(&self) -> Result<()> {
        if self.sample_count < MIN_SAMPLES {
            return Err(Error::Geometry(format!(
                "sample_count {} below minimum {MIN_SAMPLES}",
                self.sample_count
            )));
        }
        let start = self.point(0.0);
        let end = self.point(1.0 - 1e-12);
        let scale = (0..8)
            .map(|k| (self.point(k as f64 / 8.0) - start).norm())
            .fold(start.norm(), f64::max)
            .max(f64::MIN_POSITIVE);
        let gap = (end - start).norm();
        if !gap.is_finite() || gap > 1e-8 * scale {
            return Err(Error::Geometry(format!("curve does not close: gap {gap:e} m")));
        }
        Ok(())
    }
}

/// Two unit vectors completing `n` to a right-handed frame `(e1, e2, n)`.
pub(crate) fn orthonormal_pair(n: &Vec3) -> (Vec3, Vec3) {
    let helper = if n.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    let e1 = (helper - n * n.dot(&helper)).normalize();
    let e2 = n.cross(&e1);
    (e1, e2)
}

/// `oint sampler . dl` by the periodic trapezoid rule.
pub fn line_integral_flux<F>(sampler: F, curve: &ClosedCurve) -> Result<f64>
where
    F: Fn(&Vec3) -> Vec3,
{
    curve.validate()?;
    let n = curve.sample_count as f64;
    let sum: f64 = curve.nodes().map(|(p, dp)| sampler(&p).dot(&dp)).sum();
    Ok(sum / n)
}

/// Fourth-order central-difference gradient of a scalar field.
pub fn central_gradient<M>(mu: &M, p: &Vec3, step: f64) -> Vec3
where
    M: Fn(&Vec3) -> f64 + ?Sized,
{
    let mut g = Vec3::zeros();
    for i in 0..3 {
        let mut e = Vec3::zeros();
        e[i] = step;
        g[i] = (mu(&(p - e * 2.0)) - mu(&(p + e * 2.0)) + 8.0 * (mu(&(p + e)) - mu(&(p - e))))
            / (12.0 * step);
    }
    g
}

/// `h -> h + grad mu`, with the gradient taken by central differences.
pub fn gauge_transform<F, M>(sampler: F, mu: M, step: f64) -> impl Fn(&Vec3) -> Vec3
where
    F: Fn(&Vec3) -> Vec3,
    M: Fn(&Vec3) -> f64,
{
    move |p: &Vec3| sampler(p) + central_gradient(&mu, p, step)
}

/// Enclosed mass current implied by the circuital law,
/// `-(1 / (4 mu_g)) oint B_g . dl`, kg/s.
pub fn ampere_circuital_check<F>(bg_sampler: F, curve: &ClosedCurve, constants: &PhysicalConstants) -> Result<f64>
where
    F: Fn(&Vec3) -> Vec3,
{
    Ok(-line_integral_flux(bg_sampler, curve)? / (4.0 * constants.mu_g))
}

/// Rectangular Amperian loop in a plane containing the shell axis.
///
/// The loop runs along `+axis` at `inner_r`, outward, back along `-axis` at
/// `outer_r` and inward again, so its normal is the azimuthal direction of a
/// positively rotating shell. Straddling the shell, the circuital check then
/// returns `I'_g * axial_length`.
pub fn amperian_rectangle(
    config: &SolenoidConfig,
    inner_r: f64,
    outer_r: f64,
    axial_length: f64,
    sample_count: usize,
) -> Result<ClosedCurve> {
    ensure_positive("axial_length", axial_length)?;
    if !(inner_r >= 0.0 && outer_r > inner_r) {
        return Err(Error::Geometry(format!("need 0 <= inner_r < outer_r, got {inner_r}, {outer_r}")));
    }
    let (e1, _) = orthonormal_pair(&config.axis);
    let a = config.axis * axial_length;
    ClosedCurve::polygon(
        vec![e1 * inner_r, e1 * inner_r + a, e1 * outer_r + a, e1 * outer_r],
        sample_count,
    )
}

#[cfg(test)]
mod tests {
    use super::super::{interior_bg, SolenoidField};
    use super::*;

    fn field() -> SolenoidField {
        let cfg = SolenoidConfig::along_z(1.0, 1e-3, 1.0, 2.0 * PI).unwrap();
        SolenoidField::new(cfg, PhysicalConstants::unit())
    }

    #[test]
    fn gradient_has_zero_circulation() {
        let grad = |p: &Vec3| Vec3::new(2.0 * p.x, p.y.cos(), 0.0);
        let c = ClosedCurve::circle(Vec3::new(0.3, -0.2, 1.0), Vec3::new(0.2, 0.1, 1.0), 1.7, 256).unwrap();
        assert!(line_integral_flux(grad, &c).unwrap().abs() < 1e-12);
        let poly = ClosedCurve::polygon(
            vec![Vec3::zeros(), Vec3::new(2.0, 0.0, 0.0), Vec3::new(1.0, 3.0, 1.0)],
            600,
        )
        .unwrap();
        assert!(line_integral_flux(grad, &poly).unwrap().abs() < 1e-9);
    }

    #[test]
    fn solenoid_flux_through_large_and_small_circles() {
        let f = field();
        let b0 = interior_bg(&f.config, &f.constants);
        let big = ClosedCurve::circle(Vec3::zeros(), Vec3::z(), 2.0, 4096).unwrap();
        let flux = line_integral_flux(|p| f.vector_potential(p), &big).unwrap();
        let expect = -b0 * PI;
        assert!(((flux - expect) / expect).abs() < 1e-6, "{flux} vs {expect}");

        let small = ClosedCurve::circle(Vec3::new(0.0, 0.0, 4.0), Vec3::z(), 0.5, 4096).unwrap();
        let flux = line_integral_flux(|p| f.vector_potential(p), &small).unwrap();
        let expect = -b0 * PI * 0.25;
        assert!(((flux - expect) / expect).abs() < 1e-12);
    }

    #[test]
    fn non_closed_curve_is_rejected() {
        let open = ClosedCurve::from_fn(|t| Vec3::new(t, 0.0, 0.0), 64);
        assert!(matches!(line_integral_flux(|_| Vec3::x(), &open), Err(Error::Geometry(_))));
        let sparse = ClosedCurve::circle(Vec3::zeros(), Vec3::z(), 1.0, 8).unwrap();
        assert!(matches!(sparse.validate(), Err(Error::Geometry(_))));
    }

    #[test]
    fn from_fn_matches_analytic_tangent() {
        let c = ClosedCurve::from_fn(|t| Vec3::new((2.0 * PI * t).cos(), (2.0 * PI * t).sin(), 0.0), 512);
        let flux = line_integral_flux(|p| Vec3::new(-p.y, p.x, 0.0) * 0.5, &c).unwrap();
        assert!((flux - PI).abs() < 1e-8);
    }

    #[test]
    fn gauge_transform_examples() {
        let h = |p: &Vec3| Vec3::new(p.y, -p.x, 0.5);
        let same = gauge_transform(h, |_| 3.0, 1e-3);
        let p = Vec3::new(0.2, 0.7, -1.0);
        assert!((same(&p) - h(&p)).norm() < 1e-12);

        let linear = gauge_transform(|_| Vec3::zeros(), |p: &Vec3| 2.5 * p.x, 1e-3);
        assert!((linear(&p) - Vec3::new(2.5, 0.0, 0.0)).norm() < 1e-10);

        let f = field();
        let c = ClosedCurve::circle(Vec3::new(0.1, 0.0, 0.0), Vec3::z(), 1.6, 4096).unwrap();
        let before = line_integral_flux(|p| f.vector_potential(p), &c).unwrap();
        let transformed = gauge_transform(|p: &Vec3| f.vector_potential(p), |p: &Vec3| (p.x * p.y).sin() + p.z * p.x, 1e-3);
        let after = line_integral_flux(transformed, &c).unwrap();
        assert!(((after - before) / before).abs() < 1e-8);
    }

    #[test]
    fn circuital_law_recovers_enclosed_current() {
        let f = field();
        let bg = |p: &Vec3| f.gravito_magnetic(p);
        let rect = amperian_rectangle(&f.config, 0.5, 2.0, 3.0, 1024).unwrap();
        let enclosed = ampere_circuital_check(bg, &rect, &f.constants).unwrap();
        let per_length = enclosed / 3.0;
        let expect = f.config.mass_current_per_length();
        assert!(((per_length - expect) / expect).abs() < 1e-10, "{per_length} vs {expect}");

        let flipped = ampere_circuital_check(bg, &rect.reversed(), &f.constants).unwrap();
        assert!((flipped + enclosed).abs() < 1e-12 * enclosed.abs());

        // loop entirely outside, not enclosing the shell
        let outside = amperian_rectangle(&f.config, 2.0, 5.0, 1.0, 512).unwrap();
        assert_eq!(ampere_circuital_check(bg, &outside, &f.constants).unwrap(), 0.0);
        let ring = ClosedCurve::circle(Vec3::new(5.0, 0.0, 0.0), Vec3::z(), 1.0, 64).unwrap();
        assert_eq!(ampere_circuital_check(bg, &ring, &f.constants).unwrap(), 0.0);
    }
}
