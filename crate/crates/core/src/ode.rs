//! Fixed-step classic Runge-Kutta integration.
//!
//! Deterministic and allocation-free: the state is a small `Copy` array.

use num_complex::Complex64;

/// A state that supports `self + a * other`.
pub trait StateVector: Copy {
    fn axpy(self, a: f64, other: Self) -> Self;
}

impl<const N: usize> StateVector for [f64; N] {
    fn axpy(self, a: f64, other: Self) -> Self {
        let mut out = self;
        for (o, x) in out.iter_mut().zip(other) {
            *o += a * x;
        }
        out
    }
}

impl<const N: usize> StateVector for [Complex64; N] {
    fn axpy(self, a: f64, other: Self) -> Self {
        let mut out = self;
        for (o, x) in out.iter_mut().zip(other) {
            *o += x * a;
        }
        out
    }
}

/// One classic fourth-order step of `dy/dt = f(t, y)`.
///
/// The derivative may fail (e.g. a field evaluated on a singular line); the
/// first failure is returned and the step is abandoned.
pub fn rk4_step<S, F, E>(f: &mut F, t: f64, y: S, dt: f64) -> Result<S, E>
where
    S: StateVector,
    F: FnMut(f64, S) -> Result<S, E>,
{
    let half = 0.5 * dt;
    let k1 = f(t, y)?;
    let k2 = f(t + half, y.axpy(half, k1))?;
    let k3 = f(t + half, y.axpy(half, k2))?;
    let k4 = f(t + dt, y.axpy(dt, k3))?;
    Ok(y
        .axpy(dt / 6.0, k1)
        .axpy(dt / 3.0, k2)
        .axpy(dt / 3.0, k3)
        .axpy(dt / 6.0, k4))
}

/// Number of fixed steps covering `[0, t_end]`, rounding up.
pub(crate) fn step_count(t_end: f64, dt: f64) -> usize {
    ((t_end / dt) - 1e-9).ceil().max(0.0) as usize
}
