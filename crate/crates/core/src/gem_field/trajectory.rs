//! Test-particle motion under the Lorentz-like force `dv/dt = E_g + v x B_g`.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_positive, Error, Result};
use crate::ode::{rk4_step, step_count};
use crate::{PhysicalConstants, Tabular, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryState {
    pub t: f64,
    pub position: Vec3,
    pub velocity: Vec3,
}

/// Sampled states, one per step including the initial state.
///
/// If a field evaluation fails mid-run the series stops at the last good
/// state and `error` holds the cause.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub states: Vec<TrajectoryState>,
    #[serde(skip)]
    pub error: Option<Error>,
    /// Set when any sampled speed exceeds `0.01 c`.
    pub speed_warning: bool,
}

impl Trajectory {
    /// `(r x v) . axis` per unit mass at each state, m^2/s.
    pub fn axial_angular_momentum(&self, axis: &Vec3) -> Vec<f64> {
        let n = axis.normalize();
        self.states.iter().map(|s| s.position.cross(&s.velocity).dot(&n)).collect()
    }

    pub fn last(&self) -> &TrajectoryState {
        self.states.last().expect("trajectory always holds its initial state")
    }
}

impl Tabular for Trajectory {
    fn columns(&self) -> Vec<String> {
        ["t_s", "x_m", "y_m", "z_m", "vx_m_s", "vy_m_s", "vz_m_s"].map(String::from).to_vec()
    }

    fn rows(&self) -> Vec<Vec<f64>> {
        self.states
            .iter()
            .map(|s| {
                let (p, v) = (s.position, s.velocity);
                vec![s.t, p.x, p.y, p.z, v.x, v.y, v.z]
            })
            .collect()
    }
}

/// Fixed-step RK4 integration of a test particle.
///
/// `fields` returns `(E_g, B_g)` at a position. The mass cancels from the
/// equation of motion and is only validated.
pub fn integrate_trajectory<F>(
    mass: f64,
    position: Vec3,
    velocity: Vec3,
    fields: F,
    t_end: f64,
    dt: f64,
    constants: &PhysicalConstants,
) -> Result<Trajectory>
where
    F: Fn(&Vec3) -> Result<(Vec3, Vec3)>,
{
    ensure_positive("mass", mass)?;
    ensure_positive("dt", dt)?;
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::Domain(format!("t_end must be non-negative, got {t_end}")));
    }
    for k in 0..3 {
        ensure_finite("position", position[k])?;
        ensure_finite("velocity", velocity[k])?;
    }

    let speed_limit = 0.01 * constants.c;
    let mut rhs = |_t: f64, y: [f64; 6]| -> Result<[f64; 6]> {
        let r = Vec3::new(y[0], y[1], y[2]);
        let v = Vec3::new(y[3], y[4], y[5]);
        let (e, b) = fields(&r)?;
        let a = e + v.cross(&b);
        Ok([v.x, v.y, v.z, a.x, a.y, a.z])
    };

    let n = step_count(t_end, dt);
    let mut states = Vec::with_capacity(n + 1);
    let mut y = [position.x, position.y, position.z, velocity.x, velocity.y, velocity.z];
    states.push(TrajectoryState { t: 0.0, position, velocity });
    let mut speed_warning = velocity.norm() > speed_limit;
    let mut error = None;

    for k in 0..n {
        let t = k as f64 * dt;
        match rk4_step(&mut rhs, t, y, dt) {
            Ok(next) if next.iter().all(|x| x.is_finite()) => y = next,
            Ok(_) => {
                error = Some(Error::NonFinite { t, step: k });
                break;
            }
            Err(e) => {
                error = Some(e);
                break;
            }
        }
        let state = TrajectoryState {
            t: (k + 1) as f64 * dt,
            position: Vec3::new(y[0], y[1], y[2]),
            velocity: Vec3::new(y[3], y[4], y[5]),
        };
        speed_warning |= state.velocity.norm() > speed_limit;
        states.push(state);
    }

    Ok(Trajectory { states, error, speed_warning })
}
