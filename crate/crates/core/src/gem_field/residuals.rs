//! Finite-difference residuals of the four static Maxwell-like equations.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};
use crate::Vec3;

use super::SolenoidField;

const MIN_RESOLUTION: usize = 8;

/// Uniform Cartesian grid: `resolution[k]` nodes along axis `k`, starting at
/// `origin` with node spacing `spacing` (m).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub origin: Vec3,
    pub spacing: f64,
    pub resolution: [usize; 3],
}

impl GridSpec {
    /// Grid filling the box `[lo, hi]` with `spacing`; the node count per axis
    /// is rounded so the last node sits at or just below `hi`.
    pub fn covering(lo: Vec3, hi: Vec3, spacing: f64) -> Result<Self> {
        ensure_positive("spacing", spacing)?;
        let mut resolution = [0; 3];
        for k in 0..3 {
            let span = hi[k] - lo[k];
            if !(span > 0.0) {
                return Err(Error::Configuration(format!("empty grid extent on axis {k}")));
            }
            resolution[k] = (span / spacing + 1e-9).floor() as usize + 1;
        }
        let grid = GridSpec { origin: lo, spacing, resolution };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("spacing", self.spacing)
            .map_err(|e| Error::Configuration(e.to_string()))?;
        if let Some(k) = self.resolution.iter().position(|&n| n < MIN_RESOLUTION) {
            return Err(Error::Configuration(format!(
                "grid resolution {} on axis {k} is below {MIN_RESOLUTION}",
                self.resolution[k]
            )));
        }
        Ok(())
    }

    pub fn node(&self, i: usize, j: usize, k: usize) -> Vec3 {
        self.origin + Vec3::new(i as f64, j as f64, k as f64) * self.spacing
    }
}

/// Max-norm residuals over the interior grid nodes.
///
/// Sources enter with the attractive signs `div E_g = -rho/eps_g` and
/// `curl B_g = -4 mu_g j`; the configuration is static so `dB_g/dt = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxwellResiduals {
    pub div_bg: f64,
    pub curl_eg_plus_dt_bg: f64,
    pub div_eg_minus_source: f64,
    pub curl_bg_minus_source: f64,
    /// Largest `|B_g|` seen on the grid, s^-1.
    pub bg_scale: f64,
    /// Largest `|E_g|` seen on the grid, m/s^2.
    pub eg_scale: f64,
}

impl MaxwellResiduals {
    fn max(self, o: Self) -> Self {
        MaxwellResiduals {
            div_bg: self.div_bg.max(o.div_bg),
            curl_eg_plus_dt_bg: self.curl_eg_plus_dt_bg.max(o.curl_eg_plus_dt_bg),
            div_eg_minus_source: self.div_eg_minus_source.max(o.div_eg_minus_source),
            curl_bg_minus_source: self.curl_bg_minus_source.max(o.curl_bg_minus_source),
            bg_scale: self.bg_scale.max(o.bg_scale),
            eg_scale: self.eg_scale.max(o.eg_scale),
        }
    }

    fn zero() -> Self {
        MaxwellResiduals {
            div_bg: 0.0,
            curl_eg_plus_dt_bg: 0.0,
            div_eg_minus_source: 0.0,
            curl_bg_minus_source: 0.0,
            bg_scale: 0.0,
            eg_scale: 0.0,
        }
    }
}

/// Second-order central-difference residuals of the field equations on every
/// interior node of `grid`. Fails if a stencil touches the axis.
pub fn maxwell_residuals(grid: &GridSpec, field: &SolenoidField) -> Result<MaxwellResiduals> {
    grid.validate()?;
    let [nx, ny, nz] = grid.resolution;
    let h = grid.spacing;
    let inv2h = 0.5 / h;
    let k = &field.constants;

    (1..nx - 1)
        .into_par_iter()
        .flat_map_iter(|i| (1..ny - 1).flat_map(move |j| (1..nz - 1).map(move |l| (i, j, l))))
        .map(|(i, j, l)| {
            let p = grid.node(i, j, l);
            let mut eb = [[Vec3::zeros(); 2]; 3];
            let mut bb = [[Vec3::zeros(); 2]; 3];
            for d in 0..3 {
                let mut e = Vec3::zeros();
                e[d] = h;
                eb[d] = [field.gravito_electric(&(p - e))?, field.gravito_electric(&(p + e))?];
                bb[d] = [field.gravito_magnetic(&(p - e)), field.gravito_magnetic(&(p + e))];
            }
            // partial derivative of component c along axis d
            let de = |c: usize, d: usize| (eb[d][1][c] - eb[d][0][c]) * inv2h;
            let db = |c: usize, d: usize| (bb[d][1][c] - bb[d][0][c]) * inv2h;
            let curl = |f: &dyn Fn(usize, usize) -> f64| {
                Vec3::new(f(2, 1) - f(1, 2), f(0, 2) - f(2, 0), f(1, 0) - f(0, 1))
            };

            let e_here = field.gravito_electric(&p)?;
            let b_here = field.gravito_magnetic(&p);
            let rho = field.mass_density(&p);
            let j = field.mass_current_density(&p);

            let div_b = db(0, 0) + db(1, 1) + db(2, 2);
            let div_e = de(0, 0) + de(1, 1) + de(2, 2);
            Ok(MaxwellResiduals {
                div_bg: div_b.abs(),
                curl_eg_plus_dt_bg: curl(&de).norm(),
                div_eg_minus_source: (div_e + rho / k.eps_g).abs(),
                curl_bg_minus_source: (curl(&db) + j * (4.0 * k.mu_g)).norm(),
                bg_scale: b_here.norm(),
                eg_scale: e_here.norm(),
            })
        })
        .try_reduce(MaxwellResiduals::zero, |a, b| Ok(a.max(b)))
}
