//! Reference estimators that share nothing with the closed forms: Monte
//! Carlo over sampled SNR pairs, and quadrature of the defining integrals
//! with the elementary density and incomplete-beta distribution function.

mod monte_carlo;
mod quadrature;

pub use monte_carlo::{mc_asc, mc_metrics, mc_pnsc, McEstimate, McMetrics, MIN_SAMPLES};
pub use quadrature::{
    asc_quadrature, pnsc_quadrature, AscQuadrature, QuadratureResult, MAX_SUBDIVISIONS,
};

use crate::fading::{FadingParams, WiretapScenario};

/// Shape sets `(m_D, m_sD, m_E, m_sE)` of the standard validation grid.
pub const GRID_SHAPES: [[f64; 4]; 4] = [
    [1.0, 1.0, 1.0, 1.0],
    [2.5, 2.5, 2.5, 2.5],
    [2.5, 1.0, 1.0, 2.5],
    [1.0, 2.5, 2.5, 1.0],
];

/// `γ̄_D / γ̄_E` ratios of the standard validation grid (`γ̄_E = 1`).
pub const GRID_RATIOS: [f64; 3] = [1.0, 10.0, 100.0];

/// The 12-scenario validation grid: every shape set at every ratio.
pub fn standard_grid() -> Vec<WiretapScenario> {
    GRID_SHAPES
        .iter()
        .flat_map(|&[md, msd, me, mse]| {
            GRID_RATIOS.iter().map(move |&r| {
                WiretapScenario::new(
                    FadingParams::new(md, msd, r).expect("valid grid point"),
                    FadingParams::new(me, mse, 1.0).expect("valid grid point"),
                )
            })
        })
        .collect()
}
