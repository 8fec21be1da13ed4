//! Bivariate Meijer G-function
//!
//! ```text
//! G(x, y) = 1/(2πi)^2 ∫∫ φ_outer(s + t) φ_first(s) φ_second(t) x^{-s} y^{-t} ds dt
//! ```
//!
//! where each `φ` is the univariate Meijer kernel of its block. The blocks
//! carry the superscript/subscript orders of the usual notation
//! `G^{m1,n1:m2,n2:m3,n3}_{p1,q1:p2,q2:p3,q3}`. Both contours are vertical
//! lines; on a uniform grid `φ_outer(s + t)` only depends on the index sum,
//! so each block kernel is evaluated once per grid line and the double sum
//! costs one complex exponential per node.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::meijer::MeijerSpec;
use super::{EvalResult, Method};
use crate::error::{Error, Result};

/// Grid nodes allowed per evaluation.
pub const NODE_BUDGET: usize = 1 << 20;

/// Successive refinements closer than this (relative) are accepted once the
/// node budget is exhausted.
pub const BUDGET_REL_TOL: f64 = 1e-6;

const TARGET_REL_TOL: f64 = 1e-11;
const MAX_HALF_WIDTH: f64 = 80.0;

/// Parameters of a two-variable G-function.
#[derive(Debug, Clone, PartialEq)]
pub struct BivariateMeijerSpec {
    outer: MeijerSpec,
    first: MeijerSpec,
    second: MeijerSpec,
}

/// Real parts of the two vertical contours and their clearance from the
/// nearest pole line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BivariateContour {
    pub sigma: f64,
    pub tau: f64,
    pub margin: f64,
}

impl BivariateMeijerSpec {
    /// Checks that the double integral decays in every direction and that a
    /// pair of straight contours separates all three pole systems.
    pub fn new(outer: MeijerSpec, first: MeijerSpec, second: MeijerSpec) -> Result<Self> {
        let (k1, k2, k3) = (outer.decay_rate(), first.decay_rate(), second.decay_rate());
        if !(k1 + k2 > 0.0 && k1 + k3 > 0.0 && k2 + k3 > 0.0) {
            return Err(Error::domain(format!(
                "bivariate kernel does not decay in every direction (rates {k1}, {k2}, {k3})"
            )));
        }
        let spec = Self {
            outer,
            first,
            second,
        };
        spec.feasible_region()?;
        Ok(spec)
    }

    pub fn outer(&self) -> &MeijerSpec {
        &self.outer
    }

    pub fn first(&self) -> &MeijerSpec {
        &self.first
    }

    pub fn second(&self) -> &MeijerSpec {
        &self.second
    }

    /// Exchanges the two variable blocks; `G(x, y)` of the result equals
    /// `G(y, x)` of `self`.
    pub fn swapped(&self) -> Self {
        Self {
            outer: self.outer.clone(),
            first: self.second.clone(),
            second: self.first.clone(),
        }
    }

    /// Bounds for `σ`, `τ`, `σ + τ` and the widest margin achievable.
    fn feasible_region(&self) -> Result<Region> {
        let i1 = finite_interval(self.outer.separation_interval());
        let i2 = finite_interval(self.first.separation_interval());
        let i3 = finite_interval(self.second.separation_interval());
        for (name, (lo, hi)) in [("outer", i1), ("first", i2), ("second", i3)] {
            if !(lo < hi) {
                return Err(Error::domain(format!(
                    "{name} block of the bivariate G has no straight separating contour"
                )));
            }
        }
        let feasible = |d: f64| {
            let (a2, b2) = (i2.0 + d, i2.1 - d);
            let (a3, b3) = (i3.0 + d, i3.1 - d);
            let (a1, b1) = (i1.0 + d, i1.1 - d);
            a2 < b2 && a3 < b3 && a1 < b1 && (a2 + a3).max(a1) < (b2 + b3).min(b1)
        };
        if !feasible(1e-6) {
            return Err(Error::domain(
                "no pair of straight contours separates the outer poles of the bivariate G",
            ));
        }
        let (mut lo, mut hi) = (1e-6, 0.5);
        if feasible(hi) {
            lo = hi;
        } else {
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if feasible(mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
        }
        Ok(Region {
            i1,
            i2,
            i3,
            max_margin: lo,
        })
    }

    /// Contour pair used for `(z1, z2)`: half the widest achievable margin,
    /// placed where the real-axis integrand (an upper bound on its modulus
    /// along the lines) is smallest.
    pub fn contour(&self, z1: f64, z2: f64) -> Result<BivariateContour> {
        let region = self.feasible_region()?;
        let d = 0.5 * region.max_margin;
        let (a2, b2) = (region.i2.0 + d, region.i2.1 - d);
        let (a3, b3) = (region.i3.0 + d, region.i3.1 - d);
        let (a1, b1) = (region.i1.0 + d, region.i1.1 - d);
        let (l1, l2) = (z1.ln(), z2.ln());
        let steps = 48;
        let mut best: Option<(f64, f64, f64)> = None;
        for i in 0..=steps {
            let sigma = a2 + (b2 - a2) * i as f64 / steps as f64;
            for j in 0..=steps {
                let tau = a3 + (b3 - a3) * j as f64 / steps as f64;
                let u = sigma + tau;
                if u < a1 || u > b1 {
                    continue;
                }
                let s = Complex64::new(sigma, 0.0);
                let t = Complex64::new(tau, 0.0);
                let level = (self.outer.ln_kernel(s + t)
                    + self.first.ln_kernel(s)
                    + self.second.ln_kernel(t))
                .re - sigma * l1
                    - tau * l2;
                if best.map_or(true, |b| level < b.0) {
                    best = Some((level, sigma, tau));
                }
            }
        }
        let (_, sigma, tau) = best.ok_or_else(|| {
            Error::domain("bivariate contour search found no admissible grid point")
        })?;
        Ok(BivariateContour {
            sigma,
            tau,
            margin: d,
        })
    }
}

#[derive(Debug, Clone, Copy)]
struct Region {
    i1: (f64, f64),
    i2: (f64, f64),
    i3: (f64, f64),
    max_margin: f64,
}

fn finite_interval((lo, hi): (f64, f64)) -> (f64, f64) {
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => (lo, hi),
        (true, false) => (lo, lo + 3.0),
        (false, true) => (hi - 3.0, hi),
        (false, false) => (-1.5, 1.5),
    }
}

/// Log-kernels sampled on one grid line.
struct Lines {
    first: Vec<Complex64>,
    second: Vec<Complex64>,
    outer: Vec<Complex64>,
    half: usize,
}

impl Lines {
    fn new(
        spec: &BivariateMeijerSpec,
        ctr: &BivariateContour,
        l1: f64,
        l2: f64,
        h: f64,
        half: usize,
    ) -> Self {
        let idx = |k: usize, half: usize| (k as f64 - half as f64) * h;
        let first = (0..=2 * half)
            .map(|k| {
                let s = Complex64::new(ctr.sigma, idx(k, half));
                spec.first.ln_kernel(s) - s * l1
            })
            .collect();
        let second = (0..=2 * half)
            .map(|k| {
                let t = Complex64::new(ctr.tau, idx(k, half));
                spec.second.ln_kernel(t) - t * l2
            })
            .collect();
        let outer = (0..=4 * half)
            .map(|k| {
                spec.outer
                    .ln_kernel(Complex64::new(ctr.sigma + ctr.tau, idx(k, 2 * half)))
            })
            .collect();
        Self {
            first,
            second,
            outer,
            half,
        }
    }

    #[inline]
    fn node(&self, i: usize, j: usize) -> Complex64 {
        (self.first[i] + self.second[j] + self.outer[i + j]).exp()
    }

    /// Trapezoid sum over the full grid using `f(-x, -y) = conj f(x, y)`.
    /// Returns `(Σ f, Σ |f|)`.
    fn sum(&self) -> (f64, f64) {
        let n = 2 * self.half;
        let c = self.half;
        let (mut total, mut total_abs) = (1..=c)
            .into_par_iter()
            .map(|di| {
                let i = c + di;
                let mut acc = 0.0;
                let mut acc_abs = 0.0;
                for j in 0..=n {
                    let f = self.node(i, j);
                    acc += f.re;
                    acc_abs += f.norm();
                }
                (2.0 * acc, 2.0 * acc_abs)
            })
            .reduce(|| (0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
        let f0 = self.node(c, c);
        total += f0.re;
        total_abs += f0.norm();
        for j in c + 1..=n {
            let f = self.node(c, j);
            total += 2.0 * f.re;
            total_abs += 2.0 * f.norm();
        }
        (total, total_abs)
    }
}

/// `G(z1, z2)` for `z1, z2 > 0` by tensor-product trapezoid quadrature,
/// refined by halving the step until successive values agree.
pub fn meijer_g_bivariate(spec: &BivariateMeijerSpec, z1: f64, z2: f64) -> Result<EvalResult> {
    if !(z1.is_finite() && z1 > 0.0 && z2.is_finite() && z2 > 0.0) {
        return Err(Error::domain(format!(
            "bivariate G arguments must be positive and finite, got ({z1}, {z2})"
        )));
    }
    let ctr = spec.contour(z1, z2)?;
    meijer_g_bivariate_on(spec, z1, z2, &ctr)
}

/// Same as [`meijer_g_bivariate`] on an explicitly chosen contour pair.
pub fn meijer_g_bivariate_on(
    spec: &BivariateMeijerSpec,
    z1: f64,
    z2: f64,
    ctr: &BivariateContour,
) -> Result<EvalResult> {
    let (l1, l2) = (z1.ln(), z2.ln());
    let extent = truncation(spec, ctr, l1, l2)?;
    let norm = 1.0 / (4.0 * PI * PI);

    let mut h = (0.5 * ctr.margin).clamp(0.02, 0.2);
    let mut previous: Option<f64> = None;
    loop {
        let half = (extent / h).ceil() as usize;
        let step = extent / half as f64;
        let nodes = (2 * half + 1) * (2 * half + 1);
        let lines = Lines::new(spec, ctr, l1, l2, step, half);
        let (sum, sum_abs) = lines.sum();
        let value = norm * step * step * sum;
        let l1_norm = norm * step * step * sum_abs;
        if !value.is_finite() {
            return Err(Error::NonFinite("bivariate quadrature"));
        }
        let floor = 8.0 * f64::EPSILON * l1_norm * (nodes as f64).sqrt();
        if let Some(prev) = previous {
            let diff = (value - prev).abs();
            if diff <= TARGET_REL_TOL * value.abs() || diff <= floor {
                return EvalResult::new(value, diff + floor, Method::DoubleContour);
            }
            let next_nodes = (4 * half + 1) * (4 * half + 1);
            if next_nodes > NODE_BUDGET {
                if diff <= BUDGET_REL_TOL * value.abs() {
                    return EvalResult::new(value, diff + floor, Method::DoubleContour);
                }
                return Err(Error::NoConvergence(format!(
                    "bivariate G at ({z1}, {z2}): contours σ = {}, τ = {}, truncation |Im| ≤ {extent}, \
                     step {step}, last change {diff:e} on value {value:e} with {nodes} nodes",
                    ctr.sigma, ctr.tau
                )));
            }
        }
        previous = Some(value);
        h *= 0.5;
    }
}

/// Half-width of the square `[-T, T]^2` outside which the integrand is
/// negligible, found on a coarse grid.
fn truncation(spec: &BivariateMeijerSpec, ctr: &BivariateContour, l1: f64, l2: f64) -> Result<f64> {
    let h = 0.25;
    let half = (MAX_HALF_WIDTH / h) as usize;
    let lines = Lines::new(spec, ctr, l1, l2, h, half);
    let c = half;
    let level = |i: usize, j: usize| (lines.first[i] + lines.second[j] + lines.outer[i + j]).re;
    let mut peak = f64::NEG_INFINITY;
    let mut t = 4.0;
    while t <= MAX_HALF_WIDTH {
        let k = (t / h) as usize;
        let (lo, hi) = (c - k, c + k);
        for i in lo..=hi {
            for j in lo..=hi {
                peak = peak.max(level(i, j));
            }
        }
        let mut edge = f64::NEG_INFINITY;
        for m in lo..=hi {
            edge = edge
                .max(level(lo, m))
                .max(level(hi, m))
                .max(level(m, lo))
                .max(level(m, hi));
        }
        if !peak.is_finite() {
            return Err(Error::NonFinite("bivariate integrand"));
        }
        if edge < peak - 40.0 {
            return Ok(t);
        }
        t += 2.0;
    }
    Err(Error::NoConvergence(format!(
        "bivariate integrand still significant at |Im| = {MAX_HALF_WIDTH} (contours σ = {}, τ = {})",
        ctr.sigma, ctr.tau
    )))
}
