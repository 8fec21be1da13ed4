//! Direct quadrature of the univariate Mellin–Barnes integral.
//!
//! Parameters and argument are real, so the integrand is conjugate-symmetric
//! about the real axis and only the upper half of the path is integrated.
//! The trapezoid rule on an exponentially decaying analytic integrand
//! converges geometrically in the step size; successive halvings give the
//! error estimate.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::meijer::MeijerSpec;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Path {
    /// `s = c + iu`.
    Vertical,
    /// Hyperbola through `c`, asymptotically at 45° towards the left poles.
    BentLeft,
    /// Mirror image of [`Path::BentLeft`], towards the right poles.
    BentRight,
}

impl Path {
    /// Point and derivative `ds/du` at parameter `u`.
    #[inline]
    fn point(self, c: f64, u: f64) -> (Complex64, Complex64) {
        const W: f64 = 1.0;
        match self {
            Path::Vertical => (Complex64::new(c, u), Complex64::new(0.0, 1.0)),
            Path::BentLeft | Path::BentRight => {
                let dir = if self == Path::BentLeft { -1.0 } else { 1.0 };
                let root = (u * u + W * W).sqrt();
                let re = c + dir * (root - W);
                (Complex64::new(re, u), Complex64::new(dir * u / root, 1.0))
            }
        }
    }
}

const MAX_EXTENT: f64 = 4000.0;
const MAX_NODES: usize = 1 << 20;

/// Integrand `Re[φ(s) z^{-s} s'(u) / i] / π` on the path, so that the
/// G-function is its integral over `u ∈ [0, ∞)`.
#[inline]
fn integrand(spec: &MeijerSpec, ln_z: f64, c: f64, path: Path, u: f64) -> (f64, f64) {
    let (s, ds) = path.point(c, u);
    let f = (spec.ln_kernel(s) - s * ln_z).exp() * ds * Complex64::new(0.0, -1.0);
    (f.re / PI, f.norm() / PI)
}

/// Returns `(value, abs_err_est)` of the contour integral through `c`.
pub(crate) fn contour_integral(
    spec: &MeijerSpec,
    z: f64,
    c: f64,
    path: Path,
) -> Result<(f64, f64)> {
    let ln_z = z.ln();

    // Truncation: walk out in unit steps until the magnitude has dropped
    // far below its peak for a few consecutive steps.
    let mut peak = integrand(spec, ln_z, c, path, 0.0).1;
    let mut quiet = 0;
    let mut extent = 0.0;
    while quiet < 3 {
        extent += 1.0;
        if extent > MAX_EXTENT {
            return Err(Error::NoConvergence(format!(
                "contour integrand at z = {z}, c = {c} still significant at |Im s| = {MAX_EXTENT}"
            )));
        }
        let (_, mag) = integrand(spec, ln_z, c, path, extent);
        if !mag.is_finite() {
            return Err(Error::NonFinite("contour integrand"));
        }
        peak = peak.max(mag);
        if mag < 1e-18 * peak {
            quiet += 1;
        } else {
            quiet = 0;
        }
    }

    // Nested trapezoid rules on [0, extent]; each halving only adds the new
    // midpoints.
    let mut h = 0.5f64;
    let mut nodes = (extent / h).ceil() as usize;
    h = extent / nodes as f64;
    let (f0, a0) = integrand(spec, ln_z, c, path, 0.0);
    let mut sum = 0.5 * f0;
    let mut abs_sum = 0.5 * a0;
    for k in 1..=nodes {
        let (f, a) = integrand(spec, ln_z, c, path, k as f64 * h);
        sum += f;
        abs_sum += a;
    }
    let mut estimate = h * sum;
    loop {
        let mut fresh = 0.0;
        let mut fresh_abs = 0.0;
        for k in 0..nodes {
            let (f, a) = integrand(spec, ln_z, c, path, (k as f64 + 0.5) * h);
            fresh += f;
            fresh_abs += a;
        }
        sum += fresh;
        abs_sum += fresh_abs;
        nodes *= 2;
        h *= 0.5;
        let refined = h * sum;
        let l1 = h * abs_sum;
        let diff = (refined - estimate).abs();
        let floor = 8.0 * f64::EPSILON * l1 * (nodes as f64).sqrt();
        estimate = refined;
        if !estimate.is_finite() {
            return Err(Error::NonFinite("contour quadrature"));
        }
        // The previous step's error is about `diff`; this one's is far smaller.
        if diff <= 1e-13 * l1 || diff <= floor {
            return Ok((estimate, diff + floor));
        }
        if nodes >= MAX_NODES {
            return Err(Error::NoConvergence(format!(
                "contour quadrature at z = {z} stalled: last change {diff:e} after {nodes} nodes"
            )));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn bent_paths_cross_axis_at_c() {
        for path in [Path::Vertical, Path::BentLeft, Path::BentRight] {
            let (s, ds) = path.point(0.3, 0.0);
            assert_eq!(s, Complex64::new(0.3, 0.0));
            assert_eq!(ds, Complex64::new(0.0, 1.0));
        }
        let (s, _) = Path::BentLeft.point(0.0, 100.0);
        assert!(s.re < -98.0);
        let (s, _) = Path::BentRight.point(0.0, 100.0);
        assert!(s.re > 98.0);
    }

    #[test]
    fn gamma_pair_integral() {
        // G^{1,1}_{1,1}(z | 0; 0) = 1 / (1 + z): kernel Γ(s)Γ(1 - s)
        let spec = MeijerSpec::new(1, 1, vec![0.0], vec![0.0]).unwrap();
        for z in [0.01, 0.5, 1.0, 3.0, 80.0] {
            let (v, e) = contour_integral(&spec, z, 0.5, Path::Vertical).unwrap();
            assert_relative_eq!(v, 1.0 / (1.0 + z), max_relative = 1e-11);
            assert!(e < 1e-9);
        }
    }
}
