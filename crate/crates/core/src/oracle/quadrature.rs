//! Direct quadrature of the defining one-dimensional integrals.
//!
//! Only the elementary density and the incomplete-beta distribution
//! function are used. Integrals run over `t = ln γ` on `[ln δ, ln Γmax]`,
//! where the power-law ends of the integrand turn into exponential decay;
//! the cut-off pieces are bounded analytically and added to the error.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::fading::{cdf_unchecked, pdf_unchecked, FadingParams, WiretapScenario};
use crate::special_functions::ln_beta;

pub const MAX_SUBDIVISIONS: usize = 20_000;

const REL_TOL: f64 = 1e-12;
const ABS_TOL: f64 = 1e-15;

/// Mass allowed in each cut-off end.
const TAIL_MASS: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_err_est: f64,
    /// Panels in the final partition.
    pub subdivisions: usize,
}

/// `J1`, `J2`, `J3` by quadrature; the ASC is `j1 + j2 - j3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AscQuadrature {
    pub j1: QuadratureResult,
    pub j2: QuadratureResult,
    pub j3: QuadratureResult,
}

impl AscQuadrature {
    pub fn asc(&self) -> f64 {
        self.j1.value + self.j2.value - self.j3.value
    }

    pub fn abs_err_est(&self) -> f64 {
        self.j1.abs_err_est + self.j2.abs_err_est + self.j3.abs_err_est
    }
}

// Kronrod 15-point abscissae and weights, with the embedded Gauss 7-point
// weights for the odd-indexed abscissae.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Panel {
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    let mut abs = (WGK[7] * fc).abs();
    for j in 0..7 {
        let x = h * XGK[j];
        let (f1, f2) = (f(c - x), f(c + x));
        k += WGK[j] * (f1 + f2);
        abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            g += WG[j / 2] * (f1 + f2);
        }
    }
    let value = k * h;
    let err = ((k - g) * h).abs() + 50.0 * f64::EPSILON * abs * h.abs();
    Panel { lo, hi, value, err }
}

/// Globally adaptive Gauss–Kronrod over the given breakpoints: the panel
/// with the largest error estimate is bisected until the total error meets
/// the tolerance.
pub(crate) fn integrate<F: Fn(f64) -> f64>(f: F, breaks: &[f64]) -> Result<QuadratureResult> {
    let mut heap: BinaryHeap<Panel> = breaks
        .windows(2)
        .map(|w| gauss_kronrod(&f, w[0], w[1]))
        .collect();
    loop {
        let (value, err) = heap
            .iter()
            .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.err));
        if !value.is_finite() {
            return Err(Error::NonFinite("quadrature oracle"));
        }
        if err <= ABS_TOL.max(REL_TOL * value.abs()) {
            return Ok(QuadratureResult {
                value,
                abs_err_est: err,
                subdivisions: heap.len(),
            });
        }
        if heap.len() >= MAX_SUBDIVISIONS {
            return Err(Error::NoConvergence(format!(
                "quadrature oracle: error {err:e} on value {value} after {} panels",
                heap.len()
            )));
        }
        let worst = heap.pop().expect("non-empty partition");
        let mid = 0.5 * (worst.lo + worst.hi);
        if !(mid > worst.lo && mid < worst.hi) {
            // The panel cannot be split further; its error is roundoff.
            let (value, err) = heap.iter().fold((worst.value, worst.err), |(v, e), p| {
                (v + p.value, e + p.err)
            });
            return Ok(QuadratureResult {
                value,
                abs_err_est: err,
                subdivisions: heap.len() + 1,
            });
        }
        heap.push(gauss_kronrod(&f, worst.lo, mid));
        heap.push(gauss_kronrod(&f, mid, worst.hi));
    }
}

/// Integration range `(δ, Γmax)` for an integrand bounded by
/// `f(γ) max(1, ln(1 + γ))`, and a bound on the mass left outside.
pub(crate) fn range(p: &FadingParams) -> (f64, f64, f64) {
    let (m, ms, a) = (p.m(), p.m_s(), p.a());
    let ln_b = ln_beta(m, ms);
    // ∫_0^δ f ≤ (aδ)^m / (m B), and the weight is at most 1 for δ ≤ 1.
    let ln_ad = ((TAIL_MASS.ln() + m.ln() + ln_b) / m).min((1e-3f64).ln());
    let delta = (ln_ad.exp() / a).clamp(1e-300, 1.0);
    let lower = ((a * delta).ln() * m - m.ln() - ln_b).exp();
    // f(γ) ≤ a^{-m_s} γ^{-m_s-1} / B, and
    // ∫_Γ^∞ max(1, ln(1 + γ)) γ^{-m_s-1} dγ ≤ Γ^{-m_s} (max(1, ln(1 + Γ)) / m_s + 1 / m_s²).
    let upper_bound = |g: f64| {
        let ln = -ms * (a * g).ln() - ln_b + ((1.0f64).max(g.ln_1p()) / ms + 1.0 / (ms * ms)).ln();
        ln.exp()
    };
    let mut gmax = 1e3 / a;
    while upper_bound(gmax) > TAIL_MASS {
        gmax *= std::f64::consts::E;
    }
    (delta, gmax, lower + upper_bound(gmax))
}

fn log_panels(lo: f64, hi: f64) -> Vec<f64> {
    let (t0, t1) = (lo.ln(), hi.ln());
    let n = ((t1 - t0).ceil() as usize).max(1);
    (0..=n)
        .map(|k| t0 + (t1 - t0) * k as f64 / n as f64)
        .collect()
}

/// `∫ h(γ) dγ` over the range of the density link `p`, substituting `γ = e^t`.
fn integrate_weighted<H: Fn(f64) -> f64>(
    p: &FadingParams,
    gmax_factor: f64,
    h: H,
) -> Result<QuadratureResult> {
    let (delta, gmax, tails) = range(p);
    let breaks = log_panels(delta, gmax * gmax_factor);
    let mut r = integrate(
        |t| {
            let g = t.exp();
            g * h(g)
        },
        &breaks,
    )?;
    r.abs_err_est += tails;
    Ok(r)
}

/// `Pr{γ_D > γ_E} = ∫ f_D(γ) F_E(γ) dγ`.
pub fn pnsc_quadrature(s: &WiretapScenario) -> Result<QuadratureResult> {
    pnsc_quadrature_scaled(s, 1.0)
}

pub(crate) fn pnsc_quadrature_scaled(
    s: &WiretapScenario,
    gmax_factor: f64,
) -> Result<QuadratureResult> {
    let (d, e) = (s.main, s.eaves);
    integrate_weighted(&d, gmax_factor, |g| {
        pdf_unchecked(&d, g) * cdf_unchecked(&e, g)
    })
}

fn cross(x: &FadingParams, y: &FadingParams, gmax_factor: f64) -> Result<QuadratureResult> {
    integrate_weighted(x, gmax_factor, |g| {
        g.ln_1p() * pdf_unchecked(x, g) * cdf_unchecked(y, g)
    })
}

/// The three ASC integrals
///
/// ```text
/// J1 = ∫ ln(1 + γ) f_D F_E,  J2 = ∫ ln(1 + γ) f_E F_D,  J3 = ∫ ln(1 + γ) f_E
/// ```
pub fn asc_quadrature(s: &WiretapScenario) -> Result<AscQuadrature> {
    asc_quadrature_scaled(s, 1.0)
}

pub(crate) fn asc_quadrature_scaled(
    s: &WiretapScenario,
    gmax_factor: f64,
) -> Result<AscQuadrature> {
    let (d, e) = (s.main, s.eaves);
    Ok(AscQuadrature {
        j1: cross(&d, &e, gmax_factor)?,
        j2: cross(&e, &d, gmax_factor)?,
        j3: integrate_weighted(&e, gmax_factor, |g| g.ln_1p() * pdf_unchecked(&e, g))?,
    })
}
