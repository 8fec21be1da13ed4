//! Closed-form secrecy metrics of the F-fading wiretap channel.
//!
//! With `a_k = m_k / (m_sk γ̄_k)` and `N = Γ(m_D) Γ(m_sD) Γ(m_E) Γ(m_sE)`:
//!
//! ```text
//! PNSC = G^{3,2}_{3,3}(a_D / a_E | 1-m_sD, 1-m_E, 1; m_D, m_sE, 0) / N
//! ASC  = J1 + J2 - J3
//! J1   = G^{2,1:1,1:1,2}_{2,2:1,1:2,2}(a_D, a_E | 0,1; 0,0 | 1-m_sD; m_D | 1-m_sE, 1; m_E, 0) / N
//! J2   = the same with D and E exchanged
//! J3   = G^{3,2}_{3,3}(a_E | 1-m_sE, 0, 1; m_E, 0, 0) / (Γ(m_E) Γ(m_sE))
//! ```
//!
//! Normalizing gamma products are folded into the kernels in log space.

use crate::error::{Error, Result};
use crate::fading::{cdf_spec, pdf_spec, FadingParams, WiretapScenario};
use crate::special_functions::{
    ln_beta, meijer_g, meijer_g_bivariate, BivariateMeijerSpec, EvalResult, MeijerSpec,
};

/// Everything the closed forms give for one scenario. Capacities in nats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecrecyMetrics {
    /// PNSC clamped to `[0, 1]`.
    pub pnsc: f64,
    /// PNSC as computed, possibly a hair outside `[0, 1]`.
    pub pnsc_raw: f64,
    pub pnsc_err: f64,
    pub asc_nats: f64,
    pub asc_asymptotic_nats: f64,
    pub j1: f64,
    pub j2: f64,
    pub j3: f64,
    /// Absolute error estimate of `asc_nats`.
    pub err_est: f64,
    pub asc_asymptotic_err: f64,
}

/// `ln(1 + snr)` for `snr ≥ 0`.
pub fn capacity_nats(snr: f64) -> f64 {
    snr.ln_1p()
}

/// Instantaneous secrecy capacity `max(0, ln(1 + γ_D) - ln(1 + γ_E))`.
pub fn secrecy_capacity_sample(snr_d: f64, snr_e: f64) -> f64 {
    (snr_d.ln_1p() - snr_e.ln_1p()).max(0.0)
}

/// A probability estimate clamped to `[0, 1]`.
pub fn clamp_probability(r: &EvalResult) -> f64 {
    r.value.clamp(0.0, 1.0)
}

fn ln_norm(s: &WiretapScenario) -> f64 {
    s.main.ln_gamma_pair() + s.eaves.ln_gamma_pair()
}

/// Spec and argument of the PNSC G-function, normalization included.
pub fn pnsc_spec(s: &WiretapScenario) -> (MeijerSpec, f64) {
    let (d, e) = (&s.main, &s.eaves);
    let spec = MeijerSpec::new(
        3,
        2,
        vec![1.0 - d.m_s(), 1.0 - e.m(), 1.0],
        vec![d.m(), e.m_s(), 0.0],
    )
    .expect("valid for positive shapes")
    .with_log_scale(-ln_norm(s));
    (spec, d.a() / e.a())
}

/// Probability of non-zero secrecy capacity, `Pr{γ_D > γ_E}`.
///
/// The raw value is returned; it can sit outside `[0, 1]` by up to its
/// error estimate. See [`clamp_probability`].
pub fn pnsc_closed(s: &WiretapScenario) -> Result<EvalResult> {
    let (spec, z) = pnsc_spec(s);
    meijer_g(&spec, z)
}

/// Spec of `E[ln(1 + γ)]` for one link, normalization included; evaluate at `a`.
pub fn ergodic_capacity_spec(p: &FadingParams) -> MeijerSpec {
    MeijerSpec::new(3, 2, vec![1.0 - p.m_s(), 0.0, 1.0], vec![p.m(), 0.0, 0.0])
        .expect("valid for positive shapes")
        .with_log_scale(-p.ln_gamma_pair())
}

/// Ergodic capacity `E[ln(1 + γ)]` of one link in nats.
pub fn ergodic_capacity(p: &FadingParams) -> Result<EvalResult> {
    meijer_g(&ergodic_capacity_spec(p), p.a())
}

/// Bivariate spec of `∫ ln(1 + γ) f_X(γ) F_Y(γ) dγ` for density link `x`
/// and distribution link `y`; evaluate at `(a_x, a_y)`.
pub fn cross_term_spec(x: &FadingParams, y: &FadingParams) -> BivariateMeijerSpec {
    let outer = MeijerSpec::new(2, 1, vec![0.0, 1.0], vec![0.0, 0.0]).expect("valid");
    let first = pdf_spec(x).with_log_scale(-(x.ln_gamma_pair() + y.ln_gamma_pair()));
    BivariateMeijerSpec::new(outer, first, cdf_spec(y))
        .expect("decaying and separable for positive shapes")
}

fn cross_term(x: &FadingParams, y: &FadingParams) -> Result<EvalResult> {
    meijer_g_bivariate(&cross_term_spec(x, y), x.a(), y.a())
}

/// `J1 = ∫ ln(1 + γ) f_D(γ) F_E(γ) dγ`.
pub fn j1(s: &WiretapScenario) -> Result<EvalResult> {
    cross_term(&s.main, &s.eaves)
}

/// `J2 = ∫ ln(1 + γ) f_E(γ) F_D(γ) dγ`.
pub fn j2(s: &WiretapScenario) -> Result<EvalResult> {
    cross_term(&s.eaves, &s.main)
}

/// `J3 = E[ln(1 + γ_E)]`.
pub fn j3(s: &WiretapScenario) -> Result<EvalResult> {
    ergodic_capacity(&s.eaves)
}

/// All closed-form metrics of a scenario.
pub fn asc_closed(s: &WiretapScenario) -> Result<SecrecyMetrics> {
    let p = pnsc_closed(s)?;
    let (t1, t2, t3) = (j1(s)?, j2(s)?, j3(s)?);
    let c_d = ergodic_capacity(&s.main)?;
    let asc = t1.value + t2.value - t3.value;
    let err = t1.abs_err_est + t2.abs_err_est + t3.abs_err_est;
    Ok(SecrecyMetrics {
        pnsc: clamp_probability(&p),
        pnsc_raw: p.value,
        pnsc_err: p.abs_err_est,
        asc_nats: asc,
        asc_asymptotic_nats: c_d.value + t2.value - t3.value,
        j1: t1.value,
        j2: t2.value,
        j3: t3.value,
        err_est: err,
        asc_asymptotic_err: c_d.abs_err_est + t2.abs_err_est + t3.abs_err_est,
    })
}

/// High-SNR approximation of the ASC as `γ̄_D → ∞`.
///
/// `J1` is replaced by its limit, the main link's ergodic capacity, since
/// `F_E → 1` wherever `f_D` has its mass; `J2` and `J3` are exact.
pub fn asc_asymptotic(s: &WiretapScenario) -> Result<EvalResult> {
    let c_d = ergodic_capacity(&s.main)?;
    let (t2, t3) = (j2(s)?, j3(s)?);
    EvalResult::new(
        c_d.value + t2.value - t3.value,
        c_d.abs_err_est + t2.abs_err_est + t3.abs_err_est,
        c_d.method,
    )
}

/// Near-origin expansion of `J1`,
///
/// ```text
/// a_D^{m_D} / (B(m_D, m_sD) Γ(m_E) Γ(m_sE))
///     · G^{3,3}_{4,4}(a_E | 1-m_sE, 1, -m_D, 1-m_D; m_E, -m_D, -m_D, 0)
/// ```
///
/// This vanishes as `γ̄_D → ∞` instead of tracking `J1`, and the G-function
/// is undefined for integer `m_D`. Kept for comparison only.
pub fn j1_asymptotic_printed(s: &WiretapScenario) -> Result<EvalResult> {
    let (d, e) = (&s.main, &s.eaves);
    let ln_pre = d.m() * d.a().ln() - ln_beta(d.m(), d.m_s()) - e.ln_gamma_pair();
    let spec = MeijerSpec::new(
        3,
        3,
        vec![1.0 - e.m_s(), 1.0, -d.m(), 1.0 - d.m()],
        vec![e.m(), -d.m(), -d.m(), 0.0],
    )
    .map_err(|err| match err {
        Error::Domain(msg) => {
            Error::Domain(format!("near-origin J1 term needs non-integer m_D: {msg}"))
        }
        other => other,
    })?
    .with_log_scale(ln_pre);
    meijer_g(&spec, e.a())
}
