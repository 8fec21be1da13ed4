//! Fisher-Snedecor F fading at the SNR level.
//!
//! The instantaneous SNR has density
//!
//! ```text
//! f(γ) = a^m γ^{m-1} (1 + aγ)^{-(m + m_s)} / B(m, m_s),   a = m / (m_s γ̄)
//! ```
//!
//! i.e. `aγ` is beta-prime with shapes `(m, m_s)`. Here `γ̄` is the scale
//! that defines `a`; the actual mean is `γ̄ m_s / (m_s - 1)` and is infinite
//! for `m_s ≤ 1`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;
use statrs::function::beta::beta_reg;

use crate::error::{Error, Result};
use crate::special_functions::{ln_beta, ln_gamma, meijer_g, EvalResult, MeijerSpec};

/// Draws generated from one generator stream. Draw `i` depends only on the
/// seed, the stream tag and `i`, never on how the range is split.
pub const CHUNK_LEN: usize = 1 << 14;

/// Stream tags: the two links of a scenario draw from disjoint streams.
pub const MAIN_STREAM: u8 = 0;
pub const EAVES_STREAM: u8 = 1;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// One link's fading description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingParams {
    m: f64,
    m_s: f64,
    gamma_bar: f64,
}

impl FadingParams {
    pub fn new(m: f64, m_s: f64, gamma_bar: f64) -> Result<Self> {
        for (name, v) in [("m", m), ("m_s", m_s), ("gamma_bar", gamma_bar)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(format!(
                    "{name} must be positive and finite, got {v}"
                )));
            }
        }
        let p = Self { m, m_s, gamma_bar };
        let a = p.a();
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::domain(format!(
                "a = m / (m_s gamma_bar) = {a} is not a positive finite number"
            )));
        }
        Ok(p)
    }

    /// Same as [`FadingParams::new`] with `γ̄` given in dB.
    pub fn from_db(m: f64, m_s: f64, gamma_bar_db: f64) -> Result<Self> {
        Self::new(m, m_s, db_to_linear(gamma_bar_db))
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn m_s(&self) -> f64 {
        self.m_s
    }

    pub fn gamma_bar(&self) -> f64 {
        self.gamma_bar
    }

    pub fn a(&self) -> f64 {
        self.m / (self.m_s * self.gamma_bar)
    }

    pub fn with_gamma_bar(self, gamma_bar: f64) -> Result<Self> {
        Self::new(self.m, self.m_s, gamma_bar)
    }

    pub fn with_m(self, m: f64) -> Result<Self> {
        Self::new(m, self.m_s, self.gamma_bar)
    }

    pub fn with_m_s(self, m_s: f64) -> Result<Self> {
        Self::new(self.m, m_s, self.gamma_bar)
    }

    /// `ln(Γ(m) Γ(m_s))`, the normalization shared by the G-function forms.
    pub(crate) fn ln_gamma_pair(&self) -> f64 {
        ln_gamma(self.m) + ln_gamma(self.m_s)
    }
}

/// Main (source to destination) and eavesdropper links, independent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WiretapScenario {
    pub main: FadingParams,
    pub eaves: FadingParams,
}

impl WiretapScenario {
    pub fn new(main: FadingParams, eaves: FadingParams) -> Self {
        Self { main, eaves }
    }

    /// The scenario with the roles of the two links exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            main: self.eaves,
            eaves: self.main,
        }
    }
}

fn check_snr(snr: f64) -> Result<()> {
    if !(snr >= 0.0) || snr.is_infinite() {
        return Err(Error::domain(format!(
            "SNR must be finite and nonnegative, got {snr}"
        )));
    }
    Ok(())
}

/// Density of the instantaneous SNR.
///
/// At `snr = 0` the density is `+∞` for `m < 1`, which is returned as is.
pub fn pdf(p: &FadingParams, snr: f64) -> Result<f64> {
    check_snr(snr)?;
    Ok(pdf_unchecked(p, snr))
}

pub(crate) fn pdf_unchecked(p: &FadingParams, snr: f64) -> f64 {
    let a = p.a();
    if snr == 0.0 {
        return if p.m < 1.0 {
            f64::INFINITY
        } else if p.m == 1.0 {
            a * p.m_s
        } else {
            0.0
        };
    }
    (p.m * a.ln() + (p.m - 1.0) * snr.ln()
        - (p.m + p.m_s) * (a * snr).ln_1p()
        - ln_beta(p.m, p.m_s))
    .exp()
}

/// Density through `γ^{-1} G^{1,1}_{1,1}(aγ | 1-m_s; m) / (Γ(m) Γ(m_s))`.
pub fn pdf_meijer(p: &FadingParams, snr: f64) -> Result<EvalResult> {
    check_snr(snr)?;
    if snr == 0.0 {
        return Err(Error::domain(
            "the G-function form of the density needs snr > 0",
        ));
    }
    let spec = pdf_spec(p).with_log_scale(-p.ln_gamma_pair() - snr.ln());
    meijer_g(&spec, p.a() * snr)
}

/// Distribution function through the regularized incomplete beta function
/// `I_x(m, m_s)`, `x = aγ / (1 + aγ)`.
pub fn cdf(p: &FadingParams, snr: f64) -> Result<f64> {
    check_snr(snr)?;
    Ok(cdf_unchecked(p, snr))
}

pub(crate) fn cdf_unchecked(p: &FadingParams, snr: f64) -> f64 {
    let t = p.a() * snr;
    if t == 0.0 {
        return 0.0;
    }
    // Use the complementary argument on whichever side keeps it accurate.
    if t <= 1.0 {
        beta_reg(p.m, p.m_s, t / (1.0 + t))
    } else {
        1.0 - beta_reg(p.m_s, p.m, 1.0 / (1.0 + t))
    }
}

/// `1 - cdf`, accurate in the upper tail.
pub fn survival(p: &FadingParams, snr: f64) -> Result<f64> {
    check_snr(snr)?;
    let t = p.a() * snr;
    if t == 0.0 {
        return Ok(1.0);
    }
    Ok(if t <= 1.0 {
        1.0 - beta_reg(p.m, p.m_s, t / (1.0 + t))
    } else {
        beta_reg(p.m_s, p.m, 1.0 / (1.0 + t))
    })
}

/// Distribution function through `G^{1,2}_{2,2}(aγ | 1-m_s, 1; m, 0) / (Γ(m) Γ(m_s))`.
pub fn cdf_meijer(p: &FadingParams, snr: f64) -> Result<EvalResult> {
    check_snr(snr)?;
    if snr == 0.0 {
        return EvalResult::new(
            0.0,
            0.0,
            crate::special_functions::Method::ElementaryIdentity,
        );
    }
    let spec = cdf_spec(p).with_log_scale(-p.ln_gamma_pair());
    meijer_g(&spec, p.a() * snr)
}

/// `G^{1,1}_{1,1}(· | 1-m_s; m)`.
pub(crate) fn pdf_spec(p: &FadingParams) -> MeijerSpec {
    MeijerSpec::new(1, 1, vec![1.0 - p.m_s], vec![p.m]).expect("valid for positive shapes")
}

/// `G^{1,2}_{2,2}(· | 1-m_s, 1; m, 0)`.
pub(crate) fn cdf_spec(p: &FadingParams) -> MeijerSpec {
    MeijerSpec::new(1, 2, vec![1.0 - p.m_s, 1.0], vec![p.m, 0.0])
        .expect("valid for positive shapes")
}

/// Generator for one chunk of one stream.
fn chunk_rng(seed: u64, stream: u8, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((stream as u64) << 56) | chunk);
    rng
}

/// Sampler for the draws of one stream.
pub(crate) struct Sampler {
    u: Gamma<f64>,
    v: Gamma<f64>,
    inv_a: f64,
    seed: u64,
    stream: u8,
}

impl Sampler {
    pub(crate) fn new(p: &FadingParams, seed: u64, stream: u8) -> Self {
        Self {
            u: Gamma::new(p.m, 1.0).expect("positive shape"),
            v: Gamma::new(p.m_s, 1.0).expect("positive shape"),
            inv_a: 1.0 / p.a(),
            seed,
            stream,
        }
    }

    /// Fills `out` with the first `out.len()` draws of chunk `chunk`.
    pub(crate) fn fill_chunk(&self, chunk: u64, out: &mut [f64]) {
        debug_assert!(out.len() <= CHUNK_LEN);
        let mut rng = chunk_rng(self.seed, self.stream, chunk);
        for x in out.iter_mut() {
            let u = self.u.sample(&mut rng);
            let v = self.v.sample(&mut rng);
            *x = u / v * self.inv_a;
        }
    }
}

/// `n` independent SNR draws `γ = (U / V) / a` with `U ~ Gamma(m)`,
/// `V ~ Gamma(m_s)`. The result depends only on `(p, seed, n)`.
pub fn sample(p: &FadingParams, seed: u64, n: usize) -> Result<Vec<f64>> {
    sample_stream(p, seed, MAIN_STREAM, n)
}

/// Same as [`sample`] on a given stream tag.
pub fn sample_stream(p: &FadingParams, seed: u64, stream: u8, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::domain("sample count must be at least 1"));
    }
    let sampler = Sampler::new(p, seed, stream);
    let mut out = vec![0.0; n];
    out.par_chunks_mut(CHUNK_LEN)
        .enumerate()
        .for_each(|(k, chunk)| sampler.fill_chunk(k as u64, chunk));
    Ok(out)
}

/// Raw moment `E[γ^k] = a^{-k} B(m + k, m_s - k) / B(m, m_s)`, finite for `k < m_s`.
pub fn moment(p: &FadingParams, order: u32) -> Result<f64> {
    if order == 0 {
        return Err(Error::domain("moment order must be positive"));
    }
    let k = order as f64;
    if k >= p.m_s {
        return Err(Error::domain(format!(
            "moment of order {order} diverges for m_s = {}",
            p.m_s
        )));
    }
    Ok((-k * p.a().ln() + ln_beta(p.m + k, p.m_s - k) - ln_beta(p.m, p.m_s)).exp())
}
