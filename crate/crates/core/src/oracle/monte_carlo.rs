//! Monte-Carlo estimates from paired independent SNR draws.
//!
//! Draws are produced chunk by chunk on fixed index ranges; each chunk
//! keeps its own running moments and the chunks are merged in index order,
//! so the estimate does not depend on the thread count.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fading::{Sampler, WiretapScenario, CHUNK_LEN, EAVES_STREAM, MAIN_STREAM};
use crate::secrecy::secrecy_capacity_sample;

pub const MIN_SAMPLES: u64 = 1000;

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation over `√n`.
    pub stderr: f64,
    pub n: u64,
    pub seed: u64,
}

/// Running count, mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default)]
struct Welford {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    #[inline]
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Welford) -> Welford {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        let w = other.n as f64 / n as f64;
        Welford {
            n,
            mean: self.mean + d * w,
            m2: self.m2 + other.m2 + d * d * self.n as f64 * w,
        }
    }

    fn estimate(&self, seed: u64) -> McEstimate {
        let n = self.n as f64;
        let var = if self.n > 1 { self.m2 / (n - 1.0) } else { 0.0 };
        McEstimate {
            mean: self.mean,
            stderr: (var / n).sqrt(),
            n: self.n,
            seed,
        }
    }
}

/// PNSC and ASC from the same draws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McMetrics {
    pub pnsc: McEstimate,
    pub asc: McEstimate,
}

fn run(s: &WiretapScenario, n: u64, seed: u64) -> Result<(Welford, Welford)> {
    if n < MIN_SAMPLES {
        return Err(Error::domain(format!(
            "Monte-Carlo runs need at least {MIN_SAMPLES} samples, got {n}"
        )));
    }
    let main = Sampler::new(&s.main, seed, MAIN_STREAM);
    let eaves = Sampler::new(&s.eaves, seed, EAVES_STREAM);
    let chunk = CHUNK_LEN as u64;
    let chunks = n.div_ceil(chunk);
    let parts: Vec<(Welford, Welford)> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let len = (n - k * chunk).min(chunk) as usize;
            let mut d = vec![0.0; len];
            let mut e = vec![0.0; len];
            main.fill_chunk(k, &mut d);
            eaves.fill_chunk(k, &mut e);
            let mut p = Welford::default();
            let mut c = Welford::default();
            for (&gd, &ge) in d.iter().zip(&e) {
                p.push(if gd > ge { 1.0 } else { 0.0 });
                c.push(secrecy_capacity_sample(gd, ge));
            }
            (p, c)
        })
        .collect();
    Ok(parts.into_iter().fold(
        (Welford::default(), Welford::default()),
        |(p, c), (q, d)| (p.merge(q), c.merge(d)),
    ))
}

/// Both estimates from one set of `n` draw pairs.
pub fn mc_metrics(s: &WiretapScenario, n: u64, seed: u64) -> Result<McMetrics> {
    let (p, c) = run(s, n, seed)?;
    Ok(McMetrics {
        pnsc: p.estimate(seed),
        asc: c.estimate(seed),
    })
}

/// Fraction of draws with `γ_D > γ_E`.
pub fn mc_pnsc(s: &WiretapScenario, n: u64, seed: u64) -> Result<McEstimate> {
    Ok(mc_metrics(s, n, seed)?.pnsc)
}

/// Mean of `max(0, ln(1 + γ_D) - ln(1 + γ_E))` in nats.
pub fn mc_asc(s: &WiretapScenario, n: u64, seed: u64) -> Result<McEstimate> {
    Ok(mc_metrics(s, n, seed)?.asc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fading::FadingParams;

    fn scenario(d: (f64, f64, f64), e: (f64, f64, f64)) -> WiretapScenario {
        WiretapScenario::new(
            FadingParams::new(d.0, d.1, d.2).unwrap(),
            FadingParams::new(e.0, e.1, e.2).unwrap(),
        )
    }

    #[test]
    fn welford_merge_matches_single_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 / 7.0).collect();
        let mut whole = Welford::default();
        xs.iter().for_each(|&x| whole.push(x));
        let mut a = Welford::default();
        let mut b = Welford::default();
        xs[..313].iter().for_each(|&x| a.push(x));
        xs[313..].iter().for_each(|&x| b.push(x));
        let m = a.merge(b);
        assert_eq!(m.n, whole.n);
        assert!((m.mean - whole.mean).abs() < 1e-12);
        assert!((m.m2 - whole.m2).abs() < 1e-9 * whole.m2);
    }

    #[test]
    fn symmetric_pnsc_and_determinism() {
        let s = scenario((2.0, 1.5, 3.0), (2.0, 1.5, 3.0));
        let r = mc_pnsc(&s, 1_000_000, 11).unwrap();
        assert!((r.mean - 0.5).abs() < 3.0 * r.stderr, "{r:?}");
        assert_eq!(r, mc_pnsc(&s, 1_000_000, 11).unwrap());
        assert!(mc_pnsc(&s, 999, 11).is_err());
    }

    #[test]
    fn exponential_limit() {
        let s = scenario((1.0, 200.0, 4.0), (1.0, 200.0, 1.0));
        let r = mc_pnsc(&s, 1_000_000, 5).unwrap();
        assert!((r.mean - 0.8).abs() < (3.0 * r.stderr).max(5e-3), "{r:?}");
    }

    #[test]
    fn degenerate_main_link() {
        let s = scenario((1.0, 1.0, 1e-6), (1.0, 1.0, 1.0));
        assert!(mc_asc(&s, 100_000, 3).unwrap().mean < 1e-4);
    }

    #[test]
    fn stderr_scales_with_root_n() {
        let s = scenario((1.0, 2.0, 10.0), (1.5, 3.0, 1.0));
        let a = mc_asc(&s, 250_000, 9).unwrap();
        let b = mc_asc(&s, 1_000_000, 9).unwrap();
        let ratio = a.stderr / b.stderr;
        assert!((ratio - 2.0).abs() < 0.4, "ratio {ratio}");
    }
}
