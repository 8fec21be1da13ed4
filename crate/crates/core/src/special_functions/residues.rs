//! Residue sums over Meijer-G pole families.
//!
//! Residues are taken as small circle integrals around clusters of nearby
//! poles of one family. Coincident parameters (double and triple poles,
//! poles cancelled by a denominator gamma) need no special casing: the
//! circle integral returns the total residue of whatever sits inside.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::meijer::{BendDirective, MeijerSpec};
use crate::error::{Error, Result};

/// Poles of one family closer than this are integrated as one cluster.
const CLUSTER_GAP: f64 = 0.3;

/// Target truncation error factor `e^-40` for the circle rule.
const CIRCLE_EXPONENT: f64 = 40.0;

const MAX_POLES_PER_FAMILY: usize = 1 << 16;

/// Terms below this fraction of the running scale count as negligible.
const NEGLIGIBLE: f64 = 1e-17;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Side {
    Left,
    Right,
}

impl Side {
    fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    /// Residues of left poles enter the sum with `+`, right poles with `-`
    /// (the closed contour runs clockwise around them).
    fn sign(self) -> f64 {
        match self {
            Side::Left => 1.0,
            Side::Right => -1.0,
        }
    }
}

#[derive(Debug, Clone)]
struct Cluster {
    lo: f64,
    hi: f64,
}

impl Cluster {
    fn center(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    fn half_width(&self) -> f64 {
        0.5 * (self.hi - self.lo)
    }
}

/// Groups sorted poles of one family; a pole of `others` between two
/// poles always splits them.
fn clusters(sorted: &[f64], others: &[f64]) -> Vec<Cluster> {
    let mut out: Vec<Cluster> = Vec::new();
    for &p in sorted {
        if let Some(last) = out.last_mut() {
            let (a, b) = if p >= last.hi {
                (last.hi, p)
            } else {
                (p, last.lo)
            };
            let split = others.iter().any(|&o| o > a && o < b);
            if b - a < CLUSTER_GAP && !split {
                last.lo = last.lo.min(p);
                last.hi = last.hi.max(p);
                continue;
            }
        }
        out.push(Cluster { lo: p, hi: p });
    }
    out
}

/// Residue of `φ(s) z^{-s}` summed over the poles inside one cluster.
/// Returns the residue and a roundoff estimate.
fn cluster_residue(
    spec: &MeijerSpec,
    ln_z: f64,
    cluster: &Cluster,
    clearance: f64,
) -> Result<(f64, f64)> {
    let center = cluster.center();
    let spread = cluster.half_width();
    if !(clearance > spread) {
        return Err(Error::domain(format!(
            "poles near {center} are too close to the opposite family to isolate"
        )));
    }
    let (radius, nodes) = if spread < 1e-14 {
        // 0.4^48 ≈ 1e-19
        (0.4 * clearance, 48usize)
    } else {
        let ratio = spread / clearance;
        let n = (2.0 * CIRCLE_EXPONENT / -ratio.ln()).ceil() as usize;
        ((spread * clearance).sqrt(), n.clamp(32, 4096))
    };
    let nodes = nodes + nodes % 2;
    let half = nodes / 2;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut biggest = 0.0f64;
    for k in 0..half {
        let theta = PI * (2 * k + 1) as f64 / nodes as f64;
        let e = Complex64::from_polar(1.0, theta);
        let s = center + radius * e;
        let f = (spec.ln_kernel(s) - s * ln_z).exp();
        if !(f.re.is_finite() && f.im.is_finite()) {
            return Err(Error::NonFinite("residue circle"));
        }
        biggest = biggest.max(f.norm());
        acc += f * e;
    }
    let scale = 2.0 * radius / nodes as f64;
    let value = scale * acc.re;
    let roundoff = 4.0 * f64::EPSILON * radius * biggest * (half as f64).sqrt();
    Ok((value, roundoff))
}

fn sort_outward(v: &mut [f64], side: Side) {
    match side {
        Side::Left => v.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal)),
        Side::Right => v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal)),
    }
}

fn nearest_outside(cluster: &Cluster, pools: [&[f64]; 2]) -> f64 {
    let c = cluster.center();
    let mut best = f64::INFINITY;
    for pool in pools {
        for &p in pool {
            if p >= cluster.lo && p <= cluster.hi {
                continue;
            }
            best = best.min((p - c).abs());
        }
    }
    best
}

/// Sum of residues of one pole family: the value of the G-function when
/// the contour can be closed on that side. Returns `(value, error)`.
pub(crate) fn residue_series(spec: &MeijerSpec, z: f64, side: Side) -> Result<(f64, f64)> {
    let bases: Vec<f64> = match side {
        Side::Left => spec.left_bases().collect(),
        Side::Right => spec.right_bases().collect(),
    };
    if bases.is_empty() {
        return Ok((0.0, 0.0));
    }
    let outermost_start = match side {
        Side::Left => bases.iter().cloned().fold(f64::INFINITY, f64::min),
        Side::Right => bases.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    };
    let ln_z = z.ln();
    let rate = ln_z.abs();
    let mut per_family = if rate > 0.0 {
        ((45.0 / rate).ceil() as usize + 16).min(MAX_POLES_PER_FAMILY)
    } else {
        64
    };

    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    let mut roundoff = 0.0;
    let mut biggest = 0.0f64;
    let mut tail = 0.0;
    let mut last_significant: Option<f64> = None;
    let mut done_until: Option<f64> = None;

    loop {
        let k_last = (per_family - 1) as f64;
        let mut own: Vec<f64> = bases
            .iter()
            .flat_map(|&b| {
                (0..per_family).map(move |k| match side {
                    Side::Left => b - k as f64,
                    Side::Right => b + k as f64,
                })
            })
            .collect();
        sort_outward(&mut own, side);
        // Everything between the contour and `frontier` has been generated.
        let frontier = match side {
            Side::Left => bases
                .iter()
                .map(|b| b - k_last)
                .fold(f64::NEG_INFINITY, f64::max),
            Side::Right => bases
                .iter()
                .map(|b| b + k_last)
                .fold(f64::INFINITY, f64::min),
        };
        let (span_lo, span_hi) = match side {
            Side::Left => (frontier - 2.0, own[0] + 2.0),
            Side::Right => (own[0] - 2.0, frontier + 2.0),
        };
        let others = spec.poles_in(side.other(), span_lo, span_hi);
        let groups = clusters(&own, &others);

        for cl in &groups {
            let complete = match side {
                Side::Left => cl.lo >= frontier + 1.5,
                Side::Right => cl.hi <= frontier - 1.5,
            };
            if !complete {
                break;
            }
            let pos = cl.center();
            if let Some(done) = done_until {
                let seen = match side {
                    Side::Left => pos >= done,
                    Side::Right => pos <= done,
                };
                if seen {
                    continue;
                }
            }
            let clearance = nearest_outside(cl, [&own, &others]);
            let (res, err) = cluster_residue(spec, ln_z, cl, clearance)?;
            let term = side.sign() * res;
            sum += term;
            abs_sum += term.abs();
            roundoff += err;
            biggest = biggest.max(term.abs());
            done_until = Some(pos);

            let scale = sum.abs().max(biggest);
            if term.abs() > NEGLIGIBLE * scale {
                last_significant = Some(pos);
                tail = 0.0;
            } else {
                tail += term.abs();
            }
            // Past the first pole of every family, each family has a pole in
            // each unit interval, so three clear units past the last
            // significant cluster means every family has decayed. Poles
            // cancelled by a denominator gamma read as zero terms, which is
            // why the first-pole condition is needed.
            let anchor = last_significant.unwrap_or(bases[0]);
            let past_starts = match side {
                Side::Left => pos <= outermost_start,
                Side::Right => pos >= outermost_start,
            };
            if past_starts && (pos - anchor).abs() >= 3.0 {
                let err = roundoff + 4.0 * f64::EPSILON * abs_sum + tail;
                if !sum.is_finite() {
                    return Err(Error::NonFinite("residue series"));
                }
                return Ok((sum, err));
            }
        }

        if per_family >= MAX_POLES_PER_FAMILY {
            return Err(Error::NoConvergence(format!(
                "residue series at z = {z} did not settle within {per_family} poles per family (partial sum {sum})"
            )));
        }
        per_family = (per_family * 2).min(MAX_POLES_PER_FAMILY);
    }
}

/// Residue corrections for a straight path through a bent-contour abscissa.
pub(crate) fn bend_correction(
    spec: &MeijerSpec,
    z: f64,
    bend: &BendDirective,
) -> Result<(f64, f64)> {
    let ln_z = z.ln();
    let mut value = 0.0;
    let mut err = 0.0;
    for (side, poles) in [
        (Side::Left, &bend.left_poles),
        (Side::Right, &bend.right_poles),
    ] {
        if poles.is_empty() {
            continue;
        }
        let mut own = poles.clone();
        sort_outward(&mut own, side);
        let lo = own.iter().cloned().fold(f64::INFINITY, f64::min) - 2.0;
        let hi = own.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 2.0;
        // Neighbours of the same family that stay on the correct side still
        // constrain the circle radius.
        let mut fence = spec.poles_in(Side::Left, lo, hi);
        fence.extend(spec.poles_in(Side::Right, lo, hi));
        let others = spec.poles_in(side.other(), lo, hi);
        for cl in clusters(&own, &others) {
            let clearance = nearest_outside(&cl, [&fence, &[]]);
            let (res, e) = cluster_residue(spec, ln_z, &cl, clearance)?;
            value += side.sign() * res;
            err += e;
        }
    }
    Ok((value, err))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn clustering_respects_gap_and_separators() {
        let own = [0.0, -0.1, -0.2, -1.0, -2.0];
        let cl = clusters(&own, &[]);
        assert_eq!(cl.len(), 3);
        assert_relative_eq!(cl[0].lo, -0.2);
        assert_relative_eq!(cl[0].hi, 0.0);
        let cl = clusters(&own, &[-0.15]);
        assert_eq!(cl.len(), 4);
    }

    #[test]
    fn triple_pole_residue() {
        // Γ(s)^3 has triple poles at every non-positive integer.
        let spec = MeijerSpec::new(3, 0, vec![], vec![0.0, 0.0, 0.0]).unwrap();
        let (v, _) = residue_series(&spec, 0.7, Side::Left).unwrap();
        let c = super::super::meijer::meijer_g_contour(&spec, 0.7)
            .unwrap()
            .unwrap();
        assert_relative_eq!(v, c.value, max_relative = 1e-10);
    }

    #[test]
    fn empty_family_sums_to_zero() {
        let spec = MeijerSpec::new(0, 1, vec![0.5], vec![0.2]).unwrap();
        assert_eq!(residue_series(&spec, 0.5, Side::Left).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn exponential_series() {
        // G^{1,0}_{0,1}(z | -; 0) = e^{-z}
        let spec = MeijerSpec::new(1, 0, vec![], vec![0.0]).unwrap();
        for z in [0.1, 1.0, 5.0] {
            let (v, e) = residue_series(&spec, z, Side::Left).unwrap();
            assert_relative_eq!(v, (-z).exp(), max_relative = 1e-10);
            assert!(e < 1e-8 * v, "error estimate {e:e} for {v}");
        }
    }
}
