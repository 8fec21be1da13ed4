//! Univariate Meijer G-function
//!
//! ```text
//!                      1   /  Π_{j<m} Γ(b_j + s) Π_{i<n} Γ(1 - a_i - s)
//! G^{m,n}_{p,q}(z) = ----  | ------------------------------------------- z^{-s} ds
//!                    2πi  /  Π_{j>=m} Γ(1 - b_j - s) Π_{i>=n} Γ(a_i + s)
//! ```
//!
//! with the contour separating the left poles `-b_j - k` from the right
//! poles `1 - a_i + k`. Two independent routes are available: a residue
//! series over one pole family and a direct quadrature of the contour
//! integral. [`meijer_g`] runs both wherever both converge and checks that
//! they agree.

use std::cmp::Ordering;

use num_complex::Complex64;

use super::contour::{contour_integral, Path};
use super::residues::{bend_correction, residue_series, Side};
use super::{ln_gamma_unchecked, EvalResult, Method};
use crate::error::{Error, Result};

/// Arguments in this band around 1 are left to the contour backend: the
/// residue series converge like `z^k` (or `z^-k`) and stall there.
pub(crate) const SERIES_GUARD_BAND: (f64, f64) = (0.9, 1.1);

/// Relative agreement demanded between the two backends.
pub(crate) const BACKEND_REL_TOL: f64 = 1e-8;

/// A backend whose own error estimate exceeds this fraction of its value
/// defers to the other backend.
const UNRELIABLE_REL_ERR: f64 = 1e-6;

const INTEGER_TOL: f64 = 1e-12;

/// Parameters of `G^{m,n}_{p,q}(· | a; b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeijerSpec {
    m: usize,
    n: usize,
    a: Vec<f64>,
    b: Vec<f64>,
    ln_scale: f64,
}

impl MeijerSpec {
    /// Validates orders, lengths and pole separation.
    ///
    /// `p` and `q` are the lengths of `a` and `b`. A spec is rejected when
    /// some `a_i - b_j` (`i < n`, `j < m`) is a positive integer, since a left
    /// and a right pole then coincide and no separating contour exists.
    pub fn new(m: usize, n: usize, a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if m > b.len() || n > a.len() {
            return Err(Error::domain(format!(
                "orders m={m}, n={n} exceed parameter counts q={}, p={}",
                b.len(),
                a.len()
            )));
        }
        if a.iter().chain(&b).any(|x| !x.is_finite()) {
            return Err(Error::domain("Meijer G parameters must be finite"));
        }
        for ai in &a[..n] {
            for bj in &b[..m] {
                let d = ai - bj;
                let r = d.round();
                if r >= 1.0 && (d - r).abs() < INTEGER_TOL {
                    return Err(Error::domain(format!(
                        "a = {ai} and b = {bj} differ by the positive integer {r}; left and right poles coincide"
                    )));
                }
            }
        }
        Ok(Self {
            m,
            n,
            a,
            b,
            ln_scale: 0.0,
        })
    }

    /// The same function multiplied by `e^{ln_factor}`.
    ///
    /// The factor enters the kernel before exponentiation, so normalizing
    /// gamma products that would overflow on their own cancel in log space.
    pub fn with_log_scale(mut self, ln_factor: f64) -> Self {
        self.ln_scale += ln_factor;
        self
    }

    pub fn log_scale(&self) -> f64 {
        self.ln_scale
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.a.len()
    }

    pub fn q(&self) -> usize {
        self.b.len()
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// `m + n - (p + q) / 2`: the integrand decays like `exp(-π κ |Im s|)`
    /// on vertical lines.
    pub fn decay_rate(&self) -> f64 {
        (self.m + self.n) as f64 - 0.5 * (self.p() + self.q()) as f64
    }

    /// Starting points `-b_j` of the left pole families.
    pub(crate) fn left_bases(&self) -> impl Iterator<Item = f64> + '_ {
        self.b[..self.m].iter().map(|b| -b)
    }

    /// Starting points `1 - a_i` of the right pole families.
    pub(crate) fn right_bases(&self) -> impl Iterator<Item = f64> + '_ {
        self.a[..self.n].iter().map(|a| 1.0 - a)
    }

    /// Poles of one family lying in `[from, to]`, unsorted.
    pub(crate) fn poles_in(&self, side: Side, from: f64, to: f64) -> Vec<f64> {
        let mut out = Vec::new();
        match side {
            Side::Left => {
                for base in self.left_bases() {
                    let k0 = (base - to).ceil().max(0.0);
                    let k1 = (base - from).floor();
                    let mut k = k0;
                    while k <= k1 {
                        out.push(base - k);
                        k += 1.0;
                    }
                }
            }
            Side::Right => {
                for base in self.right_bases() {
                    let k0 = (from - base).ceil().max(0.0);
                    let k1 = (to - base).floor();
                    let mut k = k0;
                    while k <= k1 {
                        out.push(base + k);
                        k += 1.0;
                    }
                }
            }
        }
        out
    }

    /// `ln` of the Mellin–Barnes kernel at `s`.
    #[inline]
    pub(crate) fn ln_kernel(&self, s: Complex64) -> Complex64 {
        let mut acc = Complex64::new(self.ln_scale, 0.0);
        for (j, &bj) in self.b.iter().enumerate() {
            if j < self.m {
                acc += ln_gamma_unchecked(s + bj);
            } else {
                acc -= ln_gamma_unchecked(1.0 - bj - s);
            }
        }
        for (i, &ai) in self.a.iter().enumerate() {
            if i < self.n {
                acc += ln_gamma_unchecked(1.0 - ai - s);
            } else {
                acc -= ln_gamma_unchecked(ai + s);
            }
        }
        acc
    }

    /// Open interval `(lo, hi)` a straight contour must cross the real axis in.
    pub(crate) fn separation_interval(&self) -> (f64, f64) {
        let lo = self.left_bases().fold(f64::NEG_INFINITY, f64::max);
        let hi = self.right_bases().fold(f64::INFINITY, f64::min);
        (lo, hi)
    }
}

/// Poles that sit on the wrong side of a straight contour through `c`.
///
/// When the separation interval is empty the contour has to weave between
/// the two families. Integrating along the straight line and adding the
/// residues of the misplaced poles gives the same value.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BendDirective {
    /// Left-family poles to the right of `c`; their residues are added.
    pub left_poles: Vec<f64>,
    /// Right-family poles to the left of `c`; their residues are subtracted.
    pub right_poles: Vec<f64>,
}

/// Abscissa of the vertical integration path, plus bend information when
/// no straight line separates the pole families.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourChoice {
    pub c: f64,
    pub bend: Option<BendDirective>,
}

/// Picks a path abscissa for `spec`: the midpoint of the separation interval
/// when it is non-empty, otherwise a point clear of all poles together with
/// the bend directive for that point.
pub fn contour_abscissa(spec: &MeijerSpec) -> ContourChoice {
    let (lo, hi) = spec.separation_interval();
    if lo < hi {
        let c = match (lo.is_finite(), hi.is_finite()) {
            (true, true) => 0.5 * (lo + hi),
            (true, false) => lo + 0.5,
            (false, true) => hi - 0.5,
            (false, false) => 0.0,
        };
        ContourChoice { c, bend: None }
    } else {
        bent_choice(spec, lo, hi)
    }
}

/// Like [`contour_abscissa`], but on wide intervals keeps the path close
/// to the pole family that dominates at `z`, so that `|z^{-s}|` on the path
/// stays comparable to the value being computed.
pub(crate) fn contour_for(spec: &MeijerSpec, z: f64) -> ContourChoice {
    let (lo, hi) = spec.separation_interval();
    if !(lo < hi) {
        return bent_choice(spec, lo, hi);
    }
    let width = hi - lo;
    if width.is_finite() && width <= 1.0 {
        return contour_abscissa(spec);
    }
    let c = if lo.is_finite() && (z < 1.0 || !hi.is_finite()) {
        lo + 0.5
    } else if hi.is_finite() {
        hi - 0.5
    } else {
        0.0
    };
    ContourChoice { c, bend: None }
}

fn bent_choice(spec: &MeijerSpec, lo: f64, hi: f64) -> ContourChoice {
    // lo >= hi here: search [hi - 1/2, lo + 1/2] for the point farthest from
    // every pole, preferring the middle on ties.
    let from = hi - 0.5;
    let to = lo + 0.5;
    let mut poles = spec.poles_in(Side::Left, from - 1.0, to + 1.0);
    poles.extend(spec.poles_in(Side::Right, from - 1.0, to + 1.0));
    let mid = 0.5 * (from + to);
    let steps = 400;
    let mut best = (f64::NEG_INFINITY, mid);
    for k in 0..=steps {
        let x = from + (to - from) * k as f64 / steps as f64;
        let clearance = poles
            .iter()
            .map(|p| (p - x).abs())
            .fold(f64::INFINITY, f64::min);
        let better = clearance > best.0 + 1e-12
            || ((clearance - best.0).abs() <= 1e-12 && (x - mid).abs() < (best.1 - mid).abs());
        if better {
            best = (clearance, x);
        }
    }
    let c = best.1;
    let mut left_poles = spec.poles_in(Side::Left, c, f64::max(c, lo) + 1.0);
    left_poles.retain(|&p| p > c);
    let mut right_poles = spec.poles_in(Side::Right, f64::min(c, hi) - 1.0, c);
    right_poles.retain(|&p| p < c);
    left_poles.sort_by(|x, y| y.partial_cmp(x).unwrap_or(Ordering::Equal));
    right_poles.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
    ContourChoice {
        c,
        bend: Some(BendDirective {
            left_poles,
            right_poles,
        }),
    }
}

/// Which residue series converges at `z`, if any.
pub(crate) fn series_side(spec: &MeijerSpec, z: f64) -> Option<Side> {
    match spec.p().cmp(&spec.q()) {
        Ordering::Less => Some(Side::Left),
        Ordering::Greater => Some(Side::Right),
        Ordering::Equal => {
            if z < SERIES_GUARD_BAND.0 {
                Some(Side::Left)
            } else if z > SERIES_GUARD_BAND.1 {
                Some(Side::Right)
            } else {
                None
            }
        }
    }
}

/// Integration path usable at `z`, if any.
pub(crate) fn path_for(spec: &MeijerSpec, z: f64) -> Option<Path> {
    let kappa = spec.decay_rate();
    if kappa > 0.0 {
        Some(Path::Vertical)
    } else if kappa == 0.0 && spec.p() == spec.q() && (z - 1.0).abs() > 1e-3 {
        // Algebraic decay only: swing both ends towards the poles whose
        // residues decay at this z.
        Some(if z < 1.0 {
            Path::BentLeft
        } else {
            Path::BentRight
        })
    } else {
        None
    }
}

/// Residue-series evaluation alone.
pub(crate) fn meijer_g_series(spec: &MeijerSpec, z: f64) -> Result<Option<EvalResult>> {
    check_argument(z)?;
    match series_side(spec, z) {
        Some(side) => {
            let (v, e) = residue_series(spec, z, side)?;
            Ok(Some(EvalResult::new(v, e, Method::ResidueSeries)?))
        }
        None => Ok(None),
    }
}

/// Contour-quadrature evaluation alone.
pub(crate) fn meijer_g_contour(spec: &MeijerSpec, z: f64) -> Result<Option<EvalResult>> {
    check_argument(z)?;
    let Some(path) = path_for(spec, z) else {
        return Ok(None);
    };
    let choice = contour_for(spec, z);
    let (mut v, mut e) = contour_integral(spec, z, choice.c, path)?;
    if let Some(bend) = &choice.bend {
        let (bv, be) = bend_correction(spec, z, bend)?;
        v += bv;
        e += be;
    }
    Ok(Some(EvalResult::new(v, e, Method::ContourQuadrature)?))
}

/// `G^{m,n}_{p,q}(z | a; b)` for `z > 0`.
///
/// Both backends run when both are applicable; a disagreement beyond
/// `max(1e-8 |G|, 10 (err_series + err_contour))` is reported as an error.
/// A backend whose own error estimate exceeds `1e-6 |G|` is set aside when
/// the other one is within it.
/// The returned value is the series value in that case, with the backend
/// difference folded into the error estimate.
pub fn meijer_g(spec: &MeijerSpec, z: f64) -> Result<EvalResult> {
    check_argument(z)?;
    let series = meijer_g_series(spec, z)?;
    let contour = meijer_g_contour(spec, z)?;
    match (series, contour) {
        // An ill-conditioned series (huge terms cancelling) reports its own
        // loss of accuracy; the other backend is then used alone.
        (Some(s), Some(c)) if !reliable(&s) && reliable(&c) => Ok(c),
        (Some(s), Some(c)) if reliable(&s) && !reliable(&c) => Ok(s),
        (Some(s), Some(c)) => {
            let diff = (s.value - c.value).abs();
            let scale = s.value.abs().max(c.value.abs());
            let tol = (BACKEND_REL_TOL * scale).max(10.0 * (s.abs_err_est + c.abs_err_est));
            if diff > tol {
                return Err(Error::Disagreement {
                    primary: s.value,
                    primary_method: Method::ResidueSeries.as_str(),
                    secondary: c.value,
                    secondary_method: Method::ContourQuadrature.as_str(),
                    tolerance: tol,
                });
            }
            EvalResult::new(s.value, s.abs_err_est.max(diff), Method::ResidueSeries)
        }
        (Some(r), None) | (None, Some(r)) => Ok(r),
        (None, None) => Err(Error::domain(format!(
            "no convergent representation for G^{{{},{}}}_{{{},{}}} at z = {z}",
            spec.m(),
            spec.n(),
            spec.p(),
            spec.q()
        ))),
    }
}

fn reliable(r: &EvalResult) -> bool {
    r.abs_err_est <= UNRELIABLE_REL_ERR * r.value.abs()
}

fn check_argument(z: f64) -> Result<()> {
    if !(z.is_finite() && z > 0.0) {
        return Err(Error::domain(format!(
            "Meijer G argument must be positive and finite, got {z}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ln_spec() -> MeijerSpec {
        MeijerSpec::new(1, 2, vec![1.0, 1.0], vec![1.0, 0.0]).unwrap()
    }

    #[test]
    fn rejects_bad_orders_and_collisions() {
        assert!(MeijerSpec::new(2, 0, vec![], vec![1.0]).is_err());
        assert!(MeijerSpec::new(0, 2, vec![1.0], vec![]).is_err());
        assert!(MeijerSpec::new(1, 1, vec![1.0], vec![0.0]).is_err());
        assert!(MeijerSpec::new(1, 1, vec![3.0], vec![0.5 + 0.5]).is_err());
        assert!(MeijerSpec::new(1, 1, vec![f64::NAN], vec![0.0]).is_err());
        // a - b = 0 and negative integers are fine
        assert!(MeijerSpec::new(1, 1, vec![0.0], vec![0.0]).is_ok());
        assert!(MeijerSpec::new(1, 1, vec![-2.0], vec![0.0]).is_ok());
    }

    #[test]
    fn abscissa_examples() {
        // G^{3,2}_{3,3}(· | 0, 0, 1; 1, 0, 0)
        let s = MeijerSpec::new(3, 2, vec![0.0, 0.0, 1.0], vec![1.0, 0.0, 0.0]).unwrap();
        let ch = contour_abscissa(&s);
        assert!(ch.bend.is_none());
        assert!(ch.c > 0.0 && ch.c < 1.0);
        assert_relative_eq!(ch.c, 0.5);

        let ch = contour_abscissa(&ln_spec());
        assert!(ch.bend.is_none());
        assert_relative_eq!(ch.c, -0.5);
    }

    #[test]
    fn abscissa_bends_on_empty_interval() {
        // left poles 0, -1, ...; right poles -0.5, 0.5, 1.5, ...
        let s = MeijerSpec::new(1, 1, vec![1.5], vec![0.0]).unwrap();
        let ch = contour_abscissa(&s);
        let bend = ch.bend.expect("interval is empty");
        assert!(!bend.left_poles.is_empty() || !bend.right_poles.is_empty());
        for p in &bend.left_poles {
            assert!(*p > ch.c);
        }
        for p in &bend.right_poles {
            assert!(*p < ch.c);
        }
    }

    #[test]
    fn logarithm_identity() {
        let s = ln_spec();
        let g = meijer_g(&s, 1.0).unwrap();
        assert_relative_eq!(g.value, std::f64::consts::LN_2, max_relative = 1e-10);
        for x in [0.01, 0.3, 0.95, 2.0, 7.5, 50.0] {
            let g = meijer_g(&s, x).unwrap();
            assert_relative_eq!(g.value, f64::ln_1p(x), max_relative = 1e-9);
        }
    }

    #[test]
    fn rational_identity() {
        // G^{1,1}_{1,1}(x | 1 - ms; m) = Γ(m + ms) x^m (1 + x)^{-m - ms}
        let s = MeijerSpec::new(1, 1, vec![0.0], vec![1.0]).unwrap();
        assert_relative_eq!(meijer_g(&s, 1.0).unwrap().value, 0.25, max_relative = 1e-10);
    }

    #[test]
    fn algebraic_decay_uses_bent_path() {
        // G^{1,0}_{1,1}(z | 2; 0) = 1 - z on (0, 1), 0 beyond
        let s = MeijerSpec::new(1, 0, vec![2.0], vec![0.0]).unwrap();
        assert_eq!(s.decay_rate(), 0.0);
        for z in [0.2, 0.5, 0.8] {
            let c = meijer_g_contour(&s, z).unwrap().unwrap();
            assert_relative_eq!(c.value, 1.0 - z, max_relative = 1e-9, epsilon = 1e-12);
            let g = meijer_g(&s, z).unwrap();
            assert_relative_eq!(g.value, 1.0 - z, max_relative = 1e-10);
        }
        let c = meijer_g_contour(&s, 3.0).unwrap().unwrap();
        assert!(c.value.abs() < 1e-10, "{c:?}");
    }

    #[test]
    fn bent_directive_matches_series() {
        // Interval empty: left poles {0.3 - k}, right poles {-0.2 + k}.
        let s = MeijerSpec::new(2, 1, vec![1.2, 0.4], vec![-0.3, 0.7]).unwrap();
        assert!(contour_abscissa(&s).bend.is_some());
        for z in [0.3, 2.5] {
            let series = meijer_g_series(&s, z).unwrap().unwrap();
            let contour = meijer_g_contour(&s, z).unwrap().unwrap();
            assert_relative_eq!(series.value, contour.value, max_relative = 1e-9);
        }
    }

    #[test]
    fn rejects_nonpositive_argument() {
        assert!(meijer_g(&ln_spec(), 0.0).is_err());
        assert!(meijer_g(&ln_spec(), -1.0).is_err());
        assert!(meijer_g(&ln_spec(), f64::INFINITY).is_err());
    }
}
