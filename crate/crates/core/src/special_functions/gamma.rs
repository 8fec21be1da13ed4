//! Log-gamma on the complex plane.
//!
//! Lanczos approximation (g = 607/128, 15 terms) on the right half-plane,
//! upward recurrence to reach it from the left. The recurrence keeps the
//! result on the standard `loggamma` branch (cut along the negative real
//! axis) and stays accurate next to the poles, where the reflection formula
//! would cancel.

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 607.0 / 128.0;

const LANCZOS_COEF: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_8e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_6e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];

/// ln(sqrt(2 pi))
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Principal-branch `ln Γ(z)`.
///
/// Fails on the non-positive integers, where Γ has poles.
pub fn log_gamma_complex(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain(format!(
            "log-gamma of non-finite argument {z}"
        )));
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::domain(format!("Γ has a pole at z = {}", z.re)));
    }
    Ok(ln_gamma_unchecked(z))
}

/// `ln Γ(x)` for real `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    ln_gamma_unchecked(Complex64::new(x, 0.0)).re
}

/// `ln B(a, b)` for `a, b > 0`.
pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Log-gamma without the pole check. Callers that evaluate off the real axis
/// (contour integrands) use this on the hot path.
#[inline]
pub(crate) fn ln_gamma_unchecked(z: Complex64) -> Complex64 {
    if z.re >= 0.5 {
        return lanczos(z);
    }
    // Γ(z) = Γ(z + n) / (z (z+1) ... (z+n-1))
    let shift = (0.5 - z.re).ceil();
    let n = shift as usize;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut w = z;
    for _ in 0..n {
        acc += w.ln();
        w += 1.0;
    }
    lanczos(w) - acc
}

#[inline]
fn lanczos(z: Complex64) -> Complex64 {
    // Γ(z) = Γ(x + 1) with x = z - 1
    let x = z - 1.0;
    let mut series = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (k, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        series += c / (x + k as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (x + 0.5) * t.ln() - t + series.ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn unit_and_half() {
        let v = log_gamma_complex(c(1.0, 0.0)).unwrap();
        assert!(v.norm() < 1e-15);
        let v = log_gamma_complex(c(0.5, 0.0)).unwrap();
        assert_relative_eq!(v.re, 0.572_364_942_924_700_1, max_relative = 1e-14);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn reference_values() {
        // mpmath.loggamma at 30 digits
        let cases = [
            (
                c(3.0, 4.0),
                c(-1.756_626_784_603_784_1, 4.742_664_438_034_657_9),
            ),
            (
                c(-2.5, 0.3),
                c(-0.432_088_892_613_201_92, -9.093_345_421_289_741_5),
            ),
            (
                c(0.1, -7.0),
                c(-10.854_877_044_420_903, -5.987_570_153_301_440_3),
            ),
            (
                c(-40.5, 150.0),
                c(-440.635_960_406_381_48, 531.657_336_394_519_92),
            ),
            (
                c(50.0, 200.0),
                c(-50.477_327_126_888_966, 931.353_517_685_720_48),
            ),
            (c(12.25, 0.0), c(18.115_669_505_710_893, 0.0)),
            (
                c(-49.7, -3.2),
                c(-155.415_362_592_570_02, 145.174_485_906_909_36),
            ),
            (
                c(0.5, 199.0),
                c(-311.669_530_498_979_75, 854.367_869_500_716_92),
            ),
        ];
        for (z, want) in cases {
            let got = log_gamma_complex(z).unwrap();
            let rel = (got - want).norm() / want.norm();
            assert!(rel < 1e-13, "z = {z}: got {got}, want {want}, rel {rel:e}");
        }
    }

    #[test]
    fn poles_are_rejected() {
        for k in 0..5 {
            let err = log_gamma_complex(c(-(k as f64), 0.0)).unwrap_err();
            assert!(matches!(err, Error::Domain(_)));
        }
        assert!(log_gamma_complex(c(-3.0, 1e-9)).is_ok());
    }

    #[test]
    fn recurrence_matches_factorials() {
        let mut fact = 1.0_f64;
        for n in 1..30 {
            let v = ln_gamma(n as f64 + 1.0);
            fact *= n as f64;
            assert_relative_eq!(v, fact.ln(), max_relative = 1e-13);
        }
    }

    #[test]
    fn near_pole_reflection() {
        // Γ(-3 + e) ≈ -1/(6 e) for small e
        let e = 1e-8;
        let v = ln_gamma_unchecked(c(-3.0 + e, 0.0));
        let mag = v.re.exp();
        assert_relative_eq!(mag, 1.0 / (6.0 * e), max_relative = 1e-6);
    }
}
