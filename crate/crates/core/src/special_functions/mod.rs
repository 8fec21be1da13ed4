//! Gamma-function machinery and Meijer G-functions of one and two variables.
//!
//! Everything here works for real parameter vectors and positive real
//! arguments, which covers every G-function in the secrecy closed forms.

mod bivariate;
mod contour;
mod gamma;
mod meijer;
mod residues;

use std::fmt;

pub use bivariate::{
    meijer_g_bivariate, meijer_g_bivariate_on, BivariateContour, BivariateMeijerSpec,
};
pub use gamma::{ln_beta, ln_gamma, log_gamma_complex};
pub use meijer::{contour_abscissa, meijer_g, BendDirective, ContourChoice, MeijerSpec};

pub(crate) use gamma::ln_gamma_unchecked;

/// How a value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    ResidueSeries,
    ContourQuadrature,
    DoubleContour,
    ElementaryIdentity,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ResidueSeries => "residue_series",
            Method::ContourQuadrature => "contour_quadrature",
            Method::DoubleContour => "double_contour",
            Method::ElementaryIdentity => "elementary_identity",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A computed value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    pub abs_err_est: f64,
    pub method: Method,
}

impl EvalResult {
    /// Builds a result, rejecting non-finite values or error estimates.
    pub fn new(value: f64, abs_err_est: f64, method: Method) -> crate::Result<Self> {
        if !value.is_finite() || !abs_err_est.is_finite() {
            return Err(crate::Error::NonFinite(method.as_str()));
        }
        Ok(Self {
            value,
            abs_err_est: abs_err_est.abs(),
            method,
        })
    }

    /// Multiplies value and error by a finite constant.
    pub fn scaled(self, factor: f64) -> Self {
        Self {
            value: self.value * factor,
            abs_err_est: self.abs_err_est * factor.abs(),
            method: self.method,
        }
    }

    pub fn relative_err(&self) -> f64 {
        if self.value == 0.0 {
            f64::INFINITY
        } else {
            self.abs_err_est / self.value.abs()
        }
    }
}
