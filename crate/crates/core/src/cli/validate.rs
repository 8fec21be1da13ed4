//! Closed forms against both oracles over a list of scenarios.

use std::fmt;

use crate::error::Result;
use crate::fading::{FadingParams, WiretapScenario};
use crate::oracle::{asc_quadrature, mc_metrics, pnsc_quadrature, McEstimate};
use crate::secrecy::{asc_closed, pnsc_closed};

use super::config::McConfig;
use super::sweep::fmt_sig;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Closed-form PNSC against quadrature, relative.
    pub pnsc_rel: f64,
    /// Closed-form ASC against quadrature, relative.
    pub asc_rel: f64,
    /// Closed forms against Monte Carlo, in standard errors.
    pub sigmas: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            pnsc_rel: 1e-6,
            asc_rel: 1e-4,
            sigmas: 3.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub scenario: usize,
    pub metric: &'static str,
    pub closed: f64,
    pub quad: f64,
    pub quad_rel: f64,
    pub mc: McEstimate,
    pub mc_sigmas: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub scenarios: Vec<WiretapScenario>,
    pub rows: Vec<Comparison>,
    pub tolerances: Tolerances,
    pub directions: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

fn compare(
    scenario: usize,
    metric: &'static str,
    closed: f64,
    quad: f64,
    mc: McEstimate,
    rel_tol: f64,
    sigmas: f64,
) -> Comparison {
    let quad_rel = if quad == 0.0 {
        (closed - quad).abs()
    } else {
        ((closed - quad) / quad).abs()
    };
    let mc_sigmas = if mc.stderr > 0.0 {
        (closed - mc.mean).abs() / mc.stderr
    } else if closed == mc.mean {
        0.0
    } else {
        f64::INFINITY
    };
    Comparison {
        scenario,
        metric,
        closed,
        quad,
        quad_rel,
        mc,
        mc_sigmas,
        pass: quad_rel <= rel_tol && mc_sigmas <= sigmas,
    }
}

/// Runs the comparison table. Numerical failures abort the whole run.
pub fn validate(scenarios: &[WiretapScenario], tol: Tolerances, mc: McConfig) -> Result<Report> {
    let mut rows = Vec::new();
    for (i, s) in scenarios.iter().enumerate() {
        let p = pnsc_closed(s)?;
        let a = asc_closed(s)?;
        let pq = pnsc_quadrature(s)?;
        let aq = asc_quadrature(s)?;
        let m = mc_metrics(s, mc.n, mc.seed)?;
        rows.push(compare(
            i,
            "pnsc",
            p.value,
            pq.value,
            m.pnsc,
            tol.pnsc_rel,
            tol.sigmas,
        ));
        rows.push(compare(
            i,
            "asc",
            a.asc_nats,
            aq.asc(),
            m.asc,
            tol.asc_rel,
            tol.sigmas,
        ));
    }
    Ok(Report {
        scenarios: scenarios.to_vec(),
        rows,
        tolerances: tol,
        directions: observed_directions()?,
    })
}

fn trend(v: &[f64]) -> &'static str {
    if v.windows(2).all(|w| w[1] > w[0]) {
        "increases"
    } else if v.windows(2).all(|w| w[1] < w[0]) {
        "decreases"
    } else {
        "is not monotone"
    }
}

type Modify = fn(&WiretapScenario, f64) -> Result<WiretapScenario>;

/// Which way PNSC and ASC move with `m_sE` and `m_D`, by quadrature.
pub fn observed_directions() -> Result<Vec<String>> {
    let base = WiretapScenario::new(
        FadingParams::from_db(2.0, 3.0, 10.0)?,
        FadingParams::from_db(2.0, 3.0, 0.0)?,
    );
    let mut out = Vec::new();
    let cases: [(&str, [f64; 3], Modify); 2] = [
        ("m_sE", [1.5, 3.0, 10.0], |s, v| {
            Ok(WiretapScenario::new(s.main, s.eaves.with_m_s(v)?))
        }),
        ("m_D", [1.0, 2.0, 4.0], |s, v| {
            Ok(WiretapScenario::new(s.main.with_m(v)?, s.eaves))
        }),
    ];
    for (name, values, apply) in cases {
        let mut pnsc = Vec::new();
        let mut asc = Vec::new();
        for v in values {
            let s = apply(&base, v)?;
            pnsc.push(pnsc_quadrature(&s)?.value);
            asc.push(asc_quadrature(&s)?.asc());
        }
        let fmt = |v: &[f64]| v.iter().map(|x| fmt_sig(*x)).collect::<Vec<_>>().join(", ");
        out.push(format!(
            "PNSC {} as {name} goes {} ({}); ASC {} ({})",
            trend(&pnsc),
            fmt(&values),
            fmt(&pnsc),
            trend(&asc),
            fmt(&asc)
        ));
    }
    Ok(out)
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = &self.tolerances;
        writeln!(
            f,
            "tolerances: pnsc rel {:e}, asc rel {:e}, monte carlo {} se",
            t.pnsc_rel, t.asc_rel, t.sigmas
        )?;
        for (i, s) in self.scenarios.iter().enumerate() {
            writeln!(
                f,
                "scenario {i}: main m={} m_s={} gamma_bar={}; eaves m={} m_s={} gamma_bar={}",
                s.main.m(),
                s.main.m_s(),
                fmt_sig(s.main.gamma_bar()),
                s.eaves.m(),
                s.eaves.m_s(),
                fmt_sig(s.eaves.gamma_bar())
            )?;
        }
        writeln!(
            f,
            "{:>8} {:>6} {:>16} {:>16} {:>10} {:>16} {:>8} {:>6}",
            "scenario", "metric", "closed", "quadrature", "rel diff", "monte carlo", "se", "status"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:>8} {:>6} {:>16} {:>16} {:>10.2e} {:>16} {:>8.2} {:>6}",
                r.scenario,
                r.metric,
                fmt_sig(r.closed),
                fmt_sig(r.quad),
                r.quad_rel,
                fmt_sig(r.mc.mean),
                r.mc_sigmas,
                if r.pass { "ok" } else { "FAIL" }
            )?;
        }
        for d in &self.directions {
            writeln!(f, "observed: {d}")?;
        }
        let failed = self.rows.iter().filter(|r| !r.pass).count();
        if failed == 0 {
            write!(f, "all {} comparisons within tolerance", self.rows.len())
        } else {
            write!(
                f,
                "{failed} of {} comparisons outside tolerance",
                self.rows.len()
            )
        }
    }
}
