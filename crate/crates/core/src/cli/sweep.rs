//! SNR sweeps over a family of traces and their CSV rendering.

use std::f64::consts::LN_2;
use std::fmt::Write as _;

use rayon::prelude::*;

use super::config::{Config, McConfig, Metric, OracleMode, VaryParam};
use crate::error::{Error, Result};
use crate::fading::{db_to_linear, WiretapScenario};
use crate::oracle::{asc_quadrature, mc_metrics, pnsc_quadrature, MIN_SAMPLES};
use crate::secrecy::{asc_closed, clamp_probability, pnsc_closed};

pub const CSV_HEADER: &str =
    "snr_db,vary_param,vary_value,pnsc,pnsc_err,asc_nats,asc_err,asc_asym_nats,pnsc_mc,pnsc_mc_stderr,asc_mc,asc_mc_stderr";

/// A validated sweep. `fixed.main`'s `γ̄` is replaced by each SNR point.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub snr_db_start: f64,
    pub snr_db_stop: f64,
    pub snr_db_step: f64,
    pub vary: VaryParam,
    pub vary_values: Vec<f64>,
    pub fixed: WiretapScenario,
    pub metrics: Vec<Metric>,
    pub oracle: OracleMode,
    pub mc_n: u64,
    pub seed: u64,
}

impl SweepSpec {
    /// Builds the spec from a config; `oracle`, `seed` and `mc_n` override it.
    pub fn from_config(
        c: &Config,
        oracle: Option<OracleMode>,
        seed: Option<u64>,
        mc_n: Option<u64>,
    ) -> Result<Self> {
        let sweep = c
            .sweep
            .as_ref()
            .ok_or_else(|| Error::domain("config has no `sweep` section"))?;
        let mc = c.mc.unwrap_or_default();
        let spec = Self {
            snr_db_start: sweep.snr_db_start,
            snr_db_stop: sweep.snr_db_stop,
            snr_db_step: sweep.snr_db_step,
            vary: sweep.vary,
            vary_values: sweep.vary_values.clone(),
            fixed: c.scenario()?,
            metrics: sweep.metrics.clone(),
            oracle: oracle.unwrap_or(sweep.oracle),
            mc_n: mc_n.unwrap_or(mc.n),
            seed: seed.unwrap_or(mc.seed),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let (a, b, h) = (self.snr_db_start, self.snr_db_stop, self.snr_db_step);
        if !(a.is_finite() && b.is_finite() && h.is_finite()) {
            return Err(Error::domain("sweep bounds and step must be finite"));
        }
        if !(h > 0.0) || b < a {
            return Err(Error::domain(format!(
                "sweep needs step > 0 and stop >= start, got start {a}, stop {b}, step {h}"
            )));
        }
        if self.vary_values.is_empty() {
            return Err(Error::domain("vary_values must not be empty"));
        }
        if self.metrics.is_empty() {
            return Err(Error::domain("metrics must not be empty"));
        }
        if self.oracle.mc() && self.mc_n < MIN_SAMPLES {
            return Err(Error::domain(format!(
                "mc n must be at least {MIN_SAMPLES}"
            )));
        }
        for &v in &self.vary_values {
            self.vary.apply(&self.fixed, v)?;
        }
        if self.snr_points().len() > 100_000 {
            return Err(Error::domain("sweep has more than 100000 SNR points"));
        }
        Ok(())
    }

    /// Ascending SNR points in dB.
    pub fn snr_points(&self) -> Vec<f64> {
        let count =
            ((self.snr_db_stop - self.snr_db_start) / self.snr_db_step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|k| self.snr_db_start + k as f64 * self.snr_db_step)
            .collect()
    }

    fn wants(&self, m: Metric) -> bool {
        self.metrics.contains(&m)
    }

    fn mc(&self) -> McConfig {
        McConfig {
            n: self.mc_n,
            seed: self.seed,
        }
    }
}

/// One CSV cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    /// Not requested.
    Na,
    Value(f64),
    /// Requested but the evaluation failed; see [`SweepRow::failures`].
    Failed,
}

impl Cell {
    pub fn value(self) -> Option<f64> {
        match self {
            Cell::Value(v) => Some(v),
            _ => None,
        }
    }

    fn render(self, scale: f64) -> String {
        match self {
            Cell::Na => "NA".into(),
            Cell::Value(v) => fmt_sig(v * scale),
            Cell::Failed => "FAILED".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub snr_db: f64,
    pub vary_value: f64,
    pub pnsc: Cell,
    pub pnsc_err: Cell,
    pub asc_nats: Cell,
    pub asc_err: Cell,
    pub asc_asym_nats: Cell,
    pub pnsc_mc: Cell,
    pub pnsc_mc_stderr: Cell,
    pub asc_mc: Cell,
    pub asc_mc_stderr: Cell,
    pub pnsc_quad: Cell,
    pub asc_quad: Cell,
    pub failures: Vec<String>,
}

impl SweepRow {
    fn empty(snr_db: f64, vary_value: f64) -> Self {
        Self {
            snr_db,
            vary_value,
            pnsc: Cell::Na,
            pnsc_err: Cell::Na,
            asc_nats: Cell::Na,
            asc_err: Cell::Na,
            asc_asym_nats: Cell::Na,
            pnsc_mc: Cell::Na,
            pnsc_mc_stderr: Cell::Na,
            asc_mc: Cell::Na,
            asc_mc_stderr: Cell::Na,
            pnsc_quad: Cell::Na,
            asc_quad: Cell::Na,
            failures: Vec::new(),
        }
    }
}

fn point(spec: &SweepSpec, snr_db: f64, vary_value: f64) -> SweepRow {
    let mut row = SweepRow::empty(snr_db, vary_value);
    let scenario = match spec.vary.apply(&spec.fixed, vary_value).and_then(|s| {
        Ok(WiretapScenario::new(
            s.main.with_gamma_bar(db_to_linear(snr_db))?,
            s.eaves,
        ))
    }) {
        Ok(s) => s,
        Err(e) => {
            row.failures.push(format!("scenario: {e}"));
            return row;
        }
    };
    let (want_p, want_a, want_asym) = (
        spec.wants(Metric::Pnsc),
        spec.wants(Metric::Asc),
        spec.wants(Metric::AscAsym),
    );

    if want_a || want_asym {
        match asc_closed(&scenario) {
            Ok(m) => {
                if want_p {
                    row.pnsc = Cell::Value(m.pnsc);
                    row.pnsc_err = Cell::Value(m.pnsc_err);
                }
                if want_a {
                    row.asc_nats = Cell::Value(m.asc_nats);
                    row.asc_err = Cell::Value(m.err_est);
                }
                if want_asym {
                    row.asc_asym_nats = Cell::Value(m.asc_asymptotic_nats);
                }
            }
            Err(e) => {
                row.failures.push(format!("closed form: {e}"));
                for (want, cells) in [
                    (want_p, [&mut row.pnsc, &mut row.pnsc_err]),
                    (want_a, [&mut row.asc_nats, &mut row.asc_err]),
                ] {
                    if want {
                        for c in cells {
                            *c = Cell::Failed;
                        }
                    }
                }
                if want_asym {
                    row.asc_asym_nats = Cell::Failed;
                }
            }
        }
    } else if want_p {
        match pnsc_closed(&scenario) {
            Ok(r) => {
                row.pnsc = Cell::Value(clamp_probability(&r));
                row.pnsc_err = Cell::Value(r.abs_err_est);
            }
            Err(e) => {
                row.failures.push(format!("closed form: {e}"));
                row.pnsc = Cell::Failed;
                row.pnsc_err = Cell::Failed;
            }
        }
    }

    if spec.oracle.mc() && (want_p || want_a) {
        let mc = spec.mc();
        match mc_metrics(&scenario, mc.n, mc.seed) {
            Ok(m) => {
                if want_p {
                    row.pnsc_mc = Cell::Value(m.pnsc.mean);
                    row.pnsc_mc_stderr = Cell::Value(m.pnsc.stderr);
                }
                if want_a {
                    row.asc_mc = Cell::Value(m.asc.mean);
                    row.asc_mc_stderr = Cell::Value(m.asc.stderr);
                }
            }
            Err(e) => row.failures.push(format!("monte carlo: {e}")),
        }
    }
    if spec.oracle.quad() {
        if want_p {
            row.pnsc_quad = match pnsc_quadrature(&scenario) {
                Ok(q) => Cell::Value(q.value),
                Err(e) => {
                    row.failures.push(format!("quadrature: {e}"));
                    Cell::Failed
                }
            };
        }
        if want_a {
            row.asc_quad = match asc_quadrature(&scenario) {
                Ok(q) => Cell::Value(q.asc()),
                Err(e) => {
                    row.failures.push(format!("quadrature: {e}"));
                    Cell::Failed
                }
            };
        }
    }
    row
}

/// Rows in `(vary_value, snr)` order: all SNR points of the first trace,
/// then the next trace. Failures are recorded per row.
pub fn run_sweep(spec: &SweepSpec) -> Vec<SweepRow> {
    let snrs = spec.snr_points();
    let jobs: Vec<(f64, f64)> = spec
        .vary_values
        .iter()
        .flat_map(|&v| snrs.iter().map(move |&s| (s, v)))
        .collect();
    jobs.par_iter().map(|&(s, v)| point(spec, s, v)).collect()
}

/// `x` with 9 significant digits, in the style of C's `%.9g`.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let digits = (8 - exp).max(0) as usize;
        trim_zeros(format!("{x:.digits$}"))
    } else {
        format!(
            "{}e{}{:02}",
            trim_zeros(mantissa.to_string()),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// CSV text with the fixed header. `bits` converts capacity columns and
/// renames them `*_bits`; quadrature columns are appended when requested.
pub fn to_csv(spec: &SweepSpec, rows: &[SweepRow], bits: bool) -> String {
    let mut header = if bits {
        CSV_HEADER
            .replace("asc_nats", "asc_bits")
            .replace("asc_asym_nats", "asc_asym_bits")
    } else {
        CSV_HEADER.to_string()
    };
    if spec.oracle.quad() {
        header.push_str(",pnsc_quad,asc_quad");
    }
    let c = if bits { 1.0 / LN_2 } else { 1.0 };
    let mut out = header;
    out.push('\n');
    for r in rows {
        let mut cells = vec![
            fmt_sig(r.snr_db),
            spec.vary.name().to_string(),
            fmt_sig(r.vary_value),
            r.pnsc.render(1.0),
            r.pnsc_err.render(1.0),
            r.asc_nats.render(c),
            r.asc_err.render(c),
            r.asc_asym_nats.render(c),
            r.pnsc_mc.render(1.0),
            r.pnsc_mc_stderr.render(1.0),
            r.asc_mc.render(c),
            r.asc_mc_stderr.render(c),
        ];
        if spec.oracle.quad() {
            cells.push(r.pnsc_quad.render(1.0));
            cells.push(r.asc_quad.render(c));
        }
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fading::FadingParams;

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(fmt_sig(0.849218400822191559), "0.849218401");
        assert_eq!(fmt_sig(-2.5), "-2.5");
        assert_eq!(fmt_sig(40.0), "40");
        assert_eq!(fmt_sig(1.23456789012e-7), "1.23456789e-07");
        assert_eq!(fmt_sig(3.0e12), "3e+12");
        assert_eq!(fmt_sig(123456789.4), "123456789");
        assert_eq!(fmt_sig(0.0), "0");
    }

    fn spec(vary: VaryParam, values: Vec<f64>, metrics: Vec<Metric>) -> SweepSpec {
        let link = FadingParams::new(2.0, 3.0, 1.0).unwrap();
        SweepSpec {
            snr_db_start: 0.0,
            snr_db_stop: 10.0,
            snr_db_step: 5.0,
            vary,
            vary_values: values,
            fixed: WiretapScenario::new(link, link),
            metrics,
            oracle: OracleMode::None,
            mc_n: 10_000,
            seed: 1,
        }
    }

    #[test]
    fn rows_are_trace_major_and_snr_ascending() {
        let s = spec(VaryParam::MD, vec![1.0, 4.0], vec![Metric::Pnsc]);
        let rows = run_sweep(&s);
        let order: Vec<(f64, f64)> = rows.iter().map(|r| (r.vary_value, r.snr_db)).collect();
        assert_eq!(
            order,
            vec![
                (1.0, 0.0),
                (1.0, 5.0),
                (1.0, 10.0),
                (4.0, 0.0),
                (4.0, 5.0),
                (4.0, 10.0)
            ]
        );
        for trace in rows.chunks(3) {
            assert!(trace
                .windows(2)
                .all(|w| w[1].pnsc.value() >= w[0].pnsc.value()));
        }
        let csv = to_csv(&s, &rows, false);
        assert!(csv.starts_with(CSV_HEADER));
        let cells: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(cells.len(), CSV_HEADER.split(',').count());
        assert!(cells[3].parse::<f64>().is_ok() && cells[4].parse::<f64>().is_ok());
        assert!(cells[5..].iter().all(|c| *c == "NA"));
    }

    #[test]
    fn symmetric_point_gives_half() {
        let mut s = spec(VaryParam::MD, vec![2.0], vec![Metric::Pnsc]);
        s.snr_db_stop = 0.0;
        let rows = run_sweep(&s);
        assert_eq!(rows.len(), 1);
        assert!((rows[0].pnsc.value().unwrap() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn invalid_specs_are_rejected() {
        let mut s = spec(VaryParam::MD, vec![], vec![Metric::Pnsc]);
        assert!(s.validate().is_err());
        s.vary_values = vec![1.0];
        s.snr_db_step = 0.0;
        assert!(s.validate().is_err());
        s.snr_db_step = 1.0;
        s.vary_values = vec![-1.0];
        assert!(s.validate().is_err());
    }

    #[test]
    fn bits_rename_and_scale() {
        let mut s = spec(VaryParam::GammaBarE, vec![0.0], vec![Metric::Asc]);
        s.snr_db_stop = 0.0;
        let rows = run_sweep(&s);
        let nats = to_csv(&s, &rows, false);
        let bits = to_csv(&s, &rows, true);
        assert!(bits.starts_with(
            "snr_db,vary_param,vary_value,pnsc,pnsc_err,asc_bits,asc_err,asc_asym_bits"
        ));
        let get = |csv: &str| {
            csv.lines()
                .nth(1)
                .unwrap()
                .split(',')
                .nth(5)
                .unwrap()
                .parse::<f64>()
                .unwrap()
        };
        assert!((get(&bits) - get(&nats) / LN_2).abs() < 1e-8);
    }
}
