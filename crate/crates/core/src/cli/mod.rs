//! The `fsec` command line.
//!
//! Exit codes: 0 success, 2 validation disagreement, 64 usage or config
//! error, 70 numerical failure.

pub mod config;
pub mod svg;
pub mod sweep;
pub mod validate;

use std::f64::consts::LN_2;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::fading::{sample_stream, WiretapScenario, EAVES_STREAM, MAIN_STREAM};
use crate::oracle::{asc_quadrature, mc_metrics, pnsc_quadrature, standard_grid, MIN_SAMPLES};
use crate::secrecy::{asc_closed, clamp_probability, pnsc_closed};
use config::{Config, LinkConfig, McConfig, OracleMode};
use sweep::{fmt_sig, run_sweep, to_csv, SweepSpec};
use validate::Tolerances;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DISAGREEMENT: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_NUMERIC: i32 = 70;

#[derive(Debug, Parser)]
#[command(
    name = "fsec",
    version,
    about = "Secrecy metrics of wiretap channels under Fisher-Snedecor F fading"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Args)]
struct ScenarioArgs {
    /// JSON config with `main` and `eaves` links.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Main link as `m,m_s,gamma_bar_db`; overrides the config.
    #[arg(long, value_parser = parse_link, allow_hyphen_values = true)]
    main: Option<LinkConfig>,
    /// Eavesdropper link as `m,m_s,gamma_bar_db`; overrides the config.
    #[arg(long, value_parser = parse_link, allow_hyphen_values = true)]
    eaves: Option<LinkConfig>,
}

#[derive(Debug, Args)]
struct McArgs {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long = "mc-n")]
    mc_n: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Link {
    Main,
    Eaves,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Probability of non-zero secrecy capacity.
    Pnsc {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, value_enum, default_value = "none")]
        oracle: OracleMode,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Average secrecy capacity and its terms.
    Asc {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, value_enum, default_value = "none")]
        oracle: OracleMode,
        #[command(flatten)]
        mc: McArgs,
        /// Report capacities in bits instead of nats.
        #[arg(long)]
        bits: bool,
    },
    /// SNR sweep from a config's `sweep` section, as CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// CSV destination; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Overrides the config's oracle.
        #[arg(long, value_enum)]
        oracle: Option<OracleMode>,
        #[command(flatten)]
        mc: McArgs,
        #[arg(long)]
        bits: bool,
    },
    /// Closed forms against both oracles; exit 2 on disagreement.
    Validate {
        /// Config with `scenarios` or `main`/`eaves`; the standard grid when absent.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        mc: McArgs,
        #[arg(long, default_value_t = Tolerances::default().pnsc_rel)]
        pnsc_rel_tol: f64,
        #[arg(long, default_value_t = Tolerances::default().asc_rel)]
        asc_rel_tol: f64,
        /// Allowed Monte-Carlo deviation in standard errors.
        #[arg(long, default_value_t = Tolerances::default().sigmas)]
        mc_sigmas: f64,
    },
    /// SNR draws of one link, one per line.
    Sample {
        #[command(flatten)]
        scenario: ScenarioArgs,
        #[arg(long, value_enum, default_value = "main")]
        link: Link,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_link(s: &str) -> Result<LinkConfig, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [m, m_s, gamma_bar_db] => Ok(LinkConfig {
            m,
            m_s,
            gamma_bar_db,
        }),
        _ => Err(format!("expected m,m_s,gamma_bar_db, got `{s}`")),
    }
}

enum Failure {
    Usage(String),
    Numeric(String),
}

type Outcome = std::result::Result<i32, Failure>;

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn numeric(e: impl std::fmt::Display) -> Failure {
    Failure::Numeric(e.to_string())
}

fn load(path: Option<&Path>) -> std::result::Result<Config, Failure> {
    match path {
        Some(p) => Config::load(p).map_err(usage),
        None => Ok(Config::default()),
    }
}

fn scenario(args: &ScenarioArgs) -> std::result::Result<(WiretapScenario, Config), Failure> {
    let mut c = load(args.config.as_deref())?;
    if args.main.is_some() {
        c.main = args.main;
    }
    if args.eaves.is_some() {
        c.eaves = args.eaves;
    }
    let s = c
        .scenario()
        .map_err(|e| usage(format!("{e} (use --config or --main/--eaves)")))?;
    Ok((s, c))
}

fn mc_config(c: &Config, args: &McArgs) -> std::result::Result<McConfig, Failure> {
    let base = c.mc.unwrap_or_default();
    let mc = McConfig {
        n: args.mc_n.unwrap_or(base.n),
        seed: args.seed.unwrap_or(base.seed),
    };
    if mc.n < MIN_SAMPLES {
        return Err(usage(format!("--mc-n must be at least {MIN_SAMPLES}")));
    }
    Ok(mc)
}

fn write_file(path: &Path, text: &str) -> std::result::Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn cmd_pnsc(
    scenario_args: &ScenarioArgs,
    oracle: OracleMode,
    mc_args: &McArgs,
    out: &mut dyn Write,
) -> Outcome {
    let (s, c) = scenario(scenario_args)?;
    let mc = mc_config(&c, mc_args)?;
    let r = pnsc_closed(&s).map_err(numeric)?;
    let clamped = clamp_probability(&r);
    let mut text = format!(
        "pnsc {} err {:.2e} method {}",
        fmt_sig(clamped),
        r.abs_err_est,
        r.method
    );
    if clamped != r.value {
        text += &format!(" raw {}", fmt_sig(r.value));
    }
    let _ = writeln!(out, "{text}");
    if oracle.quad() {
        let q = pnsc_quadrature(&s).map_err(numeric)?;
        let _ = writeln!(
            out,
            "pnsc_quad {} err {:.2e} panels {}",
            fmt_sig(q.value),
            q.abs_err_est,
            q.subdivisions
        );
    }
    if oracle.mc() {
        let m = mc_metrics(&s, mc.n, mc.seed).map_err(numeric)?.pnsc;
        let _ = writeln!(
            out,
            "pnsc_mc {} stderr {:.2e} n {} seed {}",
            fmt_sig(m.mean),
            m.stderr,
            m.n,
            m.seed
        );
    }
    Ok(EXIT_OK)
}

fn cmd_asc(
    scenario_args: &ScenarioArgs,
    oracle: OracleMode,
    mc_args: &McArgs,
    bits: bool,
    out: &mut dyn Write,
) -> Outcome {
    let (s, c) = scenario(scenario_args)?;
    let mc = mc_config(&c, mc_args)?;
    let (unit, k) = if bits {
        ("bits", 1.0 / LN_2)
    } else {
        ("nats", 1.0)
    };
    let m = asc_closed(&s).map_err(numeric)?;
    for (name, v) in [("j1", m.j1), ("j2", m.j2), ("j3", m.j3)] {
        let _ = writeln!(out, "{name} {} {unit}", fmt_sig(v * k));
    }
    let _ = writeln!(
        out,
        "asc {} {unit} err {:.2e}",
        fmt_sig(m.asc_nats * k),
        m.err_est * k
    );
    let _ = writeln!(
        out,
        "asc_asym {} {unit}",
        fmt_sig(m.asc_asymptotic_nats * k)
    );
    if oracle.quad() {
        let q = asc_quadrature(&s).map_err(numeric)?;
        let _ = writeln!(
            out,
            "asc_quad {} {unit} err {:.2e}",
            fmt_sig(q.asc() * k),
            q.abs_err_est() * k
        );
    }
    if oracle.mc() {
        let r = mc_metrics(&s, mc.n, mc.seed).map_err(numeric)?.asc;
        let _ = writeln!(
            out,
            "asc_mc {} {unit} stderr {:.2e} n {} seed {}",
            fmt_sig(r.mean * k),
            r.stderr * k,
            r.n,
            r.seed
        );
    }
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    config: &Path,
    csv_out: Option<&Path>,
    svg_out: Option<&Path>,
    oracle: Option<OracleMode>,
    mc: &McArgs,
    bits: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let c = Config::load(config).map_err(usage)?;
    let spec = SweepSpec::from_config(&c, oracle, mc.seed, mc.mc_n).map_err(usage)?;
    let rows = run_sweep(&spec);
    let csv = to_csv(&spec, &rows, bits);
    match csv_out {
        Some(p) => write_file(p, &csv)?,
        None => {
            let _ = out.write_all(csv.as_bytes());
        }
    }
    if let Some(p) = svg_out {
        write_file(p, &svg::line_chart(&spec, &rows, bits))?;
    }
    let mut failed = false;
    for r in &rows {
        for f in &r.failures {
            failed = true;
            let _ = writeln!(
                err,
                "snr_db {} vary_value {}: {f}",
                fmt_sig(r.snr_db),
                fmt_sig(r.vary_value)
            );
        }
    }
    Ok(if failed { EXIT_NUMERIC } else { EXIT_OK })
}

fn cmd_validate(
    config: Option<&Path>,
    mc_args: &McArgs,
    tol: Tolerances,
    out: &mut dyn Write,
) -> Outcome {
    let c = load(config)?;
    let scenarios: Vec<WiretapScenario> = match (&c.scenarios, config) {
        (Some(list), _) => list
            .iter()
            .map(|s| s.scenario())
            .collect::<crate::Result<_>>()
            .map_err(usage)?,
        (None, Some(_)) => vec![c.scenario().map_err(usage)?],
        (None, None) => standard_grid(),
    };
    if scenarios.is_empty() {
        return Err(usage("scenario list is empty"));
    }
    for (name, v) in [
        ("pnsc-rel-tol", tol.pnsc_rel),
        ("asc-rel-tol", tol.asc_rel),
        ("mc-sigmas", tol.sigmas),
    ] {
        if !(v >= 0.0) {
            return Err(usage(format!("--{name} must be nonnegative, got {v}")));
        }
    }
    let mc = mc_config(&c, mc_args)?;
    let report = validate::validate(&scenarios, tol, mc).map_err(numeric)?;
    let _ = writeln!(out, "{report}");
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_DISAGREEMENT
    })
}

fn cmd_sample(
    scenario_args: &ScenarioArgs,
    link: Link,
    count: usize,
    seed: Option<u64>,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> Outcome {
    let (s, c) = scenario(scenario_args)?;
    let seed = seed.unwrap_or(c.mc.unwrap_or_default().seed);
    let (p, stream) = match link {
        Link::Main => (s.main, MAIN_STREAM),
        Link::Eaves => (s.eaves, EAVES_STREAM),
    };
    let xs = sample_stream(&p, seed, stream, count).map_err(usage)?;
    let mut text = String::with_capacity(16 * xs.len());
    for x in xs {
        text.push_str(&fmt_sig(x));
        text.push('\n');
    }
    match path {
        Some(p) => write_file(p, &text)?,
        None => {
            let _ = out.write_all(text.as_bytes());
        }
    }
    Ok(EXIT_OK)
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let outcome = match &cli.command {
        Cmd::Pnsc {
            scenario,
            oracle,
            mc,
        } => cmd_pnsc(scenario, *oracle, mc, out),
        Cmd::Asc {
            scenario,
            oracle,
            mc,
            bits,
        } => cmd_asc(scenario, *oracle, mc, *bits, out),
        Cmd::Sweep {
            config,
            out: csv,
            svg,
            oracle,
            mc,
            bits,
        } => cmd_sweep(
            config,
            csv.as_deref(),
            svg.as_deref(),
            *oracle,
            mc,
            *bits,
            out,
            err,
        ),
        Cmd::Validate {
            config,
            mc,
            pnsc_rel_tol,
            asc_rel_tol,
            mc_sigmas,
        } => cmd_validate(
            config.as_deref(),
            mc,
            Tolerances {
                pnsc_rel: *pnsc_rel_tol,
                asc_rel: *asc_rel_tol,
                sigmas: *mc_sigmas,
            },
            out,
        ),
        Cmd::Sample {
            scenario,
            link,
            count,
            seed,
            out: path,
        } => cmd_sample(scenario, *link, *count, *seed, path.as_deref(), out),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Numeric(msg)) => {
            let _ = writeln!(err, "numerical failure: {msg}");
            EXIT_NUMERIC
        }
    }
}
