//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use fsec::fading::{self, FadingParams, WiretapScenario};
use fsec::oracle::{self, standard_grid};
use fsec::secrecy;

const SEED: u64 = 0x5EC_2E7;

type Check = Result<String, String>;

fn run(number: u32, name: &str, limit: Option<Duration>, check: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let outcome = check();
    let elapsed = start.elapsed();
    let (mut pass, mut detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if let Some(limit) = limit {
        if elapsed > limit {
            pass = false;
            detail = format!(
                "{detail}; runtime {:.1} s exceeds {:.0} s",
                elapsed.as_secs_f64(),
                limit.as_secs_f64()
            );
        }
    }
    println!(
        "criterion {number} [{}] {name} ({:.1} s): {detail}",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    pass
}

fn describe(s: &WiretapScenario) -> String {
    format!(
        "D(m={}, m_s={}, g={}) E(m={}, m_s={}, g={})",
        s.main.m(),
        s.main.m_s(),
        s.main.gamma_bar(),
        s.eaves.m(),
        s.eaves.m_s(),
        s.eaves.gamma_bar()
    )
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Meijer G forms of the pdf and cdf against the elementary forms.
fn distribution_correctness() -> Check {
    let shapes = [0.6, 1.0, 1.5, 2.5, 3.7];
    let mut worst_pdf: f64 = 0.0;
    let mut worst_cdf: f64 = 0.0;
    for m in shapes {
        for ms in shapes {
            for gb in [1.0, 10.0] {
                let p = FadingParams::new(m, ms, gb).unwrap();
                for r in [0.01, 0.1, 1.0, 10.0, 100.0] {
                    let x = r * gb;
                    let gp = fading::pdf_meijer(&p, x)
                        .map_err(|e| format!("pdf G at {m}, {ms}, {gb}, {x}: {e}"))?;
                    let gc = fading::cdf_meijer(&p, x)
                        .map_err(|e| format!("cdf G at {m}, {ms}, {gb}, {x}: {e}"))?;
                    worst_pdf = worst_pdf.max(rel(gp.value, fading::pdf(&p, x).unwrap()));
                    worst_cdf = worst_cdf.max(rel(gc.value, fading::cdf(&p, x).unwrap()));
                }
            }
        }
    }
    let detail = format!("max rel dev pdf {worst_pdf:.2e}, cdf {worst_cdf:.2e} (limit 1e-8)");
    if worst_pdf <= 1e-8 && worst_cdf <= 1e-8 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn ks_distance(p: &FadingParams, mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = fading::cdf(p, x).unwrap();
            (f - i as f64 / n).abs().max((f - (i + 1) as f64 / n).abs())
        })
        .fold(0.0, f64::max)
}

fn sampler_fidelity() -> Check {
    let sets = [
        (1.0, 3.0, 1.5),
        (2.0, 4.0, 10.0),
        (0.7, 3.5, 5.0),
        (4.0, 10.0, 1.0),
        (0.6, 0.8, 1.0),
        (1.5, 1.0, 2.0),
    ];
    let mut notes = Vec::new();
    let mut ok = true;
    for (i, &(m, ms, gb)) in sets.iter().enumerate() {
        let p = FadingParams::new(m, ms, gb).unwrap();
        let xs = fading::sample(&p, SEED + i as u64, 1_000_000).unwrap();
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let ks = ks_distance(&p, xs);
        ok &= ks < 0.002;
        let mut note = format!("({m},{ms},{gb}) KS {ks:.2e}");
        if ms > 1.0 {
            let mu = fading::moment(&p, 1).unwrap();
            let z = (mean - mu).abs() / (var / n).sqrt();
            ok &= z <= 3.0;
            note += &format!(" mean {mean:.5}/{mu:.5} at {z:.2} se");
        }
        notes.push(note);
    }
    let detail = notes.join("; ");
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn pnsc_triangle() -> Check {
    let mut worst_quad: f64 = 0.0;
    let mut worst_z: f64 = 0.0;
    let mut worst_swap: f64 = 0.0;
    let mut worst_sym: f64 = 0.0;
    for s in standard_grid() {
        let closed = secrecy::pnsc_closed(&s).map_err(|e| format!("{}: {e}", describe(&s)))?;
        let quad = oracle::pnsc_quadrature(&s).map_err(|e| format!("{}: {e}", describe(&s)))?;
        let mc = oracle::mc_pnsc(&s, 1_000_000, SEED).unwrap();
        let back =
            secrecy::pnsc_closed(&s.swapped()).map_err(|e| format!("{}: {e}", describe(&s)))?;
        worst_quad = worst_quad.max(rel(closed.value, quad.value));
        worst_z = worst_z.max((closed.value - mc.mean).abs() / mc.stderr);
        worst_swap = worst_swap.max((closed.value + back.value - 1.0).abs());
        if s.main == s.eaves {
            worst_sym = worst_sym.max((closed.value - 0.5).abs());
        }
    }
    let detail = format!(
        "closed vs quadrature max rel {worst_quad:.2e} (1e-6); vs MC max {worst_z:.2} se (3); \
         symmetric |p - 0.5| {worst_sym:.1e} (1e-6); swap {worst_swap:.1e} (2e-6)"
    );
    if worst_quad <= 1e-6 && worst_z <= 3.0 && worst_sym <= 1e-6 && worst_swap <= 2e-6 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn asc_triangle() -> Check {
    let mut worst_quad: f64 = 0.0;
    let mut worst_z: f64 = 0.0;
    for s in standard_grid() {
        let closed = secrecy::asc_closed(&s).map_err(|e| format!("{}: {e}", describe(&s)))?;
        let quad = oracle::asc_quadrature(&s).map_err(|e| format!("{}: {e}", describe(&s)))?;
        let mc = oracle::mc_asc(&s, 10_000_000, SEED).unwrap();
        worst_quad = worst_quad.max(rel(closed.asc_nats, quad.asc()));
        worst_z = worst_z.max((closed.asc_nats - mc.mean).abs() / mc.stderr);
    }
    let unit = WiretapScenario::new(
        FadingParams::new(2.5, 1.0, 10.0).unwrap(),
        FadingParams::new(1.0, 1.0, 1.0).unwrap(),
    );
    let j3 = secrecy::j3(&unit).map_err(|e| e.to_string())?.value;
    let detail = format!(
        "closed vs quadrature max rel {worst_quad:.2e} (1e-4); vs MC max {worst_z:.2} se (3); j3 spot |{j3} - 1| = {:.1e} (1e-6)",
        (j3 - 1.0).abs()
    );
    if worst_quad <= 1e-4 && worst_z <= 3.0 && (j3 - 1.0).abs() <= 1e-6 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn asymptotic_convergence() -> Check {
    let mut notes = Vec::new();
    let mut ok = true;
    for [md, msd, me, mse] in oracle::GRID_SHAPES {
        let mut gaps = Vec::new();
        for db in [20.0, 30.0, 40.0] {
            let s = WiretapScenario::new(
                FadingParams::from_db(md, msd, db).unwrap(),
                FadingParams::new(me, mse, 1.0).unwrap(),
            );
            let exact = secrecy::asc_closed(&s).map_err(|e| format!("{}: {e}", describe(&s)))?;
            let asym = secrecy::asc_asymptotic(&s).map_err(|e| format!("{}: {e}", describe(&s)))?;
            gaps.push((asym.value - exact.asc_nats).abs() / exact.asc_nats);
        }
        let decreasing = gaps.windows(2).all(|w| w[1] < w[0]);
        ok &= decreasing && gaps[2] < 0.01;
        notes.push(format!(
            "({md},{msd},{me},{mse}) gaps {:.2e} {:.2e} {:.2e}",
            gaps[0], gaps[1], gaps[2]
        ));
    }
    let detail = notes.join("; ");
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// The near-origin J1 expansion as printed, for the record.
fn printed_near_origin_term() {
    let s = WiretapScenario::new(
        FadingParams::from_db(1.5, 1.0, 40.0).unwrap(),
        FadingParams::new(1.0, 1.0, 1.0).unwrap(),
    );
    let printed = secrecy::j1_asymptotic_printed(&s).map(|r| r.value);
    let j1 = secrecy::j1(&s).map(|r| r.value);
    println!("info: near-origin J1 expansion at m_D = 1.5, 40 dB: {printed:?}; exact J1 {j1:?}");
}

fn exponential_limit() -> Check {
    let mut notes = Vec::new();
    let mut ok = true;
    for r in [1.0, 4.0, 10.0] {
        let s = WiretapScenario::new(
            FadingParams::new(1.0, 200.0, r).unwrap(),
            FadingParams::new(1.0, 200.0, 1.0).unwrap(),
        );
        let p = secrecy::pnsc_closed(&s).map_err(|e| format!("ratio {r}: {e}"))?;
        let want = r / (r + 1.0);
        let d = (p.value - want).abs();
        ok &= d <= 1e-2;
        notes.push(format!("ratio {r}: {:.6} vs {want:.6}", p.value));
    }
    let detail = notes.join("; ");
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn sweep_csv(config: &Path) -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_fsec"))
        .arg("sweep")
        .arg("--config")
        .arg(config)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "{}: {}",
            config.display(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    String::from_utf8(out.stdout).map_err(|e| e.to_string())
}

/// Closed-form columns of every trace must be nondecreasing in SNR.
fn monotone_traces(csv: &str) -> Result<usize, String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().ok_or("empty output")?.split(',').collect();
    let col = |name: &str| header.iter().position(|h| *h == name);
    let vary = col("vary_value").ok_or("no vary_value column")?;
    let metrics: Vec<usize> = ["pnsc", "asc_nats"].iter().filter_map(|n| col(n)).collect();
    let mut last: Option<(String, Vec<Option<f64>>)> = None;
    let mut checked = 0;
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        let values: Vec<Option<f64>> = metrics.iter().map(|&i| cells[i].parse().ok()).collect();
        if let Some((trace, prev)) = &last {
            if trace == cells[vary] {
                for (a, b) in prev.iter().zip(&values) {
                    if let (Some(a), Some(b)) = (a, b) {
                        checked += 1;
                        if b < a {
                            return Err(format!("trace {trace}: {b} after {a} in `{line}`"));
                        }
                    }
                }
            }
        }
        last = Some((cells[vary].to_string(), values));
    }
    Ok(checked)
}

fn figure_shapes() -> Check {
    let configs = manifest_dir().join("configs");
    let golden = manifest_dir().join("tests").join("golden");
    let mut names: Vec<PathBuf> = std::fs::read_dir(&configs)
        .map_err(|e| e.to_string())?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| {
            p.file_name()
                .is_some_and(|n| n.to_string_lossy().starts_with("fig_"))
        })
        .collect();
    names.sort();
    if names.is_empty() {
        return Err("no shipped figure configs".into());
    }
    let mut pairs = 0;
    for cfg in &names {
        let first = sweep_csv(cfg)?;
        let second = sweep_csv(cfg)?;
        if first != second {
            return Err(format!("{}: two runs differ", cfg.display()));
        }
        let stem = cfg.file_stem().unwrap().to_string_lossy().to_string();
        let want = std::fs::read_to_string(golden.join(format!("{stem}.csv")))
            .map_err(|e| format!("golden snapshot for {stem}: {e}"))?;
        if want != first {
            return Err(format!("{stem}: output differs from golden snapshot"));
        }
        pairs += monotone_traces(&first).map_err(|e| format!("{stem}: {e}"))?;
    }
    Ok(format!(
        "{} configs byte-stable and equal to golden snapshots; {pairs} consecutive pairs nondecreasing",
        names.len()
    ))
}

fn main() {
    let mut all = true;
    all &= run(
        1,
        "distribution correctness",
        Some(Duration::from_secs(10)),
        distribution_correctness,
    );
    all &= run(
        2,
        "sampler fidelity",
        Some(Duration::from_secs(30)),
        sampler_fidelity,
    );
    all &= run(
        3,
        "PNSC triangle",
        Some(Duration::from_secs(120)),
        pnsc_triangle,
    );
    all &= run(
        4,
        "ASC triangle",
        Some(Duration::from_secs(600)),
        asc_triangle,
    );
    all &= run(5, "asymptotic convergence", None, asymptotic_convergence);
    printed_near_origin_term();
    all &= run(6, "exponential-fading limit", None, exponential_limit);
    all &= run(7, "figure-shape reproduction", None, figure_shapes);
    if !all {
        std::process::exit(1);
    }
}
