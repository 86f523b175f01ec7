//! Command-line front end: config loading, flag handling and one function per
//! command. Each command writes its files into the output directory and
//! returns a one-line summary.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bloch::{band_summary, winding_number, BlochParams, DEFAULT_WINDING_SAMPLES};
use crate::dynamics::{
    edge_decay_rates, effective_hamiltonian, propagate, window_scan, EdgeTracking, ScanAxis,
    WindowOptions, DEFAULT_WINDOW_THRESHOLD,
};
use crate::error::{Error, Result};
use crate::model::{assemble, ModelConfig};
use crate::modes::{
    decay_matrix, diagonalize, edge_states, ipr, nu_scaling_fit, BulkMode, EdgeOptions,
};
use crate::output::{float, Meta, OutputDir};
use crate::sweep::{disorder_ensemble, phase_diagram, AxisName, AxisSpec, SweepSpec};

pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Site-basis coherent and dissipative couplings.
    Couplings,
    /// Bloch band scan and gap summary.
    Bands,
    /// Winding number of the Bloch vector.
    Winding,
    /// Real-space spectrum across a J0 grid.
    Spectrum,
    /// Edge-state probabilities.
    Edgestate,
    /// Dissipator in the eigenmode basis.
    Decay,
    /// Finite-size scaling of the edge-bulk coupling.
    NuFit,
    /// Edge decay across a spacing grid.
    Window,
    /// Population dynamics from the edge state.
    Dynamics,
    /// Phase labels over a one- or two-axis grid.
    PhaseDiagram,
    /// Edge decay under random position disorder.
    Disorder,
}

#[derive(Debug, Parser)]
#[command(
    name = "dtpt",
    version,
    about = "Dimerized emitter chains coupled to a waveguide"
)]
pub struct Cli {
    pub command: Command,
    pub config: PathBuf,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Grid as `name:start:stop:count`, comma-separated for two axes.
    #[arg(long)]
    pub grid: Option<String>,
    /// Dark-window threshold in units of gamma0.
    #[arg(long)]
    pub threshold: Option<f64>,
}

/// Optional `sweep` block of the config file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    #[serde(default)]
    pub axes: Vec<AxisSpec>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub threshold: Option<f64>,
    /// Disorder half-width in wavelengths.
    pub width: Option<f64>,
    /// Chain lengths for the scaling fit.
    pub sizes: Option<Vec<usize>>,
    /// Final time of the dynamics run, in units of `1/gamma0`.
    pub t_max: Option<f64>,
    pub time_steps: Option<usize>,
    /// Edge-mode identification for window scans.
    pub tracking: Option<EdgeTracking>,
}

#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub model: ModelConfig,
    pub sweep: SweepBlock,
    pub raw: Vec<u8>,
}

const MODEL_KEYS: [&str; 6] = ["n_emitters", "j0", "phi", "gamma0", "spacing", "offsets"];

fn line_of_key(text: &str, key: &str) -> usize {
    let quoted = format!("\"{key}\"");
    text.lines()
        .position(|l| l.contains(&quoted))
        .map_or(1, |i| i + 1)
}

fn anchored(path: &Path, line: usize, msg: impl std::fmt::Display) -> Error {
    Error::InvalidConfig(format!("{}:{line}: {msg}", path.display()))
}

/// Reads a config file; validation failures carry `path:line:` prefixes.
pub fn load_config(path: &Path) -> Result<LoadedConfig> {
    let raw = std::fs::read(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let text = String::from_utf8_lossy(&raw).into_owned();
    let mut value: Value =
        serde_json::from_str(&text).map_err(|e| anchored(path, e.line().max(1), e))?;
    let obj = value
        .as_object_mut()
        .ok_or_else(|| anchored(path, 1, "config must be a JSON object"))?;
    let sweep_value = obj.remove("sweep");
    let key_in = |msg: &str| -> usize {
        msg.split('`')
            .nth(1)
            .map(|k| line_of_key(&text, k))
            .unwrap_or(1)
    };
    let model: ModelConfig = serde_json::from_value(Value::Object(obj.clone())).map_err(|e| {
        let msg = e.to_string();
        anchored(path, key_in(&msg), msg)
    })?;
    if let Err(e) = model.validate() {
        let msg = e.to_string();
        let body = msg.trim_start_matches("invalid configuration: ");
        let line = MODEL_KEYS
            .iter()
            .find(|k| body.starts_with(*k))
            .map_or_else(
                || {
                    if body.contains("offset") || body.contains("position") {
                        line_of_key(&text, "offsets")
                    } else {
                        1
                    }
                },
                |k| line_of_key(&text, k),
            );
        return Err(anchored(path, line, body));
    }
    let sweep = match sweep_value {
        Some(v) => serde_json::from_value(v).map_err(|e| {
            let msg = e.to_string();
            let line = msg
                .split('`')
                .nth(1)
                .map(|k| line_of_key(&text, k))
                .unwrap_or_else(|| line_of_key(&text, "sweep"));
            anchored(path, line, format!("sweep: {msg}"))
        })?,
        None => SweepBlock::default(),
    };
    Ok(LoadedConfig { model, sweep, raw })
}

/// Parses `name:start:stop:count[,name:start:stop:count]`.
pub fn parse_grid(spec: &str) -> Result<Vec<AxisSpec>> {
    spec.split(',')
        .map(|part| {
            let fields: Vec<&str> = part.trim().split(':').collect();
            let bad = || {
                Error::InvalidConfig(format!(
                    "--grid: cannot parse `{part}` as name:start:stop:count"
                ))
            };
            if fields.len() != 4 {
                return Err(bad());
            }
            let name: AxisName = serde_json::from_value(Value::String(fields[0].to_string()))
                .map_err(|_| {
                    Error::InvalidConfig(format!("--grid: unknown axis `{}`", fields[0]))
                })?;
            let axis = AxisSpec::new(
                name,
                fields[1].parse().map_err(|_| bad())?,
                fields[2].parse().map_err(|_| bad())?,
                fields[3].parse().map_err(|_| bad())?,
            );
            axis.validate()?;
            Ok(axis)
        })
        .collect()
}

struct Context {
    model: ModelConfig,
    sweep: SweepBlock,
    axes: Vec<AxisSpec>,
    seed: u64,
    samples: Option<usize>,
    threshold: f64,
    out: OutputDir,
}

impl Context {
    fn axis_or(&self, default: AxisSpec) -> AxisSpec {
        self.axes.first().cloned().unwrap_or(default)
    }
}

fn column_label(name: AxisName) -> &'static str {
    match name {
        AxisName::J0OverGamma0 => "J0_over_gamma0",
        other => other.as_str(),
    }
}

pub fn run(cli: &Cli) -> Result<String> {
    let loaded = load_config(&cli.config)?;
    let axes = match &cli.grid {
        Some(g) => parse_grid(g)?,
        None => {
            loaded.sweep.axes.iter().try_for_each(AxisSpec::validate)?;
            loaded.sweep.axes.clone()
        }
    };
    let seed = cli.seed.or(loaded.sweep.seed).unwrap_or(0);
    let threshold = cli
        .threshold
        .or(loaded.sweep.threshold)
        .unwrap_or(DEFAULT_WINDOW_THRESHOLD);
    if !(threshold.is_finite() && threshold > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "threshold must be positive, got {threshold}"
        )));
    }
    let out = OutputDir::create(&cli.out, Meta::new(seed, &loaded.raw))?;
    let mut ctx = Context {
        samples: cli.samples.or(loaded.sweep.samples),
        model: loaded.model,
        sweep: loaded.sweep,
        axes,
        seed,
        threshold,
        out,
    };
    match cli.command {
        Command::Couplings => couplings(&mut ctx),
        Command::Bands => bands(&mut ctx),
        Command::Winding => winding(&mut ctx),
        Command::Spectrum => spectrum(&mut ctx),
        Command::Edgestate => edgestate(&mut ctx),
        Command::Decay => decay(&mut ctx),
        Command::NuFit => nu_fit(&mut ctx),
        Command::Window => window(&mut ctx),
        Command::Dynamics => dynamics(&mut ctx),
        Command::PhaseDiagram => phase(&mut ctx),
        Command::Disorder => disorder(&mut ctx),
    }
}

/// Runs the CLI and maps errors to exit codes.
pub fn main_with(cli: Cli) -> ExitCode {
    match run(&cli) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() {
                EXIT_VALIDATION
            } else {
                EXIT_NUMERICAL
            })
        }
    }
}

fn couplings(ctx: &mut Context) -> Result<String> {
    let cs = assemble(&ctx.model)?;
    let n = cs.n();
    let rows = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| {
            vec![
                (i + 1).to_string(),
                (j + 1).to_string(),
                float(cs.h[[i, j]]),
                float(cs.gamma[[i, j]]),
            ]
        });
    ctx.out
        .csv("couplings.csv", &["i", "j", "h", "gamma"], rows)?;
    Ok(format!("wrote {} coupling pairs", n * (n - 1) / 2))
}

fn bands(ctx: &mut Context) -> Result<String> {
    let params = BlochParams::from_config(&ctx.model)?;
    let samples = ctx.samples.unwrap_or(512);
    if samples == 0 {
        return Err(Error::InvalidConfig("--samples must be positive".into()));
    }
    let rows = params.scan(samples).into_iter().map(|s| {
        vec![
            float(s.k),
            float(s.hx),
            float(s.hy),
            float(s.energy_plus),
            float(s.energy_minus),
        ]
    });
    ctx.out
        .csv("bands.csv", &["k", "hx", "hy", "e_plus", "e_minus"], rows)?;
    let summary = band_summary(&ctx.model)?;
    ctx.out.json("bands.json", &summary)?;
    Ok(format!(
        "gap={} width={} winding={}",
        summary.gap,
        summary.width,
        summary
            .winding
            .map_or("undefined".into(), |w| w.to_string())
    ))
}

fn winding(ctx: &mut Context) -> Result<String> {
    let samples = ctx.samples.unwrap_or(DEFAULT_WINDING_SAMPLES);
    let w = winding_number(&ctx.model, samples)?;
    let summary = band_summary(&ctx.model)?;
    ctx.out.json(
        "winding.json",
        &json!({ "winding": w, "samples": samples, "gap": summary.gap, "width": summary.width }),
    )?;
    Ok(format!("W={w}"))
}

fn spectrum(ctx: &mut Context) -> Result<String> {
    let axis = ctx.axis_or(AxisSpec::new(AxisName::J0OverGamma0, 0.05, 1.0, 191));
    let label = column_label(axis.name);
    let mut spectrum_rows = Vec::new();
    let mut edge_rows = Vec::new();
    for v in axis.values() {
        let mut cfg = ctx.model.clone();
        axis.name.apply(&mut cfg, v)?;
        let cs = assemble(&cfg)?;
        let modes = diagonalize(&cs)?;
        for m in 0..modes.n() {
            spectrum_rows.push(vec![
                float(v),
                modes.label(m).to_string(),
                float(modes.energies[m]),
            ]);
        }
        let psi = modes.vector(modes.midgap_index());
        let gv = cs.gamma.dot(&ndarray::Array1::from(psi.clone()));
        let g00: f64 = psi.iter().zip(gv.iter()).map(|(a, b)| a * b).sum();
        edge_rows.push(vec![
            float(v),
            float(ipr(&psi).unwrap_or(f64::NAN)),
            float(g00),
        ]);
    }
    let points = edge_rows.len();
    ctx.out.csv(
        "spectrum.csv",
        &[label, "mode_index", "energy"],
        spectrum_rows,
    )?;
    ctx.out
        .csv("edge_scan.csv", &[label, "edge_ipr", "Gamma00"], edge_rows)?;
    Ok(format!("scanned {points} values of {label}"))
}

fn edgestate(ctx: &mut Context) -> Result<String> {
    let cs = assemble(&ctx.model)?;
    let modes = diagonalize(&cs)?;
    let edges = edge_states(&modes, EdgeOptions::default())?;
    let n = cs.n();
    let vectors: Vec<Vec<f64>> = edges.iter().map(|e| e.amplitudes.clone()).collect();
    let rates = edge_decay_rates(&cs, &vectors)?;
    let decay = decay_matrix(&modes, &cs.gamma)?;
    ctx.out.csv(
        "edge.csv",
        &["site", "prob"],
        (0..n).map(|i| vec![(i + 1).to_string(), float(edges[0].probabilities[i])]),
    )?;
    if edges.len() == 2 {
        ctx.out.csv(
            "edge_pair.csv",
            &["site", "prob_a", "prob_b"],
            (0..n).map(|i| {
                vec![
                    (i + 1).to_string(),
                    float(edges[0].probabilities[i]),
                    float(edges[1].probabilities[i]),
                ]
            }),
        )?;
    }
    let summary: Vec<Value> = edges
        .iter()
        .zip(&rates)
        .map(|(e, r)| {
            json!({
                "mode_index": modes.label(e.index),
                "energy": e.energy,
                "ipr": ipr(&e.amplitudes),
                "gamma_00": decay.entry(e.index, e.index),
                "gamma_tilde": r,
            })
        })
        .collect();
    ctx.out.json("edge.json", &summary)?;
    Ok(format!(
        "edge IPR={} Gamma00={}",
        ipr(&edges[0].amplitudes).unwrap_or(f64::NAN),
        decay.entry(edges[0].index, edges[0].index)
    ))
}

fn decay(ctx: &mut Context) -> Result<String> {
    let cs = assemble(&ctx.model)?;
    let modes = diagonalize(&cs)?;
    let decay = decay_matrix(&modes, &cs.gamma)?;
    let n = cs.n();
    let rows = (0..n)
        .flat_map(|m| (0..n).map(move |k| (m, k)))
        .map(|(m, k)| {
            vec![
                modes.label(m).to_string(),
                modes.label(k).to_string(),
                float(decay.entry(m, k)),
            ]
        });
    ctx.out.csv("decay.csv", &["m", "n", "gamma_mn"], rows)?;
    let edge = modes.midgap_index();
    let max_bulk = (0..n)
        .filter(|&m| m != edge)
        .map(|m| decay.entry(m, edge).abs())
        .fold(0.0, f64::max);
    ctx.out.json(
        "decay.json",
        &json!({
            "gamma_00": decay.entry(edge, edge),
            "max_abs_gamma_m0": max_bulk,
            "trace": decay.trace(),
        }),
    )?;
    Ok(format!(
        "Gamma00={} max|Gamma_m0|={}",
        decay.entry(edge, edge),
        max_bulk
    ))
}

fn nu_fit(ctx: &mut Context) -> Result<String> {
    let sizes = ctx
        .sweep
        .sizes
        .clone()
        .unwrap_or_else(|| (17..=49).step_by(4).collect());
    let fit = nu_scaling_fit(&ctx.model, BulkMode::SECOND_OUTERMOST, &sizes)?;
    ctx.out.csv(
        "nu.csv",
        &["N", "ln_abs_gamma_m0"],
        fit.points
            .iter()
            .map(|&(n, y)| vec![n.to_string(), float(y)]),
    )?;
    ctx.out.json("nu.json", &fit)?;
    Ok(format!("nu={}", fit.nu))
}

fn window(ctx: &mut Context) -> Result<String> {
    let axis = ctx.axis_or(AxisSpec::new(AxisName::Spacing, 0.005, 1.0, 200));
    let (scan_axis, center) = match axis.name {
        AxisName::Spacing => (ScanAxis::Spacing, 0.75),
        AxisName::J0OverGamma0 => (ScanAxis::Coupling, ctx.model.j0 / ctx.model.gamma0),
        other => {
            return Err(Error::InvalidConfig(format!(
                "window scans spacing or j0_over_gamma0, not {}",
                other.as_str()
            )))
        }
    };
    let scan = window_scan(
        &ctx.model,
        &axis.values(),
        WindowOptions {
            axis: scan_axis,
            threshold: ctx.threshold,
            center,
            tracking: ctx.sweep.tracking.unwrap_or(EdgeTracking::PerPoint),
        },
    )?;
    ctx.out.csv(
        "window.csv",
        &[scan_axis.column_name(), "Gamma00", "Gamma_tilde0"],
        scan.points
            .iter()
            .map(|p| vec![float(p.value), float(p.gamma_00), float(p.gamma_tilde_0)]),
    )?;
    ctx.out.json(
        "window.json",
        &json!({
            "window_center": scan.window_center,
            "window_width": scan.window_width,
            "threshold": scan.threshold,
        }),
    )?;
    Ok(format!("window_width={}", scan.window_width))
}

fn dynamics(ctx: &mut Context) -> Result<String> {
    let cs = assemble(&ctx.model)?;
    let modes = diagonalize(&cs)?;
    let psi: Vec<Complex64> = modes
        .vector(modes.midgap_index())
        .into_iter()
        .map(|x| Complex64::new(x, 0.0))
        .collect();
    let t_max = ctx.sweep.t_max.unwrap_or(100.0) / ctx.model.gamma0;
    let steps = ctx.sweep.time_steps.unwrap_or(200);
    if !(t_max >= 0.0 && t_max.is_finite()) || steps == 0 {
        return Err(Error::InvalidConfig(
            "t_max must be >= 0 and time_steps positive".into(),
        ));
    }
    let times: Vec<f64> = (0..=steps)
        .map(|i| t_max * i as f64 / steps as f64)
        .collect();
    let traj = propagate(&effective_hamiltonian(&cs), &psi, &times)?;
    let n = cs.n();
    let mut header = vec!["t".to_string()];
    header.extend((1..=n).map(|i| format!("p_{i}")));
    header.push("p_ground".into());
    header.push("norm".into());
    let rows = (0..times.len()).map(|r| {
        let mut row = vec![float(traj.times[r])];
        row.extend((0..n).map(|i| float(traj.site_populations[[r, i]])));
        row.push(float(traj.ground_population[r]));
        row.push(float(traj.norm[r]));
        row
    });
    ctx.out.csv("trajectory.csv", &header, rows)?;
    Ok(format!(
        "final excited population={}",
        traj.norm[times.len() - 1]
    ))
}

fn phase(ctx: &mut Context) -> Result<String> {
    if ctx.axes.is_empty() {
        return Err(Error::InvalidConfig(
            "phase-diagram needs axes from --grid or the sweep block".into(),
        ));
    }
    let spec = SweepSpec {
        base: ctx.model.clone(),
        axes: ctx.axes.clone(),
        seed: ctx.seed,
        samples: ctx.samples.unwrap_or(1),
    };
    let diagram = phase_diagram(&spec)?;
    let mut header: Vec<String> = diagram
        .axes
        .iter()
        .map(|a| a.as_str().to_string())
        .collect();
    header.extend(
        [
            "winding",
            "gap_closed",
            "edge_present",
            "edge_ipr",
            "gamma_tilde_0",
            "label",
            "boundary",
        ]
        .map(String::from),
    );
    let rows = diagram.cells.iter().map(|c| {
        let mut row: Vec<String> = c.coords.iter().map(|&x| float(x)).collect();
        let p = &c.point;
        row.push(p.winding.map_or("NA".into(), |w| w.to_string()));
        row.push(p.gap_closed.to_string());
        row.push(p.edge_present.to_string());
        row.push(float(p.edge_ipr));
        row.push(float(p.gamma_tilde_0));
        row.push(p.label.as_str().into());
        row.push(c.boundary.to_string());
        row
    });
    ctx.out.csv("phase.csv", &header, rows)?;
    let count = |l: &str| {
        diagram
            .cells
            .iter()
            .filter(|c| c.point.label.as_str() == l)
            .count()
    };
    let counts = json!({ "TP-I": count("TP-I"), "TP-II": count("TP-II"), "NTP": count("NTP") });
    ctx.out.json(
        "phase.json",
        &json!({
            "shape": diagram.shape,
            "counts": counts,
            "boundary_cells": diagram.cells.iter().filter(|c| c.boundary).count(),
            "labels": "TP-I: winding 1 with a localized midgap mode; TP-II: winding 1 without one, or J1 < J2 on a gap closing; NTP: winding 0",
        }),
    )?;
    Ok(format!(
        "TP-I={} TP-II={} NTP={}",
        count("TP-I"),
        count("TP-II"),
        count("NTP")
    ))
}

fn disorder(ctx: &mut Context) -> Result<String> {
    let width = ctx.sweep.width.unwrap_or(0.01);
    let samples = ctx.samples.unwrap_or(100);
    let stats = disorder_ensemble(&ctx.model, width, samples, ctx.seed)?;
    ctx.out.csv(
        "disorder.csv",
        &["sample", "gamma_tilde_0"],
        stats
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| vec![i.to_string(), float(*v)]),
    )?;
    ctx.out.json(
        "disorder.json",
        &json!({
            "width": stats.width,
            "samples": samples,
            "seed": stats.seed,
            "clean": stats.clean,
            "mean": stats.mean,
            "median": stats.median,
            "p5": stats.p5,
            "p95": stats.p95,
            "median_se": stats.median_se,
            "resamples": stats.resamples,
        }),
    )?;
    Ok(format!(
        "median={} p5={} p95={}",
        stats.median, stats.p5, stats.p95
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, text: &str) -> PathBuf {
        let p = dir.join("config.json");
        std::fs::write(&p, text).unwrap();
        p
    }

    #[test]
    fn grid_parsing() {
        let axes = parse_grid("gamma0_over_width:0:2:21,j1_over_j2:0.2:2:21").unwrap();
        assert_eq!(axes.len(), 2);
        assert_eq!(axes[1].name, AxisName::J1OverJ2);
        assert_eq!(axes[0].count, 21);
        assert!(parse_grid("temperature:0:1:3").is_err());
        assert!(parse_grid("phi:0:1").is_err());
        assert!(parse_grid("phi:1:1:3").is_err());
    }

    #[test]
    fn unknown_key_is_line_anchored() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(
            dir.path(),
            "{\n  \"n_emitters\": 6,\n  \"j0\": 0.3,\n  \"phi\": 0.3,\n  \"gamma0\": 1.0,\n  \"spacing\": 0.75,\n  \"colour\": 3\n}\n",
        );
        let err = load_config(&p).unwrap_err();
        assert!(err.is_validation());
        assert!(err.to_string().contains("config.json:7:"), "{err}");
    }

    #[test]
    fn invalid_value_is_line_anchored() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(
            dir.path(),
            "{\n  \"n_emitters\": 6,\n  \"j0\": 0.3,\n  \"phi\": 0.3,\n  \"gamma0\": -1.0,\n  \"spacing\": 0.75\n}\n",
        );
        let err = load_config(&p).unwrap_err();
        assert!(err.to_string().contains("config.json:5:"), "{err}");
    }

    #[test]
    fn malformed_json_reports_line() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "{\n  \"n_emitters\": 6,\n  \"j0\": ,\n}\n");
        let err = load_config(&p).unwrap_err();
        assert!(err.to_string().contains("config.json:3:"), "{err}");
    }

    #[test]
    fn sweep_block_is_parsed() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(
            dir.path(),
            r#"{"n_emitters": 6, "j0": 0.3, "phi": 0.3, "gamma0": 1.0, "spacing": 0.75,
               "sweep": {"axes": [{"name": "phi", "start": 0, "stop": 1, "count": 3}], "seed": 9, "width": 0.02}}"#,
        );
        let c = load_config(&p).unwrap();
        assert_eq!(c.sweep.seed, Some(9));
        assert_eq!(c.sweep.axes.len(), 1);
        assert_eq!(c.model.n_emitters, 6);
        let bad = write(
            dir.path(),
            r#"{"n_emitters": 6, "j0": 0.3, "phi": 0.3, "gamma0": 1.0, "spacing": 0.75, "sweep": {"sead": 1}}"#,
        );
        assert!(load_config(&bad).is_err());
    }
}
