//! Parameter sweeps: phase classification over grids and disorder ensembles.

mod disorder;
pub mod rng;

pub use disorder::{disorder_ensemble, DisorderStats, BOOTSTRAP_ROUNDS};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bloch::band_summary;
use crate::dynamics::edge_decay_rates;
use crate::error::{Error, Result};
use crate::model::{assemble, ModelConfig};
use crate::modes::{diagonalize, ipr};

/// Smallest `gamma0 / width` used when a grid starts at 0 (maps to very strong coupling).
pub const MIN_WIDTH_RATIO: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisName {
    J0OverGamma0,
    Phi,
    Spacing,
    /// `gamma0 / (2 (J1 + J2))`, varied through `J0` at fixed `gamma0`.
    Gamma0OverWidth,
    /// `J1 / J2 = tan^2(phi / 2)`, varied through `phi`.
    J1OverJ2,
}

impl AxisName {
    pub fn as_str(self) -> &'static str {
        match self {
            AxisName::J0OverGamma0 => "j0_over_gamma0",
            AxisName::Phi => "phi",
            AxisName::Spacing => "spacing",
            AxisName::Gamma0OverWidth => "gamma0_over_width",
            AxisName::J1OverJ2 => "j1_over_j2",
        }
    }

    pub fn apply(self, config: &mut ModelConfig, value: f64) -> Result<()> {
        match self {
            AxisName::J0OverGamma0 => config.j0 = value * config.gamma0,
            AxisName::Phi => config.phi = value,
            AxisName::Spacing => config.spacing = value,
            AxisName::Gamma0OverWidth => {
                if value < 0.0 {
                    return Err(Error::InvalidConfig(format!(
                        "gamma0_over_width must be >= 0, got {value}"
                    )));
                }
                config.j0 = config.gamma0 / (4.0 * value.max(MIN_WIDTH_RATIO));
            }
            AxisName::J1OverJ2 => {
                if value < 0.0 {
                    return Err(Error::InvalidConfig(format!(
                        "j1_over_j2 must be >= 0, got {value}"
                    )));
                }
                config.phi = 2.0 * value.sqrt().atan();
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    pub name: AxisName,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl AxisSpec {
    pub fn new(name: AxisName, start: f64, stop: f64, count: usize) -> Self {
        Self {
            name,
            start,
            stop,
            count,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 || !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "axis {} needs finite bounds and at least one point",
                self.name.as_str()
            )));
        }
        if self.count > 1 && self.start == self.stop {
            return Err(Error::InvalidConfig(format!(
                "axis {} is not strictly monotone",
                self.name.as_str()
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.stop
                } else {
                    self.start + step * i as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub base: ModelConfig,
    /// One or two axes; the last axis varies fastest.
    pub axes: Vec<AxisSpec>,
    pub seed: u64,
    pub samples: usize,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(Error::InvalidConfig(format!(
                "a sweep needs one or two axes, got {}",
                self.axes.len()
            )));
        }
        if self.axes.len() == 2 && self.axes[0].name == self.axes[1].name {
            return Err(Error::InvalidConfig("sweep axes must differ".into()));
        }
        self.axes.iter().try_for_each(AxisSpec::validate)
    }

    /// Grid coordinates in row-major order.
    pub fn cells(&self) -> Vec<Vec<f64>> {
        let mut out = vec![Vec::new()];
        for axis in &self.axes {
            let values = axis.values();
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    values.iter().map(move |&v| {
                        let mut p = prefix.clone();
                        p.push(v);
                        p
                    })
                })
                .collect();
        }
        out
    }

    pub fn config_at(&self, coords: &[f64]) -> Result<ModelConfig> {
        let mut cfg = self.base.clone();
        for (axis, &v) in self.axes.iter().zip(coords) {
            axis.name.apply(&mut cfg, v)?;
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PhaseLabel {
    #[serde(rename = "TP-I")]
    TopologicalWithEdge,
    #[serde(rename = "TP-II")]
    TopologicalWithoutEdge,
    #[serde(rename = "NTP")]
    Trivial,
}

impl PhaseLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            PhaseLabel::TopologicalWithEdge => "TP-I",
            PhaseLabel::TopologicalWithoutEdge => "TP-II",
            PhaseLabel::Trivial => "NTP",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhasePoint {
    /// `None` when the band gap closes or the Bloch form is unavailable.
    pub winding: Option<i32>,
    pub gap_closed: bool,
    pub edge_present: bool,
    /// Largest IPR among the midgap mode(s).
    pub edge_ipr: f64,
    /// Largest decay rate among the non-Hermitian partners of the midgap mode(s).
    pub gamma_tilde_0: f64,
    pub label: PhaseLabel,
    /// `J1/J2 - 1`.
    pub ssh_distance: f64,
    /// `gamma0/width - 1` with width `2 (J1 + J2)`.
    pub dtpt_distance: f64,
}

fn winding_available(config: &ModelConfig) -> bool {
    let frac = config.spacing.rem_euclid(1.0);
    config.n_emitters.is_multiple_of(2)
        && !config.has_offsets()
        && ((frac - 0.25).abs() < 1e-12 || (frac - 0.75).abs() < 1e-12)
}

/// Labels a single configuration.
///
/// Winding 1 with a localized midgap mode is TP-I, winding 1 without one is
/// TP-II, winding 0 is NTP. On a gap closing, or where no Bloch form exists,
/// the label falls back to the real-space data and the sign of `J1 - J2`.
pub fn classify_phase(config: &ModelConfig) -> Result<PhasePoint> {
    config.validate()?;
    let n = config.n_emitters;
    let (winding, gap_closed) = if winding_available(config) {
        let w = band_summary(config)?.winding;
        (w, w.is_none())
    } else {
        (None, false)
    };
    let couplings = assemble(config)?;
    let modes = diagonalize(&couplings)?;
    let midgap: Vec<usize> = if modes.chiral {
        modes.edge_indices.clone()
    } else {
        vec![modes.midgap_index()]
    };
    let vectors: Vec<Vec<f64>> = midgap.iter().map(|&i| modes.vector(i)).collect();
    let edge_ipr = vectors.iter().filter_map(|v| ipr(v)).fold(0.0, f64::max);
    let edge_present = edge_ipr > 2.0 / n as f64;
    let gamma_tilde_0 = edge_decay_rates(&couplings, &vectors)?
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);

    let ssh_topological = config.j1() < config.j2();
    let label = match winding {
        Some(1) if edge_present => PhaseLabel::TopologicalWithEdge,
        Some(0) => PhaseLabel::Trivial,
        Some(_) => PhaseLabel::TopologicalWithoutEdge,
        None if gap_closed || !ssh_topological => {
            if ssh_topological {
                PhaseLabel::TopologicalWithoutEdge
            } else {
                PhaseLabel::Trivial
            }
        }
        None if edge_present => PhaseLabel::TopologicalWithEdge,
        None => PhaseLabel::TopologicalWithoutEdge,
    };
    let width = 2.0 * (config.j1() + config.j2());
    Ok(PhasePoint {
        winding,
        gap_closed,
        edge_present,
        edge_ipr,
        gamma_tilde_0,
        label,
        ssh_distance: config.j1() / config.j2() - 1.0,
        dtpt_distance: config.gamma0 / width - 1.0,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseCell {
    pub coords: Vec<f64>,
    pub point: PhasePoint,
    /// A grid neighbour carries a different label.
    pub boundary: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseDiagram {
    pub axes: Vec<AxisName>,
    pub shape: Vec<usize>,
    pub cells: Vec<PhaseCell>,
}

pub fn phase_diagram(spec: &SweepSpec) -> Result<PhaseDiagram> {
    spec.validate()?;
    let coords = spec.cells();
    let points = coords
        .par_iter()
        .map(|c| classify_phase(&spec.config_at(c)?))
        .collect::<Result<Vec<_>>>()?;
    let shape: Vec<usize> = spec.axes.iter().map(|a| a.count).collect();
    let cols = *shape.last().unwrap_or(&1);
    let rows = points.len() / cols;
    let label = |r: usize, c: usize| points[r * cols + c].label;
    let cells = coords
        .into_iter()
        .enumerate()
        .map(|(i, coords)| {
            let (r, c) = (i / cols, i % cols);
            let me = label(r, c);
            let boundary = (c > 0 && label(r, c - 1) != me)
                || (c + 1 < cols && label(r, c + 1) != me)
                || (r > 0 && label(r - 1, c) != me)
                || (r + 1 < rows && label(r + 1, c) != me);
            PhaseCell {
                coords,
                point: points[i].clone(),
                boundary,
            }
        })
        .collect();
    Ok(PhaseDiagram {
        axes: spec.axes.iter().map(|a| a.name).collect(),
        shape,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn axis_grid_endpoints() {
        let a = AxisSpec::new(AxisName::Spacing, 0.1, 0.9, 5);
        let v = a.values();
        assert_eq!(v.len(), 5);
        assert_eq!(v[0], 0.1);
        assert_eq!(v[4], 0.9);
        assert!((v[2] - 0.5).abs() < 1e-15);
        assert!(AxisSpec::new(AxisName::Phi, 1.0, 1.0, 3)
            .validate()
            .is_err());
        assert!(AxisSpec::new(AxisName::Phi, 1.0, 2.0, 0)
            .validate()
            .is_err());
        assert!(AxisSpec::new(AxisName::Phi, 1.0, 1.0, 1).validate().is_ok());
    }

    #[test]
    fn axis_application() {
        let mut cfg = ModelConfig::new(6, 1.0, 0.0, 2.0, 0.75);
        AxisName::J1OverJ2.apply(&mut cfg, 0.5).unwrap();
        assert!((cfg.j1() / cfg.j2() - 0.5).abs() < 1e-14);
        AxisName::Gamma0OverWidth.apply(&mut cfg, 2.0).unwrap();
        assert!((cfg.gamma0 / (2.0 * (cfg.j1() + cfg.j2())) - 2.0).abs() < 1e-14);
        AxisName::Gamma0OverWidth.apply(&mut cfg, 0.0).unwrap();
        assert!(cfg.j0.is_finite() && cfg.j0 > 1e5);
        assert!(AxisName::J1OverJ2.apply(&mut cfg, -1.0).is_err());
    }

    #[test]
    fn axis_names_parse() {
        let a: AxisSpec =
            serde_json::from_str(r#"{"name":"gamma0_over_width","start":0,"stop":2,"count":3}"#)
                .unwrap();
        assert_eq!(a.name, AxisName::Gamma0OverWidth);
        assert!(serde_json::from_str::<AxisSpec>(
            r#"{"name":"temperature","start":0,"stop":2,"count":3}"#
        )
        .is_err());
    }

    #[test]
    fn labels_in_clear_regions() {
        // weak dissipation, J1 < J2
        let p = classify_phase(&ModelConfig::new(22, 1.0, 0.2 * PI, 1.0, 0.75)).unwrap();
        assert_eq!(p.winding, Some(1));
        assert!(p.edge_present);
        assert_eq!(p.label, PhaseLabel::TopologicalWithEdge);
        // weak dissipation, J1 > J2
        let p = classify_phase(&ModelConfig::new(22, 1.0, 0.8 * PI, 1.0, 0.75)).unwrap();
        assert_eq!(p.winding, Some(0));
        assert_eq!(p.label, PhaseLabel::Trivial);
    }

    #[test]
    fn dtpt_line_is_critical() {
        let p = classify_phase(&ModelConfig::new(22, 0.25, 0.2 * PI, 1.0, 0.75)).unwrap();
        assert!(p.gap_closed);
        assert_eq!(p.winding, None);
        assert!(p.dtpt_distance.abs() < 1e-14);
        assert_ne!(p.label, PhaseLabel::TopologicalWithEdge);
    }

    #[test]
    fn single_cell_diagram() {
        let spec = SweepSpec {
            base: ModelConfig::new(22, 1.0, 0.0, 1.0, 0.75),
            axes: vec![AxisSpec::new(AxisName::J1OverJ2, 0.3, 0.3, 1)],
            seed: 0,
            samples: 1,
        };
        let d = phase_diagram(&spec).unwrap();
        assert_eq!(d.cells.len(), 1);
        assert_eq!(d.cells[0].point.label, PhaseLabel::TopologicalWithEdge);
        assert!(!d.cells[0].boundary);
    }

    #[test]
    fn cells_are_row_major() {
        let spec = SweepSpec {
            base: ModelConfig::new(6, 1.0, 0.0, 1.0, 0.75),
            axes: vec![
                AxisSpec::new(AxisName::Phi, 0.0, 1.0, 2),
                AxisSpec::new(AxisName::Spacing, 0.25, 0.75, 3),
            ],
            seed: 0,
            samples: 1,
        };
        let cells = spec.cells();
        assert_eq!(cells.len(), 6);
        assert_eq!(cells[1], vec![0.0, 0.5]);
        assert_eq!(cells[3], vec![1.0, 0.25]);
    }
}
