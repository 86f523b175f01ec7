//! Two-band Bloch description of the array with ring-regularized photon couplings.
//!
//! The photon terms keep their explicit dependence on the number of emitters,
//! so every quantity here is a finite-N quantity evaluated on a continuous
//! quasi-momentum `k` in `[-pi, pi)`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{sin_cos_turns, ModelConfig};

pub const DEFAULT_GAP_TOLERANCE: f64 = 1e-8;
pub const DEFAULT_WINDING_SAMPLES: usize = 4096;
pub const WINDING_RESIDUE_TOLERANCE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochSample {
    pub k: f64,
    pub hx: f64,
    pub hy: f64,
    pub energy_plus: f64,
    pub energy_minus: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BandSummary {
    pub gap: f64,
    pub width: f64,
    pub critical_gamma: f64,
    /// `None` when the gap closes on the sampled zone.
    pub winding: Option<i32>,
}

/// Parameters of `h(k) = hx tau_x + hy tau_y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochParams {
    pub j1: f64,
    pub j2: f64,
    /// Nearest-neighbour photon exchange, `+gamma0/2` at d = 1/4 and `-gamma0/2` at d = 3/4.
    pub g0: f64,
    /// Unit cells, `N / 2`.
    pub cells: usize,
    /// Rate unit for tolerances.
    pub rate_unit: f64,
}

impl BlochParams {
    pub fn from_config(config: &ModelConfig) -> Result<Self> {
        config.validate()?;
        if !config.n_emitters.is_multiple_of(2) {
            return Err(Error::OddCellCount {
                n: config.n_emitters,
            });
        }
        let frac = config.spacing.rem_euclid(1.0);
        let chiral_spacing = [0.25, 0.75].iter().any(|&s| (frac - s).abs() < 1e-12);
        if !chiral_spacing || config.has_offsets() {
            return Err(Error::UnsupportedSpacing {
                spacing: config.spacing,
            });
        }
        let (s, _) = sin_cos_turns((frac * 4.0).round() / 4.0);
        Ok(Self {
            j1: config.j1(),
            j2: config.j2(),
            g0: 0.5 * config.gamma0 * s,
            cells: config.n_emitters / 2,
            rate_unit: config.gamma0,
        })
    }

    /// Bare SSH chain without the environment.
    pub fn ssh(j1: f64, j2: f64, cells: usize) -> Self {
        Self {
            j1,
            j2,
            g0: 0.0,
            cells,
            rate_unit: 1.0,
        }
    }

    /// The ring-regularized photon form factor `F(k)`.
    pub fn form_factor(&self, k: f64) -> f64 {
        let m = self.cells;
        let sum: f64 = (1..=m)
            .map(|j| {
                let sign = if j % 2 == 1 { 2.0 } else { -2.0 };
                sign * (j as f64 * k).sin()
            })
            .sum();
        sum - (m as f64 * k).sin()
    }

    pub fn components(&self, k: f64) -> (f64, f64) {
        let m = self.cells as f64;
        let hx = self.j1 + self.j2 * k.cos() + 0.5 * self.g0 * (1.0 + (m * k).cos());
        let hy = self.j2 * k.sin() + 0.5 * self.g0 * self.form_factor(k);
        (hx, hy)
    }

    pub fn sample(&self, k: f64) -> BlochSample {
        let (hx, hy) = self.components(k);
        let e = hx.hypot(hy);
        BlochSample {
            k,
            hx,
            hy,
            energy_plus: e,
            energy_minus: -e,
        }
    }

    /// `M` uniform samples `k = -pi + 2 pi m / M`.
    pub fn scan(&self, samples: usize) -> Vec<BlochSample> {
        (0..samples)
            .map(|m| self.sample(-PI + 2.0 * PI * m as f64 / samples as f64))
            .collect()
    }

    pub fn gap(&self) -> f64 {
        2.0 * (self.j1 - self.j2).abs()
    }

    pub fn width(&self) -> f64 {
        2.0 * (self.j1 + self.j2)
    }
}

pub fn bloch_components(config: &ModelConfig, k: f64) -> Result<(f64, f64)> {
    Ok(BlochParams::from_config(config)?.components(k))
}

#[derive(Debug, Clone, Copy)]
pub struct WindingOptions {
    pub samples: usize,
    /// Minimum `|h(k)|` in units of the rate unit.
    pub gap_tolerance: f64,
}

impl Default for WindingOptions {
    fn default() -> Self {
        Self {
            samples: DEFAULT_WINDING_SAMPLES,
            gap_tolerance: DEFAULT_GAP_TOLERANCE,
        }
    }
}

/// Winding of `theta_k = atan2(-hx, hy)` over the zone, from wrapped increments
/// summed in sample order.
pub fn winding_of(params: &BlochParams, opts: WindingOptions) -> Result<i32> {
    if opts.samples < 1000 {
        return Err(Error::InvalidConfig(format!(
            "winding needs at least 1000 samples, got {}",
            opts.samples
        )));
    }
    let samples = params.scan(opts.samples);
    let closest = samples
        .iter()
        .min_by(|a, b| a.energy_plus.total_cmp(&b.energy_plus))
        .expect("non-empty scan");
    if closest.energy_plus <= opts.gap_tolerance * params.rate_unit {
        return Err(Error::GapClosed {
            min_gap: closest.energy_plus,
            k: closest.k,
        });
    }
    let angle = |s: &BlochSample| (-s.hx).atan2(s.hy);
    let mut total = 0.0;
    for (a, b) in samples.iter().zip(samples.iter().cycle().skip(1)) {
        let mut step = angle(b) - angle(a);
        if step > PI {
            step -= 2.0 * PI;
        } else if step <= -PI {
            step += 2.0 * PI;
        }
        total += step;
    }
    let turns = total / (2.0 * PI);
    let w = turns.round();
    let residue = (turns - w).abs();
    if residue >= WINDING_RESIDUE_TOLERANCE {
        return Err(Error::NonIntegerWinding { residue });
    }
    Ok(w as i32)
}

pub fn winding_number(config: &ModelConfig, samples: usize) -> Result<i32> {
    winding_of(
        &BlochParams::from_config(config)?,
        WindingOptions {
            samples,
            ..WindingOptions::default()
        },
    )
}

pub fn band_summary(config: &ModelConfig) -> Result<BandSummary> {
    let params = BlochParams::from_config(config)?;
    let winding = match winding_of(&params, WindingOptions::default()) {
        Ok(w) => Some(w),
        Err(Error::GapClosed { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(BandSummary {
        gap: params.gap(),
        width: params.width(),
        critical_gamma: params.width(),
        winding,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DispersionFit {
    pub exponent: f64,
    /// `e_+` at the window centre.
    pub gap_at_center: f64,
    /// True when the band does not close at the centre.
    pub gapped: bool,
}

/// Least-squares slope of `ln e_+(k)` against `ln |k - center|` for
/// `0 < |k - center| <= half_width`.
pub fn dispersion_exponent(
    params: &BlochParams,
    center: f64,
    half_width: f64,
    samples_per_side: usize,
) -> Result<DispersionFit> {
    if !(half_width > 0.0) || samples_per_side < 2 {
        return Err(Error::DegenerateFit(format!(
            "window half-width {half_width} with {samples_per_side} samples per side"
        )));
    }
    let gap_at_center = params.sample(center).energy_plus;
    let mut xs = Vec::with_capacity(2 * samples_per_side);
    let mut ys = Vec::with_capacity(2 * samples_per_side);
    for m in 1..=samples_per_side {
        let dk = half_width * m as f64 / samples_per_side as f64;
        for k in [center - dk, center + dk] {
            let e = params.sample(k).energy_plus;
            if !(e > 0.0) || !e.is_finite() {
                return Err(Error::DegenerateFit(format!("e_+ vanishes at k = {k}")));
            }
            xs.push(dk.ln());
            ys.push(e.ln());
        }
    }
    let (slope, _, _) = crate::stats::linear_fit(&xs, &ys)?;
    Ok(DispersionFit {
        exponent: slope,
        gap_at_center,
        gapped: gap_at_center > DEFAULT_GAP_TOLERANCE * params.rate_unit,
    })
}
