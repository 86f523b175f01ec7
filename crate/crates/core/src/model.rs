//! Emitter-array geometry and the site-basis coupling matrices.
//!
//! Units: the resonant wavelength is 1, so positions and spacings are in
//! wavelengths; `gamma0` sets the rate unit and the frame rotates at the
//! emitter frequency (the uniform diagonal is dropped).

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance used by the symmetry checks.
pub const SYMMETRY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub n_emitters: usize,
    pub j0: f64,
    /// Dimerization angle in radians.
    pub phi: f64,
    pub gamma0: f64,
    /// Emitter spacing in wavelengths.
    pub spacing: f64,
    /// Per-site position offsets in wavelengths.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offsets: Option<Vec<f64>>,
}

impl ModelConfig {
    pub fn new(n_emitters: usize, j0: f64, phi: f64, gamma0: f64, spacing: f64) -> Self {
        Self {
            n_emitters,
            j0,
            phi,
            gamma0,
            spacing,
            offsets: None,
        }
    }

    pub fn with_offsets(mut self, offsets: Vec<f64>) -> Self {
        self.offsets = Some(offsets);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.n_emitters < 2 {
            return bad(format!(
                "n_emitters must be at least 2, got {}",
                self.n_emitters
            ));
        }
        if !(self.gamma0.is_finite() && self.gamma0 > 0.0) {
            return bad(format!(
                "gamma0 must be positive and finite, got {}",
                self.gamma0
            ));
        }
        if !(self.j0.is_finite() && self.j0 >= 0.0) {
            return bad(format!(
                "j0 must be non-negative and finite, got {}",
                self.j0
            ));
        }
        if !self.phi.is_finite() {
            return bad(format!("phi must be finite, got {}", self.phi));
        }
        if !(self.spacing.is_finite() && self.spacing > 0.0) {
            return bad(format!(
                "spacing must be positive and finite, got {}",
                self.spacing
            ));
        }
        if let Some(offsets) = &self.offsets {
            if offsets.len() != self.n_emitters {
                return bad(format!(
                    "offsets has {} entries for {} emitters",
                    offsets.len(),
                    self.n_emitters
                ));
            }
            if let Some(i) = offsets.iter().position(|d| !d.is_finite()) {
                return bad(format!("offset {} is not finite", i + 1));
            }
            if let Some(i) = (1..self.n_emitters).find(|&i| self.gap(i - 1, i) <= 0.0) {
                return bad(format!(
                    "positions of emitters {} and {} are not increasing",
                    i,
                    i + 1
                ));
            }
        }
        Ok(())
    }

    pub fn has_offsets(&self) -> bool {
        self.offsets
            .as_ref()
            .is_some_and(|o| o.iter().any(|&d| d != 0.0))
    }

    fn offset(&self, i: usize) -> f64 {
        self.offsets.as_ref().map_or(0.0, |o| o[i])
    }

    /// Signed separation `x_j - x_i` in wavelengths (0-based indices).
    ///
    /// The lattice part is formed as an integer multiple of the spacing so that
    /// clean chains at rational spacings hit the kernel zeros exactly.
    pub fn gap(&self, i: usize, j: usize) -> f64 {
        let lattice = (j as f64 - i as f64) * self.spacing;
        lattice + (self.offset(j) - self.offset(i))
    }

    /// Positions `x_i = (i-1) d + delta_i`.
    pub fn positions(&self) -> Vec<f64> {
        (0..self.n_emitters)
            .map(|i| i as f64 * self.spacing + self.offset(i))
            .collect()
    }

    /// Intra-cell coupling `J0 (1 - cos phi)`.
    pub fn j1(&self) -> f64 {
        self.j0 * (1.0 - self.phi.cos())
    }

    /// Inter-cell coupling `J0 (1 + cos phi)`.
    pub fn j2(&self) -> f64 {
        self.j0 * (1.0 + self.phi.cos())
    }
}

/// `(sin 2 pi t, cos 2 pi t)`, exact at quarter turns.
pub fn sin_cos_turns(t: f64) -> (f64, f64) {
    let frac = t.rem_euclid(1.0);
    let quarters = frac * 4.0;
    if quarters == quarters.round() {
        return match quarters as i64 % 4 {
            0 => (0.0, 1.0),
            1 => (1.0, 0.0),
            2 => (0.0, -1.0),
            _ => (-1.0, 0.0),
        };
    }
    (2.0 * std::f64::consts::PI * frac).sin_cos()
}

/// Nearest-neighbour couplings `J_i = J0 [1 + (-1)^i cos phi]`, `i = 1..N-1`.
pub fn dimerized_couplings(config: &ModelConfig) -> Result<Vec<f64>> {
    config.validate()?;
    let c = config.phi.cos();
    Ok((1..config.n_emitters)
        .map(|i| {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            config.j0 * (1.0 + sign * c)
        })
        .collect())
}

/// Photon-mediated exchange `g_ij` and correlated decay `gamma_ij`.
pub fn pairwise_kernels(config: &ModelConfig) -> Result<(Array2<f64>, Array2<f64>)> {
    config.validate()?;
    let n = config.n_emitters;
    let gamma0 = config.gamma0;
    let mut g = Array2::zeros((n, n));
    let mut gamma = Array2::zeros((n, n));
    for i in 0..n {
        gamma[[i, i]] = gamma0;
        for j in (i + 1)..n {
            let dist = config.gap(i, j).abs();
            if dist == 0.0 {
                return Err(Error::CoincidentPositions { i: i + 1, j: j + 1 });
            }
            let (s, c) = sin_cos_turns(dist);
            let gij = 0.5 * gamma0 * s;
            let cij = gamma0 * c;
            g[[i, j]] = gij;
            g[[j, i]] = gij;
            gamma[[i, j]] = cij;
            gamma[[j, i]] = cij;
        }
    }
    Ok((g, gamma))
}

/// Site-basis coherent and dissipative couplings of one array.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingSet {
    /// `H_topo + H_ph` in the single-excitation sector.
    pub h: Array2<f64>,
    pub gamma: Array2<f64>,
    pub j_list: Vec<f64>,
}

impl CouplingSet {
    /// Wraps externally built matrices; both must be square, equal-sized and symmetric.
    pub fn from_matrices(h: Array2<f64>, gamma: Array2<f64>) -> Result<Self> {
        let n = h.nrows();
        for m in [&h, &gamma] {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: m.ncols().max(m.nrows()),
                });
            }
            if m != m.t() {
                return Err(Error::ShapeMismatch(
                    "coupling matrix is not symmetric".into(),
                ));
            }
        }
        let j_list = (1..n).map(|i| h[[i - 1, i]]).collect();
        Ok(Self { h, gamma, j_list })
    }

    pub fn n(&self) -> usize {
        self.h.nrows()
    }

    /// Rate scale used for tolerances: the largest diagonal decay, or 1.
    pub fn rate_scale(&self) -> f64 {
        let g = self
            .gamma
            .diag()
            .iter()
            .fold(0.0, |a: f64, &b| a.max(b.abs()));
        if g > 0.0 {
            g
        } else {
            1.0
        }
    }
}

pub fn assemble(config: &ModelConfig) -> Result<CouplingSet> {
    let j_list = dimerized_couplings(config)?;
    let (mut h, gamma) = pairwise_kernels(config)?;
    for (i, &j) in j_list.iter().enumerate() {
        let v = h[[i, i + 1]] + j;
        h[[i, i + 1]] = v;
        h[[i + 1, i]] = v;
    }
    Ok(CouplingSet { h, gamma, j_list })
}

fn max_abs(m: &Array2<f64>) -> f64 {
    m.iter().fold(0.0, |a: f64, &b| a.max(b.abs()))
}

/// `S h S = -h` for the sublattice sign `S = diag(+1, -1, +1, ...)`.
pub fn check_chiral(h: &Array2<f64>) -> bool {
    let tol = SYMMETRY_TOLERANCE * max_abs(h);
    h.indexed_iter()
        .all(|((i, j), &v)| (i + j) % 2 == 1 || v.abs() <= tol)
}

/// `gamma` couples only sites on the same sublattice.
pub fn check_parity(gamma: &Array2<f64>) -> bool {
    let tol = SYMMETRY_TOLERANCE * max_abs(gamma);
    gamma
        .indexed_iter()
        .all(|((i, j), &v)| (i + j) % 2 == 0 || v.abs() <= tol)
}
