//! Non-Hermitian single-excitation dynamics: effective Hamiltonian,
//! biorthogonal modes, dark-window scans and time propagation.

mod lindblad;

pub use lindblad::{lindblad_oracle, OracleOptions};

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{complex_eigen, expm};
use crate::model::{assemble, CouplingSet, ModelConfig};
use crate::modes::{diagonalize, ModeSet};

/// Above this biorthogonal conditioning `propagate` switches to a matrix exponential.
pub const EXPANSION_CONDITION_LIMIT: f64 = 1e8;
pub const DEFAULT_WINDOW_THRESHOLD: f64 = 1e-6;

/// `h - (i/2) gamma`.
pub fn effective_hamiltonian(couplings: &CouplingSet) -> Array2<Complex64> {
    let mut out = Array2::zeros(couplings.h.raw_dim());
    ndarray::Zip::from(&mut out)
        .and(&couplings.h)
        .and(&couplings.gamma)
        .for_each(|z, &h, &g| *z = Complex64::new(h, -0.5 * g));
    out
}

#[derive(Debug, Clone)]
pub struct ComplexModeSet {
    /// `E_j - i Gamma_j`, sorted by real then imaginary part.
    pub eigenvalues: Array1<Complex64>,
    /// Unit-norm right eigenvectors as columns.
    pub right: Array2<Complex64>,
    /// Left eigenvectors with `left^H right = 1`.
    pub left: Array2<Complex64>,
    /// Largest left-vector norm; 1 for normal matrices.
    pub condition: f64,
}

impl ComplexModeSet {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `Gamma_j = -Im lambda_j`.
    pub fn decay_rate(&self, j: usize) -> f64 {
        -self.eigenvalues[j].im
    }

    pub fn decay_rates(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|z| -z.im).collect()
    }

    /// `|<R_j|reference>|` with `reference` normalized.
    pub fn overlap(&self, j: usize, reference: &[Complex64]) -> f64 {
        let norm = reference.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        self.right
            .column(j)
            .iter()
            .zip(reference)
            .map(|(r, x)| r.conj() * x)
            .sum::<Complex64>()
            .norm()
            / norm
    }

    /// Mode with maximal overlap with `reference`.
    pub fn best_match(&self, reference: &[Complex64]) -> usize {
        (0..self.n())
            .max_by(|&a, &b| {
                self.overlap(a, reference)
                    .total_cmp(&self.overlap(b, reference))
                    .then(b.cmp(&a))
            })
            .unwrap_or(0)
    }

    /// Mode with maximal overlap with a real state such as a Hermitian edge mode.
    pub fn edge_index(&self, reference: &[f64]) -> usize {
        let r: Vec<Complex64> = reference.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        self.best_match(&r)
    }

    pub fn right_vector(&self, j: usize) -> Vec<Complex64> {
        self.right.column(j).to_vec()
    }
}

pub fn complex_diagonalize(h_eff: &Array2<Complex64>) -> Result<ComplexModeSet> {
    let eig = complex_eigen(h_eff)?;
    Ok(ComplexModeSet {
        eigenvalues: eig.values,
        right: eig.right,
        left: eig.left,
        condition: eig.condition,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanAxis {
    /// Emitter spacing in wavelengths.
    Spacing,
    /// `J0 / gamma0`.
    Coupling,
}

impl ScanAxis {
    pub fn column_name(self) -> &'static str {
        match self {
            ScanAxis::Spacing => "d_over_lambda0",
            ScanAxis::Coupling => "j0_over_gamma0",
        }
    }

    fn apply(self, template: &ModelConfig, value: f64) -> ModelConfig {
        let mut cfg = template.clone();
        match self {
            ScanAxis::Spacing => cfg.spacing = value,
            ScanAxis::Coupling => cfg.j0 = value * template.gamma0,
        }
        cfg
    }
}

#[derive(Debug, Clone, Copy)]
pub struct WindowOptions {
    pub axis: ScanAxis,
    /// In units of `gamma0`.
    pub threshold: f64,
    /// The window is the sub-threshold run containing the grid point nearest this value.
    pub center: f64,
    pub tracking: EdgeTracking,
}

/// How the edge mode is picked at each grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeTracking {
    /// The Hermitian midgap mode of that point and its best non-Hermitian match.
    PerPoint,
    /// Follow the mode outward from the centre by overlap with the neighbouring point.
    Continuity,
}

impl Default for WindowOptions {
    fn default() -> Self {
        Self {
            axis: ScanAxis::Spacing,
            threshold: DEFAULT_WINDOW_THRESHOLD,
            center: 0.75,
            tracking: EdgeTracking::PerPoint,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowPoint {
    pub value: f64,
    /// `<psi_0| gamma |psi_0>` of the Hermitian edge mode.
    pub gamma_00: f64,
    /// Decay rate of the tracked non-Hermitian edge mode.
    pub gamma_tilde_0: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindowScan {
    pub axis: ScanAxis,
    pub points: Vec<WindowPoint>,
    pub threshold: f64,
    /// Midpoint of the window, or `None` when the centre point is above threshold.
    pub window_center: Option<f64>,
    /// Measure of the window, each grid point owning half the gap to its neighbours.
    pub window_width: f64,
}

struct ScanSample {
    hermitian: ModeSet,
    gamma: Array2<f64>,
    complex: ComplexModeSet,
}

fn real_overlap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>().abs()
}

fn best_real_match(modes: &ModeSet, reference: &[f64]) -> usize {
    (0..modes.n())
        .max_by(|&a, &b| {
            real_overlap(&modes.vector(a), reference)
                .total_cmp(&real_overlap(&modes.vector(b), reference))
                .then(b.cmp(&a))
        })
        .unwrap_or(0)
}

/// Edge decay across a one-parameter family of chains.
///
/// Each point is diagonalized independently. With per-point tracking the edge
/// mode is the Hermitian midgap mode of that point and its best non-Hermitian
/// match; with continuity tracking it is seeded at the point nearest
/// `opts.center` and followed outward by overlap with the neighbouring point.
pub fn window_scan(
    template: &ModelConfig,
    grid: &[f64],
    opts: WindowOptions,
) -> Result<WindowScan> {
    if grid.is_empty() {
        return Err(Error::InvalidConfig("empty scan grid".into()));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidConfig(
            "scan grid must be strictly increasing".into(),
        ));
    }
    if opts.axis == ScanAxis::Spacing && grid.iter().any(|&d| !(d > 0.0 && d <= 1.0)) {
        return Err(Error::InvalidConfig(
            "spacing grid must lie in (0, 1]".into(),
        ));
    }
    let samples = grid
        .par_iter()
        .map(|&value| {
            let couplings = assemble(&opts.axis.apply(template, value))?;
            let hermitian = diagonalize(&couplings)?;
            let complex = complex_diagonalize(&effective_hamiltonian(&couplings))?;
            Ok(ScanSample {
                hermitian,
                gamma: couplings.gamma,
                complex,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let seed = (0..grid.len())
        .min_by(|&a, &b| {
            (grid[a] - opts.center)
                .abs()
                .total_cmp(&(grid[b] - opts.center).abs())
        })
        .unwrap_or(0);
    let (herm_idx, cplx_idx) = match opts.tracking {
        EdgeTracking::PerPoint => samples
            .iter()
            .map(|s| {
                let h = s.hermitian.midgap_index();
                (h, s.complex.edge_index(&s.hermitian.vector(h)))
            })
            .unzip(),
        EdgeTracking::Continuity => {
            let mut herm = vec![0usize; grid.len()];
            let mut cplx = vec![0usize; grid.len()];
            herm[seed] = samples[seed].hermitian.midgap_index();
            cplx[seed] = samples[seed]
                .complex
                .edge_index(&samples[seed].hermitian.vector(herm[seed]));
            let order = (seed + 1..grid.len())
                .map(|i| (i, i - 1))
                .chain((0..seed).rev().map(|i| (i, i + 1)));
            for (i, prev) in order {
                let prev_herm = samples[prev].hermitian.vector(herm[prev]);
                herm[i] = best_real_match(&samples[i].hermitian, &prev_herm);
                let prev_cplx = samples[prev].complex.right_vector(cplx[prev]);
                cplx[i] = samples[i].complex.best_match(&prev_cplx);
            }
            (herm, cplx)
        }
    };

    let points: Vec<WindowPoint> = samples
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let v = s.hermitian.vector(herm_idx[i]);
            let gv = s.gamma.dot(&Array1::from(v.clone()));
            WindowPoint {
                value: grid[i],
                gamma_00: v.iter().zip(gv.iter()).map(|(a, b)| a * b).sum(),
                gamma_tilde_0: s.complex.decay_rate(cplx_idx[i]),
            }
        })
        .collect();

    let limit = opts.threshold * template.gamma0;
    let below = |i: usize| points[i].gamma_tilde_0 < limit;
    let (window_center, window_width) = if below(seed) {
        let mut lo = seed;
        while lo > 0 && below(lo - 1) {
            lo -= 1;
        }
        let mut hi = seed;
        while hi + 1 < grid.len() && below(hi + 1) {
            hi += 1;
        }
        let left = if lo > 0 {
            0.5 * (grid[lo - 1] + grid[lo])
        } else {
            grid[lo]
        };
        let right = if hi + 1 < grid.len() {
            0.5 * (grid[hi] + grid[hi + 1])
        } else {
            grid[hi]
        };
        (Some(0.5 * (grid[lo] + grid[hi])), right - left)
    } else {
        (None, 0.0)
    };
    Ok(WindowScan {
        axis: opts.axis,
        points,
        threshold: opts.threshold,
        window_center,
        window_width,
    })
}

/// Decay rates of the non-Hermitian modes that best match each Hermitian edge mode.
pub fn edge_decay_rates(couplings: &CouplingSet, edge_vectors: &[Vec<f64>]) -> Result<Vec<f64>> {
    let complex = complex_diagonalize(&effective_hamiltonian(couplings))?;
    let mut taken = Vec::new();
    let mut rates = Vec::new();
    for v in edge_vectors {
        let r: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let j = (0..complex.n())
            .filter(|j| !taken.contains(j))
            .max_by(|&a, &b| complex.overlap(a, &r).total_cmp(&complex.overlap(b, &r)))
            .unwrap_or(0);
        taken.push(j);
        rates.push(complex.decay_rate(j));
    }
    Ok(rates)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// Row per time, column per emitter.
    pub site_populations: Array2<f64>,
    pub ground_population: Vec<f64>,
    /// Total excited population per time.
    pub norm: Vec<f64>,
}

impl Trajectory {
    pub(crate) fn from_populations(
        times: &[f64],
        site_populations: Array2<f64>,
        ground: Vec<f64>,
    ) -> Self {
        let norm = site_populations
            .rows()
            .into_iter()
            .map(|r| r.sum())
            .collect();
        Self {
            times: times.to_vec(),
            site_populations,
            ground_population: ground,
            norm,
        }
    }
}

pub(crate) fn check_times(times: &[f64]) -> Result<()> {
    if times.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::InvalidConfig(
            "times must be finite and nonnegative".into(),
        ));
    }
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidConfig("times must be ascending".into()));
    }
    Ok(())
}

pub(crate) fn check_initial(initial: &[Complex64], n: usize) -> Result<()> {
    if initial.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: initial.len(),
        });
    }
    let norm: f64 = initial.iter().map(|z| z.norm_sqr()).sum();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidConfig(format!(
            "initial state must be normalized, got norm^2 = {norm}"
        )));
    }
    Ok(())
}

/// `a(t) = exp(-i H_eff t) a(0)` sampled at `times`.
pub fn propagate(
    h_eff: &Array2<Complex64>,
    initial: &[Complex64],
    times: &[f64],
) -> Result<Trajectory> {
    let n = h_eff.nrows();
    check_initial(initial, n)?;
    check_times(times)?;
    let a0 = Array1::from(initial.to_vec());
    let expansion = match complex_diagonalize(h_eff) {
        Ok(m) if m.condition <= EXPANSION_CONDITION_LIMIT => Some(m),
        Ok(_) | Err(Error::DefectiveMatrix { .. }) => None,
        Err(e) => return Err(e),
    };
    let mut pops = Array2::zeros((times.len(), n));
    let mut ground = Vec::with_capacity(times.len());
    for (row, &t) in times.iter().enumerate() {
        let a = match &expansion {
            Some(m) => {
                let coeffs: Array1<Complex64> = m.left.t().mapv(|z| z.conj()).dot(&a0);
                let phases: Array1<Complex64> = coeffs
                    .iter()
                    .zip(m.eigenvalues.iter())
                    .map(|(c, l)| c * (Complex64::new(0.0, -t) * l).exp())
                    .collect();
                m.right.dot(&phases)
            }
            None => expm(&h_eff.mapv(|z| Complex64::new(0.0, -t) * z))?.dot(&a0),
        };
        let mut total = 0.0;
        for i in 0..n {
            let p = a[i].norm_sqr();
            pops[[row, i]] = p;
            total += p;
        }
        ground.push(1.0 - total);
    }
    Ok(Trajectory::from_populations(times, pops, ground))
}
