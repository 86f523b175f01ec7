//! Real-space eigenmodes of open chains: edge states, localization and the
//! decay matrix in the eigenmode basis.

use ndarray::{Array1, Array2};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::symmetric_eigen;
use crate::model::{assemble, check_chiral, sin_cos_turns, CouplingSet, ModelConfig};

pub const DEFAULT_ZERO_TOLERANCE: f64 = 1e-9;
/// Edge pair must sit below this fraction of the smallest bulk |E|.
pub const DEFAULT_PAIR_SEPARATION: f64 = 0.1;
pub const SIGNAL_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone)]
pub struct ModeSet {
    /// Ascending.
    pub energies: Array1<f64>,
    /// Column `m` is the eigenvector of `energies[m]` in the site basis.
    pub vectors: Array2<f64>,
    /// Mode(s) closest to zero energy: one for odd N, two for even N.
    pub edge_indices: Vec<usize>,
    pub chiral: bool,
    pub rate_unit: f64,
}

impl ModeSet {
    pub fn n(&self) -> usize {
        self.energies.len()
    }

    pub fn vector(&self, m: usize) -> Vec<f64> {
        self.vectors.column(m).to_vec()
    }

    /// Index of the mode with the smallest |E|, without any symmetry requirement.
    pub fn midgap_index(&self) -> usize {
        by_abs_energy(&self.energies)[0]
    }

    /// Centred label: the zero mode of an odd chain gets 0.
    pub fn label(&self, m: usize) -> i64 {
        m as i64 - (self.n() / 2) as i64
    }
}

fn by_abs_energy(energies: &Array1<f64>) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..energies.len()).collect();
    idx.sort_by(|&a, &b| {
        energies[a]
            .abs()
            .total_cmp(&energies[b].abs())
            .then(a.cmp(&b))
    });
    idx
}

pub fn diagonalize(couplings: &CouplingSet) -> Result<ModeSet> {
    let eig = symmetric_eigen(&couplings.h)?;
    let n = couplings.n();
    let order = by_abs_energy(&eig.values);
    let mut edge_indices: Vec<usize> = order
        .into_iter()
        .take(if n % 2 == 1 { 1 } else { 2 })
        .collect();
    edge_indices.sort_unstable();
    Ok(ModeSet {
        energies: eig.values,
        vectors: eig.vectors,
        edge_indices,
        chiral: check_chiral(&couplings.h),
        rate_unit: couplings.rate_scale(),
    })
}

#[derive(Debug, Clone, Copy)]
pub struct EdgeOptions {
    pub zero_tolerance: f64,
    pub pair_separation: f64,
}

impl Default for EdgeOptions {
    fn default() -> Self {
        Self {
            zero_tolerance: DEFAULT_ZERO_TOLERANCE,
            pair_separation: DEFAULT_PAIR_SEPARATION,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeMode {
    pub index: usize,
    pub energy: f64,
    pub amplitudes: Vec<f64>,
    /// `|psi_0i|^2` per site.
    pub probabilities: Vec<f64>,
}

/// The zero mode (odd N) or the midgap pair (even N) of a chiral chain.
pub fn edge_states(modes: &ModeSet, opts: EdgeOptions) -> Result<Vec<EdgeMode>> {
    if !modes.chiral {
        return Err(Error::EdgeUndefined("Hamiltonian is not chiral".into()));
    }
    let e = &modes.energies;
    let n = modes.n();
    if n % 2 == 1 {
        let i = modes.edge_indices[0];
        if e[i].abs() > opts.zero_tolerance * modes.rate_unit {
            return Err(Error::EdgeUndefined(format!(
                "smallest |E| = {:e} is not a zero mode",
                e[i].abs()
            )));
        }
    } else {
        let pair = modes
            .edge_indices
            .iter()
            .map(|&i| e[i].abs())
            .fold(0.0, f64::max);
        let bulk = (0..n)
            .filter(|i| !modes.edge_indices.contains(i))
            .map(|i| e[i].abs())
            .fold(f64::INFINITY, f64::min);
        if pair > opts.zero_tolerance * modes.rate_unit && pair >= opts.pair_separation * bulk {
            return Err(Error::EdgeUndefined(format!(
                "midgap pair |E| = {pair:e} not separated from bulk |E| = {bulk:e}"
            )));
        }
    }
    Ok(modes
        .edge_indices
        .iter()
        .map(|&i| {
            let amplitudes = modes.vector(i);
            let probabilities = amplitudes.iter().map(|a| a * a).collect();
            EdgeMode {
                index: i,
                energy: e[i],
                amplitudes,
                probabilities,
            }
        })
        .collect())
}

/// `sum |psi_i|^4 / (sum |psi_i|^2)^2`; `None` for the zero vector.
pub fn ipr(amplitudes: &[f64]) -> Option<f64> {
    let p2: f64 = amplitudes.iter().map(|a| a * a).sum();
    if p2 == 0.0 {
        return None;
    }
    let p4: f64 = amplitudes.iter().map(|a| (a * a) * (a * a)).sum();
    Some(p4 / (p2 * p2))
}

/// Dissipator in the eigenmode basis, `Gamma_mn = v_m^T gamma v_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayMatrix {
    pub gamma_mn: Array2<f64>,
}

impl DecayMatrix {
    pub fn entry(&self, m: usize, n: usize) -> f64 {
        self.gamma_mn[[m, n]]
    }

    /// `Gamma_m0` for all `m`, where `edge` is the edge-mode index.
    pub fn column(&self, edge: usize) -> Vec<f64> {
        self.gamma_mn.column(edge).to_vec()
    }

    pub fn trace(&self) -> f64 {
        self.gamma_mn.diag().sum()
    }
}

pub fn decay_matrix(modes: &ModeSet, gamma: &Array2<f64>) -> Result<DecayMatrix> {
    let n = modes.n();
    if gamma.nrows() != n || gamma.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: gamma.nrows(),
        });
    }
    let v = &modes.vectors;
    let w = gamma.dot(v);
    let mut out = Array2::zeros((n, n));
    for m in 0..n {
        for k in m..n {
            let s: f64 = (0..n).map(|i| v[[i, m]] * w[[i, k]]).sum();
            out[[m, k]] = s;
            out[[k, m]] = s;
        }
    }
    Ok(DecayMatrix { gamma_mn: out })
}

/// Overlaps of a state with the two radiating patterns `cos(2 pi x_j)` and
/// `sin(2 pi x_j)` whose outer products sum to `gamma / gamma0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadiatingOverlap {
    /// Overlap with the normalized cosine pattern.
    pub o_cos: f64,
    /// Overlap with the normalized sine pattern (0 if the pattern vanishes).
    pub o_sin: f64,
    pub norm_cos: f64,
    pub norm_sin: f64,
}

impl RadiatingOverlap {
    /// `<psi| gamma |psi>` rebuilt from the two overlaps.
    pub fn decay(&self, gamma0: f64) -> f64 {
        gamma0 * ((self.norm_cos * self.o_cos).powi(2) + (self.norm_sin * self.o_sin).powi(2))
    }
}

pub fn radiating_overlap(state: &[f64], config: &ModelConfig) -> Result<RadiatingOverlap> {
    config.validate()?;
    if state.len() != config.n_emitters {
        return Err(Error::DimensionMismatch {
            expected: config.n_emitters,
            found: state.len(),
        });
    }
    let (sin, cos): (Vec<f64>, Vec<f64>) = (0..config.n_emitters)
        .map(|j| sin_cos_turns(config.gap(0, j)))
        .unzip();
    let project = |pattern: &[f64]| {
        let norm = pattern.iter().map(|x| x * x).sum::<f64>().sqrt();
        let overlap = if norm > 0.0 {
            pattern.iter().zip(state).map(|(p, s)| p * s).sum::<f64>() / norm
        } else {
            0.0
        };
        (overlap, norm)
    };
    let (o_cos, norm_cos) = project(&cos);
    let (o_sin, norm_sin) = project(&sin);
    Ok(RadiatingOverlap {
        o_cos,
        o_sin,
        norm_cos,
        norm_sin,
    })
}

/// Closed-form dark edge state at `d = 3/4`, `J0 = gamma0 / 2`, `N = 4M + 3`:
/// sites `4n+1` and `4n+3` carry `(-1)^n tan^{2n}(phi/2)`, normalized.
pub fn analytic_edge_state(config: &ModelConfig) -> Result<Vec<f64>> {
    config.validate()?;
    let n = config.n_emitters;
    if n % 4 != 3 {
        return Err(Error::ShapeMismatch(format!(
            "closed-form edge state needs N = 4M + 3, got N = {n}"
        )));
    }
    if (config.spacing.rem_euclid(1.0) - 0.75).abs() > 1e-12 || config.has_offsets() {
        return Err(Error::InvalidConfig(
            "closed-form edge state needs a clean chain at spacing 3/4".into(),
        ));
    }
    if (config.j0 / config.gamma0 - 0.5).abs() > 1e-12 {
        return Err(Error::InvalidConfig(format!(
            "closed-form edge state needs J0/gamma0 = 1/2, got {}",
            config.j0 / config.gamma0
        )));
    }
    let t2 = (0.5 * config.phi).tan().powi(2);
    let mut psi = vec![0.0; n];
    let mut amp = 1.0;
    for cell in 0..=(n - 3) / 4 {
        psi[4 * cell] = amp;
        psi[4 * cell + 2] = amp;
        amp *= -t2;
    }
    let norm = psi.iter().map(|x| x * x).sum::<f64>().sqrt();
    Ok(psi.into_iter().map(|x| x / norm).collect())
}

/// Which bulk mode's coupling to the edge is tracked across sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BulkMode {
    /// 0 selects the outermost mode, 1 the next one in, and so on.
    pub rank_from_band_edge: usize,
    /// Above (true) or below the zero mode.
    pub upper: bool,
}

impl BulkMode {
    /// The modes labelled `+-(N-3)/2`.
    pub const SECOND_OUTERMOST: BulkMode = BulkMode {
        rank_from_band_edge: 1,
        upper: true,
    };
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NuFit {
    /// Decay constant in `|Gamma_m'0| ~ exp(-nu N)`.
    pub nu: f64,
    pub intercept: f64,
    pub residual: f64,
    /// `(N, ln(|Gamma_m'0| / gamma0))`.
    pub points: Vec<(usize, f64)>,
}

/// `ln |Gamma_m'0| / gamma0` for one odd chain.
pub fn edge_bulk_coupling(config: &ModelConfig, bulk: BulkMode) -> Result<f64> {
    let n = config.n_emitters;
    if n.is_multiple_of(2) {
        return Err(Error::ShapeMismatch(format!(
            "scaling needs odd N, got {n}"
        )));
    }
    let couplings = assemble(config)?;
    let modes = diagonalize(&couplings)?;
    let edge = edge_states(&modes, EdgeOptions::default())?[0].index;
    let half = (n - 1) / 2;
    if bulk.rank_from_band_edge >= half {
        return Err(Error::ShapeMismatch(format!(
            "bulk rank {} out of range for N = {n}",
            bulk.rank_from_band_edge
        )));
    }
    let offset = half - bulk.rank_from_band_edge;
    let m = if bulk.upper {
        edge + offset
    } else {
        edge - offset
    };
    let decay = decay_matrix(&modes, &couplings.gamma)?;
    let value = decay.entry(m, edge).abs() / config.gamma0;
    if value < SIGNAL_FLOOR {
        return Err(Error::SignalBelowFloor { n, value });
    }
    Ok(value.ln())
}

pub fn nu_scaling_fit(template: &ModelConfig, bulk: BulkMode, sizes: &[usize]) -> Result<NuFit> {
    if sizes.len() < 4 {
        return Err(Error::InvalidConfig(format!(
            "scaling fit needs at least 4 sizes, got {}",
            sizes.len()
        )));
    }
    let points = sizes
        .par_iter()
        .map(|&n| {
            let cfg = ModelConfig {
                n_emitters: n,
                offsets: None,
                ..template.clone()
            };
            edge_bulk_coupling(&cfg, bulk).map(|y| (n, y))
        })
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = points.iter().map(|&(n, _)| n as f64).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, y)| y).collect();
    let (slope, intercept, residual) = crate::stats::linear_fit(&xs, &ys)?;
    Ok(NuFit {
        nu: -slope,
        intercept,
        residual,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn chain(n: usize, j0: f64, phi: f64, d: f64) -> (CouplingSet, ModeSet) {
        let c = assemble(&ModelConfig::new(n, j0, phi, 1.0, d)).unwrap();
        let m = diagonalize(&c).unwrap();
        (c, m)
    }

    #[test]
    fn two_site_dimer() {
        let c = CouplingSet::from_matrices(ndarray::array![[0.0, 0.8], [0.8, 0.0]], Array2::eye(2))
            .unwrap();
        let m = diagonalize(&c).unwrap();
        assert!((m.energies[0] + 0.8).abs() < 1e-15);
        assert!((m.energies[1] - 0.8).abs() < 1e-15);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((m.vectors[[0, 0]] - r).abs() < 1e-15 && (m.vectors[[1, 0]] + r).abs() < 1e-15);
    }

    #[test]
    fn decoupled_ends_at_zero_coupling() {
        for d in [0.25, 0.75] {
            let (c, m) = chain(21, 0.0, 0.3 * PI, d);
            let edge = &edge_states(&m, EdgeOptions::default()).unwrap()[0];
            let r = std::f64::consts::FRAC_1_SQRT_2;
            assert!((edge.amplitudes[0] - r).abs() < 1e-12);
            assert!((edge.amplitudes[20] - r).abs() < 1e-12);
            assert!((ipr(&edge.amplitudes).unwrap() - 0.5).abs() < 1e-12);
            // gamma0 + gamma0 cos(2 pi 20 d) = 2 gamma0
            let decay = decay_matrix(&m, &c.gamma).unwrap();
            assert!((decay.entry(edge.index, edge.index) - 2.0).abs() < 1e-12);
            let overlap = radiating_overlap(
                &edge.amplitudes,
                &ModelConfig::new(21, 0.0, 0.3 * PI, 1.0, d),
            )
            .unwrap();
            assert!((overlap.decay(1.0) - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ipr_values() {
        assert_eq!(ipr(&[0.0, 3.0, 0.0]), Some(1.0));
        assert!((ipr(&[1.0, 1.0]).unwrap() - 0.5).abs() < 1e-15);
        assert!((ipr(&[0.2; 8]).unwrap() - 0.125).abs() < 1e-15);
        assert_eq!(ipr(&[0.0, 0.0]), None);
    }

    #[test]
    fn gapped_spectrum_at_quarter_spacing() {
        for j0 in [0.05, 0.25, 1.0, 5.0] {
            let (_, m) = chain(21, j0, 0.1 * PI, 0.25);
            let z = m.edge_indices[0];
            assert!(m.energies[z].abs() < 1e-12);
            let bulk_gap = (0..21)
                .filter(|&i| i != z)
                .map(|i| m.energies[i].abs())
                .fold(f64::INFINITY, f64::min);
            assert!(bulk_gap > 1e-2, "j0 = {j0}: {bulk_gap}");
        }
    }

    #[test]
    fn strong_dimerization_localizes_left() {
        let (_, m) = chain(21, 5.0, 0.1 * PI, 0.25);
        let edge = &edge_states(&m, EdgeOptions::default()).unwrap()[0];
        let max_site = (0..21)
            .max_by(|&a, &b| edge.probabilities[a].total_cmp(&edge.probabilities[b]))
            .unwrap();
        assert_eq!(max_site, 0);
    }

    #[test]
    fn critical_point_delocalizes() {
        let (_, crit) = chain(21, 0.25, 0.1 * PI, 0.75);
        let (_, deep) = chain(21, 1.0, 0.1 * PI, 0.75);
        let ipr_at = |m: &ModeSet| {
            ipr(&edge_states(m, EdgeOptions::default()).unwrap()[0].amplitudes).unwrap()
        };
        assert!(ipr_at(&crit) < 0.25 * ipr_at(&deep));
    }

    #[test]
    fn even_chain_has_midgap_pair() {
        let (_, m) = chain(20, 10.0, 0.1 * PI, 0.75);
        let pair = edge_states(&m, EdgeOptions::default()).unwrap();
        assert_eq!(pair.len(), 2);
        // symmetric and antisymmetric combinations each sit on one boundary
        let mut left = vec![0.0; 20];
        for (i, x) in left.iter_mut().enumerate() {
            *x = (pair[0].amplitudes[i] + pair[1].amplitudes[i]) / 2f64.sqrt();
        }
        let right: Vec<f64> = (0..20)
            .map(|i| (pair[0].amplitudes[i] - pair[1].amplitudes[i]) / 2f64.sqrt())
            .collect();
        let first_half = |v: &[f64]| v[..10].iter().map(|x| x * x).sum::<f64>();
        let (a, b) = (first_half(&left), first_half(&right));
        assert!((a > 0.99 && b < 0.01) || (a < 0.01 && b > 0.99), "{a} {b}");
    }

    #[test]
    fn non_chiral_edge_is_undefined() {
        let (_, m) = chain(11, 0.3, 0.3 * PI, 0.6);
        assert!(matches!(
            edge_states(&m, EdgeOptions::default()),
            Err(Error::EdgeUndefined(_))
        ));
    }

    #[test]
    fn analytic_state_shapes() {
        let s = analytic_edge_state(&ModelConfig::new(3, 0.5, 0.77, 1.0, 0.75)).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s[0] - r).abs() < 1e-15 && s[1] == 0.0 && (s[2] - r).abs() < 1e-15);

        let phi = 0.3 * PI;
        let s = analytic_edge_state(&ModelConfig::new(11, 0.5, phi, 1.0, 0.75)).unwrap();
        let t2 = (0.15 * PI).tan().powi(2);
        let raw = [
            1.0,
            0.0,
            1.0,
            0.0,
            -t2,
            0.0,
            -t2,
            0.0,
            t2 * t2,
            0.0,
            t2 * t2,
        ];
        let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
        for (a, b) in s.iter().zip(raw) {
            assert!((a - b / norm).abs() < 1e-15);
        }
        assert!(matches!(
            analytic_edge_state(&ModelConfig::new(13, 0.5, phi, 1.0, 0.75)),
            Err(Error::ShapeMismatch(_))
        ));
        assert!(analytic_edge_state(&ModelConfig::new(11, 0.4, phi, 1.0, 0.75)).is_err());
    }

    #[test]
    fn analytic_state_matches_zero_mode() {
        let cfg = ModelConfig::new(11, 0.5, 0.3 * PI, 1.0, 0.75);
        let c = assemble(&cfg).unwrap();
        let m = diagonalize(&c).unwrap();
        let edge = &edge_states(&m, EdgeOptions::default()).unwrap()[0];
        let analytic = analytic_edge_state(&cfg).unwrap();
        let overlap: f64 = analytic
            .iter()
            .zip(&edge.amplitudes)
            .map(|(a, b)| a * b)
            .sum();
        assert!(overlap.abs() > 1.0 - 1e-10);
        let o = radiating_overlap(&edge.amplitudes, &cfg).unwrap();
        assert!(o.o_cos.abs() < 1e-10 && o.o_sin.abs() < 1e-10);
    }

    #[test]
    fn decay_dimension_mismatch() {
        let (_, m) = chain(5, 0.3, 0.3, 0.75);
        assert!(matches!(
            decay_matrix(&m, &Array2::eye(4)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn scaling_rejects_short_lists() {
        let cfg = ModelConfig::new(17, 0.25, 0.3 * PI, 1.0, 0.75);
        assert!(nu_scaling_fit(&cfg, BulkMode::SECOND_OUTERMOST, &[17, 21, 25]).is_err());
    }

    #[test]
    fn mode_labels_centre_on_zero_mode() {
        let (_, m) = chain(21, 0.3, 0.3 * PI, 0.75);
        assert_eq!(m.label(m.edge_indices[0]), 0);
        assert_eq!(m.label(0), -10);
    }
}
