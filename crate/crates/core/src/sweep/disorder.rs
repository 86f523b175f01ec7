use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::rng;
use crate::dynamics::{complex_diagonalize, effective_hamiltonian};
use crate::error::{Error, Result};
use crate::model::{assemble, ModelConfig};
use crate::modes::diagonalize;
use crate::stats::{mean, quantile_sorted, sorted};

pub const BOOTSTRAP_ROUNDS: usize = 200;
const MAX_RESAMPLES_PER_SAMPLE: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DisorderStats {
    pub width: f64,
    pub seed: u64,
    /// Edge decay of the unperturbed chain.
    pub clean: f64,
    /// Edge decay per sample, in sample order.
    pub values: Vec<f64>,
    pub mean: f64,
    pub median: f64,
    pub p5: f64,
    pub p95: f64,
    /// Bootstrap standard error of the median.
    pub median_se: f64,
    /// Draws rejected because they reordered the emitters.
    pub resamples: usize,
}

fn draw_offsets(
    config: &ModelConfig,
    w: f64,
    seed: u64,
    sample: u64,
) -> Result<(ModelConfig, usize)> {
    let mut r = rng::stream(seed, sample);
    let n = config.n_emitters;
    for attempt in 0..MAX_RESAMPLES_PER_SAMPLE {
        let offsets: Vec<f64> = (0..n).map(|_| rng::symmetric(&mut r, w)).collect();
        let cfg = config.clone().with_offsets(offsets);
        if (1..n).all(|i| cfg.gap(i - 1, i) > 0.0) {
            return Ok((cfg, attempt));
        }
    }
    Err(Error::InvalidConfig(format!(
        "disorder width {w} keeps reordering the emitters"
    )))
}

/// Edge decay over `samples` position-disordered copies of `config`.
///
/// Offsets are uniform on `[-w, w]`, drawn per site from the stream of the
/// sample index, so results do not depend on thread scheduling. The edge mode
/// of each copy is the non-Hermitian mode overlapping most with the clean one.
pub fn disorder_ensemble(
    config: &ModelConfig,
    w: f64,
    samples: usize,
    seed: u64,
) -> Result<DisorderStats> {
    config.validate()?;
    if !(w.is_finite() && w >= 0.0) {
        return Err(Error::InvalidConfig(format!(
            "disorder width must be >= 0, got {w}"
        )));
    }
    if samples == 0 {
        return Err(Error::InvalidConfig(
            "disorder needs at least one sample".into(),
        ));
    }
    let clean_couplings = assemble(config)?;
    let hermitian = diagonalize(&clean_couplings)?;
    let clean_modes = complex_diagonalize(&effective_hamiltonian(&clean_couplings))?;
    let clean_idx = clean_modes.edge_index(&hermitian.vector(hermitian.midgap_index()));
    let reference: Vec<Complex64> = clean_modes.right_vector(clean_idx);
    let clean = clean_modes.decay_rate(clean_idx);

    let draws = (0..samples as u64)
        .into_par_iter()
        .map(|s| {
            let (cfg, rejected) = draw_offsets(config, w, seed, s)?;
            let modes = complex_diagonalize(&effective_hamiltonian(&assemble(&cfg)?))?;
            Ok((modes.decay_rate(modes.best_match(&reference)), rejected))
        })
        .collect::<Result<Vec<_>>>()?;
    let values: Vec<f64> = draws.iter().map(|d| d.0).collect();
    let resamples = draws.iter().map(|d| d.1).sum();

    let ordered = sorted(&values);
    let median = quantile_sorted(&ordered, 0.5);
    let mut boot = rng::stream(seed, u64::MAX);
    let medians: Vec<f64> = (0..BOOTSTRAP_ROUNDS)
        .map(|_| {
            let resample: Vec<f64> = (0..samples)
                .map(|_| values[rng::index(&mut boot, samples)])
                .collect();
            quantile_sorted(&sorted(&resample), 0.5)
        })
        .collect();
    let m = mean(&medians);
    let median_se = (medians.iter().map(|x| (x - m) * (x - m)).sum::<f64>()
        / (BOOTSTRAP_ROUNDS - 1) as f64)
        .sqrt();

    Ok(DisorderStats {
        width: w,
        seed,
        clean,
        mean: mean(&values),
        median,
        p5: quantile_sorted(&ordered, 0.05),
        p95: quantile_sorted(&ordered, 0.95),
        median_se,
        resamples,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zero_width_reproduces_clean_chain() {
        let cfg = ModelConfig::new(11, 0.3, 0.3 * PI, 1.0, 0.75);
        let s = disorder_ensemble(&cfg, 0.0, 8, 3).unwrap();
        assert!(s.values.iter().all(|&v| v == s.clean));
        assert_eq!(s.resamples, 0);
        assert!(s.median_se < 1e-15);
    }

    #[test]
    fn fixed_seed_is_bit_identical() {
        let cfg = ModelConfig::new(11, 0.3, 0.3 * PI, 1.0, 0.75);
        let a = disorder_ensemble(&cfg, 0.01, 16, 7).unwrap();
        let b = disorder_ensemble(&cfg, 0.01, 16, 7).unwrap();
        assert_eq!(a, b);
        let c = disorder_ensemble(&cfg, 0.01, 16, 8).unwrap();
        assert_ne!(a.values, c.values);
    }

    #[test]
    fn huge_width_is_rejected() {
        let cfg = ModelConfig::new(40, 0.3, 0.3 * PI, 1.0, 0.01);
        assert!(disorder_ensemble(&cfg, 5.0, 2, 1).is_err());
        assert!(disorder_ensemble(&cfg, -1.0, 2, 1).is_err());
    }

    #[test]
    fn statistics_are_ordered() {
        let cfg = ModelConfig::new(9, 0.3, 0.3 * PI, 1.0, 0.5);
        let s = disorder_ensemble(&cfg, 0.02, 40, 11).unwrap();
        assert!(s.p5 <= s.median && s.median <= s.p95);
        assert!(s.median_se > 0.0);
    }
}
