//! Full master equation on the `2^N` Hilbert space, integrated with RK4.
//! Used as a reference for the single-excitation reduction.

use ndarray::Array2;
use num_complex::Complex64;

use super::{check_initial, check_times, Trajectory};
use crate::error::{Error, Result};
use crate::linalg::symmetric_eigen;
use crate::model::CouplingSet;

pub const MAX_ORACLE_EMITTERS: usize = 8;

#[derive(Debug, Clone, Copy)]
pub struct OracleOptions {
    /// Initial step in units of `1/gamma0`.
    pub dt: f64,
    pub trace_tolerance: f64,
    pub max_halvings: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            trace_tolerance: 1e-7,
            max_halvings: 6,
        }
    }
}

/// Generator of the master equation on the `2^N` space. Bit `i` of a state
/// index marks emitter `i` as excited.
struct Generator {
    n: usize,
    dim: usize,
    /// Sparse rows of `K = H - (i/2) sum gamma_ij s_i^+ s_j^-`.
    rows: Vec<Vec<(usize, Complex64)>>,
    /// For each state, `(j, state | 1 << j)` over the unexcited emitters `j`.
    raised: Vec<Vec<(usize, usize)>>,
    /// `gamma = sum_k mu_k w_k w_k^T`, keeping only nonzero `mu_k`.
    channels: Vec<(f64, Vec<f64>)>,
}

struct Scratch {
    m: Vec<Complex64>,
    xt: Vec<Complex64>,
    stages: [Vec<Complex64>; 5],
}

impl Scratch {
    fn new(len: usize) -> Self {
        let z = || vec![Complex64::new(0.0, 0.0); len];
        Self {
            m: z(),
            xt: z(),
            stages: std::array::from_fn(|_| z()),
        }
    }
}

fn axpy(y: &mut [Complex64], a: Complex64, x: &[Complex64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

impl Generator {
    fn new(couplings: &CouplingSet) -> Result<Self> {
        let n = couplings.n();
        let dim = 1usize << n;
        let k = |i: usize, j: usize| {
            Complex64::new(couplings.h[[i, j]], -0.5 * couplings.gamma[[i, j]])
        };
        let rows = (0..dim)
            .map(|a| {
                let mut row = Vec::new();
                for i in (0..n).filter(|i| a >> i & 1 == 1) {
                    for j in 0..n {
                        if j != i && a >> j & 1 == 1 {
                            continue;
                        }
                        let coef = k(i, j);
                        if coef != Complex64::new(0.0, 0.0) {
                            row.push((a ^ (1 << i) | (1 << j), coef));
                        }
                    }
                }
                row
            })
            .collect();
        let raised = (0..dim)
            .map(|a| {
                (0..n)
                    .filter(|j| a >> j & 1 == 0)
                    .map(|j| (j, a | (1 << j)))
                    .collect()
            })
            .collect();
        let eig = symmetric_eigen(&couplings.gamma)?;
        let largest = eig.values.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
        let channels = (0..n)
            .filter(|&k| eig.values[k].abs() > 1e-14 * largest)
            .map(|k| (eig.values[k], eig.vectors.column(k).to_vec()))
            .collect();
        Ok(Self {
            n,
            dim,
            rows,
            raised,
            channels,
        })
    }

    /// `out = -i (K rho - rho K^dag) + sum_k mu_k W_k rho W_k^dag` for Hermitian
    /// row-major `rho`, with `W_k = sum_j w_kj s_j^-`.
    fn apply(
        &self,
        rho: &[Complex64],
        out: &mut [Complex64],
        m: &mut [Complex64],
        xt: &mut [Complex64],
    ) {
        let d = self.dim;
        let zero = Complex64::new(0.0, 0.0);
        m.fill(zero);
        for a in 0..d {
            let row = &mut m[a * d..(a + 1) * d];
            for &(c, k) in &self.rows[a] {
                axpy(row, k, &rho[c * d..(c + 1) * d]);
            }
        }
        // rho K^dag = (K rho)^dag because rho is Hermitian
        let minus_i = Complex64::new(0.0, -1.0);
        for a in 0..d {
            for b in 0..d {
                out[a * d + b] = minus_i * (m[a * d + b] - m[b * d + a].conj());
            }
        }
        for (mu, w) in &self.channels {
            // m = W rho
            m.fill(zero);
            for a in 0..d {
                let row = &mut m[a * d..(a + 1) * d];
                for &(j, aj) in &self.raised[a] {
                    axpy(row, Complex64::new(w[j], 0.0), &rho[aj * d..(aj + 1) * d]);
                }
            }
            // xt = m^dag = rho W^dag
            for a in 0..d {
                for b in 0..d {
                    xt[b * d + a] = m[a * d + b].conj();
                }
            }
            // out += mu W xt
            for a in 0..d {
                let row = &mut out[a * d..(a + 1) * d];
                for &(j, aj) in &self.raised[a] {
                    axpy(
                        row,
                        Complex64::new(mu * w[j], 0.0),
                        &xt[aj * d..(aj + 1) * d],
                    );
                }
            }
        }
    }
}

fn rk4_step(g: &Generator, rho: &mut [Complex64], dt: f64, s: &mut Scratch) {
    let Scratch { m, xt, stages } = s;
    let [k1, k2, k3, k4, tmp] = stages;
    g.apply(rho, k1, m, xt);
    for (t, (r, k)) in tmp.iter_mut().zip(rho.iter().zip(k1.iter())) {
        *t = r + k * (0.5 * dt);
    }
    g.apply(tmp, k2, m, xt);
    for (t, (r, k)) in tmp.iter_mut().zip(rho.iter().zip(k2.iter())) {
        *t = r + k * (0.5 * dt);
    }
    g.apply(tmp, k3, m, xt);
    for (t, (r, k)) in tmp.iter_mut().zip(rho.iter().zip(k3.iter())) {
        *t = r + k * dt;
    }
    g.apply(tmp, k4, m, xt);
    for i in 0..rho.len() {
        rho[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dt / 6.0);
    }
}

fn integrate(g: &Generator, initial: &[Complex64], times: &[f64], dt: f64) -> (Trajectory, f64) {
    let d = g.dim;
    let mut rho = vec![Complex64::new(0.0, 0.0); d * d];
    for (i, ai) in initial.iter().enumerate() {
        for (j, aj) in initial.iter().enumerate() {
            rho[(1 << i) * d + (1 << j)] = ai * aj.conj();
        }
    }
    let mut scratch = Scratch::new(d * d);
    let mut pops = Array2::zeros((times.len(), g.n));
    let mut ground = Vec::with_capacity(times.len());
    let mut drift: f64 = 0.0;
    let mut now = 0.0;
    for (row, &t) in times.iter().enumerate() {
        let span = t - now;
        if span > 0.0 {
            let steps = (span / dt).ceil() as usize;
            let h = span / steps as f64;
            for _ in 0..steps {
                rk4_step(g, &mut rho, h, &mut scratch);
            }
            now = t;
        }
        let trace: f64 = (0..d).map(|s| rho[s * d + s].re).sum();
        drift = drift.max((trace - 1.0).abs());
        for s in 0..d {
            let p = rho[s * d + s].re;
            for i in (0..g.n).filter(|i| s >> i & 1 == 1) {
                pops[[row, i]] += p;
            }
        }
        ground.push(rho[0].re);
    }
    (Trajectory::from_populations(times, pops, ground), drift)
}

/// Integrates the master equation from a single-excitation pure state and
/// reports site populations summed over all many-body states.
pub fn lindblad_oracle(
    couplings: &CouplingSet,
    initial: &[Complex64],
    times: &[f64],
    opts: OracleOptions,
) -> Result<Trajectory> {
    let n = couplings.n();
    if n > MAX_ORACLE_EMITTERS {
        return Err(Error::InvalidConfig(format!(
            "oracle supports at most {MAX_ORACLE_EMITTERS} emitters, got {n}"
        )));
    }
    check_initial(initial, n)?;
    check_times(times)?;
    if !(opts.dt > 0.0) {
        return Err(Error::InvalidConfig("oracle step must be positive".into()));
    }
    let g = Generator::new(couplings)?;
    let scale = couplings.rate_scale();
    let mut dt = opts.dt / scale;
    let mut drift = f64::NAN;
    for _ in 0..=opts.max_halvings {
        let (traj, d) = integrate(&g, initial, times, dt);
        if d <= opts.trace_tolerance {
            return Ok(traj);
        }
        drift = d;
        dt *= 0.5;
    }
    Err(Error::StepTooLarge {
        drift,
        halvings: opts.max_halvings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{effective_hamiltonian, propagate};
    use crate::model::{assemble, ModelConfig};
    use std::f64::consts::PI;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn single_emitter_exponential() {
        let cs =
            CouplingSet::from_matrices(ndarray::array![[0.0]], ndarray::array![[1.0]]).unwrap();
        let traj =
            lindblad_oracle(&cs, &[c(1.0)], &[0.0, 1.0, 3.0], OracleOptions::default()).unwrap();
        for (k, &t) in traj.times.iter().enumerate() {
            assert!((traj.norm[k] - (-t).exp()).abs() < 1e-10);
            assert!((traj.ground_population[k] - 1.0 + (-t).exp()).abs() < 1e-10);
        }
    }

    #[test]
    fn pair_dark_and_bright() {
        let cs = assemble(&ModelConfig::new(2, 0.0, 0.0, 1.0, 0.5)).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let dark =
            lindblad_oracle(&cs, &[c(r), c(r)], &[0.0, 2.0], OracleOptions::default()).unwrap();
        assert!((dark.norm[1] - 1.0).abs() < 1e-10);
        let bright =
            lindblad_oracle(&cs, &[c(r), c(-r)], &[0.0, 2.0], OracleOptions::default()).unwrap();
        assert!((bright.norm[1] - (-4.0f64).exp()).abs() < 1e-10);
    }

    #[test]
    fn matches_reduced_dynamics() {
        let cs = assemble(&ModelConfig::new(4, 0.4, 0.3 * PI, 1.0, 0.75)).unwrap();
        let a0 = [c(0.6), Complex64::new(0.0, 0.8), c(0.0), c(0.0)];
        let times = [0.0, 0.5, 1.0, 2.0];
        let full = lindblad_oracle(&cs, &a0, &times, OracleOptions::default()).unwrap();
        let reduced = propagate(&effective_hamiltonian(&cs), &a0, &times).unwrap();
        for (x, y) in full
            .site_populations
            .iter()
            .zip(reduced.site_populations.iter())
        {
            assert!((x - y).abs() < 1e-9, "{x} vs {y}");
        }
    }

    #[test]
    fn rejects_large_chains() {
        let cs = assemble(&ModelConfig::new(9, 0.4, 0.3, 1.0, 0.75)).unwrap();
        let mut a0 = vec![c(0.0); 9];
        a0[0] = c(1.0);
        assert!(lindblad_oracle(&cs, &a0, &[0.0], OracleOptions::default()).is_err());
    }
}
