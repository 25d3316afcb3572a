//! Monte-Carlo estimates of the Lyapunov spectrum of A and of the top
//! exponent of the D cocycle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::SimplexPoint;
use crate::reverse_cfa::{classify, step, Branch};

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub iterations: u64,
    pub burn_in: u64,
    pub reortho_period: u64,
    pub seed: u64,
    pub batches: u64,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            iterations: 10_000_000,
            burn_in: 1_000,
            reortho_period: 8,
            seed: DEFAULT_SEED,
            batches: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEstimate {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    /// Batch-means standard error of `lambda2`.
    pub stderr: f64,
    pub stderr_all: [f64; 3],
    /// Top exponent of the D cocycle.
    pub lambda_d: f64,
    pub stderr_d: f64,
    /// Standard error of lambda2 − lambda_d.
    pub stderr_diff: f64,
    pub iterations: u64,
    pub seed: u64,
    pub restarts: u64,
}

/// Lebesgue-uniform point of Δ.
pub fn uniform_simplex_point<R: Rng + ?Sized>(rng: &mut R) -> SimplexPoint<f64> {
    loop {
        let e: [f64; 3] = [0, 1, 2].map(|_| -(1.0 - rng.gen::<f64>()).ln());
        let s = e[0] + e[1] + e[2];
        if let Ok(p) = SimplexPoint::new(e[0] / s, e[1] / s, e[2] / s) {
            return p;
        }
    }
}

fn fresh_point(rng: &mut ChaCha8Rng, burn_in: u64) -> SimplexPoint<f64> {
    'outer: loop {
        let mut x = uniform_simplex_point(rng);
        for _ in 0..burn_in {
            match step(&x) {
                Ok((y, _)) => x = y,
                Err(_) => continue 'outer,
            }
        }
        return x;
    }
}

type M3 = [[f64; 3]; 3];

/// Multiplies the frame by ᵗM_b in place (A(x) = ᵗM_b).
fn apply_transposed(b: Branch, q: &mut M3) {
    let m = b.matrix();
    let old = *q;
    for i in 0..3 {
        for j in 0..3 {
            q[i][j] = (0..3).map(|k| m.get(k, i) as f64 * old[k][j]).sum();
        }
    }
}

/// Modified Gram–Schmidt on the columns; returns log of the R diagonal.
fn reorthonormalize(q: &mut M3) -> [f64; 3] {
    let mut logs = [0.0; 3];
    for j in 0..3 {
        for p in 0..j {
            let d: f64 = (0..3).map(|i| q[i][j] * q[i][p]).sum();
            for i in 0..3 {
                q[i][j] -= d * q[i][p];
            }
        }
        let n = (0..3).map(|i| q[i][j] * q[i][j]).sum::<f64>().sqrt();
        logs[j] = n.ln();
        for i in 0..3 {
            q[i][j] /= n;
        }
    }
    logs
}

/// One-step D(x) = Π·ᵗM_b·H(x).
fn d_step(b: Branch, x: &SimplexPoint<f64>, v: [f64; 2]) -> [f64; 2] {
    let a = b.matrix().transpose();
    let f = crate::reverse_cfa::AffineField2x2::<f64>::from_cocycle(&a).expect("small matrix");
    let d = f.eval(x.x1(), x.x2());
    [
        d.m[0][0] * v[0] + d.m[0][1] * v[1],
        d.m[1][0] * v[0] + d.m[1][1] * v[1],
    ]
}

fn batch_stats(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Benettin-style estimate along one f_R orbit.
pub fn mc_spectrum(cfg: &McConfig) -> Result<SpectrumEstimate> {
    if cfg.iterations < 10_000 {
        return Err(Error::Parameter {
            name: "iterations",
            value: cfg.iterations as i64,
            range: ">= 10000",
        });
    }
    let batches = cfg.batches.max(2);
    let per_batch = cfg.iterations / batches;
    let period = cfg.reortho_period.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut x = fresh_point(&mut rng, cfg.burn_in);
    let mut q: M3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let mut v = [1.0, 0.0];
    let mut restarts = 0;
    let mut bl: Vec<[f64; 3]> = Vec::with_capacity(batches as usize);
    let mut bd: Vec<f64> = Vec::with_capacity(batches as usize);
    for _ in 0..batches {
        let mut acc = [0.0; 3];
        let mut accd = 0.0;
        for k in 0..per_batch {
            let b = classify(&x);
            apply_transposed(b, &mut q);
            v = d_step(b, &x, v);
            x = match step(&x) {
                Ok((y, _)) => y,
                Err(_) => {
                    restarts += 1;
                    fresh_point(&mut rng, cfg.burn_in)
                }
            };
            if (k + 1) % period == 0 || k + 1 == per_batch {
                let l = reorthonormalize(&mut q);
                for i in 0..3 {
                    acc[i] += l[i];
                }
                let n = v[0].hypot(v[1]);
                accd += n.ln();
                v = [v[0] / n, v[1] / n];
            }
        }
        let pb = per_batch as f64;
        bl.push(acc.map(|a| a / pb));
        bd.push(accd / pb);
    }
    let mut mean = [0.0; 3];
    let mut se = [0.0; 3];
    for i in 0..3 {
        let col: Vec<f64> = bl.iter().map(|r| r[i]).collect();
        (mean[i], se[i]) = batch_stats(&col);
    }
    // Gram–Schmidt order already yields decreasing exponents; enforce it.
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&a, &b| mean[b].total_cmp(&mean[a]));
    let (ld, sed) = batch_stats(&bd);
    let diff: Vec<f64> = bl.iter().zip(&bd).map(|(r, d)| r[idx[1]] - d).collect();
    let (_, sediff) = batch_stats(&diff);
    Ok(SpectrumEstimate {
        lambda1: mean[idx[0]],
        lambda2: mean[idx[1]],
        lambda3: mean[idx[2]],
        stderr: se[idx[1]],
        stderr_all: idx.map(|i| se[i]),
        lambda_d: ld,
        stderr_d: sed,
        stderr_diff: sediff,
        iterations: per_batch * batches,
        seed: cfg.seed,
        restarts,
    })
}

/// η* = 1 − λ₂/λ₁.
pub fn approx_exponent(est: &SpectrumEstimate) -> Result<f64> {
    approx_exponent_from(est.lambda1, est.lambda2)
}

pub fn approx_exponent_from(lambda1: f64, lambda2: f64) -> Result<f64> {
    if !(lambda1 > 0.0) {
        return Err(Error::Invalid(format!("lambda1 = {lambda1} must be positive")));
    }
    Ok(1.0 - lambda2 / lambda1)
}

/// Monte-Carlo estimate of (1/n) ∫ log‖D⁽ⁿ⁾‖ dμ over Δ minus the excluded
/// cylinders Δ(iⁿ), i = 1,2,3, using Lebesgue-uniform points weighted by h.
pub fn mc_l2_integral(n: usize, samples: u64, norm: crate::exactlin::NormKind, seed: u64) -> Result<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vals = Vec::with_capacity(samples as usize);
    while (vals.len() as u64) < samples {
        let x = uniform_simplex_point(&mut rng);
        let Ok((_, w)) = crate::reverse_cfa::orbit(&x, n) else { continue };
        let first = w.0[0];
        let uniform = first != Branch::B4 && w.iter().all(|b| *b == first);
        let val = if uniform {
            0.0
        } else {
            let f = crate::reverse_cfa::d_field::<f64>(&w)?;
            let h = super::measure::density(&x)?;
            // uniform density on Δ is 2 in the (x₁,x₂) chart
            h * f.eval_at(&x.as_vec()).norm(norm).ln() / (2.0 * n as f64)
        };
        vals.push(val);
    }
    let m = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / m;
    let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0);
    Ok((mean, (var / m).sqrt()))
}
