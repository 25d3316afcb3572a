//! Exact-arithmetic check of exponential convergence along orbits of random
//! rational points of Δ.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WitnessConfig {
    pub samples: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub alpha: f64,
    pub bits: u64,
    pub seed: u64,
}

impl Default for WitnessConfig {
    fn default() -> Self {
        Self {
            samples: 1000,
            n_min: 50,
            n_max: 200,
            alpha: 1.05,
            bits: 1024,
            seed: super::spectrum::DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub config: WitnessConfig,
    pub passed: usize,
    /// Orbits that reached the boundary of Δ before n_max.
    pub terminated: usize,
    pub fraction: f64,
    /// Smallest observed −log‖·‖∞ / log pᵢ over all checked (i, n).
    pub worst_exponent: f64,
}

/// Natural log of a positive big integer.
pub fn big_ln(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        let (_, d) = x.to_u64_digits();
        return d.iter().rev().fold(0.0f64, |a, &w| a * 2f64.powi(64) + w as f64).ln();
    }
    let shift = bits - 64;
    let top: BigInt = x >> shift;
    let (_, d) = top.to_u64_digits();
    (d[0] as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

fn random_point(rng: &mut ChaCha8Rng, bits: u64) -> [BigInt; 3] {
    let words = bits.div_ceil(32) as usize;
    let mut draw = || {
        let v: Vec<u32> = (0..words).map(|_| rng.gen()).collect();
        BigInt::from_biguint(Sign::Plus, BigUint::from_slice(&v))
    };
    let total = BigInt::from(1) << (32 * words);
    let (mut a, mut b) = (draw(), draw());
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    [a.clone(), &b - &a, &total - &b]
}

/// Exact projective step; None when the image leaves the open simplex.
fn exact_step(v: &[BigInt; 3]) -> Option<([BigInt; 3], usize)> {
    let s = &v[0] + &v[1] + &v[2];
    let b = (0..3).find(|&i| &v[i] * 2 > s).unwrap_or(3);
    let img = if b < 3 {
        let mut w = v.clone();
        w[b] = &v[b] * 2 - &s;
        w
    } else {
        [&s - &v[0] * 2, &s - &v[1] * 2, &s - &v[2] * 2]
    };
    if img.iter().any(|c| !c.is_positive()) {
        return None;
    }
    Some((img, b))
}

/// Right-multiplies P by M_b in place.
fn mul_branch(p: &mut [[BigInt; 3]; 3], b: usize) {
    let m = crate::reverse_cfa::Branch::ALL[b].matrix();
    let old = p.clone();
    for (i, row) in p.iter_mut().enumerate() {
        for (j, e) in row.iter_mut().enumerate() {
            *e = (0..3).fold(BigInt::zero(), |a, k| {
                let c = m.get(k, j);
                if c == 0 { a } else { a + &old[i][k] * c }
            });
        }
    }
}

/// Checks ‖(p_{i1}, p_{i2}) − pᵢ(x₁, x₂)‖∞ < pᵢ^{1−α} for every i and every
/// n in [n_min, n_max] along one exact orbit.
/// Returns (passed, terminated, worst exponent).
fn check_orbit(v0: [BigInt; 3], cfg: &WitnessConfig) -> (bool, bool, f64) {
    let s0 = &v0[0] + &v0[1] + &v0[2];
    let ln_s0 = big_ln(&s0);
    let one = BigInt::from(1);
    let zero = BigInt::zero();
    let mut p = [
        [one.clone(), zero.clone(), zero.clone()],
        [zero.clone(), one.clone(), zero.clone()],
        [zero.clone(), zero, one],
    ];
    let mut v = v0.clone();
    let mut ok = true;
    let mut worst = f64::INFINITY;
    for n in 1..=cfg.n_max {
        let Some((w, b)) = exact_step(&v) else {
            return (false, true, worst);
        };
        v = w;
        mul_branch(&mut p, b);
        if n < cfg.n_min {
            continue;
        }
        for i in 0..3 {
            // row i of A = column i of P
            let pi = &p[0][i] + &p[1][i] + &p[2][i];
            let ln_pi = big_ln(&pi);
            let d = (1..3)
                .map(|j| (&p[j][i] * &s0 - &pi * &v0[j]).abs())
                .max()
                .expect("two entries");
            let ln_d = if d.is_zero() { f64::NEG_INFINITY } else { big_ln(&d) - ln_s0 };
            worst = worst.min(-ln_d / ln_pi);
            if ln_d >= (1.0 - cfg.alpha) * ln_pi {
                ok = false;
            }
        }
    }
    (ok, false, worst)
}

pub fn convergence_witness(cfg: &WitnessConfig) -> Result<WitnessReport> {
    if cfg.samples == 0 || cfg.n_min > cfg.n_max || cfg.bits < 64 {
        return Err(Error::Invalid(format!("bad witness config {cfg:?}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut passed = 0;
    let mut terminated = 0;
    let mut worst = f64::INFINITY;
    for _ in 0..cfg.samples {
        let (ok, term, w) = check_orbit(random_point(&mut rng, cfg.bits), cfg);
        passed += ok as usize;
        terminated += term as usize;
        worst = worst.min(w);
    }
    Ok(WitnessReport {
        config: *cfg,
        passed,
        terminated,
        fraction: passed as f64 / cfg.samples as f64,
        worst_exponent: worst,
    })
}
