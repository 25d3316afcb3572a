use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::enumerate::{enumerate, reduce, PrefixSums, Sums, Variant};
use super::measure::density_xy;
use super::quadrature::integrate_triangle;
use crate::error::{Error, Result};
use crate::exactlin::NormKind;
use crate::reverse_cfa::sorted_density_kernel;
use crate::Scalar;

const L1_TOL: f64 = 1e-10;

fn check_n(n: usize, lo: usize, hi: usize) -> Result<()> {
    if n < lo || n > hi {
        return Err(Error::Parameter {
            name: "n",
            value: n as i64,
            range: if hi == 14 { "[2, 14]" } else { "[2, 13]" },
        });
    }
    Ok(())
}

/// log(2n(n−1)/(n+1) − 1), the bound on log‖D⁽ⁿ⁾‖ used over Δ(iⁿ).
pub fn l1_log_factor<T: Scalar>(n: usize) -> T {
    let nf = T::of_i64(n as i64);
    let (one, two) = (T::one(), T::of(2.0));
    (two * nf * (nf - one) / (nf + one) - one).ln()
}

/// μ(Δ(1ⁿ)): h integrated over the triangle x₁ + x₂ ≤ 1/(n+1).
pub fn uniform_cylinder_mass<T: Scalar>(n: usize) -> Result<T> {
    let k = T::one() / T::of_i64(n as i64 + 1);
    let z = T::zero();
    let tri = [[z, z], [k, z], [z, k]];
    Ok(integrate_triangle(&|x, y| density_xy(x, y), tri, T::of(L1_TOL))?.value)
}

/// 𝕃₁(n) = 3/n · log(2n(n−1)/(n+1) − 1) · μ(Δ(1ⁿ)).
pub fn l1_bound<T: Scalar>(n: usize) -> Result<T> {
    check_n(n, 2, 14)?;
    let nf = T::of_i64(n as i64);
    Ok(T::of(3.0) / nf * l1_log_factor::<T>(n) * uniform_cylinder_mass::<T>(n)?)
}

/// Variant of 𝕃₁ integrating over the square [0, 1/(n+1)]² instead of Δ(1ⁿ).
pub fn l1_bound_square(n: usize) -> Result<f64> {
    check_n(n, 2, 14)?;
    let k = 1.0 / (n as f64 + 1.0);
    let f = |x, y| density_xy(x, y);
    // split along the diagonal so the origin singularity sits at a collapsed vertex
    let a = integrate_triangle(&f, [[0.0, 0.0], [k, 0.0], [k, k]], L1_TOL)?.value;
    let b = integrate_triangle(&f, [[0.0, 0.0], [k, k], [0.0, k]], L1_TOL)?.value;
    Ok(3.0 / n as f64 * l1_log_factor::<f64>(n) * (a + b))
}

/// 𝕃′₁(n) = 24/(π²n) · log(1 + n/(n+1)) · ∫_{Δ′((1,id)ⁿ)} kernel.
pub fn sorted_l1_bound<T: Scalar>(n: usize) -> Result<T> {
    check_n(n, 2, 13)?;
    let nf = T::of_i64(n as i64);
    let one = T::one();
    let k = one / (nf + one);
    let d = one / (T::of(2.0) * nf + one);
    let z = T::zero();
    let tri = [[z, z], [k, z], [d, d]];
    let m = integrate_triangle(&|x, y| sorted_density_kernel(x, y), tri, T::of(L1_TOL))?.value;
    Ok(sorted_prefactor::<T>(n) * (one + nf / (nf + one)).ln() * m)
}

pub fn unsorted_prefactor<T: Scalar>(n: usize) -> T {
    T::of(4.0) / (T::PI() * T::PI() * T::of_i64(n as i64))
}

pub fn sorted_prefactor<T: Scalar>(n: usize) -> T {
    T::of(24.0) / (T::PI() * T::PI() * T::of_i64(n as i64))
}

/// Scaled 𝕃₂ sum with its error budget.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct L2Result<T> {
    pub value: T,
    pub positive: T,
    pub negative: T,
    /// The sum with max/min density choices swapped.
    pub swapped: T,
    pub accumulated_error: f64,
    pub word_count: u64,
    pub prefixes: Vec<PrefixSums<T>>,
}

/// Rounding budget: a floor of 2⁻⁴⁸ per word plus a Wilkinson-type bound
/// for the sequential summation of |terms|.
fn error_budget(word_count: u64, abs_sum: f64, prefactor: f64) -> f64 {
    let n = word_count as f64;
    n * 2f64.powi(-48) + prefactor * (n + 32.0) * f64::EPSILON * abs_sum
}

pub fn l2_enumerate<T: Scalar>(
    variant: Variant,
    n: usize,
    norm: NormKind,
    threads: Option<usize>,
) -> Result<L2Result<T>> {
    match variant {
        Variant::Unsorted => check_n(n, 2, 14)?,
        Variant::Sorted => check_n(n, 2, 13)?,
    }
    let prefixes = enumerate::<T>(variant, n, norm, threads)?;
    let s: Sums<T> = reduce(&prefixes);
    let c = match variant {
        Variant::Unsorted => unsorted_prefactor::<T>(n),
        Variant::Sorted => sorted_prefactor::<T>(n),
    };
    Ok(L2Result {
        value: c * s.total(),
        positive: c * s.positive,
        negative: c * s.negative,
        swapped: c * s.swapped_total(),
        accumulated_error: error_budget(s.count, s.abs_sum.to_f64_lossy(), c.to_f64_lossy()),
        word_count: s.count,
        prefixes,
    })
}

/// 𝕃₂(n) with the default norm.
pub fn l2_bound(n: usize) -> Result<f64> {
    Ok(l2_enumerate::<f64>(Variant::Unsorted, n, NormKind::default(), None)?.value)
}

/// (𝕃′₁(n), 𝕃′₂(n)) with the default norm.
pub fn sorted_l_bounds(n: usize) -> Result<(f64, f64)> {
    let l2 = l2_enumerate::<f64>(Variant::Sorted, n, NormKind::default(), None)?.value;
    Ok((sorted_l1_bound::<f64>(n)?, l2))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecheckReport {
    pub variant: Variant,
    pub n: usize,
    pub binary64: f64,
    /// 𝕃₂(n) recomputed with ~40 significant digits, rounded to binary64.
    pub extended: f64,
    pub diff: f64,
    /// The binary64 error budget the difference is compared against.
    pub budget: f64,
}

/// Recomputes 𝕃₂(n) in extended precision, n ≤ 8.
pub fn extended_recheck(variant: Variant, n: usize, norm: NormKind) -> Result<RecheckReport> {
    check_n(n, 2, 8)?;
    let a = l2_enumerate::<f64>(variant, n, norm, None)?;
    let b = l2_enumerate::<num_bigfloat::BigFloat>(variant, n, norm, None)?;
    let e = b.value.to_f64_lossy();
    Ok(RecheckReport {
        variant,
        n,
        binary64: a.value,
        extended: e,
        diff: (a.value - e).abs(),
        budget: a.accumulated_error,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    pub variant: Variant,
    pub n: usize,
    pub norm: NormKind,
    pub l1: f64,
    pub l2: f64,
    pub total: f64,
    pub l2_positive: f64,
    pub l2_negative: f64,
    pub accumulated_error: f64,
    pub word_count: u64,
    pub wall_time: Duration,
}

/// Full 𝕃₁ + 𝕃₂ report for either variant.
pub fn bound_report(variant: Variant, n: usize, norm: NormKind, threads: Option<usize>) -> Result<(BoundReport, Vec<PrefixSums<f64>>)> {
    let t0 = Instant::now();
    let l1 = match variant {
        Variant::Unsorted => l1_bound::<f64>(n)?,
        Variant::Sorted => sorted_l1_bound::<f64>(n)?,
    };
    let r = l2_enumerate::<f64>(variant, n, norm, threads)?;
    let report = BoundReport {
        variant,
        n,
        norm,
        l1,
        l2: r.value,
        total: l1 + r.value,
        l2_positive: r.positive,
        l2_negative: r.negative,
        accumulated_error: r.accumulated_error + L1_TOL,
        word_count: r.word_count,
        wall_time: t0.elapsed(),
    };
    Ok((report, r.prefixes))
}
