//! Exhaustive traversal of the word tree {1,2,3,4}ⁿ with exact prefix products.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{mat_mul, IntMatrix3, NormKind};
use crate::reverse_cfa::{Branch, SortedBranch};
use crate::Scalar;

/// Which Reverse algorithm to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Unsorted,
    Sorted,
}

impl Variant {
    pub fn matrices(self) -> [IntMatrix3; 4] {
        match self {
            Variant::Unsorted => Branch::ALL.map(|b| b.matrix()),
            Variant::Sorted => SortedBranch::ALL.map(|b| b.matrix()),
        }
    }

    /// True if the uniform word iⁿ is left out of the 𝕃₂ sum.
    pub fn excludes_uniform(self, i: usize) -> bool {
        match self {
            Variant::Unsorted => i < 3,
            Variant::Sorted => i == 0,
        }
    }

    pub fn excluded_count(self) -> u64 {
        (0..4).filter(|&i| self.excludes_uniform(i)).count() as u64
    }

    pub fn max_n(self) -> usize {
        match self {
            Variant::Unsorted => 14,
            Variant::Sorted => 13,
        }
    }
}

/// Per-cylinder quantities entering the 𝕃₂ sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Leaf<T> {
    pub area: T,
    pub max_log: T,
    /// Product of the per-factor density maxima over the vertices.
    pub dens_hi: T,
    pub dens_lo: T,
}

impl<T: Scalar> Leaf<T> {
    /// The 𝕃₂ summand: max densities for positive maxima, min densities otherwise.
    pub fn term(&self) -> T {
        let d = if self.max_log > T::zero() { self.dens_hi } else { self.dens_lo };
        d * self.area * self.max_log
    }

    /// The same with the density choice reversed.
    pub fn swapped_term(&self) -> T {
        let d = if self.max_log > T::zero() { self.dens_lo } else { self.dens_hi };
        d * self.area * self.max_log
    }
}

#[inline]
fn norm2<T: Scalar>(m: [[T; 2]; 2], kind: NormKind) -> T {
    match kind {
        NormKind::RowSum => (m[0][0].abs() + m[0][1].abs()).max(m[1][0].abs() + m[1][1].abs()),
        NormKind::Induced => (m[0][0].abs() + m[1][0].abs()).max(m[0][1].abs() + m[1][1].abs()),
        NormKind::Entrywise => m[0][0].abs() + m[0][1].abs() + m[1][0].abs() + m[1][1].abs(),
    }
}

/// Unsorted leaf from the untransposed product P (A = ᵗP, so row i of A is
/// column i of P).
pub fn unsorted_leaf<T: Scalar>(p: &IntMatrix3, norm: NormKind) -> Result<Leaf<T>> {
    let col = |i: usize| p.col(i);
    let mut r = [0i64; 3];
    for (i, ri) in r.iter_mut().enumerate() {
        let c = col(i);
        *ri = c[0]
            .checked_add(c[1])
            .and_then(|s| s.checked_add(c[2]))
            .ok_or(Error::Overflow("row sum"))?;
    }
    let det = p.det()?;
    let rf = r.map(T::of_i64);
    let area = T::of_i64(det.abs()) / (T::of(2.0) * rf[0] * rf[1] * rf[2]);
    let a = |i: usize, j: usize| T::of_i64(p.get(j, i));
    let one = T::one();
    let mut dens_hi = [T::zero(); 3];
    let mut dens_lo = [T::infinity(); 3];
    let mut max_log = T::neg_infinity();
    let dp = [rf[1] - rf[0], rf[2] - rf[0]];
    for v in 0..3 {
        let x = [a(v, 0) / rf[v], a(v, 1) / rf[v], a(v, 2) / rf[v]];
        for j in 0..3 {
            let q = one / (one - x[j]);
            dens_hi[j] = dens_hi[j].max(q);
            dens_lo[j] = dens_lo[j].min(q);
        }
        let mut d = [[T::zero(); 2]; 2];
        for j in 0..2 {
            for k in 0..2 {
                d[j][k] = a(j + 1, k + 1) - a(0, k + 1) - dp[j] * x[k + 1];
            }
        }
        max_log = max_log.max(norm2(d, norm).ln());
    }
    Ok(Leaf {
        area,
        max_log,
        dens_hi: dens_hi[0] * dens_hi[1] * dens_hi[2],
        dens_lo: dens_lo[0] * dens_lo[1] * dens_lo[2],
    })
}

/// Sorted leaf: vertices P·c for the corners c of Δ′, shoelace area.
pub fn sorted_leaf<T: Scalar>(p: &IntMatrix3, norm: NormKind) -> Result<Leaf<T>> {
    let corners = crate::reverse_cfa::sorted::SORTED_CORNERS;
    let mut v = [[T::zero(); 2]; 3];
    for (vt, c) in v.iter_mut().zip(corners) {
        let q = p.apply(c)?;
        let q0 = T::of_i64(q[0]);
        *vt = [T::of_i64(q[1]) / q0, T::of_i64(q[2]) / q0];
    }
    let area = crate::reverse_cfa::shoelace(v);
    let a = |i: usize, j: usize| T::of_i64(p.get(j, i));
    let one = T::one();
    let mut dens_hi = [T::zero(); 3];
    let mut dens_lo = [T::infinity(); 3];
    let mut max_log = T::neg_infinity();
    for x in v {
        let q = [one / (one + x[0]), one / (one + x[1]), one / (x[0] + x[1])];
        for j in 0..3 {
            dens_hi[j] = dens_hi[j].max(q[j]);
            dens_lo[j] = dens_lo[j].min(q[j]);
        }
        let mut d = [[T::zero(); 2]; 2];
        for j in 0..2 {
            for k in 0..2 {
                d[j][k] = a(j + 1, k + 1) - a(j + 1, 0) * x[k];
            }
        }
        max_log = max_log.max(norm2(d, norm).ln());
    }
    Ok(Leaf {
        area,
        max_log,
        dens_hi: dens_hi[0] * dens_hi[1] * dens_hi[2],
        dens_lo: dens_lo[0] * dens_lo[1] * dens_lo[2],
    })
}

pub fn leaf<T: Scalar>(variant: Variant, p: &IntMatrix3, norm: NormKind) -> Result<Leaf<T>> {
    match variant {
        Variant::Unsorted => unsorted_leaf(p, norm),
        Variant::Sorted => sorted_leaf(p, norm),
    }
}

/// Unscaled partial sums over a set of leaves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sums<T> {
    pub positive: T,
    pub negative: T,
    pub swapped_positive: T,
    pub swapped_negative: T,
    pub abs_sum: T,
    pub count: u64,
}

impl<T: Scalar> Sums<T> {
    pub fn zero() -> Self {
        let z = T::zero();
        Self {
            positive: z,
            negative: z,
            swapped_positive: z,
            swapped_negative: z,
            abs_sum: z,
            count: 0,
        }
    }

    fn add_leaf(&mut self, l: &Leaf<T>) {
        let t = l.term();
        let s = l.swapped_term();
        if l.max_log > T::zero() {
            self.positive = self.positive + t;
            self.swapped_positive = self.swapped_positive + s;
        } else {
            self.negative = self.negative + t;
            self.swapped_negative = self.swapped_negative + s;
        }
        self.abs_sum = self.abs_sum + t.abs();
        self.count += 1;
    }

    pub fn merge(&mut self, o: &Self) {
        self.positive = self.positive + o.positive;
        self.negative = self.negative + o.negative;
        self.swapped_positive = self.swapped_positive + o.swapped_positive;
        self.swapped_negative = self.swapped_negative + o.swapped_negative;
        self.abs_sum = self.abs_sum + o.abs_sum;
        self.count += o.count;
    }

    pub fn total(&self) -> T {
        self.positive + self.negative
    }

    pub fn swapped_total(&self) -> T {
        self.swapped_positive + self.swapped_negative
    }
}

/// Partial sums of one top-level subtree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrefixSums<T> {
    /// 0-based symbol indices of the prefix.
    pub prefix: Vec<usize>,
    pub sums: Sums<T>,
}

struct Walker<'a> {
    mats: &'a [IntMatrix3; 4],
    variant: Variant,
    norm: NormKind,
    n: usize,
}

impl Walker<'_> {
    fn walk<T: Scalar>(&self, p: &IntMatrix3, depth: usize, uniform: Option<usize>, acc: &mut Sums<T>) -> Result<()> {
        if depth == self.n {
            if let Some(u) = uniform {
                if self.variant.excludes_uniform(u) {
                    return Ok(());
                }
            }
            let l = leaf::<T>(self.variant, p, self.norm)?;
            acc.add_leaf(&l);
            return Ok(());
        }
        for (i, m) in self.mats.iter().enumerate() {
            let q = mat_mul(p, m)?;
            let u = match uniform {
                Some(u) if u == i => Some(u),
                _ => None,
            };
            self.walk(&q, depth + 1, u, acc)?;
        }
        Ok(())
    }
}

pub const SPLIT_DEPTH: usize = 3;

/// Enumerates all words of length `n`, returning per-prefix partial sums in
/// lexicographic prefix order. The per-prefix traversal is sequential, so
/// the result does not depend on the number of worker threads.
pub fn enumerate<T: Scalar>(
    variant: Variant,
    n: usize,
    norm: NormKind,
    threads: Option<usize>,
) -> Result<Vec<PrefixSums<T>>> {
    if n < 1 || n > variant.max_n() {
        return Err(Error::Parameter {
            name: "n",
            value: n as i64,
            range: if variant == Variant::Unsorted { "[1, 14]" } else { "[1, 13]" },
        });
    }
    let mats = variant.matrices();
    let split = SPLIT_DEPTH.min(n);
    let prefixes: Vec<Vec<usize>> = (0..4usize.pow(split as u32))
        .map(|k| (0..split).rev().map(|d| (k >> (2 * d)) & 3).collect())
        .collect();
    let walker = Walker {
        mats: &mats,
        variant,
        norm,
        n,
    };
    let job = |pre: &Vec<usize>| -> Result<PrefixSums<T>> {
        let mut p = IntMatrix3::IDENTITY;
        for &i in pre {
            p = mat_mul(&p, &mats[i])?;
        }
        let uniform = if pre.iter().all(|&i| i == pre[0]) { Some(pre[0]) } else { None };
        let mut acc = Sums::zero();
        walker.walk(&p, split, uniform, &mut acc)?;
        Ok(PrefixSums {
            prefix: pre.clone(),
            sums: acc,
        })
    };
    let run = || prefixes.par_iter().map(job).collect::<Result<Vec<_>>>();
    match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| Error::ResourceCap(e.to_string()))?
            .install(run),
        None => run(),
    }
}

/// Sum of per-prefix partial sums in canonical order.
pub fn reduce<T: Scalar>(parts: &[PrefixSums<T>]) -> Sums<T> {
    let mut s = Sums::zero();
    for p in parts {
        s.merge(&p.sums);
    }
    s
}
