//! The sorted Reverse algorithm on Δ′ = {1 > x₁ > x₂ > 0} and its dual.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::cylinder::shoelace;
use crate::error::{Error, Result};
use crate::exactlin::{IntMatrix3, Mat2, NormKind, Vec2, Vec3};
use crate::Scalar;

/// Tolerance for the sorted domain inequalities.
pub const SORTED_TOL: f64 = 1e-14;

/// The four symbols (i, π) of the sorted alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SortedBranch {
    OneId,
    One213,
    One231,
    Four321,
}

impl SortedBranch {
    pub const ALL: [SortedBranch; 4] = [
        SortedBranch::OneId,
        SortedBranch::One213,
        SortedBranch::One231,
        SortedBranch::Four321,
    ];

    /// M_{i,π}.
    pub fn matrix(self) -> IntMatrix3 {
        match self {
            SortedBranch::OneId => IntMatrix3::new([[1, 1, 1], [0, 1, 0], [0, 0, 1]]),
            SortedBranch::One213 => IntMatrix3::new([[1, 1, 1], [1, 0, 0], [0, 0, 1]]),
            SortedBranch::One231 => IntMatrix3::new([[1, 1, 1], [1, 0, 0], [0, 1, 0]]),
            SortedBranch::Four321 => IntMatrix3::new([[1, 1, 0], [1, 0, 1], [0, 1, 1]]),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SortedBranch::OneId => "(1,id)",
            SortedBranch::One213 => "(1,(213))",
            SortedBranch::One231 => "(1,(231))",
            SortedBranch::Four321 => "(4,(321))",
        }
    }

    /// M_{i,π}⁻¹·(1, x₁, x₂), possibly scaled by 1/2.
    fn inverse_apply<T: Scalar>(self, x1: T, x2: T) -> [T; 3] {
        let o = T::one();
        let t = o - x1 - x2;
        match self {
            SortedBranch::OneId => [t, x1, x2],
            SortedBranch::One213 => [x1, t, x2],
            SortedBranch::One231 => [x1, x2, t],
            SortedBranch::Four321 => [o + x1 - x2, o - x1 + x2, x1 + x2 - o],
        }
    }
}

impl fmt::Display for SortedBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

pub fn in_sorted_domain<T: Scalar>(x: &Vec2<T>, tol: T) -> bool {
    T::one() - x[0] > tol && x[0] - x[1] > tol && x[1] > tol
}

/// Branch of a point of Δ′.
pub fn sorted_classify<T: Scalar>(x: &Vec2<T>) -> SortedBranch {
    let (x1, x2) = (x[0], x[1]);
    let t = T::one() - x1 - x2;
    if t <= T::zero() {
        SortedBranch::Four321
    } else if t > x1 {
        SortedBranch::OneId
    } else if t > x2 {
        SortedBranch::One213
    } else {
        SortedBranch::One231
    }
}

/// One step of the sorted map, renormalized by the first coordinate.
pub fn sorted_step<T: Scalar>(x: &Vec2<T>) -> Result<(Vec2<T>, SortedBranch)> {
    let tol = T::of(SORTED_TOL);
    if !in_sorted_domain(x, tol) {
        return Err(Error::OutOfDomain([x[0].to_f64_lossy(), x[1].to_f64_lossy(), 0.0]));
    }
    let b = sorted_classify(x);
    let y = b.inverse_apply(x[0], x[1]);
    let img = Vec2::new(y[1] / y[0], y[2] / y[0]);
    if !in_sorted_domain(&img, tol) {
        return Err(Error::GasketGuard { steps: 0 });
    }
    Ok((img, b))
}

pub type SortedWord = Vec<SortedBranch>;

/// M′ product (untransposed) of a sorted word.
pub fn sorted_product(w: &[SortedBranch]) -> Result<IntMatrix3> {
    w.iter()
        .try_fold(IntMatrix3::IDENTITY, |p, b| p.mul(&b.matrix()))
}

/// A′⁽ⁿ⁾ = ᵗ(M′_{a₀}⋯M′_{a_{n−1}}).
pub fn sorted_cocycle(w: &[SortedBranch]) -> Result<IntMatrix3> {
    sorted_product(w).map(|p| p.transpose())
}

/// Corner directions of Δ′ in projective coordinates.
pub const SORTED_CORNERS: [[i64; 3]; 3] = [[1, 0, 0], [1, 1, 0], [1, 1, 1]];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SortedCylinder<T> {
    pub word: SortedWord,
    /// A′⁽ⁿ⁾.
    pub product: IntMatrix3,
    pub vertices: [Vec2<T>; 3],
    pub leb_area: T,
}

impl<T: Scalar> SortedCylinder<T> {
    /// From the untransposed product P; vertices are P·c for the corners c.
    pub fn from_product(word: SortedWord, p: &IntMatrix3) -> Result<Self> {
        let mut vertices = [Vec2::new(T::zero(), T::zero()); 3];
        for (v, c) in vertices.iter_mut().zip(SORTED_CORNERS) {
            let q = p.apply(c)?;
            let q0 = T::of_i64(q[0]);
            *v = Vec2::new(T::of_i64(q[1]) / q0, T::of_i64(q[2]) / q0);
        }
        let leb_area = shoelace(vertices.map(|v| v.0));
        Ok(Self {
            word,
            product: p.transpose(),
            vertices,
            leb_area,
        })
    }
}

pub fn sorted_cylinder<T: Scalar>(w: &[SortedBranch]) -> Result<SortedCylinder<T>> {
    SortedCylinder::from_product(w.to_vec(), &sorted_product(w)?)
}

/// D′ = [[0,1,0],[0,0,1]]·A′·[[−x₁,−x₂],[1,0],[0,1]] at x.
pub fn sorted_d_matrix<T: Scalar>(a: &IntMatrix3, x: &Vec2<T>) -> Mat2<T> {
    let e = |i: usize, j: usize| T::of_i64(a.get(i, j));
    let mut m = [[T::zero(); 2]; 2];
    for j in 0..2 {
        for k in 0..2 {
            m[j][k] = e(j + 1, k + 1) - e(j + 1, 0) * x[k];
        }
    }
    Mat2::new(m)
}

pub fn sorted_max_log_d_norm<T: Scalar>(c: &SortedCylinder<T>, norm: NormKind) -> T {
    c.vertices
        .iter()
        .map(|v| sorted_d_matrix(&c.product, v).norm(norm).ln())
        .fold(T::neg_infinity(), T::max)
}

/// Unnormalized invariant density of the sorted map on Δ′.
pub fn sorted_density_kernel<T: Scalar>(x1: T, x2: T) -> T {
    T::one() / ((T::one() + x1) * (T::one() + x2) * (x1 + x2))
}

/// Position of y relative to Δ′^# = {y > 0, y₁ + y₂ ≥ 1, |y₁ − y₂| ≤ 1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DomainStatus {
    Interior,
    Boundary,
    Outside,
}

pub fn dual_domain_status<T: Scalar>(y: &Vec2<T>) -> DomainStatus {
    let tol = T::of(SORTED_TOL);
    let o = T::one();
    let slack = [y[0], y[1], y[0] + y[1] - o, o - (y[0] - y[1]).abs()];
    if slack.iter().any(|s| *s < -tol) {
        DomainStatus::Outside
    } else if slack.iter().any(|s| *s <= tol) {
        DomainStatus::Boundary
    } else {
        DomainStatus::Interior
    }
}

/// Dual partition of Δ′^#. In projective coordinates Δ′^# is the triangle
/// spanned by (1,1,0), (1,0,1), (0,1,1); the four pieces are its midpoint
/// subdivision, and piece b is the image of Δ′^# under ᵗM′_b.
pub fn dual_classify<T: Scalar>(y: &Vec2<T>) -> SortedBranch {
    let (o, three) = (T::one(), T::of(3.0));
    if y[0] + y[1] > three {
        SortedBranch::OneId
    } else if o + y[1] > three * y[0] {
        SortedBranch::One213
    } else if o + y[0] > three * y[1] {
        SortedBranch::One231
    } else {
        SortedBranch::Four321
    }
}

/// ᵗM′_b·(1, y₁, y₂), renormalized by the first coordinate.
pub fn dual_branch_image<T: Scalar>(b: SortedBranch, y: &Vec2<T>) -> Vec2<T> {
    let a = b.matrix().transpose().to_real::<T>();
    let v = a.apply(&Vec3::new(T::one(), y[0], y[1]));
    Vec2::new(v[1] / v[0], v[2] / v[0])
}

/// The dual map y ↦ A′(y)·y with A′ read off the dual partition.
pub fn dual_step<T: Scalar>(y: &Vec2<T>) -> Result<Vec2<T>> {
    if dual_domain_status(y) == DomainStatus::Outside {
        return Err(Error::OutOfDomain([y[0].to_f64_lossy(), y[1].to_f64_lossy(), 0.0]));
    }
    Ok(dual_branch_image(dual_classify(y), y))
}

/// Natural extension (x, y) ↦ (f′(x), ᵗM′_{a(x)}·y).
pub fn natural_extension_step<T: Scalar>(x: &Vec2<T>, y: &Vec2<T>) -> Result<(Vec2<T>, Vec2<T>)> {
    let (fx, b) = sorted_step(x)?;
    Ok((fx, dual_branch_image(b, y)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reverse_cfa::{branch::M1, classify, step, Branch};
    use crate::exactlin::SimplexPoint;
    use rand::{Rng, SeedableRng};

    fn v(a: f64, b: f64) -> Vec2<f64> {
        Vec2::new(a, b)
    }

    #[test]
    fn classification_regions() {
        assert_eq!(sorted_classify(&v(0.9, 0.8)), SortedBranch::Four321);
        assert_eq!(sorted_classify(&v(0.2, 0.1)), SortedBranch::OneId);
        assert_eq!(sorted_classify(&v(0.5, 0.1)), SortedBranch::One213);
        assert_eq!(sorted_classify(&v(0.5, 0.4)), SortedBranch::One231);
    }

    #[test]
    fn first_symbol_agrees_with_unsorted() {
        assert_eq!(SortedBranch::OneId.matrix(), M1);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let (a, b): (f64, f64) = (rng.gen(), rng.gen());
            let x = v(a.max(b), a.min(b));
            if !in_sorted_domain(&x, 1e-9) {
                continue;
            }
            let s = 1.0 + x[0] + x[1];
            let p = SimplexPoint::new(1.0 / s, x[0] / s, x[1] / s).unwrap();
            let Ok((q, ub)) = step(&p) else { continue };
            let Ok((y, sb)) = sorted_step(&x) else { continue };
            assert_eq!(ub == Branch::B1, sb != SortedBranch::Four321);
            let mut c = q.coords();
            c.sort_by(|a, b| b.partial_cmp(a).unwrap());
            assert!((c[1] / c[0] - y[0]).abs() < 1e-12 && (c[2] / c[0] - y[1]).abs() < 1e-12);
            assert_eq!(classify(&p) == Branch::B4, sb == SortedBranch::Four321);
        }
    }

    #[test]
    fn images_stay_in_domain() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..2000 {
            let (a, b): (f64, f64) = (rng.gen(), rng.gen());
            let mut x = v(a.max(b), a.min(b));
            for _ in 0..50 {
                match sorted_step(&x) {
                    Ok((y, _)) => {
                        assert!(in_sorted_domain(&y, 0.0));
                        x = y;
                    }
                    Err(_) => break,
                }
            }
        }
    }

    #[test]
    fn step_inverts_cylinder_map() {
        // The image of a cylinder vertex direction goes back to a corner of Δ′.
        for b in SortedBranch::ALL {
            let c = sorted_cylinder::<f64>(&[b]).unwrap();
            let inside = (c.vertices[0] + c.vertices[1] + c.vertices[2]) * (1.0 / 3.0);
            let (_, got) = sorted_step(&inside).unwrap();
            assert_eq!(got, b);
        }
        let total: f64 = SortedBranch::ALL
            .iter()
            .map(|b| sorted_cylinder::<f64>(&[*b]).unwrap().leb_area)
            .sum();
        assert!((total - 0.5).abs() < 1e-15);
    }

    #[test]
    fn dual_partition_and_domain() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        let mut n = 0;
        while n < 2000 {
            let y = v(rng.gen::<f64>() * 6.0, rng.gen::<f64>() * 6.0);
            if dual_domain_status(&y) != DomainStatus::Interior {
                continue;
            }
            n += 1;
            let b = dual_classify(&y);
            // y lies in the image of Δ′^# under branch b
            let a = b.matrix().transpose().to_real::<f64>();
            let pre = crate::exactlin::RealMatrix3::new(invert(&a.m)).apply(&Vec3::new(1.0, y[0], y[1]));
            let pre = v(pre[1] / pre[0], pre[2] / pre[0]);
            assert!(pre[0] > 0.0 || pre[1] > 0.0);
            assert_ne!(dual_domain_status(&pre), DomainStatus::Outside, "{y:?} {b:?} {pre:?}");
            let mut z = y;
            for _ in 0..100 {
                z = dual_step(&z).unwrap();
                assert_ne!(dual_domain_status(&z), DomainStatus::Outside);
            }
        }
        assert_eq!(dual_domain_status(&v(0.5, 0.5)), DomainStatus::Boundary);
        assert!(dual_step(&v(0.2, 0.2)).is_err());
    }

    fn invert(m: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        let c = |i: usize, j: usize| {
            let (r0, r1) = ((i + 1) % 3, (i + 2) % 3);
            let (c0, c1) = ((j + 1) % 3, (j + 2) % 3);
            m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]
        };
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[j][i] = c(i, j) / det;
            }
        }
        out
    }

    #[test]
    fn uniform_id_word_field() {
        // Δ′((1,id)ⁿ) and the maximal D′ row-sum norm log(1 + n/(n+1)).
        for n in 1..=12usize {
            let w = vec![SortedBranch::OneId; n];
            let c = sorted_cylinder::<f64>(&w).unwrap();
            let k = 1.0 / (n as f64 + 1.0);
            let expect = [v(0.0, 0.0), v(k, 0.0), v(1.0 / (2.0 * n as f64 + 1.0), 1.0 / (2.0 * n as f64 + 1.0))];
            for (a, b) in c.vertices.iter().zip(expect) {
                assert!((a[0] - b[0]).abs() < 1e-15 && (a[1] - b[1]).abs() < 1e-15);
            }
            let m = sorted_max_log_d_norm(&c, NormKind::RowSum);
            assert!((m - (1.0 + n as f64 / (n as f64 + 1.0)).ln()).abs() < 1e-14);
        }
    }
}
