use serde::{Deserialize, Serialize};

use super::branch::Word;
use super::cylinder::{cocycle_matrix, Cylinder};
use crate::error::Result;
use crate::exactlin::{IntMatrix3, Mat2, NormKind, RealMatrix3, Vec3};
use crate::Scalar;

/// 2×2 matrix whose entries are affine in (x₁, x₂): e = c + a·x₁ + b·x₂.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineField2x2<T> {
    pub c: [[T; 2]; 2],
    pub a: [[T; 2]; 2],
    pub b: [[T; 2]; 2],
}

impl<T: Scalar> AffineField2x2<T> {
    /// D⁽ⁿ⁾ = Π·A·H(x) for a constant cocycle matrix A.
    ///
    /// Entry (j,k) is A_{jk} − A_{0k} − (p_j − p₀)·x_k with p the row sums.
    pub fn from_cocycle(a: &IntMatrix3) -> Result<Self> {
        let p = a.row_sums()?;
        let z = T::zero();
        let mut f = Self {
            c: [[z; 2]; 2],
            a: [[z; 2]; 2],
            b: [[z; 2]; 2],
        };
        for j in 0..2 {
            let dp = T::of_i64(p[j + 1] - p[0]);
            for k in 0..2 {
                f.c[j][k] = T::of_i64(a.get(j + 1, k + 1) - a.get(0, k + 1));
            }
            f.a[j][0] = -dp;
            f.b[j][1] = -dp;
        }
        Ok(f)
    }

    pub fn eval(&self, x1: T, x2: T) -> Mat2<T> {
        let mut m = [[T::zero(); 2]; 2];
        for j in 0..2 {
            for k in 0..2 {
                m[j][k] = self.c[j][k] + self.a[j][k] * x1 + self.b[j][k] * x2;
            }
        }
        Mat2::new(m)
    }

    pub fn eval_at(&self, x: &Vec3<T>) -> Mat2<T> {
        self.eval(x[1], x[2])
    }
}

/// The affine field D⁽ⁿ⁾ on the cylinder of `w`.
pub fn d_field<T: Scalar>(w: &Word) -> Result<AffineField2x2<T>> {
    AffineField2x2::from_cocycle(&cocycle_matrix(w)?)
}

/// H(x), a 3×2 matrix.
pub fn h_matrix<T: Scalar>(x: &Vec3<T>) -> [[T; 2]; 3] {
    let o = T::one();
    [[-x[1], -x[2]], [o - x[1], -x[2]], [-x[1], o - x[2]]]
}

/// Π·M·H(x) evaluated directly, for any real 3×3 `M`.
pub fn pi_m_h<T: Scalar>(m: &RealMatrix3<T>, x: &Vec3<T>) -> Mat2<T> {
    let h = h_matrix(x);
    let mh = mul_3x3_3x2(&m.m, &h);
    // Π = [[-1,1,0],[-1,0,1]]
    let mut out = [[T::zero(); 2]; 2];
    for k in 0..2 {
        out[0][k] = mh[1][k] - mh[0][k];
        out[1][k] = mh[2][k] - mh[0][k];
    }
    Mat2::new(out)
}

/// H(y)·Π·M·H(x) and M·H(x), the two sides of the identity used for the
/// cocycle property of D.
pub fn hpweg_sides<T: Scalar>(m: &RealMatrix3<T>, x: &Vec3<T>, y: &Vec3<T>) -> ([[T; 2]; 3], [[T; 2]; 3]) {
    let d = pi_m_h(m, x);
    let hy = h_matrix(y);
    let mut lhs = [[T::zero(); 2]; 3];
    for i in 0..3 {
        for k in 0..2 {
            lhs[i][k] = hy[i][0] * d.m[0][k] + hy[i][1] * d.m[1][k];
        }
    }
    (lhs, mul_3x3_3x2(&m.m, &h_matrix(x)))
}

fn mul_3x3_3x2<T: Scalar>(m: &[[T; 3]; 3], h: &[[T; 2]; 3]) -> [[T; 2]; 3] {
    let mut out = [[T::zero(); 2]; 3];
    for i in 0..3 {
        for k in 0..2 {
            out[i][k] = m[i][0] * h[0][k] + m[i][1] * h[1][k] + m[i][2] * h[2][k];
        }
    }
    out
}

/// max over the cylinder of log‖D⁽ⁿ⁾(x)‖, attained at a vertex by convexity.
pub fn max_log_d_norm<T: Scalar>(c: &Cylinder<T>, norm: NormKind) -> Result<T> {
    let f = AffineField2x2::<T>::from_cocycle(&c.product)?;
    Ok(c.vertices
        .iter()
        .map(|v| f.eval_at(v).norm(norm).ln())
        .fold(T::neg_infinity(), T::max))
}

#[cfg(test)]
mod tests {
    use super::super::branch::{orbit, step, Branch};
    use super::super::cylinder::cylinder_data;
    use super::*;
    use crate::exactlin::SimplexPoint;
    use rand::{Rng, SeedableRng};

    #[test]
    fn empty_word_field_is_identity() {
        let f = d_field::<f64>(&Word::empty()).unwrap();
        for (x1, x2) in [(0.1, 0.2), (0.5, 0.3), (0.0, 0.9)] {
            assert_eq!(f.eval(x1, x2), Mat2::identity());
        }
    }

    #[test]
    fn field_matches_direct_product() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let len = rng.gen_range(0..12);
            let w = Word::random(&mut rng, len);
            let a = cocycle_matrix(&w).unwrap();
            let f = AffineField2x2::<f64>::from_cocycle(&a).unwrap();
            let x = Vec3::new(rng.gen::<f64>(), rng.gen(), rng.gen());
            let x = x.scale(1.0 / x.sum());
            let direct = pi_m_h(&a.to_real(), &x);
            let scale = direct.max_abs().max(1.0);
            assert!(f.eval_at(&x).max_abs_diff(&direct) <= 1e-12 * scale);
        }
    }

    #[test]
    fn cocycle_and_hpweg_identities() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 300 {
            let v: [f64; 3] = [rng.gen(), rng.gen(), rng.gen()];
            let s: f64 = v.iter().sum();
            let x = SimplexPoint::new(v[0] / s, v[1] / s, v[2] / s).unwrap();
            let (nu, nv) = (rng.gen_range(0..6), rng.gen_range(0..6));
            let Ok((y, word)) = orbit(&x, nu + nv) else { continue };
            let (u, vw) = word.split_at(nu);
            let Ok((xu, _)) = orbit(&x, nu) else { continue };
            let whole = d_field::<f64>(&word).unwrap().eval_at(&x.as_vec());
            let first = d_field::<f64>(&u).unwrap().eval_at(&x.as_vec());
            let second = d_field::<f64>(&vw).unwrap().eval_at(&xu.as_vec());
            let comp = second.mul(&first);
            assert!(whole.max_abs_diff(&comp) <= 1e-8 * whole.max_abs().max(1.0));

            let a = cocycle_matrix(&word).unwrap().to_real();
            let (lhs, rhs) = hpweg_sides(&a, &x.as_vec(), &y.as_vec());
            for i in 0..3 {
                for k in 0..2 {
                    assert!((lhs[i][k] - rhs[i][k]).abs() <= 1e-8 * rhs[i][k].abs().max(1.0));
                }
            }
            checked += 1;
        }
    }

    #[test]
    fn uniform_one_words() {
        // Exact vertex maximum on Δ(1ⁿ); the closed form used for 𝕃₁ dominates it.
        for n in 2..=15usize {
            let c = cylinder_data::<f64>(&Word::power(Branch::B1, n)).unwrap();
            let nf = n as f64;
            let row = max_log_d_norm(&c, NormKind::RowSum).unwrap();
            assert!((row - ((2.0 * nf + 1.0) / (nf + 1.0)).ln()).abs() < 1e-14);
            let col = max_log_d_norm(&c, NormKind::Induced).unwrap();
            assert!(col.abs() < 1e-14);
            if n >= 3 {
                let closed = (2.0 * nf * (nf - 1.0) / (nf + 1.0) - 1.0).ln();
                assert!(row <= closed && col <= closed);
            }
        }
    }

    #[test]
    fn vertex_maximum_dominates_grid() {
        for word in ["4", "14", "2431"] {
            let w: Word = word.parse().unwrap();
            let c = cylinder_data::<f64>(&w).unwrap();
            let f = d_field::<f64>(&w).unwrap();
            for norm in [NormKind::RowSum, NormKind::Induced, NormKind::Entrywise] {
                let vmax = max_log_d_norm(&c, norm).unwrap();
                let k = 140;
                for i in 0..=k {
                    for j in 0..=(k - i) {
                        let (s, t) = (i as f64 / k as f64, j as f64 / k as f64);
                        let p = c.vertices[0].scale(1.0 - s - t) + c.vertices[1].scale(s) + c.vertices[2].scale(t);
                        assert!(f.eval_at(&p).norm(norm).ln() <= vmax + 1e-12);
                    }
                }
                let bc = (c.vertices[0] + c.vertices[1] + c.vertices[2]).scale(1.0 / 3.0);
                assert!(f.eval_at(&bc).norm(norm).ln() <= vmax);
            }
        }
    }

    #[test]
    fn one_step_field_is_constant_branch_matrix() {
        let x = SimplexPoint::new(0.6, 0.3, 0.1).unwrap();
        let (_, b) = step(&x).unwrap();
        let f = d_field::<f64>(&Word(vec![b])).unwrap().eval_at(&x.as_vec());
        let direct = pi_m_h(&b.matrix().transpose().to_real(), &x.as_vec());
        assert!(f.max_abs_diff(&direct) < 1e-15);
    }
}
