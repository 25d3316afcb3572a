use serde::{Deserialize, Serialize};

use super::branch::Word;
use crate::error::{Error, Result};
use crate::exactlin::{IntMatrix3, SimplexPoint, Vec3};
use crate::Scalar;

/// M_{a₀}⋯M_{a_{n−1}} (untransposed).
pub fn branch_product(w: &Word) -> Result<IntMatrix3> {
    if w.len() > Word::MAX_COCYCLE_LEN {
        return Err(Error::WordTooLong {
            len: w.len(),
            max: Word::MAX_COCYCLE_LEN,
        });
    }
    w.iter()
        .try_fold(IntMatrix3::IDENTITY, |p, b| p.mul(&b.matrix()))
}

/// A⁽ⁿ⁾ = ᵗ(M_{a₀}⋯M_{a_{n−1}}), constant on the cylinder of `w`.
pub fn cocycle_matrix(w: &Word) -> Result<IntMatrix3> {
    branch_product(w).map(|p| p.transpose())
}

/// Inverse branch g_w(y) = normalize(M_{a₀}⋯M_{a_{n−1}}·y), mapping Δ onto Δ(w).
pub fn inverse_branch<T: Scalar>(w: &Word, y: &SimplexPoint<T>) -> Result<SimplexPoint<T>> {
    let p = branch_product(w)?.to_real::<T>();
    crate::exactlin::normalize_to_simplex(p.apply(&y.as_vec()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cylinder<T> {
    pub word: Word,
    /// The cocycle matrix A⁽ⁿ⁾.
    pub product: IntMatrix3,
    /// Normalized rows of `product`; may lie on ∂Δ.
    pub vertices: [Vec3<T>; 3],
    pub det: i64,
    /// Lebesgue area of the projection to (x₁, x₂).
    pub leb_area: T,
}

impl<T: Scalar> Cylinder<T> {
    /// Builds the cylinder from an already computed cocycle matrix.
    pub fn from_cocycle(word: Word, a: IntMatrix3) -> Result<Self> {
        let r = a.row_sums()?;
        let det = a.det()?;
        let vertices = [0, 1, 2].map(|i| {
            let ri = T::of_i64(r[i]);
            Vec3(a.row(i).map(|e| T::of_i64(e) / ri))
        });
        let denom = T::of(2.0) * T::of_i64(r[0]) * T::of_i64(r[1]) * T::of_i64(r[2]);
        let leb_area = T::of_i64(det.abs()) / denom;
        Ok(Self {
            word,
            product: a,
            vertices,
            det,
            leb_area,
        })
    }

    pub fn rank(&self) -> usize {
        self.word.len()
    }

    /// Shoelace area of the vertex projections to (x₁, x₂).
    pub fn shoelace_area(&self) -> T {
        shoelace([0, 1, 2].map(|i| [self.vertices[i][1], self.vertices[i][2]]))
    }

    pub fn contains(&self, x: &SimplexPoint<T>) -> bool {
        // barycentric coordinates w.r.t. the (unnormalized) rows are ᵗA⁻¹x ≥ 0
        let a = self.product.to_real::<T>();
        let c = solve3(&a.transpose().m, &x.as_vec().0);
        c.iter().all(|v| *v >= -T::of(1e-12))
    }
}

/// Twice-signed shoelace, halved and made absolute.
pub fn shoelace<T: Scalar>(p: [[T; 2]; 3]) -> T {
    let d = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
    d.abs() / T::of(2.0)
}

fn solve3<T: Scalar>(m: &[[T; 3]; 3], b: &[T; 3]) -> [T; 3] {
    let det = |m: &[[T; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(m);
    let mut out = [T::zero(); 3];
    for (k, o) in out.iter_mut().enumerate() {
        let mut mk = *m;
        for i in 0..3 {
            mk[i][k] = b[i];
        }
        *o = det(&mk) / d;
    }
    out
}

/// Cylinder Δ(w). The empty word gives Δ itself.
pub fn cylinder_data<T: Scalar>(w: &Word) -> Result<Cylinder<T>> {
    Cylinder::from_cocycle(w.clone(), cocycle_matrix(w)?)
}

/// Jacobian of g_w at y: det A / (Σⱼ ‖Aⱼ‖₁ yⱼ)³.
pub fn jacobian<T: Scalar>(w: &Word, y: &SimplexPoint<T>) -> Result<T> {
    let a = cocycle_matrix(w)?;
    let r = a.row_sums()?;
    let s = (0..3).fold(T::zero(), |acc, j| acc + T::of_i64(r[j]) * y[j]);
    Ok(T::of_i64(a.det()?.abs()) / (s * s * s))
}

fn sorted_row_sums(w: &Word) -> Result<[i64; 3]> {
    let mut r = cocycle_matrix(w)?.row_sums()?;
    r.sort_unstable();
    Ok(r)
}

/// Rényi ratio C(w) = (max row norm / min row norm)³.
pub fn renyi_ratio(w: &Word) -> Result<f64> {
    let r = sorted_row_sums(w)?;
    if let Some(c) = r[2].checked_pow(3) {
        if r[0] == 1 {
            return Ok(c as f64);
        }
    }
    Ok((r[2] as f64 / r[0] as f64).powi(3))
}

/// Whether the two smallest row norms sum to more than the largest.
pub fn row_norm_check(w: &Word) -> Result<bool> {
    let r = sorted_row_sums(w)?;
    Ok(r[0] + r[1] > r[2])
}

#[cfg(test)]
mod tests {
    use super::super::branch::{orbit, Branch};
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn cocycle_examples() {
        assert_eq!(cocycle_matrix(&Word::empty()).unwrap(), IntMatrix3::IDENTITY);
        assert_eq!(
            cocycle_matrix(&w("1")).unwrap(),
            IntMatrix3::new([[1, 0, 0], [1, 1, 0], [1, 0, 1]])
        );
        for n in 1..=20 {
            let a = cocycle_matrix(&Word::power(Branch::B1, n)).unwrap();
            let n = n as i64;
            assert_eq!(a, IntMatrix3::new([[1, 0, 0], [n, 1, 0], [n, 0, 1]]));
        }
        let long = Word::power(Branch::B4, 40);
        assert!(matches!(cocycle_matrix(&long), Err(Error::WordTooLong { .. })));
    }

    #[test]
    fn cylinder_examples() {
        let c = cylinder_data::<f64>(&w("1")).unwrap();
        assert!((c.leb_area - 0.125).abs() < 1e-16);
        assert_eq!(c.vertices[0].0, [1.0, 0.0, 0.0]);
        assert_eq!(c.vertices[1].0, [0.5, 0.5, 0.0]);
        assert_eq!(c.vertices[2].0, [0.5, 0.0, 0.5]);
        let c = cylinder_data::<f64>(&Word::empty()).unwrap();
        assert_eq!(c.leb_area, 0.5);
        let c = cylinder_data::<f64>(&w("4")).unwrap();
        assert_eq!(c.det, 2);
        assert_eq!(c.vertices[0].0, [0.0, 0.5, 0.5]);
        assert!((c.leb_area - 0.125).abs() < 1e-16);
    }

    #[test]
    fn rank_one_areas_partition_the_simplex() {
        let total: f64 = Branch::ALL
            .iter()
            .map(|b| cylinder_data::<f64>(&Word(vec![*b])).unwrap().leb_area)
            .sum();
        assert!((total - 0.5).abs() < 1e-12);
    }

    #[test]
    fn jacobian_examples() {
        let b = SimplexPoint::<f64>::barycenter();
        assert_eq!(jacobian(&Word::empty(), &b).unwrap(), 1.0);
        assert!((jacobian(&w("1"), &b).unwrap() - 27.0 / 125.0).abs() < 1e-15);
    }

    #[test]
    fn renyi_and_row_norm_examples() {
        for n in 1..=20usize {
            let c = renyi_ratio(&Word::power(Branch::B1, n)).unwrap();
            assert_eq!(c, ((n + 1) as f64).powi(3));
        }
        assert_eq!(renyi_ratio(&w("4")).unwrap(), 1.0);
        assert!(row_norm_check(&w("1")).unwrap());
        assert!(row_norm_check(&Word::power(Branch::B1, 10)).unwrap());
    }

    #[test]
    fn reconstruction_from_orbit() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        use rand::Rng;
        for _ in 0..200 {
            let (a, b, c): (f64, f64, f64) = (rng.gen(), rng.gen(), rng.gen());
            let s = a + b + c;
            let x = SimplexPoint::new(a / s, b / s, c / s).unwrap();
            let n = rng.gen_range(1..=20);
            let Ok((y, word)) = orbit(&x, n) else { continue };
            let back = inverse_branch(&word, &y).unwrap();
            for k in 0..3 {
                assert!((back[k] - x[k]).abs() < 1e-7);
            }
            let cyl = cylinder_data::<f64>(&word).unwrap();
            assert!(cyl.contains(&x));
        }
    }

    fn word_strategy(max: usize) -> impl Strategy<Value = Word> {
        proptest::collection::vec(0usize..4, 0..=max).prop_map(|v| Word(v.into_iter().map(|i| Branch::ALL[i]).collect()))
    }

    proptest! {
        #[test]
        fn det_counts_branch_four(word in word_strategy(20)) {
            let a = cocycle_matrix(&word).unwrap();
            prop_assert_eq!(a.det().unwrap(), 1i64 << word.count(Branch::B4));
            prop_assert!(a.is_nonnegative());
        }

        #[test]
        fn area_matches_shoelace(word in word_strategy(12)) {
            let c = cylinder_data::<f64>(&word).unwrap();
            let s = c.shoelace_area();
            prop_assert!((c.leb_area - s).abs() <= 1e-12 * c.leb_area.max(1e-300) + 1e-15);
        }

        #[test]
        fn children_partition_parent(word in word_strategy(8)) {
            let parent = cylinder_data::<f64>(&word).unwrap().leb_area;
            let kids: f64 = Branch::ALL.iter().map(|b| {
                let mut ch = word.clone();
                ch.push(*b);
                cylinder_data::<f64>(&ch).unwrap().leb_area
            }).sum();
            prop_assert!((kids - parent).abs() <= 1e-12 * parent);
        }

        #[test]
        fn renyi_bounded_after_four(word in word_strategy(25)) {
            let mut w4 = word.clone();
            w4.push(Branch::B4);
            prop_assert!(renyi_ratio(&w4).unwrap() < 8.0);
            prop_assert!(row_norm_check(&w4).unwrap());
        }
    }
}
