//! The invariant density h, its mass and the measure-invariance check.

use serde::{Deserialize, Serialize};

use super::quadrature::{integrate_rect, integrate_triangle, QuadResult};
use crate::error::{Error, Result};
use crate::exactlin::SimplexPoint;
use crate::reverse_cfa::Branch;
use crate::Scalar;

/// h(x) = 4 / (π² (1−x₀)(1−x₁)(1−x₂)).
pub fn density<T: Scalar>(x: &SimplexPoint<T>) -> Result<T> {
    let d = x.coords().map(|c| T::one() - c);
    if d.iter().any(|v| !(*v > T::zero())) {
        return Err(Error::OutOfDomain(x.to_f64()));
    }
    Ok(density_prefactor::<T>() / (d[0] * d[1] * d[2]))
}

pub fn density_prefactor<T: Scalar>() -> T {
    T::of(4.0) / (T::PI() * T::PI())
}

/// h in the chart (x₁, x₂), with x₀ = 1 − x₁ − x₂. No domain checks.
pub fn density_xy<T: Scalar>(x1: T, x2: T) -> T {
    let o = T::one();
    density_prefactor::<T>() / ((x1 + x2) * (o - x1) * (o - x2))
}

/// ∫_Δ h dx₁dx₂. Δ is cut into six triangles, each with one corner of Δ at
/// its collapsed vertex.
pub fn mass<T: Scalar>(tol: T) -> Result<QuadResult<T>> {
    let (z, o, h) = (T::zero(), T::one(), T::of(0.5));
    let third = T::one() / T::of(3.0);
    let c = [[z, z], [o, z], [z, o]];
    let b = [third, third];
    let m = [[h, z], [h, h], [z, h]]; // midpoints of c0c1, c1c2, c2c0
    let tris = [
        [c[0], m[0], b],
        [c[0], b, m[2]],
        [c[1], m[1], b],
        [c[1], b, m[0]],
        [c[2], m[2], b],
        [c[2], b, m[1]],
    ];
    let f = |x: T, y: T| density_xy(x, y);
    let mut out = QuadResult {
        value: T::zero(),
        error: T::zero(),
        evals: 0,
    };
    for t in tris {
        let r = integrate_triangle(&f, t, tol / T::of(6.0))?;
        out.value = out.value + r.value;
        out.error = out.error + r.error;
        out.evals += r.evals;
    }
    Ok(out)
}

/// Inverse branch g_b(y) = normalize(M_b y) and its Jacobian in the (x₁,x₂) chart.
pub fn inverse_branch_xy<T: Scalar>(b: Branch, y1: T, y2: T) -> ([T; 3], T) {
    let y = [T::one() - y1 - y2, y1, y2];
    let m = b.matrix();
    let mut v = [T::zero(); 3];
    for (i, vi) in v.iter_mut().enumerate() {
        *vi = (0..3).fold(T::zero(), |a, k| a + T::of_i64(m.get(i, k)) * y[k]);
    }
    let s = v[0] + v[1] + v[2];
    let det = T::of_i64(m.det().expect("small matrix"));
    (v.map(|c| c / s), det / (s * s * s))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InvarianceReport {
    /// [y1_lo, y1_hi, y2_lo, y2_hi]
    pub boxed: [f64; 4],
    /// Σ_b ∫_E h(g_b y) ω_b(y) dy = μ(f⁻¹E)
    pub preimage_mass: f64,
    /// ∫_E h = μ(E)
    pub mass: f64,
    pub diff: f64,
}

/// Compares μ(f⁻¹E) with μ(E) for a box E ⊂ Δ in the (x₁,x₂) chart.
pub fn invariance_check(boxed: [f64; 4], tol: f64) -> Result<InvarianceReport> {
    let [a, b, c, d] = boxed;
    if !(a >= 0.0 && c >= 0.0 && a < b && c < d && b + d <= 1.0) {
        return Err(Error::Invalid(format!("box {boxed:?} not inside the simplex")));
    }
    let lhs = |y1: f64, y2: f64| {
        Branch::ALL.iter().fold(0.0, |acc, &br| {
            let (x, jac) = inverse_branch_xy(br, y1, y2);
            acc + density_xy(x[1], x[2]) * jac
        })
    };
    let pre = integrate_rect(&lhs, boxed, tol * 1e-2)?;
    let direct = integrate_rect(&|y1, y2| density_xy(y1, y2), boxed, tol * 1e-2)?;
    Ok(InvarianceReport {
        boxed,
        preimage_mass: pre.value,
        mass: direct.value,
        diff: (pre.value - direct.value).abs(),
    })
}

/// The three boxes used by the acceptance run.
pub const INVARIANCE_BOXES: [[f64; 4]; 3] = [
    [0.1, 0.3, 0.2, 0.4],
    [0.02, 0.15, 0.6, 0.8],
    [0.45, 0.7, 0.05, 0.25],
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reverse_cfa::{jacobian, Word};

    #[test]
    fn density_examples() {
        let b = SimplexPoint::<f64>::barycenter();
        let want = 27.0 / (2.0 * std::f64::consts::PI.powi(2));
        assert!((density(&b).unwrap() - want).abs() < 1e-14);
        let x = SimplexPoint::<f64>::new(0.2, 0.3, 0.5).unwrap();
        let y = SimplexPoint::<f64>::new(0.5, 0.2, 0.3).unwrap();
        assert!((density(&x).unwrap() - density(&y).unwrap()).abs() < 1e-14f64);
        assert!((density(&x).unwrap() - density_xy(0.3f64, 0.5)).abs() < 1e-14);
    }

    #[test]
    fn total_mass_is_one() {
        let m = mass::<f64>(1e-10).unwrap();
        assert!((m.value - 1.0).abs() < 1e-9, "{}", m.value);
    }

    #[test]
    fn inverse_branch_jacobian_matches_cylinder_formula() {
        for b in Branch::ALL {
            let (_, jac) = inverse_branch_xy(b, 0.2f64, 0.5);
            let y = SimplexPoint::new(0.3, 0.2, 0.5).unwrap();
            let j2 = jacobian(&Word(vec![b]), &y).unwrap();
            assert!((jac - j2).abs() < 1e-14);
        }
    }

    #[test]
    fn jacobian_integrates_to_cylinder_area() {
        for w in ["1", "4", "23", "412"] {
            let w: Word = w.parse().unwrap();
            let area = crate::reverse_cfa::cylinder_data::<f64>(&w).unwrap().leb_area;
            let f = |y1: f64, y2: f64| {
                let y = SimplexPoint::from_raw([1.0 - y1 - y2, y1, y2]);
                jacobian(&w, &y).unwrap()
            };
            let r = integrate_triangle(&f, [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], 1e-12).unwrap();
            assert!((r.value - area).abs() < 1e-6);
        }
    }

    #[test]
    fn invariance_on_boxes() {
        for b in INVARIANCE_BOXES {
            let r = invariance_check(b, 1e-8).unwrap();
            assert!(r.diff < 1e-8, "{r:?}");
        }
        assert!(invariance_check([0.5, 0.9, 0.2, 0.4], 1e-8).is_err());
    }
}
