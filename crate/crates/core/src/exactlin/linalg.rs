use serde::{Deserialize, Serialize};

use super::{IntMatrix3, Vec3};
use crate::error::{Error, Result};
use crate::Scalar;

/// Real 3×3 matrix, used where exact integers are not needed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealMatrix3<T> {
    pub m: [[T; 3]; 3],
}

impl<T: Scalar> RealMatrix3<T> {
    pub fn new(m: [[T; 3]; 3]) -> Self {
        Self { m }
    }

    pub fn identity() -> Self {
        let (o, z) = (T::one(), T::zero());
        Self::new([[o, z, z], [z, o, z], [z, z, o]])
    }

    pub fn from_int(a: &IntMatrix3) -> Self {
        Self::new(a.entries.map(|r| r.map(T::of_i64)))
    }

    pub fn scale(&self, s: T) -> Self {
        Self::new(self.m.map(|r| r.map(|c| c * s)))
    }

    pub fn apply(&self, v: &Vec3<T>) -> Vec3<T> {
        let r = |i: usize| self.m[i][0] * v[0] + self.m[i][1] * v[1] + self.m[i][2] * v[2];
        Vec3::new(r(0), r(1), r(2))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut c = [[T::zero(); 3]; 3];
        for (i, row) in c.iter_mut().enumerate() {
            for (j, cij) in row.iter_mut().enumerate() {
                *cij = self.m[i][0] * o.m[0][j] + self.m[i][1] * o.m[1][j] + self.m[i][2] * o.m[2][j];
            }
        }
        Self::new(c)
    }

    pub fn transpose(&self) -> Self {
        let m = &self.m;
        Self::new([
            [m[0][0], m[1][0], m[2][0]],
            [m[0][1], m[1][1], m[2][1]],
            [m[0][2], m[1][2], m[2][2]],
        ])
    }

    /// Classical operator norm induced by ‖·‖_∞ (max absolute row sum).
    pub fn inf_norm(&self) -> T {
        self.m
            .iter()
            .map(|r| r[0].abs() + r[1].abs() + r[2].abs())
            .fold(T::zero(), T::max)
    }
}

/// Vertices of the polygon {x ∈ w⊥ : ‖x‖_∞ = 1}.
///
/// Each vertex lies on a cube edge: two coordinates are pinned to ±1 and the
/// third is solved from ⟨x,w⟩ = 0. Duplicates (cube corners) are removed.
pub fn plane_cube_vertices<T: Scalar>(w: &Vec3<T>) -> Result<Vec<Vec3<T>>> {
    let scale = w.inf_norm();
    if !(scale > T::zero()) || !scale.is_finite() {
        return Err(Error::DegenerateNormal);
    }
    let w = w.scale(T::one() / scale);
    let tol = T::of(1e-12);
    let signs = [T::one(), -T::one()];
    let mut out: Vec<Vec3<T>> = Vec::with_capacity(6);
    for k in 0..3 {
        if w[k].abs() <= tol {
            continue;
        }
        let (a, b) = ((k + 1) % 3, (k + 2) % 3);
        for sa in signs {
            for sb in signs {
                let t = -(w[a] * sa + w[b] * sb) / w[k];
                if t.abs() <= T::one() + tol {
                    let mut x = Vec3::zero();
                    x[a] = sa;
                    x[b] = sb;
                    x[k] = t.max(-T::one()).min(T::one());
                    if !out.iter().any(|y| (*y - x).inf_norm() <= tol) {
                        out.push(x);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// ‖m|_{w⊥}‖_∞: the operator ∞-norm of `m` restricted to the plane w⊥.
pub fn inf_norm_restricted<T: Scalar>(m: &RealMatrix3<T>, w: &Vec3<T>) -> Result<T> {
    let verts = plane_cube_vertices(w)?;
    Ok(verts
        .iter()
        .map(|x| m.apply(x).inf_norm())
        .fold(T::zero(), T::max))
}

/// Real 2×2 matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mat2<T> {
    pub m: [[T; 2]; 2],
}

impl<T: Scalar> Mat2<T> {
    pub fn new(m: [[T; 2]; 2]) -> Self {
        Self { m }
    }

    pub fn identity() -> Self {
        Self::new([[T::one(), T::zero()], [T::zero(), T::one()]])
    }

    pub fn mul(&self, o: &Self) -> Self {
        let a = &self.m;
        let b = &o.m;
        Self::new([
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ])
    }

    pub fn det(&self) -> T {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn max_abs_diff(&self, o: &Self) -> T {
        let mut d = T::zero();
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.m[i][j] - o.m[i][j]).abs());
            }
        }
        d
    }

    pub fn max_abs(&self) -> T {
        self.max_abs_diff(&Self::new([[T::zero(); 2]; 2]))
    }

    pub fn norm(&self, kind: NormKind) -> T {
        match kind {
            NormKind::RowSum => row_sum_norm_2x2(self),
            NormKind::Induced => induced_one_norm_2x2(self),
            NormKind::Entrywise => entrywise_norm_2x2(self),
        }
    }
}

/// Interpretation of ‖·‖₁ for the 2×2 cocycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    /// Max absolute row sum: the norm induced by ‖·‖₁ acting on row vectors.
    #[default]
    #[serde(alias = "row")]
    RowSum,
    /// Max absolute column sum: the norm induced by ‖·‖₁ on column vectors.
    Induced,
    /// Sum of all absolute entries.
    Entrywise,
}

impl NormKind {
    pub fn name(&self) -> &'static str {
        match self {
            NormKind::RowSum => "rowsum",
            NormKind::Induced => "induced",
            NormKind::Entrywise => "entrywise",
        }
    }
}

impl std::str::FromStr for NormKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "row" | "rowsum" | "row-sum" => Ok(NormKind::RowSum),
            "induced" | "column" | "col" => Ok(NormKind::Induced),
            "entrywise" => Ok(NormKind::Entrywise),
            other => Err(Error::Invalid(format!("unknown norm {other:?}"))),
        }
    }
}

/// Max absolute column sum.
pub fn induced_one_norm_2x2<T: Scalar>(m: &Mat2<T>) -> T {
    let m = &m.m;
    (m[0][0].abs() + m[1][0].abs()).max(m[0][1].abs() + m[1][1].abs())
}

/// Max absolute row sum.
pub fn row_sum_norm_2x2<T: Scalar>(m: &Mat2<T>) -> T {
    let m = &m.m;
    (m[0][0].abs() + m[0][1].abs()).max(m[1][0].abs() + m[1][1].abs())
}

pub fn entrywise_norm_2x2<T: Scalar>(m: &Mat2<T>) -> T {
    m.m.iter().flatten().fold(T::zero(), |a, c| a + c.abs())
}
