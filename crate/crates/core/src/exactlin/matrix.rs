use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact 3×3 integer matrix. Every arithmetic operation is overflow-checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix3 {
    pub entries: [[i64; 3]; 3],
}

impl Default for IntMatrix3 {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl IntMatrix3 {
    pub const IDENTITY: Self = Self::new([[1, 0, 0], [0, 1, 0], [0, 0, 1]]);

    pub const fn new(entries: [[i64; 3]; 3]) -> Self {
        Self { entries }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    pub fn transpose(&self) -> Self {
        let e = &self.entries;
        Self::new([
            [e[0][0], e[1][0], e[2][0]],
            [e[0][1], e[1][1], e[2][1]],
            [e[0][2], e[1][2], e[2][2]],
        ])
    }

    #[inline]
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        mat_mul(self, rhs)
    }

    pub fn det(&self) -> Result<i64> {
        mat_det(self)
    }

    pub fn row(&self, i: usize) -> [i64; 3] {
        self.entries[i]
    }

    pub fn col(&self, j: usize) -> [i64; 3] {
        [self.entries[0][j], self.entries[1][j], self.entries[2][j]]
    }

    /// Row sums, i.e. the 1-norms of the rows of a nonnegative matrix.
    pub fn row_sums(&self) -> Result<[i64; 3]> {
        let mut out = [0i64; 3];
        for (i, o) in out.iter_mut().enumerate() {
            *o = sum3(self.entries[i])?;
        }
        Ok(out)
    }

    pub fn col_sums(&self) -> Result<[i64; 3]> {
        self.transpose().row_sums()
    }

    pub fn apply(&self, v: [i64; 3]) -> Result<[i64; 3]> {
        let mut out = [0i64; 3];
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = 0i64;
            for (k, vk) in v.iter().enumerate() {
                acc = self.entries[i][k]
                    .checked_mul(*vk)
                    .and_then(|p| acc.checked_add(p))
                    .ok_or(Error::Overflow("matrix-vector product"))?;
            }
            *o = acc;
        }
        Ok(out)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().flatten().all(|&e| e >= 0)
    }

    pub fn is_positive(&self) -> bool {
        self.entries.iter().flatten().all(|&e| e > 0)
    }

    pub fn max_abs(&self) -> i64 {
        self.entries
            .iter()
            .flatten()
            .map(|e| e.saturating_abs())
            .max()
            .unwrap_or(0)
    }

    pub fn to_real<T: crate::Scalar>(&self) -> super::RealMatrix3<T> {
        super::RealMatrix3::from_int(self)
    }
}

fn sum3(v: [i64; 3]) -> Result<i64> {
    v[0].checked_add(v[1])
        .and_then(|s| s.checked_add(v[2]))
        .ok_or(Error::Overflow("row sum"))
}

/// Exact product `a·b`.
#[inline]
pub fn mat_mul(a: &IntMatrix3, b: &IntMatrix3) -> Result<IntMatrix3> {
    let mut c = [[0i64; 3]; 3];
    for (i, row) in c.iter_mut().enumerate() {
        for (j, cij) in row.iter_mut().enumerate() {
            let mut acc = 0i64;
            for k in 0..3 {
                acc = a.entries[i][k]
                    .checked_mul(b.entries[k][j])
                    .and_then(|p| acc.checked_add(p))
                    .ok_or(Error::Overflow("matrix product"))?;
            }
            *cij = acc;
        }
    }
    Ok(IntMatrix3::new(c))
}

/// Exact determinant by cofactor expansion along the first row.
pub fn mat_det(a: &IntMatrix3) -> Result<i64> {
    let e = &a.entries;
    let minor = |r0: usize, r1: usize, c0: usize, c1: usize| -> Option<i64> {
        e[r0][c0]
            .checked_mul(e[r1][c1])?
            .checked_sub(e[r0][c1].checked_mul(e[r1][c0])?)
    };
    let go = || -> Option<i64> {
        let t0 = e[0][0].checked_mul(minor(1, 2, 1, 2)?)?;
        let t1 = e[0][1].checked_mul(minor(1, 2, 0, 2)?)?;
        let t2 = e[0][2].checked_mul(minor(1, 2, 0, 1)?)?;
        t0.checked_sub(t1)?.checked_add(t2)
    };
    go().ok_or(Error::Overflow("determinant"))
}
