use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vec3<T>(pub [T; 3]);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vec2<T>(pub [T; 2]);

impl<T: Scalar> Vec3<T> {
    pub fn new(a: T, b: T, c: T) -> Self {
        Self([a, b, c])
    }

    pub fn splat(v: T) -> Self {
        Self([v; 3])
    }

    pub fn ones() -> Self {
        Self::splat(T::one())
    }

    pub fn zero() -> Self {
        Self::splat(T::zero())
    }

    pub fn from_f64(v: [f64; 3]) -> Self {
        Self(v.map(T::of))
    }

    pub fn from_i64(v: [i64; 3]) -> Self {
        Self(v.map(T::of_i64))
    }

    pub fn to_f64(&self) -> [f64; 3] {
        self.0.map(|c| c.to_f64_lossy())
    }

    pub fn dot(&self, o: &Self) -> T {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    pub fn sum(&self) -> T {
        self.0[0] + self.0[1] + self.0[2]
    }

    pub fn one_norm(&self) -> T {
        self.0[0].abs() + self.0[1].abs() + self.0[2].abs()
    }

    pub fn inf_norm(&self) -> T {
        self.0[0].abs().max(self.0[1].abs()).max(self.0[2].abs())
    }

    pub fn two_norm(&self) -> T {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, s: T) -> Self {
        Self(self.0.map(|c| c * s))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }
}

impl<T: Scalar> Vec2<T> {
    pub fn new(a: T, b: T) -> Self {
        Self([a, b])
    }

    pub fn from_f64(v: [f64; 2]) -> Self {
        Self(v.map(T::of))
    }

    pub fn to_f64(&self) -> [f64; 2] {
        self.0.map(|c| c.to_f64_lossy())
    }

    pub fn one_norm(&self) -> T {
        self.0[0].abs() + self.0[1].abs()
    }

    pub fn inf_norm(&self) -> T {
        self.0[0].abs().max(self.0[1].abs())
    }
}

macro_rules! elementwise {
    ($ty:ident, $n:expr) => {
        impl<T: Scalar> Add for $ty<T> {
            type Output = Self;
            fn add(self, o: Self) -> Self {
                let mut r = self.0;
                for i in 0..$n {
                    r[i] = r[i] + o.0[i];
                }
                $ty(r)
            }
        }
        impl<T: Scalar> Sub for $ty<T> {
            type Output = Self;
            fn sub(self, o: Self) -> Self {
                let mut r = self.0;
                for i in 0..$n {
                    r[i] = r[i] - o.0[i];
                }
                $ty(r)
            }
        }
        impl<T: Scalar> Neg for $ty<T> {
            type Output = Self;
            fn neg(self) -> Self {
                $ty(self.0.map(|c| -c))
            }
        }
        impl<T: Scalar> Mul<T> for $ty<T> {
            type Output = Self;
            fn mul(self, s: T) -> Self {
                $ty(self.0.map(|c| c * s))
            }
        }
        impl<T> Index<usize> for $ty<T> {
            type Output = T;
            fn index(&self, i: usize) -> &T {
                &self.0[i]
            }
        }
        impl<T> IndexMut<usize> for $ty<T> {
            fn index_mut(&mut self, i: usize) -> &mut T {
                &mut self.0[i]
            }
        }
    };
}

elementwise!(Vec3, 3);
elementwise!(Vec2, 2);

/// Point of the open simplex Δ = {x > 0 : x0 + x1 + x2 = 1}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimplexPoint<T> {
    x: [T; 3],
}

impl<T: Scalar> SimplexPoint<T> {
    pub const SUM_TOL: f64 = 1e-12;

    /// Validates positivity and the unit sum (tolerance [`Self::SUM_TOL`]).
    pub fn new(x0: T, x1: T, x2: T) -> Result<Self> {
        let x = [x0, x1, x2];
        for (index, c) in x.iter().enumerate() {
            if !(*c > T::zero()) {
                return Err(Error::NonPositive {
                    index,
                    value: c.to_f64_lossy(),
                });
            }
        }
        let s = x0 + x1 + x2;
        if (s - T::one()).abs() > T::of(Self::SUM_TOL) {
            return Err(Error::OutOfDomain(x.map(|c| c.to_f64_lossy())));
        }
        Ok(Self { x })
    }

    /// Unchecked constructor for callers that already normalized.
    pub(crate) fn from_raw(x: [T; 3]) -> Self {
        Self { x }
    }

    pub fn barycenter() -> Self {
        let t = T::one() / T::of(3.0);
        Self { x: [t, t, t] }
    }

    pub fn coords(&self) -> [T; 3] {
        self.x
    }

    pub fn x0(&self) -> T {
        self.x[0]
    }
    pub fn x1(&self) -> T {
        self.x[1]
    }
    pub fn x2(&self) -> T {
        self.x[2]
    }

    pub fn as_vec(&self) -> Vec3<T> {
        Vec3(self.x)
    }

    pub fn to_f64(&self) -> [f64; 3] {
        self.x.map(|c| c.to_f64_lossy())
    }
}

impl<T> Index<usize> for SimplexPoint<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.x[i]
    }
}

/// Divides a positive vector by its 1-norm.
pub fn normalize_to_simplex<T: Scalar>(v: Vec3<T>) -> Result<SimplexPoint<T>> {
    for (index, c) in v.0.iter().enumerate() {
        if !(*c > T::zero()) {
            return Err(Error::NonPositive {
                index,
                value: c.to_f64_lossy(),
            });
        }
    }
    let s = v.sum();
    Ok(SimplexPoint::from_raw(v.0.map(|c| c / s)))
}

/// π_{v,w}(x) = x − ⟨x,w⟩/⟨v,w⟩ · v, the projection along v onto w⊥.
pub fn pi_projection<T: Scalar>(v: &Vec3<T>, w: &Vec3<T>, x: &Vec3<T>) -> Result<Vec3<T>> {
    let vw = v.dot(w);
    if vw == T::zero() || !vw.is_finite() {
        return Err(Error::DegenerateProjection);
    }
    let t = x.dot(w) / vw;
    Ok(*x - v.scale(t))
}
