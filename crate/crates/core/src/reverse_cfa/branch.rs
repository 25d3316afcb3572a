use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{IntMatrix3, SimplexPoint, Vec3};
use crate::Scalar;

/// Coordinates below this value after a step mark the orbit as gasket-adjacent.
pub const GASKET_GUARD: f64 = 1e-14;

/// Default iteration cap for [`jump_step`].
pub const JUMP_CAP: usize = 1_000_000;

/// One of the four branches of the Reverse map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Branch {
    B1,
    B2,
    B3,
    B4,
}

pub const M1: IntMatrix3 = IntMatrix3::new([[1, 1, 1], [0, 1, 0], [0, 0, 1]]);
pub const M2: IntMatrix3 = IntMatrix3::new([[1, 0, 0], [1, 1, 1], [0, 0, 1]]);
pub const M3: IntMatrix3 = IntMatrix3::new([[1, 0, 0], [0, 1, 0], [1, 1, 1]]);
pub const M4: IntMatrix3 = IntMatrix3::new([[0, 1, 1], [1, 0, 1], [1, 1, 0]]);

impl Branch {
    pub const ALL: [Branch; 4] = [Branch::B1, Branch::B2, Branch::B3, Branch::B4];

    /// 1-based label.
    pub fn index(self) -> usize {
        self as usize + 1
    }

    pub fn from_index(i: usize) -> Result<Self> {
        match i {
            1 => Ok(Branch::B1),
            2 => Ok(Branch::B2),
            3 => Ok(Branch::B3),
            4 => Ok(Branch::B4),
            _ => Err(Error::Invalid(format!("branch index {i}"))),
        }
    }

    pub fn matrix(self) -> IntMatrix3 {
        match self {
            Branch::B1 => M1,
            Branch::B2 => M2,
            Branch::B3 => M3,
            Branch::B4 => M4,
        }
    }

    /// M_b⁻¹·v, up to the positive factor 2 on branch 4.
    pub fn inverse_apply<T: Scalar>(self, v: &Vec3<T>) -> Vec3<T> {
        let [a, b, c] = v.0;
        match self {
            Branch::B1 => Vec3::new(a - b - c, b, c),
            Branch::B2 => Vec3::new(a, b - a - c, c),
            Branch::B3 => Vec3::new(a, b, c - a - b),
            Branch::B4 => Vec3::new(b + c - a, a + c - b, a + b - c),
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// Finite word over the branch alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Word(pub Vec<Branch>);

impl Word {
    /// Longest word whose cocycle is guaranteed to fit in i64.
    pub const MAX_COCYCLE_LEN: usize = 39;

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn power(b: Branch, n: usize) -> Self {
        Self(vec![b; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, b: Branch) {
        self.0.push(b);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn count(&self, b: Branch) -> usize {
        self.0.iter().filter(|&&c| c == b).count()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Branch> {
        self.0.iter()
    }

    pub fn split_at(&self, k: usize) -> (Word, Word) {
        let (a, b) = self.0.split_at(k);
        (Word(a.to_vec()), Word(b.to_vec()))
    }

    pub fn random<R: rand::Rng + ?Sized>(rng: &mut R, len: usize) -> Word {
        Word((0..len).map(|_| Branch::ALL[rng.gen_range(0..4)]).collect())
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| {
                c.to_digit(10)
                    .ok_or_else(|| Error::Invalid(format!("bad branch symbol {c:?}")))
                    .and_then(|d| Branch::from_index(d as usize))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// Branch containing `x`: i if 2xᵢ > 1, else 4.
pub fn classify<T: Scalar>(x: &SimplexPoint<T>) -> Branch {
    let two = T::of(2.0);
    let s = x.x0() + x.x1() + x.x2();
    if two * x.x0() > s {
        Branch::B1
    } else if two * x.x1() > s {
        Branch::B2
    } else if two * x.x2() > s {
        Branch::B3
    } else {
        Branch::B4
    }
}

/// Image of a nonnegative vector under branch `b`, normalized to sum 1.
/// No positivity guard; used for boundary checks.
pub fn branch_image<T: Scalar>(b: Branch, v: &Vec3<T>) -> Vec3<T> {
    let y = b.inverse_apply(v);
    y.scale(T::one() / y.sum())
}

/// One step of f_R.
pub fn step<T: Scalar>(x: &SimplexPoint<T>) -> Result<(SimplexPoint<T>, Branch)> {
    let b = classify(x);
    let y = branch_image(b, &x.as_vec());
    let guard = T::of(GASKET_GUARD);
    if y.0.iter().any(|c| !(*c >= guard)) {
        return Err(Error::GasketGuard { steps: 0 });
    }
    Ok((SimplexPoint::from_raw(y.0), b))
}

/// Iterates `steps` times, returning the final point and the itinerary.
pub fn orbit<T: Scalar>(x: &SimplexPoint<T>, steps: usize) -> Result<(SimplexPoint<T>, Word)> {
    let mut p = *x;
    let mut w = Word(Vec::with_capacity(steps));
    for k in 0..steps {
        let (q, b) = step(&p).map_err(|e| match e {
            Error::GasketGuard { .. } => Error::GasketGuard { steps: k },
            e => e,
        })?;
        p = q;
        w.push(b);
    }
    Ok((p, w))
}

/// The jump transformation: iterate until a branch-4 step has been applied.
pub fn jump_step<T: Scalar>(x: &SimplexPoint<T>, cap: usize) -> Result<(SimplexPoint<T>, usize, Word)> {
    let mut p = *x;
    let mut w = Word::empty();
    for k in 0..cap {
        let (q, b) = step(&p).map_err(|e| match e {
            Error::GasketGuard { .. } => Error::GasketGuard { steps: k },
            e => e,
        })?;
        p = q;
        w.push(b);
        if b == Branch::B4 {
            return Ok((p, k + 1, w));
        }
    }
    Err(Error::IterationCap(cap))
}
