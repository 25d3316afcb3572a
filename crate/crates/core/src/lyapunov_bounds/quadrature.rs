//! Adaptive Gauss–Legendre cubature on triangles and rectangles.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: T,
    pub evals: usize,
}

/// Gauss–Legendre nodes and weights on [0, 1].
pub fn gauss_legendre<T: Scalar>(n: usize) -> Vec<(T, T)> {
    let mut out = Vec::with_capacity(n);
    let nf = T::of_i64(n as i64);
    let (one, two) = (T::one(), T::of(2.0));
    for i in 0..n {
        let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut x = T::of(guess);
        let mut dp = one;
        let mut prev = T::infinity();
        for it in 0..200 {
            // three-term recurrence for P_n and its derivative
            let (mut p0, mut p1) = (one, x);
            for k in 2..=n {
                let kf = T::of_i64(k as i64);
                let p2 = ((two * kf - one) * x * p1 - (kf - one) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - one);
            let dx = p1 / dp;
            // stop once Newton steps no longer shrink (rounding floor of T)
            if dx == T::zero() || (it > 2 && dx.abs() >= prev) {
                break;
            }
            x = x - dx;
            prev = dx.abs();
        }
        let w = two / ((one - x * x) * dp * dp);
        out.push(((one + x) / two, w / two));
    }
    out
}

const ORDER: usize = 12;
const MAX_EVALS: usize = 50_000_000;
const MAX_REGIONS: usize = 200_000;

type Tri<T> = [[T; 2]; 3];

/// Collapsed tensor rule with the collapse at vertex 0, so integrable
/// 1/r singularities at that vertex are absorbed by the Jacobian.
fn tri_rule<T: Scalar, F: Fn(T, T) -> T>(f: &F, t: &Tri<T>, gl: &[(T, T)]) -> T {
    let [p0, p1, p2] = *t;
    let area2 = ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1])).abs();
    let mut acc = T::zero();
    for &(u, wu) in gl {
        let mut inner = T::zero();
        for &(v, wv) in gl {
            let q = [
                p1[0] + v * (p2[0] - p1[0]),
                p1[1] + v * (p2[1] - p1[1]),
            ];
            let x = p0[0] + u * (q[0] - p0[0]);
            let y = p0[1] + u * (q[1] - p0[1]);
            inner = inner + wv * f(x, y);
        }
        acc = acc + wu * u * inner;
    }
    acc * area2
}

fn mid<T: Scalar>(a: [T; 2], b: [T; 2]) -> [T; 2] {
    let h = T::of(0.5);
    [(a[0] + b[0]) * h, (a[1] + b[1]) * h]
}

fn children<T: Scalar>(t: &Tri<T>) -> [Tri<T>; 4] {
    let [p0, p1, p2] = *t;
    let (m01, m12, m02) = (mid(p0, p1), mid(p1, p2), mid(p0, p2));
    [[p0, m01, m02], [p1, m12, m01], [p2, m02, m12], [m12, m02, m01]]
}

struct Region<R, T> {
    kids: [R; 4],
    parts: [T; 4],
    err: T,
    key: f64,
}

impl<R, T> PartialEq for Region<R, T> {
    fn eq(&self, o: &Self) -> bool {
        self.key.total_cmp(&o.key).is_eq()
    }
}
impl<R, T> Eq for Region<R, T> {}
impl<R, T> PartialOrd for Region<R, T> {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl<R, T> Ord for Region<R, T> {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.key.total_cmp(&o.key)
    }
}

/// Global adaptive refinement: repeatedly splits the region with the largest
/// error estimate (|parent rule − Σ child rules|) until the sum of estimates
/// drops below `tol`.
fn global_adapt<R: Copy, T: Scalar>(
    initial: R,
    rule: impl Fn(&R) -> T,
    split: impl Fn(&R) -> [R; 4],
    tol: T,
    rule_evals: usize,
) -> Result<QuadResult<T>> {
    let sum4 = |p: &[T; 4]| p.iter().fold(T::zero(), |a, b| a + *b);
    let make = |r: R, whole: T| {
        let kids = split(&r);
        let parts = kids.map(|k| rule(&k));
        let err = (sum4(&parts) - whole).abs();
        Region {
            kids,
            parts,
            err,
            key: err.to_f64_lossy(),
        }
    };
    let mut evals = 5 * rule_evals;
    let first = make(initial, rule(&initial));
    let mut value = sum4(&first.parts);
    let mut error = first.err;
    let mut heap = std::collections::BinaryHeap::new();
    heap.push(first);
    let floor = |v: T| T::of(64.0) * T::unit_roundoff() * v.abs();
    loop {
        if error <= tol || error <= floor(value) {
            // recompute the totals exactly before accepting
            value = heap.iter().fold(T::zero(), |a, r| a + sum4(&r.parts));
            error = heap.iter().fold(T::zero(), |a, r| a + r.err);
            if error <= tol || error <= floor(value) {
                return Ok(QuadResult { value, error, evals });
            }
        }
        if evals > MAX_EVALS || heap.len() > MAX_REGIONS {
            return Err(Error::Quadrature {
                estimate: value.to_f64_lossy(),
                error: error.to_f64_lossy(),
            });
        }
        let worst = heap.pop().expect("nonempty");
        value = value - sum4(&worst.parts);
        error = error - worst.err;
        for (k, p) in worst.kids.into_iter().zip(worst.parts) {
            let r = make(k, p);
            evals += 4 * rule_evals;
            value = value + sum4(&r.parts);
            error = error + r.err;
            heap.push(r);
        }
        if error < T::zero() {
            error = heap.iter().fold(T::zero(), |a, r| a + r.err);
        }
    }
}

/// ∫ over the triangle `t` of f(x, y) dx dy to absolute tolerance `tol`.
/// Put any corner singularity at `t[0]`.
pub fn integrate_triangle<T: Scalar, F: Fn(T, T) -> T>(f: &F, t: Tri<T>, tol: T) -> Result<QuadResult<T>> {
    let gl = gauss_legendre(ORDER);
    global_adapt(t, |r| tri_rule(f, r, &gl), children, tol, ORDER * ORDER)
}

fn rect_rule<T: Scalar, F: Fn(T, T) -> T>(f: &F, r: &[T; 4], gl: &[(T, T)]) -> T {
    let [x0, x1, y0, y1] = *r;
    let mut acc = T::zero();
    for &(u, wu) in gl {
        let x = x0 + u * (x1 - x0);
        let mut inner = T::zero();
        for &(v, wv) in gl {
            inner = inner + wv * f(x, y0 + v * (y1 - y0));
        }
        acc = acc + wu * inner;
    }
    acc * (x1 - x0) * (y1 - y0)
}

fn quarters<T: Scalar>(r: &[T; 4]) -> [[T; 4]; 4] {
    let [x0, x1, y0, y1] = *r;
    let h = T::of(0.5);
    let (xm, ym) = ((x0 + x1) * h, (y0 + y1) * h);
    [[x0, xm, y0, ym], [xm, x1, y0, ym], [x0, xm, ym, y1], [xm, x1, ym, y1]]
}

/// ∫ over [x0,x1]×[y0,y1] of f to absolute tolerance `tol`.
pub fn integrate_rect<T: Scalar, F: Fn(T, T) -> T>(f: &F, rect: [T; 4], tol: T) -> Result<QuadResult<T>> {
    let gl = gauss_legendre(ORDER);
    global_adapt(rect, |r| rect_rule(f, r, &gl), quarters, tol, ORDER * ORDER)
}
