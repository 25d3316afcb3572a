//! Independent straight-line oracles. Nothing here calls into the traversal
//! or cylinder code of the library.
#![allow(dead_code)]

pub type M = [[i64; 3]; 3];

pub const BRANCHES: [M; 4] = [
    [[1, 1, 1], [0, 1, 0], [0, 0, 1]],
    [[1, 0, 0], [1, 1, 1], [0, 0, 1]],
    [[1, 0, 0], [0, 1, 0], [1, 1, 1]],
    [[0, 1, 1], [1, 0, 1], [1, 1, 0]],
];

pub const SORTED: [M; 4] = [
    [[1, 1, 1], [0, 1, 0], [0, 0, 1]],
    [[1, 1, 1], [1, 0, 0], [0, 0, 1]],
    [[1, 1, 1], [1, 0, 0], [0, 1, 0]],
    [[1, 1, 0], [1, 0, 1], [0, 1, 1]],
];

pub fn mul(a: &M, b: &M) -> M {
    let mut c = [[0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
        }
    }
    c
}

pub fn det(a: &M) -> i64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

pub fn transpose(a: &M) -> M {
    [[a[0][0], a[1][0], a[2][0]], [a[0][1], a[1][1], a[2][1]], [a[0][2], a[1][2], a[2][2]]]
}

pub fn product(word: &[usize], alphabet: &[M; 4]) -> M {
    word.iter().fold([[1, 0, 0], [0, 1, 0], [0, 0, 1]], |p, &b| mul(&p, &alphabet[b]))
}

/// All words of length n over {0,1,2,3}, lexicographic.
pub fn words(n: usize) -> Vec<Vec<usize>> {
    (0..4usize.pow(n as u32))
        .map(|mut k| {
            let mut w = vec![0; n];
            for i in (0..n).rev() {
                w[i] = k % 4;
                k /= 4;
            }
            w
        })
        .collect()
}

pub fn shoelace(p: [[f64; 2]; 3]) -> f64 {
    0.5 * ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1])).abs()
}

/// Cylinder vertices in the (x₁,x₂) chart: the normalized rows of ᵗP.
pub fn vertices(p: &M) -> [[f64; 3]; 3] {
    let a = transpose(p);
    a.map(|r| {
        let s = (r[0] + r[1] + r[2]) as f64;
        [r[0] as f64 / s, r[1] as f64 / s, r[2] as f64 / s]
    })
}

pub fn area(p: &M) -> f64 {
    let v = vertices(p);
    shoelace([[v[0][1], v[0][2]], [v[1][1], v[1][2]], [v[2][1], v[2][2]]])
}

/// Row-sum or column-sum norm of a 2×2 matrix.
pub fn norm(d: [[f64; 2]; 2], rows: bool) -> f64 {
    if rows {
        (d[0][0].abs() + d[0][1].abs()).max(d[1][0].abs() + d[1][1].abs())
    } else {
        (d[0][0].abs() + d[1][0].abs()).max(d[0][1].abs() + d[1][1].abs())
    }
}

/// Π·A·H(x) by plain matrix products.
pub fn d_matrix(a: &M, x: [f64; 3]) -> [[f64; 2]; 2] {
    let pi = [[-1.0, 1.0, 0.0], [-1.0, 0.0, 1.0]];
    let h = [[-x[1], -x[2]], [1.0 - x[1], -x[2]], [-x[1], 1.0 - x[2]]];
    let mut ah = [[0.0; 2]; 3];
    for i in 0..3 {
        for k in 0..2 {
            ah[i][k] = (0..3).map(|j| a[i][j] as f64 * h[j][k]).sum();
        }
    }
    let mut d = [[0.0; 2]; 2];
    for r in 0..2 {
        for k in 0..2 {
            d[r][k] = (0..3).map(|i| pi[r][i] * ah[i][k]).sum();
        }
    }
    d
}

/// 𝕃₂(n) for the unsorted map, summing over words that are not 1ⁿ, 2ⁿ, 3ⁿ.
pub fn brute_l2(n: usize, rows: bool) -> f64 {
    let mut total = 0.0;
    for w in words(n) {
        if w.iter().all(|&b| b == w[0]) && w[0] < 3 {
            continue;
        }
        let p = product(&w, &BRANCHES);
        let a = transpose(&p);
        let v = vertices(&p);
        let mut mx = f64::NEG_INFINITY;
        let mut hi = [0.0f64; 3];
        let mut lo = [f64::INFINITY; 3];
        for x in v {
            mx = mx.max(norm(d_matrix(&a, x), rows).ln());
            for j in 0..3 {
                hi[j] = hi[j].max(1.0 / (1.0 - x[j]));
                lo[j] = lo[j].min(1.0 / (1.0 - x[j]));
            }
        }
        let dens = if mx > 0.0 { hi[0] * hi[1] * hi[2] } else { lo[0] * lo[1] * lo[2] };
        total += dens * area(&p) * mx;
    }
    4.0 / (std::f64::consts::PI.powi(2) * n as f64) * total
}

/// 𝕃′₂(n), summing over words other than (1,id)ⁿ.
pub fn brute_sorted_l2(n: usize, rows: bool) -> f64 {
    let mut total = 0.0;
    for w in words(n) {
        if w.iter().all(|&b| b == 0) {
            continue;
        }
        let p = product(&w, &SORTED);
        let a = transpose(&p);
        let corners = [[1, 0, 0], [1, 1, 0], [1, 1, 1]];
        let v: Vec<[f64; 2]> = corners
            .iter()
            .map(|c| {
                let q: Vec<f64> = (0..3).map(|i| (0..3).map(|j| p[i][j] * c[j]).sum::<i64>() as f64).collect();
                [q[1] / q[0], q[2] / q[0]]
            })
            .collect();
        let mut mx = f64::NEG_INFINITY;
        let mut hi = [0.0f64; 3];
        let mut lo = [f64::INFINITY; 3];
        for x in &v {
            // [[0,1,0],[0,0,1]]·A′·[[−x₁,−x₂],[1,0],[0,1]]
            let mut d = [[0.0; 2]; 2];
            for r in 0..2 {
                for k in 0..2 {
                    d[r][k] = a[r + 1][k + 1] as f64 - a[r + 1][0] as f64 * x[k];
                }
            }
            mx = mx.max(norm(d, rows).ln());
            let q = [1.0 / (1.0 + x[0]), 1.0 / (1.0 + x[1]), 1.0 / (x[0] + x[1])];
            for j in 0..3 {
                hi[j] = hi[j].max(q[j]);
                lo[j] = lo[j].min(q[j]);
            }
        }
        let dens = if mx > 0.0 { hi[0] * hi[1] * hi[2] } else { lo[0] * lo[1] * lo[2] };
        total += dens * shoelace([v[0], v[1], v[2]]) * mx;
    }
    24.0 / (std::f64::consts::PI.powi(2) * n as f64) * total
}
