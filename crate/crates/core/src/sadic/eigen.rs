use serde::{Deserialize, Serialize};

use super::directive::DirectiveSequence;
use crate::error::{Error, Result};
use crate::exactlin::RealMatrix3;
use crate::reverse_cfa::Branch;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RightEigenvector {
    /// Normalized to 1-norm 1.
    pub u: [f64; 3],
    /// Max pairwise angle (radians) between the columns of B̄_{[0,depth)}.
    pub diameter: f64,
    pub depth: usize,
}

/// The direction of the nested cones B̄_{[0,depth)} ℝ³₊, approximated by the
/// image of the barycenter.
pub fn right_eigenvector(d: &DirectiveSequence, depth: usize) -> Result<RightEigenvector> {
    let syms = d.prefix(depth)?;
    let mut m = RealMatrix3::<f64>::identity();
    for &s in &syms {
        m = m.mul(&RealMatrix3::from_int(&Branch::ALL[s as usize - 1].matrix()));
        let top = m.m.iter().flatten().fold(0.0f64, |a, &v| a.max(v));
        m = m.scale(1.0 / top);
    }
    if m.m.iter().flatten().any(|&v| !(v > 0.0)) {
        return Err(Error::NotPositive(depth));
    }
    let cols: Vec<[f64; 3]> = (0..3)
        .map(|j| {
            let c = [m.m[0][j], m.m[1][j], m.m[2][j]];
            let n = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
            c.map(|v| v / n)
        })
        .collect();
    let mut diameter = 0.0f64;
    for a in 0..3 {
        for b in a + 1..3 {
            let dot: f64 = (0..3).map(|i| cols[a][i] * cols[b][i]).sum();
            diameter = diameter.max(dot.clamp(-1.0, 1.0).acos());
        }
    }
    let v: [f64; 3] = std::array::from_fn(|i| m.m[i].iter().sum::<f64>());
    let s: f64 = v.iter().sum();
    Ok(RightEigenvector { u: v.map(|c| c / s), diameter, depth })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perron(m: &RealMatrix3<f64>) -> [f64; 3] {
        let mut v = [1.0, 1.0, 1.0];
        for _ in 0..500 {
            let w: [f64; 3] = std::array::from_fn(|i| (0..3).map(|k| m.m[i][k] * v[k]).sum());
            let s: f64 = w.iter().sum();
            v = w.map(|c| c / s);
        }
        v
    }

    #[test]
    fn periodic_ar_converges_to_perron_vector() {
        let d = DirectiveSequence::periodic(vec![1, 2, 3], 0.0).unwrap();
        let e = right_eigenvector(&d, 60).unwrap();
        let b = d.incidence_range(0, 3).unwrap();
        let p = perron(&b);
        for i in 0..3 {
            assert!((e.u[i] - p[i]).abs() < 1e-8);
        }
        assert!((e.u.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(e.diameter < 1e-8);
    }

    #[test]
    fn sigma_four_contracts_to_diagonal() {
        let d = DirectiveSequence::periodic(vec![4], 0.0).unwrap();
        let e = right_eigenvector(&d, 40).unwrap();
        for c in e.u {
            assert!((c - 1.0 / 3.0).abs() < 1e-10);
        }
        // M₄ⁿ = (2ⁿ J + (−1)ⁿ(3I − J))/3, so the angle decays like 2⁻ⁿ
        let short = right_eigenvector(&d, 2).unwrap();
        assert!(short.diameter > 0.3 && e.diameter < 1e-10);
    }

    #[test]
    fn sigma_one_never_positive() {
        let d = DirectiveSequence::periodic(vec![1], 0.0).unwrap();
        assert!(matches!(right_eigenvector(&d, 50), Err(Error::NotPositive(50))));
    }
}
