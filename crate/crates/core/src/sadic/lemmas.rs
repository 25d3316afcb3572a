//! Finite checks of the projection and restricted-norm constants.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::directive::DirectiveSequence;
use super::substitution::SWord;
use crate::error::{Error, Result};
use crate::exactlin::{inf_norm_restricted, pi_projection, RealMatrix3, Vec3};
use crate::reverse_cfa::Branch;

pub const CONE_U: [[f64; 3]; 3] = [[4.0, 2.0, 1.0], [3.0, 2.0, 1.0], [2.0, 1.0, 1.0]];
pub const CONE_ONE: [[f64; 3]; 3] = [[4.0, 3.0, 2.0], [2.0, 2.0, 1.0], [1.0, 1.0, 1.0]];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constellation {
    pub value: f64,
    pub u: [f64; 3],
    pub one_n: [f64; 3],
    pub x: [f64; 3],
    /// Same maximum restricted to 1ₙ = (1,1,1).
    pub value_unit: f64,
}

/// Max of ‖π_{u,1ₙ}(x)‖∞ over extremal u, 1ₙ and x ∈ {±1}³ (72 cases).
pub fn constellation_bound() -> Constellation {
    let mut best = Constellation { value: -1.0, u: [0.0; 3], one_n: [0.0; 3], x: [0.0; 3], value_unit: 0.0 };
    for u in CONE_U {
        for v in CONE_ONE {
            for signs in 0..8 {
                let x: [f64; 3] = std::array::from_fn(|i| if signs >> i & 1 == 1 { -1.0 } else { 1.0 });
                let p = pi_projection(&Vec3(u), &Vec3(v), &Vec3(x)).expect("positive cone vectors");
                let val = p.inf_norm();
                if val > best.value {
                    (best.value, best.u, best.one_n, best.x) = (val, u, v, x);
                }
                if v == [1.0; 3] {
                    best.value_unit = best.value_unit.max(val);
                }
            }
        }
    }
    best
}

/// B_{σ₁}B_{σ₂}B_{σ₃}.
pub fn ar_block() -> RealMatrix3<f64> {
    let m = |b: Branch| RealMatrix3::from_int(&b.matrix());
    m(Branch::B1).mul(&m(Branch::B2)).mul(&m(Branch::B3))
}

/// ‖B|_{w⊥}‖∞ with w = ᵗ(B²)z.
pub fn contraction_at(z: [f64; 3]) -> Result<f64> {
    let b = ar_block();
    let b2t = b.mul(&b).transpose();
    inf_norm_restricted(&b, &b2t.apply(&Vec3(z)))
}

/// Max of contraction_at over the coordinate rays, (1,1,1), and `samples`
/// random positive z.
pub fn contraction_check(samples: usize, seed: u64) -> Result<f64> {
    let mut zs = vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 1.0, 1.0]];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        // log-uniform weights reach deep into the cone corners
        zs.push(std::array::from_fn(|_| (rng.gen_range(-12.0..12.0f64)).exp()));
    }
    zs.into_iter().try_fold(0.0f64, |a, z| Ok(a.max(contraction_at(z)?)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyResult {
    pub max: f64,
    pub windows: usize,
    /// (m, n) attaining the max.
    pub argmax: (usize, usize),
}

pub const SURVEY_HORIZON: usize = 4000;
pub const SURVEY_MAX_SPAN: usize = 24;

/// Max of ‖B̄_{[m,n)}|_{1ₙ⊥}‖∞ over `windows` sampled admissible pairs,
/// with m = 0 or B̄_{[m−3,m+3)} = (B_{σ₁}B_{σ₂}B_{σ₃})² and n − m ≤ 24.
pub fn restricted_norm_survey(d: &DirectiveSequence, windows: usize, seed: u64) -> Result<SurveyResult> {
    let horizon = SURVEY_HORIZON + SURVEY_MAX_SPAN;
    let syms = d.prefix(horizon)?;
    let found = d.admissible_indices(SURVEY_HORIZON)?;
    if found.is_empty() {
        return Err(Error::NoAdmissibleWindow);
    }
    let mut starts = vec![0];
    starts.extend(found);
    // 1ₙ up to scaling, for every n ≤ horizon
    let mut ones = vec![[1.0f64; 3]];
    for &s in &syms {
        let bt = RealMatrix3::from_int(&Branch::ALL[s as usize - 1].matrix().transpose());
        let v = bt.apply(&Vec3(*ones.last().expect("nonempty"))).0;
        let top = v.iter().fold(0.0f64, |a, &c| a.max(c));
        ones.push(v.map(|c| c / top));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SurveyResult { max: 0.0, windows: 0, argmax: (0, 0) };
    for _ in 0..windows {
        let m = starts[rng.gen_range(0..starts.len())];
        let n = m + rng.gen_range(0..=SURVEY_MAX_SPAN);
        let b = syms[m..n].iter().fold(RealMatrix3::identity(), |acc, &s| {
            acc.mul(&RealMatrix3::from_int(&Branch::ALL[s as usize - 1].matrix()))
        });
        let val = inf_norm_restricted(&b, &Vec3(ones[n]))?;
        out.windows += 1;
        if val > out.max {
            out.max = val;
            out.argmax = (m, n);
        }
    }
    Ok(out)
}

fn prefix_bound(count: [i64; 3], target: [i64; 3], w: [f64; 3]) -> f64 {
    let c = Vec3(count.map(|v| v as f64));
    let t = Vec3(target.map(|v| v as f64));
    pi_projection(&t, &Vec3(w), &c).expect("⟨t,w⟩ > 0").inf_norm()
}

/// Largest ‖π_{x,w}(l(p))‖∞ over the prefixes p of `word`.
pub fn billiard_prefix_max(word: &[u8], target: [i64; 3], w: [f64; 3]) -> f64 {
    let mut c = [0i64; 3];
    let mut best = 0.0f64;
    for &l in word {
        c[(l - 1) as usize] += 1;
        best = best.max(prefix_bound(c, target, w));
    }
    best
}

/// Word with l(word) = target whose prefixes stay within ∞-distance 1 of the
/// target line, built greedily.
pub fn billiard_word(target: [i64; 3], w: [f64; 3]) -> Result<SWord> {
    if target.iter().any(|&t| t < 0) || target.iter().all(|&t| t == 0) {
        return Err(Error::Invalid(format!("target {target:?} not in N^3 minus 0")));
    }
    let tw: f64 = (0..3).map(|i| target[i] as f64 * w[i]).sum();
    if !(tw > 0.0) {
        return Err(Error::DegenerateProjection);
    }
    let len: i64 = target.iter().sum();
    let mut word = Vec::with_capacity(len as usize);
    let mut c = [0i64; 3];
    for _ in 0..len {
        let mut best: Option<(f64, f64, usize)> = None;
        for j in 0..3 {
            if c[j] == target[j] {
                continue;
            }
            let mut n = c;
            n[j] += 1;
            let val = prefix_bound(n, target, w);
            // tie-break on the letter lagging furthest behind the target line
            let k = (c.iter().sum::<i64>() + 1) as f64;
            let lag = k * target[j] as f64 / len as f64 - n[j] as f64;
            if best.map_or(true, |(bv, bl, _)| val < bv - 1e-12 || (val <= bv + 1e-12 && lag > bl)) {
                best = Some((val, lag, j));
            }
        }
        let (_, _, j) = best.expect("some letter remains");
        c[j] += 1;
        word.push(j as u8 + 1);
    }
    let m = billiard_prefix_max(&word, target, w);
    if m > 1.0 + 1e-12 {
        return Err(Error::BilliardFailure(word.len()));
    }
    Ok(word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sadic::substitution::abelianize;

    #[test]
    fn constellation_is_eleven_sevenths() {
        let c = constellation_bound();
        assert!((c.value - 11.0 / 7.0).abs() < 1e-12);
        assert!(c.value_unit <= 11.0 / 7.0 + 1e-12);
        assert_eq!(c.u, [4.0, 2.0, 1.0]);
        assert_eq!(c.one_n, [1.0, 1.0, 1.0]);
        assert_eq!(constellation_bound(), c);
    }

    #[test]
    fn contraction_examples() {
        let one = contraction_at([1.0, 1.0, 1.0]).unwrap();
        assert!(one <= 5.0 / 7.0);
        assert!((contraction_at([3.0, 3.0, 3.0]).unwrap() - one).abs() < 1e-12);
        assert!(contraction_check(2000, 5).unwrap() <= 5.0 / 7.0 + 1e-9);
    }

    #[test]
    fn survey_examples() {
        let d = DirectiveSequence::random(4, 0.1).unwrap();
        let r = restricted_norm_survey(&d, 200, 1).unwrap();
        assert!(r.max <= 10.0 && r.max >= 1.0 - 1e-9, "{r:?}");
        // a length-3 block window at an admissible index
        let ar = DirectiveSequence::periodic(vec![1, 2, 3], 0.0).unwrap();
        let b = ar.incidence_range(3, 6).unwrap();
        let w = ar.incidence_range(0, 6).unwrap().transpose().apply(&Vec3([1.0; 3]));
        assert!(inf_norm_restricted(&b, &w).unwrap() <= 5.0 / 7.0 + 1e-9);
        let none = DirectiveSequence::periodic(vec![4], 0.0).unwrap();
        assert!(matches!(restricted_norm_survey(&none, 10, 1), Err(Error::NoAdmissibleWindow)));
    }

    #[test]
    fn billiard_examples() {
        let one = [1.0; 3];
        let w = billiard_word([1, 1, 1], one).unwrap();
        let mut s = w.clone();
        s.sort();
        assert_eq!(s, vec![1, 2, 3]);
        for t in [[2, 1, 0], [5, 3, 2], [0, 0, 4], [50, 1, 17]] {
            let w = billiard_word(t, one).unwrap();
            assert_eq!(abelianize(&w), t);
            assert!(billiard_prefix_max(&w, t, one) <= 1.0 + 1e-12);
        }
        assert!(billiard_word([0, 0, 0], one).is_err());
    }

    #[test]
    fn billiard_random_targets() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..2000 {
            let t: [i64; 3] = std::array::from_fn(|_| rng.gen_range(0..=50));
            if t == [0, 0, 0] {
                continue;
            }
            let w = billiard_word(t, [1.0; 3]).unwrap_or_else(|e| panic!("{t:?}: {e}"));
            assert_eq!(abelianize(&w), t);
        }
    }
}
