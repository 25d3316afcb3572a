//! Composite numerical checks with pass/fail verdicts, shared by the CLI and
//! the acceptance run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exactlin::{IntMatrix3, SimplexPoint};
use crate::lyapunov_bounds::{invariance_check, mass, INVARIANCE_BOXES};
use crate::reverse_cfa::{
    cocycle_matrix, d_field, hpweg_sides, orbit, renyi_ratio, row_norm_check, Branch, Word,
};
use crate::sadic::{
    abelianize, balance_growth_check, billiard_prefix_max, billiard_word, constellation_bound, contraction_check,
    restricted_norm_survey, DirectiveSequence,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// The observed quantity compared against `limit`.
    pub value: f64,
    pub limit: f64,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, value: f64, limit: f64, detail: String) -> Self {
        Self { name: name.into(), passed, value, limit, detail }
    }
}

/// C(1ⁿ) = (n+1)³ for n ≤ 20; C(w·4) < 8 and the row-norm inequality on
/// random words of length ≤ max_len.
pub fn renyi_checks(samples: usize, max_len: usize, seed: u64) -> Result<Vec<Check>> {
    let mut bad_exact = 0;
    for n in 1..=20usize {
        let c = renyi_ratio(&Word::power(Branch::B1, n))?;
        if c != ((n + 1) as f64).powi(3) {
            bad_exact += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut worst, mut row_fail) = (0.0f64, 0usize);
    for _ in 0..samples {
        let n = rng.gen_range(0..=max_len);
        let mut w = Word::random(&mut rng, n);
        w.push(Branch::B4);
        worst = worst.max(renyi_ratio(&w)?);
        if !row_norm_check(&w)? {
            row_fail += 1;
        }
    }
    Ok(vec![
        Check::new("renyi_uniform_exact", bad_exact == 0, bad_exact as f64, 0.0, "C(1^n) = (n+1)^3, n <= 20".into()),
        Check::new("renyi_after_four", worst < 8.0, worst, 8.0, format!("max C(w4) over {samples} words")),
        Check::new("row_norm", row_fail == 0, row_fail as f64, 0.0, format!("failures over {samples} words")),
    ])
}

/// D-cocycle composition and the H·Π·A·H identity on random (word, point)
/// pairs; det A = 2^{|w|₄} on every word of length ≤ det_len.
pub fn cocycle_checks(pairs: usize, det_len: usize, seed: u64) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut worst_d, mut worst_h) = (0.0f64, 0.0f64);
    let mut done = 0;
    while done < pairs {
        let v: [f64; 3] = [rng.gen(), rng.gen(), rng.gen()];
        let s: f64 = v.iter().sum();
        let Ok(x) = SimplexPoint::new(v[0] / s, v[1] / s, v[2] / s) else { continue };
        let (nu, nv) = (rng.gen_range(0..=8), rng.gen_range(0..=8));
        let Ok((y, word)) = orbit(&x, nu + nv) else { continue };
        let (u, rest) = word.split_at(nu);
        let Ok((xu, _)) = orbit(&x, nu) else { continue };
        let whole = d_field::<f64>(&word)?.eval_at(&x.as_vec());
        let comp = d_field::<f64>(&rest)?.eval_at(&xu.as_vec()).mul(&d_field::<f64>(&u)?.eval_at(&x.as_vec()));
        worst_d = worst_d.max(whole.max_abs_diff(&comp) / whole.max_abs().max(1.0));
        let a = cocycle_matrix(&word)?.to_real();
        let (lhs, rhs) = hpweg_sides(&a, &x.as_vec(), &y.as_vec());
        for i in 0..3 {
            for k in 0..2 {
                worst_h = worst_h.max((lhs[i][k] - rhs[i][k]).abs() / rhs[i][k].abs().max(1.0));
            }
        }
        done += 1;
    }
    let mut det_fail = 0u64;
    let mut stack = vec![(IntMatrix3::IDENTITY, 0usize, 0u32)];
    let mut words = 0u64;
    while let Some((p, len, fours)) = stack.pop() {
        words += 1;
        if p.det()? != 1i64 << fours {
            det_fail += 1;
        }
        if len < det_len {
            for b in Branch::ALL {
                stack.push((p.mul(&b.matrix())?, len + 1, fours + (b == Branch::B4) as u32));
            }
        }
    }
    Ok(vec![
        Check::new("d_cocycle", worst_d <= 1e-8, worst_d, 1e-8, format!("max relative error over {pairs} pairs")),
        Check::new("hpweg", worst_h <= 1e-8, worst_h, 1e-8, format!("max relative error over {pairs} pairs")),
        Check::new("det_power_of_two", det_fail == 0, det_fail as f64, 0.0, format!("{words} words of length <= {det_len}")),
    ])
}

pub fn lemma_constant_checks(cone_samples: usize, sequences: usize, windows: usize, seed: u64) -> Result<Vec<Check>> {
    let c = constellation_bound();
    let k = contraction_check(cone_samples, seed)?;
    let mut survey = 0.0f64;
    for s in 0..sequences as u64 {
        let d = DirectiveSequence::random(seed.wrapping_add(s), 0.05)?;
        survey = survey.max(restricted_norm_survey(&d, windows, s)?.max);
    }
    Ok(vec![
        Check::new(
            "constellation",
            c.value <= 11.0 / 7.0 + 1e-12 && c.value_unit <= 11.0 / 7.0 + 1e-12,
            c.value,
            11.0 / 7.0,
            format!("attained at u={:?} 1n={:?} x={:?}", c.u, c.one_n, c.x),
        ),
        Check::new("contraction", k <= 5.0 / 7.0 + 1e-9, k, 5.0 / 7.0, format!("rays plus {cone_samples} cone samples")),
        Check::new("restricted_norm_survey", survey <= 10.0, survey, 10.0, format!("{sequences} sequences x {windows} windows")),
    ])
}

pub fn balance_growth_checks(words: usize, max_len: usize, seed: u64) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fails = 0;
    for _ in 0..words {
        let n = rng.gen_range(1..=max_len);
        let u: Vec<u8> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
        for i in 1..=4 {
            if !balance_growth_check(&u, i)? {
                fails += 1;
            }
        }
    }
    Ok(Check::new("balance_growth", fails == 0, fails as f64, 0.0, format!("{words} words x 4 substitutions")))
}

pub fn billiard_checks(targets: usize, max_entry: i64, seed: u64) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut fails = 0;
    let mut done = 0;
    while done < targets {
        let t: [i64; 3] = std::array::from_fn(|_| rng.gen_range(0..=max_entry));
        if t == [0, 0, 0] {
            continue;
        }
        done += 1;
        match billiard_word(t, [1.0; 3]) {
            Ok(w) if abelianize(&w) == t => worst = worst.max(billiard_prefix_max(&w, t, [1.0; 3])),
            _ => fails += 1,
        }
    }
    Ok(Check::new(
        "billiard_prefix",
        fails == 0 && worst <= 1.0 + 1e-12,
        worst,
        1.0,
        format!("{targets} targets, {fails} construction failures"),
    ))
}

pub fn measure_checks() -> Result<Vec<Check>> {
    let m = mass::<f64>(1e-10)?;
    let mut out = vec![Check::new(
        "mass",
        (m.value - 1.0).abs() <= 1e-6,
        m.value,
        1.0,
        format!("{} evaluations, error estimate {:.1e}", m.evals, m.error),
    )];
    for b in INVARIANCE_BOXES {
        let r = invariance_check(b, 1e-9)?;
        out.push(Check::new(
            "invariance",
            r.diff <= 1e-5,
            r.diff,
            1e-5,
            format!("box {:?}: mu(f^-1 E) = {:.12}, mu(E) = {:.12}", b, r.preimage_mass, r.mass),
        ));
    }
    Ok(out)
}
