use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::directive::DirectiveSequence;
use super::eigen::{right_eigenvector, RightEigenvector};
use super::substitution::{word_string, Letter, SWord, Substitution, MAX_IMAGE_LEN};
use crate::error::{Error, Result};

pub const DEFAULT_FACTOR_CAP: usize = 12;
pub const DEFAULT_FACTOR_WINDOW: usize = 32;
/// Depth at which the generalized right eigenvector is read off.
pub const EIGEN_DEPTH: usize = 400;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LanguageSample {
    pub depth: usize,
    /// τ_{[0,depth)}(i) for i = 1, 2, 3.
    pub images: [SWord; 3],
    /// Every τ_{[0,k)}(i) for k ≤ depth, deduplicated.
    pub words: Vec<SWord>,
    /// Factor-length cap for balance envelopes.
    pub cap: usize,
    /// All factors of length ≤ min(cap, DEFAULT_FACTOR_CAP).
    pub factors: BTreeSet<SWord>,
}

/// Per-length minimum and maximum letter counts; index L − 1 holds length L.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Envelope {
    pub min: Vec<[i64; 3]>,
    pub max: Vec<[i64; 3]>,
}

impl Envelope {
    pub fn of_words<'a>(words: impl IntoIterator<Item = &'a SWord>, cap: usize) -> Self {
        let mut min = vec![[i64::MAX; 3]; cap];
        let mut max = vec![[i64::MIN; 3]; cap];
        for w in words {
            let mut pre = vec![[0i64; 3]; w.len() + 1];
            for (k, &l) in w.iter().enumerate() {
                pre[k + 1] = pre[k];
                pre[k + 1][(l - 1) as usize] += 1;
            }
            for s in 0..w.len() {
                for len in 1..=cap.min(w.len() - s) {
                    let (a, b) = (&pre[s], &pre[s + len]);
                    for j in 0..3 {
                        let c = b[j] - a[j];
                        let (lo, hi) = (&mut min[len - 1][j], &mut max[len - 1][j]);
                        *lo = (*lo).min(c);
                        *hi = (*hi).max(c);
                    }
                }
            }
        }
        // drop lengths with no factor
        let keep = max.iter().take_while(|m| m[0] != i64::MIN).count();
        min.truncate(keep);
        max.truncate(keep);
        Self { min, max }
    }

    /// Smallest C with all equal-length factor pairs C-letter balanced.
    pub fn balance_constant(&self) -> i64 {
        self.min
            .iter()
            .zip(&self.max)
            .flat_map(|(lo, hi)| (0..3).map(move |j| hi[j] - lo[j]))
            .max()
            .unwrap_or(0)
    }

    /// sup ‖π_{u,1}(l(v))‖∞ over the factors v covered by the envelope.
    pub fn projection_sup(&self, u: [f64; 3]) -> f64 {
        let s: f64 = u.iter().sum();
        let mut best = 0.0f64;
        for (k, (lo, hi)) in self.min.iter().zip(&self.max).enumerate() {
            let len = (k + 1) as f64;
            for j in 0..3 {
                let c = len * u[j] / s;
                best = best.max((hi[j] as f64 - c).abs()).max((lo[j] as f64 - c).abs());
            }
        }
        best
    }
}

impl LanguageSample {
    pub fn from_words(words: Vec<SWord>, cap: usize) -> Result<Self> {
        if words.is_empty() || words.iter().any(|w| w.is_empty()) {
            return Err(Error::Invalid("empty sample".into()));
        }
        let images = [0, 1, 2].map(|i| words.get(i).cloned().unwrap_or_default());
        let factors = factor_set(&words, cap.min(DEFAULT_FACTOR_CAP));
        Ok(Self { depth: 0, images, words, cap, factors })
    }

    pub fn envelope(&self) -> Envelope {
        Envelope::of_words(&self.words, self.cap)
    }

    /// One word per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for w in &self.words {
            s.push_str(&word_string(w));
            s.push('\n');
        }
        s
    }

    pub fn total_len(&self) -> usize {
        self.words.iter().map(Vec::len).sum()
    }
}

fn factor_set(words: &[SWord], max_len: usize) -> BTreeSet<SWord> {
    let mut set = BTreeSet::new();
    for w in words {
        for s in 0..w.len() {
            for l in 1..=max_len.min(w.len() - s) {
                set.insert(w[s..s + l].to_vec());
            }
        }
    }
    set
}

/// Factors of τ_{[0,k)}(i), k ≤ n, i ∈ {1,2,3}, up to length `cap`.
pub fn generate_language(d: &DirectiveSequence, n: usize, cap: usize) -> Result<LanguageSample> {
    if cap == 0 {
        return Err(Error::Invalid("cap must be positive".into()));
    }
    let syms = d.prefix(n)?;
    let mut acc = Substitution::identity();
    let mut words: Vec<SWord> = acc.images.to_vec();
    let mut total = 3usize;
    for &s in &syms {
        acc = acc.compose(&Substitution::sigma(s as usize)?)?;
        for im in &acc.images {
            total += im.len();
            if !words.contains(im) {
                words.push(im.clone());
            }
        }
        if total > MAX_IMAGE_LEN {
            return Err(Error::ResourceCap(format!("language sample exceeds {MAX_IMAGE_LEN} letters")));
        }
    }
    let factors = factor_set(&words, cap.min(DEFAULT_FACTOR_CAP));
    Ok(LanguageSample { depth: n, images: acc.images, words, cap, factors })
}

pub fn letter_balance(sample: &LanguageSample) -> i64 {
    sample.envelope().balance_constant()
}

/// Letter-balance constant of a single finite word (all factor lengths).
pub fn word_balance(u: &[Letter]) -> i64 {
    Envelope::of_words([&u.to_vec()], u.len()).balance_constant()
}

/// C(σᵢ(u)) ≤ C(u) + 4 for i ≤ 3, C(σ₄(u)) ≤ C(u) + 2.
pub fn balance_growth_check(u: &[Letter], i: usize) -> Result<bool> {
    let s = Substitution::sigma(i)?;
    let slack = if i == 4 { 2 } else { 4 };
    Ok(word_balance(&s.apply(u)) <= word_balance(u) + slack)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorBalanceRow {
    pub factor: String,
    /// max − min occurrence count of the factor over equal-length windows.
    pub discrepancy: i64,
}

/// Occurrence discrepancies of each sampled factor of length ≤ factor_cap,
/// over windows of length ≤ window. Certifies nothing beyond those caps.
pub fn factor_balance(sample: &LanguageSample, factor_cap: usize, window: usize) -> Vec<FactorBalanceRow> {
    let window = window.min(sample.cap);
    let mut rows = Vec::new();
    for v in sample.factors.iter().filter(|v| v.len() <= factor_cap) {
        let mut lo = vec![i64::MAX; window + 1];
        let mut hi = vec![i64::MIN; window + 1];
        for w in &sample.words {
            let mut pre = vec![0i64; w.len() + 1];
            for p in 0..w.len() {
                let hit = p + v.len() <= w.len() && w[p..p + v.len()] == v[..];
                pre[p + 1] = pre[p] + hit as i64;
            }
            for s in 0..w.len() {
                for len in 1..=window.min(w.len() - s) {
                    let c = if len >= v.len() { pre[s + len - v.len() + 1] - pre[s] } else { 0 };
                    lo[len] = lo[len].min(c);
                    hi[len] = hi[len].max(c);
                }
            }
        }
        let disc = (1..=window).filter(|&l| hi[l] != i64::MIN).map(|l| hi[l] - lo[l]).max().unwrap_or(0);
        rows.push(FactorBalanceRow { factor: word_string(v), discrepancy: disc });
    }
    rows
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BalanceReport {
    pub depth: usize,
    pub cap: usize,
    pub sample_letters: usize,
    pub letter_balance_constant: i64,
    pub factor_cap: usize,
    pub factor_window: usize,
    pub factor_balance: Vec<FactorBalanceRow>,
    pub projection_sup: f64,
    pub eigenvector: RightEigenvector,
    /// C ≤ 2·projection_sup + 1.
    pub two_c_holds: bool,
    pub note: String,
}

pub fn balance_report(
    d: &DirectiveSequence,
    depth: usize,
    cap: usize,
    factor_cap: usize,
    factor_window: usize,
) -> Result<BalanceReport> {
    let sample = generate_language(d, depth, cap)?;
    let eig = right_eigenvector(d, EIGEN_DEPTH.max(depth))?;
    let env = sample.envelope();
    let c = env.balance_constant();
    let sup = env.projection_sup(eig.u);
    let window = factor_window.min(cap);
    Ok(BalanceReport {
        depth,
        cap,
        sample_letters: sample.total_len(),
        letter_balance_constant: c,
        factor_cap,
        factor_window: window,
        factor_balance: factor_balance(&sample, factor_cap, window),
        projection_sup: sup,
        eigenvector: eig,
        two_c_holds: c as f64 <= 2.0 * sup + 1.0,
        note: format!("factor lengths <= {cap}, windows <= {window}, depth {depth}"),
    })
}

/// Empirical balance witness for sequences carrying the (σ₁σ₂σ₃)⁹ block.
pub fn theorem3_witness(d: &DirectiveSequence, depth: usize, cap: usize) -> Result<BalanceReport> {
    if !(d.inject_rate > 0.0) {
        return Err(Error::Invalid("witness needs a positive injection rate".into()));
    }
    balance_report(d, depth, cap, DEFAULT_FACTOR_CAP.min(cap), DEFAULT_FACTOR_WINDOW)
}
