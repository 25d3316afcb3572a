use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::substitution::Substitution;
use crate::error::{Error, Result};
use crate::exactlin::RealMatrix3;

/// Length of the injected block (σ₁σ₂σ₃)⁹.
pub const BLOCK_LEN: usize = 27;

pub fn block() -> [u8; BLOCK_LEN] {
    std::array::from_fn(|i| (i % 3) as u8 + 1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    /// A finite prefix; indices past its end are errors.
    Explicit(Vec<u8>),
    Periodic(Vec<u8>),
    /// Uniform i.i.d. symbols from a counter-based stream.
    Random { seed: u64 },
}

/// Sequence over {σ₁,…,σ₄}, stored as symbols 1..=4. The index range is cut
/// into chunks of 27 symbols; chunk c is replaced by (σ₁σ₂σ₃)⁹ when
/// ⌊(c+1)r⌋ > ⌊cr⌋, so a fraction r of the chunks carries the block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectiveSequence {
    pub generator: Generator,
    pub inject_rate: f64,
}

pub fn parse_pattern(s: &str) -> Result<Vec<u8>> {
    let p: Vec<u8> = s
        .bytes()
        .map(|b| match b {
            b'1'..=b'4' => Ok(b - b'0'),
            _ => Err(Error::Invalid(format!("pattern symbol {:?} not in 1..4", b as char))),
        })
        .collect::<Result<_>>()?;
    if p.is_empty() {
        return Err(Error::Invalid("empty pattern".into()));
    }
    Ok(p)
}

impl DirectiveSequence {
    pub fn explicit(symbols: Vec<u8>) -> Result<Self> {
        check_symbols(&symbols)?;
        Ok(Self { generator: Generator::Explicit(symbols), inject_rate: 0.0 })
    }

    pub fn periodic(pattern: Vec<u8>, inject_rate: f64) -> Result<Self> {
        check_symbols(&pattern)?;
        if pattern.is_empty() {
            return Err(Error::Invalid("empty pattern".into()));
        }
        check_rate(inject_rate)?;
        Ok(Self { generator: Generator::Periodic(pattern), inject_rate })
    }

    pub fn random(seed: u64, inject_rate: f64) -> Result<Self> {
        check_rate(inject_rate)?;
        Ok(Self { generator: Generator::Random { seed }, inject_rate })
    }

    fn injected(&self, chunk: usize) -> bool {
        let r = self.inject_rate;
        r > 0.0 && ((chunk + 1) as f64 * r).floor() > (chunk as f64 * r).floor()
    }

    fn chunk(&self, c: usize) -> Vec<u8> {
        if self.injected(c) {
            return block().to_vec();
        }
        let base = c * BLOCK_LEN;
        match &self.generator {
            Generator::Explicit(v) => v.iter().skip(base).take(BLOCK_LEN).copied().collect(),
            Generator::Periodic(p) => (base..base + BLOCK_LEN).map(|k| p[k % p.len()]).collect(),
            Generator::Random { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                rng.set_word_pos(base as u128);
                (0..BLOCK_LEN).map(|_| (rng.next_u32() % 4) as u8 + 1).collect()
            }
        }
    }

    /// Symbols τ₀ … τ_{n−1}.
    pub fn prefix(&self, n: usize) -> Result<Vec<u8>> {
        if let Generator::Explicit(v) = &self.generator {
            if n > v.len() && self.inject_rate == 0.0 {
                return Err(Error::Invalid(format!("explicit sequence has only {} symbols", v.len())));
            }
        }
        let mut out = Vec::with_capacity(n + BLOCK_LEN);
        let mut c = 0;
        while out.len() < n {
            let ch = self.chunk(c);
            if ch.is_empty() {
                return Err(Error::Invalid("explicit sequence exhausted".into()));
            }
            out.extend(ch);
            c += 1;
        }
        out.truncate(n);
        Ok(out)
    }

    pub fn symbol(&self, k: usize) -> Result<u8> {
        let ch = self.chunk(k / BLOCK_LEN);
        ch.get(k % BLOCK_LEN)
            .copied()
            .ok_or_else(|| Error::Invalid(format!("explicit sequence has no symbol {k}")))
    }

    /// τ_{[k,l)} = τ_k ∘ ⋯ ∘ τ_{l−1}.
    pub fn compose_range(&self, k: usize, l: usize) -> Result<Substitution> {
        if k > l {
            return Err(Error::Invalid(format!("empty range [{k}, {l})")));
        }
        let syms = self.prefix(l)?;
        let mut acc = Substitution::identity();
        for &s in &syms[k..] {
            acc = acc.compose(&Substitution::sigma(s as usize)?)?;
        }
        Ok(acc)
    }

    /// B̄_{[k,l)} in binary64, without rescaling.
    pub fn incidence_range(&self, k: usize, l: usize) -> Result<RealMatrix3<f64>> {
        if k > l {
            return Err(Error::Invalid(format!("empty range [{k}, {l})")));
        }
        let syms = self.prefix(l)?;
        Ok(syms[k..].iter().fold(RealMatrix3::identity(), |m, &s| {
            m.mul(&RealMatrix3::from_int(&crate::reverse_cfa::Branch::ALL[s as usize - 1].matrix()))
        }))
    }

    /// Fraction of the first n symbols covered by a left-to-right scan for
    /// non-overlapping copies of (σ₁σ₂σ₃)⁹.
    pub fn block_coverage(&self, n: usize) -> Result<f64> {
        let p = self.prefix(n)?;
        let b = block();
        let (mut i, mut hits) = (0, 0);
        while i + BLOCK_LEN <= p.len() {
            if p[i..i + BLOCK_LEN] == b {
                hits += 1;
                i += BLOCK_LEN;
            } else {
                i += 1;
            }
        }
        Ok((hits * BLOCK_LEN) as f64 / n as f64)
    }

    /// Indices m ≥ 3 with B̄_{[m−3,m+3)} = (B_{σ₁}B_{σ₂}B_{σ₃})², i.e. τ_{[m−3,m+3)} = σ₁σ₂σ₃σ₁σ₂σ₃.
    pub fn admissible_indices(&self, n: usize) -> Result<Vec<usize>> {
        let p = self.prefix(n)?;
        const PAT: [u8; 6] = [1, 2, 3, 1, 2, 3];
        Ok((3..=n.saturating_sub(3)).filter(|&m| p[m - 3..m + 3] == PAT).collect())
    }
}

fn check_symbols(s: &[u8]) -> Result<()> {
    if s.iter().any(|c| !(1..=4).contains(c)) {
        return Err(Error::Invalid("directive symbols must be in 1..4".into()));
    }
    Ok(())
}

fn check_rate(r: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Invalid(format!("inject rate {r} outside [0, 1]")));
    }
    Ok(())
}
