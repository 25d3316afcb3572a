use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::IntMatrix3;

/// Letters are 1, 2, 3.
pub type Letter = u8;
pub type SWord = Vec<Letter>;

/// Image length guard for compositions.
pub const MAX_IMAGE_LEN: usize = 50_000_000;

pub fn parse_word(s: &str) -> Result<SWord> {
    s.bytes()
        .map(|b| match b {
            b'1'..=b'3' => Ok(b - b'0'),
            _ => Err(Error::Invalid(format!("letter {:?} not in {{1,2,3}}", b as char))),
        })
        .collect()
}

pub fn word_string(w: &[Letter]) -> String {
    w.iter().map(|&l| (b'0' + l) as char).collect()
}

/// l(w): letter counts.
pub fn abelianize(w: &[Letter]) -> [i64; 3] {
    let mut c = [0i64; 3];
    for &l in w {
        c[(l - 1) as usize] += 1;
    }
    c
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Substitution {
    pub images: [SWord; 3],
}

impl Substitution {
    pub fn new(images: [SWord; 3]) -> Result<Self> {
        for im in &images {
            if im.is_empty() {
                return Err(Error::Invalid("erasing substitution".into()));
            }
            if im.iter().any(|&l| !(1..=3).contains(&l)) {
                return Err(Error::Invalid("letter outside {1,2,3}".into()));
            }
        }
        Ok(Self { images })
    }

    pub fn identity() -> Self {
        Self { images: [vec![1], vec![2], vec![3]] }
    }

    /// σ₁ … σ₄ for i = 1..4.
    pub fn sigma(i: usize) -> Result<Self> {
        let im: [&[Letter]; 3] = match i {
            1 => [&[1], &[2, 1], &[3, 1]],
            2 => [&[1, 2], &[2], &[3, 2]],
            3 => [&[1, 3], &[2, 3], &[3]],
            4 => [&[2, 3], &[3, 1], &[1, 2]],
            _ => {
                return Err(Error::Parameter {
                    name: "substitution",
                    value: i as i64,
                    range: "[1, 4]",
                })
            }
        };
        Ok(Self { images: im.map(|w| w.to_vec()) })
    }

    pub fn image(&self, l: Letter) -> &[Letter] {
        &self.images[(l - 1) as usize]
    }

    pub fn apply(&self, w: &[Letter]) -> SWord {
        let mut out = Vec::with_capacity(self.image_len(w));
        for &l in w {
            out.extend_from_slice(self.image(l));
        }
        out
    }

    fn image_len(&self, w: &[Letter]) -> usize {
        w.iter().map(|&l| self.image(l).len()).sum()
    }

    /// self ∘ other.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let images = [0, 1, 2].map(|i| self.apply(&other.images[i]));
        if images.iter().any(|im| im.len() > MAX_IMAGE_LEN) {
            return Err(Error::ResourceCap("substitution image length".into()));
        }
        Ok(Self { images })
    }

    /// B_σ with column j = l(σ(j)).
    pub fn incidence(&self) -> IntMatrix3 {
        let mut e = [[0i64; 3]; 3];
        for j in 0..3 {
            let c = abelianize(&self.images[j]);
            for i in 0..3 {
                e[i][j] = c[i];
            }
        }
        IntMatrix3::new(e)
    }

    pub fn is_left_proper(&self) -> bool {
        let f = self.images[0][0];
        self.images.iter().all(|w| w[0] == f)
    }

    pub fn is_right_proper(&self) -> bool {
        let f = *self.images[0].last().expect("nonerasing");
        self.images.iter().all(|w| *w.last().expect("nonerasing") == f)
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "1->{}, 2->{}, 3->{}",
            word_string(&self.images[0]),
            word_string(&self.images[1]),
            word_string(&self.images[2])
        )
    }
}
