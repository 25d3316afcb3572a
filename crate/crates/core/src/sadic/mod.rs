//! Substitutions attached to the branches, directive sequences, S-adic
//! languages and their balance properties.

pub mod directive;
pub mod eigen;
pub mod language;
pub mod lemmas;
pub mod substitution;

pub use directive::{parse_pattern, DirectiveSequence, Generator, BLOCK_LEN};
pub use eigen::{right_eigenvector, RightEigenvector};
pub use language::{
    balance_growth_check, balance_report, factor_balance, generate_language, letter_balance, theorem3_witness,
    word_balance, BalanceReport, Envelope, FactorBalanceRow, LanguageSample,
};
pub use lemmas::{
    billiard_prefix_max, billiard_word, constellation_bound, contraction_at, contraction_check,
    restricted_norm_survey, Constellation, SurveyResult,
};
pub use substitution::{abelianize, parse_word, word_string, Letter, SWord, Substitution};
