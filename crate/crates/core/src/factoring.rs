//! Replacing rare words in templates with their POS factor.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::corpus::{AnnotatedSentence, CountTable, TemplateInventory, TemplateItem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FactorMode {
    /// Factor words whose corpus count is below the threshold.
    AbsoluteCount,
    /// Factor words whose frequency rank is above the threshold.
    RelativeRank,
}

impl fmt::Display for FactorMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FactorMode::AbsoluteCount => "absolute",
            FactorMode::RelativeRank => "relative",
        })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolicyError {
    #[error("unknown factoring mode `{0}` (expected `absolute` or `relative`)")]
    UnknownMode(String),
    #[error("factoring threshold must be at least 1")]
    ZeroThreshold,
}

impl FromStr for FactorMode {
    type Err = PolicyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "absolute" => Ok(FactorMode::AbsoluteCount),
            "relative" => Ok(FactorMode::RelativeRank),
            other => Err(PolicyError::UnknownMode(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FactorPolicy {
    mode: FactorMode,
    threshold: u64,
}

impl FactorPolicy {
    pub fn new(mode: FactorMode, threshold: u64) -> Result<Self, PolicyError> {
        if threshold == 0 {
            return Err(PolicyError::ZeroThreshold);
        }
        Ok(FactorPolicy { mode, threshold })
    }

    pub fn absolute(threshold: u64) -> Self {
        Self::new(FactorMode::AbsoluteCount, threshold).expect("threshold >= 1")
    }

    pub fn relative(threshold: u64) -> Self {
        Self::new(FactorMode::RelativeRank, threshold).expect("threshold >= 1")
    }

    /// `count < 1` never holds for a seen word, so nothing seen is factored.
    pub fn identity() -> Self {
        Self::absolute(1)
    }

    pub fn mode(&self) -> FactorMode {
        self.mode
    }

    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    pub fn factors(&self, word: &str, table: &CountTable) -> bool {
        match self.mode {
            FactorMode::AbsoluteCount => table.count(word) < self.threshold,
            FactorMode::RelativeRank => match table.rank(word) {
                Some(rank) => rank > self.threshold,
                None => true,
            },
        }
    }
}

impl fmt::Display for FactorPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.mode {
            FactorMode::AbsoluteCount => write!(f, "count < {}", self.threshold),
            FactorMode::RelativeRank => write!(f, "rank > {}", self.threshold),
        }
    }
}

pub fn factor_token(
    word: &str,
    pos: &str,
    table: &CountTable,
    policy: &FactorPolicy,
) -> TemplateItem {
    if policy.factors(word, table) {
        TemplateItem::factor(pos)
    } else {
        TemplateItem::lexical(word, pos)
    }
}

fn factor_item(item: &TemplateItem, table: &CountTable, policy: &FactorPolicy) -> TemplateItem {
    if item.is_factor() {
        item.clone()
    } else {
        factor_token(&item.text, &item.pos, table, policy)
    }
}

/// Factor every template, merging templates that become identical.
pub fn factor_inventory(
    inv: &TemplateInventory,
    table: &CountTable,
    policy: &FactorPolicy,
) -> TemplateInventory {
    let mut out = TemplateInventory::new();
    let remap: Vec<_> = inv
        .templates()
        .iter()
        .map(|t| {
            let items = t
                .items
                .iter()
                .map(|i| factor_item(i, table, policy))
                .collect();
            out.add(items, &t.tag, t.count)
        })
        .collect();
    for seq in inv.sequences() {
        out.push_sequence(seq.iter().map(|id| remap[id.0]).collect());
    }
    out
}

/// Each sentence as factored token strings, for training the junction LM.
pub fn factored_token_stream(
    sentences: &[AnnotatedSentence],
    table: &CountTable,
    policy: &FactorPolicy,
) -> Vec<Vec<String>> {
    sentences
        .iter()
        .map(|s| {
            s.tokens
                .iter()
                .map(|t| factor_token(&t.surface, &t.pos, table, policy).render())
                .collect()
        })
        .collect()
}
