//! Interpolated modified Kneser-Ney n-gram models with ARPA interop.

mod arpa;
mod counts;
mod discount;
mod model;

use std::collections::HashMap;
use std::io;

use thiserror::Error;

pub use arpa::{read_arpa, write_arpa};
pub use counts::{count_ngrams, NGramCounts};
pub use discount::{chen_goodman, estimate_discounts, Discounts, FALLBACK_DISCOUNT};
pub use model::{train_kn, Entry, LanguageModel};

pub const BOS: &str = "<s>";
pub const EOS: &str = "</s>";
pub const UNK: &str = "<unk>";

#[derive(Debug, Error)]
pub enum LmError {
    #[error("cannot build an n-gram model from an empty corpus")]
    EmptyCorpus,
    #[error("model order must be at least 1")]
    InvalidOrder,
    #[error("malformed ARPA file at line {line}: {msg}")]
    MalformedArpa { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub(crate) type WordId = u32;

/// String interner shared by counts and models.
#[derive(Debug, Clone, Default)]
pub(crate) struct Vocab {
    words: Vec<String>,
    ids: HashMap<String, WordId>,
}

impl Vocab {
    pub(crate) fn with_boundaries() -> Self {
        let mut v = Vocab::default();
        v.intern(BOS);
        v.intern(EOS);
        v
    }

    pub(crate) fn intern(&mut self, word: &str) -> WordId {
        if let Some(&id) = self.ids.get(word) {
            return id;
        }
        let id = self.words.len() as WordId;
        self.words.push(word.to_string());
        self.ids.insert(word.to_string(), id);
        id
    }

    pub(crate) fn id(&self, word: &str) -> Option<WordId> {
        self.ids.get(word).copied()
    }

    pub(crate) fn word(&self, id: WordId) -> &str {
        &self.words[id as usize]
    }
}
