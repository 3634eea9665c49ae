use std::collections::HashMap;

use super::{LmError, Vocab, WordId, BOS, EOS};

pub(crate) type NGramKey = Box<[WordId]>;

/// Raw and Kneser-Ney adjusted n-gram counts for orders `1..=order`.
///
/// Each sequence is padded with `order - 1` copies of `<s>` and a trailing
/// `</s>`. Only k-grams ending at a predicted position (a real token or `</s>`)
/// are counted, so `<s>` is context and never an event.
///
/// Adjusted counts are what the smoothing uses: raw counts at the highest
/// order and for k-grams starting with `<s>`, continuation counts (number of
/// distinct left extensions) otherwise.
#[derive(Debug, Clone)]
pub struct NGramCounts {
    order: usize,
    pub(crate) vocab: Vocab,
    raw: Vec<HashMap<NGramKey, u64>>,
    pub(crate) adjusted: Vec<HashMap<NGramKey, u64>>,
    count_of_counts: Vec<[u64; 4]>,
}

pub fn count_ngrams<S: AsRef<str>>(
    sequences: &[Vec<S>],
    order: usize,
) -> Result<NGramCounts, LmError> {
    if order == 0 {
        return Err(LmError::InvalidOrder);
    }
    if sequences.is_empty() {
        return Err(LmError::EmptyCorpus);
    }
    let mut vocab = Vocab::with_boundaries();
    let bos = vocab.id(BOS).unwrap();
    let eos = vocab.id(EOS).unwrap();
    let mut raw: Vec<HashMap<NGramKey, u64>> = vec![HashMap::new(); order];

    let mut padded: Vec<WordId> = Vec::new();
    for seq in sequences {
        padded.clear();
        padded.extend(std::iter::repeat_n(bos, order - 1));
        padded.extend(seq.iter().map(|w| vocab.intern(w.as_ref())));
        padded.push(eos);
        for end in order - 1..padded.len() {
            for k in 1..=order {
                let gram = &padded[end + 1 - k..=end];
                *raw[k - 1].entry(gram.into()).or_insert(0) += 1;
            }
        }
    }

    let mut adjusted = raw.clone();
    for k in 1..order {
        let mut cont: HashMap<NGramKey, u64> = HashMap::new();
        for gram in raw[k].keys() {
            let suffix = &gram[1..];
            if suffix[0] != bos {
                *cont.entry(suffix.into()).or_insert(0) += 1;
            }
        }
        for (gram, count) in adjusted[k - 1].iter_mut() {
            if gram[0] != bos {
                *count = cont.get(gram).copied().unwrap_or(0);
            }
        }
    }

    let count_of_counts = adjusted
        .iter()
        .map(|level| {
            let mut n = [0u64; 4];
            for &c in level.values() {
                if (1..=4).contains(&c) {
                    n[c as usize - 1] += 1;
                }
            }
            n
        })
        .collect();

    Ok(NGramCounts {
        order,
        vocab,
        raw,
        adjusted,
        count_of_counts,
    })
}

impl NGramCounts {
    pub fn order(&self) -> usize {
        self.order
    }

    fn key(&self, gram: &[&str]) -> Option<Vec<WordId>> {
        gram.iter().map(|w| self.vocab.id(w)).collect()
    }

    /// Raw occurrence count of an n-gram (zero if unseen).
    pub fn count(&self, gram: &[&str]) -> u64 {
        if gram.is_empty() || gram.len() > self.order {
            return 0;
        }
        self.key(gram)
            .and_then(|k| self.raw[gram.len() - 1].get(k.as_slice()).copied())
            .unwrap_or(0)
    }

    /// Count used by the smoothing at this n-gram's level.
    pub fn adjusted_count(&self, gram: &[&str]) -> u64 {
        if gram.is_empty() || gram.len() > self.order {
            return 0;
        }
        self.key(gram)
            .and_then(|k| self.adjusted[gram.len() - 1].get(k.as_slice()).copied())
            .unwrap_or(0)
    }

    /// Number of distinct n-grams of length `k` with adjusted count 1, 2, 3, 4.
    pub fn count_of_counts(&self, k: usize) -> [u64; 4] {
        self.count_of_counts[k - 1]
    }

    /// Distinct n-grams of length `k` with their raw counts.
    pub fn ngrams(&self, k: usize) -> impl Iterator<Item = (Vec<&str>, u64)> + '_ {
        self.raw[k - 1]
            .iter()
            .map(move |(gram, &c)| (gram.iter().map(|&id| self.vocab.word(id)).collect(), c))
    }

    pub fn num_ngrams(&self, k: usize) -> usize {
        self.raw[k - 1].len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seqs(lines: &[&str]) -> Vec<Vec<String>> {
        lines
            .iter()
            .map(|l| l.split_whitespace().map(String::from).collect())
            .collect()
    }

    #[test]
    fn bigram_padding() {
        let c = count_ngrams(&seqs(&["a b"]), 2).unwrap();
        assert_eq!(c.num_ngrams(2), 3);
        assert_eq!(c.count(&["<s>", "a"]), 1);
        assert_eq!(c.count(&["a", "b"]), 1);
        assert_eq!(c.count(&["b", "</s>"]), 1);
    }

    #[test]
    fn unigram_order_has_no_bos() {
        let c = count_ngrams(&seqs(&["a"]), 1).unwrap();
        assert_eq!(c.num_ngrams(1), 2);
        assert_eq!(c.count(&["a"]), 1);
        assert_eq!(c.count(&["</s>"]), 1);
        assert_eq!(c.count(&["<s>"]), 0);
    }

    #[test]
    fn trigram_uses_double_bos() {
        let c = count_ngrams(&seqs(&["a b"]), 3).unwrap();
        assert_eq!(c.count(&["<s>", "<s>", "a"]), 1);
        assert_eq!(c.count(&["<s>", "<s>"]), 0);
        assert_eq!(c.count(&["<s>", "a", "b"]), 1);
        assert_eq!(c.count(&["a", "b", "</s>"]), 1);
    }

    #[test]
    fn continuation_counts() {
        let c = count_ngrams(&seqs(&["x a", "y a", "y a"]), 2).unwrap();
        assert_eq!(c.count(&["a"]), 3);
        // left extensions of `a`: x, y
        assert_eq!(c.adjusted_count(&["a"]), 2);
        // `</s>` only follows `a`
        assert_eq!(c.adjusted_count(&["</s>"]), 1);
        // highest order keeps raw counts
        assert_eq!(c.adjusted_count(&["y", "a"]), 2);
    }

    #[test]
    fn bos_initial_grams_keep_raw_counts() {
        let c = count_ngrams(&seqs(&["a", "a", "a b"]), 3).unwrap();
        assert_eq!(c.adjusted_count(&["<s>", "a"]), 3);
        assert_eq!(c.adjusted_count(&["a", "b"]), 1);
        assert_eq!(c.adjusted_count(&["a", "</s>"]), 1);
    }

    #[test]
    fn count_of_counts_match_maps() {
        let c = count_ngrams(&seqs(&["a a a", "a b"]), 2).unwrap();
        let mut n = [0u64; 4];
        for (gram, _) in c.ngrams(2) {
            let a = c.adjusted_count(&gram);
            if (1..=4).contains(&a) {
                n[a as usize - 1] += 1;
            }
        }
        assert_eq!(c.count_of_counts(2), n);
    }

    #[test]
    fn empty_corpus_and_zero_order() {
        let none: Vec<Vec<String>> = Vec::new();
        assert!(matches!(count_ngrams(&none, 3), Err(LmError::EmptyCorpus)));
        assert!(matches!(
            count_ngrams(&seqs(&["a"]), 0),
            Err(LmError::InvalidOrder)
        ));
    }
}
