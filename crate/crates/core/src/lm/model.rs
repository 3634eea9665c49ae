use std::collections::HashMap;

use super::counts::NGramKey;
use super::{Discounts, NGramCounts, Vocab, WordId, BOS, EOS};
use crate::scalar::LogFloat;

/// Stored log10 probability of an n-gram and, when the n-gram is also a
/// context of the next order, its log10 backoff weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Entry<F> {
    pub logprob: F,
    pub backoff: Option<F>,
}

/// An n-gram model in backoff (ARPA) form.
///
/// Trained models store fully interpolated probabilities for every seen
/// n-gram and the interpolation weight of every seen context as its backoff,
/// so the usual backoff query reproduces the interpolated distribution.
#[derive(Debug, Clone)]
pub struct LanguageModel<F> {
    order: usize,
    vocab: Vocab,
    levels: Vec<HashMap<NGramKey, Entry<F>>>,
    unk_logprob: F,
}

impl<F: LogFloat> LanguageModel<F> {
    pub(crate) fn from_parts(
        order: usize,
        vocab: Vocab,
        levels: Vec<HashMap<NGramKey, Entry<F>>>,
        unk_logprob: F,
    ) -> Self {
        LanguageModel {
            order,
            vocab,
            levels,
            unk_logprob,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// log10 probability assigned to tokens outside the vocabulary (before
    /// context backoff weights).
    pub fn unk_logprob(&self) -> F {
        self.unk_logprob
    }

    /// Tokens the model predicts: every unigram except `<s>`.
    pub fn vocab(&self) -> impl Iterator<Item = &str> + '_ {
        let bos = self.vocab.id(BOS);
        self.levels[0]
            .keys()
            .filter(move |k| Some(k[0]) != bos)
            .map(|k| self.vocab.word(k[0]))
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab().count()
    }

    pub(crate) fn vocab_table(&self) -> &Vocab {
        &self.vocab
    }

    pub(crate) fn level(&self, k: usize) -> &HashMap<NGramKey, Entry<F>> {
        &self.levels[k - 1]
    }

    pub fn num_entries(&self, k: usize) -> usize {
        self.levels[k - 1].len()
    }

    /// Stored entry for an n-gram, if any.
    pub fn entry(&self, gram: &[&str]) -> Option<Entry<F>> {
        if gram.is_empty() || gram.len() > self.order {
            return None;
        }
        let key: Option<Vec<WordId>> = gram.iter().map(|w| self.vocab.id(w)).collect();
        self.levels[gram.len() - 1].get(key?.as_slice()).copied()
    }

    /// All stored n-grams of length `k`.
    pub fn entries(&self, k: usize) -> impl Iterator<Item = (Vec<&str>, Entry<F>)> + '_ {
        self.levels[k - 1]
            .iter()
            .map(move |(g, e)| (g.iter().map(|&id| self.vocab.word(id)).collect(), *e))
    }

    /// log10 P(token | context). The context is truncated to the model order;
    /// out-of-vocabulary context words cut the usable history.
    pub fn logprob<S: AsRef<str>>(&self, context: &[S], token: &str) -> F {
        let keep = context.len().min(self.order - 1);
        let mut buf: Vec<Option<WordId>> = context[context.len() - keep..]
            .iter()
            .map(|w| self.vocab.id(w.as_ref()))
            .collect();
        buf.push(self.vocab.id(token));
        self.query(&buf)
    }

    /// Sum of per-token log10 probabilities. With boundaries the history
    /// starts as `<s>` padding and the final `</s>` transition is scored.
    pub fn sequence_logprob<S: AsRef<str>>(&self, tokens: &[S], with_boundaries: bool) -> F {
        let mut ids: Vec<Option<WordId>> = Vec::with_capacity(tokens.len() + self.order);
        let mut start = 0;
        if with_boundaries {
            let bos = self.vocab.id(BOS);
            ids.extend(std::iter::repeat_n(bos, self.order - 1));
            start = ids.len();
        }
        ids.extend(tokens.iter().map(|t| self.vocab.id(t.as_ref())));
        if with_boundaries {
            ids.push(self.vocab.id(EOS));
        }
        let mut total = F::zero();
        for end in start..ids.len() {
            let from = (end + 1).saturating_sub(self.order);
            total = total + self.query(&ids[from..=end]);
        }
        total
    }

    /// `gram` holds the context followed by the predicted token.
    fn query(&self, gram: &[Option<WordId>]) -> F {
        let n = gram.len();
        let word = gram[n - 1];
        // history usable up to the last unknown context word
        let first_known = gram[..n - 1]
            .iter()
            .rposition(Option::is_none)
            .map_or(0, |p| p + 1);
        let ids: Vec<WordId> = gram[first_known..n - 1]
            .iter()
            .map(|w| w.unwrap())
            .collect();
        let ctx_len = ids.len();

        let mut backoff = F::zero();
        let mut key: Vec<WordId> = Vec::with_capacity(ctx_len + 1);
        for len in (0..=ctx_len).rev() {
            let ctx = &ids[ctx_len - len..];
            if let Some(w) = word {
                key.clear();
                key.extend_from_slice(ctx);
                key.push(w);
                if let Some(e) = self.levels[len].get(key.as_slice()) {
                    return (backoff + e.logprob).max(F::log_floor());
                }
            }
            if len > 0 {
                if let Some(b) = self.levels[len - 1].get(ctx).and_then(|e| e.backoff) {
                    backoff = backoff + b;
                }
            }
        }
        (backoff + self.unk_logprob).max(F::log_floor())
    }
}

fn log10_floored<F: LogFloat>(p: F) -> F {
    if p > F::zero() {
        p.log10().max(F::log_floor())
    } else {
        F::log_floor()
    }
}

/// Interpolated modified Kneser-Ney estimation.
///
/// For a context `h` at level k with adjusted counts `a(h w)`:
///
/// ```text
/// P_k(w | h) = max(a(h w) - D(a(h w)), 0) / S(h) + gamma(h) * P_{k-1}(w | h')
/// gamma(h)   = sum_w D(a(h w)) / S(h)
/// ```
///
/// where `S(h)` sums the adjusted counts and `h'` drops the oldest word. The
/// unigram level interpolates with the uniform distribution over the
/// predicted vocabulary.
pub fn train_kn<F: LogFloat>(counts: &NGramCounts, discounts: &Discounts<F>) -> LanguageModel<F> {
    let order = counts.order();
    assert_eq!(
        discounts.order(),
        order,
        "discounts do not match count order"
    );
    let bos = counts.vocab.id(BOS).unwrap();
    let mut model = LanguageModel {
        order,
        vocab: counts.vocab.clone(),
        levels: vec![HashMap::new(); order],
        unk_logprob: F::log_floor(),
    };

    // unigrams
    let unigrams = &counts.adjusted[0];
    let total: u64 = unigrams.values().sum();
    let total_f = F::from_count(total);
    let mass: F = unigrams
        .values()
        .fold(F::zero(), |acc, &a| acc + discounts.for_count(1, a));
    let gamma = mass / total_f;
    let uniform = gamma / F::from_count(unigrams.len() as u64);
    for (gram, &a) in unigrams {
        let disc = (F::from_count(a) - discounts.for_count(1, a)).max(F::zero());
        let p = disc / total_f + uniform;
        model.levels[0].insert(
            gram.clone(),
            Entry {
                logprob: log10_floored(p),
                backoff: None,
            },
        );
    }
    model.unk_logprob = log10_floored(uniform);

    for k in 2..=order {
        // context -> (sum of adjusted counts, discounted mass)
        let mut contexts: HashMap<&[WordId], (u64, F)> = HashMap::new();
        for (gram, &a) in &counts.adjusted[k - 1] {
            let slot = contexts.entry(&gram[..k - 1]).or_insert((0, F::zero()));
            slot.0 += a;
            slot.1 = slot.1 + discounts.for_count(k, a);
        }

        let mut level = HashMap::with_capacity(counts.adjusted[k - 1].len());
        for (gram, &a) in &counts.adjusted[k - 1] {
            let (sum, mass) = contexts[&gram[..k - 1]];
            let sum = F::from_count(sum);
            let lower = F::ten().powf(model.query(&to_query(&gram[1..])));
            let disc = (F::from_count(a) - discounts.for_count(k, a)).max(F::zero());
            let p = disc / sum + mass / sum * lower;
            level.insert(
                gram.clone(),
                Entry {
                    logprob: log10_floored(p),
                    backoff: None,
                },
            );
        }
        model.levels[k - 1] = level;

        for (ctx, (sum, mass)) in contexts {
            let bow = log10_floored(mass / F::from_count(sum));
            let slot = model.levels[k - 2].entry(ctx.into()).or_insert_with(|| {
                debug_assert!(ctx.iter().all(|&w| w == bos));
                Entry {
                    logprob: F::log_floor(),
                    backoff: None,
                }
            });
            slot.backoff = Some(bow);
        }
    }
    model
}

fn to_query(ids: &[WordId]) -> Vec<Option<WordId>> {
    ids.iter().map(|&w| Some(w)).collect()
}
