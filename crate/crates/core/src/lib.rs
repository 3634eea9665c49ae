//! Sentence generation by evolving linear sequences of corpus templates.
//!
//! Chunks of a pre-annotated corpus become templates, rare words inside them
//! are abstracted to POS factors, and a genetic algorithm juxtaposes
//! templates. Two n-gram models drive the search: a token model over factored
//! text decides whether two partial sentences may be joined, and a model over
//! chunk-tag signatures scores how sentence-like the result is.
//!
//! The numeric parts are generic over [`LogFloat`] (`f32` or `f64`); the
//! aliases below fix them to `f64`.

pub mod corpus;
pub mod factoring;
pub mod ga;
pub mod lm;
pub mod scalar;

pub use corpus::{
    extract_templates, parse_conll, parse_conll_str, token_counts, AnnotatedSentence,
    AnnotatedToken, ChunkLabel, CorpusError, CountTable, Template, TemplateId, TemplateInventory,
    TemplateItem,
};
pub use factoring::{
    factor_inventory, factor_token, factored_token_stream, FactorMode, FactorPolicy,
};
pub use ga::{crossover, fitness, junction_probability, mutate, Chromosome, GaConfig, GaError};
pub use lm::{
    count_ngrams, estimate_discounts, read_arpa, train_kn, write_arpa, LmError, NGramCounts,
};
pub use scalar::LogFloat;

pub type NGramModel = lm::LanguageModel<f64>;
pub type NGramModelF32 = lm::LanguageModel<f32>;
pub type Discounts = lm::Discounts<f64>;
pub type Engine<'a> = ga::Engine<'a, f64>;
pub type GaState = ga::GaState<f64>;
pub type GaResult = ga::GaResult<f64>;
pub type Individual = ga::Individual<f64>;
pub type GenerationStats = ga::GenerationStats<f64>;

/// Count, estimate discounts and train an interpolated modified Kneser-Ney
/// model in one step.
pub fn train_model<F: LogFloat, S: AsRef<str>>(
    sequences: &[Vec<S>],
    order: usize,
) -> Result<lm::LanguageModel<F>, LmError> {
    let counts = count_ngrams(sequences, order)?;
    let discounts = estimate_discounts::<F>(&counts);
    Ok(train_kn(&counts, &discounts))
}
