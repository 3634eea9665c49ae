//! Genetic search over template sequences.
//!
//! Parents are joined by juxtaposition, gated by the token LM's probability
//! of the junction; offspring may be reset to a random single template; the
//! chunk-tag signature LM scores grammaticality. Each generation keeps the
//! fittest half of the parents and fills the other half with offspring
//! selected tournament by tournament.

mod chromosome;
mod engine;
mod operators;

use thiserror::Error;

pub use chromosome::{crossover, display, Chromosome};
pub use engine::{Engine, GaResult, GaState, GenerationStats, Individual, STATS_HEADER};
pub use operators::{fitness, junction_probability, mutate};

#[derive(Debug, Error, PartialEq)]
pub enum GaError {
    #[error("template inventory is empty")]
    EmptyInventory,
    #[error("invalid GA configuration: {0}")]
    InvalidConfig(String),
}

/// Evolution hyperparameters. Defaults suit a corpus of about 10k sentences;
/// a 10M-sentence corpus calls for populations near 1,000,000.
#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub population_size: usize,
    pub tournament_size: usize,
    pub nbest: usize,
    pub mutation_p: f64,
    /// Target sentence length, in templates.
    pub target_length: usize,
    pub generations: usize,
    pub seed: u64,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 1000,
            tournament_size: 10,
            nbest: 10,
            mutation_p: 0.05,
            target_length: 10,
            generations: 100,
            seed: 0,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<(), GaError> {
        let bad = |msg: String| Err(GaError::InvalidConfig(msg));
        if self.population_size == 0 {
            return bad("population_size must be positive".into());
        }
        if self.tournament_size == 0 || self.tournament_size > self.population_size {
            return bad(format!(
                "tournament_size must be in 1..={} (population_size)",
                self.population_size
            ));
        }
        let pairs = self.tournament_size * (self.tournament_size - 1);
        if self.nbest == 0 || self.nbest > pairs.max(1) {
            return bad(format!(
                "nbest must be in 1..={} (ordered pairs per tournament)",
                pairs.max(1)
            ));
        }
        if !(0.0..=1.0).contains(&self.mutation_p) {
            return bad("mutation_p must lie in [0, 1]".into());
        }
        if self.target_length == 0 {
            return bad("target_length must be at least 1".into());
        }
        Ok(())
    }

    /// Offspring needed per generation (`ceil(population / 2)`).
    pub fn offspring_quota(&self) -> usize {
        self.population_size.div_ceil(2)
    }

    /// Parents carried into the next generation (`floor(population / 2)`).
    pub fn parent_quota(&self) -> usize {
        self.population_size / 2
    }
}
