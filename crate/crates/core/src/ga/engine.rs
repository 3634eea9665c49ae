use std::cmp::Ordering;
use std::fmt::Write as _;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{crossover, fitness, junction_probability, mutate, Chromosome, GaConfig, GaError};
use crate::corpus::{TemplateId, TemplateInventory};
use crate::lm::LanguageModel;
use crate::scalar::LogFloat;

/// Candidate pairs tried per population member before a generation gives up
/// on reaching its offspring quota.
const PAIR_CAP_PER_MEMBER: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Individual<F> {
    pub chromosome: Chromosome,
    pub fitness: F,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationStats<F> {
    pub generation: usize,
    pub mean_fitness: F,
    pub max_fitness: F,
    pub mean_len: F,
    pub std_len: F,
}

impl<F: LogFloat> GenerationStats<F> {
    fn of(generation: usize, population: &[Individual<F>]) -> Self {
        let n = F::from_count(population.len() as u64);
        let mut sum = F::zero();
        let mut max = F::neg_infinity();
        let mut len_sum = F::zero();
        for ind in population {
            sum = sum + ind.fitness;
            max = max.max(ind.fitness);
            len_sum = len_sum + F::from_count(ind.chromosome.len() as u64);
        }
        let mean_len = len_sum / n;
        let var = population.iter().fold(F::zero(), |acc, ind| {
            let d = F::from_count(ind.chromosome.len() as u64) - mean_len;
            acc + d * d
        }) / n;
        GenerationStats {
            generation,
            mean_fitness: sum / n,
            max_fitness: max,
            mean_len,
            std_len: var.sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaState<F> {
    pub generation: usize,
    pub population: Vec<Individual<F>>,
    pub stats: Vec<GenerationStats<F>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaResult<F> {
    pub population: Vec<Individual<F>>,
    pub stats: Vec<GenerationStats<F>>,
}

pub const STATS_HEADER: &str = "generation,mean_fitness,max_fitness,mean_len,std_len";

impl<F: LogFloat> GaResult<F> {
    /// `generation,mean_fitness,max_fitness,mean_len,std_len`, one row per
    /// generation starting with the initial population.
    pub fn stats_csv(&self) -> String {
        let mut out = String::from(STATS_HEADER);
        out.push('\n');
        for s in &self.stats {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                s.generation, s.mean_fitness, s.max_fitness, s.mean_len, s.std_len
            );
        }
        out
    }

    /// `surface<TAB>signature<TAB>fitness` per chromosome, fittest first.
    pub fn population_dump(&self) -> String {
        let mut sorted: Vec<&Individual<F>> = self.population.iter().collect();
        sorted.sort_by(|a, b| by_fitness_desc(a, b));
        let mut out = String::new();
        for ind in sorted {
            let _ = writeln!(
                out,
                "{}\t{}\t{}",
                ind.chromosome.surface_text(),
                ind.chromosome.signature_text(),
                ind.fitness
            );
        }
        out
    }
}

fn by_fitness_desc<F: LogFloat>(a: &Individual<F>, b: &Individual<F>) -> Ordering {
    b.fitness.partial_cmp(&a.fitness).unwrap_or(Ordering::Equal)
}

/// Bundles what every generation step needs: configuration, template
/// inventory, and the junction (token) and signature language models.
#[derive(Debug, Clone, Copy)]
pub struct Engine<'a, F> {
    pub cfg: &'a GaConfig,
    pub inventory: &'a TemplateInventory,
    pub token_lm: &'a LanguageModel<F>,
    pub signature_lm: &'a LanguageModel<F>,
}

impl<'a, F: LogFloat> Engine<'a, F> {
    pub fn new(
        cfg: &'a GaConfig,
        inventory: &'a TemplateInventory,
        token_lm: &'a LanguageModel<F>,
        signature_lm: &'a LanguageModel<F>,
    ) -> Result<Self, GaError> {
        cfg.validate()?;
        if inventory.is_empty() {
            return Err(GaError::EmptyInventory);
        }
        Ok(Engine {
            cfg,
            inventory,
            token_lm,
            signature_lm,
        })
    }

    pub fn score(&self, chromosome: Chromosome) -> Individual<F> {
        let fitness = fitness(&chromosome, self.signature_lm, self.cfg);
        Individual {
            chromosome,
            fitness,
        }
    }

    /// Every chromosome starts as one uniformly drawn template.
    pub fn init_population<R: Rng + ?Sized>(&self, rng: &mut R) -> GaState<F> {
        let population: Vec<_> = (0..self.cfg.population_size)
            .map(|_| {
                let id = TemplateId(rng.gen_range(0..self.inventory.len()));
                self.score(Chromosome::single(id, self.inventory))
            })
            .collect();
        let stats = vec![GenerationStats::of(0, &population)];
        GaState {
            generation: 0,
            population,
            stats,
        }
    }

    /// One tournament: sample `tournament_size` parents without replacement,
    /// try every ordered pair with junction-probability acceptance, mutate and
    /// score the offspring, and keep the `nbest` fittest.
    pub fn tournament_round<R: Rng + ?Sized>(
        &self,
        state: &GaState<F>,
        rng: &mut R,
    ) -> Vec<Individual<F>> {
        let sample =
            index::sample(rng, state.population.len(), self.cfg.tournament_size).into_vec();
        let mut offspring = Vec::new();
        for &i in &sample {
            for &j in &sample {
                if i == j {
                    continue;
                }
                let p = &state.population[i].chromosome;
                let q = &state.population[j].chromosome;
                let accept = junction_probability(self.token_lm, p, q)
                    .to_f64()
                    .unwrap_or(0.0);
                if rng.gen::<f64>() < accept {
                    let child = mutate(crossover(p, q), self.inventory, self.cfg, rng);
                    offspring.push(self.score(child));
                }
            }
        }
        offspring.sort_by(by_fitness_desc);
        offspring.truncate(self.cfg.nbest);
        offspring
    }

    pub fn evolve_generation<R: Rng + ?Sized>(&self, state: GaState<F>, rng: &mut R) -> GaState<F> {
        let cfg = self.cfg;
        let quota = cfg.offspring_quota();
        let pairs_per_round = cfg.tournament_size * (cfg.tournament_size - 1);
        let cap = PAIR_CAP_PER_MEMBER * cfg.population_size;

        let mut offspring = Vec::new();
        let mut attempted = 0;
        while offspring.len() < quota && attempted < cap && pairs_per_round > 0 {
            offspring.extend(self.tournament_round(&state, rng));
            attempted += pairs_per_round;
        }
        offspring.sort_by(by_fitness_desc);
        offspring.truncate(quota);

        let mut parents = state.population;
        parents.sort_by(by_fitness_desc);
        let keep = cfg.parent_quota();
        let mut spare = parents.split_off(keep);
        let mut next = parents;
        next.extend(offspring);
        if next.len() < cfg.population_size {
            spare.truncate(cfg.population_size - next.len());
            next.extend(spare);
        }

        let generation = state.generation + 1;
        let mut stats = state.stats;
        stats.push(GenerationStats::of(generation, &next));
        GaState {
            generation,
            population: next,
            stats,
        }
    }

    /// Run `cfg.generations` generations from a ChaCha8 stream seeded with
    /// `cfg.seed`.
    pub fn run(&self) -> GaResult<F> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        self.run_with(&mut rng)
    }

    pub fn run_with<R: Rng + ?Sized>(&self, rng: &mut R) -> GaResult<F> {
        let mut state = self.init_population(rng);
        for _ in 0..self.cfg.generations {
            state = self.evolve_generation(state, rng);
        }
        GaResult {
            population: state.population,
            stats: state.stats,
        }
    }
}
