use std::collections::HashSet;

use gatemplate::ga::{self, display};
use gatemplate::{
    crossover, extract_templates, factor_inventory, factored_token_stream, fitness,
    junction_probability, mutate, parse_conll_str, read_arpa, token_counts, train_model,
    Chromosome, Engine, FactorPolicy, GaConfig, GaState, Individual, NGramModel, TemplateId,
    TemplateInventory, TemplateItem,
};
use gatemplate_testkit::kn::NaiveKn;
use gatemplate_testkit::read_data;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

struct Setup {
    inventory: TemplateInventory,
    tokens: NGramModel,
    signatures: NGramModel,
    token_seqs: Vec<Vec<String>>,
    sig_seqs: Vec<Vec<String>>,
}

fn fixture() -> Setup {
    let sentences = parse_conll_str(&read_data("fixture.conll")).unwrap();
    let table = token_counts(&sentences);
    let policy = FactorPolicy::absolute(2);
    let inventory = factor_inventory(&extract_templates(&sentences), &table, &policy);
    let token_seqs = factored_token_stream(&sentences, &table, &policy);
    let sig_seqs = inventory.signature_sequences();
    Setup {
        tokens: train_model(&token_seqs, 3).unwrap(),
        signatures: train_model(&sig_seqs, 5).unwrap(),
        inventory,
        token_seqs,
        sig_seqs,
    }
}

/// A model that gives every token the same log10 probability.
fn flat_model(words: &[&str], logprob: f64) -> NGramModel {
    let mut arpa = format!("\\data\\\nngram 1={}\n\n\\1-grams:\n", words.len() + 3);
    for w in words.iter().chain(&["</s>", "<s>", "<unk>"]) {
        arpa.push_str(&format!("{logprob}\t{w}\t0\n"));
    }
    arpa.push_str("\n\\end\\\n");
    read_arpa(arpa.as_bytes()).unwrap()
}

fn phrase_inventory() -> (TemplateInventory, [TemplateId; 3]) {
    let mut inv = TemplateInventory::new();
    let pp = inv.add(
        vec![
            TemplateItem::lexical("in", "IN"),
            TemplateItem::lexical("the", "DT"),
            TemplateItem::factor("NN"),
        ],
        "PP",
        1,
    );
    let vp = inv.add(vec![TemplateItem::factor("VBZ")], "VP", 1);
    let np = inv.add(
        vec![TemplateItem::lexical("a", "DT"), TemplateItem::factor("NN")],
        "NP",
        1,
    );
    (inv, [pp, vp, np])
}

#[test]
fn crossover_juxtaposes_phrases() {
    let (inv, [pp, vp, np]) = phrase_inventory();
    let left = Chromosome::single(pp, &inv);
    let right = Chromosome::from_templates(vec![vp, np], &inv).unwrap();
    let child = crossover(&left, &right);
    assert_eq!(child.surface_text(), "in the __NN__ __VBZ__ a __NN__");
    assert_eq!(child.display_text(), "in the NN VBZ a NN");
    assert_eq!(child.signature_text(), "PP VP NP");
    assert_eq!(child.templates(), [pp, vp, np]);
    assert!(child.is_coherent(&inv));
    assert_eq!(display("__JJ__ cat"), "JJ cat");
}

#[test]
fn crossover_surfaces_associate() {
    let (inv, [pp, vp, np]) = phrase_inventory();
    let [a, b, c] = [pp, vp, np].map(|id| Chromosome::single(id, &inv));
    let l = crossover(&crossover(&a, &b), &c);
    let r = crossover(&a, &crossover(&b, &c));
    assert_eq!(l, r);
}

#[test]
fn junction_uses_last_two_tokens() {
    let (inv, [pp, vp, np]) = phrase_inventory();
    let s = fixture();
    let naive = NaiveKn::train(&s.token_seqs, 3);
    let left = Chromosome::single(pp, &inv);
    let right = Chromosome::from_templates(vec![vp, np], &inv).unwrap();
    let p = junction_probability(&s.tokens, &left, &right);
    assert!((p - naive.prob(&["the", "__NN__"], "__VBZ__")).abs() < 1e-9);

    // a one-token left side conditions on that token alone
    let short = Chromosome::single(vp, &inv);
    let p = junction_probability(&s.tokens, &short, &left);
    assert!((p - naive.prob(&["__VBZ__"], "in")).abs() < 1e-9);
}

fn synthetic_inventory(n: usize) -> TemplateInventory {
    let mut inv = TemplateInventory::new();
    for i in 0..n {
        inv.add(vec![TemplateItem::lexical(&format!("w{i}"), "NN")], "NP", 1);
    }
    inv
}

#[test]
fn initial_population_is_uniform_over_templates() {
    let inv = synthetic_inventory(1000);
    let lm = flat_model(&["NP"], -1.0);
    let cfg = GaConfig {
        population_size: 10_000,
        ..GaConfig::default()
    };
    let engine = Engine::new(&cfg, &inv, &lm, &lm).unwrap();
    let state = engine.init_population(&mut ChaCha8Rng::seed_from_u64(17));
    assert_eq!(state.population.len(), 10_000);
    let mut counts = vec![0u64; 1000];
    for ind in &state.population {
        assert_eq!(ind.chromosome.len(), 1);
        counts[ind.chromosome.templates()[0].0] += 1;
    }
    let expected = 10.0;
    let stat: f64 = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    let critical = ChiSquared::new(999.0).unwrap().inverse_cdf(1.0 - 0.001);
    assert!(stat < critical, "chi2 {stat} >= {critical}");
}

#[test]
fn mutation_extremes_and_rate() {
    let (inv, [pp, vp, np]) = phrase_inventory();
    let c = Chromosome::from_templates(vec![pp, vp, np], &inv).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut cfg = GaConfig {
        mutation_p: 0.0,
        ..GaConfig::default()
    };
    for _ in 0..1000 {
        assert_eq!(mutate(c.clone(), &inv, &cfg, &mut rng), c);
    }
    cfg.mutation_p = 1.0;
    for _ in 0..1000 {
        let m = mutate(c.clone(), &inv, &cfg, &mut rng);
        assert_eq!(m.len(), 1);
        assert!(m.is_coherent(&inv));
    }
    cfg.mutation_p = 0.05;
    let trials = 100_000;
    let mutated = (0..trials)
        .filter(|_| mutate(c.clone(), &inv, &cfg, &mut rng).len() == 1)
        .count();
    let rate = mutated as f64 / trials as f64;
    assert!((rate - 0.05).abs() <= 0.005, "{rate}");
}

fn by_hand(sig_lm: &NGramModel, sig: &[&str], target: usize) -> f64 {
    let len = sig.len() as f64;
    let nlp = -sig_lm.sequence_logprob(sig, false);
    let nlt = -sig_lm.sequence_logprob(sig, true);
    let gap = (target as f64 - len).abs().max(1.0);
    10f64.powf(-f64::max(nlp / len, nlt / ((len + 2.0) * gap)))
}

#[test]
fn fitness_matches_formula_on_constructed_chromosomes() {
    let s = fixture();
    let naive = NaiveKn::train(&s.sig_seqs, 5);
    let cfg = GaConfig {
        target_length: 3,
        ..GaConfig::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let n = s.inventory.len();
    for len in 1..=20 {
        let ids: Vec<TemplateId> = (0..len).map(|_| TemplateId(rng.gen_range(0..n))).collect();
        let c = Chromosome::from_templates(ids, &s.inventory).unwrap();
        let sig: Vec<&str> = c.signature().iter().map(|t| &**t).collect();
        let f = fitness(&c, &s.signatures, &cfg);
        assert!(
            (f - by_hand(&s.signatures, &sig, 3)).abs() < 1e-12,
            "len {len}"
        );
        assert!(f > 0.0 && f <= 1.0 && f.is_finite());

        let nlp = -naive.sequence_logprob(&sig, false);
        let nlt = -naive.sequence_logprob(&sig, true);
        let gap = (3.0 - len as f64).abs().max(1.0);
        let oracle = 10f64.powf(-f64::max(
            nlp / len as f64,
            nlt / ((len as f64 + 2.0) * gap),
        ));
        assert!((f - oracle).abs() < 1e-8);
    }
}

#[test]
fn fitness_of_a_certain_signature_is_one() {
    let (inv, [pp, ..]) = phrase_inventory();
    let lm = flat_model(&["PP"], 0.0);
    let c = Chromosome::single(pp, &inv);
    for target in [1, 5] {
        let cfg = GaConfig {
            target_length: target,
            ..GaConfig::default()
        };
        assert_eq!(fitness(&c, &lm, &cfg), 1.0);
    }
}

#[test]
fn fitness_stays_positive_when_probabilities_vanish() {
    let (inv, [pp, ..]) = phrase_inventory();
    let lm = flat_model(&["PP"], -99.0);
    let c = Chromosome::from_templates(vec![pp; 4], &inv).unwrap();
    let f = fitness(&c, &lm, &GaConfig::default());
    assert!(f > 0.0);
}

/// Straight-line tournament with the same RNG consumption order.
fn replay_tournament(
    s: &Setup,
    cfg: &GaConfig,
    pop: &[Individual],
    rng: &mut ChaCha8Rng,
) -> Vec<(String, f64)> {
    let picked = index::sample(rng, pop.len(), cfg.tournament_size).into_vec();
    let mut out: Vec<(String, f64)> = Vec::new();
    for &i in &picked {
        for &j in &picked {
            if i == j {
                continue;
            }
            let left = pop[i].chromosome.surface();
            let ctx: Vec<&str> = left[left.len().saturating_sub(2)..]
                .iter()
                .map(|t| &**t)
                .collect();
            let p = 10f64.powf(s.tokens.logprob(&ctx, &pop[j].chromosome.surface()[0]));
            if rng.gen::<f64>() >= p {
                continue;
            }
            let mut ids = pop[i].chromosome.templates().to_vec();
            ids.extend_from_slice(pop[j].chromosome.templates());
            if rng.gen::<f64>() < cfg.mutation_p {
                ids = vec![TemplateId(rng.gen_range(0..s.inventory.len()))];
            }
            let sig: Vec<&str> = ids.iter().map(|&id| &**s.inventory.tag(id)).collect();
            let surface: Vec<String> = ids
                .iter()
                .map(|&id| s.inventory.get(id).rendered_text())
                .collect();
            out.push((
                surface.join(" "),
                by_hand(&s.signatures, &sig, cfg.target_length),
            ));
        }
    }
    // stable: ties keep production order
    out.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    out.truncate(cfg.nbest);
    out
}

#[test]
fn tournament_matches_replay() {
    let s = fixture();
    let cfg = GaConfig {
        population_size: 60,
        tournament_size: 6,
        nbest: 5,
        mutation_p: 0.2,
        target_length: 4,
        ..GaConfig::default()
    };
    let engine = Engine::new(&cfg, &s.inventory, &s.tokens, &s.signatures).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut state = engine.init_population(&mut rng);
    // give the population some multi-template members
    state = engine.evolve_generation(state, &mut rng);
    let mut produced = 0;
    for round in 0..50 {
        let mut a = ChaCha8Rng::seed_from_u64(round);
        let mut b = a.clone();
        let got = engine.tournament_round(&state, &mut a);
        let want = replay_tournament(&s, &cfg, &state.population, &mut b);
        assert_eq!(got.len(), want.len());
        for (g, (surface, f)) in got.iter().zip(&want) {
            assert_eq!(&g.chromosome.surface_text(), surface);
            assert!((g.fitness - f).abs() < 1e-12);
        }
        assert!(got.windows(2).all(|w| w[0].fitness >= w[1].fitness));
        assert_eq!(a.get_word_pos(), b.get_word_pos());
        produced += got.len();
    }
    assert!(produced > 0);
}

#[test]
fn certain_junctions_fill_the_tournament() {
    let (inv, [pp, vp, np]) = phrase_inventory();
    let lm = flat_model(&["in", "the", "a", "__NN__", "__VBZ__"], 0.0);
    let sig = flat_model(&["PP", "VP", "NP"], -0.5);
    let cfg = GaConfig {
        population_size: 2,
        tournament_size: 2,
        nbest: 2,
        mutation_p: 0.0,
        target_length: 2,
        ..GaConfig::default()
    };
    let engine = Engine::new(&cfg, &inv, &lm, &sig).unwrap();
    let population = [pp, np]
        .map(|id| engine.score(Chromosome::single(id, &inv)))
        .to_vec();
    let state = GaState {
        generation: 0,
        population,
        stats: Vec::new(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let out = engine.tournament_round(&state, &mut rng);
    assert_eq!(out.len(), 2);
    let surfaces: HashSet<String> = out.iter().map(|i| i.chromosome.surface_text()).collect();
    assert!(surfaces.contains("in the __NN__ a __NN__"));
    assert!(surfaces.contains("a __NN__ in the __NN__"));
    let _ = vp;
}

#[test]
fn impossible_junctions_yield_no_offspring_and_the_generation_still_completes() {
    let (inv, [pp, vp, np]) = phrase_inventory();
    let lm = flat_model(&["in", "the", "a", "__NN__", "__VBZ__"], -99.0);
    let sig = flat_model(&["PP", "VP", "NP"], -0.5);
    let cfg = GaConfig {
        population_size: 4,
        tournament_size: 3,
        nbest: 2,
        target_length: 2,
        ..GaConfig::default()
    };
    let engine = Engine::new(&cfg, &inv, &lm, &sig).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let state = engine.init_population(&mut rng);
    assert!(engine.tournament_round(&state, &mut rng).is_empty());
    let before: Vec<_> = state.population.clone();
    let next = engine.evolve_generation(state, &mut rng);
    assert_eq!(next.population.len(), 4);
    assert_eq!(next.generation, 1);
    for ind in &next.population {
        assert!(before.contains(ind));
    }
    let _ = (pp, vp, np);
}

#[test]
fn full_mutation_makes_single_template_offspring() {
    let s = fixture();
    let cfg = GaConfig {
        population_size: 40,
        tournament_size: 5,
        nbest: 5,
        mutation_p: 1.0,
        ..GaConfig::default()
    };
    let engine = Engine::new(&cfg, &s.inventory, &s.tokens, &s.signatures).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut state = engine.init_population(&mut rng);
    for _ in 0..5 {
        state = engine.evolve_generation(state, &mut rng);
        assert!(state.population.iter().all(|i| i.chromosome.len() == 1));
    }
}

#[test]
fn fittest_parent_survives() {
    let s = fixture();
    let cfg = GaConfig {
        population_size: 51,
        tournament_size: 5,
        nbest: 4,
        target_length: 4,
        ..GaConfig::default()
    };
    let engine = Engine::new(&cfg, &s.inventory, &s.tokens, &s.signatures).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut state = engine.init_population(&mut rng);
    for _ in 0..10 {
        let best = state
            .population
            .iter()
            .map(|i| i.fitness)
            .fold(0.0, f64::max);
        // make one member strictly the fittest
        assert!(best < 1.0);
        let k = rng.gen_range(0..state.population.len());
        state.population[k].fitness = 1.0;
        let champion = state.population[k].clone();
        state = engine.evolve_generation(state, &mut rng);
        assert_eq!(state.population.len(), 51);
        assert!(state.population.contains(&champion));
        let best_after = state
            .population
            .iter()
            .map(|i| i.fitness)
            .fold(0.0, f64::max);
        assert_eq!(best_after, 1.0);
        state.population.retain(|i| i != &champion);
        state.population.push(engine.score(champion.chromosome));
    }
}

#[test]
fn run_keeps_every_invariant() {
    let s = fixture();
    let cfg = GaConfig {
        population_size: 200,
        generations: 20,
        seed: 4,
        ..GaConfig::default()
    };
    let engine = Engine::new(&cfg, &s.inventory, &s.tokens, &s.signatures).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut state = engine.init_population(&mut rng);
    for g in 1..=cfg.generations {
        state = engine.evolve_generation(state, &mut rng);
        assert_eq!(state.generation, g);
        assert_eq!(state.population.len(), cfg.population_size);
        for ind in &state.population {
            assert!(ind.chromosome.is_coherent(&s.inventory));
            assert!(ind.fitness > 0.0 && ind.fitness <= 1.0);
        }
    }
    assert_eq!(state.stats.len(), cfg.generations + 1);

    let result = engine.run();
    assert_eq!(result.stats, state.stats);
    assert_eq!(result.population, state.population);
}

#[test]
fn runs_are_reproducible() {
    let s = fixture();
    let cfg = GaConfig {
        population_size: 100,
        generations: 3,
        seed: 99,
        ..GaConfig::default()
    };
    let engine = Engine::new(&cfg, &s.inventory, &s.tokens, &s.signatures).unwrap();
    let a = engine.run();
    let b = engine.run();
    assert_eq!(a.stats_csv(), b.stats_csv());
    assert_eq!(a.population_dump(), b.population_dump());
    assert_eq!(a.stats_csv().lines().count(), 1 + 4);

    let other = GaConfig {
        seed: 100,
        ..cfg.clone()
    };
    let c = Engine::new(&other, &s.inventory, &s.tokens, &s.signatures)
        .unwrap()
        .run();
    assert_ne!(a.population_dump(), c.population_dump());
}

#[test]
fn zero_generations_returns_the_initial_population() {
    let s = fixture();
    let cfg = GaConfig {
        population_size: 30,
        generations: 0,
        ..GaConfig::default()
    };
    let engine = Engine::new(&cfg, &s.inventory, &s.tokens, &s.signatures).unwrap();
    let r = engine.run();
    assert_eq!(r.population.len(), 30);
    assert!(r.population.iter().all(|i| i.chromosome.len() == 1));
    assert_eq!(r.stats.len(), 1);
    assert_eq!(r.stats[0].generation, 0);
    assert_eq!(r.stats[0].std_len, 0.0);
}

#[test]
fn engine_rejects_bad_input() {
    let s = fixture();
    let empty = TemplateInventory::new();
    let cfg = GaConfig::default();
    assert_eq!(
        Engine::new(&cfg, &empty, &s.tokens, &s.signatures).unwrap_err(),
        ga::GaError::EmptyInventory
    );
    let bad = GaConfig {
        tournament_size: 0,
        ..GaConfig::default()
    };
    assert!(Engine::new(&bad, &s.inventory, &s.tokens, &s.signatures).is_err());
}
