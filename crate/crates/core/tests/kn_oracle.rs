use gatemplate::lm::{chen_goodman, LanguageModel};
use gatemplate::{
    count_ngrams, estimate_discounts, extract_templates, parse_conll_str, read_arpa, train_kn,
    write_arpa, NGramModel,
};
use gatemplate_testkit::brute;
use gatemplate_testkit::kn::NaiveKn;
use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fixture_tokens() -> Vec<Vec<String>> {
    let text = gatemplate_testkit::read_data("fixture.conll");
    brute::rows(&text)
        .into_iter()
        .map(|s| s.into_iter().map(|(w, _, _)| w).collect())
        .collect()
}

fn fixture_tags() -> Vec<Vec<String>> {
    let text = gatemplate_testkit::read_data("fixture.conll");
    let sentences = parse_conll_str(&text).unwrap();
    extract_templates(&sentences).signature_sequences()
}

fn strs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

#[test]
fn counts_match_brute_force() {
    let seqs = fixture_tokens();
    let counts = count_ngrams(&seqs, 3).unwrap();
    let oracle = brute::ngram_counts(&seqs, 3);
    let mut total = 0;
    for k in 1..=3 {
        for (gram, c) in counts.ngrams(k) {
            let key: Vec<String> = gram.iter().map(|s| s.to_string()).collect();
            assert_eq!(oracle.get(&key), Some(&c), "{gram:?}");
            total += 1;
        }
    }
    assert_eq!(total, oracle.len());
}

#[test]
fn fixture_discounts_by_hand() {
    let seqs = fixture_tokens();
    let counts = count_ngrams(&seqs, 3).unwrap();
    let naive = NaiveKn::train(&seqs, 3);

    // count-of-counts read off the oracle's adjusted counts, frozen
    let frozen = [[93, 37, 13, 3], [351, 23, 7, 5], [440, 16, 2, 3]];
    for k in 1..=3 {
        let mut n = [0u64; 4];
        for (gram, _) in brute::ngram_counts(&seqs, 3)
            .iter()
            .filter(|(g, _)| g.len() == k)
        {
            let a = naive.adjusted(gram);
            if (1..=4).contains(&a) {
                n[a as usize - 1] += 1;
            }
        }
        assert_eq!(n, frozen[k - 1], "oracle count-of-counts, order {k}");
        assert_eq!(counts.count_of_counts(k), n, "order {k}");
    }

    // trigram level: n = [440, 16, 2, 3]
    // Y = 440/472, D1 = 1 - 2Y*16/440 = 440/472
    // D2 = 2 - 3Y*2/16 = 2 - 2640/7552
    // D3+ = 3 - 4Y*3/2 = 3 - 5280/944 < 0, clamped to 0
    let exact = chen_goodman::<Ratio<i128>>(frozen[2]).unwrap();
    assert_eq!(exact[0], Ratio::new(440, 472));
    assert_eq!(exact[1], Ratio::new(2, 1) - Ratio::new(2640, 7552));
    assert_eq!(exact[2], Ratio::new(3, 1) - Ratio::new(5280, 944));

    let d = estimate_discounts::<f64>(&counts);
    for k in 1..=3 {
        for j in 0..3 {
            assert!((d.at(k)[j] - naive.discounts[k - 1][j]).abs() < 1e-12);
        }
    }
    let r = |x: Ratio<i128>| *x.numer() as f64 / *x.denom() as f64;
    for (got, want) in d.at(3).iter().zip(&exact).take(2) {
        assert!((got - r(*want)).abs() < 1e-12);
    }
    assert_eq!(d.at(3)[2], 0.0);
}

fn check_against_oracle(seqs: &[Vec<String>], order: usize, seed: u64) {
    let counts = count_ngrams(seqs, order).unwrap();
    let model: NGramModel = train_kn(&counts, &estimate_discounts(&counts));
    let naive = NaiveKn::train(seqs, order);

    // every stored probability
    for k in 1..=order {
        for (gram, e) in model.entries(k) {
            if gram.last() == Some(&"<s>") {
                continue;
            }
            let (ctx, w) = gram.split_at(k - 1);
            let expect = naive.logprob(ctx, w[0]);
            assert!(
                (e.logprob - expect).abs() < 1e-9,
                "{gram:?}: {} vs {expect}",
                e.logprob
            );
            if let Some(b) = e.backoff {
                let ctx: Vec<String> = gram.iter().map(|s| s.to_string()).collect();
                let (_, gamma) = naive.context_stats(&ctx).unwrap();
                // a context whose mass is all count-3+ has gamma 0 when D3+ clamps to 0
                let expect = if gamma > 0.0 {
                    gamma.log10().max(-99.0)
                } else {
                    -99.0
                };
                assert!((b - expect).abs() < 1e-9, "{gram:?}: {b} vs {expect}");
            }
        }
    }

    // random queries, including unseen contexts and an OOV word
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut words: Vec<&str> = naive.vocab.iter().map(String::as_str).collect();
    words.push("<s>");
    words.push("never-seen");
    for _ in 0..1000 {
        let len = rng.gen_range(0..order);
        let ctx: Vec<&str> = (0..len).map(|_| *words.choose(&mut rng).unwrap()).collect();
        let w = *words[..words.len() - 1].choose(&mut rng).unwrap();
        let w = if rng.gen_bool(0.05) { "never-seen" } else { w };
        if w == "<s>" {
            continue;
        }
        let got = model.logprob(&ctx, w);
        let expect = naive.logprob(&ctx, w);
        assert!(
            (got - expect).abs() < 1e-9,
            "{ctx:?} -> {w}: {got} vs {expect}"
        );
    }

    // whole sentences
    for s in seqs.iter().take(20) {
        let s = strs(s);
        for b in [false, true] {
            let got = model.sequence_logprob(&s, b);
            let expect = naive.sequence_logprob(&s, b);
            assert!((got - expect).abs() < 1e-9);
        }
    }
}

#[test]
fn token_trigram_matches_naive_reference() {
    check_against_oracle(&fixture_tokens(), 3, 1);
}

#[test]
fn signature_fivegram_matches_naive_reference() {
    check_against_oracle(&fixture_tags(), 5, 2);
}

#[test]
fn small_orders_match_naive_reference() {
    let seqs = fixture_tokens();
    check_against_oracle(&seqs, 1, 3);
    check_against_oracle(&seqs, 2, 4);
}

fn mass(model: &NGramModel, ctx: &[&str]) -> f64 {
    model
        .vocab()
        .map(|v| 10f64.powf(model.logprob(ctx, v)))
        .sum()
}

#[test]
fn normalization_in_observed_and_random_contexts() {
    for (seqs, order) in [(fixture_tokens(), 3), (fixture_tags(), 5)] {
        let model: NGramModel = gatemplate::train_model(&seqs, order).unwrap();
        let naive = NaiveKn::train(&seqs, order);
        for ctx in naive.observed_contexts() {
            let m = mass(&model, &strs(&ctx));
            assert!((m - 1.0).abs() < 1e-6, "{ctx:?}: {m}");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let words: Vec<&str> = model.vocab().collect();
        for _ in 0..100 {
            let len = rng.gen_range(0..order);
            let ctx: Vec<&str> = (0..len).map(|_| *words.choose(&mut rng).unwrap()).collect();
            assert!((mass(&model, &ctx) - 1.0).abs() < 1e-6);
        }
    }
}

#[test]
fn seen_beats_unseen_with_equal_lower_order() {
    // `b` and `c` have the same continuation statistics; only `b` follows `x`
    let seqs: Vec<Vec<String>> = ["x b", "y c", "z b", "w c"]
        .iter()
        .map(|l| l.split_whitespace().map(String::from).collect())
        .collect();
    let model: NGramModel = gatemplate::train_model(&seqs, 2).unwrap();
    assert_eq!(
        model.logprob::<&str>(&[], "b"),
        model.logprob::<&str>(&[], "c")
    );
    assert!(model.logprob(&["x"], "b") > model.logprob(&["x"], "c"));
}

#[test]
fn arpa_output_is_deterministic() {
    let seqs = fixture_tokens();
    let render = || {
        let m: NGramModel = gatemplate::train_model(&seqs, 3).unwrap();
        let mut buf = Vec::new();
        write_arpa(&m, &mut buf).unwrap();
        buf
    };
    assert_eq!(render(), render());
}

#[test]
fn arpa_round_trip_preserves_queries() {
    let seqs = fixture_tags();
    let m: NGramModel = gatemplate::train_model(&seqs, 5).unwrap();
    let mut buf = Vec::new();
    write_arpa(&m, &mut buf).unwrap();
    let back: LanguageModel<f64> = read_arpa(buf.as_slice()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let words: Vec<&str> = m.vocab().collect();
    for _ in 0..500 {
        let len = rng.gen_range(0..5);
        let ctx: Vec<&str> = (0..len).map(|_| *words.choose(&mut rng).unwrap()).collect();
        let w = *words.choose(&mut rng).unwrap();
        // each query sums at most `order` rounded terms
        assert!((m.logprob(&ctx, w) - back.logprob(&ctx, w)).abs() < 5.0 * 5e-5);
    }
}
