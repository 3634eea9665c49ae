//! Naive interpolated modified Kneser-Ney, written directly from the textbook
//! recursion over string n-grams. Slow on purpose: every probability is
//! computed from the counts, with nothing precomputed in backoff form.

use std::cell::RefCell;
use std::collections::{HashMap, HashSet};

const BOS: &str = "<s>";
const EOS: &str = "</s>";

type Gram = Vec<String>;

pub struct NaiveKn {
    pub order: usize,
    /// raw counts of k-grams ending at a predicted position, keyed by k
    raw: HashMap<usize, HashMap<Gram, u64>>,
    /// predicted vocabulary (all tokens + </s>)
    pub vocab: Vec<String>,
    pub discounts: Vec<[f64; 3]>,
    context_cache: RefCell<HashMap<Gram, Option<(f64, f64)>>>,
}

fn chen_goodman(n: [u64; 4]) -> [f64; 3] {
    if n.contains(&0) {
        return [0.5, 0.5, 0.5];
    }
    let [n1, n2, n3, n4] = n.map(|c| c as f64);
    let y = n1 / (n1 + 2.0 * n2);
    let d = [
        1.0 - 2.0 * y * n2 / n1,
        2.0 - 3.0 * y * n3 / n2,
        3.0 - 4.0 * y * n4 / n3,
    ];
    let mut out = [0.0; 3];
    for k in 0..3 {
        out[k] = d[k].max(0.0).min(k as f64 + 1.0 - 1e-6);
    }
    out
}

impl NaiveKn {
    pub fn train(sentences: &[Vec<String>], order: usize) -> NaiveKn {
        let mut raw: HashMap<usize, HashMap<Gram, u64>> = HashMap::new();
        let mut vocab: HashSet<String> = HashSet::new();
        for s in sentences {
            let mut padded: Vec<String> = vec![BOS.to_string(); order - 1];
            padded.extend(s.iter().cloned());
            padded.push(EOS.to_string());
            for i in (order - 1)..padded.len() {
                vocab.insert(padded[i].clone());
                for k in 1..=order {
                    let g = padded[i + 1 - k..=i].to_vec();
                    *raw.entry(k).or_default().entry(g).or_insert(0) += 1;
                }
            }
        }
        let mut vocab: Vec<String> = vocab.into_iter().collect();
        vocab.sort();
        let mut kn = NaiveKn {
            order,
            raw,
            vocab,
            discounts: Vec::new(),
            context_cache: RefCell::new(HashMap::new()),
        };
        kn.discounts = (1..=order)
            .map(|k| {
                let mut n = [0u64; 4];
                for g in kn.raw[&k].keys() {
                    let a = kn.adjusted(g);
                    if (1..=4).contains(&a) {
                        n[a as usize - 1] += 1;
                    }
                }
                chen_goodman(n)
            })
            .collect();
        kn
    }

    pub fn raw_count(&self, g: &[String]) -> u64 {
        self.raw
            .get(&g.len())
            .and_then(|m| m.get(g))
            .copied()
            .unwrap_or(0)
    }

    /// Raw count at the top order or for <s>-initial grams, otherwise the
    /// number of distinct words seen directly before `g`.
    pub fn adjusted(&self, g: &[String]) -> u64 {
        if g.len() == self.order || g[0] == BOS {
            return self.raw_count(g);
        }
        let longer = &self.raw[&(g.len() + 1)];
        let mut left: HashSet<&String> = HashSet::new();
        for h in longer.keys() {
            if h[1..] == *g {
                left.insert(&h[0]);
            }
        }
        left.len() as u64
    }

    fn discount(&self, k: usize, a: u64) -> f64 {
        match a {
            0 => 0.0,
            1 => self.discounts[k - 1][0],
            2 => self.discounts[k - 1][1],
            _ => self.discounts[k - 1][2],
        }
    }

    /// (sum of adjusted counts, gamma) for context `h`, or None if unseen.
    pub fn context_stats(&self, h: &[String]) -> Option<(f64, f64)> {
        if let Some(v) = self.context_cache.borrow().get(h) {
            return *v;
        }
        let k = h.len() + 1;
        let mut sum = 0u64;
        let mut mass = 0.0;
        for g in self.raw[&k].keys() {
            if g[..k - 1] == *h {
                let a = self.adjusted(g);
                sum += a;
                mass += self.discount(k, a);
            }
        }
        let v = if sum == 0 {
            None
        } else {
            Some((sum as f64, mass / sum as f64))
        };
        self.context_cache.borrow_mut().insert(h.to_vec(), v);
        v
    }

    /// P(w | h) by the interpolated recursion.
    pub fn prob(&self, context: &[&str], w: &str) -> f64 {
        let keep = context.len().min(self.order - 1);
        let h: Vec<String> = context[context.len() - keep..]
            .iter()
            .map(|s| s.to_string())
            .collect();
        self.prob_rec(&h, w)
    }

    fn prob_rec(&self, h: &[String], w: &str) -> f64 {
        let k = h.len() + 1;
        let Some((sum, gamma)) = self.context_stats(h) else {
            return self.prob_rec(&h[1..], w);
        };
        let mut g = h.to_vec();
        g.push(w.to_string());
        let a = if self.raw_count(&g) > 0 {
            self.adjusted(&g)
        } else {
            0
        };
        let own = (a as f64 - self.discount(k, a)).max(0.0) / sum;
        let lower = if h.is_empty() {
            1.0 / self.vocab.len() as f64
        } else {
            self.prob_rec(&h[1..], w)
        };
        own + gamma * lower
    }

    pub fn logprob(&self, context: &[&str], w: &str) -> f64 {
        let p = self.prob(context, w);
        if p > 0.0 {
            p.log10().max(-99.0)
        } else {
            -99.0
        }
    }

    pub fn sequence_logprob(&self, tokens: &[&str], with_boundaries: bool) -> f64 {
        let mut hist: Vec<&str> = if with_boundaries {
            vec![BOS; self.order - 1]
        } else {
            Vec::new()
        };
        let mut targets: Vec<&str> = tokens.to_vec();
        if with_boundaries {
            targets.push(EOS);
        }
        let mut total = 0.0;
        for t in targets {
            total += self.logprob(&hist, t);
            hist.push(t);
        }
        total
    }

    /// Every context in which the model has data (including <s> padding).
    pub fn observed_contexts(&self) -> Vec<Vec<String>> {
        let mut out: HashSet<Vec<String>> = HashSet::new();
        for k in 2..=self.order {
            for g in self.raw[&k].keys() {
                out.insert(g[..k - 1].to_vec());
            }
        }
        let mut out: Vec<_> = out.into_iter().collect();
        out.sort();
        out
    }
}
