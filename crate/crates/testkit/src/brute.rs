//! Straight-line counting and factoring over raw 3-column text, used as
//! oracles for the library's corpus and factoring code.

use std::collections::BTreeMap;

pub type Row = (String, String, String);

/// A chunk tag with its (word, pos) items.
pub type Chunk = (String, Vec<(String, String)>);

pub fn rows(text: &str) -> Vec<Vec<Row>> {
    let mut out = vec![Vec::new()];
    for line in text.lines() {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.is_empty() {
            if !out.last().unwrap().is_empty() {
                out.push(Vec::new());
            }
            continue;
        }
        out.last_mut()
            .unwrap()
            .push((f[0].to_string(), f[1].to_string(), f[2].to_string()));
    }
    if out.last().unwrap().is_empty() {
        out.pop();
    }
    out
}

pub fn word_counts(text: &str) -> BTreeMap<String, u64> {
    let mut m = BTreeMap::new();
    for sent in rows(text) {
        for (w, _, _) in sent {
            *m.entry(w).or_insert(0) += 1;
        }
    }
    m
}

/// Chunks of each sentence as (tag, [(word, pos)]).
pub fn chunks(text: &str) -> Vec<Vec<Chunk>> {
    rows(text)
        .into_iter()
        .map(|sent| {
            let mut out: Vec<Chunk> = Vec::new();
            let mut open = false;
            for (w, p, c) in sent {
                if c == "O" {
                    out.push(("O".into(), vec![(w, p)]));
                    open = false;
                } else if let Some(tag) = c.strip_prefix("I-") {
                    assert!(open && out.last().unwrap().0 == tag);
                    out.last_mut().unwrap().1.push((w, p));
                } else {
                    let tag = c.strip_prefix("B-").unwrap().to_string();
                    out.push((tag, vec![(w, p)]));
                    open = true;
                }
            }
            out
        })
        .collect()
}

fn render(w: &str, p: &str, counts: &BTreeMap<String, u64>, threshold: u64) -> String {
    if counts.get(w).copied().unwrap_or(0) < threshold {
        format!("__{p}__")
    } else {
        w.to_string()
    }
}

/// Template inventory under a count threshold, keyed by (tag, rendered items).
pub fn factored_inventory(text: &str, threshold: u64) -> BTreeMap<(String, String), u64> {
    let counts = word_counts(text);
    let mut inv = BTreeMap::new();
    for sent in chunks(text) {
        for (tag, items) in sent {
            let r: Vec<String> = items
                .iter()
                .map(|(w, p)| render(w, p, &counts, threshold))
                .collect();
            *inv.entry((tag, r.join(" "))).or_insert(0) += 1;
        }
    }
    inv
}

pub fn factored_text(text: &str, threshold: u64) -> Vec<Vec<String>> {
    let counts = word_counts(text);
    rows(text)
        .into_iter()
        .map(|s| {
            s.iter()
                .map(|(w, p, _)| render(w, p, &counts, threshold))
                .collect()
        })
        .collect()
}

pub fn tag_sequences(text: &str) -> Vec<Vec<String>> {
    chunks(text)
        .into_iter()
        .map(|s| s.into_iter().map(|(t, _)| t).collect())
        .collect()
}

/// All k-grams (k <= order) over padded sequences, ending at predicted positions.
pub fn ngram_counts(seqs: &[Vec<String>], order: usize) -> BTreeMap<Vec<String>, u64> {
    let mut m = BTreeMap::new();
    for s in seqs {
        let mut p: Vec<String> = vec!["<s>".into(); order - 1];
        p.extend(s.iter().cloned());
        p.push("</s>".into());
        for end in order - 1..p.len() {
            for start in end + 1 - order..=end {
                *m.entry(p[start..=end].to_vec()).or_insert(0) += 1;
            }
        }
    }
    m
}
