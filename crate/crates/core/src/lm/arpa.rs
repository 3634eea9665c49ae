use std::collections::HashMap;
use std::io::{self, BufRead, Write};

use super::counts::NGramKey;
use super::{Entry, LanguageModel, LmError, Vocab, WordId, UNK};
use crate::scalar::LogFloat;

/// Write the model in ARPA layout with 4-decimal log10 values. Entries are
/// sorted so identical models produce identical files.
pub fn write_arpa<F: LogFloat, W: Write>(model: &LanguageModel<F>, mut w: W) -> io::Result<()> {
    let vocab = model.vocab_table();
    let order = model.order();

    writeln!(w, "\\data\\")?;
    for k in 1..=order {
        let extra = usize::from(k == 1);
        writeln!(w, "ngram {}={}", k, model.num_entries(k) + extra)?;
    }

    for k in 1..=order {
        writeln!(w)?;
        writeln!(w, "\\{k}-grams:")?;
        let mut lines: Vec<(Vec<&str>, &Entry<F>)> = model
            .level(k)
            .iter()
            .map(|(g, e)| (g.iter().map(|&id| vocab.word(id)).collect(), e))
            .collect();
        let unk = Entry {
            logprob: model.unk_logprob(),
            backoff: None,
        };
        if k == 1 {
            lines.push((vec![UNK], &unk));
        }
        lines.sort_by(|a, b| a.0.cmp(&b.0));
        for (gram, e) in lines {
            write!(w, "{:.4}\t{}", e.logprob, gram.join(" "))?;
            if let Some(b) = e.backoff {
                write!(w, "\t{b:.4}")?;
            }
            writeln!(w)?;
        }
    }
    writeln!(w)?;
    writeln!(w, "\\end\\")?;
    Ok(())
}

fn malformed(line: usize, msg: impl Into<String>) -> LmError {
    LmError::MalformedArpa {
        line,
        msg: msg.into(),
    }
}

fn parse_value<F: LogFloat>(s: &str, line: usize) -> Result<F, LmError> {
    s.parse::<F>()
        .map(|v| v.max(F::log_floor()))
        .map_err(|_| malformed(line, format!("bad number `{s}`")))
}

enum Section {
    Preamble,
    Data,
    Grams(usize),
    End,
}

/// Read an ARPA model. A `<unk>` unigram, when present, becomes the
/// out-of-vocabulary floor rather than a vocabulary entry.
pub fn read_arpa<F: LogFloat, R: BufRead>(reader: R) -> Result<LanguageModel<F>, LmError> {
    let mut declared: Vec<usize> = Vec::new();
    let mut levels: Vec<HashMap<NGramKey, Entry<F>>> = Vec::new();
    let mut vocab = Vocab::with_boundaries();
    let mut unk_logprob = None;
    let mut section = Section::Preamble;
    let mut last_line = 0;

    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        last_line = lineno;
        let text = line.trim();
        if text.is_empty() {
            continue;
        }
        match section {
            Section::Preamble => {
                if text == "\\data\\" {
                    section = Section::Data;
                }
            }
            Section::End => return Err(malformed(lineno, "content after \\end\\")),
            Section::Data | Section::Grams(_) if text == "\\end\\" => {
                section = Section::End;
            }
            Section::Data | Section::Grams(_) if text.starts_with('\\') => {
                let k = text
                    .strip_prefix('\\')
                    .and_then(|t| t.strip_suffix("-grams:"))
                    .and_then(|t| t.parse::<usize>().ok())
                    .ok_or_else(|| malformed(lineno, format!("unexpected header `{text}`")))?;
                if k == 0 || k > declared.len() {
                    return Err(malformed(lineno, format!("undeclared order {k}")));
                }
                if let Section::Grams(prev) = section {
                    if k != prev + 1 {
                        return Err(malformed(lineno, "n-gram sections out of order"));
                    }
                } else if k != 1 {
                    return Err(malformed(lineno, "n-gram sections out of order"));
                }
                section = Section::Grams(k);
            }
            Section::Data => {
                let spec = text
                    .strip_prefix("ngram ")
                    .ok_or_else(|| malformed(lineno, "expected `ngram k=count`"))?;
                let (k, n) = spec
                    .split_once('=')
                    .and_then(|(k, n)| {
                        Some((
                            k.trim().parse::<usize>().ok()?,
                            n.trim().parse::<usize>().ok()?,
                        ))
                    })
                    .ok_or_else(|| malformed(lineno, "expected `ngram k=count`"))?;
                if k != declared.len() + 1 {
                    return Err(malformed(lineno, "ngram counts out of order"));
                }
                declared.push(n);
                levels.push(HashMap::new());
            }
            Section::Grams(k) => {
                let fields: Vec<&str> = text.split_whitespace().collect();
                if fields.len() != k + 1 && fields.len() != k + 2 {
                    return Err(malformed(lineno, format!("expected {k}-gram entry")));
                }
                let logprob: F = parse_value(fields[0], lineno)?;
                let backoff = match fields.get(k + 1) {
                    Some(b) => Some(parse_value(b, lineno)?),
                    None => None,
                };
                let words = &fields[1..=k];
                if k == 1 && words[0] == UNK {
                    unk_logprob = Some(logprob);
                    continue;
                }
                if k > 1 && words.contains(&UNK) {
                    // n-grams over <unk> are unreachable: OOV words never
                    // map to an id, so they cannot be looked up.
                    continue;
                }
                let key: Vec<WordId> = words.iter().map(|w| vocab.intern(w)).collect();
                if levels[k - 1]
                    .insert(key.into(), Entry { logprob, backoff })
                    .is_some()
                {
                    return Err(malformed(lineno, "duplicate n-gram"));
                }
            }
        }
    }

    if !matches!(section, Section::End) {
        return Err(malformed(last_line, "missing \\end\\"));
    }
    if declared.is_empty() {
        return Err(malformed(last_line, "no \\data\\ section"));
    }
    // <unk>-bearing higher-order entries are dropped above, so only the
    // unigram count can be checked exactly.
    let unigrams = levels[0].len() + usize::from(unk_logprob.is_some());
    if unigrams != declared[0] {
        return Err(malformed(
            last_line,
            format!("declared {} 1-grams, found {unigrams}", declared[0]),
        ));
    }
    Ok(LanguageModel::from_parts(
        declared.len(),
        vocab,
        levels,
        unk_logprob.unwrap_or_else(F::log_floor),
    ))
}
