//! Chunk-annotated corpus ingestion and template extraction.
//!
//! The input is CoNLL-2000 shaped text: one `surface pos chunk` triple per
//! line, blank lines between sentences. Every maximal `B-X (I-X)*` span becomes
//! a template tagged `X`; every `O` token becomes a one-item template tagged
//! `O`, so each sentence is a complete template sequence.

use std::collections::HashMap;
use std::fmt;
use std::io::{self, BufRead, Write};
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("line {line}: expected 3 columns `surface pos chunk`, found {found}")]
    MalformedLine { line: usize, found: usize },
    #[error("line {line}: bad chunk label `{label}`")]
    BadChunkLabel { line: usize, label: String },
    #[error("line {line}: `{label}` does not continue a chunk of the same type")]
    IllegalBio { line: usize, label: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// BIO chunk label of a single token.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ChunkLabel {
    Begin(String),
    Inside(String),
    Outside,
}

impl ChunkLabel {
    pub fn parse(s: &str) -> Option<ChunkLabel> {
        if s == "O" {
            return Some(ChunkLabel::Outside);
        }
        let (prefix, label) = s.split_once('-')?;
        if label.is_empty() {
            return None;
        }
        match prefix {
            "B" => Some(ChunkLabel::Begin(label.to_string())),
            "I" => Some(ChunkLabel::Inside(label.to_string())),
            _ => None,
        }
    }

    /// Bare chunk type (`NP`, `VP`, ...) or `O`.
    pub fn tag(&self) -> &str {
        match self {
            ChunkLabel::Begin(t) | ChunkLabel::Inside(t) => t,
            ChunkLabel::Outside => OUTSIDE_TAG,
        }
    }
}

impl fmt::Display for ChunkLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChunkLabel::Begin(t) => write!(f, "B-{t}"),
            ChunkLabel::Inside(t) => write!(f, "I-{t}"),
            ChunkLabel::Outside => f.write_str("O"),
        }
    }
}

pub const OUTSIDE_TAG: &str = "O";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedToken {
    pub surface: String,
    pub pos: String,
    pub chunk: ChunkLabel,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AnnotatedSentence {
    pub tokens: Vec<AnnotatedToken>,
}

impl AnnotatedSentence {
    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|t| t.surface.as_str())
    }
}

/// Parse chunk-annotated text from any buffered reader.
pub fn parse_conll<R: BufRead>(reader: R) -> Result<Vec<AnnotatedSentence>, CorpusError> {
    let mut sentences = Vec::new();
    let mut current = AnnotatedSentence::default();

    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.is_empty() {
            if !current.tokens.is_empty() {
                sentences.push(std::mem::take(&mut current));
            }
            continue;
        }
        if cols.len() != 3 {
            return Err(CorpusError::MalformedLine {
                line: lineno,
                found: cols.len(),
            });
        }
        let chunk = ChunkLabel::parse(cols[2]).ok_or_else(|| CorpusError::BadChunkLabel {
            line: lineno,
            label: cols[2].to_string(),
        })?;
        if let ChunkLabel::Inside(tag) = &chunk {
            let continues = matches!(
                current.tokens.last().map(|t| &t.chunk),
                Some(ChunkLabel::Begin(prev)) | Some(ChunkLabel::Inside(prev)) if prev == tag
            );
            if !continues {
                return Err(CorpusError::IllegalBio {
                    line: lineno,
                    label: cols[2].to_string(),
                });
            }
        }
        current.tokens.push(AnnotatedToken {
            surface: cols[0].to_string(),
            pos: cols[1].to_string(),
            chunk,
        });
    }
    if !current.tokens.is_empty() {
        sentences.push(current);
    }
    Ok(sentences)
}

pub fn parse_conll_str(text: &str) -> Result<Vec<AnnotatedSentence>, CorpusError> {
    parse_conll(text.as_bytes())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ItemKind {
    Lexical,
    Factor,
}

/// One slot of a template: either a concrete word or a POS-typed gap.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TemplateItem {
    pub kind: ItemKind,
    pub text: String,
    pub pos: String,
}

impl TemplateItem {
    pub fn lexical(word: &str, pos: &str) -> Self {
        TemplateItem {
            kind: ItemKind::Lexical,
            text: word.to_string(),
            pos: pos.to_string(),
        }
    }

    pub fn factor(pos: &str) -> Self {
        TemplateItem {
            kind: ItemKind::Factor,
            text: pos.to_string(),
            pos: pos.to_string(),
        }
    }

    pub fn is_factor(&self) -> bool {
        self.kind == ItemKind::Factor
    }

    /// Token string used in factored text and LM queries: the word itself, or
    /// `__POS__` for a factor.
    pub fn render(&self) -> String {
        match self.kind {
            ItemKind::Lexical => self.text.clone(),
            ItemKind::Factor => factor_marker(&self.text),
        }
    }
}

pub fn factor_marker(pos: &str) -> String {
    format!("__{pos}__")
}

/// Inverse of [`factor_marker`]: `__NN__` yields `Some("NN")`.
pub fn strip_factor_marker(token: &str) -> Option<&str> {
    token
        .strip_prefix("__")
        .and_then(|t| t.strip_suffix("__"))
        .filter(|t| !t.is_empty())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    pub items: Vec<TemplateItem>,
    pub tag: String,
    pub count: u64,
}

impl Template {
    pub fn rendered(&self) -> impl Iterator<Item = String> + '_ {
        self.items.iter().map(TemplateItem::render)
    }

    /// `item1 item2 ...` with factors as `__POS__`.
    pub fn rendered_text(&self) -> String {
        self.rendered().collect::<Vec<_>>().join(" ")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TemplateId(pub usize);

type TemplateKey = (String, Vec<TemplateItem>);

/// Unique templates with occurrence counts, plus the template sequence of
/// every corpus sentence.
#[derive(Debug, Clone, Default)]
pub struct TemplateInventory {
    templates: Vec<Template>,
    rendered: Vec<Arc<[Arc<str>]>>,
    tags: Vec<Arc<str>>,
    index: HashMap<TemplateKey, TemplateId>,
    sequences: Vec<Vec<TemplateId>>,
    total: u64,
}

impl TemplateInventory {
    pub fn new() -> Self {
        Self::default()
    }

    /// Add `count` occurrences of a template, merging with an identical one.
    pub fn add(&mut self, items: Vec<TemplateItem>, tag: &str, count: u64) -> TemplateId {
        assert!(!items.is_empty(), "templates must have at least one item");
        self.total += count;
        let key = (tag.to_string(), items);
        if let Some(&id) = self.index.get(&key) {
            self.templates[id.0].count += count;
            return id;
        }
        let id = TemplateId(self.templates.len());
        let (tag, items) = key.clone();
        let rendered: Vec<Arc<str>> = items.iter().map(|i| Arc::from(i.render())).collect();
        self.rendered.push(rendered.into());
        self.tags.push(Arc::from(tag.as_str()));
        self.templates.push(Template { items, tag, count });
        self.index.insert(key, id);
        id
    }

    pub fn push_sequence(&mut self, sequence: Vec<TemplateId>) {
        self.sequences.push(sequence);
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn get(&self, id: TemplateId) -> &Template {
        &self.templates[id.0]
    }

    pub fn templates(&self) -> &[Template] {
        &self.templates
    }

    pub fn ids(&self) -> impl Iterator<Item = TemplateId> {
        (0..self.templates.len()).map(TemplateId)
    }

    pub fn find(&self, items: &[TemplateItem], tag: &str) -> Option<TemplateId> {
        self.index.get(&(tag.to_string(), items.to_vec())).copied()
    }

    pub fn rendered(&self, id: TemplateId) -> &[Arc<str>] {
        &self.rendered[id.0]
    }

    pub fn tag(&self, id: TemplateId) -> &Arc<str> {
        &self.tags[id.0]
    }

    /// Template sequence of each corpus sentence, in corpus order.
    pub fn sequences(&self) -> &[Vec<TemplateId>] {
        &self.sequences
    }

    /// Chunk-tag sequence of each corpus sentence (signature LM training data).
    pub fn signature_sequences(&self) -> Vec<Vec<String>> {
        self.sequences
            .iter()
            .map(|seq| {
                seq.iter()
                    .map(|id| self.templates[id.0].tag.clone())
                    .collect()
            })
            .collect()
    }

    /// One line per template, `count<TAB>tag<TAB>items`, sorted by descending
    /// count and then lexicographically.
    pub fn to_tsv(&self) -> String {
        let mut lines: Vec<(u64, String)> = self
            .templates
            .iter()
            .map(|t| (t.count, format!("{}\t{}", t.tag, t.rendered_text())))
            .collect();
        lines.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
        let mut out = String::new();
        for (count, rest) in lines {
            out.push_str(&count.to_string());
            out.push('\t');
            out.push_str(&rest);
            out.push('\n');
        }
        out
    }

    pub fn write_tsv<W: Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(self.to_tsv().as_bytes())
    }
}

/// Segment every sentence into chunk templates and merge duplicates.
pub fn extract_templates(sentences: &[AnnotatedSentence]) -> TemplateInventory {
    let mut inv = TemplateInventory::new();
    for sentence in sentences {
        let mut sequence = Vec::new();
        let mut span: Vec<TemplateItem> = Vec::new();
        let mut span_tag: Option<&str> = None;

        for tok in &sentence.tokens {
            let item = TemplateItem::lexical(&tok.surface, &tok.pos);
            match &tok.chunk {
                ChunkLabel::Inside(tag) if span_tag == Some(tag.as_str()) => span.push(item),
                // Ill-formed I- (only reachable when sentences are built by
                // hand) opens a new chunk, as B- would.
                ChunkLabel::Begin(tag) | ChunkLabel::Inside(tag) => {
                    if let Some(prev) = span_tag {
                        sequence.push(inv.add(std::mem::take(&mut span), prev, 1));
                    }
                    span.push(item);
                    span_tag = Some(tag);
                }
                ChunkLabel::Outside => {
                    if let Some(prev) = span_tag.take() {
                        sequence.push(inv.add(std::mem::take(&mut span), prev, 1));
                    }
                    sequence.push(inv.add(vec![item], OUTSIDE_TAG, 1));
                }
            }
        }
        if let Some(prev) = span_tag {
            sequence.push(inv.add(span, prev, 1));
        }
        inv.push_sequence(sequence);
    }
    inv
}

/// Corpus word frequencies with a derived frequency rank.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CountTable {
    counts: HashMap<String, u64>,
    ranks: HashMap<String, u64>,
}

impl CountTable {
    pub fn from_counts(counts: HashMap<String, u64>) -> Self {
        let mut order: Vec<(&String, u64)> = counts.iter().map(|(w, &c)| (w, c)).collect();
        // Rank 1 is the most frequent word; ties go to the lexicographically
        // smaller word.
        order.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
        let ranks = order
            .iter()
            .enumerate()
            .map(|(i, (w, _))| ((*w).clone(), i as u64 + 1))
            .collect();
        CountTable { counts, ranks }
    }

    /// Zero for unseen words.
    pub fn count(&self, word: &str) -> u64 {
        self.counts.get(word).copied().unwrap_or(0)
    }

    /// `None` stands for an infinite rank (unseen word).
    pub fn rank(&self, word: &str) -> Option<u64> {
        self.ranks.get(word).copied()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn counts(&self) -> &HashMap<String, u64> {
        &self.counts
    }

    /// Merge another table, e.g. one built from a different corpus shard.
    pub fn merge(&self, other: &CountTable) -> CountTable {
        let mut counts = self.counts.clone();
        for (w, c) in &other.counts {
            *counts.entry(w.clone()).or_insert(0) += c;
        }
        CountTable::from_counts(counts)
    }
}

pub fn token_counts(sentences: &[AnnotatedSentence]) -> CountTable {
    let mut counts: HashMap<String, u64> = HashMap::new();
    for word in sentences.iter().flat_map(AnnotatedSentence::words) {
        *counts.entry(word.to_string()).or_insert(0) += 1;
    }
    CountTable::from_counts(counts)
}
