//! `train` and `generate`: corpus to persisted artifacts, artifacts to an
//! evolved population.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use gatemplate::{
    extract_templates, factor_inventory, factored_token_stream, parse_conll_str, read_arpa,
    token_counts, train_model, write_arpa, AnnotatedSentence, Engine, GaResult, NGramModel,
    TemplateInventory,
};
use ini::Ini;

use crate::config::{sha256_hex, RunConfig};
use crate::CliError;

pub const INVENTORY_FILE: &str = "inventory.tsv";
pub const TOKEN_LM_FILE: &str = "tokens.arpa";
pub const SIGNATURE_LM_FILE: &str = "signature.arpa";
pub const MANIFEST_FILE: &str = "manifest.ini";
pub const TRAIN_CONFIG_FILE: &str = "train.ini";
pub const GENERATE_CONFIG_FILE: &str = "generate.ini";
pub const STATS_FILE: &str = "stats.csv";
pub const POPULATION_FILE: &str = "population.tsv";

/// Corpus statistics and the training hash written next to the artifacts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    pub config_hash: String,
    pub corpus_sha256: String,
    pub sentences: usize,
    pub templates_before: usize,
    pub templates_after: usize,
}

impl Manifest {
    pub fn to_ini(&self) -> String {
        format!(
            "config_hash = {}\ncorpus_sha256 = {}\nsentences = {}\ntemplates_before = {}\ntemplates_after = {}\n",
            self.config_hash, self.corpus_sha256, self.sentences, self.templates_before, self.templates_after
        )
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let bad = |msg: String| CliError::Data(format!("{}: {msg}", path.display()));
        let ini = Ini::load_from_file(path).map_err(|e| bad(e.to_string()))?;
        let top = ini.general_section();
        let get = |k: &str| {
            top.get(k)
                .map(str::to_string)
                .ok_or_else(|| bad(format!("missing `{k}`")))
        };
        let num = |k: &str| {
            get(k)?
                .parse::<usize>()
                .map_err(|e| bad(format!("`{k}`: {e}")))
        };
        Ok(Manifest {
            config_hash: get("config_hash")?,
            corpus_sha256: get("corpus_sha256")?,
            sentences: num("sentences")?,
            templates_before: num("templates_before")?,
            templates_after: num("templates_after")?,
        })
    }
}

/// Everything derived from the corpus under one factoring policy.
pub struct Prepared {
    pub manifest: Manifest,
    pub inventory: TemplateInventory,
    pub token_stream: Vec<Vec<String>>,
}

fn read_corpus(path: &Path) -> Result<(Vec<AnnotatedSentence>, String), CliError> {
    let bytes = fs::read(path)
        .map_err(|e| CliError::Data(format!("cannot read corpus {}: {e}", path.display())))?;
    let digest = sha256_hex(&bytes);
    let text =
        String::from_utf8(bytes).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let sentences =
        parse_conll_str(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    if sentences.is_empty() {
        return Err(CliError::Data(format!("{}: no sentences", path.display())));
    }
    Ok((sentences, digest))
}

pub fn prepare(cfg: &RunConfig) -> Result<Prepared, CliError> {
    let (sentences, digest) = read_corpus(&cfg.corpus)?;
    let table = token_counts(&sentences);
    let raw = extract_templates(&sentences);
    let inventory = factor_inventory(&raw, &table, &cfg.factor);
    let token_stream = factored_token_stream(&sentences, &table, &cfg.factor);
    Ok(Prepared {
        manifest: Manifest {
            config_hash: cfg.training_hash(&digest),
            corpus_sha256: digest,
            sentences: sentences.len(),
            templates_before: raw.len(),
            templates_after: inventory.len(),
        },
        inventory,
        token_stream,
    })
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Data(format!("cannot create {}: {e}", dir.display())))
}

fn lm_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Data(format!("{}: {e}", path.display()))
}

/// Build the factored inventory and both language models and write them,
/// with a manifest and the resolved config, into `cfg.output_dir`.
pub fn train(cfg: &RunConfig) -> Result<Manifest, CliError> {
    let prepared = prepare(cfg)?;
    let out = &cfg.output_dir;
    ensure_dir(out)?;

    let inv_path = out.join(INVENTORY_FILE);
    let mut w = create(&inv_path)?;
    prepared
        .inventory
        .write_tsv(&mut w)
        .and_then(|_| w.flush())
        .map_err(|e| lm_error(&inv_path, e))?;

    let token_lm: NGramModel = train_model(&prepared.token_stream, cfg.token_order)
        .map_err(|e| lm_error(&cfg.corpus, e))?;
    let signature_lm: NGramModel = train_model(
        &prepared.inventory.signature_sequences(),
        cfg.signature_order,
    )
    .map_err(|e| lm_error(&cfg.corpus, e))?;
    for (name, lm) in [
        (TOKEN_LM_FILE, &token_lm),
        (SIGNATURE_LM_FILE, &signature_lm),
    ] {
        let path = out.join(name);
        let mut w = create(&path)?;
        write_arpa(lm, &mut w)
            .and_then(|_| w.flush())
            .map_err(|e| lm_error(&path, e))?;
    }

    write_file(&out.join(MANIFEST_FILE), &prepared.manifest.to_ini())?;
    write_file(&out.join(TRAIN_CONFIG_FILE), &cfg.to_ini())?;
    Ok(prepared.manifest)
}

fn load_lm(path: PathBuf) -> Result<NGramModel, CliError> {
    let f = File::open(&path).map_err(|e| lm_error(&path, e))?;
    read_arpa(BufReader::new(f)).map_err(|e| lm_error(&path, e))
}

/// Check the trained artifacts against `cfg`, run the search and write
/// `stats.csv` and `population.tsv`.
pub fn generate(cfg: &RunConfig) -> Result<GaResult, CliError> {
    let out = &cfg.output_dir;
    let manifest = Manifest::load(&out.join(MANIFEST_FILE))?;
    let prepared = prepare(cfg)?;
    if manifest.config_hash != prepared.manifest.config_hash {
        return Err(CliError::ManifestMismatch {
            expected: prepared.manifest.config_hash,
            found: manifest.config_hash,
        });
    }

    // The TSV drops the POS of lexical items, so the inventory is rebuilt
    // from the corpus and checked against the persisted copy.
    let inv_path = out.join(INVENTORY_FILE);
    let persisted = fs::read_to_string(&inv_path).map_err(|e| lm_error(&inv_path, e))?;
    if persisted != prepared.inventory.to_tsv() {
        return Err(CliError::Data(format!(
            "{} does not match the corpus; retrain",
            inv_path.display()
        )));
    }

    let token_lm = load_lm(out.join(TOKEN_LM_FILE))?;
    let signature_lm = load_lm(out.join(SIGNATURE_LM_FILE))?;
    let engine = Engine::new(&cfg.ga, &prepared.inventory, &token_lm, &signature_lm)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let result = engine.run();

    write_file(&out.join(STATS_FILE), &result.stats_csv())?;
    write_file(&out.join(POPULATION_FILE), &result.population_dump())?;
    write_file(&out.join(GENERATE_CONFIG_FILE), &cfg.to_ini())?;
    Ok(result)
}
