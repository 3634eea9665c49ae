//! Run configuration: a flat INI file with `corpus` and `output_dir` at the
//! top level and `[factor]`, `[lm]`, `[ga]` sections.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use gatemplate::{FactorPolicy, GaConfig};
use ini::Ini;
use sha2::{Digest, Sha256};

use crate::CliError;

/// Environment variable that overrides `output_dir`.
pub const OUT_DIR_ENV: &str = "GATEMPLATE_OUT_DIR";

/// The only generator accepted for `ga.rng`.
pub const RNG_NAME: &str = "chacha8";

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub corpus: PathBuf,
    pub output_dir: PathBuf,
    pub factor: FactorPolicy,
    pub token_order: usize,
    pub signature_order: usize,
    pub ga: GaConfig,
}

impl RunConfig {
    pub fn new(corpus: impl Into<PathBuf>, output_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            corpus: corpus.into(),
            output_dir: output_dir.into(),
            factor: FactorPolicy::absolute(100),
            token_order: 3,
            signature_order: 5,
            ga: GaConfig::default(),
        }
    }

    /// Read a config file. Relative paths inside it resolve against the
    /// file's directory.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base).map_err(|e| match e {
            CliError::Usage(msg) => CliError::Usage(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str, base: &Path) -> Result<Self, CliError> {
        let ini =
            Ini::load_from_str(text).map_err(|e| CliError::Usage(format!("config syntax: {e}")))?;
        let mut corpus = None;
        let mut cfg = RunConfig::new("", base.join("out"));
        let mut mode = cfg.factor.mode();
        let mut threshold = cfg.factor.threshold();

        for (section, props) in ini.iter() {
            for (key, value) in props.iter() {
                let name = match section {
                    Some(s) => format!("{s}.{key}"),
                    None => key.to_string(),
                };
                let value = value.trim();
                match name.as_str() {
                    "corpus" => corpus = Some(base.join(value)),
                    "output_dir" => cfg.output_dir = base.join(value),
                    "factor.mode" => mode = parse(&name, value)?,
                    "factor.threshold" => threshold = parse(&name, value)?,
                    "lm.token_order" => cfg.token_order = parse(&name, value)?,
                    "lm.signature_order" => cfg.signature_order = parse(&name, value)?,
                    "ga.population_size" => cfg.ga.population_size = parse(&name, value)?,
                    "ga.tournament_size" => cfg.ga.tournament_size = parse(&name, value)?,
                    "ga.nbest" => cfg.ga.nbest = parse(&name, value)?,
                    "ga.mutation_p" => cfg.ga.mutation_p = parse(&name, value)?,
                    "ga.target_length" => cfg.ga.target_length = parse(&name, value)?,
                    "ga.generations" => cfg.ga.generations = parse(&name, value)?,
                    "ga.seed" => cfg.ga.seed = parse(&name, value)?,
                    "ga.rng" => {
                        if value != RNG_NAME {
                            return Err(CliError::Usage(format!(
                                "ga.rng: unsupported generator `{value}` (only `{RNG_NAME}`)"
                            )));
                        }
                    }
                    _ => return Err(CliError::Usage(format!("unknown key `{name}`"))),
                }
            }
        }

        cfg.corpus = corpus.ok_or_else(|| CliError::Usage("missing `corpus`".into()))?;
        cfg.factor =
            FactorPolicy::new(mode, threshold).map_err(|e| CliError::Usage(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.token_order == 0 || self.signature_order == 0 {
            return Err(CliError::Usage("LM orders must be at least 1".into()));
        }
        self.ga
            .validate()
            .map_err(|e| CliError::Usage(e.to_string()))
    }

    /// Replace `output_dir` with the override, if one is given.
    pub fn with_output_override(mut self, dir: Option<PathBuf>) -> Self {
        if let Some(d) = dir {
            self.output_dir = d;
        }
        self
    }

    /// Canonical INI text with every field spelled out.
    pub fn to_ini(&self) -> String {
        let g = &self.ga;
        format!(
            "corpus = {}\noutput_dir = {}\n\n\
             [factor]\nmode = {}\nthreshold = {}\n\n\
             [lm]\ntoken_order = {}\nsignature_order = {}\n\n\
             [ga]\npopulation_size = {}\ntournament_size = {}\nnbest = {}\nmutation_p = {}\n\
             target_length = {}\ngenerations = {}\nseed = {}\nrng = {RNG_NAME}\n",
            self.corpus.display(),
            self.output_dir.display(),
            self.factor.mode(),
            self.factor.threshold(),
            self.token_order,
            self.signature_order,
            g.population_size,
            g.tournament_size,
            g.nbest,
            g.mutation_p,
            g.target_length,
            g.generations,
            g.seed,
        )
    }

    /// Digest of everything that shapes the trained artifacts. The corpus
    /// enters by content, so moving the file does not invalidate a model.
    pub fn training_hash(&self, corpus_digest: &str) -> String {
        let canonical = format!(
            "corpus_sha256={corpus_digest}\nfactor={}\nlm.token_order={}\nlm.signature_order={}\n",
            self.factor, self.token_order, self.signature_order
        );
        sha256_hex(canonical.as_bytes())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    value
        .parse()
        .map_err(|e| CliError::Usage(format!("{key}: cannot parse `{value}`: {e}")))
}
