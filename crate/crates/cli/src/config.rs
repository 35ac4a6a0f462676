//! Run configuration. One TOML file drives every verb; missing sections and
//! fields fall back to defaults, so a config states only what it changes.
//! Unknown keys are rejected rather than silently ignored.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use sarcdet::corpus::{FilterConfig, Platform};
use sarcdet::error::{Error, Result};
use sarcdet::eval::{FeatureSet, Method, Regime, SynthParams};
use sarcdet::fusionnet::NetTrainConfig;
use sarcdet::svm::TrainConfig;
use sarcdet::textfeat::{
    load_frequency_map, load_score_map, load_syllable_exceptions, load_word_set, Embeddings,
    FreqScale, LexResources,
};
use sarcdet::visfeat::{ConceptVocab, FeatureStore, ImagePolicy, MultiImagePolicy};

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub paths: Paths,
    pub experiment: Experiment,
    pub svm: Svm,
    pub net: Net,
    pub filter: Filter,
    pub synth: Synth,
    pub images: Images,
}

/// Input and model locations. Everything is optional; each verb names the
/// paths it cannot run without.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Paths {
    pub corpus: Option<PathBuf>,
    pub concept_vocab: Option<PathBuf>,
    pub concepts: Option<PathBuf>,
    pub avr: Option<PathBuf>,
    pub judgments: Option<PathBuf>,
    pub gold: Option<PathBuf>,
    pub embeddings: Option<PathBuf>,
    pub lexicons_dir: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub checkpoint: Option<PathBuf>,
    pub vocab: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Experiment {
    pub method: String,
    pub feature_sets: Vec<String>,
    pub split_ratio: f64,
    pub seed: u64,
    pub regime: String,
    pub ngram_min_count: usize,
}

impl Default for Experiment {
    fn default() -> Self {
        Experiment {
            method: "svm_fusion".to_string(),
            feature_sets: vec!["ngrams".to_string()],
            split_ratio: 0.5,
            seed: 0,
            regime: "silver".to_string(),
            ngram_min_count: 1,
        }
    }
}

impl Experiment {
    pub fn method(&self) -> Result<Method> {
        Method::parse(&self.method)
    }

    pub fn regime(&self) -> Result<Regime> {
        Regime::parse(&self.regime)
    }

    pub fn feature_sets(&self) -> Result<Vec<FeatureSet>> {
        if self.feature_sets.is_empty() {
            return Err(Error::InvalidConfig("feature_sets must not be empty".into()));
        }
        self.feature_sets.iter().map(|s| FeatureSet::parse(s)).collect()
    }

    /// The verbs that train a single model use the first configured set.
    pub fn primary_feature_set(&self) -> Result<FeatureSet> {
        Ok(self.feature_sets()?[0])
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Svm {
    pub c: f64,
    pub max_epochs: usize,
    pub tol: f64,
    pub row_normalize: bool,
}

impl Default for Svm {
    fn default() -> Self {
        let d = TrainConfig::default();
        Svm {
            c: d.c,
            max_epochs: d.max_epochs,
            tol: d.tol,
            row_normalize: d.row_normalize,
        }
    }
}

impl Svm {
    pub fn to_core(&self, seed: u64) -> TrainConfig {
        TrainConfig {
            c: self.c,
            max_epochs: self.max_epochs,
            tol: self.tol,
            seed,
            row_normalize: self.row_normalize,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Net {
    pub batch_size: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub momentum: f64,
    pub hidden: usize,
    /// Image vector width when no dense vectors pin one.
    pub image_dim: usize,
}

impl Default for Net {
    fn default() -> Self {
        let d = NetTrainConfig::default();
        Net {
            batch_size: d.batch_size,
            epochs: d.epochs,
            learning_rate: d.learning_rate,
            momentum: d.momentum,
            hidden: 512,
            image_dim: 4096,
        }
    }
}

impl Net {
    /// Mode is decided later by the feature set, so it stays at the default.
    pub fn to_core(&self, seed: u64) -> NetTrainConfig {
        NetTrainConfig {
            batch_size: self.batch_size,
            epochs: self.epochs,
            learning_rate: self.learning_rate,
            momentum: self.momentum,
            seed,
            ..NetTrainConfig::default()
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Filter {
    pub min_regular_words: usize,
    pub banned_tag_substrings: Vec<String>,
    pub collection_tags: Vec<String>,
    pub internal_link_allowlist: Vec<String>,
}

impl Default for Filter {
    fn default() -> Self {
        let d = FilterConfig::default();
        Filter {
            min_regular_words: d.min_regular_words,
            banned_tag_substrings: d.banned_tag_substrings,
            collection_tags: d.collection_tags,
            internal_link_allowlist: d.internal_link_allowlist,
        }
    }
}

impl Filter {
    pub fn to_core(&self) -> FilterConfig {
        FilterConfig {
            min_regular_words: self.min_regular_words,
            banned_tag_substrings: self.banned_tag_substrings.clone(),
            collection_tags: self.collection_tags.clone(),
            internal_link_allowlist: self.internal_link_allowlist.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Synth {
    pub n: usize,
    pub q: f64,
    pub avr_dim: usize,
    pub avr_noise: f64,
    pub noise_concepts: usize,
    pub platform: String,
}

impl Default for Synth {
    fn default() -> Self {
        let d = SynthParams::default();
        Synth {
            n: 2000,
            q: d.q,
            avr_dim: d.avr_dim,
            avr_noise: d.avr_noise,
            noise_concepts: d.noise_concepts,
            platform: d.platform.code().to_string(),
        }
    }
}

impl Synth {
    pub fn to_core(&self) -> Result<SynthParams> {
        Ok(SynthParams {
            q: self.q,
            avr_dim: self.avr_dim,
            avr_noise: self.avr_noise,
            noise_concepts: self.noise_concepts,
            platform: Platform::from_code(&self.platform)?,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Images {
    /// "union_mean" pools every image of a post; "first" keeps only the first.
    pub multi: String,
    pub confidence_threshold: f64,
}

impl Default for Images {
    fn default() -> Self {
        Images {
            multi: "union_mean".to_string(),
            confidence_threshold: 0.0,
        }
    }
}

impl Images {
    pub fn to_core(&self) -> Result<ImagePolicy> {
        let multi = match self.multi.as_str() {
            "union_mean" => MultiImagePolicy::UnionMean,
            "first" => MultiImagePolicy::FirstImage,
            other => {
                return Err(Error::InvalidConfig(format!(
                    "unknown multi-image policy `{other}` (expected union_mean or first)"
                )))
            }
        };
        Ok(ImagePolicy {
            multi,
            confidence_threshold: self.confidence_threshold,
        })
    }
}

/// File names recognized under `paths.lexicons_dir`. Each is optional.
const LEXICON_FILES: [&str; 10] = [
    "word_freq.tsv",
    "formality.tsv",
    "sentiment.tsv",
    "subjectivity.tsv",
    "hedges.txt",
    "contractions.txt",
    "pronouns_first.txt",
    "pronouns_third.txt",
    "irregular_participles.txt",
    "syllable_exceptions.tsv",
];

impl RunConfig {
    pub fn load(path: Option<&std::path::Path>) -> Result<RunConfig> {
        match path {
            None => Ok(RunConfig::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)?;
                toml::from_str(&text)
                    .map_err(|e| Error::InvalidConfig(format!("{}: {e}", p.display())))
            }
        }
    }

    /// Canonical serialization of the resolved config (after flag overrides).
    /// Hashing this, rather than the file, makes the manifest reflect what
    /// actually ran.
    pub fn canonical(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::InvalidConfig(format!("config serialize: {e}")))
    }

    pub fn require<'a>(field: &'a Option<PathBuf>, name: &str) -> Result<&'a PathBuf> {
        let p = field
            .as_ref()
            .ok_or_else(|| Error::InvalidConfig(format!("config is missing paths.{name}")))?;
        if !p.is_file() {
            return Err(Error::InvalidConfig(format!(
                "paths.{name} does not exist: {}",
                p.display()
            )));
        }
        Ok(p)
    }

    /// Lexicons and embeddings. Built-in closed-class word lists are the
    /// floor; files under `lexicons_dir` (each optional) override or extend.
    pub fn load_resources(&self) -> Result<LexResources> {
        let mut res = LexResources::builtin();
        if let Some(dir) = &self.paths.lexicons_dir {
            if !dir.is_dir() {
                return Err(Error::InvalidConfig(format!(
                    "paths.lexicons_dir does not exist: {}",
                    dir.display()
                )));
            }
            let file = |name: &str| {
                let p = dir.join(name);
                p.is_file().then_some(p)
            };
            if let Some(p) = file("word_freq.tsv") {
                res.word_log_freq = load_frequency_map(p, FreqScale::LnOfCount)?;
            }
            if let Some(p) = file("formality.tsv") {
                res.formality = load_score_map(p)?;
            }
            if let Some(p) = file("sentiment.tsv") {
                res.sentiment = load_score_map(p)?;
            }
            if let Some(p) = file("subjectivity.tsv") {
                res.subjectivity = load_score_map(p)?;
            }
            if let Some(p) = file("hedges.txt") {
                res.hedges = load_word_set(p)?;
            }
            if let Some(p) = file("contractions.txt") {
                res.contractions = load_word_set(p)?;
            }
            if let Some(p) = file("pronouns_first.txt") {
                res.pronouns_first = load_word_set(p)?;
            }
            if let Some(p) = file("pronouns_third.txt") {
                res.pronouns_third = load_word_set(p)?;
            }
            if let Some(p) = file("irregular_participles.txt") {
                res.irregular_participles = load_word_set(p)?;
            }
            if let Some(p) = file("syllable_exceptions.tsv") {
                res.syllable_exceptions = load_syllable_exceptions(p)?;
            }
        }
        if let Some(p) = &self.paths.embeddings {
            if !p.is_file() {
                return Err(Error::InvalidConfig(format!(
                    "paths.embeddings does not exist: {}",
                    p.display()
                )));
            }
            res.embeddings = Embeddings::from_file(p)?;
        }
        Ok(res)
    }

    /// Every resource file that exists, for manifest input hashing.
    pub fn resource_inputs(&self) -> Vec<PathBuf> {
        let mut v = Vec::new();
        if let Some(dir) = &self.paths.lexicons_dir {
            for name in LEXICON_FILES {
                let p = dir.join(name);
                if p.is_file() {
                    v.push(p);
                }
            }
        }
        if let Some(p) = &self.paths.embeddings {
            v.push(p.clone());
        }
        v
    }

    /// Loads the image feature store when the config points at one.
    /// `needed` turns a missing store into an error instead of `None`.
    pub fn load_store(&self, needed: bool) -> Result<Option<FeatureStore>> {
        let Some(vocab_path) = &self.paths.concept_vocab else {
            if needed {
                return Err(Error::InvalidConfig(
                    "config is missing paths.concept_vocab".into(),
                ));
            }
            return Ok(None);
        };
        let exists = |p: &PathBuf, name: &str| -> Result<()> {
            if p.is_file() {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!(
                    "paths.{name} does not exist: {}",
                    p.display()
                )))
            }
        };
        exists(vocab_path, "concept_vocab")?;
        let vocab = ConceptVocab::from_file(vocab_path)?;
        let mut store = FeatureStore::new(vocab);
        if let Some(p) = &self.paths.concepts {
            exists(p, "concepts")?;
            store.load_concepts_file(p)?;
        }
        if let Some(p) = &self.paths.avr {
            exists(p, "avr")?;
            store.load_avr_file(p, None)?;
        }
        Ok(Some(store))
    }
}
