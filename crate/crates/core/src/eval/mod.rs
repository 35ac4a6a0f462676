//! Evaluation protocol.
//!
//! Experiments follow a fixed recipe per platform: split the labeled posts
//! into balanced halves, train on one half, report accuracy on held-out
//! posts. The held-out posts are either the other half of the split (the
//! "silver" labels that come from collection) or a re-judged gold set at one
//! of three agreement levels; gold evaluation reuses the silver-trained
//! model and never tests on a post the model saw in training.
//!
//! Grid cells (feature set x platform) are independent; they may be
//! computed on worker threads, and the report assembles them in a fixed
//! order regardless of completion order.

mod report;
mod synth;

pub use report::{render_table, write_kv, Report, ReportCell};
pub use synth::{synth_incongruity_corpus, SynthCorpus, SynthParams};

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Mutex;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::annotate::{GoldSet, GoldThreshold};
use crate::corpus::{Label, Platform, Post};
use crate::error::{Error, Result};
use crate::featvec::{concat, FeatureVector};
use crate::fusionnet::{self, Example, NetConfig, NetMode, NetTrainConfig};
use crate::svm::{self, TrainConfig};
use crate::textfeat::{
    build_ngram_vocab, build_unigram_vocab, combination_features, embedding_feature,
    lexical_features, ngram_features, subjectivity_features, LexResources, NgramVocab,
};
use crate::visfeat::{post_image_blocks, FeatureStore, ImagePolicy};

/// Which fusion method an experiment exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Feature concatenation into the linear hinge-loss classifier.
    SvmFusion,
    /// The two-branch network.
    DeepFusion,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::SvmFusion => "svm_fusion",
            Method::DeepFusion => "deep_fusion",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "svm_fusion" | "svm" => Ok(Method::SvmFusion),
            "deep_fusion" | "deep" => Ok(Method::DeepFusion),
            other => Err(Error::InvalidConfig(format!("unknown method `{other}`"))),
        }
    }
}

/// Feature-set rows of the experiment tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureSet {
    Lexical,
    Subjectivity,
    Ngrams,
    Word2vec,
    Combination,
    VsfOnly,
    NgramsVsf,
    CombinationVsf,
    Unigram,
    AvrOnly,
    UnigramAvr,
}

impl FeatureSet {
    pub fn name(&self) -> &'static str {
        match self {
            FeatureSet::Lexical => "lexical",
            FeatureSet::Subjectivity => "subjectivity",
            FeatureSet::Ngrams => "ngrams",
            FeatureSet::Word2vec => "word2vec",
            FeatureSet::Combination => "combination",
            FeatureSet::VsfOnly => "vsf_only",
            FeatureSet::NgramsVsf => "ngrams+vsf",
            FeatureSet::CombinationVsf => "combination+vsf",
            FeatureSet::Unigram => "unigram",
            FeatureSet::AvrOnly => "avr_only",
            FeatureSet::UnigramAvr => "unigram+avr",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::all()
            .into_iter()
            .find(|f| f.name() == name)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown feature set `{name}`")))
    }

    pub fn all() -> [FeatureSet; 11] {
        [
            FeatureSet::Lexical,
            FeatureSet::Subjectivity,
            FeatureSet::Ngrams,
            FeatureSet::Word2vec,
            FeatureSet::Combination,
            FeatureSet::VsfOnly,
            FeatureSet::NgramsVsf,
            FeatureSet::CombinationVsf,
            FeatureSet::Unigram,
            FeatureSet::AvrOnly,
            FeatureSet::UnigramAvr,
        ]
    }

    pub fn valid_for(&self, method: Method) -> bool {
        use FeatureSet::*;
        match method {
            Method::SvmFusion => !matches!(self, Unigram | AvrOnly | UnigramAvr),
            Method::DeepFusion => matches!(self, Unigram | AvrOnly | UnigramAvr),
        }
    }

    pub fn needs_ngram_vocab(&self) -> bool {
        use FeatureSet::*;
        matches!(self, Ngrams | Combination | NgramsVsf | CombinationVsf)
    }

    pub fn needs_unigram_vocab(&self) -> bool {
        use FeatureSet::*;
        matches!(self, Unigram | UnigramAvr)
    }

    pub fn needs_store(&self) -> bool {
        use FeatureSet::*;
        matches!(self, VsfOnly | NgramsVsf | CombinationVsf | AvrOnly | UnigramAvr)
    }

    pub fn net_mode(&self) -> Option<NetMode> {
        match self {
            FeatureSet::Unigram => Some(NetMode::TextOnly),
            FeatureSet::AvrOnly => Some(NetMode::ImageOnly),
            FeatureSet::UnigramAvr => Some(NetMode::Fusion),
            _ => None,
        }
    }
}

impl std::fmt::Display for FeatureSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Which labels the held-out posts carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Collection labels on the held-out half of the split.
    Silver,
    /// Re-judged posts at the given agreement level.
    GoldD50,
    GoldD80,
    GoldD100,
}

impl Regime {
    pub fn name(&self) -> &'static str {
        match self {
            Regime::Silver => "silver",
            Regime::GoldD50 => "gold_d50",
            Regime::GoldD80 => "gold_d80",
            Regime::GoldD100 => "gold_d100",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "silver" => Ok(Regime::Silver),
            "gold_d50" => Ok(Regime::GoldD50),
            "gold_d80" => Ok(Regime::GoldD80),
            "gold_d100" => Ok(Regime::GoldD100),
            other => Err(Error::InvalidConfig(format!("unknown regime `{other}`"))),
        }
    }

    pub fn gold_threshold(&self) -> Option<GoldThreshold> {
        match self {
            Regime::Silver => None,
            Regime::GoldD50 => Some(GoldThreshold::D50),
            Regime::GoldD80 => Some(GoldThreshold::D80),
            Regime::GoldD100 => Some(GoldThreshold::D100),
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// What to run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub method: Method,
    pub feature_sets: Vec<FeatureSet>,
    pub split_ratio: f64,
    pub seed: u64,
    pub regime: Regime,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.split_ratio > 0.0 && self.split_ratio < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "split_ratio must be in (0, 1), got {}",
                self.split_ratio
            )));
        }
        if self.feature_sets.is_empty() {
            return Err(Error::InvalidConfig("no feature sets requested".into()));
        }
        for fs in &self.feature_sets {
            if !fs.valid_for(self.method) {
                return Err(Error::InvalidConfig(format!(
                    "feature set `{fs}` is not defined for method `{}`",
                    self.method.name()
                )));
            }
        }
        Ok(())
    }
}

/// Data and hyperparameters an experiment runs against.
pub struct ExperimentContext<'a> {
    pub posts: &'a [Post],
    pub store: Option<&'a FeatureStore>,
    pub resources: &'a LexResources,
    /// Required for gold regimes.
    pub gold: Option<&'a GoldSet>,
    /// Classifier knobs; the experiment seed overrides the trainer seeds.
    pub svm: TrainConfig,
    pub net: NetTrainConfig,
    /// Hidden width of the network's text branch.
    pub net_hidden: usize,
    /// Image vector dimension when the store does not pin one.
    pub image_dim_default: usize,
    pub ngram_min_count: usize,
    pub image_policy: ImagePolicy,
    /// Worker threads for grid cells. 1 runs sequentially.
    pub threads: usize,
}

impl<'a> ExperimentContext<'a> {
    pub fn new(posts: &'a [Post], resources: &'a LexResources) -> Self {
        ExperimentContext {
            posts,
            store: None,
            resources,
            gold: None,
            svm: TrainConfig::default(),
            net: NetTrainConfig::default(),
            net_hidden: 512,
            image_dim_default: 4096,
            ngram_min_count: 1,
            image_policy: ImagePolicy::default(),
            threads: 1,
        }
    }
}

/// Stratified split: per class, a seeded shuffle puts `floor(ratio * n)`
/// posts in train and the rest in test. Every input post lands in exactly
/// one side. Unlabeled posts are not splittable and error.
pub fn balanced_split(posts: &[Post], ratio: f64, seed: u64) -> Result<(Vec<Post>, Vec<Post>)> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "split ratio must be in (0, 1), got {ratio}"
        )));
    }
    let mut by_class: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for (i, p) in posts.iter().enumerate() {
        match p.label {
            Label::Sarcastic => by_class[0].push(i),
            Label::NonSarcastic => by_class[1].push(i),
            Label::Unlabeled => {
                return Err(Error::InvalidConfig(format!(
                    "post `{}` is unlabeled; splits need labeled posts",
                    p.id
                )))
            }
        }
    }
    for class in &by_class {
        if class.len() < 2 {
            return Err(Error::InvalidConfig(format!(
                "each class needs at least 2 posts, got {} and {}",
                by_class[0].len(),
                by_class[1].len()
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for class in &mut by_class {
        class.shuffle(&mut rng);
        let n_train = (ratio * class.len() as f64).floor() as usize;
        for (k, &i) in class.iter().enumerate() {
            if k < n_train {
                train.push(posts[i].clone());
            } else {
                test.push(posts[i].clone());
            }
        }
    }
    Ok((train, test))
}

/// Fraction of predictions equal to labels.
pub fn accuracy(preds: &[i8], labels: &[i8]) -> Result<f64> {
    if preds.is_empty() {
        return Err(Error::EmptyInput("predictions"));
    }
    if preds.len() != labels.len() {
        return Err(Error::DimMismatch {
            expected: labels.len(),
            got: preds.len(),
        });
    }
    let matches = preds.iter().zip(labels).filter(|(p, l)| p == l).count();
    Ok(matches as f64 / preds.len() as f64)
}

fn sign_label(label: Label) -> i8 {
    match label {
        Label::Sarcastic => 1,
        _ => -1,
    }
}

/// Resolves a gold set against a platform's posts: positives get +1,
/// negatives -1, ids seen in training are dropped (returned as a count),
/// ids not present among `posts_by_id` are skipped.
pub fn resolve_gold_test<'a>(
    gold: &GoldSet,
    train_ids: &HashSet<&str>,
    posts_by_id: &HashMap<&str, &'a Post>,
) -> (Vec<(&'a Post, i8)>, usize) {
    let mut out = Vec::new();
    let mut dropped = 0usize;
    for (ids, label) in [(&gold.positives, 1i8), (&gold.negatives, -1i8)] {
        for id in ids {
            match posts_by_id.get(id.as_str()) {
                Some(p) if train_ids.contains(id.as_str()) => {
                    let _ = p;
                    dropped += 1;
                }
                Some(p) => out.push((*p, label)),
                None => {}
            }
        }
    }
    (out, dropped)
}

/// Per-platform data shared by that platform's grid cells.
struct PlatformData {
    platform: Platform,
    train: Vec<Post>,
    /// Held-out posts with the labels the regime assigns them.
    test: Vec<(Post, i8)>,
    dropped_overlap: usize,
    ngram_vocab: Option<NgramVocab>,
    unigram_vocab: Option<NgramVocab>,
}

/// Assembles the linear-classifier input a feature set prescribes for one
/// post. `vocab` is required for the n-gram based sets; the context supplies
/// lexicons, the image store and the image policy.
pub fn svm_features(
    fs: FeatureSet,
    post: &Post,
    vocab: Option<&NgramVocab>,
    ctx: &ExperimentContext,
) -> Result<FeatureVector> {
    let res = ctx.resources;
    let vsf = |post: &Post| -> Result<FeatureVector> {
        let store = ctx.store.ok_or_else(|| {
            Error::InvalidConfig(format!("feature set `{fs}` needs an image feature store"))
        })?;
        let (vsf, _) = post_image_blocks(post, store, &ctx.image_policy)?;
        Ok(FeatureVector::from_block(vsf))
    };
    let ngrams = |post: &Post| -> Result<FeatureVector> {
        let vocab = vocab.expect("ngram vocabulary prepared for this cell");
        Ok(FeatureVector::from_block(ngram_features(post, vocab)))
    };
    match fs {
        FeatureSet::Lexical => Ok(FeatureVector::from_block(lexical_features(post, res))),
        FeatureSet::Subjectivity => {
            Ok(FeatureVector::from_block(subjectivity_features(post, res)))
        }
        FeatureSet::Ngrams => ngrams(post),
        FeatureSet::Word2vec => Ok(FeatureVector::from_block(embedding_feature(post, res))),
        FeatureSet::Combination => {
            let vocab = vocab.expect("ngram vocabulary prepared for this cell");
            combination_features(post, vocab, res)
        }
        FeatureSet::VsfOnly => vsf(post),
        FeatureSet::NgramsVsf => concat([ngrams(post)?, vsf(post)?]),
        FeatureSet::CombinationVsf => {
            let vocab = vocab.expect("ngram vocabulary prepared for this cell");
            concat([combination_features(post, vocab, res)?, vsf(post)?])
        }
        _ => Err(Error::InvalidConfig(format!(
            "feature set `{fs}` is not an svm feature set"
        ))),
    }
}

/// Builds one network training example: sparse unigram indices for the text
/// branch and the dense image vector, as the feature set prescribes.
pub fn deep_example(
    fs: FeatureSet,
    post: &Post,
    label01: usize,
    vocab: Option<&NgramVocab>,
    ctx: &ExperimentContext,
) -> Result<Example> {
    let text = if fs.needs_unigram_vocab() {
        let vocab = vocab.expect("unigram vocabulary prepared for this cell");
        match ngram_features(post, vocab).value {
            crate::featvec::BlockValue::Sparse { indices, .. } => indices,
            _ => unreachable!("ngram features are sparse"),
        }
    } else {
        Vec::new()
    };
    let avr = if matches!(fs, FeatureSet::AvrOnly | FeatureSet::UnigramAvr) {
        let store = ctx.store.ok_or_else(|| {
            Error::InvalidConfig(format!("feature set `{fs}` needs an image feature store"))
        })?;
        let (_, avr) = post_image_blocks(post, store, &ctx.image_policy)?;
        match avr {
            Some(block) => match block.value {
                crate::featvec::BlockValue::Dense(v) => v,
                _ => unreachable!("image vectors are dense"),
            },
            None => {
                return Err(Error::MissingImage(format!(
                    "post `{}` has no dense image vectors",
                    post.id
                )))
            }
        }
    } else {
        Vec::new()
    };
    Ok(Example {
        text,
        avr,
        label: label01,
    })
}

/// Computes one grid cell: train on the platform's train split with the
/// cell's feature set, evaluate on the regime's held-out posts.
fn run_cell(
    cfg: &ExperimentConfig,
    ctx: &ExperimentContext,
    pd: &PlatformData,
    fs: FeatureSet,
) -> Result<ReportCell> {
    if pd.test.is_empty() {
        return Err(Error::EmptyInput("held-out posts"));
    }
    let accuracy_value = match cfg.method {
        Method::SvmFusion => {
            let vocab = pd.ngram_vocab.as_ref();
            let inputs: Vec<FeatureVector> = pd
                .train
                .iter()
                .map(|p| svm_features(fs, p, vocab, ctx))
                .collect::<Result<_>>()?;
            let labels: Vec<i8> = pd.train.iter().map(|p| sign_label(p.label)).collect();
            let svm_cfg = TrainConfig {
                seed: cfg.seed,
                ..ctx.svm.clone()
            };
            let model = svm::train(&inputs, &labels, &svm_cfg)?;
            let mut preds = Vec::with_capacity(pd.test.len());
            let mut truth = Vec::with_capacity(pd.test.len());
            for (post, label) in &pd.test {
                let x = svm_features(fs, post, vocab, ctx)?;
                preds.push(svm::predict(&model, &x)?);
                truth.push(*label);
            }
            accuracy(&preds, &truth)?
        }
        Method::DeepFusion => {
            let vocab = pd.unigram_vocab.as_ref();
            let examples: Vec<Example> = pd
                .train
                .iter()
                .map(|p| {
                    let y = (sign_label(p.label) == 1) as usize;
                    deep_example(fs, p, y, vocab, ctx)
                })
                .collect::<Result<_>>()?;
            let image_dim = ctx
                .store
                .and_then(|s| s.avr_dim())
                .unwrap_or(ctx.image_dim_default);
            let net_cfg = NetConfig {
                text_vocab: vocab.map_or(0, |v| v.len()),
                hidden: ctx.net_hidden,
                image_dim,
            };
            let train_cfg = NetTrainConfig {
                mode: fs.net_mode().expect("deep feature set has a mode"),
                seed: cfg.seed,
                ..ctx.net.clone()
            };
            let (net, _) = fusionnet::train(&examples, net_cfg, &train_cfg)?;
            let mut preds = Vec::with_capacity(pd.test.len());
            let mut truth = Vec::with_capacity(pd.test.len());
            for (post, label) in &pd.test {
                let ex = deep_example(fs, post, 0, vocab, ctx)?;
                let class = net.predict(&ex.text, &ex.avr)?;
                preds.push(if class == 1 { 1 } else { -1 });
                truth.push(*label);
            }
            accuracy(&preds, &truth)?
        }
    };
    Ok(ReportCell {
        feature_set: fs,
        platform: pd.platform,
        regime: cfg.regime,
        accuracy: accuracy_value,
        n_train: pd.train.len(),
        n_test: pd.test.len(),
        dropped_overlap: pd.dropped_overlap,
    })
}

/// Runs the full grid: every requested feature set on every platform that
/// has labeled posts. Returns one cell per (feature set, platform) pair.
pub fn run_experiment(cfg: &ExperimentConfig, ctx: &ExperimentContext) -> Result<Report> {
    cfg.validate()?;
    if let Some(fs) = cfg
        .feature_sets
        .iter()
        .find(|f| f.needs_store() && ctx.store.is_none())
    {
        return Err(Error::InvalidConfig(format!(
            "feature set `{fs}` needs an image feature store"
        )));
    }
    if let Some(t) = cfg.regime.gold_threshold() {
        let gold = ctx
            .gold
            .ok_or_else(|| Error::InvalidConfig("gold regime needs a gold set".into()))?;
        if gold.threshold != t {
            return Err(Error::InvalidConfig(format!(
                "gold set was built at {} but the regime wants {}",
                gold.threshold.as_real(),
                t.as_real()
            )));
        }
    }
    let labeled: Vec<&Post> = ctx
        .posts
        .iter()
        .filter(|p| p.label != Label::Unlabeled)
        .collect();
    if labeled.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let platforms: BTreeSet<Platform> = labeled.iter().map(|p| p.platform).collect();

    let needs_ngrams = cfg.feature_sets.iter().any(|f| f.needs_ngram_vocab());
    let needs_unigrams = cfg.feature_sets.iter().any(|f| f.needs_unigram_vocab());

    let mut platform_data = Vec::new();
    for &platform in &platforms {
        let plat_posts: Vec<Post> = labeled
            .iter()
            .filter(|p| p.platform == platform)
            .map(|&p| p.clone())
            .collect();
        let (train, silver_test) = balanced_split(&plat_posts, cfg.split_ratio, cfg.seed)?;
        let ngram_vocab = if needs_ngrams {
            Some(build_ngram_vocab(&train, ctx.ngram_min_count)?)
        } else {
            None
        };
        let unigram_vocab = if needs_unigrams {
            Some(build_unigram_vocab(&train, ctx.ngram_min_count)?)
        } else {
            None
        };
        let (test, dropped_overlap) = match cfg.regime {
            Regime::Silver => (
                silver_test
                    .into_iter()
                    .map(|p| {
                        let y = sign_label(p.label);
                        (p, y)
                    })
                    .collect(),
                0,
            ),
            _ => {
                let gold = ctx.gold.expect("checked above");
                let train_ids: HashSet<&str> =
                    train.iter().map(|p| p.id.as_str()).collect();
                // Gold labels come from the judged set, so resolution runs
                // over every post of the platform, silver-labeled or not.
                let platform_posts: HashMap<&str, &Post> = ctx
                    .posts
                    .iter()
                    .filter(|p| p.platform == platform)
                    .map(|p| (p.id.as_str(), p))
                    .collect();
                let (test, dropped) = resolve_gold_test(gold, &train_ids, &platform_posts);
                (
                    test.into_iter().map(|(p, y)| (p.clone(), y)).collect(),
                    dropped,
                )
            }
        };
        platform_data.push(PlatformData {
            platform,
            train,
            test,
            dropped_overlap,
            ngram_vocab,
            unigram_vocab,
        });
    }

    // One cell per (feature set, platform), in report order.
    let specs: Vec<(usize, usize)> = cfg
        .feature_sets
        .iter()
        .enumerate()
        .flat_map(|(fi, _)| (0..platform_data.len()).map(move |pi| (fi, pi)))
        .collect();

    let workers = ctx.threads.max(1).min(specs.len().max(1));
    let results: Mutex<Vec<Option<Result<ReportCell>>>> =
        Mutex::new((0..specs.len()).map(|_| None).collect());
    if workers <= 1 {
        let mut slots = results.lock().unwrap();
        for (k, &(fi, pi)) in specs.iter().enumerate() {
            slots[k] = Some(run_cell(cfg, ctx, &platform_data[pi], cfg.feature_sets[fi]));
        }
    } else {
        std::thread::scope(|scope| {
            for w in 0..workers {
                let specs = &specs;
                let results = &results;
                let platform_data = &platform_data;
                scope.spawn(move || {
                    for (k, &(fi, pi)) in specs.iter().enumerate() {
                        if k % workers != w {
                            continue;
                        }
                        let cell = run_cell(cfg, ctx, &platform_data[pi], cfg.feature_sets[fi]);
                        results.lock().unwrap()[k] = Some(cell);
                    }
                });
            }
        });
    }
    let mut cells = Vec::with_capacity(specs.len());
    for slot in results.into_inner().unwrap() {
        cells.push(slot.expect("every cell computed")?);
    }
    Ok(Report {
        method: cfg.method,
        regime: cfg.regime,
        seed: cfg.seed,
        split_ratio: cfg.split_ratio,
        cells,
        timings_ms: Vec::new(),
    })
}
