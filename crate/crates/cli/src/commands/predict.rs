use std::fs;
use std::path::Path;

use sarcdet::corpus::read_corpus;
use sarcdet::error::{Error, Result};
use sarcdet::eval::{deep_example, svm_features, ExperimentContext, FeatureSet, Method};
use sarcdet::fusionnet::{read_checkpoint, NetMode};
use sarcdet::svm::{self, read_model};
use sarcdet::textfeat::{
    LexResources, NgramVocab, EMBEDDING_BLOCK, LEXICAL_BLOCK, NGRAM_BLOCK, READABILITY_BLOCK,
    SUBJECTIVITY_BLOCK,
};
use sarcdet::visfeat::VSF_BLOCK;
use sarcdet::Layout;

use super::add_store_inputs;
use crate::config::RunConfig;
use crate::manifest::Manifest;

/// Recovers the feature set a linear model was trained with from the block
/// names in its layout. The mapping is injective over the sets the trainer
/// accepts, so a stored layout names exactly one set.
fn feature_set_from_layout(layout: &Layout) -> Result<FeatureSet> {
    let names: Vec<&str> = layout.entries().iter().map(|e| e.name.as_str()).collect();
    let combination = [NGRAM_BLOCK, EMBEDDING_BLOCK, READABILITY_BLOCK];
    let set = if names == [LEXICAL_BLOCK] {
        FeatureSet::Lexical
    } else if names == [SUBJECTIVITY_BLOCK] {
        FeatureSet::Subjectivity
    } else if names == [NGRAM_BLOCK] {
        FeatureSet::Ngrams
    } else if names == [EMBEDDING_BLOCK] {
        FeatureSet::Word2vec
    } else if names == combination {
        FeatureSet::Combination
    } else if names == [VSF_BLOCK] {
        FeatureSet::VsfOnly
    } else if names == [NGRAM_BLOCK, VSF_BLOCK] {
        FeatureSet::NgramsVsf
    } else if names == [NGRAM_BLOCK, EMBEDDING_BLOCK, READABILITY_BLOCK, VSF_BLOCK] {
        FeatureSet::CombinationVsf
    } else {
        return Err(Error::BadModelFile(format!(
            "unrecognized feature layout `{}`",
            names.join("+")
        )));
    };
    Ok(set)
}

fn write_predictions(out: &Path, lines: &str, man: &mut Manifest) -> Result<()> {
    fs::write(out.join("predictions.tsv"), lines)?;
    man.add_output(out, "predictions.tsv")
}

fn label_name(sign: i8) -> &'static str {
    if sign == 1 {
        "sarcastic"
    } else {
        "non_sarcastic"
    }
}

/// Labels every post of the corpus with a previously trained model. The
/// model kind follows the configured method: a linear model file or a
/// network checkpoint.
pub fn run(cfg: &RunConfig, out: &Path, man: &mut Manifest) -> Result<()> {
    let corpus_path = RunConfig::require(&cfg.paths.corpus, "corpus")?;
    man.add_input(corpus_path)?;
    let posts = read_corpus(corpus_path)?;
    match cfg.experiment.method()? {
        Method::SvmFusion => predict_svm(cfg, out, &posts, man),
        Method::DeepFusion => predict_net(cfg, out, &posts, man),
    }
}

fn predict_svm(
    cfg: &RunConfig,
    out: &Path,
    posts: &[sarcdet::corpus::Post],
    man: &mut Manifest,
) -> Result<()> {
    let model_path = RunConfig::require(&cfg.paths.model, "model")?;
    man.add_input(model_path)?;
    let model = read_model(model_path)?;
    let set = feature_set_from_layout(&model.layout)?;

    let vocab = if set.needs_ngram_vocab() {
        let vocab_path = RunConfig::require(&cfg.paths.vocab, "vocab")?;
        man.add_input(vocab_path)?;
        let v = NgramVocab::load(vocab_path)?;
        let entry = model
            .layout
            .entries()
            .iter()
            .find(|e| e.name == NGRAM_BLOCK)
            .expect("layout names an n-gram block");
        if v.len() != entry.dim {
            return Err(Error::DimMismatch {
                expected: entry.dim,
                got: v.len(),
            });
        }
        Some(v)
    } else {
        None
    };
    super::add_resource_inputs(cfg, man)?;
    let res = cfg.load_resources()?;
    let store = cfg.load_store(set.needs_store())?;
    if store.is_some() {
        add_store_inputs(cfg, man)?;
    }
    let mut ctx = ExperimentContext::new(posts, &res);
    ctx.store = store.as_ref();
    ctx.image_policy = cfg.images.to_core()?;

    let mut lines = String::new();
    for post in posts {
        let x = svm_features(set, post, vocab.as_ref(), &ctx)?;
        let sign = svm::predict(&model, &x)?;
        lines.push_str(&format!("{}\t{}\n", post.id, label_name(sign)));
    }
    write_predictions(out, &lines, man)?;
    println!("predicted {} posts with `{}` features", posts.len(), set.name());
    Ok(())
}

fn predict_net(
    cfg: &RunConfig,
    out: &Path,
    posts: &[sarcdet::corpus::Post],
    man: &mut Manifest,
) -> Result<()> {
    let ckpt_path = RunConfig::require(&cfg.paths.checkpoint, "checkpoint")?;
    man.add_input(ckpt_path)?;
    let ckpt = read_checkpoint(ckpt_path)?;
    let set = match ckpt.net.mode() {
        NetMode::TextOnly => FeatureSet::Unigram,
        NetMode::ImageOnly => FeatureSet::AvrOnly,
        NetMode::Fusion => FeatureSet::UnigramAvr,
    };

    let vocab = if set.needs_unigram_vocab() {
        let vocab_path = RunConfig::require(&cfg.paths.vocab, "vocab")?;
        man.add_input(vocab_path)?;
        let v = NgramVocab::load(vocab_path)?;
        if v.fingerprint() != ckpt.vocab_fingerprint {
            return Err(Error::BadModelFile(
                "vocabulary does not match the checkpoint".into(),
            ));
        }
        Some(v)
    } else {
        None
    };
    let store = cfg.load_store(set.needs_store())?;
    if store.is_some() {
        add_store_inputs(cfg, man)?;
    }
    let res = LexResources::builtin();
    let mut ctx = ExperimentContext::new(posts, &res);
    ctx.store = store.as_ref();
    ctx.image_policy = cfg.images.to_core()?;

    let mut lines = String::new();
    for post in posts {
        let ex = deep_example(set, post, 0, vocab.as_ref(), &ctx)?;
        let class = ckpt.net.predict(&ex.text, &ex.avr)?;
        lines.push_str(&format!(
            "{}\t{}\n",
            post.id,
            label_name(if class == 1 { 1 } else { -1 })
        ));
    }
    write_predictions(out, &lines, man)?;
    println!(
        "predicted {} posts in {} mode",
        posts.len(),
        super::train_net::mode_name(ckpt.net.mode())
    );
    Ok(())
}
