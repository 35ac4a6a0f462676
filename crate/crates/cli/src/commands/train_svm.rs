use std::path::Path;

use sarcdet::corpus::read_corpus;
use sarcdet::error::{Error, Result};
use sarcdet::eval::{svm_features, ExperimentContext, Method};
use sarcdet::svm::{self, write_model};
use sarcdet::textfeat::build_ngram_vocab;
use sarcdet::FeatureVector;

use super::{add_resource_inputs, add_store_inputs, labeled};
use crate::config::RunConfig;
use crate::manifest::Manifest;

/// Trains the linear classifier on every labeled post of the corpus and
/// writes the model plus the n-gram vocabulary it was built over.
pub fn run(cfg: &RunConfig, out: &Path, seed: u64, man: &mut Manifest) -> Result<()> {
    let corpus_path = RunConfig::require(&cfg.paths.corpus, "corpus")?;
    man.add_input(corpus_path)?;
    let posts = read_corpus(corpus_path)?;
    let (train_posts, labels) = labeled(posts);
    if train_posts.is_empty() {
        return Err(Error::EmptyCorpus);
    }

    let set = cfg.experiment.primary_feature_set()?;
    if !set.valid_for(Method::SvmFusion) {
        return Err(Error::InvalidConfig(format!(
            "feature set `{}` cannot feed the linear classifier",
            set.name()
        )));
    }
    add_resource_inputs(cfg, man)?;
    let res = cfg.load_resources()?;
    let store = cfg.load_store(set.needs_store())?;
    if store.is_some() {
        add_store_inputs(cfg, man)?;
    }
    let vocab = set
        .needs_ngram_vocab()
        .then(|| build_ngram_vocab(&train_posts, cfg.experiment.ngram_min_count))
        .transpose()?;

    let mut ctx = ExperimentContext::new(&train_posts, &res);
    ctx.store = store.as_ref();
    ctx.image_policy = cfg.images.to_core()?;

    let inputs: Vec<FeatureVector> = train_posts
        .iter()
        .map(|p| svm_features(set, p, vocab.as_ref(), &ctx))
        .collect::<Result<_>>()?;
    let model = svm::train(&inputs, &labels, &cfg.svm.to_core(seed))?;

    write_model(out.join("model.svm"), &model)?;
    man.add_output(out, "model.svm")?;
    if let Some(v) = &vocab {
        v.save(out.join("ngram_vocab.txt"))?;
        man.add_output(out, "ngram_vocab.txt")?;
    }
    println!(
        "feature_set={} examples={} dim={}",
        set.name(),
        inputs.len(),
        model.weights.len()
    );
    Ok(())
}
