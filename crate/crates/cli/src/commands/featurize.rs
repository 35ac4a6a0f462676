use std::fs;
use std::path::Path;

use sarcdet::corpus::read_corpus;
use sarcdet::error::{Error, Result};
use sarcdet::eval::{svm_features, ExperimentContext, Method};
use sarcdet::textfeat::build_ngram_vocab;

use super::{add_resource_inputs, add_store_inputs};
use crate::config::RunConfig;
use crate::manifest::Manifest;

/// Writes the linear feature vector of every post, one line per post:
/// `id<TAB>index:value index:value ...` in sparse form.
pub fn run(cfg: &RunConfig, out: &Path, man: &mut Manifest) -> Result<()> {
    let corpus_path = RunConfig::require(&cfg.paths.corpus, "corpus")?;
    man.add_input(corpus_path)?;
    let posts = read_corpus(corpus_path)?;

    let set = cfg.experiment.primary_feature_set()?;
    if !set.valid_for(Method::SvmFusion) {
        return Err(Error::InvalidConfig(format!(
            "feature set `{}` is a network input; featurize writes linear feature vectors",
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
        .then(|| build_ngram_vocab(&posts, cfg.experiment.ngram_min_count))
        .transpose()?;

    let mut ctx = ExperimentContext::new(&posts, &res);
    ctx.store = store.as_ref();
    ctx.image_policy = cfg.images.to_core()?;

    let mut lines = String::new();
    let mut dim = 0;
    for post in &posts {
        let v = svm_features(set, post, vocab.as_ref(), &ctx)?;
        dim = v.total_dim();
        let pairs: Vec<String> = v.nonzero().map(|(i, x)| format!("{i}:{x}")).collect();
        lines.push_str(&format!("{}\t{}\n", post.id, pairs.join(" ")));
    }
    let header = format!(
        "# feature_set={} posts={} dim={}\n",
        set.name(),
        posts.len(),
        dim
    );
    fs::write(out.join("features.txt"), header + &lines)?;
    man.add_output(out, "features.txt")?;
    if let Some(v) = &vocab {
        v.save(out.join("ngram_vocab.txt"))?;
        man.add_output(out, "ngram_vocab.txt")?;
    }
    println!(
        "featurized {} posts with `{}` at dimension {dim}",
        posts.len(),
        set.name()
    );
    Ok(())
}
