use std::path::Path;

use sarcdet::corpus::read_corpus;
use sarcdet::error::{Error, Result};
use sarcdet::eval::{deep_example, ExperimentContext, Method};
use sarcdet::fusionnet::{self, write_checkpoint, Checkpoint, Example, NetConfig, NetMode};
use sarcdet::textfeat::{build_unigram_vocab, LexResources};

use super::{add_store_inputs, labeled};
use crate::config::RunConfig;
use crate::manifest::Manifest;

pub(crate) fn mode_name(mode: NetMode) -> &'static str {
    match mode {
        NetMode::TextOnly => "text_only",
        NetMode::ImageOnly => "image_only",
        NetMode::Fusion => "fusion",
    }
}

/// Trains the fusion network on every labeled post and writes a checkpoint
/// plus the unigram vocabulary feeding the text branch.
pub fn run(cfg: &RunConfig, out: &Path, seed: u64, man: &mut Manifest) -> Result<()> {
    let corpus_path = RunConfig::require(&cfg.paths.corpus, "corpus")?;
    man.add_input(corpus_path)?;
    let posts = read_corpus(corpus_path)?;
    let (train_posts, labels) = labeled(posts);
    if train_posts.is_empty() {
        return Err(Error::EmptyCorpus);
    }

    let set = cfg.experiment.primary_feature_set()?;
    if !set.valid_for(Method::DeepFusion) {
        return Err(Error::InvalidConfig(format!(
            "feature set `{}` cannot feed the fusion network",
            set.name()
        )));
    }
    let mode = set.net_mode().expect("network feature set has a mode");
    let store = cfg.load_store(set.needs_store())?;
    if store.is_some() {
        add_store_inputs(cfg, man)?;
    }
    let vocab = set
        .needs_unigram_vocab()
        .then(|| build_unigram_vocab(&train_posts, cfg.experiment.ngram_min_count))
        .transpose()?;

    // The network reads nothing from the lexicons; built-ins satisfy the
    // context without dragging lexicon files into the manifest.
    let res = LexResources::builtin();
    let mut ctx = ExperimentContext::new(&train_posts, &res);
    ctx.store = store.as_ref();
    ctx.image_policy = cfg.images.to_core()?;

    let examples: Vec<Example> = train_posts
        .iter()
        .zip(&labels)
        .map(|(p, &y)| deep_example(set, p, (y == 1) as usize, vocab.as_ref(), &ctx))
        .collect::<Result<_>>()?;
    let image_dim = ctx
        .store
        .and_then(|s| s.avr_dim())
        .unwrap_or(cfg.net.image_dim);
    let net_cfg = NetConfig {
        text_vocab: vocab.as_ref().map_or(0, |v| v.len()),
        hidden: cfg.net.hidden,
        image_dim,
    };
    let mut train_cfg = cfg.net.to_core(seed);
    train_cfg.mode = mode;
    let (net, summary) = fusionnet::train(&examples, net_cfg, &train_cfg)?;

    let ckpt = Checkpoint {
        net,
        train_cfg,
        vocab_fingerprint: vocab.as_ref().map_or(0, |v| v.fingerprint()),
    };
    write_checkpoint(out.join("model.fnet"), &ckpt)?;
    man.add_output(out, "model.fnet")?;
    if let Some(v) = &vocab {
        v.save(out.join("unigram_vocab.txt"))?;
        man.add_output(out, "unigram_vocab.txt")?;
    }
    println!(
        "mode={} examples={} params={} final_loss={:.6}",
        mode_name(mode),
        examples.len(),
        ckpt.net.param_count(),
        summary.loss_by_epoch.last().expect("at least one epoch")
    );
    Ok(())
}
