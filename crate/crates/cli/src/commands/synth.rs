use std::path::Path;

use sarcdet::corpus::{write_corpus, Label};
use sarcdet::error::Result;
use sarcdet::eval::synth_incongruity_corpus;

use crate::config::RunConfig;
use crate::manifest::Manifest;

/// Generates the synthetic incongruity corpus and every image-feature file
/// the evaluation pipeline needs, so `synth` output chains directly into
/// `train-svm`, `train-net` and `evaluate`.
pub fn run(cfg: &RunConfig, out: &Path, seed: u64, man: &mut Manifest) -> Result<()> {
    let params = cfg.synth.to_core()?;
    let corpus = synth_incongruity_corpus(cfg.synth.n, &params, seed)?;

    write_corpus(out.join("corpus.jsonl"), &corpus.posts)?;
    corpus.store.vocab().save(out.join("concept_vocab.txt"))?;
    corpus.store.save_concepts(out.join("concepts.txt"))?;
    corpus.store.save_avr(out.join("avr.txt"))?;
    for name in ["corpus.jsonl", "concept_vocab.txt", "concepts.txt", "avr.txt"] {
        man.add_output(out, name)?;
    }

    let sarcastic = corpus
        .posts
        .iter()
        .filter(|p| p.label == Label::Sarcastic)
        .count();
    println!(
        "posts={} sarcastic={} non_sarcastic={}",
        corpus.posts.len(),
        sarcastic,
        corpus.posts.len() - sarcastic
    );
    Ok(())
}
