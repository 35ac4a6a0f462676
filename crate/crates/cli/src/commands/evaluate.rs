use std::fs;
use std::path::Path;

use sarcdet::annotate::read_gold;
use sarcdet::corpus::read_corpus;
use sarcdet::error::Result;
use sarcdet::eval::{render_table, run_experiment, write_kv, ExperimentConfig, ExperimentContext};

use super::{add_resource_inputs, add_store_inputs};
use crate::config::RunConfig;
use crate::manifest::Manifest;

/// Runs the full (feature set x platform) grid and writes the accuracy
/// report twice: aligned for reading, key=value for machines.
pub fn run(
    cfg: &RunConfig,
    out: &Path,
    seed: u64,
    threads: usize,
    man: &mut Manifest,
) -> Result<()> {
    let method = cfg.experiment.method()?;
    let feature_sets = cfg.experiment.feature_sets()?;
    let regime = cfg.experiment.regime()?;
    let ecfg = ExperimentConfig {
        method,
        feature_sets: feature_sets.clone(),
        split_ratio: cfg.experiment.split_ratio,
        seed,
        regime,
    };

    let corpus_path = RunConfig::require(&cfg.paths.corpus, "corpus")?;
    man.add_input(corpus_path)?;
    let posts = read_corpus(corpus_path)?;
    add_resource_inputs(cfg, man)?;
    let res = cfg.load_resources()?;
    let store = cfg.load_store(feature_sets.iter().any(|f| f.needs_store()))?;
    if store.is_some() {
        add_store_inputs(cfg, man)?;
    }
    let gold = if regime.gold_threshold().is_some() {
        let gold_path = RunConfig::require(&cfg.paths.gold, "gold")?;
        man.add_input(gold_path)?;
        Some(read_gold(gold_path)?)
    } else {
        None
    };

    let mut ctx = ExperimentContext::new(&posts, &res);
    ctx.store = store.as_ref();
    ctx.gold = gold.as_ref();
    ctx.svm = cfg.svm.to_core(seed);
    ctx.net = cfg.net.to_core(seed);
    ctx.net_hidden = cfg.net.hidden;
    ctx.image_dim_default = cfg.net.image_dim;
    ctx.ngram_min_count = cfg.experiment.ngram_min_count;
    ctx.image_policy = cfg.images.to_core()?;
    ctx.threads = threads;

    let report = run_experiment(&ecfg, &ctx)?;
    let table = render_table(&report);
    fs::write(out.join("report.txt"), &table)?;
    fs::write(out.join("report.kv"), write_kv(&report))?;
    man.add_output(out, "report.txt")?;
    man.add_output(out, "report.kv")?;
    print!("{table}");
    Ok(())
}
