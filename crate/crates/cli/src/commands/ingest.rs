use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use sarcdet::corpus::{
    filter_post, read_corpus, strip_collection_artifacts, write_corpus, RejectReason, Verdict,
};
use sarcdet::error::Result;

use crate::config::RunConfig;
use crate::manifest::Manifest;

/// Filters the raw corpus, strips collection artifacts from the survivors
/// and writes the clean corpus plus a reject-reason histogram.
pub fn run(cfg: &RunConfig, out: &Path, man: &mut Manifest) -> Result<()> {
    let corpus_path = RunConfig::require(&cfg.paths.corpus, "corpus")?;
    man.add_input(corpus_path)?;
    let posts = read_corpus(corpus_path)?;
    let fcfg = cfg.filter.to_core();
    fcfg.validate()?;

    let mut kept = Vec::new();
    let mut counts: BTreeMap<RejectReason, usize> =
        RejectReason::all().into_iter().map(|r| (r, 0)).collect();
    for post in &posts {
        match filter_post(post, &fcfg) {
            Verdict::Keep => kept.push(strip_collection_artifacts(post, &fcfg)),
            Verdict::Reject(reason) => *counts.get_mut(&reason).expect("every reason counted") += 1,
        }
    }

    write_corpus(out.join("filtered.jsonl"), &kept)?;
    let mut hist = String::new();
    for r in RejectReason::all() {
        hist.push_str(&format!("{}\t{}\n", r.as_str(), counts[&r]));
    }
    hist.push_str(&format!("kept\t{}\n", kept.len()));
    hist.push_str(&format!("total\t{}\n", posts.len()));
    fs::write(out.join("reject_histogram.txt"), &hist)?;
    man.add_output(out, "filtered.jsonl")?;
    man.add_output(out, "reject_histogram.txt")?;
    print!("{hist}");
    Ok(())
}
