use std::fs;
use std::path::Path;

use sarcdet::corpus::{corpus_stats, read_corpus};
use sarcdet::error::Result;

use crate::config::RunConfig;
use crate::manifest::Manifest;

pub fn run(cfg: &RunConfig, out: &Path, man: &mut Manifest) -> Result<()> {
    let corpus_path = RunConfig::require(&cfg.paths.corpus, "corpus")?;
    man.add_input(corpus_path)?;
    let posts = read_corpus(corpus_path)?;
    let s = corpus_stats(&posts)?;
    let text = format!(
        "posts={}\navg_words={:.4}\navg_emojis={:.4}\navg_hashtags={:.4}\n\
         with_text_pct={:.4}\nsarcastic={}\nnon_sarcastic={}\nunlabeled={}\n",
        s.posts,
        s.avg_words,
        s.avg_emojis,
        s.avg_hashtags,
        s.with_text_pct,
        s.sarcastic,
        s.non_sarcastic,
        s.unlabeled,
    );
    fs::write(out.join("stats.txt"), &text)?;
    man.add_output(out, "stats.txt")?;
    print!("{text}");
    Ok(())
}
