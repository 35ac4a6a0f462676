//! One module per verb. Every command receives the resolved config, the
//! output directory and the manifest it must fill with input and output
//! hashes; `main` writes the manifest once the command succeeds.

pub mod agreement;
pub mod evaluate;
pub mod featurize;
pub mod gold;
pub mod ingest;
pub mod predict;
pub mod stats;
pub mod synth;
pub mod train_net;
pub mod train_svm;

use sarcdet::corpus::{Label, Post};
use sarcdet::error::Result;

use crate::config::RunConfig;
use crate::manifest::Manifest;

/// Labeled posts with their classifier signs: +1 sarcastic, -1 not.
/// Unlabeled posts drop out.
pub(crate) fn labeled(posts: Vec<Post>) -> (Vec<Post>, Vec<i8>) {
    let mut kept = Vec::new();
    let mut labels = Vec::new();
    for p in posts {
        match p.label {
            Label::Sarcastic => {
                labels.push(1);
                kept.push(p);
            }
            Label::NonSarcastic => {
                labels.push(-1);
                kept.push(p);
            }
            Label::Unlabeled => {}
        }
    }
    (kept, labels)
}

/// Registers the image-store files that were actually configured.
pub(crate) fn add_store_inputs(cfg: &RunConfig, man: &mut Manifest) -> Result<()> {
    for p in [&cfg.paths.concept_vocab, &cfg.paths.concepts, &cfg.paths.avr]
        .into_iter()
        .flatten()
    {
        man.add_input(p)?;
    }
    Ok(())
}

/// Registers every lexicon and embedding file the config points at.
pub(crate) fn add_resource_inputs(cfg: &RunConfig, man: &mut Manifest) -> Result<()> {
    for p in cfg.resource_inputs() {
        man.add_input(&p)?;
    }
    Ok(())
}
