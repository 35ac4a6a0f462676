//! Synthetic incongruity corpus.
//!
//! Every post gushes: its text opens with a positive sentiment word and
//! otherwise carries filler. The image shows a scene that is either pleasant
//! or unpleasant, and the post is sarcastic exactly when the scene is
//! unpleasant (praise of a miserable scene). The scene always appears in the
//! image's concept detections; it appears in the text, as a trailing
//! hashtag, only with probability `1 - q`.
//!
//! `q` therefore dials how much of the label signal is image-only. At `q = 0`
//! text alone can be perfect; at `q = 1` text alone is a coin flip; in
//! between, a text-only model tops out at `1 - q/2` while any model that
//! reads the image can still be perfect.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Label, Platform, Post};
use crate::error::{Error, Result};
use crate::visfeat::{ConceptVocab, DetectedConcept, FeatureStore};

const POSITIVE_SENTIMENT: [&str; 5] = ["lovely", "great", "wonderful", "perfect", "brilliant"];
const PLEASANT_SCENES: [&str; 5] = ["sunshine", "beach", "rainbow", "kittens", "fireworks"];
const UNPLEASANT_SCENES: [&str; 5] = ["rain", "traffic", "delays", "mondays", "laundry"];
const FILLER: [&str; 10] = [
    "such", "a", "day", "out", "there", "today", "truly", "what", "time", "this",
];
const NEUTRAL_CONCEPTS: [&str; 6] = [
    "outdoor", "people", "daylight", "street", "window", "closeup",
];

/// Generator knobs.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthParams {
    /// Probability that the scene cue is visible only in the image.
    pub q: f64,
    /// Dense image vector dimension.
    pub avr_dim: usize,
    /// Uniform noise half-width added to every dense coordinate.
    pub avr_noise: f64,
    /// Label-independent concepts attached to each image.
    pub noise_concepts: usize,
    pub platform: Platform,
}

impl Default for SynthParams {
    fn default() -> Self {
        SynthParams {
            q: 0.5,
            avr_dim: 16,
            avr_noise: 0.05,
            noise_concepts: 2,
            platform: Platform::Instagram,
        }
    }
}

/// Posts plus the image features their ids point into.
pub struct SynthCorpus {
    pub posts: Vec<Post>,
    pub store: FeatureStore,
}

/// Builds `n` posts. Deterministic in `(n, params, seed)`.
pub fn synth_incongruity_corpus(n: usize, params: &SynthParams, seed: u64) -> Result<SynthCorpus> {
    if n < 40 {
        return Err(Error::InvalidConfig(format!(
            "synthetic corpus needs at least 40 posts, got {n}"
        )));
    }
    if !(0.0..=1.0).contains(&params.q) {
        return Err(Error::InvalidConfig(format!(
            "q must be in [0, 1], got {}",
            params.q
        )));
    }
    if params.avr_dim < 2 {
        return Err(Error::InvalidConfig(
            "dense image vectors need at least 2 dimensions".into(),
        ));
    }
    if !(0.0..0.5).contains(&params.avr_noise) {
        return Err(Error::InvalidConfig(format!(
            "avr_noise must be in [0, 0.5), got {}",
            params.avr_noise
        )));
    }
    if params.noise_concepts > NEUTRAL_CONCEPTS.len() {
        return Err(Error::InvalidConfig(format!(
            "at most {} noise concepts are available",
            NEUTRAL_CONCEPTS.len()
        )));
    }

    let mut names: Vec<String> = Vec::new();
    names.extend(PLEASANT_SCENES.iter().map(|s| s.to_string()));
    names.extend(UNPLEASANT_SCENES.iter().map(|s| s.to_string()));
    names.extend(NEUTRAL_CONCEPTS.iter().map(|s| s.to_string()));
    let vocab = ConceptVocab::new(names)?;
    let mut store = FeatureStore::new(vocab);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut posts = Vec::with_capacity(n);
    for i in 0..n {
        let unpleasant = rng.gen_bool(0.5);
        let scene = if unpleasant {
            UNPLEASANT_SCENES[rng.gen_range(0..UNPLEASANT_SCENES.len())]
        } else {
            PLEASANT_SCENES[rng.gen_range(0..PLEASANT_SCENES.len())]
        };
        let sentiment = POSITIVE_SENTIMENT[rng.gen_range(0..POSITIVE_SENTIMENT.len())];
        let cue_in_text = !rng.gen_bool(params.q);

        let mut text = String::from(sentiment);
        for _ in 0..4 {
            text.push(' ');
            text.push_str(FILLER[rng.gen_range(0..FILLER.len())]);
        }
        if cue_in_text {
            text.push_str(" #");
            text.push_str(scene);
        }

        let image_id = format!("syn-img-{i:05}");
        let mut concepts = vec![DetectedConcept {
            name: scene.to_string(),
            confidence: None,
        }];
        let mut neutral: Vec<&str> = NEUTRAL_CONCEPTS.to_vec();
        neutral.shuffle(&mut rng);
        for name in neutral.iter().take(params.noise_concepts) {
            concepts.push(DetectedConcept {
                name: name.to_string(),
                confidence: None,
            });
        }
        store.insert_concepts(&image_id, concepts)?;

        // Pleasant scenes light the even coordinates, unpleasant the odd
        // ones, plus bounded uniform jitter.
        let mut avr = Vec::with_capacity(params.avr_dim);
        for d in 0..params.avr_dim {
            let on = (d % 2 == 1) == unpleasant;
            let base = if on { 1.0 } else { 0.0 };
            let jitter = (rng.gen::<f64>() - 0.5) * 2.0 * params.avr_noise;
            avr.push(base + jitter);
        }
        store.insert_avr(&image_id, avr)?;

        let label = if unpleasant {
            Label::Sarcastic
        } else {
            Label::NonSarcastic
        };
        posts.push(
            Post::new(&format!("syn-{i:05}"), params.platform, &text)
                .with_images(&[image_id])
                .with_label(label),
        );
    }
    Ok(SynthCorpus { posts, store })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{filter_post, FilterConfig, Verdict};

    #[test]
    fn deterministic_in_seed() {
        let p = SynthParams::default();
        let a = synth_incongruity_corpus(60, &p, 9).unwrap();
        let b = synth_incongruity_corpus(60, &p, 9).unwrap();
        assert_eq!(a.posts, b.posts);
        let c = synth_incongruity_corpus(60, &p, 10).unwrap();
        assert_ne!(a.posts, c.posts);
    }

    #[test]
    fn labels_follow_the_scene() {
        let corpus = synth_incongruity_corpus(80, &SynthParams::default(), 1).unwrap();
        let unpleasant: Vec<&str> = UNPLEASANT_SCENES.to_vec();
        for post in &corpus.posts {
            let img = corpus.store.get(&post.image_ids[0]).unwrap();
            let has_unpleasant = img
                .concepts
                .iter()
                .any(|c| unpleasant.contains(&c.name.as_str()));
            assert_eq!(post.label == Label::Sarcastic, has_unpleasant, "{}", post.id);
        }
    }

    #[test]
    fn q_extremes_control_text_cue() {
        let mut p = SynthParams {
            q: 0.0,
            ..SynthParams::default()
        };
        let always = synth_incongruity_corpus(50, &p, 2).unwrap();
        assert!(always.posts.iter().all(|post| !post.hashtags.is_empty()));
        p.q = 1.0;
        let never = synth_incongruity_corpus(50, &p, 2).unwrap();
        assert!(never.posts.iter().all(|post| post.hashtags.is_empty()));
    }

    #[test]
    fn posts_survive_the_corpus_filter() {
        let corpus = synth_incongruity_corpus(60, &SynthParams::default(), 3).unwrap();
        let cfg = FilterConfig::default();
        for post in &corpus.posts {
            assert_eq!(filter_post(post, &cfg), Verdict::Keep, "{}", post.id);
        }
    }

    #[test]
    fn rejects_bad_params() {
        let p = SynthParams::default();
        assert!(synth_incongruity_corpus(10, &p, 0).is_err());
        let bad_q = SynthParams {
            q: 1.5,
            ..SynthParams::default()
        };
        assert!(synth_incongruity_corpus(50, &bad_q, 0).is_err());
        let bad_noise = SynthParams {
            avr_noise: 0.7,
            ..SynthParams::default()
        };
        assert!(synth_incongruity_corpus(50, &bad_noise, 0).is_err());
    }
}
