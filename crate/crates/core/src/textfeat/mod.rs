//! Text feature extractors.
//!
//! Every extractor runs over the post's token stream ([`crate::corpus::Post::text_tokens`]):
//! words, hashtags and emoji are all text. Lexicon lookups are lowercase.
//! A feature whose lexicon covers none of the tokens is 0, never an error,
//! so extraction works with partial resources. For a fixed vocabulary and
//! resource bundle, every block has the same dimension on every post.

mod ngrams;
mod resources;

pub use ngrams::{NgramOrder, NgramVocab};
pub use resources::{
    load_frequency_map, load_score_map, load_syllable_exceptions, load_word_set,
    parse_score_map, parse_word_set, Embeddings, FreqScale, LexResources,
};

use std::collections::HashMap;

use crate::corpus::Post;
use crate::error::Result;
use crate::featvec::{concat, Block, FeatureVector};

pub const LEXICAL_BLOCK: &str = "lexical";
pub const SUBJECTIVITY_BLOCK: &str = "subjectivity";
pub const NGRAM_BLOCK: &str = "ngrams";
pub const EMBEDDING_BLOCK: &str = "embedding";
pub const READABILITY_BLOCK: &str = "readability";

fn mean_over_covered(tokens: &[String], map: &HashMap<String, f64>) -> f64 {
    let mut sum = 0.0;
    let mut n = 0usize;
    for t in tokens {
        if let Some(v) = LexResources::score(map, t) {
            sum += v;
            n += 1;
        }
    }
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

fn stream(post: &Post) -> Vec<String> {
    post.text_tokens().map(str::to_string).collect()
}

/// Dense block: average token length, average log word frequency,
/// contraction count, average formality. Dimension 4.
pub fn lexical_features(post: &Post, res: &LexResources) -> Block {
    let toks = stream(post);
    let avg_len = if toks.is_empty() {
        0.0
    } else {
        toks.iter().map(|t| t.chars().count()).sum::<usize>() as f64 / toks.len() as f64
    };
    let avg_log_freq = mean_over_covered(&toks, &res.word_log_freq);
    let contractions = toks
        .iter()
        .filter(|t| LexResources::in_set(&res.contractions, t))
        .count() as f64;
    let avg_formality = mean_over_covered(&toks, &res.formality);
    Block::dense(
        LEXICAL_BLOCK,
        vec![avg_len, avg_log_freq, contractions, avg_formality],
    )
}

/// Counts passive constructions: a form of "be" followed within two tokens
/// by a word ending in "ed" or an irregular past participle. Each "be" form
/// contributes at most once.
fn count_passives(tokens_lower: &[String], res: &LexResources) -> usize {
    const BE_FORMS: [&str; 8] = ["be", "am", "is", "are", "was", "were", "been", "being"];
    let is_participle = |t: &str| t.ends_with("ed") || res.irregular_participles.contains(t);
    let mut count = 0;
    for (i, t) in tokens_lower.iter().enumerate() {
        if BE_FORMS.contains(&t.as_str()) {
            let window = &tokens_lower[(i + 1).min(tokens_lower.len())
                ..(i + 3).min(tokens_lower.len())];
            if window.iter().any(|w| is_participle(w)) {
                count += 1;
            }
        }
    }
    count
}

/// Dense block: mean subjectivity, mean sentiment, passive count, hedge
/// count, first-person pronoun count, third-person pronoun count. Dimension 6.
pub fn subjectivity_features(post: &Post, res: &LexResources) -> Block {
    let toks = stream(post);
    let lower: Vec<String> = toks.iter().map(|t| t.to_lowercase()).collect();
    let mean_subj = mean_over_covered(&toks, &res.subjectivity);
    let mean_sent = mean_over_covered(&toks, &res.sentiment);
    let passives = count_passives(&lower, res) as f64;
    let hedges = lower.iter().filter(|t| res.hedges.contains(*t)).count() as f64;
    let first = lower
        .iter()
        .filter(|t| res.pronouns_first.contains(*t))
        .count() as f64;
    let third = lower
        .iter()
        .filter(|t| res.pronouns_third.contains(*t))
        .count() as f64;
    Block::dense(
        SUBJECTIVITY_BLOCK,
        vec![mean_subj, mean_sent, passives, hedges, first, third],
    )
}

/// Builds the uni+bigram vocabulary used by the n-gram features.
pub fn build_ngram_vocab(posts: &[Post], min_count: usize) -> Result<NgramVocab> {
    NgramVocab::build(posts, min_count, NgramOrder::UnigramsAndBigrams)
}

/// Builds a unigram-only vocabulary (the text input of the fusion network).
pub fn build_unigram_vocab(posts: &[Post], min_count: usize) -> Result<NgramVocab> {
    NgramVocab::build(posts, min_count, NgramOrder::Unigrams)
}

/// Sparse binary presence block over `vocab`. Out-of-vocabulary n-grams are
/// ignored; repetition is invisible.
pub fn ngram_features(post: &Post, vocab: &NgramVocab) -> Block {
    vocab.features_named(post, NGRAM_BLOCK)
}

/// Dense block: mean word vector over covered tokens; all zeros when no
/// token is covered. Dimension = embedding dimension.
pub fn embedding_feature(post: &Post, res: &LexResources) -> Block {
    let dim = res.embeddings.dim();
    let mut acc = vec![0.0; dim];
    let mut n = 0usize;
    for t in post.text_tokens() {
        if let Some(v) = res.embeddings.get(t) {
            for (a, x) in acc.iter_mut().zip(v) {
                *a += x;
            }
            n += 1;
        }
    }
    if n > 0 {
        for a in &mut acc {
            *a /= n as f64;
        }
    }
    Block::dense(EMBEDDING_BLOCK, acc)
}

/// Counts syllables as maximal vowel groups (a, e, i, o, u, y), minus a
/// silent final "e" that forms its own group, with a floor of one. Words in
/// the exception table use the stored count. Non-alphabetic characters are
/// ignored.
pub fn syllable_count(token: &str, exceptions: &HashMap<String, usize>) -> usize {
    let lower = token.to_lowercase();
    if let Some(&n) = exceptions.get(&lower) {
        return n;
    }
    let letters: Vec<char> = lower.chars().filter(|c| c.is_alphabetic()).collect();
    let is_vowel = |c: char| matches!(c, 'a' | 'e' | 'i' | 'o' | 'u' | 'y');
    let mut groups = 0usize;
    let mut prev_vowel = false;
    for &c in &letters {
        let v = is_vowel(c);
        if v && !prev_vowel {
            groups += 1;
        }
        prev_vowel = v;
    }
    // Silent final "e": drops a group only when it forms one by itself.
    if letters.len() >= 2 {
        let last = letters[letters.len() - 1];
        let before = letters[letters.len() - 2];
        if last == 'e' && !is_vowel(before) && groups > 1 {
            groups -= 1;
        }
    }
    groups.max(1)
}

/// Number of sentences: maximal runs of `.`, `?`, `!`, floored at one.
fn sentence_count(text: &str) -> usize {
    let mut count = 0usize;
    let mut in_run = false;
    for c in text.chars() {
        let terminal = matches!(c, '.' | '?' | '!');
        if terminal && !in_run {
            count += 1;
        }
        in_run = terminal;
    }
    count.max(1)
}

/// Grade-level readability:
/// `0.39 * words/sentences + 11.8 * syllables/words - 15.59`, 0 for empty posts.
fn grade_level(words: usize, sentences: usize, syllables: usize) -> f64 {
    if words == 0 {
        return 0.0;
    }
    0.39 * words as f64 / sentences as f64 + 11.8 * syllables as f64 / words as f64 - 15.59
}

/// Dense block: token count, character count of the raw text, grade-level
/// readability. Dimension 3.
pub fn readability_features(post: &Post, res: &LexResources) -> Block {
    let toks = stream(post);
    let words = toks.len();
    let chars = post.raw_text.chars().count();
    let syllables: usize = toks
        .iter()
        .map(|t| syllable_count(t, &res.syllable_exceptions))
        .sum();
    let grade = grade_level(words, sentence_count(&post.raw_text), syllables);
    Block::dense(READABILITY_BLOCK, vec![words as f64, chars as f64, grade])
}

/// The full text representation: n-grams, then embedding, then readability.
pub fn combination_features(
    post: &Post,
    vocab: &NgramVocab,
    res: &LexResources,
) -> Result<FeatureVector> {
    concat([
        FeatureVector::from_block(ngram_features(post, vocab)),
        FeatureVector::from_block(embedding_feature(post, res)),
        FeatureVector::from_block(readability_features(post, res)),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Platform;
    use crate::featvec::BlockValue;

    fn post(text: &str) -> Post {
        Post::new("t", Platform::Twitter, text)
    }

    fn dense(b: &Block) -> Vec<f64> {
        match &b.value {
            BlockValue::Dense(v) => v.clone(),
            _ => panic!("expected dense"),
        }
    }

    #[test]
    fn average_token_length() {
        let v = dense(&lexical_features(&post("ab abcd"), &LexResources::builtin()));
        assert!((v[0] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn contraction_count_over_tokens() {
        let mut res = LexResources::default();
        res.contractions = ["don't", "can't"].iter().map(|s| s.to_string()).collect();
        let v = dense(&lexical_features(&post("don't can't sun"), &res));
        assert_eq!(v[2], 2.0);
    }

    #[test]
    fn log_frequency_averages_covered_tokens_only() {
        let mut res = LexResources::default();
        res.word_log_freq.insert("sun".to_string(), 2.0);
        res.word_log_freq.insert("moon".to_string(), 4.0);
        let v = dense(&lexical_features(&post("sun moon comet"), &res));
        assert!((v[1] - 3.0).abs() < 1e-12);
        // No coverage at all: 0, not NaN.
        let v = dense(&lexical_features(&post("comet"), &res));
        assert_eq!(v[1], 0.0);
    }

    #[test]
    fn sentiment_and_subjectivity_means() {
        let mut res = LexResources::default();
        res.sentiment.insert("great".to_string(), 0.8);
        let v = dense(&subjectivity_features(&post("great"), &res));
        assert!((v[1] - 0.8).abs() < 1e-12);
    }

    #[test]
    fn hedges_and_first_person() {
        let mut res = LexResources::default();
        res.hedges = ["maybe", "think"].iter().map(|s| s.to_string()).collect();
        res.pronouns_first = ["i"].iter().map(|s| s.to_string()).collect();
        let v = dense(&subjectivity_features(&post("I think maybe"), &res));
        assert_eq!(v[3], 2.0);
        assert_eq!(v[4], 1.0);
    }

    #[test]
    fn passive_detection() {
        let res = LexResources::builtin();
        let count = |text: &str| dense(&subjectivity_features(&post(text), &res))[2];
        assert_eq!(count("was broken by"), 1.0);
        assert_eq!(count("it was clearly broken"), 1.0); // within two tokens
        assert_eq!(count("was very badly broken"), 0.0); // too far
        assert_eq!(count("is painted daily"), 1.0); // -ed rule
        assert_eq!(count("was was fixed"), 2.0); // each be-form counts once
        assert_eq!(count("being here"), 0.0);
    }

    #[test]
    fn embedding_mean_and_oov() {
        let mut res = LexResources::default();
        let table = [
            ("cat".to_string(), vec![1.0, 0.0]),
            ("dog".to_string(), vec![0.0, 1.0]),
        ]
        .into_iter()
        .collect();
        res.embeddings = Embeddings::from_table(2, table).unwrap();
        let v = dense(&embedding_feature(&post("cat dog"), &res));
        assert_eq!(v, vec![0.5, 0.5]);
        let v = dense(&embedding_feature(&post("bird"), &res));
        assert_eq!(v, vec![0.0, 0.0]);
        // Dimension is fixed by the table, not the post.
        assert_eq!(embedding_feature(&post(""), &res).value.dim(), 2);
    }

    #[test]
    fn syllable_counts() {
        let ex = HashMap::new();
        assert_eq!(syllable_count("cat", &ex), 1);
        // Group counting sees o, e, y; the internal silent e is the
        // heuristic's known blind spot, handled by the exceptions table.
        assert_eq!(syllable_count("lovely", &ex), 3);
        assert_eq!(syllable_count("cake", &ex), 1); // silent e
        assert_eq!(syllable_count("be", &ex), 1); // floor
        assert_eq!(syllable_count("see", &ex), 1);
        assert_eq!(syllable_count("idea", &ex), 2); // "ea" is one group
        assert_eq!(syllable_count("rhythm", &ex), 1);
        let ex: HashMap<String, usize> = [("idea".to_string(), 3)].into_iter().collect();
        assert_eq!(syllable_count("idea", &ex), 3);
    }

    #[test]
    fn readability_of_simple_sentence() {
        let res = LexResources::builtin();
        let v = dense(&readability_features(&post("The cat sat."), &res));
        assert_eq!(v[0], 3.0);
        assert_eq!(v[1], 12.0);
        // 0.39*3 + 11.8*1 - 15.59 = -2.62
        assert!((v[2] - (-2.62)).abs() < 1e-9);
    }

    #[test]
    fn readability_of_empty_post_is_zero() {
        let res = LexResources::builtin();
        let v = dense(&readability_features(&post(""), &res));
        assert_eq!(v, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn sentence_runs_collapse() {
        assert_eq!(sentence_count("Wow... really?!"), 2);
        assert_eq!(sentence_count("no terminals"), 1);
        assert_eq!(sentence_count("a. b? c!"), 3);
    }

    #[test]
    fn combination_stacks_three_blocks_in_order() {
        let posts = vec![post("a b"), post("a c")];
        let vocab = build_ngram_vocab(&posts, 1).unwrap();
        let res = LexResources::builtin();
        let fv = combination_features(&post("a b"), &vocab, &res).unwrap();
        let names: Vec<&str> = fv.blocks().iter().map(|b| b.name.as_str()).collect();
        assert_eq!(names, vec![NGRAM_BLOCK, EMBEDDING_BLOCK, READABILITY_BLOCK]);
        assert_eq!(fv.total_dim(), 5 + 0 + 3);
    }

    #[test]
    fn block_dims_constant_across_posts() {
        let posts = vec![post("a b"), post("a c")];
        let vocab = build_ngram_vocab(&posts, 1).unwrap();
        let res = LexResources::builtin();
        let d1 = combination_features(&posts[0], &vocab, &res).unwrap().layout();
        let d2 = combination_features(&post("totally different words"), &vocab, &res)
            .unwrap()
            .layout();
        assert_eq!(d1, d2);
    }
}
