//! Corpus model, quality filters and summary statistics.
//!
//! A [`Post`] couples raw text with its token lists, attached image ids and a
//! label. Posts come from three platforms with different shapes: Instagram
//! posts carry exactly one image, Tumblr photo posts one to ten, tweets any
//! number including zero.
//!
//! [`filter_post`] applies the collection's quality rules in a fixed order
//! and reports the first violated rule, so reject histograms are stable.
//! [`strip_collection_artifacts`] removes the tags and links that only exist
//! because of how the corpus was collected, which would otherwise leak the
//! label into the features.

mod io;
pub mod tokenize;

pub use io::{read_corpus, read_corpus_with, write_corpus};
pub use tokenize::{is_regular_word, scan, tokenize, tokenize_with, EmojiTable, ScanToken};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Source platform of a post.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Platform {
    #[serde(rename = "IG")]
    Instagram,
    #[serde(rename = "TU")]
    Tumblr,
    #[serde(rename = "TW")]
    Twitter,
}

impl Platform {
    pub fn code(&self) -> &'static str {
        match self {
            Platform::Instagram => "IG",
            Platform::Tumblr => "TU",
            Platform::Twitter => "TW",
        }
    }

    pub fn from_code(code: &str) -> Result<Self> {
        match code {
            "IG" => Ok(Platform::Instagram),
            "TU" => Ok(Platform::Tumblr),
            "TW" => Ok(Platform::Twitter),
            other => Err(Error::InvalidConfig(format!("unknown platform `{other}`"))),
        }
    }

    /// Inclusive bounds on how many images a post may carry.
    pub fn image_bounds(&self) -> (usize, Option<usize>) {
        match self {
            Platform::Instagram => (1, Some(1)),
            Platform::Tumblr => (0, Some(10)),
            Platform::Twitter => (0, None),
        }
    }
}

impl std::fmt::Display for Platform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.code())
    }
}

/// Post label. `Unlabeled` marks posts not yet judged either way.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Sarcastic,
    NonSarcastic,
    Unlabeled,
}

/// One social-media post.
///
/// `hashtags` holds the tags from the text (in order of appearance) followed
/// by any platform-level tag-field tags; `words` and `emojis` come from the
/// text alone. The token lists are derived from `raw_text` at construction
/// and kept alongside it so feature extraction never re-tokenizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Post {
    pub id: String,
    pub platform: Platform,
    pub raw_text: String,
    pub words: Vec<String>,
    pub hashtags: Vec<String>,
    pub emojis: Vec<String>,
    pub image_ids: Vec<String>,
    pub label: Label,
}

impl Post {
    /// Builds a post from raw text, tokenizing with `table`.
    pub fn new_with(
        id: &str,
        platform: Platform,
        text: &str,
        table: &EmojiTable,
    ) -> Self {
        let (words, hashtags, emojis) = tokenize_with(text, table);
        Post {
            id: id.to_string(),
            platform,
            raw_text: text.to_string(),
            words,
            hashtags,
            emojis,
            image_ids: Vec::new(),
            label: Label::Unlabeled,
        }
    }

    /// [`Post::new_with`] using the built-in emoji table.
    pub fn new(id: &str, platform: Platform, text: &str) -> Self {
        Post::new_with(id, platform, text, EmojiTable::default_table())
    }

    /// Appends platform-level tag-field tags after the text tags.
    pub fn with_field_tags(mut self, tags: &[String]) -> Self {
        self.hashtags.extend(tags.iter().cloned());
        self
    }

    pub fn with_images(mut self, ids: &[String]) -> Self {
        self.image_ids = ids.to_vec();
        self
    }

    pub fn with_label(mut self, label: Label) -> Self {
        self.label = label;
        self
    }

    /// Checks the image-count bounds for the post's platform.
    pub fn validate_image_bounds(&self) -> Result<()> {
        let (lo, hi) = self.platform.image_bounds();
        let n = self.image_ids.len();
        if n < lo || hi.is_some_and(|h| n > h) {
            return Err(Error::InvalidConfig(format!(
                "post `{}`: {} images out of range for {}",
                self.id, n, self.platform
            )));
        }
        Ok(())
    }

    /// The token stream feature extractors run over: words, then hashtags,
    /// then emoji, each sub-list in order of appearance. Tags and emoji are
    /// treated as part of the text.
    pub fn text_tokens(&self) -> impl Iterator<Item = &str> {
        self.words
            .iter()
            .chain(self.hashtags.iter())
            .chain(self.emojis.iter())
            .map(String::as_str)
    }

    pub fn regular_word_count(&self) -> usize {
        self.words.iter().filter(|w| is_regular_word(w)).count()
    }

    pub fn has_text(&self) -> bool {
        !self.words.is_empty() || !self.hashtags.is_empty() || !self.emojis.is_empty()
    }
}

/// Knobs for the corpus quality filters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterConfig {
    /// Minimum number of regular words for a post to keep any textual signal.
    pub min_regular_words: usize,
    /// A tag containing any of these substrings rejects the post (meme sites).
    pub banned_tag_substrings: Vec<String>,
    /// Tags the collection crawled for; also rejected when used as ordinary words.
    pub collection_tags: Vec<String>,
    /// Link hosts containing any of these substrings are in-platform links.
    pub internal_link_allowlist: Vec<String>,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            min_regular_words: 4,
            banned_tag_substrings: vec!["someecards".to_string()],
            collection_tags: vec!["sarcasm".to_string(), "sarcastic".to_string()],
            internal_link_allowlist: vec![
                "instagram".to_string(),
                "tumblr".to_string(),
                "twitter".to_string(),
                "t.co".to_string(),
                "twimg.com".to_string(),
            ],
        }
    }
}

impl FilterConfig {
    pub fn validate(&self) -> Result<()> {
        if self.collection_tags.is_empty() {
            return Err(Error::InvalidConfig(
                "collection_tags must not be empty".to_string(),
            ));
        }
        Ok(())
    }

    fn is_collection_tag(&self, token: &str) -> bool {
        let lower = token.to_lowercase();
        self.collection_tags
            .iter()
            .any(|t| t.to_lowercase() == lower)
    }

    fn is_internal_host(&self, host: &str) -> bool {
        let host = host.to_lowercase();
        self.internal_link_allowlist
            .iter()
            .any(|allow| host.contains(&allow.to_lowercase()))
    }

    fn is_banned_tag(&self, tag: &str) -> bool {
        let lower = tag.to_lowercase();
        self.banned_tag_substrings
            .iter()
            .any(|b| lower.contains(&b.to_lowercase()))
    }
}

/// First quality rule a post violates, in checking order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectReason {
    /// No image attached.
    NoImage,
    /// Text contains an `@`-mention.
    Mention,
    /// Text links outside the platform allowlist.
    ExternalLink,
    /// A collection tag appears as an ordinary word.
    CollectionTagAsWord,
    /// A collection hashtag is followed by words, i.e. used inside a sentence.
    CollectionTagInSentence,
    /// A tag matches the banned-substring list.
    BannedTag,
    /// Fewer regular words than the configured minimum.
    TooFewWords,
}

impl RejectReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            RejectReason::NoImage => "no_image",
            RejectReason::Mention => "mention",
            RejectReason::ExternalLink => "external_link",
            RejectReason::CollectionTagAsWord => "collection_tag_as_word",
            RejectReason::CollectionTagInSentence => "collection_tag_in_sentence",
            RejectReason::BannedTag => "banned_tag",
            RejectReason::TooFewWords => "too_few_words",
        }
    }

    pub fn all() -> [RejectReason; 7] {
        [
            RejectReason::NoImage,
            RejectReason::Mention,
            RejectReason::ExternalLink,
            RejectReason::CollectionTagAsWord,
            RejectReason::CollectionTagInSentence,
            RejectReason::BannedTag,
            RejectReason::TooFewWords,
        ]
    }
}

impl std::fmt::Display for RejectReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Filter outcome for one post.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Keep,
    Reject(RejectReason),
}

/// Applies the quality rules to one post and reports the first violation.
///
/// Rule order is fixed: missing image, then mentions and external links (in
/// document order), then collection-tag usage, then banned tags, then the
/// regular-word minimum. A post with several defects always reports the same
/// reason, which keeps reject histograms comparable across runs.
pub fn filter_post_with(post: &Post, cfg: &FilterConfig, table: &EmojiTable) -> Verdict {
    // Rule 1: a post must reference at least one image.
    if post.image_ids.is_empty() {
        return Verdict::Reject(RejectReason::NoImage);
    }

    let toks = scan(&post.raw_text, table);

    // Rule 2: mentions and off-platform links, first offender in text order.
    for (tok, _) in &toks {
        match tok {
            ScanToken::Mention(_) => return Verdict::Reject(RejectReason::Mention),
            ScanToken::Url { host, .. } if !cfg.is_internal_host(host) => {
                return Verdict::Reject(RejectReason::ExternalLink)
            }
            _ => {}
        }
    }

    // Rule 3: collection tags used as words, or as hashtags inside a
    // sentence (a later token is still a regular word). A trailing
    // collection hashtag is ordinary collection behavior and is kept.
    for (i, (tok, _)) in toks.iter().enumerate() {
        match tok {
            ScanToken::Word(w) if cfg.is_collection_tag(w) => {
                return Verdict::Reject(RejectReason::CollectionTagAsWord)
            }
            ScanToken::Hashtag(t) if cfg.is_collection_tag(t) => {
                let followed_by_words = toks[i + 1..].iter().any(|(later, _)| {
                    matches!(later, ScanToken::Word(w) if is_regular_word(w))
                });
                if followed_by_words {
                    return Verdict::Reject(RejectReason::CollectionTagInSentence);
                }
            }
            _ => {}
        }
    }

    // Rule 4: banned tags anywhere in the combined tag list.
    if post.hashtags.iter().any(|t| cfg.is_banned_tag(t)) {
        return Verdict::Reject(RejectReason::BannedTag);
    }

    // Rule 5: enough regular words to carry textual signal.
    if post.regular_word_count() < cfg.min_regular_words {
        return Verdict::Reject(RejectReason::TooFewWords);
    }

    Verdict::Keep
}

/// [`filter_post_with`] using the built-in emoji table.
pub fn filter_post(post: &Post, cfg: &FilterConfig) -> Verdict {
    filter_post_with(post, cfg, EmojiTable::default_table())
}

/// Removes collection hashtags and in-platform links from a post.
///
/// Collection tags are dropped from both the text and the tag-field list;
/// in-platform link spans are cut from the text. Token lists are rebuilt
/// from the cleaned text. Applying the function twice equals applying it
/// once, and no token count can grow.
pub fn strip_collection_artifacts_with(
    post: &Post,
    cfg: &FilterConfig,
    table: &EmojiTable,
) -> Post {
    // The tag list is text tags followed by field tags; the boundary is
    // wherever tokenizing the current text ends.
    let (_, text_tags, _) = tokenize_with(&post.raw_text, table);
    let field_tags: Vec<String> = post.hashtags[text_tags.len().min(post.hashtags.len())..]
        .iter()
        .filter(|t| !cfg.is_collection_tag(t))
        .cloned()
        .collect();

    // Cut collection-tag and internal-link spans out of the raw text.
    let mut cleaned = String::with_capacity(post.raw_text.len());
    let mut cursor = 0;
    for (tok, span) in scan(&post.raw_text, table) {
        let cut = match &tok {
            ScanToken::Hashtag(t) => cfg.is_collection_tag(t),
            ScanToken::Url { host, .. } => cfg.is_internal_host(host),
            _ => false,
        };
        if cut {
            cleaned.push_str(&post.raw_text[cursor..span.start]);
            cursor = span.end;
        }
    }
    cleaned.push_str(&post.raw_text[cursor..]);
    let cleaned = cleaned.trim().to_string();

    let (words, text_tags, emojis) = tokenize_with(&cleaned, table);
    let mut hashtags = text_tags;
    hashtags.extend(field_tags);

    Post {
        id: post.id.clone(),
        platform: post.platform,
        raw_text: cleaned,
        words,
        hashtags,
        emojis,
        image_ids: post.image_ids.clone(),
        label: post.label,
    }
}

/// [`strip_collection_artifacts_with`] using the built-in emoji table.
pub fn strip_collection_artifacts(post: &Post, cfg: &FilterConfig) -> Post {
    strip_collection_artifacts_with(post, cfg, EmojiTable::default_table())
}

/// Aggregate corpus statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub posts: usize,
    pub avg_words: f64,
    pub avg_emojis: f64,
    pub avg_hashtags: f64,
    /// Percentage of posts with any textual token (word, tag or emoji).
    pub with_text_pct: f64,
    pub sarcastic: usize,
    pub non_sarcastic: usize,
    pub unlabeled: usize,
}

/// Computes averages and label counts over `posts`.
pub fn corpus_stats(posts: &[Post]) -> Result<CorpusStats> {
    if posts.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let n = posts.len() as f64;
    let mut stats = CorpusStats {
        posts: posts.len(),
        avg_words: 0.0,
        avg_emojis: 0.0,
        avg_hashtags: 0.0,
        with_text_pct: 0.0,
        sarcastic: 0,
        non_sarcastic: 0,
        unlabeled: 0,
    };
    let mut with_text = 0usize;
    for p in posts {
        stats.avg_words += p.words.len() as f64;
        stats.avg_emojis += p.emojis.len() as f64;
        stats.avg_hashtags += p.hashtags.len() as f64;
        if p.has_text() {
            with_text += 1;
        }
        match p.label {
            Label::Sarcastic => stats.sarcastic += 1,
            Label::NonSarcastic => stats.non_sarcastic += 1,
            Label::Unlabeled => stats.unlabeled += 1,
        }
    }
    stats.avg_words /= n;
    stats.avg_emojis /= n;
    stats.avg_hashtags /= n;
    stats.with_text_pct = 100.0 * with_text as f64 / n;
    Ok(stats)
}
