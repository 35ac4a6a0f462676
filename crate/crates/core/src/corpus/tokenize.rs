//! Social-media tokenizer.
//!
//! A single left-to-right scan classifies each maximal span of the input as a
//! word, `#hashtag`, `@mention`, URL, emoji cluster or punctuation. The same
//! scan backs tokenization, the corpus filters (which need token order) and
//! artifact stripping (which needs byte spans), so the three can never
//! disagree about what a token is.

use std::ops::Range;
use std::path::Path;
use std::sync::OnceLock;

use crate::error::{Error, Result};

const DEFAULT_RANGES: &str = include_str!("../../data/emoji_ranges.txt");

/// Zero-width joiner: glues multi-person emoji sequences together.
const ZWJ: char = '\u{200D}';

fn is_emoji_modifier(c: char) -> bool {
    matches!(c,
        ZWJ
        | '\u{FE00}'..='\u{FE0F}'   // variation selectors
        | '\u{1F3FB}'..='\u{1F3FF}' // skin tone modifiers
        | '\u{20E3}' // combining keycap
    )
}

/// Set of codepoint ranges treated as emoji bases.
///
/// The table is configuration, not code: it is loaded from a text file of
/// inclusive hex ranges. A built-in default covers the common emoji planes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmojiTable {
    /// Sorted, non-overlapping inclusive ranges.
    ranges: Vec<(u32, u32)>,
}

impl EmojiTable {
    pub fn from_ranges(mut ranges: Vec<(u32, u32)>) -> Self {
        ranges.sort_unstable();
        let mut merged: Vec<(u32, u32)> = Vec::with_capacity(ranges.len());
        for (lo, hi) in ranges {
            match merged.last_mut() {
                Some(last) if lo <= last.1.saturating_add(1) => last.1 = last.1.max(hi),
                _ => merged.push((lo, hi)),
            }
        }
        EmojiTable { ranges: merged }
    }

    /// Parses the range-table format: `LO-HI` per line, hex, `#` comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut ranges = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let malformed = |msg: String| Error::Malformed {
                what: "emoji range table",
                line: lineno + 1,
                msg,
            };
            let (lo, hi) = match line.split_once('-') {
                Some((a, b)) => (a.trim(), b.trim()),
                None => (line, line),
            };
            let lo = u32::from_str_radix(lo, 16)
                .map_err(|e| malformed(format!("bad hex `{lo}`: {e}")))?;
            let hi = u32::from_str_radix(hi, 16)
                .map_err(|e| malformed(format!("bad hex `{hi}`: {e}")))?;
            if lo > hi {
                return Err(malformed(format!("range {lo:X}-{hi:X} is reversed")));
            }
            ranges.push((lo, hi));
        }
        Ok(EmojiTable::from_ranges(ranges))
    }

    pub fn from_file<P: AsRef<Path>>(path: P) -> Result<Self> {
        EmojiTable::parse(&std::fs::read_to_string(path)?)
    }

    /// Built-in default table.
    pub fn default_table() -> &'static EmojiTable {
        static TABLE: OnceLock<EmojiTable> = OnceLock::new();
        TABLE.get_or_init(|| EmojiTable::parse(DEFAULT_RANGES).expect("built-in table parses"))
    }

    pub fn contains(&self, c: char) -> bool {
        let cp = c as u32;
        self.ranges
            .binary_search_by(|&(lo, hi)| {
                if cp < lo {
                    std::cmp::Ordering::Greater
                } else if cp > hi {
                    std::cmp::Ordering::Less
                } else {
                    std::cmp::Ordering::Equal
                }
            })
            .is_ok()
    }
}

/// One classified span of input text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScanToken {
    /// Alphanumeric run, possibly with internal apostrophes (`don't`).
    Word(String),
    /// Tag text without the leading `#`.
    Hashtag(String),
    /// Emoji base plus any attached modifiers and ZWJ continuations.
    Emoji(String),
    /// Handle text without the leading `@`.
    Mention(String),
    /// Whole URL span plus the extracted host.
    Url { raw: String, host: String },
}

/// A token with its byte span in the original text.
pub type Spanned = (ScanToken, Range<usize>);

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric()
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

fn is_tag_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Lowercase prefix match against the remaining characters.
fn starts_with_ignore_case(chars: &[char], at: usize, pat: &str) -> bool {
    let mut i = at;
    for p in pat.chars() {
        match chars.get(i) {
            Some(c) if c.to_lowercase().eq(p.to_lowercase()) => i += 1,
            _ => return false,
        }
    }
    true
}

fn url_scheme_len(chars: &[char], at: usize) -> Option<usize> {
    for pat in ["http://", "https://", "www."] {
        if starts_with_ignore_case(chars, at, pat) {
            return Some(pat.chars().count());
        }
    }
    None
}

/// Host portion of a URL span: text after the scheme (or including the
/// leading `www.`) up to the first `/`, `?` or `#`.
fn url_host(raw: &str) -> String {
    let lower = raw.to_lowercase();
    let rest = lower
        .strip_prefix("http://")
        .or_else(|| lower.strip_prefix("https://"))
        .unwrap_or(&lower);
    rest.split(['/', '?', '#']).next().unwrap_or("").to_string()
}

/// Classifies `text` into spanned tokens in document order.
pub fn scan(text: &str, table: &EmojiTable) -> Vec<Spanned> {
    // Work over chars but keep byte offsets for span arithmetic.
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let byte_end = |i: usize| -> usize {
        chars
            .get(i)
            .map(|&(b, _)| b)
            .unwrap_or(text.len())
    };
    let mut out = Vec::new();
    let n = chars.len();
    let mut i = 0;
    let only: Vec<char> = chars.iter().map(|&(_, c)| c).collect();
    while i < n {
        let (start_byte, c) = chars[i];

        // URLs first: "www.x" must not decay into words and dots.
        if url_scheme_len(&only, i).is_some() {
            let begin = i;
            while i < n && !chars[i].1.is_whitespace() {
                i += 1;
            }
            let raw: String = only[begin..i].iter().collect();
            let host = url_host(&raw);
            out.push((ScanToken::Url { raw, host }, start_byte..byte_end(i)));
            continue;
        }

        if c == '#' && i + 1 < n && is_tag_char(chars[i + 1].1) {
            let begin = i + 1;
            i += 1;
            while i < n && is_tag_char(chars[i].1) {
                i += 1;
            }
            let tag: String = only[begin..i].iter().collect();
            out.push((ScanToken::Hashtag(tag), start_byte..byte_end(i)));
            continue;
        }

        if c == '@' && i + 1 < n && is_tag_char(chars[i + 1].1) {
            let begin = i + 1;
            i += 1;
            while i < n && is_tag_char(chars[i].1) {
                i += 1;
            }
            let handle: String = only[begin..i].iter().collect();
            out.push((ScanToken::Mention(handle), start_byte..byte_end(i)));
            continue;
        }

        if table.contains(c) {
            let mut tok = String::new();
            tok.push(c);
            i += 1;
            // Attach modifiers; after a ZWJ a fresh base continues the cluster.
            while i < n {
                let c2 = chars[i].1;
                if is_emoji_modifier(c2) || (tok.ends_with(ZWJ) && table.contains(c2)) {
                    tok.push(c2);
                    i += 1;
                } else {
                    break;
                }
            }
            out.push((ScanToken::Emoji(tok), start_byte..byte_end(i)));
            continue;
        }

        if is_word_char(c) {
            let begin = i;
            i += 1;
            loop {
                if i < n && is_word_char(chars[i].1) {
                    i += 1;
                } else if i < n
                    && is_apostrophe(chars[i].1)
                    && i + 1 < n
                    && is_word_char(chars[i + 1].1)
                {
                    // Internal apostrophe: "don't", "it’s".
                    i += 2;
                } else {
                    break;
                }
            }
            let word: String = only[begin..i].iter().collect();
            out.push((ScanToken::Word(word), start_byte..byte_end(i)));
            continue;
        }

        // Punctuation and whitespace carry no token.
        i += 1;
    }
    out
}

/// Token lists split by class: `(words, hashtags, emojis)`.
/// Hashtags are stored without `#`; mentions and URLs are dropped.
pub fn tokenize_with(text: &str, table: &EmojiTable) -> (Vec<String>, Vec<String>, Vec<String>) {
    let mut words = Vec::new();
    let mut hashtags = Vec::new();
    let mut emojis = Vec::new();
    for (tok, _) in scan(text, table) {
        match tok {
            ScanToken::Word(w) => words.push(w),
            ScanToken::Hashtag(t) => hashtags.push(t),
            ScanToken::Emoji(e) => emojis.push(e),
            ScanToken::Mention(_) | ScanToken::Url { .. } => {}
        }
    }
    (words, hashtags, emojis)
}

/// [`tokenize_with`] using the built-in emoji table.
pub fn tokenize(text: &str) -> (Vec<String>, Vec<String>, Vec<String>) {
    tokenize_with(text, EmojiTable::default_table())
}

/// A regular word is purely alphabetic apart from internal apostrophes:
/// `"lovely"` and `"don't"` qualify, `"2017"` and `"x86"` do not.
pub fn is_regular_word(token: &str) -> bool {
    let mut saw_alpha = false;
    for c in token.chars() {
        if c.is_alphabetic() {
            saw_alpha = true;
        } else if !is_apostrophe(c) {
            return false;
        }
    }
    saw_alpha
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(text: &str) -> (Vec<String>, Vec<String>, Vec<String>) {
        tokenize(text)
    }

    #[test]
    fn splits_words_hashtags_and_emoji() {
        let (words, tags, emojis) = t("rubbish weather again \u{1F612} #sarcasm");
        assert_eq!(words, vec!["rubbish", "weather", "again"]);
        assert_eq!(tags, vec!["sarcasm"]);
        assert_eq!(emojis, vec!["\u{1F612}"]);
    }

    #[test]
    fn empty_text_gives_three_empty_lists() {
        assert_eq!(t(""), (vec![], vec![], vec![]));
    }

    #[test]
    fn adjacent_emoji_split_but_modifiers_attach() {
        let (_, _, emojis) = t("\u{1F612}\u{1F612}");
        assert_eq!(emojis.len(), 2);

        // Thumbs up + skin tone is one token.
        let (_, _, emojis) = t("ok \u{1F44D}\u{1F3FD} then");
        assert_eq!(emojis, vec!["\u{1F44D}\u{1F3FD}"]);

        // Variation selector attaches.
        let (_, _, emojis) = t("\u{2764}\u{FE0F}");
        assert_eq!(emojis, vec!["\u{2764}\u{FE0F}"]);

        // ZWJ joins bases into one cluster.
        let family = "\u{1F469}\u{200D}\u{1F469}\u{200D}\u{1F466}";
        let (_, _, emojis) = t(family);
        assert_eq!(emojis, vec![family.to_string()]);
    }

    #[test]
    fn apostrophes_stay_inside_words() {
        let (words, _, _) = t("don't it\u{2019}s rock'n'roll 'quoted'");
        assert_eq!(words, vec!["don't", "it\u{2019}s", "rock'n'roll", "quoted"]);
    }

    #[test]
    fn mentions_and_urls_are_recognized_not_kept() {
        let toks = scan("@jo see http://example.com/a?b#c now", EmojiTable::default_table());
        assert!(matches!(&toks[0].0, ScanToken::Mention(h) if h == "jo"));
        match &toks[2].0 {
            ScanToken::Url { host, .. } => assert_eq!(host, "example.com"),
            other => panic!("expected url, got {other:?}"),
        }
        let (words, tags, _) = t("@jo see http://example.com/a?b#c now");
        assert_eq!(words, vec!["see", "now"]);
        assert!(tags.is_empty());
    }

    #[test]
    fn www_urls_and_case_insensitive_schemes() {
        let toks = scan("go WWW.Shop.Example/x and HTTPS://T.CO/abc", EmojiTable::default_table());
        let hosts: Vec<String> = toks
            .iter()
            .filter_map(|(t, _)| match t {
                ScanToken::Url { host, .. } => Some(host.clone()),
                _ => None,
            })
            .collect();
        assert_eq!(hosts, vec!["www.shop.example", "t.co"]);
    }

    #[test]
    fn hash_not_followed_by_tag_char_is_punctuation() {
        let (words, tags, _) = t("# hello #! there");
        assert_eq!(words, vec!["hello", "there"]);
        assert!(tags.is_empty());
    }

    #[test]
    fn hashtags_allow_digits_and_underscores() {
        let (_, tags, _) = t("#mood_2017 #a1");
        assert_eq!(tags, vec!["mood_2017", "a1"]);
    }

    #[test]
    fn spans_cover_original_bytes() {
        let text = "hi #tag \u{1F612} done";
        for (tok, span) in scan(text, EmojiTable::default_table()) {
            let slice = &text[span.clone()];
            match tok {
                ScanToken::Word(w) => assert_eq!(slice, w),
                ScanToken::Hashtag(t) => assert_eq!(slice, format!("#{t}")),
                ScanToken::Emoji(e) => assert_eq!(slice, e),
                _ => {}
            }
        }
    }

    #[test]
    fn regular_word_predicate() {
        assert!(is_regular_word("lovely"));
        assert!(is_regular_word("don't"));
        assert!(!is_regular_word("2017"));
        assert!(!is_regular_word("x86"));
        assert!(!is_regular_word(""));
    }

    #[test]
    fn custom_table_changes_what_counts_as_emoji() {
        let table = EmojiTable::parse("0041-0042\n").unwrap(); // 'A', 'B'
        let (words, _, emojis) = tokenize_with("A cat", &table);
        assert_eq!(emojis, vec!["A"]);
        assert_eq!(words, vec!["cat"]);
        assert!(EmojiTable::parse("zz-aa").is_err());
        assert!(EmojiTable::parse("0042-0041").is_err());
    }
}
