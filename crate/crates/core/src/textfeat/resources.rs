//! Lexicons and embedding tables backing the text features.
//!
//! Everything here is data, not behavior: score maps, word sets and word
//! vectors loaded from plain text files. All keys are lowercased at load
//! time and all lookups lowercase the query, so casing never affects scores.

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use crate::error::{Error, Result};

/// How to interpret the value column of a frequency file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FreqScale {
    /// Values are raw counts; take the natural log.
    #[default]
    LnOfCount,
    /// Values are raw counts; take the base-10 log.
    Log10OfCount,
    /// Values are already log frequencies; use them as-is.
    AsIs,
}

/// Word vectors with a fixed dimension.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Embeddings {
    dim: usize,
    table: HashMap<String, Vec<f64>>,
}

impl Embeddings {
    pub fn empty() -> Self {
        Embeddings::default()
    }

    pub fn from_table(dim: usize, table: HashMap<String, Vec<f64>>) -> Result<Self> {
        for (w, v) in &table {
            if v.len() != dim {
                return Err(Error::DimMismatch {
                    expected: dim,
                    got: v.len(),
                });
            }
            if w.chars().any(char::is_uppercase) {
                return Err(Error::InvalidConfig(format!(
                    "embedding key `{w}` must be lowercase"
                )));
            }
        }
        Ok(Embeddings { dim, table })
    }

    /// Parses the text format: header `count dim`, then `word v1 .. vdim`
    /// per line, whitespace separated.
    pub fn parse<R: Read>(reader: R) -> Result<Self> {
        let reader = BufReader::new(reader);
        let mut lines = reader.lines().enumerate();
        let malformed = |line: usize, msg: String| Error::Malformed {
            what: "embedding file",
            line,
            msg,
        };
        let (count, dim) = loop {
            match lines.next() {
                None => return Err(malformed(1, "missing header".to_string())),
                Some((lineno, line)) => {
                    let line = line?;
                    let line = line.trim();
                    if line.is_empty() {
                        continue;
                    }
                    let mut it = line.split_whitespace();
                    let count: usize = it
                        .next()
                        .ok_or_else(|| malformed(lineno + 1, "empty header".into()))?
                        .parse()
                        .map_err(|e| malformed(lineno + 1, format!("bad count: {e}")))?;
                    let dim: usize = it
                        .next()
                        .ok_or_else(|| malformed(lineno + 1, "header needs `count dim`".into()))?
                        .parse()
                        .map_err(|e| malformed(lineno + 1, format!("bad dim: {e}")))?;
                    break (count, dim);
                }
            }
        };
        let mut table = HashMap::with_capacity(count);
        for (lineno, line) in lines {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let word = it.next().unwrap().to_lowercase();
            let vec: Vec<f64> = it
                .map(|t| {
                    t.parse::<f64>()
                        .map_err(|e| malformed(lineno + 1, format!("bad value `{t}`: {e}")))
                })
                .collect::<Result<_>>()?;
            if vec.len() != dim {
                return Err(malformed(
                    lineno + 1,
                    format!("expected {dim} values, got {}", vec.len()),
                ));
            }
            table.insert(word, vec);
        }
        if table.len() != count {
            return Err(malformed(
                1,
                format!("header declares {count} words, file has {}", table.len()),
            ));
        }
        Ok(Embeddings { dim, table })
    }

    pub fn from_file<P: AsRef<Path>>(path: P) -> Result<Self> {
        Embeddings::parse(File::open(path)?)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn get(&self, token: &str) -> Option<&[f64]> {
        self.table.get(&token.to_lowercase()).map(Vec::as_slice)
    }
}

/// Two-column `word value` file, `#` comments and blank lines ignored.
pub fn load_score_map<P: AsRef<Path>>(path: P) -> Result<HashMap<String, f64>> {
    parse_score_map(File::open(path)?, FreqScale::AsIs)
}

/// Frequency file interpreted per `scale` (counts get a log applied).
pub fn load_frequency_map<P: AsRef<Path>>(
    path: P,
    scale: FreqScale,
) -> Result<HashMap<String, f64>> {
    parse_score_map(File::open(path)?, scale)
}

pub fn parse_score_map<R: Read>(reader: R, scale: FreqScale) -> Result<HashMap<String, f64>> {
    let reader = BufReader::new(reader);
    let mut map = HashMap::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let malformed = |msg: String| Error::Malformed {
            what: "score map",
            line: lineno + 1,
            msg,
        };
        let mut it = line.split_whitespace();
        let word = it.next().unwrap().to_lowercase();
        let raw: f64 = it
            .next()
            .ok_or_else(|| malformed("missing value".into()))?
            .parse()
            .map_err(|e| malformed(format!("bad value: {e}")))?;
        let value = match scale {
            FreqScale::AsIs => raw,
            FreqScale::LnOfCount | FreqScale::Log10OfCount if raw <= 0.0 => {
                return Err(malformed(format!("count must be positive, got {raw}")))
            }
            FreqScale::LnOfCount => raw.ln(),
            FreqScale::Log10OfCount => raw.log10(),
        };
        map.insert(word, value);
    }
    Ok(map)
}

/// One word per line, `#` comments and blank lines ignored.
pub fn load_word_set<P: AsRef<Path>>(path: P) -> Result<HashSet<String>> {
    parse_word_set(File::open(path)?)
}

pub fn parse_word_set<R: Read>(reader: R) -> Result<HashSet<String>> {
    let reader = BufReader::new(reader);
    let mut set = HashSet::new();
    for line in reader.lines() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        set.insert(line.to_lowercase());
    }
    Ok(set)
}

/// `word syllables` per line, for words the vowel-group rule miscounts.
pub fn load_syllable_exceptions<P: AsRef<Path>>(path: P) -> Result<HashMap<String, usize>> {
    let map = parse_score_map(File::open(path)?, FreqScale::AsIs)?;
    map.into_iter()
        .map(|(w, v)| {
            if v < 1.0 || v.fract() != 0.0 {
                Err(Error::InvalidConfig(format!(
                    "syllable count for `{w}` must be a positive integer, got {v}"
                )))
            } else {
                Ok((w, v as usize))
            }
        })
        .collect()
}

fn set(words: &[&str]) -> HashSet<String> {
    words.iter().map(|w| w.to_string()).collect()
}

/// Bundle of every lexicon and table the text features consult.
///
/// [`LexResources::default`] ships small built-in word sets (function-word
/// classes that are closed and uncontroversial) and empty numeric tables:
/// features over a missing table are 0 rather than an error, so the same
/// code runs with anything from no resources to full lexicons.
#[derive(Debug, Clone, Default)]
pub struct LexResources {
    /// word -> log corpus frequency.
    pub word_log_freq: HashMap<String, f64>,
    /// word -> formality score.
    pub formality: HashMap<String, f64>,
    /// word -> sentiment polarity in [-1, 1].
    pub sentiment: HashMap<String, f64>,
    /// word -> subjectivity in [0, 1].
    pub subjectivity: HashMap<String, f64>,
    pub hedges: HashSet<String>,
    pub contractions: HashSet<String>,
    pub pronouns_first: HashSet<String>,
    pub pronouns_third: HashSet<String>,
    /// Irregular past participles the `-ed` passive heuristic would miss.
    pub irregular_participles: HashSet<String>,
    pub embeddings: Embeddings,
    /// Words whose syllable count the vowel-group rule gets wrong.
    pub syllable_exceptions: HashMap<String, usize>,
}

impl LexResources {
    /// Built-in closed-class word lists; numeric tables stay empty.
    pub fn builtin() -> Self {
        LexResources {
            hedges: set(&[
                "maybe", "perhaps", "possibly", "probably", "apparently", "somewhat",
                "think", "guess", "seems", "likely", "almost", "suggest", "sort",
                "kind", "roughly", "arguably",
            ]),
            contractions: set(&[
                "don't", "can't", "won't", "isn't", "aren't", "wasn't", "weren't",
                "didn't", "doesn't", "couldn't", "shouldn't", "wouldn't", "ain't",
                "i'm", "i've", "i'll", "i'd", "you're", "you've", "you'll",
                "he's", "she's", "it's", "we're", "we've", "they're", "they've",
                "that's", "there's", "what's", "let's",
            ]),
            pronouns_first: set(&["i", "me", "my", "mine", "myself", "we", "us", "our",
                "ours", "ourselves", "i'm", "i've", "i'll", "i'd"]),
            pronouns_third: set(&[
                "he", "him", "his", "himself", "she", "her", "hers", "herself",
                "it", "its", "itself", "they", "them", "their", "theirs",
                "themselves", "he's", "she's", "it's", "they're", "they've",
            ]),
            irregular_participles: set(&[
                "broken", "stolen", "taken", "given", "written", "driven", "eaten",
                "beaten", "chosen", "frozen", "spoken", "known", "grown", "thrown",
                "shown", "seen", "done", "gone", "made", "told", "sold", "held",
                "kept", "left", "lost", "built", "sent", "spent", "caught",
                "taught", "bought", "brought", "thought", "found", "paid", "said",
                "put", "set", "hit", "cut", "hurt", "read", "worn", "torn",
                "born", "drawn", "forgotten", "hidden", "ridden", "risen",
                "fallen", "beheld", "sung", "hung", "stuck", "struck", "won",
                "meant", "felt", "dealt", "led", "fed", "bred", "understood",
                "heard",
            ]),
            ..LexResources::default()
        }
    }

    /// Looks a token up in a score map, lowercasing first.
    pub(crate) fn score(map: &HashMap<String, f64>, token: &str) -> Option<f64> {
        map.get(&token.to_lowercase()).copied()
    }

    pub(crate) fn in_set(set: &HashSet<String>, token: &str) -> bool {
        set.contains(&token.to_lowercase())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedding_parse_and_lookup() {
        let data = "2 3\nCat 1 0 0.5\ndog 0 -1 2\n";
        let e = Embeddings::parse(data.as_bytes()).unwrap();
        assert_eq!(e.dim(), 3);
        assert_eq!(e.get("cat"), Some(&[1.0, 0.0, 0.5][..]));
        assert_eq!(e.get("CAT"), Some(&[1.0, 0.0, 0.5][..]));
        assert_eq!(e.get("bird"), None);
    }

    #[test]
    fn embedding_header_and_row_validation() {
        assert!(Embeddings::parse("".as_bytes()).is_err());
        assert!(Embeddings::parse("2\n".as_bytes()).is_err());
        // Row with wrong arity.
        assert!(Embeddings::parse("1 3\ncat 1 2\n".as_bytes()).is_err());
        // Count mismatch.
        assert!(Embeddings::parse("2 2\ncat 1 2\n".as_bytes()).is_err());
        // Non-numeric value.
        assert!(Embeddings::parse("1 2\ncat 1 x\n".as_bytes()).is_err());
    }

    #[test]
    fn score_map_scales() {
        let data = "the 1000\nof 100\n";
        let ln = parse_score_map(data.as_bytes(), FreqScale::LnOfCount).unwrap();
        assert!((ln["the"] - 1000f64.ln()).abs() < 1e-12);
        let l10 = parse_score_map(data.as_bytes(), FreqScale::Log10OfCount).unwrap();
        assert!((l10["of"] - 2.0).abs() < 1e-12);
        let asis = parse_score_map(data.as_bytes(), FreqScale::AsIs).unwrap();
        assert_eq!(asis["the"], 1000.0);
        assert!(parse_score_map("x 0\n".as_bytes(), FreqScale::LnOfCount).is_err());
    }

    #[test]
    fn score_map_lowercases_and_skips_comments() {
        let data = "# comment\nGreat 0.8\n\n";
        let m = parse_score_map(data.as_bytes(), FreqScale::AsIs).unwrap();
        assert_eq!(m.get("great"), Some(&0.8));
        assert_eq!(m.len(), 1);
    }

    #[test]
    fn builtin_sets_cover_the_obvious_members() {
        let r = LexResources::builtin();
        assert!(LexResources::in_set(&r.contractions, "Don't"));
        assert!(LexResources::in_set(&r.pronouns_first, "I"));
        assert!(LexResources::in_set(&r.irregular_participles, "broken"));
        assert!(r.word_log_freq.is_empty());
    }
}
