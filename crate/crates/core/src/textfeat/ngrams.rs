//! N-gram vocabulary and presence features.
//!
//! N-grams run over a post's full token stream (words, then hashtags, then
//! emoji), lowercased. A bigram is its two tokens joined by a single space,
//! which cannot collide with a unigram because tokens never contain spaces.
//! Vocabulary indices follow the lexicographic order of the n-gram strings,
//! so a vocabulary is fully determined by its key set.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use crate::corpus::Post;
use crate::error::{Error, Result};
use crate::featvec::Block;

/// Highest n-gram order to extract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NgramOrder {
    Unigrams,
    UnigramsAndBigrams,
}

/// Map from n-gram string to feature index.
#[derive(Debug, Clone, PartialEq)]
pub struct NgramVocab {
    /// Sorted n-gram strings; index in this list is the feature index.
    entries: Vec<String>,
    index: HashMap<String, usize>,
    order: NgramOrder,
}

fn stream_lower(post: &Post) -> Vec<String> {
    post.text_tokens().map(|t| t.to_lowercase()).collect()
}

fn for_each_ngram(tokens: &[String], order: NgramOrder, mut f: impl FnMut(String)) {
    for t in tokens {
        f(t.clone());
    }
    if order == NgramOrder::UnigramsAndBigrams {
        for pair in tokens.windows(2) {
            f(format!("{} {}", pair[0], pair[1]));
        }
    }
}

impl NgramVocab {
    /// Builds a vocabulary over `posts`, keeping n-grams that occur at least
    /// `min_count` times in total (occurrences, not posts).
    pub fn build(posts: &[Post], min_count: usize, order: NgramOrder) -> Result<Self> {
        if posts.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let mut counts: HashMap<String, usize> = HashMap::new();
        for p in posts {
            let toks = stream_lower(p);
            for_each_ngram(&toks, order, |g| *counts.entry(g).or_insert(0) += 1);
        }
        let min_count = min_count.max(1);
        let mut entries: Vec<String> = counts
            .into_iter()
            .filter(|(_, c)| *c >= min_count)
            .map(|(g, _)| g)
            .collect();
        entries.sort_unstable();
        Ok(NgramVocab::from_sorted(entries, order))
    }

    fn from_sorted(entries: Vec<String>, order: NgramOrder) -> Self {
        let index = entries
            .iter()
            .enumerate()
            .map(|(i, g)| (g.clone(), i))
            .collect();
        NgramVocab {
            entries,
            index,
            order,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn order(&self) -> NgramOrder {
        self.order
    }

    pub fn lookup(&self, ngram: &str) -> Option<usize> {
        self.index.get(ngram).copied()
    }

    pub fn entries(&self) -> &[String] {
        &self.entries
    }

    /// Binary presence block over this vocabulary, named `name`.
    pub fn features_named(&self, post: &Post, name: &str) -> Block {
        let toks = stream_lower(post);
        let mut indices = Vec::new();
        for_each_ngram(&toks, self.order, |g| {
            if let Some(i) = self.lookup(&g) {
                indices.push(i);
            }
        });
        // Indices are in-range by construction; presence only, so dedup.
        Block::sparse(name, self.len(), indices).expect("vocab indices in range")
    }

    /// Stable fingerprint of the vocabulary content (FNV-1a over entries).
    /// Checkpoints store it so a model refuses a mismatched vocabulary.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf29ce484222325;
        let mut eat = |bytes: &[u8]| {
            for &b in bytes {
                h ^= b as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
        };
        for (i, g) in self.entries.iter().enumerate() {
            eat(&(i as u64).to_le_bytes());
            eat(g.as_bytes());
            eat(b"\n");
        }
        h
    }

    /// Writes `index<TAB>ngram` lines preceded by an order header.
    pub fn save<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let mut w = std::io::BufWriter::new(File::create(path)?);
        let order = match self.order {
            NgramOrder::Unigrams => "unigrams",
            NgramOrder::UnigramsAndBigrams => "unigrams_and_bigrams",
        };
        writeln!(w, "order\t{order}")?;
        for (i, g) in self.entries.iter().enumerate() {
            writeln!(w, "{i}\t{g}")?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn load<P: AsRef<Path>>(path: P) -> Result<Self> {
        NgramVocab::parse(File::open(path)?)
    }

    pub fn parse<R: Read>(reader: R) -> Result<Self> {
        let reader = BufReader::new(reader);
        let mut lines = reader.lines().enumerate();
        let malformed = |line: usize, msg: String| Error::Malformed {
            what: "ngram vocabulary",
            line,
            msg,
        };
        let order = match lines.next() {
            Some((_, Ok(line))) => match line.trim() {
                "order\tunigrams" => NgramOrder::Unigrams,
                "order\tunigrams_and_bigrams" => NgramOrder::UnigramsAndBigrams,
                other => return Err(malformed(1, format!("bad header `{other}`"))),
            },
            Some((_, Err(e))) => return Err(e.into()),
            None => return Err(malformed(1, "empty file".to_string())),
        };
        let mut entries = Vec::new();
        for (lineno, line) in lines {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let (idx, gram) = line
                .split_once('\t')
                .ok_or_else(|| malformed(lineno + 1, "expected `index<TAB>ngram`".into()))?;
            let idx: usize = idx
                .parse()
                .map_err(|e| malformed(lineno + 1, format!("bad index: {e}")))?;
            if idx != entries.len() {
                return Err(malformed(
                    lineno + 1,
                    format!("index {idx} out of order (expected {})", entries.len()),
                ));
            }
            entries.push(gram.to_string());
        }
        let mut sorted = entries.clone();
        sorted.sort_unstable();
        if sorted != entries {
            return Err(malformed(1, "entries not in lexicographic order".into()));
        }
        Ok(NgramVocab::from_sorted(entries, order))
    }
}
