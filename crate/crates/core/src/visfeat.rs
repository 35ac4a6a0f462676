//! Visual features.
//!
//! Two representations per image: a sparse one-hot over a fixed concept
//! vocabulary (detected visual concepts; detector confidences do not change
//! the encoding) and a dense pre-extracted representation vector. The
//! detector and the dense extractor live outside this crate; here we only
//! load their outputs and aggregate them per post.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use crate::corpus::Post;
use crate::error::{Error, Result};
use crate::featvec::Block;

pub const VSF_BLOCK: &str = "vsf";
pub const AVR_BLOCK: &str = "avr";

/// Fixed list of recognizable visual concepts. Indices follow file order.
#[derive(Debug, Clone, PartialEq)]
pub struct ConceptVocab {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl ConceptVocab {
    pub fn new(names: Vec<String>) -> Result<Self> {
        let mut index = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::InvalidConfig(format!("duplicate concept `{n}`")));
            }
        }
        Ok(ConceptVocab { names, index })
    }

    /// One concept name per line; `#` comments and blank lines ignored.
    pub fn parse<R: Read>(reader: R) -> Result<Self> {
        let reader = BufReader::new(reader);
        let mut names = Vec::new();
        for line in reader.lines() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            names.push(line.to_string());
        }
        ConceptVocab::new(names)
    }

    pub fn from_file<P: AsRef<Path>>(path: P) -> Result<Self> {
        ConceptVocab::parse(File::open(path)?)
    }

    pub fn save<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let mut w = std::io::BufWriter::new(File::create(path)?);
        for n in &self.names {
            writeln!(w, "{n}")?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// One detected concept, with the detector's confidence when it reported one.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectedConcept {
    pub name: String,
    pub confidence: Option<f64>,
}

/// Everything known about one image.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ImageFeatures {
    pub concepts: Vec<DetectedConcept>,
    pub avr: Option<Vec<f64>>,
}

/// Per-image feature tables for a whole corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureStore {
    vocab: ConceptVocab,
    images: HashMap<String, ImageFeatures>,
    avr_dim: Option<usize>,
}

impl FeatureStore {
    pub fn new(vocab: ConceptVocab) -> Self {
        FeatureStore {
            vocab,
            images: HashMap::new(),
            avr_dim: None,
        }
    }

    pub fn vocab(&self) -> &ConceptVocab {
        &self.vocab
    }

    /// Dimension of the dense vectors, once any have been loaded.
    pub fn avr_dim(&self) -> Option<usize> {
        self.avr_dim
    }

    pub fn contains(&self, image_id: &str) -> bool {
        self.images.contains_key(image_id)
    }

    pub fn get(&self, image_id: &str) -> Option<&ImageFeatures> {
        self.images.get(image_id)
    }

    pub fn insert_concepts(&mut self, image_id: &str, concepts: Vec<DetectedConcept>) -> Result<()> {
        for c in &concepts {
            if self.vocab.index_of(&c.name).is_none() {
                return Err(Error::UnknownConcept(c.name.clone()));
            }
        }
        self.images.entry(image_id.to_string()).or_default().concepts = concepts;
        Ok(())
    }

    pub fn insert_avr(&mut self, image_id: &str, avr: Vec<f64>) -> Result<()> {
        match self.avr_dim {
            None => self.avr_dim = Some(avr.len()),
            Some(d) if d != avr.len() => {
                return Err(Error::DimMismatch {
                    expected: d,
                    got: avr.len(),
                })
            }
            Some(_) => {}
        }
        self.images.entry(image_id.to_string()).or_default().avr = Some(avr);
        Ok(())
    }

    /// Loads a concept file: `image_id concept[:confidence] ...` per line.
    /// An id alone registers an image with no detected concepts.
    pub fn load_concepts<R: Read>(&mut self, reader: R) -> Result<()> {
        let reader = BufReader::new(reader);
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let malformed = |msg: String| Error::Malformed {
                what: "concept file",
                line: lineno + 1,
                msg,
            };
            let mut it = line.split_whitespace();
            let image_id = it.next().unwrap().to_string();
            let mut concepts = Vec::new();
            for tok in it {
                let (name, confidence) = match tok.rsplit_once(':') {
                    Some((n, c)) => {
                        let conf: f64 = c
                            .parse()
                            .map_err(|e| malformed(format!("bad confidence `{c}`: {e}")))?;
                        (n.to_string(), Some(conf))
                    }
                    None => (tok.to_string(), None),
                };
                concepts.push(DetectedConcept { name, confidence });
            }
            self.insert_concepts(&image_id, concepts)?;
        }
        Ok(())
    }

    pub fn load_concepts_file<P: AsRef<Path>>(&mut self, path: P) -> Result<()> {
        self.load_concepts(File::open(path)?)
    }

    /// Loads dense vectors: a header line with the dimension, then
    /// `image_id v1 .. vdim` per line. With `expected` set, the header must
    /// match it.
    pub fn load_avr<R: Read>(&mut self, reader: R, expected: Option<usize>) -> Result<()> {
        let reader = BufReader::new(reader);
        let mut lines = reader.lines().enumerate();
        let malformed = |line: usize, msg: String| Error::Malformed {
            what: "image vector file",
            line,
            msg,
        };
        let dim = loop {
            match lines.next() {
                None => return Err(malformed(1, "missing header".to_string())),
                Some((lineno, line)) => {
                    let line = line?;
                    let line = line.trim();
                    if line.is_empty() || line.starts_with('#') {
                        continue;
                    }
                    let dim: usize = line
                        .parse()
                        .map_err(|e| malformed(lineno + 1, format!("bad dimension: {e}")))?;
                    break dim;
                }
            }
        };
        if let Some(exp) = expected {
            if dim != exp {
                return Err(Error::DimMismatch {
                    expected: exp,
                    got: dim,
                });
            }
        }
        for (lineno, line) in lines {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let image_id = it.next().unwrap().to_string();
            let values: Vec<f64> = it
                .map(|t| {
                    t.parse::<f64>()
                        .map_err(|e| malformed(lineno + 1, format!("bad value `{t}`: {e}")))
                })
                .collect::<Result<_>>()?;
            if values.len() != dim {
                return Err(malformed(
                    lineno + 1,
                    format!("expected {dim} values, got {}", values.len()),
                ));
            }
            self.insert_avr(&image_id, values)?;
        }
        if self.avr_dim.is_none() {
            // Header alone still fixes the dimension.
            self.avr_dim = Some(dim);
        }
        Ok(())
    }

    pub fn load_avr_file<P: AsRef<Path>>(&mut self, path: P, expected: Option<usize>) -> Result<()> {
        self.load_avr(File::open(path)?, expected)
    }

    /// Writes the dense vectors back out (header, then sorted by image id).
    pub fn save_avr<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let mut w = std::io::BufWriter::new(File::create(path)?);
        let dim = self.avr_dim.unwrap_or(0);
        writeln!(w, "{dim}")?;
        let mut ids: Vec<&String> = self
            .images
            .iter()
            .filter(|(_, f)| f.avr.is_some())
            .map(|(id, _)| id)
            .collect();
        ids.sort();
        for id in ids {
            let avr = self.images[id].avr.as_ref().unwrap();
            write!(w, "{id}")?;
            for v in avr {
                write!(w, " {v}")?;
            }
            writeln!(w)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Writes the concept table (sorted by image id, confidences preserved).
    pub fn save_concepts<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        let mut w = std::io::BufWriter::new(File::create(path)?);
        let mut ids: Vec<&String> = self.images.keys().collect();
        ids.sort();
        for id in ids {
            write!(w, "{id}")?;
            for c in &self.images[id].concepts {
                match c.confidence {
                    Some(conf) => write!(w, " {}:{}", c.name, conf)?,
                    None => write!(w, " {}", c.name)?,
                }
            }
            writeln!(w)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Sparse one-hot of an image's detected concepts over `vocab`.
/// Confidences are ignored: detection is detection. Unknown concepts error.
pub fn vsf_onehot(image: &ImageFeatures, vocab: &ConceptVocab) -> Result<Block> {
    let mut indices = Vec::with_capacity(image.concepts.len());
    for c in &image.concepts {
        match vocab.index_of(&c.name) {
            Some(i) => indices.push(i),
            None => return Err(Error::UnknownConcept(c.name.clone())),
        }
    }
    Block::sparse(VSF_BLOCK, vocab.len(), indices)
}

/// How to combine the images of a multi-image post.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MultiImagePolicy {
    /// Concepts: union over images. Dense vectors: elementwise mean.
    #[default]
    UnionMean,
    /// Use only the first image.
    FirstImage,
}

/// Aggregation options for [`post_image_blocks`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ImagePolicy {
    pub multi: MultiImagePolicy,
    /// Drops detections whose reported confidence is below this. Detections
    /// without a confidence always pass. 0 keeps everything.
    pub confidence_threshold: f64,
}

/// Per-post visual blocks: the concept one-hot, and the dense vector when
/// the store has one. Every image id must be known to the store; a post with
/// dense vectors for only some of its images is inconsistent and errors.
pub fn post_image_blocks(
    post: &Post,
    store: &FeatureStore,
    policy: &ImagePolicy,
) -> Result<(Block, Option<Block>)> {
    if post.image_ids.is_empty() {
        return Err(Error::MissingImage(format!("post `{}` has no images", post.id)));
    }
    let selected: Vec<&str> = match policy.multi {
        MultiImagePolicy::UnionMean => post.image_ids.iter().map(String::as_str).collect(),
        MultiImagePolicy::FirstImage => vec![post.image_ids[0].as_str()],
    };

    let mut indices = Vec::new();
    let mut avrs: Vec<&Vec<f64>> = Vec::new();
    let mut missing_avr = 0usize;
    for id in &selected {
        let img = store
            .get(id)
            .ok_or_else(|| Error::MissingImage((*id).to_string()))?;
        for c in &img.concepts {
            if c.confidence.is_some_and(|conf| conf < policy.confidence_threshold) {
                continue;
            }
            match store.vocab().index_of(&c.name) {
                Some(i) => indices.push(i),
                None => return Err(Error::UnknownConcept(c.name.clone())),
            }
        }
        match &img.avr {
            Some(v) => avrs.push(v),
            None => missing_avr += 1,
        }
    }
    let vsf = Block::sparse(VSF_BLOCK, store.vocab().len(), indices)?;

    let avr = if avrs.is_empty() {
        None
    } else if missing_avr > 0 {
        let without = selected
            .iter()
            .find(|id| store.get(id).is_some_and(|f| f.avr.is_none()))
            .unwrap();
        return Err(Error::MissingImage(format!(
            "image `{without}` has no dense vector but sibling images do"
        )));
    } else {
        let dim = avrs[0].len();
        let mut mean = vec![0.0; dim];
        for v in &avrs {
            for (m, x) in mean.iter_mut().zip(v.iter()) {
                *m += x;
            }
        }
        for m in &mut mean {
            *m /= avrs.len() as f64;
        }
        Some(Block::dense(AVR_BLOCK, mean))
    };
    Ok((vsf, avr))
}
