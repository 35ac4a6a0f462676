//! Corpus serialization: one JSON object per line.
//!
//! Record shape:
//! `{"id": "...", "platform": "IG|TU|TW", "text": "...", "tags": [...],
//!   "image_ids": [...], "label": "sarcastic|non_sarcastic|unlabeled"}`
//! `tags` holds only the platform tag-field tags; tags written inside the
//! text are recovered by tokenizing it. `tags`, `image_ids` and `label` may
//! be omitted and default to empty / `unlabeled`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{tokenize_with, EmojiTable, Label, Platform, Post};

#[derive(Debug, Serialize, Deserialize)]
struct PostRecord {
    id: String,
    platform: Platform,
    text: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    tags: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    image_ids: Vec<String>,
    #[serde(default = "unlabeled")]
    label: Label,
}

fn unlabeled() -> Label {
    Label::Unlabeled
}

/// Reads a corpus file, tokenizing with `table` and validating per-platform
/// image bounds. Blank lines are skipped; parse errors carry line numbers.
pub fn read_corpus_with<R: Read>(reader: R, table: &EmojiTable) -> Result<Vec<Post>> {
    let reader = BufReader::new(reader);
    let mut posts = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: PostRecord = serde_json::from_str(&line).map_err(|e| Error::Malformed {
            what: "corpus record",
            line: lineno + 1,
            msg: e.to_string(),
        })?;
        let post = Post::new_with(&rec.id, rec.platform, &rec.text, table)
            .with_field_tags(&rec.tags)
            .with_images(&rec.image_ids)
            .with_label(rec.label);
        post.validate_image_bounds().map_err(|e| Error::Malformed {
            what: "corpus record",
            line: lineno + 1,
            msg: e.to_string(),
        })?;
        posts.push(post);
    }
    Ok(posts)
}

/// Reads a corpus file with the built-in emoji table.
pub fn read_corpus<P: AsRef<Path>>(path: P) -> Result<Vec<Post>> {
    read_corpus_with(File::open(path)?, EmojiTable::default_table())
}

/// Writes posts back to the line-per-record format. The text-tag/field-tag
/// boundary is recovered by tokenizing `raw_text`, so a write/read round trip
/// reproduces the posts exactly.
pub fn write_corpus<P: AsRef<Path>>(path: P, posts: &[Post]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for p in posts {
        let (_, text_tags, _) = tokenize_with(&p.raw_text, EmojiTable::default_table());
        let field_tags = p.hashtags[text_tags.len().min(p.hashtags.len())..].to_vec();
        let rec = PostRecord {
            id: p.id.clone(),
            platform: p.platform,
            text: p.raw_text.clone(),
            tags: field_tags,
            image_ids: p.image_ids.clone(),
            label: p.label,
        };
        serde_json::to_writer(&mut w, &rec).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}
