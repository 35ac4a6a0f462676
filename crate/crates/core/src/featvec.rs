//! Block-structured feature vectors.
//!
//! A [`FeatureVector`] is an ordered list of named blocks. Each block is
//! either dense (`Vec<f64>`) or sparse binary (sorted indices into a declared
//! dimension). Classifiers see the concatenation of all blocks in order; the
//! [`Layout`] records block names, offsets and widths so that a model can
//! refuse inputs assembled differently from its training data.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Payload of a single block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum BlockValue {
    /// Explicit values for every coordinate.
    Dense(Vec<f64>),
    /// Binary indicator block: `indices` are the coordinates equal to 1.
    /// Invariant: sorted, deduplicated, every index `< dim`.
    Sparse { dim: usize, indices: Vec<usize> },
}

impl BlockValue {
    /// Builds a sparse block, sorting and deduplicating `indices`.
    pub fn sparse(dim: usize, mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        if let Some(&last) = indices.last() {
            if last >= dim {
                return Err(Error::DimMismatch {
                    expected: dim,
                    got: last + 1,
                });
            }
        }
        Ok(BlockValue::Sparse { dim, indices })
    }

    pub fn dim(&self) -> usize {
        match self {
            BlockValue::Dense(v) => v.len(),
            BlockValue::Sparse { dim, .. } => *dim,
        }
    }
}

/// A named block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub name: String,
    pub value: BlockValue,
}

impl Block {
    pub fn dense(name: &str, values: Vec<f64>) -> Self {
        Block {
            name: name.to_string(),
            value: BlockValue::Dense(values),
        }
    }

    pub fn sparse(name: &str, dim: usize, indices: Vec<usize>) -> Result<Self> {
        Ok(Block {
            name: name.to_string(),
            value: BlockValue::sparse(dim, indices)?,
        })
    }
}

/// Block names with their offsets and widths in concatenation order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    entries: Vec<LayoutEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutEntry {
    pub name: String,
    pub offset: usize,
    pub dim: usize,
}

impl Layout {
    pub fn entries(&self) -> &[LayoutEntry] {
        &self.entries
    }

    pub fn total_dim(&self) -> usize {
        self.entries.last().map_or(0, |e| e.offset + e.dim)
    }

    pub fn offset_of(&self, name: &str) -> Option<usize> {
        self.entries.iter().find(|e| e.name == name).map(|e| e.offset)
    }
}

/// Ordered collection of uniquely named blocks.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct FeatureVector {
    blocks: Vec<Block>,
}

impl FeatureVector {
    pub fn new() -> Self {
        FeatureVector { blocks: Vec::new() }
    }

    /// Single-block vector.
    pub fn from_block(block: Block) -> Self {
        FeatureVector {
            blocks: vec![block],
        }
    }

    /// Appends a block. Fails if a block with the same name is already present.
    pub fn push(&mut self, block: Block) -> Result<()> {
        if self.blocks.iter().any(|b| b.name == block.name) {
            return Err(Error::DuplicateBlock(block.name));
        }
        self.blocks.push(block);
        Ok(())
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn get(&self, name: &str) -> Option<&BlockValue> {
        self.blocks
            .iter()
            .find(|b| b.name == name)
            .map(|b| &b.value)
    }

    pub fn total_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.value.dim()).sum()
    }

    pub fn layout(&self) -> Layout {
        let mut entries = Vec::with_capacity(self.blocks.len());
        let mut offset = 0;
        for b in &self.blocks {
            let dim = b.value.dim();
            entries.push(LayoutEntry {
                name: b.name.clone(),
                offset,
                dim,
            });
            offset += dim;
        }
        Layout { entries }
    }

    /// Nonzero coordinates as `(global_index, value)` pairs in index order.
    /// Dense zeros are skipped, so the iterator is a faithful sparse view.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        let mut out = Vec::new();
        let mut offset = 0;
        for b in &self.blocks {
            match &b.value {
                BlockValue::Dense(v) => {
                    for (i, &x) in v.iter().enumerate() {
                        if x != 0.0 {
                            out.push((offset + i, x));
                        }
                    }
                    offset += v.len();
                }
                BlockValue::Sparse { dim, indices } => {
                    for &i in indices {
                        out.push((offset + i, 1.0));
                    }
                    offset += dim;
                }
            }
        }
        out.into_iter()
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.total_dim()];
        for (i, x) in self.nonzero() {
            v[i] = x;
        }
        v
    }
}

/// Concatenates feature vectors into one, preserving block order.
/// Fails on a duplicate block name across parts. `concat([x]) == x`.
pub fn concat<I>(parts: I) -> Result<FeatureVector>
where
    I: IntoIterator<Item = FeatureVector>,
{
    let mut out = FeatureVector::new();
    for part in parts {
        for block in part.blocks {
            out.push(block)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fv(dims: &[(&str, usize)]) -> FeatureVector {
        let mut v = FeatureVector::new();
        for (name, d) in dims {
            v.push(Block::dense(name, vec![1.0; *d])).unwrap();
        }
        v
    }

    #[test]
    fn concat_of_5_and_3_dims_gives_8_with_offsets() {
        let a = fv(&[("a", 5)]);
        let b = fv(&[("b", 3)]);
        let c = concat([a, b]).unwrap();
        assert_eq!(c.total_dim(), 8);
        let layout = c.layout();
        assert_eq!(layout.offset_of("a"), Some(0));
        assert_eq!(layout.offset_of("b"), Some(5));
        assert_eq!(layout.total_dim(), 8);
    }

    #[test]
    fn concat_of_single_vector_is_identity() {
        let a = fv(&[("a", 4), ("b", 2)]);
        let c = concat([a.clone()]).unwrap();
        assert_eq!(c, a);
    }

    #[test]
    fn duplicate_block_name_is_rejected() {
        let a = fv(&[("a", 2)]);
        let b = fv(&[("a", 3)]);
        match concat([a, b]) {
            Err(Error::DuplicateBlock(name)) => assert_eq!(name, "a"),
            other => panic!("expected duplicate-block error, got {other:?}"),
        }
    }

    #[test]
    fn sparse_indices_are_sorted_deduped_and_bounded() {
        let b = BlockValue::sparse(6, vec![4, 1, 4, 2]).unwrap();
        match &b {
            BlockValue::Sparse { dim, indices } => {
                assert_eq!(*dim, 6);
                assert_eq!(indices, &vec![1, 2, 4]);
            }
            _ => unreachable!(),
        }
        assert!(BlockValue::sparse(3, vec![3]).is_err());
    }

    #[test]
    fn nonzero_uses_global_offsets_and_skips_dense_zeros() {
        let mut v = FeatureVector::new();
        v.push(Block::dense("d", vec![0.0, 2.5, 0.0])).unwrap();
        v.push(Block::sparse("s", 4, vec![0, 3]).unwrap()).unwrap();
        let got: Vec<_> = v.nonzero().collect();
        assert_eq!(got, vec![(1, 2.5), (3, 1.0), (6, 1.0)]);
        assert_eq!(v.to_dense(), vec![0.0, 2.5, 0.0, 1.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn empty_vector_has_zero_dim_and_empty_layout() {
        let v = FeatureVector::new();
        assert_eq!(v.total_dim(), 0);
        assert_eq!(v.layout().total_dim(), 0);
        assert_eq!(v.nonzero().count(), 0);
    }
}
