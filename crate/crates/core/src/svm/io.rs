//! Model file format, version 1.
//!
//! Little-endian throughout:
//!
//! ```text
//! ┌──────────────────────────────────────────────────────────┐
//! │ magic  "SVMM"                                  4 bytes   │
//! │ version u32                                    = 1       │
//! │ c f64, bias f64, row_normalize u8                        │
//! │ block count u32                                          │
//! │ per block: name length u32, name bytes (utf-8), dim u64  │
//! │ weight count u64, weights f64 * count                    │
//! └──────────────────────────────────────────────────────────┘
//! ```
//!
//! Block offsets are not stored; they are recomputed from the dims, which is
//! the same arithmetic the layout itself uses. A write/read round trip
//! preserves every bit of every float.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::featvec::{Block, BlockValue, FeatureVector};

use super::SvmModel;

const MAGIC: &[u8; 4] = b"SVMM";
const VERSION: u32 = 1;

fn bad(msg: impl Into<String>) -> Error {
    Error::BadModelFile(msg.into())
}

fn read_exact<R: Read>(r: &mut R, buf: &mut [u8]) -> Result<()> {
    r.read_exact(buf).map_err(|e| bad(format!("truncated: {e}")))
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    read_exact(r, &mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    read_exact(r, &mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    let mut b = [0u8; 8];
    read_exact(r, &mut b)?;
    Ok(f64::from_le_bytes(b))
}

fn read_string<R: Read>(r: &mut R) -> Result<String> {
    let len = read_u32(r)? as usize;
    if len > 1 << 20 {
        return Err(bad(format!("unreasonable name length {len}")));
    }
    let mut buf = vec![0u8; len];
    read_exact(r, &mut buf)?;
    String::from_utf8(buf).map_err(|e| bad(format!("name not utf-8: {e}")))
}

pub fn write_model<P: AsRef<Path>>(path: P, model: &SvmModel) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&model.c.to_le_bytes())?;
    w.write_all(&model.bias.to_le_bytes())?;
    w.write_all(&[model.row_normalize as u8])?;
    let entries = model.layout.entries();
    w.write_all(&(entries.len() as u32).to_le_bytes())?;
    for e in entries {
        w.write_all(&(e.name.len() as u32).to_le_bytes())?;
        w.write_all(e.name.as_bytes())?;
        w.write_all(&(e.dim as u64).to_le_bytes())?;
    }
    w.write_all(&(model.weights.len() as u64).to_le_bytes())?;
    for x in &model.weights {
        w.write_all(&x.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_model<P: AsRef<Path>>(path: P) -> Result<SvmModel> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 4];
    read_exact(&mut r, &mut magic)?;
    if &magic != MAGIC {
        return Err(bad("wrong magic"));
    }
    let version = read_u32(&mut r)?;
    if version != VERSION {
        return Err(bad(format!("unsupported version {version}")));
    }
    let c = read_f64(&mut r)?;
    let bias = read_f64(&mut r)?;
    let mut flag = [0u8; 1];
    read_exact(&mut r, &mut flag)?;
    let row_normalize = match flag[0] {
        0 => false,
        1 => true,
        other => return Err(bad(format!("bad normalize flag {other}"))),
    };
    let n_blocks = read_u32(&mut r)? as usize;
    // Rebuild the layout through a skeleton vector so offsets can never
    // disagree with FeatureVector's own arithmetic.
    let mut skeleton = FeatureVector::new();
    for _ in 0..n_blocks {
        let name = read_string(&mut r)?;
        let dim = read_u64(&mut r)? as usize;
        skeleton
            .push(Block {
                name,
                value: BlockValue::Sparse { dim, indices: Vec::new() },
            })
            .map_err(|e| bad(e.to_string()))?;
    }
    let layout = skeleton.layout();
    let n_weights = read_u64(&mut r)? as usize;
    if n_weights != layout.total_dim() {
        return Err(bad(format!(
            "weight count {n_weights} does not match layout dim {}",
            layout.total_dim()
        )));
    }
    let mut weights = Vec::with_capacity(n_weights);
    for _ in 0..n_weights {
        weights.push(read_f64(&mut r)?);
    }
    let mut trailing = [0u8; 1];
    if r.read(&mut trailing)? != 0 {
        return Err(bad("trailing bytes"));
    }
    Ok(SvmModel {
        weights,
        bias,
        c,
        layout,
        row_normalize,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::featvec::Block;
    use crate::svm::{train, TrainConfig};

    fn sample_model() -> SvmModel {
        let mk = |a: f64, b: f64| {
            let mut v = FeatureVector::new();
            v.push(Block::dense("d", vec![a, b])).unwrap();
            v.push(Block::sparse("s", 3, vec![(a > 0.0) as usize]).unwrap())
                .unwrap();
            v
        };
        let inputs = vec![mk(1.0, 0.2), mk(-1.0, -0.4), mk(0.8, 0.1), mk(-0.7, 0.3)];
        train(&inputs, &[1, -1, 1, -1], &TrainConfig::default()).unwrap()
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.svm");
        let model = sample_model();
        write_model(&path, &model).unwrap();
        let back = read_model(&path).unwrap();
        assert_eq!(back, model);
        for (a, b) in model.weights.iter().zip(&back.weights) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        assert_eq!(model.bias.to_bits(), back.bias.to_bits());
    }

    #[test]
    fn corrupt_files_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.svm");
        let model = sample_model();
        write_model(&path, &model).unwrap();

        let bytes = std::fs::read(&path).unwrap();
        // Wrong magic.
        let mut bad_bytes = bytes.clone();
        bad_bytes[0] = b'X';
        std::fs::write(&path, &bad_bytes).unwrap();
        assert!(read_model(&path).is_err());
        // Truncated.
        std::fs::write(&path, &bytes[..bytes.len() - 3]).unwrap();
        assert!(read_model(&path).is_err());
        // Trailing garbage.
        let mut long = bytes.clone();
        long.push(0);
        std::fs::write(&path, &long).unwrap();
        assert!(read_model(&path).is_err());
        // Wrong version.
        let mut wrong_ver = bytes.clone();
        wrong_ver[4] = 9;
        std::fs::write(&path, &wrong_ver).unwrap();
        assert!(read_model(&path).is_err());
    }
}
