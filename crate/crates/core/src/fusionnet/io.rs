//! Checkpoint file format, version 1.
//!
//! Little-endian throughout:
//!
//! ```text
//! ┌──────────────────────────────────────────────────────────┐
//! │ magic "FNET", version u32 = 1                            │
//! │ mode u8 (0 text-only, 1 image-only, 2 fusion)            │
//! │ text_vocab u64, hidden u64, image_dim u64                │
//! │ vocab fingerprint u64 (0 when no vocabulary applies)     │
//! │ batch_size u64, epochs u64                               │
//! │ learning_rate f64, momentum f64, seed u64                │
//! │ parameter count u64, parameters f64 * count              │
//! └──────────────────────────────────────────────────────────┘
//! ```
//!
//! The fingerprint ties a checkpoint to the unigram vocabulary its text
//! indices refer to; loading code compares it before predicting. Round
//! trips preserve every parameter bit.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

use super::{FusionNet, NetConfig, NetMode, NetTrainConfig};

const MAGIC: &[u8; 4] = b"FNET";
const VERSION: u32 = 1;

/// Everything a checkpoint stores.
#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub net: FusionNet,
    pub train_cfg: NetTrainConfig,
    pub vocab_fingerprint: u64,
}

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

fn mode_byte(mode: NetMode) -> u8 {
    match mode {
        NetMode::TextOnly => 0,
        NetMode::ImageOnly => 1,
        NetMode::Fusion => 2,
    }
}

fn byte_mode(b: u8) -> Result<NetMode> {
    match b {
        0 => Ok(NetMode::TextOnly),
        1 => Ok(NetMode::ImageOnly),
        2 => Ok(NetMode::Fusion),
        other => Err(bad(format!("bad mode byte {other}"))),
    }
}

pub fn write_checkpoint<P: AsRef<Path>>(path: P, ckpt: &Checkpoint) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    let cfg = ckpt.net.config();
    let t = &ckpt.train_cfg;
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    w.write_all(&[mode_byte(ckpt.net.mode())])?;
    w.write_all(&(cfg.text_vocab as u64).to_le_bytes())?;
    w.write_all(&(cfg.hidden as u64).to_le_bytes())?;
    w.write_all(&(cfg.image_dim as u64).to_le_bytes())?;
    w.write_all(&ckpt.vocab_fingerprint.to_le_bytes())?;
    w.write_all(&(t.batch_size as u64).to_le_bytes())?;
    w.write_all(&(t.epochs as u64).to_le_bytes())?;
    w.write_all(&t.learning_rate.to_le_bytes())?;
    w.write_all(&t.momentum.to_le_bytes())?;
    w.write_all(&t.seed.to_le_bytes())?;
    w.write_all(&(ckpt.net.param_count() as u64).to_le_bytes())?;
    for p in ckpt.net.params() {
        w.write_all(&p.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_checkpoint<P: AsRef<Path>>(path: P) -> Result<Checkpoint> {
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
    let mut mode = [0u8; 1];
    read_exact(&mut r, &mut mode)?;
    let mode = byte_mode(mode[0])?;
    let text_vocab = read_u64(&mut r)? as usize;
    let hidden = read_u64(&mut r)? as usize;
    let image_dim = read_u64(&mut r)? as usize;
    let vocab_fingerprint = read_u64(&mut r)?;
    let batch_size = read_u64(&mut r)? as usize;
    let epochs = read_u64(&mut r)? as usize;
    let learning_rate = read_f64(&mut r)?;
    let momentum = read_f64(&mut r)?;
    let seed = read_u64(&mut r)?;
    let count = read_u64(&mut r)? as usize;
    let cfg = NetConfig {
        text_vocab,
        hidden,
        image_dim,
    };
    let mut params = Vec::with_capacity(count);
    for _ in 0..count {
        params.push(read_f64(&mut r)?);
    }
    let mut trailing = [0u8; 1];
    if r.read(&mut trailing)? != 0 {
        return Err(bad("trailing bytes"));
    }
    let net = FusionNet::from_params(cfg, mode, params)
        .map_err(|e| bad(format!("inconsistent shape: {e}")))?;
    Ok(Checkpoint {
        net,
        train_cfg: NetTrainConfig {
            mode,
            batch_size,
            epochs,
            learning_rate,
            momentum,
            seed,
        },
        vocab_fingerprint,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusionnet::{train, Example};

    fn sample() -> Checkpoint {
        let data: Vec<Example> = (0..10)
            .map(|i| Example {
                text: vec![i % 3],
                avr: vec![i as f64, 1.0 - i as f64],
                label: i % 2,
            })
            .collect();
        let cfg = NetConfig {
            text_vocab: 3,
            hidden: 4,
            image_dim: 2,
        };
        let train_cfg = NetTrainConfig {
            epochs: 2,
            batch_size: 4,
            ..NetTrainConfig::default()
        };
        let (net, _) = train(&data, cfg, &train_cfg).unwrap();
        Checkpoint {
            net,
            train_cfg,
            vocab_fingerprint: 0xDEADBEEF,
        }
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("net.fnet");
        let ckpt = sample();
        write_checkpoint(&path, &ckpt).unwrap();
        let back = read_checkpoint(&path).unwrap();
        assert_eq!(back, ckpt);
        for (a, b) in ckpt.net.params().iter().zip(back.net.params()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn corrupt_checkpoints_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("net.fnet");
        let ckpt = sample();
        write_checkpoint(&path, &ckpt).unwrap();
        let bytes = std::fs::read(&path).unwrap();

        let mut wrong_magic = bytes.clone();
        wrong_magic[1] = b'X';
        std::fs::write(&path, &wrong_magic).unwrap();
        assert!(read_checkpoint(&path).is_err());

        std::fs::write(&path, &bytes[..bytes.len() - 1]).unwrap();
        assert!(read_checkpoint(&path).is_err());

        let mut trailing = bytes.clone();
        trailing.push(7);
        std::fs::write(&path, &trailing).unwrap();
        assert!(read_checkpoint(&path).is_err());

        // Parameter count inconsistent with the declared shape.
        let mut bad_count = bytes.clone();
        // count field sits right before the params; flip its low byte.
        let count_off = 4 + 4 + 1 + 8 * 3 + 8 + 8 * 2 + 8 * 2 + 8;
        bad_count[count_off] ^= 1;
        std::fs::write(&path, &bad_count).unwrap();
        assert!(read_checkpoint(&path).is_err());
    }
}
