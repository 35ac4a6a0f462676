//! Reproducibility manifest. Every run writes `manifest.json` next to its
//! artifacts: the verb, the root seed, a hash of the resolved configuration
//! and content hashes of every input and output file. The manifest carries
//! no timestamps or host details, so it is itself reproducible: two runs
//! from the same inputs produce byte-identical manifests even when their
//! output directories differ.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use sarcdet::error::Result;

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub verb: String,
    pub seed: u64,
    pub threads: usize,
    /// Hash of the resolved configuration (after flag overrides), not of the
    /// config file, so two files that mean the same thing hash the same.
    pub config_sha256: String,
    /// Input path as configured -> content hash.
    pub inputs: BTreeMap<String, String>,
    /// Output file name relative to the out directory -> content hash.
    pub outputs: BTreeMap<String, String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    let digest = h.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

pub fn hash_file(path: &Path) -> Result<String> {
    Ok(sha256_hex(&fs::read(path)?))
}

impl Manifest {
    pub fn new(verb: &str, seed: u64, threads: usize, config_canonical: &str) -> Manifest {
        Manifest {
            verb: verb.to_string(),
            seed,
            threads,
            config_sha256: sha256_hex(config_canonical.as_bytes()),
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
        }
    }

    pub fn add_input(&mut self, path: &Path) -> Result<()> {
        self.inputs
            .insert(path.display().to_string(), hash_file(path)?);
        Ok(())
    }

    /// Hashes `out_dir/name`, which must already be written.
    pub fn add_output(&mut self, out_dir: &Path, name: &str) -> Result<()> {
        self.outputs
            .insert(name.to_string(), hash_file(&out_dir.join(name))?);
        Ok(())
    }

    pub fn write(&self, out_dir: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        fs::write(out_dir.join("manifest.json"), text)?;
        Ok(())
    }
}
