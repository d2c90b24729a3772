//! JSON-lines catalog of near-factorizations. One writer thread owns the
//! file; producers send records over a channel, so lines land in send order.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::mpsc::{self, Sender};
use std::thread::JoinHandle;

use anyhow::{bail, Context, Result};
use nearfact::{GroupSpec, GroupSubset, MateAlgorithm, NearFactorization, Strategy};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogRecord {
    pub v: u32,
    pub group: String,
    pub r: u64,
    pub s: u64,
    pub lambda: u64,
    #[serde(rename = "A")]
    pub a: Vec<Vec<u64>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<u64>>,
    pub strategy: Strategy,
    pub algorithm: MateAlgorithm,
    /// RFC 3339, UTC.
    pub timestamp: String,
    pub elapsed_ms: u64,
}

impl CatalogRecord {
    pub fn new(nf: &NearFactorization, strategy: Strategy, elapsed_ms: u64) -> Self {
        CatalogRecord {
            v: SCHEMA_VERSION,
            group: nf.group.literal(),
            r: nf.a.len() as u64,
            s: nf.b.len() as u64,
            lambda: nf.lambda,
            a: nf.a.to_tuples(),
            b: nf.b.to_tuples(),
            strategy,
            algorithm: MateAlgorithm::Sparse,
            timestamp: chrono::Utc::now().to_rfc3339(),
            elapsed_ms,
        }
    }

    /// Rebuilds the pair, failing unless it verifies.
    pub fn near_factorization(&self) -> Result<NearFactorization> {
        if self.v != SCHEMA_VERSION {
            bail!("unsupported catalog schema version {}", self.v);
        }
        let g: GroupSpec = self.group.parse()?;
        let a = GroupSubset::from_tuples(&g, &self.a)?;
        let b = GroupSubset::from_tuples(&g, &self.b)?;
        if a.len() as u64 != self.r || b.len() as u64 != self.s {
            bail!("record sizes ({}, {}) do not match its sets", self.r, self.s);
        }
        Ok(NearFactorization::new(&g, a, b, self.lambda)?)
    }
}

/// Reads every record and re-verifies it.
pub fn load(path: &Path) -> Result<Vec<(CatalogRecord, NearFactorization)>> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(f).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: CatalogRecord =
            serde_json::from_str(&line).with_context(|| format!("{}:{}: malformed record", path.display(), i + 1))?;
        let nf = rec
            .near_factorization()
            .with_context(|| format!("{}:{}: record does not verify", path.display(), i + 1))?;
        out.push((rec, nf));
    }
    Ok(out)
}

/// Handle to the writer thread.
pub struct CatalogWriter {
    tx: Option<Sender<CatalogRecord>>,
    handle: Option<JoinHandle<Result<usize>>>,
    path: PathBuf,
}

impl CatalogWriter {
    pub fn spawn(path: &Path) -> Result<Self> {
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .with_context(|| format!("opening catalog {}", path.display()))?;
        let (tx, rx) = mpsc::channel::<CatalogRecord>();
        let handle = std::thread::spawn(move || -> Result<usize> {
            let mut w = BufWriter::new(file);
            let mut n = 0;
            for rec in rx {
                serde_json::to_writer(&mut w, &rec)?;
                w.write_all(b"\n")?;
                w.flush()?;
                n += 1;
            }
            Ok(n)
        });
        Ok(CatalogWriter { tx: Some(tx), handle: Some(handle), path: path.to_path_buf() })
    }

    pub fn sender(&self) -> Sender<CatalogRecord> {
        self.tx.clone().expect("writer is open")
    }

    pub fn send(&self, rec: CatalogRecord) -> Result<()> {
        self.tx
            .as_ref()
            .expect("writer is open")
            .send(rec)
            .context("catalog writer stopped")
    }

    /// Closes the channel and waits for the writer. Returns the number of
    /// records written.
    pub fn finish(mut self) -> Result<usize> {
        self.tx.take();
        let h = self.handle.take().expect("joined once");
        h.join()
            .map_err(|_| anyhow::anyhow!("catalog writer for {} panicked", self.path.display()))?
    }
}

impl Drop for CatalogWriter {
    fn drop(&mut self) {
        self.tx.take();
        if let Some(h) = self.handle.take() {
            let _ = h.join();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_reject_tampering() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cat.jsonl");
        let g: GroupSpec = "Z7".parse().unwrap();
        let nf = NearFactorization::new(
            &g,
            GroupSubset::parse(&g, "0,3").unwrap(),
            GroupSubset::parse(&g, "1,2,3").unwrap(),
            1,
        )
        .unwrap();
        let w = CatalogWriter::spawn(&path).unwrap();
        w.send(CatalogRecord::new(&nf, Strategy::Plain, 3)).unwrap();
        w.send(CatalogRecord::new(&nf.swapped(), Strategy::Plain, 4)).unwrap();
        assert_eq!(w.finish().unwrap(), 2);
        let recs = load(&path).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].1, nf);
        assert_eq!(recs[0].0.v, 1);

        let text = std::fs::read_to_string(&path).unwrap().replacen("[3]", "[4]", 1);
        std::fs::write(&path, text).unwrap();
        assert!(load(&path).is_err());
    }
}
