//! Line-delimited record files and the in-memory index.

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use rank3::block::to_lists;
use rank3::permgroup::canonical_form;
use rank3::TwoPartition;

use crate::record::{Key, MatroidRecord};

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("duplicate record for n={} blocks={:?}", .0.0, .0.1)]
    DuplicateKey(Key),
    #[error("incomplete classification: {0}")]
    IncompleteClassification(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Writes one record per line and rejects repeated keys.
pub struct RecordWriter<W: Write> {
    out: W,
    keys: HashSet<Key>,
}

impl<W: Write> RecordWriter<W> {
    pub fn new(out: W) -> Self {
        RecordWriter {
            out,
            keys: HashSet::new(),
        }
    }

    pub fn push(&mut self, record: &MatroidRecord) -> Result<(), StoreError> {
        if !self.keys.insert(record.key()) {
            return Err(StoreError::DuplicateKey(record.key()));
        }
        serde_json::to_writer(&mut self.out, record).map_err(std::io::Error::from)?;
        self.out.write_all(b"\n")?;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn finish(mut self) -> Result<W, StoreError> {
        self.out.flush()?;
        Ok(self.out)
    }
}

pub fn write_records<'a, W, I>(out: W, records: I) -> Result<W, StoreError>
where
    W: Write,
    I: IntoIterator<Item = &'a MatroidRecord>,
{
    let mut w = RecordWriter::new(out);
    for r in records {
        w.push(r)?;
    }
    w.finish()
}

/// Parses and validates every line. Blank lines are skipped; line numbers
/// count from 1.
pub fn read_records<R: BufRead>(input: R) -> Result<Vec<MatroidRecord>, StoreError> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parse = |message: String| StoreError::Parse { line: i + 1, message };
        let r: MatroidRecord = serde_json::from_str(&line).map_err(|e| parse(e.to_string()))?;
        r.validate().map_err(parse)?;
        out.push(r);
    }
    Ok(out)
}

pub fn read_file(path: &Path) -> Result<Vec<MatroidRecord>, StoreError> {
    read_records(BufReader::new(File::open(path)?))
}

/// Writes next to `path` and renames over it, so readers never see a
/// partial file.
pub fn write_file<'a, I>(path: &Path, records: I) -> Result<(), StoreError>
where
    I: IntoIterator<Item = &'a MatroidRecord>,
{
    let tmp = temp_path(path);
    let file = File::create(&tmp)?;
    let result = write_records(BufWriter::new(file), records).and_then(|w| {
        w.into_inner().map_err(|e| e.into_error())?.sync_all()?;
        Ok(())
    });
    match result {
        Ok(()) => {
            std::fs::rename(&tmp, path)?;
            Ok(())
        }
        Err(e) => {
            let _ = std::fs::remove_file(&tmp);
            Err(e)
        }
    }
}

fn temp_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(".tmp");
    path.with_file_name(name)
}

/// Records indexed by (n, canonical blocks).
#[derive(Debug, Default, Clone)]
pub struct Store {
    records: Vec<MatroidRecord>,
    index: HashMap<Key, usize>,
}

impl Store {
    pub fn new() -> Self {
        Store::default()
    }

    pub fn from_records(records: Vec<MatroidRecord>) -> Result<Store, StoreError> {
        let mut s = Store::new();
        for r in records {
            s.insert(r)?;
        }
        Ok(s)
    }

    pub fn open(path: &Path) -> Result<Store, StoreError> {
        Store::from_records(read_file(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<(), StoreError> {
        write_file(path, &self.records)
    }

    pub fn insert(&mut self, record: MatroidRecord) -> Result<(), StoreError> {
        let key = record.key();
        if self.index.contains_key(&key) {
            return Err(StoreError::DuplicateKey(key));
        }
        self.index.insert(key, self.records.len());
        self.records.push(record);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[MatroidRecord] {
        &self.records
    }

    /// Mutable access for classification. Keys must not change.
    pub fn records_mut(&mut self) -> &mut [MatroidRecord] {
        &mut self.records
    }

    pub fn of_size(&self, n: usize) -> impl Iterator<Item = &MatroidRecord> {
        self.records.iter().filter(move |r| r.n == n)
    }

    pub fn get(&self, n: usize, canonical_blocks: &[Vec<usize>]) -> Option<&MatroidRecord> {
        self.index
            .get(&(n, canonical_blocks.to_vec()))
            .map(|&i| &self.records[i])
    }

    /// Finds the record of any labeling of `m`.
    pub fn lookup(&self, m: &TwoPartition) -> Option<&MatroidRecord> {
        let c = canonical_form(m);
        self.get(c.n(), &to_lists(c.blocks()))
    }
}
