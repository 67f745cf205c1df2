//! Flat-file persistence for oracle indexes.
//!
//! One record per line, tab-separated, sorted by key, LF line endings:
//!
//! ```text
//! v-string \t r \t min_length \t witness-string
//! ```

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use hydra_core::distortion::{OracleEntry, OracleIndex};
use hydra_core::parse::{parse_free_word, parse_hword};
use hydra_core::NormalForm;

pub fn save(path: &Path, index: &OracleIndex) -> io::Result<()> {
    let mut lines: Vec<String> = index
        .entries()
        .map(|(nf, entry)| {
            format!(
                "{}\t{}\t{}\t{}",
                nf.v, nf.r, entry.min_length, entry.witness
            )
        })
        .collect();
    lines.sort_unstable();
    let mut out = BufWriter::new(File::create(path)?);
    for line in lines {
        writeln!(out, "{line}")?;
    }
    out.flush()
}

pub fn load(path: &Path, k: u32, radius: u32) -> io::Result<OracleIndex> {
    let reader = BufReader::new(File::open(path)?);
    let mut entries = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let parsed = (|| -> Option<(NormalForm, OracleEntry)> {
            let [v, r, min_length, witness] = fields.as_slice() else {
                return None;
            };
            Some((
                NormalForm::new(parse_free_word(v).ok()?, r.parse().ok()?),
                OracleEntry {
                    min_length: min_length.parse().ok()?,
                    witness: parse_hword(witness).ok()?,
                },
            ))
        })();
        match parsed {
            Some(entry) => entries.push(entry),
            None => {
                return Err(io::Error::new(
                    io::ErrorKind::InvalidData,
                    format!("bad oracle record on line {}", lineno + 1),
                ))
            }
        }
    }
    Ok(OracleIndex::from_entries(k, radius, entries))
}
