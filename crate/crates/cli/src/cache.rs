//! Search results stored as JSON lines, one per (area, bound).
//!
//! Entries are advisory: every cached parameter is re-certified on load and
//! an entry that fails is ignored.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use congruent_core::{membership, search_params, CongruentParam, Param, Rat};
use log::{debug, warn};
use serde::{Deserialize, Serialize};

#[derive(Debug, Serialize, Deserialize)]
struct Entry {
    area: String,
    bound: u64,
    params: Vec<String>,
}

pub struct SearchCache {
    path: Option<PathBuf>,
}

impl SearchCache {
    pub fn new(path: Option<PathBuf>) -> Self {
        SearchCache { path }
    }

    pub fn search(&self, area: &Rat, bound: u64) -> std::io::Result<Vec<CongruentParam>> {
        let Some(path) = &self.path else {
            return Ok(search_params(area, bound));
        };
        if let Some(found) = lookup(path, area, bound)? {
            return Ok(found);
        }
        let found = search_params(area, bound);
        append(path, area, bound, &found)?;
        Ok(found)
    }
}

fn lookup(path: &Path, area: &Rat, bound: u64) -> std::io::Result<Option<Vec<CongruentParam>>> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e),
    };
    let key = area.to_string();
    // the smallest usable bound needs the least filtering
    let mut best: Option<Entry> = None;
    for line in BufReader::new(file).lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let entry: Entry = match serde_json::from_str(&line) {
            Ok(e) => e,
            Err(e) => {
                warn!("skipping malformed cache line in {}: {e}", path.display());
                continue;
            }
        };
        if entry.area == key
            && entry.bound >= bound
            && best.as_ref().is_none_or(|b| entry.bound < b.bound)
        {
            best = Some(entry);
        }
    }
    let Some(entry) = best else {
        return Ok(None);
    };
    let mut out = Vec::with_capacity(entry.params.len());
    for s in &entry.params {
        let verified = s.parse::<Param>().ok().and_then(|p| membership(&p, area));
        match verified {
            Some(p) if p.param().to_string() == *s => {
                if *p.param().denom() <= bound.into() {
                    out.push(p);
                }
            }
            _ => {
                warn!("cached entry for area {key} holds {s}, which does not verify; recomputing");
                return Ok(None);
            }
        }
    }
    debug!(
        "search for area {key} up to {bound} served from {}",
        path.display()
    );
    Ok(Some(out))
}

fn append(path: &Path, area: &Rat, bound: u64, found: &[CongruentParam]) -> std::io::Result<()> {
    let entry = Entry {
        area: area.to_string(),
        bound,
        params: found.iter().map(|p| p.to_string()).collect(),
    };
    let mut file = OpenOptions::new().create(true).append(true).open(path)?;
    let line = serde_json::to_string(&entry).expect("cache entries serialize");
    writeln!(file, "{line}")
}
