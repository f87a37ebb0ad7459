use std::fs;
use std::io::Write;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::commands::Failure;

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Writes `text` to `path`, or to stdout without a path.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Input(format!("stdout: {e}")))
        }
    }
}

pub fn emit_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    emit(path, &text)
}

/// A source multiset: a bare array, `{"set": [...]}` or an instance's `{"sizes": [...]}`.
#[derive(Deserialize)]
#[serde(untagged)]
enum SetFile {
    Bare(Vec<i64>),
    Set { set: Vec<i64> },
    Sizes { sizes: Vec<i64> },
}

pub fn read_set(path: &Path) -> Result<Vec<u64>, Failure> {
    let raw = match read_json::<SetFile>(path)? {
        SetFile::Bare(v) | SetFile::Set { set: v } | SetFile::Sizes { sizes: v } => v,
    };
    raw.iter()
        .enumerate()
        .map(|(i, &v)| {
            u64::try_from(v)
                .ok()
                .filter(|&v| v > 0)
                .ok_or_else(|| Failure::Input(format!("element {} of the set is {v}, expected a positive integer", i + 1)))
        })
        .collect()
}
