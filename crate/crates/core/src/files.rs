//! Finding, reading and parsing the JavaScript files of a tree.

use std::path::{Path, PathBuf};

use walkdir::WalkDir;

use crate::error::{Error, ParseError, Result};
use crate::exec;
use crate::js::{parse, SourceModule};

/// `.js` files under `root` (or `root` itself if it is a file), sorted.
pub fn js_files(root: &Path) -> Result<Vec<PathBuf>> {
    if root.is_file() {
        return Ok(vec![root.to_path_buf()]);
    }
    let mut out = Vec::new();
    for entry in WalkDir::new(root).sort_by_file_name() {
        let entry = entry.map_err(|e| Error::Io {
            path: e.path().unwrap_or(root).to_path_buf(),
            source: e.into_io_error().unwrap_or_else(|| std::io::Error::other("file system loop")),
        })?;
        if entry.file_type().is_file() && entry.path().extension().is_some_and(|x| x == "js") {
            out.push(entry.into_path());
        }
    }
    Ok(out)
}

pub fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

/// A file to process and where it lives relative to its input root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Input {
    pub path: PathBuf,
    pub relative: PathBuf,
}

/// Every `.js` file under each of `roots`, sorted by path.
pub fn inputs(roots: &[PathBuf]) -> Result<Vec<Input>> {
    let mut out = Vec::new();
    for root in roots {
        if !root.exists() {
            return Err(Error::Io { path: root.clone(), source: std::io::Error::new(std::io::ErrorKind::NotFound, "no such file or directory") });
        }
        for path in js_files(root)? {
            let relative =
                if root.is_file() { PathBuf::from(path.file_name().unwrap_or_default()) } else { path.strip_prefix(root).unwrap_or(&path).to_path_buf() };
            out.push(Input { path, relative });
        }
    }
    out.sort_by(|a, b| a.path.cmp(&b.path));
    out.dedup_by(|a, b| a.path == b.path);
    Ok(out)
}

pub struct Loaded {
    pub inputs: Vec<Input>,
    pub modules: Vec<SourceModule>,
    /// Files that did not parse; they take no part in the analysis.
    pub skipped: Vec<(PathBuf, ParseError)>,
}

/// Reads and parses `inputs`; parse failures are collected, I/O errors abort.
pub fn load(inputs: Vec<Input>, parallel: bool) -> Result<Loaded> {
    let parsed = exec::map(&inputs, parallel, |input| -> Result<std::result::Result<SourceModule, ParseError>> {
        let text = read(&input.path)?;
        Ok(parse(&input.path, &text))
    });
    let mut loaded = Loaded { inputs: Vec::new(), modules: Vec::new(), skipped: Vec::new() };
    for (input, result) in inputs.into_iter().zip(parsed) {
        match result? {
            Ok(module) => {
                loaded.modules.push(module);
                loaded.inputs.push(input);
            }
            Err(e) => loaded.skipped.push((input.path, e)),
        }
    }
    Ok(loaded)
}
