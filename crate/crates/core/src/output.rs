//! All-or-nothing file output.

use std::io::Write;
use std::path::{Path, PathBuf};

use tempfile::NamedTempFile;

use crate::error::{Error, Result};

fn file_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::File {
        path: path.to_owned(),
        source,
    }
}

/// Writes every `(path, contents)` pair. All contents are first staged in
/// temporary files next to their targets; targets are only replaced once
/// every file has been staged, each by an atomic rename.
pub fn write_files_atomic(files: &[(PathBuf, Vec<u8>)]) -> Result<()> {
    let mut staged = Vec::with_capacity(files.len());
    for (path, bytes) in files {
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p,
            _ => Path::new("."),
        };
        let mut tmp = NamedTempFile::new_in(dir).map_err(file_err(path))?;
        tmp.write_all(bytes).map_err(file_err(path))?;
        tmp.as_file().sync_all().map_err(file_err(path))?;
        staged.push((tmp, path));
    }
    for (tmp, path) in staged {
        tmp.persist(path).map_err(|e| file_err(path)(e.error))?;
    }
    Ok(())
}

pub fn write_file_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    write_files_atomic(&[(path.to_owned(), bytes.to_vec())])
}
