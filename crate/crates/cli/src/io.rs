//! File access with the path in every error, and the per-run lock.

use std::fs::{self, OpenOptions};
use std::io::{ErrorKind, Write};
use std::path::{Path, PathBuf};

use crate::error::CliError;

pub const LOCK_FILE: &str = ".scimap.lock";

pub fn read_bytes(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| match e.kind() {
        ErrorKind::NotFound => CliError::input(format!("input file not found: {}", path.display())),
        _ => CliError::input(format!("cannot read {}: {e}", path.display())),
    })
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    String::from_utf8(read_bytes(path)?).map_err(|_| CliError::input(format!("{} is not UTF-8 text", path.display())))
}

/// Fails with the path named when `path` is not an existing file.
pub fn require_file(path: &Path) -> Result<(), CliError> {
    if path.is_file() {
        Ok(())
    } else {
        Err(CliError::input(format!("input file not found: {}", path.display())))
    }
}

/// Writes through a sibling temp file so readers never see half a file.
pub fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let fail = |e: std::io::Error| CliError::internal(format!("cannot write {}: {e}", path.display()));
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes).map_err(fail)?;
    fs::rename(&tmp, path).map_err(fail)
}

/// Exclusive claim on an output directory for the life of one run.
#[derive(Debug)]
pub struct RunLock {
    path: PathBuf,
}

impl RunLock {
    pub fn acquire(out: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(out).map_err(|e| CliError::input(format!("cannot create {}: {e}", out.display())))?;
        let path = out.join(LOCK_FILE);
        match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(mut f) => {
                let _ = writeln!(f, "{}", std::process::id());
                Ok(RunLock { path })
            }
            Err(e) if e.kind() == ErrorKind::AlreadyExists => Err(CliError::input(format!(
                "{} is in use by another run; remove {} if no run is active",
                out.display(),
                path.display()
            ))),
            Err(e) => Err(CliError::input(format!("cannot lock {}: {e}", out.display()))),
        }
    }
}

impl Drop for RunLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}
