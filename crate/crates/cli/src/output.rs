//! Artifact emission: stdout, or an atomic file write.

use std::io::Write;
use std::path::Path;

use crate::commands::CliError;

/// Prints to stdout, or writes atomically to `output` when given. Files are
/// staged in a temporary sibling and renamed into place, so an interrupted
/// run never leaves a truncated artifact at the target path.
pub fn emit(artifact: &str, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        None => {
            print!("{artifact}");
            Ok(())
        }
        Some(path) => write_atomic(path, artifact),
    }
}

pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(parent) if !parent.as_os_str().is_empty() => parent,
        _ => Path::new("."),
    };
    let io_error = |error: &dyn std::fmt::Display| {
        CliError::Io(format!("cannot write {}: {error}", path.display()))
    };
    let mut staging = tempfile::NamedTempFile::new_in(dir).map_err(|e| io_error(&e))?;
    staging
        .write_all(contents.as_bytes())
        .map_err(|e| io_error(&e))?;
    staging.persist(path).map_err(|e| io_error(&e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writes_and_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        write_atomic(&path, "a,b\n1,2\n").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "a,b\n1,2\n");
        write_atomic(&path, "replaced\n").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "replaced\n");
    }

    #[test]
    fn missing_directory_leaves_nothing_behind() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("no_such_dir").join("out.csv");
        assert!(write_atomic(&path, "data").is_err());
        assert!(!path.exists());
    }
}
