use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::CliError;

/// Writes a file by renaming a completed temporary file over it.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    let name = path
        .file_name()
        .ok_or_else(|| CliError::Usage(format!("--out {} is not a file path", path.display())))?;
    let tmp = path.with_file_name(format!(".{}.tmp-{}", name.to_string_lossy(), std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Sends the report to `out` if given, otherwise to stdout. The summary goes
/// to stdout in the first case and to stderr in the second, so that stdout
/// always carries exactly one machine-readable document or the summary.
pub fn emit(out: Option<&Path>, report: &[u8], summary: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            write_atomic(path, report)?;
            println!("{summary}");
        }
        None => {
            std::io::stdout().write_all(report)?;
            eprintln!("{summary}");
        }
    }
    Ok(())
}

pub fn csv_bytes(header: &[String], rows: &[Vec<String>]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(|e| CliError::Failure(e.to_string()))?;
    for r in rows {
        w.write_record(r).map_err(|e| CliError::Failure(e.to_string()))?;
    }
    w.into_inner().map_err(|e| CliError::Failure(e.to_string()))
}
