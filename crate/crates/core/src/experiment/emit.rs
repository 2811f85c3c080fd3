use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};

use super::config::Format;
use super::report::{RunMetadata, RunReport};

pub const REPORT_JSON: &str = "report.json";
pub const METADATA_JSON: &str = "metadata.json";
pub const NORM_PROFILE_CSV: &str = "norm_profile.csv";
pub const GENERATION_RESIDUALS_CSV: &str = "generation_residuals.csv";
pub const EMBEDDING_RATIOS_CSV: &str = "embedding_ratios.csv";

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write_csv<T: Serialize>(path: &Path, header: &[&str], rows: &[T]) -> Result<()> {
    let file = fs::File::create(path).map_err(io_err(path))?;
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(file);
    w.write_record(header)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(io_err(path))?;
    Ok(())
}

/// Writes the report in the requested formats and returns the files written.
/// Re-emitting the same report rewrites identical bytes.
pub fn emit_report(r: &RunReport, format: Format, out_dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let mut written = Vec::new();
    if format.json() {
        let path = out_dir.join(REPORT_JSON);
        let mut text = serde_json::to_string_pretty(r)?;
        text.push('\n');
        fs::write(&path, text).map_err(io_err(&path))?;
        written.push(path);
    }
    if format.csv() {
        let s = &r.series;
        let path = out_dir.join(NORM_PROFILE_CSV);
        write_csv(
            &path,
            &["index", "norm", "lower_bound", "expected"],
            &s.norm_profile,
        )?;
        written.push(path);
        let path = out_dir.join(GENERATION_RESIDUALS_CSV);
        write_csv(
            &path,
            &["m", "r", "residual", "bound", "passed"],
            &s.generation_residuals,
        )?;
        written.push(path);
        let path = out_dir.join(EMBEDDING_RATIOS_CSV);
        write_csv(
            &path,
            &["trial", "l1_norm", "sup_norm", "ratio", "trace_norm"],
            &s.embedding_ratios,
        )?;
        written.push(path);
    }
    Ok(written)
}

pub fn write_metadata(m: &RunMetadata, out_dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let path = out_dir.join(METADATA_JSON);
    fs::write(&path, serde_json::to_string_pretty(m)? + "\n").map_err(io_err(&path))?;
    Ok(path)
}
