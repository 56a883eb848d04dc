use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;

/// Fixed 17-significant-digit rendering, round-trip safe.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

/// First column of a headed CSV file, or the column named `value` when
/// present.
pub fn read_series(path: &Path) -> Result<Vec<f64>> {
    let mut reader =
        csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let column = reader
        .headers()?
        .iter()
        .position(|h| h.trim() == "value")
        .unwrap_or(0);
    let mut out = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record?;
        let cell = record.get(column).with_context(|| {
            format!("{}: row {} has no column {column}", path.display(), row + 2)
        })?;
        let v: f64 = cell.trim().parse().with_context(|| {
            format!("{}: row {}: cannot parse {cell:?}", path.display(), row + 2)
        })?;
        out.push(v);
    }
    if out.is_empty() {
        bail!("{} contains no data rows", path.display());
    }
    Ok(out)
}

/// Writes named columns side by side. Shorter columns leave blank cells.
pub fn write_columns(path: &Path, headers: &[&str], columns: &[&[f64]]) -> Result<()> {
    assert_eq!(headers.len(), columns.len());
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .with_context(|| format!("creating {}", path.display()))?;
    writer.write_record(headers)?;
    let rows = columns.iter().map(|c| c.len()).max().unwrap_or(0);
    for i in 0..rows {
        writer.write_record(
            columns
                .iter()
                .map(|c| c.get(i).map(|&v| format_value(v)).unwrap_or_default()),
        )?;
    }
    writer.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

/// `<path>.manifest.json` next to an output file.
pub fn sidecar(path: &Path) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    path.with_file_name(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_round_trip() {
        for v in [0.1, -1e-300, 123456.789, std::f64::consts::PI] {
            assert_eq!(format_value(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn sidecar_name() {
        assert_eq!(
            sidecar(Path::new("out/x.csv")),
            PathBuf::from("out/x.csv.manifest.json")
        );
    }
}
