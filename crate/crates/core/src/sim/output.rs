use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use tempfile::NamedTempFile;

use super::runner::ResultRow;
use crate::Result;

pub const CSV_HEADER: &str = "decoder,strategy,window,et_set,snr_db,trials,block_errors,bler,bler_lo,bler_hi,anmu,rel_anmu,imax,nmu_max,seed";

/// The JSON-lines mirror sits next to the CSV with a `.jsonl` extension.
pub fn jsonl_path(csv: &Path) -> PathBuf {
    csv.with_extension("jsonl")
}

fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn write_csv(rows: &[ResultRow], path: &Path) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let body = w.into_inner().map_err(|e| e.into_error())?;
    let mut bytes = format!("{CSV_HEADER}\n").into_bytes();
    bytes.extend_from_slice(&body);
    atomic_write(path, &bytes)
}

/// Writes the CSV and its JSON-lines mirror.
pub fn write_results(rows: &[ResultRow], path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    write_csv(rows, path)?;
    let mut lines = Vec::new();
    for r in rows {
        serde_json::to_writer(&mut lines, r)?;
        lines.push(b'\n');
    }
    atomic_write(&jsonl_path(path), &lines)
}

pub fn read_csv(path: &Path) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_path(path)?;
    Ok(r.deserialize().collect::<std::result::Result<_, _>>()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn row(bler: f64, anmu: f64, snr_db: f64) -> ResultRow {
        ResultRow {
            decoder: "VN-W12-TARGET".into(),
            strategy: "VN".into(),
            window: 12,
            et_set: "TARGET".into(),
            snr_db,
            trials: 3,
            block_errors: 1,
            bler,
            bler_lo: bler / 3.0,
            bler_hi: bler.sqrt(),
            anmu,
            rel_anmu: anmu / 194_460.0,
            imax: 21,
            nmu_max: 194_460,
            seed: 9,
        }
    }

    #[test]
    fn header_order() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.csv");
        write_results(&[row(0.5, 1234.5, 8.0)], &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_HEADER);
        assert_eq!(text.lines().count(), 2);
        let jl = fs::read_to_string(jsonl_path(&path)).unwrap();
        assert_eq!(jl.lines().count(), 1);
    }

    #[test]
    fn unwritable_path_errors() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("f");
        fs::write(&file, "x").unwrap();
        assert!(write_results(&[row(0.1, 1.0, 1.0)], &file.join("sub/r.csv")).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn csv_round_trip(bler in 0.0f64..=1.0, anmu in 0.0f64..1e6, snr in -20.0f64..40.0) {
            let dir = tempfile::tempdir().unwrap();
            let path = dir.path().join("r.csv");
            let rows = vec![row(bler, anmu, snr), row(1.0 - bler, anmu / 7.0, snr + 0.5)];
            write_csv(&rows, &path).unwrap();
            prop_assert_eq!(read_csv(&path).unwrap(), rows);
        }
    }
}
