//! CSV persistence of result rows.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{BenchError, Result};
use crate::experiment::ResultRow;

pub const HEADER: &str =
    "scheme,route,M,K,n,alpha,gamma_db,value_bits,value_nats,stderr,iterations,seed,runtime_ms,error";

/// Serialize `rows` with a header line. Floats use the shortest round-trip form.
pub fn write_rows<W: Write, T: Serialize>(out: W, rows: &[T]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub(crate) fn write_file<T: Serialize>(rows: &[T], path: &Path) -> Result<()> {
    if rows.is_empty() {
        return Err(BenchError::EmptyRows(path.to_path_buf()));
    }
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| BenchError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
    }
    let file = fs::File::create(path).map_err(|source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    write_rows(file, rows).map_err(|source| BenchError::Csv {
        path: path.to_path_buf(),
        source,
    })
}

pub fn emit_csv(rows: &[ResultRow], path: &Path) -> Result<()> {
    write_file(rows, path)
}

pub(crate) fn read_file<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let csv_err = |source| BenchError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    r.deserialize().collect::<csv::Result<Vec<T>>>().map_err(csv_err)
}

pub fn read_csv(path: &Path) -> Result<Vec<ResultRow>> {
    read_file(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use mjd_core::{Route, SchemeKind, SystemParams, ThroughputResult};

    fn sample() -> Vec<ResultRow> {
        let p = SystemParams::table_defaults();
        let mut a = ResultRow::from_result(&ThroughputResult::analytic(SchemeKind::IA, p, 44.687_3));
        a.runtime_ms = Some(12);
        let b = ResultRow::failed(SchemeKind::CI, Route::MonteCarlo, &p, &"bad, \"quoted\" draw");
        vec![a, b]
    }

    #[test]
    fn header_matches_field_names() {
        let mut buf = Vec::new();
        write_rows(&mut buf, &sample()).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next().unwrap(), HEADER);
        assert!(text.lines().nth(1).unwrap().starts_with("ia,analytic,4,5,6,0.5,20.0,"));
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested/out.csv");
        emit_csv(&sample(), &path).unwrap();
        assert_eq!(read_csv(&path).unwrap(), sample());
    }

    #[test]
    fn empty_rows_are_refused() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        assert!(matches!(emit_csv(&[], &path), Err(BenchError::EmptyRows(_))));
        assert!(!path.exists());
    }

    #[test]
    fn io_errors_name_the_path() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        std::fs::write(&blocker, "x").unwrap();
        let err = emit_csv(&sample(), &blocker.join("out.csv")).unwrap_err();
        assert!(err.to_string().contains("file"), "{err}");
    }
}
