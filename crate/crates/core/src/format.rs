//! Deterministic text output helpers.
//!
//! All file output goes through these: floats are printed with 17
//! significant digits (lossless for f64), lines end in `\n`, and files
//! are written atomically via a temporary sibling plus rename so partial
//! artifacts never appear under the target name.

use crate::error::Result;
use std::fs;
use std::path::Path;

/// Formats a float with 17 significant digits; parsing the result
/// recovers the value bit-for-bit.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Joins pre-formatted cells into a CSV body under the given header line.
pub fn csv_from_rows(header: &str, rows: &[Vec<String>]) -> String {
    let mut out = String::with_capacity(header.len() + 1 + rows.len() * 24);
    out.push_str(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Writes `contents` to `path` atomically: the bytes land in a temporary
/// sibling which is then renamed over the target.
pub fn atomic_write(path: &Path, contents: &str) -> Result<()> {
    let tmp = {
        let mut os = path.as_os_str().to_owned();
        os.push(".tmp");
        std::path::PathBuf::from(os)
    };
    fs::write(&tmp, contents.as_bytes())?;
    fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_exactly() {
        for &v in &[
            0.1,
            -2.5e-17,
            std::f64::consts::PI,
            1.0 / 3.0,
            -0.0,
            6.02e23,
        ] {
            let s = fmt_float(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{s}");
        }
    }

    #[test]
    fn csv_rows_use_lf_only() {
        let body = csv_from_rows(
            "k,value",
            &[
                vec!["1".into(), fmt_float(0.5)],
                vec!["2".into(), fmt_float(-1.0)],
            ],
        );
        assert!(body.ends_with('\n'));
        assert!(!body.contains('\r'));
        assert_eq!(body.lines().count(), 3);
        assert!(body.starts_with("k,value\n1,"));
    }

    #[test]
    fn atomic_write_replaces_content() {
        let dir = std::env::temp_dir().join("bistrip-format-test");
        fs::create_dir_all(&dir).unwrap();
        let target = dir.join("out.csv");
        atomic_write(&target, "first\n").unwrap();
        atomic_write(&target, "second\n").unwrap();
        assert_eq!(fs::read_to_string(&target).unwrap(), "second\n");
        fs::remove_dir_all(&dir).unwrap();
    }
}
