//! CSV and JSON writers. Every CSV starts with a `# meta:` line carrying the
//! crate version, the seed, the config hash and the RNG algorithm.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::sweep::rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Meta {
    pub seed: u64,
    pub config_sha256: String,
}

impl Meta {
    pub fn new(seed: u64, config_bytes: &[u8]) -> Self {
        let digest = Sha256::digest(config_bytes);
        let config_sha256 = digest.iter().map(|b| format!("{b:02x}")).collect();
        Self {
            seed,
            config_sha256,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "# meta: version={} seed={} config_sha256={} rng={}",
            env!("CARGO_PKG_VERSION"),
            self.seed,
            self.config_sha256,
            rng::ALGORITHM
        )
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub struct OutputDir {
    root: PathBuf,
    meta: Meta,
    written: Vec<PathBuf>,
}

impl OutputDir {
    pub fn create(root: &Path, meta: Meta) -> Result<Self> {
        fs::create_dir_all(root).map_err(io_error(root))?;
        Ok(Self {
            root: root.to_path_buf(),
            meta,
            written: Vec::new(),
        })
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    pub fn csv<R, S>(&mut self, name: &str, header: &[S], rows: R) -> Result<()>
    where
        R: IntoIterator<Item = Vec<String>>,
        S: AsRef<str>,
    {
        let path = self.root.join(name);
        let file = File::create(&path).map_err(io_error(&path))?;
        let mut w = BufWriter::new(file);
        let header: Vec<&str> = header.iter().map(AsRef::as_ref).collect();
        let result = (|| -> std::io::Result<()> {
            writeln!(w, "{}", self.meta.line())?;
            writeln!(w, "{}", header.join(","))?;
            for row in rows {
                writeln!(w, "{}", row.join(","))?;
            }
            w.flush()
        })();
        result.map_err(io_error(&path))?;
        self.written.push(path);
        Ok(())
    }

    pub fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let path = self.root.join(name);
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        fs::write(&path, text).map_err(io_error(&path))?;
        self.written.push(path);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_round_trips() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE] {
            assert_eq!(float(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(float(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn meta_line_layout() {
        let m = Meta::new(7, b"{}");
        assert_eq!(m.config_sha256.len(), 64);
        let line = m.line();
        assert!(line.starts_with("# meta: version="));
        assert!(line.contains(" seed=7 "));
        assert!(line.ends_with("rng=chacha20"));
    }

    #[test]
    fn writes_csv_and_json() {
        let dir = tempfile::tempdir().unwrap();
        let mut out = OutputDir::create(&dir.path().join("nested"), Meta::new(1, b"x")).unwrap();
        out.csv("a.csv", &["i", "x"], vec![vec!["1".into(), float(0.5)]])
            .unwrap();
        out.json("a.json", &serde_json::json!({"k": 1})).unwrap();
        let text = fs::read_to_string(dir.path().join("nested/a.csv")).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# meta:"));
        assert_eq!(lines[1], "i,x");
        assert_eq!(lines[2], "1,5.0000000000000000e-1");
        assert_eq!(out.written().len(), 2);
    }
}
