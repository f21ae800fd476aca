//! Deterministic result persistence: CSV tables, the JSON summary and
//! the run manifest with content digests.

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

/// 17 significant digits; round-trips any f64 exactly.
pub fn fmt_g17(v: f64) -> String {
    format!("{v:.16e}")
}

/// RFC-4180-style field quoting (only when needed; numeric fields pass
/// through untouched so outputs stay byte-stable).
fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// One CSV table with a fixed header row.
pub struct CsvTable {
    pub name: String,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, fields: &[String]) {
        assert_eq!(fields.len(), self.header.len(), "row width mismatch in {}", self.name);
        self.rows.push(fields.to_vec());
    }

    pub fn push_numeric(&mut self, values: &[f64]) {
        self.push_row(&values.iter().map(|&v| fmt_g17(v)).collect::<Vec<_>>());
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = String::new();
        out.push_str(&self.header.iter().map(|h| csv_field(h)).collect::<Vec<_>>().join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out.into_bytes()
    }
}

/// A single estimate with provenance, summarized to JSON.
#[derive(Debug, Clone, Serialize)]
pub struct Estimate {
    pub name: String,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
    pub estimator: String,
    pub sample_size: usize,
    pub seed: u64,
}

/// Pass/fail record of one gate.
#[derive(Debug, Clone, Serialize)]
pub struct GateResult {
    pub name: String,
    pub passed: bool,
    /// Soft gates warn instead of failing unless `--strict`.
    pub soft: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
struct FileRecord {
    path: String,
    sha256: String,
    bytes: usize,
}

#[derive(Debug, Clone, Serialize)]
struct Manifest {
    config_hash: String,
    code_version: String,
    started_unix: u64,
    finished_unix: u64,
    truncated_orbits: usize,
    files: Vec<FileRecord>,
}

/// Collects outputs for one run and writes them under the output
/// directory in one deterministic pass.
pub struct RunWriter {
    dir: PathBuf,
    config_json: String,
    started_unix: u64,
    tables: Vec<CsvTable>,
    svgs: Vec<(String, String)>,
    pub estimates: Vec<Estimate>,
    pub gates: Vec<GateResult>,
    pub truncated_orbits: usize,
}

impl RunWriter {
    pub fn new(dir: &Path, config_json: String) -> Self {
        Self {
            dir: dir.to_path_buf(),
            config_json,
            started_unix: unix_now(),
            tables: Vec::new(),
            svgs: Vec::new(),
            estimates: Vec::new(),
            gates: Vec::new(),
            truncated_orbits: 0,
        }
    }

    pub fn add_table(&mut self, table: CsvTable) {
        self.tables.push(table);
    }

    pub fn add_svg(&mut self, name: &str, body: String) {
        self.svgs.push((name.to_string(), body));
    }

    pub fn add_estimate(
        &mut self,
        name: &str,
        value: f64,
        stderr: Option<f64>,
        estimator: &str,
        sample_size: usize,
        seed: u64,
    ) {
        self.estimates.push(Estimate {
            name: name.into(),
            value,
            stderr,
            estimator: estimator.into(),
            sample_size,
            seed,
        });
    }

    pub fn add_gate(&mut self, name: &str, passed: bool, soft: bool, detail: String) {
        self.gates.push(GateResult { name: name.into(), passed, soft, detail });
    }

    pub fn config_hash(&self) -> String {
        hex_digest(self.config_json.as_bytes())
    }

    /// Any hard-gate failure (soft gates fail only under `--strict`).
    pub fn gates_failed(&self, strict: bool) -> bool {
        self.gates.iter().any(|g| !g.passed && (strict || !g.soft))
    }

    /// Write tables, summary and manifest; returns the manifest path.
    pub fn finish(self) -> std::io::Result<PathBuf> {
        fs::create_dir_all(&self.dir)?;
        let mut files = Vec::new();
        for t in &self.tables {
            let bytes = t.to_bytes();
            let path = self.dir.join(&t.name);
            write_file(&path, &bytes)?;
            files.push(FileRecord {
                path: t.name.clone(),
                sha256: hex_digest(&bytes),
                bytes: bytes.len(),
            });
        }
        for (name, body) in &self.svgs {
            let path = self.dir.join(name);
            write_file(&path, body.as_bytes())?;
            files.push(FileRecord {
                path: name.clone(),
                sha256: hex_digest(body.as_bytes()),
                bytes: body.len(),
            });
        }
        #[derive(Serialize)]
        struct Summary<'a> {
            config_hash: String,
            estimates: &'a [Estimate],
            gates: &'a [GateResult],
        }
        let summary = serde_json::to_vec_pretty(&Summary {
            config_hash: self.config_hash(),
            estimates: &self.estimates,
            gates: &self.gates,
        })?;
        write_file(&self.dir.join("summary.json"), &summary)?;
        files.push(FileRecord {
            path: "summary.json".into(),
            sha256: hex_digest(&summary),
            bytes: summary.len(),
        });

        let manifest = Manifest {
            config_hash: self.config_hash(),
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            started_unix: self.started_unix,
            finished_unix: unix_now(),
            truncated_orbits: self.truncated_orbits,
            files,
        };
        let manifest_path = self.dir.join("manifest.json");
        write_file(&manifest_path, &serde_json::to_vec_pretty(&manifest)?)?;
        Ok(manifest_path)
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(bytes)
}

pub fn hex_digest(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let out = hasher.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

fn unix_now() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g17_round_trips() {
        for v in [0.1, std::f64::consts::PI, 1.0 / 3.0, 1e-300, -2.5e17] {
            let s = fmt_g17(v);
            assert_eq!(s.parse::<f64>().unwrap(), v, "{s}");
        }
    }

    #[test]
    fn csv_quoting_only_when_needed() {
        assert_eq!(csv_field("1.5"), "1.5");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn table_bytes_have_fixed_header() {
        let mut t = CsvTable::new("x.csv", &["n", "value", "stderr"]);
        t.push_numeric(&[1.0, 2.0, 3.0]);
        let s = String::from_utf8(t.to_bytes()).unwrap();
        assert!(s.starts_with("n,value,stderr\n"));
        assert_eq!(s.lines().count(), 2);
    }
}
