//! CSV spectrum files with `#` metadata headers, and JSON sidecars.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use fso_core::assembly::PotentialSpec;
use fso_core::eigsolve::{Method, SpectralParams, Spectrum};
use serde_json::{json, Value};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// Metadata lines shared by every CSV the tool writes.
pub fn header(spec_params: &SpectralParams, method: &str, trusted_count: usize, half_widths: Option<&[f64]>) -> String {
    let (a, b) = spec_params.interval();
    let mut out = String::new();
    writeln!(out, "# schema_version={SCHEMA_VERSION}").unwrap();
    writeln!(out, "# alpha={}", spec_params.alpha()).unwrap();
    writeln!(out, "# M={}", spec_params.size_m()).unwrap();
    writeln!(out, "# interval={a},{b}").unwrap();
    writeln!(out, "# potential={}", spec_params.potential()).unwrap();
    writeln!(out, "# method={method}").unwrap();
    writeln!(out, "# trusted_count={trusted_count}").unwrap();
    if let Some(ls) = half_widths {
        let joined: Vec<String> = ls.iter().map(|l| l.to_string()).collect();
        writeln!(out, "# half_widths={}", joined.join(",")).unwrap();
    }
    out
}

pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Serializes a spectrum; with `trusted_only` the rows stop at the trusted
/// count.
pub fn write_spectrum(spec: &Spectrum, trusted_only: bool) -> String {
    let spec = if trusted_only { spec.truncated_to_trusted() } else { spec.clone() };
    let mut out = header(spec.params(), spec.method().tag(), spec.trusted_count(), spec.half_widths());
    out.push_str("index,eigenvalue\n");
    for (i, v) in spec.eigenvalues().iter().enumerate() {
        writeln!(out, "{},{}", i + 1, num(*v)).unwrap();
    }
    out
}

fn bad(path: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("{path}: {msg}"))
}

fn parse_pair(s: &str) -> Option<(f64, f64)> {
    let (a, b) = s.split_once(',')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

/// Parses a file produced by [`write_spectrum`].
pub fn read_spectrum(text: &str, origin: &str) -> Result<Spectrum, CliError> {
    let mut meta = std::collections::HashMap::new();
    let mut values = Vec::new();
    let mut saw_columns = false;
    for (lineno, line) in text.lines().enumerate() {
        if let Some(rest) = line.strip_prefix('#') {
            if let Some((k, v)) = rest.trim().split_once('=') {
                meta.insert(k.trim().to_string(), v.trim().to_string());
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        if !saw_columns {
            if line.trim() != "index,eigenvalue" {
                return Err(bad(origin, format!("expected column header, got '{line}'")));
            }
            saw_columns = true;
            continue;
        }
        let (idx, val) = line
            .split_once(',')
            .ok_or_else(|| bad(origin, format!("line {}: expected two fields", lineno + 1)))?;
        let idx: usize = idx.trim().parse().map_err(|e| bad(origin, format!("line {}: {e}", lineno + 1)))?;
        if idx != values.len() + 1 {
            return Err(bad(origin, format!("line {}: indices must be contiguous from 1", lineno + 1)));
        }
        values.push(val.trim().parse::<f64>().map_err(|e| bad(origin, format!("line {}: {e}", lineno + 1)))?);
    }
    let field = |k: &str| meta.get(k).ok_or_else(|| bad(origin, format!("missing header field '{k}'")));
    let version: u32 = field("schema_version")?.parse().map_err(|e| bad(origin, e))?;
    if version != SCHEMA_VERSION {
        return Err(bad(origin, format!("unsupported schema_version {version}")));
    }
    let alpha: f64 = field("alpha")?.parse().map_err(|e| bad(origin, e))?;
    let m: usize = field("M")?.parse().map_err(|e| bad(origin, e))?;
    let interval = parse_pair(field("interval")?).ok_or_else(|| bad(origin, "bad interval"))?;
    let potential: PotentialSpec = field("potential")?.parse().map_err(|e| bad(origin, e))?;
    let method: Method = field("method")?.parse().map_err(|e| bad(origin, e))?;
    let trusted: usize = field("trusted_count")?.parse().map_err(|e| bad(origin, e))?;
    let params = SpectralParams::new(alpha, interval, potential, m).map_err(|e| bad(origin, e))?;
    let spec = Spectrum::new(params, values, trusted, method).map_err(|e| bad(origin, e))?;
    match meta.get("half_widths") {
        Some(ls) => {
            let widths = ls
                .split(',')
                .map(|l| l.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| bad(origin, e))?;
            Ok(spec.with_half_widths(widths))
        }
        None => Ok(spec),
    }
}

pub fn load_spectrum(path: &Path) -> Result<Spectrum, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    read_spectrum(&text, &path.display().to_string())
}

pub fn spectrum_params_json(spec: &Spectrum) -> Value {
    let p = spec.params();
    let (a, b) = p.interval();
    json!({
        "alpha": p.alpha(),
        "M": p.size_m(),
        "interval": [a, b],
        "potential": p.potential().to_string(),
        "method": spec.method().tag(),
        "trusted_count": spec.trusted_count(),
        "half_widths": spec.half_widths(),
    })
}

/// Where a command's CSV and sidecar go.
#[derive(Debug, Clone, Default)]
pub struct Destination {
    pub out: Option<PathBuf>,
    pub meta: Option<PathBuf>,
}

impl Destination {
    /// A sibling destination for one member of a sweep:
    /// `spec.csv` becomes `spec_<tag>.csv`.
    pub fn tagged(&self, tag: &str) -> Self {
        let rename = |p: &PathBuf| {
            let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let name = match p.extension() {
                Some(ext) => format!("{stem}_{tag}.{}", ext.to_string_lossy()),
                None => format!("{stem}_{tag}"),
            };
            p.with_file_name(name)
        };
        Self {
            out: self.out.as_ref().map(rename),
            meta: self.meta.as_ref().map(rename),
        }
    }

    fn sidecar_path(&self) -> Option<PathBuf> {
        self.meta.clone().or_else(|| self.out.as_ref().map(|p| p.with_extension("json")))
    }

    /// Writes the CSV (stdout when no `--out`) and the sidecar, which goes
    /// next to the CSV unless `--meta` names it. Nothing is written for the
    /// sidecar when the CSV goes to stdout and `--meta` is absent.
    pub fn emit(&self, csv: &str, params: Value, compute_seconds: f64, fit_results: Value) -> Result<(), CliError> {
        match &self.out {
            Some(p) => fs::write(p, csv).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?,
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(csv.as_bytes())
                    .and_then(|_| stdout.flush())
                    .map_err(|e| CliError::Io(e.to_string()))?;
            }
        }
        if let Some(path) = self.sidecar_path() {
            let sidecar = json!({
                "schema_version": SCHEMA_VERSION,
                "params": params,
                "timings": { "compute_seconds": compute_seconds },
                "fit_results": fit_results,
            });
            let text = serde_json::to_string_pretty(&sidecar).map_err(|e| CliError::Io(e.to_string()))?;
            fs::write(&path, text + "\n").map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        }
        Ok(())
    }
}
