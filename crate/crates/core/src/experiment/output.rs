use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::Serialize;

use crate::error::Result;

/// Version of every CSV layout written by the runners.
pub const CSV_SCHEMA: u32 = 1;

/// Files whose content depends on the wall clock. Determinism checks skip them.
pub const TIMING_FILES: [&str; 1] = ["timing.csv"];

/// Formats a float with 17 significant digits so that it parses back to the
/// same value; infinities print as `inf` / `-inf`.
pub fn fmt_f64(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.16e}")
    }
}

pub fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), fmt_f64)
}

/// Mean and sample standard deviation (0 for a single value).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Collects the files of one command invocation and writes its manifest.
#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    files: Vec<String>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self> {
        std::fs::create_dir_all(root)?;
        Ok(Self {
            root: root.to_path_buf(),
            files: Vec::new(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn write(&mut self, name: &str, content: impl AsRef<[u8]>) -> Result<()> {
        let path = self.path(name);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        std::fs::write(&path, content)?;
        self.files.push(name.to_string());
        Ok(())
    }

    /// Registers a file written by other means (e.g. an image encoder).
    pub fn record(&mut self, name: &str) {
        self.files.push(name.to_string());
    }

    /// Writes `manifest.json`: tool version, resolved config, seeds, notes and
    /// the sorted list of files. No timestamps, so reruns are byte-identical.
    pub fn finish<C: Serialize>(mut self, command: &str, config: &C, seeds: &[u64], notes: Vec<String>) -> Result<Vec<String>> {
        self.files.sort();
        let manifest = serde_json::json!({
            "tool": "apo",
            "version": env!("CARGO_PKG_VERSION"),
            "csv_schema": CSV_SCHEMA,
            "rng": "chacha8",
            "command": command,
            "config": serde_json::to_value(config)?,
            "seeds": seeds,
            "notes": notes,
            "files": self.files.clone(),
        });
        let text = serde_json::to_string_pretty(&manifest)? + "\n";
        std::fs::write(self.root.join("manifest.json"), text)?;
        let mut all = self.files;
        all.push("manifest.json".into());
        Ok(all)
    }
}

/// Applies `f` to every item on a small thread pool and returns the results in
/// input order.
pub fn parallel_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(items.len().max(1));
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<R>>> = Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                if k >= items.len() {
                    break;
                }
                let r = f(&items[k]);
                slots.lock().expect("result slots poisoned")[k] = Some(r);
            });
        }
    });
    slots
        .into_inner()
        .expect("result slots poisoned")
        .into_iter()
        .map(|r| r.expect("every item produced a result"))
        .collect()
}

/// Parses a float written by [`fmt_f64`].
pub fn parse_f64(s: &str) -> Option<f64> {
    match s.trim() {
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        t => t.parse().ok(),
    }
}
