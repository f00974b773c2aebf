use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use gaitdom::features::{read_features_csv, GaitFeatures};
use gaitdom::mapping::{read_labels_csv, read_responses_csv, GaitLabel, RatingRecord};
use gaitdom::mocap::{load_gait, Gait};
use serde::Serialize;

use crate::CliError;

pub fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path).map(BufReader::new).map_err(|e| CliError::io(path, e))
}

pub fn create(path: &Path) -> Result<File, CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    File::create(path).map_err(|e| CliError::io(path, e))
}

pub fn write_string(path: &Path, text: &str) -> Result<(), CliError> {
    use std::io::Write;
    create(path)?.write_all(text.as_bytes()).map_err(|e| CliError::io(path, e))
}

/// Files under each input, expanding directories to their entries with
/// extension `ext`, sorted.
pub fn expand_inputs(inputs: &[PathBuf], ext: &str) -> Result<Vec<PathBuf>, CliError> {
    let mut out = Vec::new();
    for input in inputs {
        if input.is_dir() {
            let mut found: Vec<PathBuf> = std::fs::read_dir(input)
                .map_err(|e| CliError::io(input, e))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x.eq_ignore_ascii_case(ext)))
                .collect();
            found.sort();
            out.extend(found);
        } else {
            out.push(input.clone());
        }
    }
    if out.is_empty() {
        return Err(CliError::usage(format!("no .{ext} inputs found")));
    }
    Ok(out)
}

pub fn load_gaits(inputs: &[PathBuf]) -> Result<Vec<Gait>, CliError> {
    expand_inputs(inputs, "json")?.iter().map(|p| load_gait(p).map_err(CliError::from)).collect()
}

pub fn load_features(path: &Path) -> Result<Vec<(String, GaitFeatures)>, CliError> {
    Ok(read_features_csv(open(path)?)?)
}

pub fn load_labels(path: &Path) -> Result<Vec<GaitLabel>, CliError> {
    Ok(read_labels_csv(open(path)?)?)
}

pub fn load_responses(path: &Path) -> Result<Vec<RatingRecord>, CliError> {
    Ok(read_responses_csv(open(path)?)?)
}

pub fn meta_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_os_string();
    s.push(".meta.json");
    PathBuf::from(s)
}

#[derive(Serialize)]
struct Meta<'a, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    created_unix: Option<u64>,
    details: T,
}

/// Writes `<output>.meta.json`. The creation time is left out when deterministic.
pub fn write_meta<T: Serialize>(output: &Path, command: &str, seed: u64, deterministic: bool, details: T) -> Result<(), CliError> {
    let created_unix = (!deterministic).then(|| {
        std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
    });
    let meta = Meta { tool: "gaitdom", version: env!("CARGO_PKG_VERSION"), command, seed, created_unix, details };
    let mut text = serde_json::to_string_pretty(&meta).expect("metadata serialises");
    text.push('\n');
    write_string(&meta_path(output), &text)
}
