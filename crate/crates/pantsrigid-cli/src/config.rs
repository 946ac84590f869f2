//! Flat `key = value` settings files. Blank lines and lines starting with
//! `#` are ignored. Keys are the long flag names without the dashes.

use std::collections::BTreeMap;
use std::path::Path;

pub const KEYS: [&str; 10] =
    ["n", "what", "suite", "radius", "twist-bound", "certify-depth", "out", "format", "max-vertices", "threads"];

pub fn parse(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(format!("line {}: expected key = value", no + 1));
        };
        let k = k.trim().replace('_', "-");
        if !KEYS.contains(&k.as_str()) {
            return Err(format!("line {}: unknown key {k}", no + 1));
        }
        out.insert(k, v.trim().to_string());
    }
    Ok(out)
}

pub fn load(path: &Path) -> Result<BTreeMap<String, String>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}
