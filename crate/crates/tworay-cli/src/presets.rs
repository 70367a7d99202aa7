//! Built-in presets and the preset search path.
//!
//! A `--config` or `--ground` argument resolves in order: an existing
//! file path, a file in `$TWORAY_PRESET_DIR`, then a built-in preset
//! name.

use std::env;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use tworay::{ConfigDoc, GroundProfile};

pub const PRESET_DIR_ENV: &str = "TWORAY_PRESET_DIR";

const BUILTIN_CONFIGS: &[(&str, &str)] =
    &[("paper-esp32", include_str!("../presets/paper-esp32.json"))];

const BUILTIN_GROUNDS: &[(&str, &str)] = &[
    ("grass-42", include_str!("../presets/grass-42.json")),
    ("concrete-1.7", include_str!("../presets/concrete-1.7.json")),
    ("omnet-15", include_str!("../presets/omnet-15.json")),
];

/// File contents plus the directory pattern paths resolve against.
fn find_file(arg: &str) -> Result<Option<(String, Option<PathBuf>)>> {
    let direct = Path::new(arg);
    if direct.is_file() {
        let text = fs::read_to_string(direct).with_context(|| format!("reading {arg}"))?;
        return Ok(Some((text, direct.parent().map(Path::to_path_buf))));
    }
    if let Ok(dir) = env::var(PRESET_DIR_ENV) {
        let dir = PathBuf::from(dir);
        for candidate in [dir.join(arg), dir.join(format!("{arg}.json"))] {
            if candidate.is_file() {
                let text = fs::read_to_string(&candidate)
                    .with_context(|| format!("reading {}", candidate.display()))?;
                return Ok(Some((text, Some(dir))));
            }
        }
    }
    Ok(None)
}

fn builtin(table: &'static [(&str, &str)], arg: &str) -> Option<&'static str> {
    let name = arg.strip_suffix(".json").unwrap_or(arg);
    table
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
}

/// Resolve a `--config` argument to a parsed document and the base
/// directory its pattern paths are relative to.
pub fn resolve_config(arg: &str) -> Result<(ConfigDoc, Option<PathBuf>)> {
    if let Some((text, base)) = find_file(arg)? {
        let doc = ConfigDoc::from_json_str(&text).with_context(|| format!("config '{arg}'"))?;
        return Ok((doc, base));
    }
    if let Some(text) = builtin(BUILTIN_CONFIGS, arg) {
        let doc = ConfigDoc::from_json_str(text).expect("built-in presets are valid");
        return Ok((doc, None));
    }
    bail!(
        "config '{arg}' not found: no such file, nothing in ${PRESET_DIR_ENV}, \
         and no built-in preset with that name (built-ins: {})",
        BUILTIN_CONFIGS
            .iter()
            .map(|(n, _)| *n)
            .collect::<Vec<_>>()
            .join(", ")
    )
}

/// Resolve a `--ground` argument to a ground profile.
pub fn resolve_ground(arg: &str) -> Result<GroundProfile> {
    if let Some((text, _)) = find_file(arg)? {
        let ground: GroundProfile =
            serde_json::from_str(&text).with_context(|| format!("ground '{arg}'"))?;
        ground
            .validate()
            .with_context(|| format!("ground '{arg}'"))?;
        return Ok(ground);
    }
    if let Some(name) = builtin(BUILTIN_GROUNDS, arg) {
        let ground: GroundProfile =
            serde_json::from_str(name).expect("built-in ground presets are valid");
        return Ok(ground);
    }
    bail!(
        "ground '{arg}' not found: no such file, nothing in ${PRESET_DIR_ENV}, \
         and no built-in preset with that name (built-ins: {})",
        GroundProfile::preset_names().join(", ")
    )
}
