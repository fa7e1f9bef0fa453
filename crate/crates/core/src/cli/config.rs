//! Flat `key = value` configuration files.
//!
//! Keys are long flag names (`sigma`, `n-reps`, `n_reps` …). Values from the
//! file are spliced in directly after the subcommand, ahead of the user's
//! own flags, so anything given on the command line wins.

use std::ffi::OsString;
use std::fs;
use std::path::Path;

/// Parses a configuration file into `--key value` pairs.
pub fn read_config(path: &Path) -> Result<Vec<(String, String)>, String> {
    let text = fs::read_to_string(path)
        .map_err(|e| format!("cannot read config file {}: {e}", path.display()))?;
    parse_config(&text).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .or_else(|| line.split_once(':'))
            .ok_or_else(|| format!("line {}: expected `key = value`", lineno + 1))?;
        let key = key.trim().replace('_', "-");
        let value = value.trim().trim_matches('"').to_string();
        if key.is_empty() || key == "config" {
            return Err(format!("line {}: invalid key `{key}`", lineno + 1));
        }
        out.push((key, value));
    }
    Ok(out)
}

/// Removes `--config <path>` from `args` and splices the file's settings in
/// after the subcommand. Returns the argument list unchanged when no config
/// flag is present.
pub fn expand_args(args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let mut config_path = None;
    let mut rest = Vec::with_capacity(args.len());
    let mut iter = args.into_iter();
    while let Some(arg) = iter.next() {
        let s = arg.to_string_lossy();
        if s == "--config" {
            let path = iter
                .next()
                .ok_or_else(|| "--config requires a file path".to_string())?;
            config_path = Some(path);
        } else if let Some(p) = s.strip_prefix("--config=") {
            config_path = Some(OsString::from(p));
        } else {
            rest.push(arg);
        }
    }
    let Some(path) = config_path else {
        return Ok(rest);
    };
    let settings = read_config(Path::new(&path))?;

    // first non-flag token after the program name is the subcommand
    let sub = rest
        .iter()
        .skip(1)
        .position(|a| !a.to_string_lossy().starts_with('-'))
        .map(|i| i + 2)
        .unwrap_or(rest.len());
    let mut out: Vec<OsString> = rest[..sub].to_vec();
    for (k, v) in settings {
        out.push(format!("--{k}").into());
        out.push(v.into());
    }
    out.extend_from_slice(&rest[sub..]);
    Ok(out)
}
