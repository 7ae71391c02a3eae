//! `key = value` config files, merged into the argument list ahead of the
//! command-line flags so that flags win.

use std::ffi::OsString;
use std::fs;

/// Expands `--config FILE` into `--key value` pairs placed right after the subcommand.
pub fn expand(args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let mut rest = Vec::with_capacity(args.len());
    let mut config = None;
    let mut iter = args.into_iter();
    if let Some(bin) = iter.next() {
        rest.push(bin);
    }
    while let Some(arg) = iter.next() {
        let s = arg.to_string_lossy();
        if s == "--config" {
            let path = iter.next().ok_or("--config needs a file path")?;
            config = Some(path);
        } else if let Some(path) = s.strip_prefix("--config=") {
            config = Some(OsString::from(path));
        } else {
            rest.push(arg);
        }
    }
    let Some(path) = config else {
        return Ok(rest);
    };
    let text = fs::read_to_string(&path).map_err(|e| format!("cannot read config {}: {e}", path.to_string_lossy()))?;
    let injected = parse(&text)?;
    // The subcommand is the first argument after the binary that is not a flag.
    let pos = rest
        .iter()
        .skip(1)
        .position(|a| !a.to_string_lossy().starts_with('-'))
        .map(|p| p + 2)
        .ok_or("a subcommand is required")?;
    let mut out: Vec<OsString> = rest[..pos].to_vec();
    out.extend(injected.into_iter().map(OsString::from));
    out.extend_from_slice(&rest[pos..]);
    Ok(out)
}

/// One `--key v1 v2 ...` group per non-comment line.
pub fn parse(text: &str) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) =
            line.split_once('=').ok_or_else(|| format!("config line {}: expected key = value", n + 1))?;
        let key = key.trim().replace('_', "-");
        if key.is_empty() || key.starts_with('-') {
            return Err(format!("config line {}: bad key", n + 1));
        }
        let values: Vec<&str> = value.split_whitespace().collect();
        match values.as_slice() {
            // `--key=value` keeps negative exponents like `-1e-3` from looking like flags.
            [single] => out.push(format!("--{key}={single}")),
            _ => {
                out.push(format!("--{key}"));
                out.extend(values.iter().map(|v| (*v).to_owned()));
            }
        }
    }
    Ok(out)
}
