//! Deterministic output assembly: 17-significant-digit floats, sorted
//! `# key=value` headers echoing the resolved configuration, LF endings,
//! whole-buffer writes.

use std::path::Path;

use crate::CliResult;

pub fn fmt_f(v: f64) -> String {
    format!("{v:.16e}")
}

/// Sorted header block; every command echoes its full effective
/// configuration through this.
pub fn header(command: &str, pairs: &[(&str, String)]) -> String {
    let mut all: Vec<(&str, String)> = Vec::with_capacity(pairs.len() + 1);
    all.push(("command", command.to_string()));
    all.extend(pairs.iter().map(|(k, v)| (*k, v.clone())));
    all.sort_by(|a, b| a.0.cmp(b.0));
    let mut s = String::new();
    for (k, v) in all {
        s.push_str("# ");
        s.push_str(k);
        s.push('=');
        s.push_str(&v);
        s.push('\n');
    }
    s
}

pub fn write_out(out: Option<&Path>, content: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}
