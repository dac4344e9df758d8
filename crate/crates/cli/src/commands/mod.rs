pub mod accc;
pub mod arith;
pub mod katok;
pub mod sarnak;
pub mod words;

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::CliResult;

pub struct Ctx {
    pub json: bool,
}

impl Ctx {
    /// Compact JSON with `--json`, the human summary otherwise.
    pub fn emit<T: Serialize>(&self, value: &T, text: impl FnOnce() -> String) -> CliResult<()> {
        if self.json {
            print_json_line(value)
        } else {
            write_or_print(None, &text())
        }
    }
}

pub fn print_json_line<T: Serialize>(value: &T) -> CliResult<()> {
    let mut line = serde_json::to_string(value).map_err(std::io::Error::other)?;
    line.push('\n');
    write_or_print(None, &line)
}

pub fn pretty<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(std::io::Error::other)?;
    s.push('\n');
    Ok(s)
}

/// Writes `contents` to `path`, or to stdout when no path is given.
pub fn write_or_print(path: Option<&Path>, contents: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, contents)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(contents.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}
