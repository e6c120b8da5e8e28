use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;

use larclab::designs::SubspaceFamily;
use larclab::rational::{self, Rational};

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn read_family(path: &Path) -> Result<SubspaceFamily> {
    read_json(path)
}

pub fn rational_arg(name: &str, text: &str) -> Result<Rational> {
    rational::parse(text).with_context(|| format!("--{name}"))
}

pub fn require_seed(seed: Option<u64>, what: &str) -> Result<u64> {
    match seed {
        Some(s) => Ok(s),
        None => bail!("{what} is randomized and requires --seed"),
    }
}

pub fn require_n(n: usize, max_n: usize, what: &str) -> Result<()> {
    if n > max_n {
        bail!("{what} needs dense tables over n = {n} variables, above --max-n {max_n} (set LARCLAB_MAX_N to raise it)");
    }
    Ok(())
}

/// A pretty-printed JSON document, to `out` or stdout.
pub fn emit_document<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

/// One JSON line on stdout, flushed immediately.
pub fn emit_line<T: Serialize>(value: &T) -> Result<()> {
    let mut stdout = std::io::stdout().lock();
    serde_json::to_writer(&mut stdout, value)?;
    stdout.write_all(b"\n")?;
    stdout.flush()?;
    Ok(())
}
