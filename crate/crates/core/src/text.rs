//! Line-oriented UTF-8 file helpers shared by every loader and emitter.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Reads a text file as lines. LF and CRLF endings are accepted; a final
/// newline does not produce an extra empty line. Line numbers in errors are
/// 1-based.
pub fn read_lines(path: &Path) -> Result<Vec<String>> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    split_lines(&bytes, path)
}

pub(crate) fn split_lines(bytes: &[u8], path: &Path) -> Result<Vec<String>> {
    let mut lines = Vec::new();
    if bytes.is_empty() {
        return Ok(lines);
    }
    let body = bytes.strip_suffix(b"\n").unwrap_or(bytes);
    for (n, raw) in body.split(|&b| b == b'\n').enumerate() {
        let raw = raw.strip_suffix(b"\r").unwrap_or(raw);
        let line = std::str::from_utf8(raw).map_err(|_| Error::Utf8 {
            path: path.to_path_buf(),
            line: n + 1,
        })?;
        lines.push(line.to_owned());
    }
    Ok(lines)
}

/// Writes lines joined by LF with a trailing LF after the last line.
pub fn write_lines<I, S>(path: &Path, lines: I) -> Result<()>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    for line in lines {
        out.write_all(line.as_ref().as_bytes())
            .and_then(|_| out.write_all(b"\n"))
            .map_err(|e| Error::io(path, e))?;
    }
    out.flush().map_err(|e| Error::io(path, e))
}
