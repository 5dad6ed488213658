//! graph6 line files: strict readers, atomic writers, digests.

use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use folkman_core::graph6::{self, Graph6Lines};
use folkman_core::Graph;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliResult, Failure};

/// `-` means standard input.
pub fn open_input(path: &Path) -> CliResult<Box<dyn BufRead>> {
    if path.as_os_str() == "-" {
        return Ok(Box::new(BufReader::new(io::stdin())));
    }
    let file = File::open(path)
        .map_err(|e| Failure::Usage(format!("cannot open {}: {e}", path.display())))?;
    Ok(Box::new(BufReader::with_capacity(1 << 16, file)))
}

/// A record that failed to parse, with its 1-based line number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BadLine {
    pub line: usize,
    pub error: folkman_core::Error,
}

impl BadLine {
    pub fn describe(&self, source: &Path) -> String {
        format!("{}:{}: {}", source.display(), self.line, self.error)
    }
}

/// Calls `f` for every graph in the stream and returns the number of
/// records. Stops at the first malformed line.
pub fn for_each_graph<F: FnMut(Graph)>(path: &Path, mut f: F) -> CliResult<u64> {
    let mut count = 0;
    for item in Graph6Lines::new(open_input(path)?) {
        let (idx, parsed) = item?;
        match parsed {
            Ok(g) => {
                count += 1;
                f(g);
            }
            Err(error) => {
                return Err(Failure::Parse(
                    BadLine {
                        line: idx + 1,
                        error,
                    }
                    .describe(path),
                ));
            }
        }
    }
    Ok(count)
}

pub fn read_graphs(path: &Path) -> CliResult<Vec<Graph>> {
    let mut out = Vec::new();
    for_each_graph(path, |g| out.push(g))?;
    Ok(out)
}

/// Reads every line, keeping malformed ones aside instead of stopping.
pub fn read_graphs_lenient(path: &Path) -> CliResult<(Vec<Graph>, Vec<BadLine>)> {
    let mut good = Vec::new();
    let mut bad = Vec::new();
    for item in Graph6Lines::new(open_input(path)?) {
        let (idx, parsed) = item?;
        match parsed {
            Ok(g) => good.push(g),
            Err(error) => bad.push(BadLine {
                line: idx + 1,
                error,
            }),
        }
    }
    Ok((good, bad))
}

pub fn write_graphs<W: Write>(w: &mut W, graphs: &[Graph]) -> io::Result<()> {
    for g in graphs {
        graph6::write_line(w, g)?;
    }
    Ok(())
}

/// Path, record count and SHA-256 of a file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FileRecord {
    pub role: String,
    pub path: String,
    pub lines: u64,
    pub sha256: Option<String>,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Digest and non-blank line count of a file.
pub fn describe_file(role: &str, path: &Path) -> CliResult<FileRecord> {
    let mut file = File::open(path)
        .map_err(|e| Failure::Usage(format!("cannot open {}: {e}", path.display())))?;
    let mut hasher = Sha256::new();
    let mut lines = 0u64;
    let mut buf = vec![0u8; 1 << 16];
    let mut line_has_content = false;
    loop {
        let k = file.read(&mut buf)?;
        if k == 0 {
            break;
        }
        hasher.update(&buf[..k]);
        for &b in &buf[..k] {
            match b {
                b'\n' => {
                    if line_has_content {
                        lines += 1;
                    }
                    line_has_content = false;
                }
                b'\r' | b' ' | b'\t' => {}
                _ => line_has_content = true,
            }
        }
    }
    if line_has_content {
        lines += 1;
    }
    Ok(FileRecord {
        role: role.to_string(),
        path: path.display().to_string(),
        lines,
        sha256: Some(hex(&hasher.finalize())),
    })
}

/// Writes `bytes` next to `path` and renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let mut tmp = PathBuf::from(path);
    let name = format!(
        ".{}.tmp",
        path.file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default()
    );
    tmp.set_file_name(name);
    {
        let mut w = BufWriter::new(File::create(&tmp)?);
        w.write_all(bytes)?;
        w.into_inner().map_err(|e| e.into_error())?.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Writes a graph6 file atomically and describes it.
pub fn write_graph_file(role: &str, path: &Path, graphs: &[Graph]) -> CliResult<FileRecord> {
    let mut bytes = Vec::new();
    write_graphs(&mut bytes, graphs)?;
    write_atomic(path, &bytes)?;
    Ok(FileRecord {
        role: role.to_string(),
        path: path.display().to_string(),
        lines: graphs.len() as u64,
        sha256: Some(hex(&Sha256::digest(&bytes))),
    })
}
