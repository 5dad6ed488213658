//! graph6 codec. One graph per line, no `>>graph6<<` header.
//!
//! Layout: one byte `n + 63`, then the upper triangle of the adjacency
//! matrix in column order (`(0,1), (0,2), (1,2), (0,3), ...`) packed six
//! bits per byte, most significant bit first, each byte offset by 63.

use std::io::{self, BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::{Graph, MAX_VERTICES};

fn body_len(n: usize) -> usize {
    (n * n.saturating_sub(1) / 2).div_ceil(6)
}

pub fn encode(g: &Graph) -> Vec<u8> {
    let n = g.order();
    let mut out = Vec::with_capacity(1 + body_len(n));
    out.push(n as u8 + 63);
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        let col = g.row(j);
        for i in 0..j {
            acc = acc << 1 | (col >> i & 1) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    out
}

pub fn encode_string(g: &Graph) -> String {
    // graph6 output is always printable ASCII.
    String::from_utf8(encode(g)).unwrap()
}

fn parse_err(offset: usize, message: impl Into<String>) -> Error {
    Error::Graph6 {
        offset,
        message: message.into(),
    }
}

/// Decodes one graph6 record. A single trailing `\n` (or `\r\n`) is accepted.
pub fn decode(bytes: &[u8]) -> Result<Graph> {
    let bytes = bytes
        .strip_suffix(b"\n")
        .map(|b| b.strip_suffix(b"\r").unwrap_or(b))
        .unwrap_or(bytes);
    let Some(&head) = bytes.first() else {
        return Err(parse_err(0, "empty record"));
    };
    if !(63..=126).contains(&head) {
        return Err(parse_err(0, format!("invalid header byte 0x{head:02x}")));
    }
    if head == 126 {
        return Err(parse_err(
            0,
            format!("orders above {MAX_VERTICES} are not supported"),
        ));
    }
    let n = (head - 63) as usize;
    if n == 0 {
        return Err(parse_err(0, "graph has no vertices"));
    }
    let expected = 1 + body_len(n);
    if bytes.len() != expected {
        return Err(parse_err(
            bytes.len().min(expected),
            format!(
                "expected {expected} bytes for {n} vertices, found {}",
                bytes.len()
            ),
        ));
    }
    if let Some(pos) = bytes.iter().position(|b| !(63..=126).contains(b)) {
        return Err(parse_err(
            pos,
            format!("byte 0x{:02x} outside 63..=126", bytes[pos]),
        ));
    }

    let mut adj = vec![0u64; n];
    let mut bit = 0usize;
    for j in 1..n {
        for i in 0..j {
            let byte = bytes[1 + bit / 6] - 63;
            if byte >> (5 - bit % 6) & 1 == 1 {
                adj[i] |= 1u64 << j;
                adj[j] |= 1u64 << i;
            }
            bit += 1;
        }
    }
    if !bit.is_multiple_of(6) {
        let last = bytes[expected - 1] - 63;
        if last & ((1u8 << (6 - bit % 6)) - 1) != 0 {
            return Err(parse_err(expected - 1, "nonzero padding bits"));
        }
    }
    Ok(Graph::from_rows_unchecked(adj))
}

pub fn decode_str(s: &str) -> Result<Graph> {
    decode(s.as_bytes())
}

/// Iterator over a graph6 line stream. Yields `(line_index, result)` with
/// 0-based line indices; blank lines are skipped. I/O errors end the stream.
pub struct Graph6Lines<R> {
    reader: R,
    line: usize,
    buf: Vec<u8>,
}

impl<R: BufRead> Graph6Lines<R> {
    pub fn new(reader: R) -> Self {
        Graph6Lines {
            reader,
            line: 0,
            buf: Vec::new(),
        }
    }
}

impl<R: BufRead> Iterator for Graph6Lines<R> {
    type Item = io::Result<(usize, Result<Graph>)>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            self.buf.clear();
            match self.reader.read_until(b'\n', &mut self.buf) {
                Ok(0) => return None,
                Ok(_) => {}
                Err(e) => return Some(Err(e)),
            }
            let idx = self.line;
            self.line += 1;
            let trimmed = self.buf.trim_ascii_end();
            if trimmed.is_empty() {
                continue;
            }
            return Some(Ok((idx, decode(trimmed))));
        }
    }
}

pub fn write_line<W: Write>(w: &mut W, g: &Graph) -> io::Result<()> {
    w.write_all(&encode(g))?;
    w.write_all(b"\n")
}
