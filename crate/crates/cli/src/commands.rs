//! Subcommands other than `stage`. Each writes its report to `out` and
//! returns a [`Failure`] carrying the exit code when something is wrong.

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use folkman_core::arrowing::{edge_33_search, vertex_233_search, vertex_33_search};
use folkman_core::canon::{aut_size, canonical_set};
use folkman_core::graph6::{self, Graph6Lines};
use folkman_core::invariants::{
    chromatic_number, clique_number, degree_profile, independence_number,
};
use folkman_core::Graph;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CliResult, Failure};
use crate::expect::{Check, CheckStatus, ExpectationFile};
use crate::filter::Filter;
use crate::io::{
    describe_file, read_graphs, read_graphs_lenient, write_atomic, write_graph_file, FileRecord,
};
use crate::stats::StatsTable;

/// `key=value` record of exact invariants.
pub fn props_line(g: &Graph) -> String {
    let d = degree_profile(g);
    format!(
        "graph6={} n={} edges={} omega={} alpha={} chi={} min_degree={} max_degree={} aut={}",
        graph6::encode_string(g),
        g.order(),
        d.edge_count,
        clique_number(g),
        independence_number(g),
        chromatic_number(g),
        d.min_degree,
        d.max_degree,
        aut_size(g),
    )
}

/// Prints one record per graph; stops at the first malformed one.
pub fn cmd_props<W: Write>(records: &[String], input: Option<&Path>, out: &mut W) -> CliResult<()> {
    let mut emit = |idx: usize, raw: &[u8]| -> CliResult<()> {
        let g =
            graph6::decode(raw).map_err(|e| Failure::Parse(format!("record {}: {e}", idx + 1)))?;
        writeln!(out, "{}", props_line(&g))?;
        Ok(())
    };
    if !records.is_empty() {
        for (i, r) in records.iter().enumerate() {
            emit(i, r.trim().as_bytes())?;
        }
        return Ok(());
    }
    let path = input.unwrap_or(Path::new("-"));
    let reader = crate::io::open_input(path)?;
    for line in reader.split(b'\n').enumerate() {
        let (i, bytes) = line;
        let bytes = bytes?;
        let trimmed = bytes.trim_ascii();
        if !trimmed.is_empty() {
            emit(i, trimmed)?;
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArrowKind {
    Edge33,
    Vertex33,
    Vertex233,
}

impl std::str::FromStr for ArrowKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "edge33" => Ok(ArrowKind::Edge33),
            "vertex33" => Ok(ArrowKind::Vertex33),
            "vertex233" => Ok(ArrowKind::Vertex233),
            _ => Err(format!("unknown kind `{s}` (edge33, vertex33, vertex233)")),
        }
    }
}

/// Verdict for K_p + G, with a witness coloring when it does not arrow.
pub fn arrow_verdict(kind: ArrowKind, p: usize, g: &Graph) -> CliResult<(bool, String)> {
    let joined = g.join_complete(p)?;
    Ok(match kind {
        ArrowKind::Edge33 => match edge_33_search(&joined) {
            Ok(()) => (true, String::new()),
            Err(c) => (false, c.to_bit_string()),
        },
        ArrowKind::Vertex33 => match vertex_33_search(&joined) {
            Ok(()) => (true, String::new()),
            Err(c) => (false, c.to_digit_string()),
        },
        ArrowKind::Vertex233 => match vertex_233_search(&joined) {
            Ok(()) => (true, String::new()),
            Err(c) => (false, c.to_digit_string()),
        },
    })
}

/// One line per input record: `<graph6> true|false [witness]`, or
/// `<raw> error <message>` for malformed records. Processing continues
/// past malformed records; the failure is reported at the end.
pub fn cmd_arrow<R: BufRead, W: Write>(
    kind: ArrowKind,
    p: usize,
    witness: bool,
    input: R,
    out: &mut W,
) -> CliResult<()> {
    let mut bad = Vec::new();
    let mut batch: Vec<(usize, Result<Graph, folkman_core::Error>)> = Vec::new();
    let mut flush = |batch: &mut Vec<(usize, Result<Graph, folkman_core::Error>)>,
                     out: &mut W|
     -> CliResult<()> {
        let verdicts: Vec<Option<CliResult<(bool, String)>>> = batch
            .par_iter()
            .map(|(_, g)| g.as_ref().ok().map(|g| arrow_verdict(kind, p, g)))
            .collect();
        for ((idx, g), v) in batch.drain(..).zip(verdicts) {
            match (g, v) {
                (Ok(g), Some(v)) => {
                    let (arrows, w) = v?;
                    let code = graph6::encode_string(&g);
                    if witness && !arrows {
                        writeln!(out, "{code} false {w}")?;
                    } else {
                        writeln!(out, "{code} {arrows}")?;
                    }
                }
                (Err(e), _) => {
                    writeln!(out, "line{} error {e}", idx + 1)?;
                    bad.push(idx + 1);
                }
                (Ok(_), None) => unreachable!(),
            }
        }
        Ok(())
    };
    for item in Graph6Lines::new(input) {
        batch.push(item?);
        if batch.len() == 4096 {
            flush(&mut batch, out)?;
        }
    }
    flush(&mut batch, out)?;
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Failure::Parse(format!(
            "{} malformed record(s), first at line {}",
            bad.len(),
            bad[0]
        )))
    }
}

pub fn cmd_stats<W: Write>(
    input: &Path,
    json: bool,
    expect: Option<(&Path, &str)>,
    out: &mut W,
) -> CliResult<()> {
    let graphs = read_graphs(input)?;
    let table = StatsTable::from_graphs(&graphs);
    let record = table.to_record();
    if json {
        writeln!(
            out,
            "{}",
            serde_json::to_string(&record).expect("stats serialize")
        )?;
    } else {
        write!(out, "{}", table.render())?;
    }
    if let Some((path, name)) = expect {
        let file = ExpectationFile::load(path)?;
        let want = file
            .tables
            .get(name)
            .ok_or_else(|| Failure::Usage(format!("{} has no table `{name}`", path.display())))?;
        let diff = record.differences(want);
        if !diff.is_empty() {
            return Err(Failure::Mismatch(format!(
                "table {name}: {}",
                diff.join("; ")
            )));
        }
    }
    Ok(())
}

/// Sidecar record written next to an ingested file.
#[derive(Clone, Debug, Serialize)]
pub struct IngestManifest {
    pub source: FileRecord,
    pub records: u64,
    pub distinct: u64,
    pub filter: Option<String>,
    pub kept: u64,
    pub output: Option<FileRecord>,
    pub expectation: Option<Check>,
}

#[derive(Clone, Debug, Default)]
pub struct IngestRequest {
    pub input: PathBuf,
    pub out: Option<PathBuf>,
    pub filter: Option<String>,
    pub expect_count: Option<u64>,
    /// Expectation file and dataset name inside it.
    pub dataset: Option<(PathBuf, String)>,
}

/// Validates, canonicalizes, deduplicates and filters a graph6 file.
/// Malformed lines are all listed and nothing is written.
pub fn cmd_ingest<W: Write>(
    req: &IngestRequest,
    out: &mut W,
    err: &mut dyn Write,
) -> CliResult<IngestManifest> {
    let (mut filter_text, mut expected) = (req.filter.clone(), req.expect_count);
    if let Some((path, name)) = &req.dataset {
        let file = ExpectationFile::load(path)?;
        let ds = file
            .datasets
            .get(name)
            .ok_or_else(|| Failure::Usage(format!("{} has no dataset `{name}`", path.display())))?;
        filter_text = filter_text.or_else(|| ds.filter.clone());
        expected = expected.or(Some(ds.count));
    }
    let filter: Filter = match &filter_text {
        Some(t) => t.parse().map_err(Failure::Usage)?,
        None => Filter::accept_all(),
    };

    let (graphs, bad) = read_graphs_lenient(&req.input)?;
    if !bad.is_empty() {
        for b in &bad {
            writeln!(err, "{}", b.describe(&req.input))?;
        }
        return Err(Failure::Parse(format!(
            "{}: {} malformed line(s)",
            req.input.display(),
            bad.len()
        )));
    }
    let records = graphs.len() as u64;
    let distinct: Vec<Graph> = canonical_set(graphs)
        .into_iter()
        .map(|s| graph6::decode(&s).expect("canonical graph6 is well formed"))
        .collect();
    let distinct_count = distinct.len() as u64;
    let kept: Vec<Graph> = distinct
        .into_par_iter()
        .filter(|g| filter.matches(g))
        .collect();

    let output = match &req.out {
        Some(path) => Some(write_graph_file("output", path, &kept)?),
        None => {
            crate::io::write_graphs(out, &kept)?;
            None
        }
    };
    let expectation = expected.map(|e| Check {
        counter: "kept".into(),
        expected: e,
        actual: Some(kept.len() as u64),
        status: if e == kept.len() as u64 {
            CheckStatus::Ok
        } else {
            CheckStatus::Mismatch
        },
    });
    let source = if req.input.as_os_str() == "-" {
        FileRecord {
            role: "source".into(),
            path: "-".into(),
            lines: records,
            sha256: None,
        }
    } else {
        describe_file("source", &req.input)?
    };
    let manifest = IngestManifest {
        source,
        records,
        distinct: distinct_count,
        filter: filter_text,
        kept: kept.len() as u64,
        output,
        expectation,
    };
    if let Some(path) = &req.out {
        let mut json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        json.push('\n');
        let mut sidecar = path.clone().into_os_string();
        sidecar.push(".manifest.json");
        write_atomic(Path::new(&sidecar), json.as_bytes())?;
    }
    if let Some(c) = &manifest.expectation {
        if c.status == CheckStatus::Mismatch {
            return Err(Failure::Mismatch(format!(
                "{}: expected {} graphs, kept {}",
                req.input.display(),
                c.expected,
                manifest.kept
            )));
        }
    }
    Ok(manifest)
}

/// Canonical representatives, sorted, one per isomorphism class.
pub fn cmd_dedup<W: Write>(input: &Path, out_path: Option<&Path>, out: &mut W) -> CliResult<u64> {
    let graphs = read_graphs(input)?;
    let labels = canonical_set(graphs);
    let count = labels.len() as u64;
    let mut bytes = Vec::new();
    for l in labels {
        bytes.extend_from_slice(&l);
        bytes.push(b'\n');
    }
    match out_path {
        Some(p) => write_atomic(p, &bytes)?,
        None => out.write_all(&bytes)?,
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn props_examples() {
        assert_eq!(
            props_line(&Graph::cycle(5)),
            "graph6=Dhc n=5 edges=5 omega=2 alpha=2 chi=3 min_degree=2 max_degree=2 aut=10"
        );
        let graham = props_line(&Graph::cycle(5).join_complete(3).unwrap());
        assert!(graham.contains("omega=5") && graham.contains("chi=6"));
        assert!(props_line(&Graph::petersen()).contains("alpha=4"));
    }

    #[test]
    fn props_parse_error_carries_offset() {
        let mut out = Vec::new();
        match cmd_props(&["Dh".into()], None, &mut out) {
            Err(Failure::Parse(m)) => assert!(m.contains("byte 2"), "{m}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn arrow_stream_continues_past_errors() {
        let input = b"E~~w\nD~{\n!!\nDhc\n";
        let mut out = Vec::new();
        let res = cmd_arrow(ArrowKind::Edge33, 0, false, &input[..], &mut out);
        assert!(matches!(res, Err(Failure::Parse(_))));
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "E~~w true");
        assert_eq!(lines[1], "D~{ false");
        assert!(lines[2].starts_with("line3 error"));
        assert_eq!(lines[3], "Dhc false");
    }

    #[test]
    fn arrow_witness_and_join() {
        let mut out = Vec::new();
        cmd_arrow(ArrowKind::Edge33, 3, true, &b"Dhc\n"[..], &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "Dhc true\n");
        let mut out = Vec::new();
        cmd_arrow(ArrowKind::Vertex233, 0, true, &b"D~{\n"[..], &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let parts: Vec<&str> = text.split_whitespace().collect();
        assert_eq!(parts[..2], ["D~{", "false"]);
        assert_eq!(parts[2].len(), 5);
    }
}
