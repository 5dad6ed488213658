//! Named proof stages. Each reads graph6 inputs by role, runs one step of
//! the search, and returns counters plus the graph sets to write.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use folkman_core::arrowing::{arrows_edge_33_joined, arrows_vertex_233};
use folkman_core::canon::{canonical_label, dedup_stream};
use folkman_core::extender::{
    edge_removal_closure, plus_k3_subgraphs, run_algorithm1, sperner_branch, SearchParams,
    PRUNE_MIN_DEGREE,
};
use folkman_core::invariants::{degree_profile, has_clique, independence_number};
use folkman_core::Graph;
use rayon::prelude::*;

use crate::error::{CliResult, Failure};
use crate::expect::{check_stage, ExpectationFile, ExpectationReport};
use crate::io::{
    describe_file, for_each_graph, read_graphs, write_atomic, write_graph_file, FileRecord,
};
use crate::manifest::{Counters, StageManifest, StageParams, FILTER_CHAIN};

pub const STAGES: [&str; 8] = [
    "algorithm1",
    "s5-branch",
    "s4-mid",
    "s4-plusk3",
    "s4-final",
    "lmax15",
    "l15-closure",
    "fv233-upper",
];

#[derive(Clone, Debug, Default)]
pub struct StageRequest {
    pub stage: String,
    /// `(role, path)`; a role may repeat where a stage takes several files.
    pub inputs: Vec<(String, PathBuf)>,
    pub n: Option<usize>,
    pub p: Option<usize>,
    pub s: Option<usize>,
    pub degree_prune: bool,
    pub no_arrow: bool,
}

impl StageRequest {
    fn paths(&self, role: &str) -> Vec<&Path> {
        self.inputs
            .iter()
            .filter(|(r, _)| r == role)
            .map(|(_, p)| p.as_path())
            .collect()
    }

    fn required(&self, role: &str) -> CliResult<&Path> {
        match self.paths(role).as_slice() {
            [one] => Ok(one),
            [] => Err(Failure::Usage(format!(
                "stage {} needs --input {role}=<file>",
                self.stage
            ))),
            _ => Err(Failure::Usage(format!(
                "stage {} takes one {role} input",
                self.stage
            ))),
        }
    }

    fn optional(&self, role: &str) -> CliResult<Option<&Path>> {
        match self.paths(role).as_slice() {
            [] => Ok(None),
            [one] => Ok(Some(one)),
            _ => Err(Failure::Usage(format!(
                "stage {} takes one {role} input",
                self.stage
            ))),
        }
    }

    fn check_roles(&self, allowed: &[&str]) -> CliResult<()> {
        match self
            .inputs
            .iter()
            .find(|(r, _)| !allowed.contains(&r.as_str()))
        {
            Some((r, _)) => Err(Failure::Usage(format!(
                "stage {} has no input role `{r}` (roles: {})",
                self.stage,
                allowed.join(", ")
            ))),
            None => Ok(()),
        }
    }

    fn need(&self, value: Option<usize>, flag: &str) -> CliResult<usize> {
        value.ok_or_else(|| Failure::Usage(format!("stage {} needs --{flag}", self.stage)))
    }
}

/// A stage's result before anything is written.
#[derive(Clone, Debug)]
pub struct StageOutcome {
    /// Expectation and file-name key, e.g. `lmax15/s=6`.
    pub key: String,
    pub params: StageParams,
    pub counters: Counters,
    /// `(role, graphs)`; role `output` is the stage's main result.
    pub outputs: Vec<(String, Vec<Graph>)>,
}

fn params_of(n: usize, p: usize, s: usize, req: &StageRequest) -> CliResult<SearchParams> {
    Ok(SearchParams::new(n, p, s)?
        .with_degree_prune(req.degree_prune)
        .with_arrow_filter(!req.no_arrow))
}

fn stage_params(sp: &SearchParams) -> StageParams {
    StageParams {
        n: Some(sp.n),
        p: Some(sp.p),
        s: Some(sp.s),
        degree_prune: sp.degree_prune,
        arrow_filter: sp.arrow_filter,
    }
}

fn key_with_flags(base: String, req: &StageRequest) -> String {
    let mut key = base;
    if req.degree_prune {
        key.push_str("/degree-prune");
    }
    if req.no_arrow {
        key.push_str("/no-arrow");
    }
    key
}

/// Membership in ⋃_{s′≤s} L_{+K3}(order; join): ω < 4, (+K3), α ≤ s and
/// K_join + H → (3,3). Returns α on success.
pub fn host_alpha(h: &Graph, join: usize, s: usize) -> Option<usize> {
    if has_clique(h, 4) || !h.is_plus_k3() {
        return None;
    }
    let alpha = independence_number(h);
    if alpha > s || !arrows_edge_33_joined(join, h).unwrap_or(false) {
        return None;
    }
    Some(alpha)
}

const CHUNK: usize = 1 << 15;

/// Streams `path` through [`host_alpha`] in parallel chunks. Returns the
/// number of records, the surviving hosts (stream order) and their α counts.
fn stream_hosts(
    path: &Path,
    join: usize,
    s: usize,
) -> CliResult<(u64, Vec<Graph>, BTreeMap<usize, u64>)> {
    let mut kept = Vec::new();
    let mut alphas = BTreeMap::new();
    let mut chunk = Vec::with_capacity(CHUNK);
    let mut flush = |chunk: &mut Vec<Graph>, kept: &mut Vec<Graph>| {
        let survivors: Vec<(Graph, usize)> = chunk
            .par_drain(..)
            .filter_map(|g| host_alpha(&g, join, s).map(|a| (g, a)))
            .collect();
        for (g, a) in survivors {
            *alphas.entry(a).or_insert(0u64) += 1;
            kept.push(g);
        }
    };
    let lines = for_each_graph(path, |g| {
        chunk.push(g);
        if chunk.len() == CHUNK {
            flush(&mut chunk, &mut kept);
        }
    })?;
    flush(&mut chunk, &mut kept);
    Ok((lines, kept, alphas))
}

fn record_alphas(counters: &mut Counters, alphas: &BTreeMap<usize, u64>, s: usize) {
    for a in 1..=s {
        counters.set(
            format!("plusk3_alpha{a}"),
            alphas.get(&a).copied().unwrap_or(0),
        );
    }
}

fn min_degree_count(graphs: &[Graph]) -> u64 {
    graphs
        .iter()
        .filter(|g| degree_profile(g).min_degree >= PRUNE_MIN_DEGREE)
        .count() as u64
}

/// Runs the extension search and records its counters.
fn extension(
    hosts: &[Graph],
    sp: &SearchParams,
    counters: &mut Counters,
) -> CliResult<(Vec<Graph>, Vec<Graph>)> {
    let out = run_algorithm1(hosts, sp)?;
    let c = out.counters;
    counters.set("generated", c.generated);
    counters.set("after_dedup", c.after_dedup);
    counters.set("after_chi", c.after_chi);
    counters.set(
        "after_chi_min_degree_ge_8",
        min_degree_count(&out.after_chi),
    );
    counters.set("after_arrow", c.after_arrow);
    Ok((out.graphs, out.after_chi))
}

fn merge_sorted(a: Vec<Graph>, b: Vec<Graph>) -> Vec<Graph> {
    let mut all: Vec<(Vec<u8>, Graph)> = a
        .into_iter()
        .chain(b)
        .map(|g| (folkman_core::graph6::encode(&g), g))
        .collect();
    all.sort_by(|x, y| x.0.cmp(&y.0));
    all.dedup_by(|x, y| x.0 == y.0);
    all.into_iter().map(|(_, g)| g).collect()
}

fn stage_algorithm1(req: &StageRequest) -> CliResult<StageOutcome> {
    req.check_roles(&["hosts"])?;
    let sp = params_of(
        req.need(req.n, "n")?,
        req.need(req.p, "p")?,
        req.need(req.s, "s")?,
        req,
    )?;
    let hosts = read_graphs(req.required("hosts")?)?;
    let mut counters = Counters::new();
    counters.set("inputs", hosts.len() as u64);
    let (graphs, after_chi) = extension(&hosts, &sp, &mut counters)?;
    Ok(StageOutcome {
        key: key_with_flags("algorithm1".into(), req),
        params: stage_params(&sp),
        counters,
        outputs: vec![("output".into(), graphs), ("after-chi".into(), after_chi)],
    })
}

fn stage_s5_branch(req: &StageRequest) -> CliResult<StageOutcome> {
    req.check_roles(&["l14"])?;
    let sp = params_of(19, 0, 5, req)?;
    let mut counters = Counters::new();
    let (lines, hosts, alphas) = stream_hosts(req.required("l14")?, sp.p + 1, sp.s)?;
    counters.set("inputs", lines);
    record_alphas(&mut counters, &alphas, sp.s);
    counters.set("hosts", hosts.len() as u64);
    let (graphs, after_chi) = extension(&hosts, &sp, &mut counters)?;
    Ok(StageOutcome {
        key: key_with_flags("s5-branch".into(), req),
        params: stage_params(&sp),
        counters,
        outputs: vec![
            ("output".into(), graphs),
            ("hosts".into(), dedup_stream(hosts)),
            ("after-chi".into(), after_chi),
        ],
    })
}

/// L_max(n; p; s): extension search over the filtered host stream plus
/// vertex duplications of the maximal graphs in `prev`.
fn lmax(req: &StageRequest, sp: &SearchParams, key: String) -> CliResult<StageOutcome> {
    let mut counters = Counters::new();
    let (lines, hosts, alphas) = stream_hosts(req.required("hosts")?, sp.p + 1, sp.s)?;
    counters.set("inputs", lines);
    record_alphas(&mut counters, &alphas, sp.s);
    counters.set("hosts", hosts.len() as u64);
    let (non_sperner, after_chi) = extension(&hosts, sp, &mut counters)?;

    let prev = match req.optional("prev")? {
        Some(path) => read_graphs(path)?,
        None => Vec::new(),
    };
    let seeds: Vec<Graph> = prev
        .into_par_iter()
        .filter(|g| matches!(g.is_maximal_k4_free(), Ok(true)))
        .filter(|g| (sp.s.saturating_sub(1)..=sp.s).contains(&independence_number(g)))
        .collect();
    counters.set("sperner_inputs", seeds.len() as u64);
    let sperner = sperner_branch(&seeds, sp)?;
    counters.set("sperner", sperner.len() as u64);
    let total = merge_sorted(non_sperner, sperner);
    counters.set("total", total.len() as u64);
    Ok(StageOutcome {
        key,
        params: stage_params(sp),
        counters,
        outputs: vec![("output".into(), total), ("after-chi".into(), after_chi)],
    })
}

fn stage_s4_mid(req: &StageRequest) -> CliResult<StageOutcome> {
    req.check_roles(&["hosts", "prev"])?;
    let sp = params_of(15, 1, 4, req)?;
    lmax(req, &sp, key_with_flags("s4-mid".into(), req))
}

fn stage_lmax15(req: &StageRequest) -> CliResult<StageOutcome> {
    req.check_roles(&["hosts", "prev"])?;
    let s = req.need(req.s, "s")?;
    let n = req.n.unwrap_or(15);
    let p = req.p.unwrap_or(1);
    let sp = params_of(n, p, s, req)?;
    let base = if (n, p) == (15, 1) {
        format!("lmax15/s={s}")
    } else {
        format!("lmax15/n={n},p={p},s={s}")
    };
    lmax(req, &sp, key_with_flags(base, req))
}

fn stage_s4_plusk3(req: &StageRequest) -> CliResult<StageOutcome> {
    req.check_roles(&["lmax4", "ramsey"])?;
    let (p, alpha_max) = (1, 4);
    let lmax4 = read_graphs(req.required("lmax4")?)?;
    let ramsey = read_graphs(req.required("ramsey")?)?;
    let mut counters = Counters::new();
    counters.set("lmax4_inputs", lmax4.len() as u64);
    counters.set("ramsey_inputs", ramsey.len() as u64);
    let lmax3: Vec<Graph> = ramsey
        .into_par_iter()
        .filter(|g| !has_clique(g, 4) && independence_number(g) == 3)
        .filter(|g| matches!(g.is_maximal_k4_free(), Ok(true)))
        .filter(|g| arrows_edge_33_joined(p, g).unwrap_or(false))
        .collect();
    let lmax3 = dedup_stream(lmax3);
    counters.set("lmax3", lmax3.len() as u64);
    let seeds: Vec<Graph> = lmax4.into_iter().chain(lmax3.iter().cloned()).collect();
    let closure = plus_k3_subgraphs(&seeds, p, alpha_max)?;
    let mut alphas = BTreeMap::new();
    for g in &closure {
        *alphas.entry(independence_number(g)).or_insert(0u64) += 1;
    }
    record_alphas(&mut counters, &alphas, alpha_max);
    counters.set("total", closure.len() as u64);
    Ok(StageOutcome {
        key: key_with_flags("s4-plusk3".into(), req),
        params: StageParams {
            n: None,
            p: Some(p),
            s: Some(alpha_max),
            degree_prune: false,
            arrow_filter: true,
        },
        counters,
        outputs: vec![("output".into(), closure), ("lmax3".into(), lmax3)],
    })
}

fn stage_s4_final(req: &StageRequest) -> CliResult<StageOutcome> {
    req.check_roles(&["hosts"])?;
    let sp = params_of(19, 0, 4, req)?;
    let hosts = read_graphs(req.required("hosts")?)?;
    let mut counters = Counters::new();
    counters.set("inputs", hosts.len() as u64);
    let (graphs, after_chi) = extension(&hosts, &sp, &mut counters)?;
    let vertex233 = after_chi
        .par_iter()
        .filter(|g| arrows_vertex_233(g))
        .count();
    counters.set("after_chi_vertex233", vertex233 as u64);
    Ok(StageOutcome {
        key: key_with_flags("s4-final".into(), req),
        params: stage_params(&sp),
        counters,
        outputs: vec![("output".into(), graphs), ("after-chi".into(), after_chi)],
    })
}

fn stage_l15_closure(req: &StageRequest) -> CliResult<StageOutcome> {
    req.check_roles(&["lmax"])?;
    let p = req.p.unwrap_or(1);
    let paths = req.paths("lmax");
    if paths.is_empty() {
        return Err(Failure::Usage(
            "stage l15-closure needs --input lmax=<file>".into(),
        ));
    }
    let mut maximal = Vec::new();
    for path in paths {
        maximal.extend(read_graphs(path)?);
    }
    let mut counters = Counters::new();
    counters.set("maximal_inputs", maximal.len() as u64);
    let all = edge_removal_closure(&maximal, p, |_| true)?;
    counters.set("total", all.len() as u64);
    let outside: Vec<Graph> = all
        .par_iter()
        .filter(|g| !folkman_core::arrowing::arrows_vertex_33(g))
        .cloned()
        .collect();
    counters.set("not_vertex33", outside.len() as u64);
    Ok(StageOutcome {
        key: if p == 1 {
            "l15-closure".into()
        } else {
            format!("l15-closure/p={p}")
        },
        params: StageParams {
            n: None,
            p: Some(p),
            s: None,
            degree_prune: false,
            arrow_filter: true,
        },
        counters,
        outputs: vec![("output".into(), all), ("not-vertex33".into(), outside)],
    })
}

fn stage_fv233_upper(req: &StageRequest) -> CliResult<StageOutcome> {
    req.check_roles(&["candidates"])?;
    let candidates = read_graphs(req.required("candidates")?)?;
    let mut counters = Counters::new();
    counters.set("candidates", candidates.len() as u64);
    let verdicts: Vec<bool> = candidates
        .par_iter()
        .map(|g| !has_clique(g, 4) && arrows_vertex_233(g))
        .collect();
    let mut per_order: BTreeMap<usize, u64> = candidates.iter().map(|g| (g.order(), 0)).collect();
    let mut members = Vec::new();
    for (g, ok) in candidates.into_iter().zip(verdicts) {
        if ok {
            *per_order.get_mut(&g.order()).unwrap() += 1;
            members.push(g);
        }
    }
    counters.set("members", members.len() as u64);
    for (order, count) in per_order {
        counters.set(format!("members_order_{order}"), count);
    }
    Ok(StageOutcome {
        key: "fv233-upper".into(),
        params: StageParams {
            n: None,
            p: None,
            s: None,
            degree_prune: false,
            arrow_filter: true,
        },
        counters,
        outputs: vec![("output".into(), members)],
    })
}

/// Runs a stage without writing anything.
pub fn execute(req: &StageRequest) -> CliResult<StageOutcome> {
    let outcome = match req.stage.as_str() {
        "algorithm1" => stage_algorithm1(req),
        "s5-branch" => stage_s5_branch(req),
        "s4-mid" => stage_s4_mid(req),
        "s4-plusk3" => stage_s4_plusk3(req),
        "s4-final" => stage_s4_final(req),
        "lmax15" => stage_lmax15(req),
        "l15-closure" => stage_l15_closure(req),
        "fv233-upper" => stage_fv233_upper(req),
        other => Err(Failure::Usage(format!(
            "unknown stage `{other}` (stages: {})",
            STAGES.join(", ")
        ))),
    }?;
    assert!(
        outcome.counters.is_non_increasing(&FILTER_CHAIN),
        "filter chain counters increased: {:?}",
        outcome.counters
    );
    Ok(outcome)
}

fn file_stem(key: &str) -> String {
    key.replace(['/', ','], "-").replace('=', "")
}

fn describe_input(role: &str, path: &Path) -> CliResult<FileRecord> {
    if path.as_os_str() == "-" {
        return Ok(FileRecord {
            role: role.to_string(),
            path: "-".into(),
            lines: 0,
            sha256: None,
        });
    }
    describe_file(role, path)
}

/// Runs a stage, writes `<stem>.g6`, `<stem>.<role>.g6` and
/// `<stem>.manifest.json` into `out_dir`, and checks expectations.
/// Outputs and manifest are written before a mismatch is reported.
pub fn run_stage(
    req: &StageRequest,
    out_dir: &Path,
    expect: Option<&Path>,
) -> CliResult<StageManifest> {
    let expectations = expect.map(ExpectationFile::load).transpose()?;
    std::fs::create_dir_all(out_dir)?;
    let mut inputs = req
        .inputs
        .iter()
        .map(|(role, path)| describe_input(role, path))
        .collect::<CliResult<Vec<_>>>()?;
    let start = Instant::now();
    let outcome = execute(req)?;
    let wall_seconds = start.elapsed().as_secs_f64();
    // Standard input was counted while streaming.
    for rec in inputs.iter_mut().filter(|r| r.path == "-") {
        rec.lines = outcome.counters.get("inputs").unwrap_or(0);
    }

    let stem = file_stem(&outcome.key);
    let mut outputs = Vec::new();
    for (role, graphs) in &outcome.outputs {
        let name = if role == "output" {
            format!("{stem}.g6")
        } else {
            format!("{stem}.{role}.g6")
        };
        outputs.push(write_graph_file(role, &out_dir.join(name), graphs)?);
    }

    let report = match (&expectations, expect) {
        (Some(file), Some(path)) => {
            let exp = file.stages.get(&outcome.key).ok_or_else(|| {
                Failure::Usage(format!(
                    "{} has no expectations for `{}`",
                    path.display(),
                    outcome.key
                ))
            })?;
            Some(ExpectationReport {
                source: path.display().to_string(),
                key: outcome.key.clone(),
                checks: check_stage(exp, &outcome.counters, &inputs),
            })
        }
        _ => None,
    };

    let manifest = StageManifest {
        stage: req.stage.clone(),
        key: outcome.key.clone(),
        params: outcome.params.clone(),
        inputs,
        counters: outcome.counters.clone(),
        outputs,
        expectations: report,
        threads: rayon::current_num_threads(),
        wall_seconds,
    };
    write_atomic(
        &out_dir.join(format!("{stem}.manifest.json")),
        manifest.to_json().as_bytes(),
    )?;
    if let Some(report) = &manifest.expectations {
        if !report.mismatches().is_empty() {
            return Err(Failure::Mismatch(format!(
                "{}: {}",
                outcome.key,
                report.summary()
            )));
        }
    }
    Ok(manifest)
}

/// Canonical graph6 labels of a set, for comparisons in tests and tools.
pub fn label_set(graphs: &[Graph]) -> std::collections::BTreeSet<Vec<u8>> {
    graphs.par_iter().map(canonical_label).collect()
}
