//! Shared helpers for integration and acceptance tests: exhaustive graph
//! lists, brute-force invariants, and generators for small hereditary
//! graph classes.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::sync::{Mutex, OnceLock};

use folkman_core::canon::{canonical_set, unlabeled_graphs};
use folkman_core::graph6;
use folkman_core::invariants::{clique_number_within, independence_number_within};
use folkman_core::{Graph, VertexSet};
use rayon::prelude::*;

/// All unlabeled graphs of order `n` (1..=9), computed once per process.
pub fn graphs(n: usize) -> &'static [Graph] {
    static CACHE: OnceLock<Mutex<Vec<Option<&'static [Graph]>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![None; 11]));
    if let Some(g) = cache.lock().unwrap()[n] {
        return g;
    }
    let list: &'static [Graph] = Box::leak(unlabeled_graphs(n).into_boxed_slice());
    cache.lock().unwrap()[n] = Some(list);
    list
}

pub fn graph_from_edges(n: usize, edges: &[(usize, usize)]) -> Graph {
    Graph::from_edges(n, edges).unwrap()
}

/// Every vertex subset, as a bitmask.
fn subsets(n: usize) -> impl Iterator<Item = u64> {
    0u64..1 << n
}

pub fn brute_is_clique(g: &Graph, s: u64) -> bool {
    VertexSet(s).iter().all(|v| s & !(1 << v) & !g.row(v) == 0)
}

pub fn brute_is_independent(g: &Graph, s: u64) -> bool {
    VertexSet(s).iter().all(|v| s & g.row(v) == 0)
}

pub fn brute_omega(g: &Graph) -> usize {
    subsets(g.order())
        .filter(|&s| brute_is_clique(g, s))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap()
}

pub fn brute_alpha(g: &Graph) -> usize {
    subsets(g.order())
        .filter(|&s| brute_is_independent(g, s))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap()
}

/// Minimum number of independent sets covering V, by subset DP.
pub fn brute_chi(g: &Graph) -> usize {
    let n = g.order();
    let full = (1u64 << n) - 1;
    let independent: Vec<bool> = subsets(n).map(|s| brute_is_independent(g, s)).collect();
    let mut best = vec![usize::MAX; 1 << n];
    best[0] = 0;
    for mask in 1..=full {
        // Put the lowest vertex of `mask` in some independent subset.
        let low = mask & mask.wrapping_neg();
        let rest = mask & !low;
        let mut sub = rest;
        loop {
            let class = sub | low;
            if independent[class as usize] {
                let prev = best[(mask & !class) as usize];
                if prev != usize::MAX {
                    best[mask as usize] = best[mask as usize].min(prev + 1);
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    best[full as usize]
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Adjacency bits in a fixed order; the minimum over all relabelings
/// identifies an isomorphism class.
pub fn brute_certificate(g: &Graph, perms: &[Vec<usize>]) -> u64 {
    let n = g.order();
    perms
        .iter()
        .map(|p| {
            let h = g.permuted(p);
            let mut bits = 0u64;
            for j in 1..n {
                for i in 0..j {
                    bits = bits << 1 | (h.row(i) >> j & 1);
                }
            }
            bits
        })
        .min()
        .unwrap()
}

/// Classes of graphs with ω < `k` and α < `l`, by order, grown one
/// vertex at a time. The class is hereditary, so every member on m + 1
/// vertices extends a member on m vertices by a vertex whose
/// neighborhood has no K_{k−1} and whose non-neighborhood has no
/// independent (l−1)-set.
pub fn ramsey_class(n_max: usize, k: usize, l: usize) -> Vec<Vec<Graph>> {
    let mut levels = vec![Vec::new(), vec![Graph::empty(1)]];
    for m in 1..n_max {
        let next: BTreeSet<Vec<u8>> = canonical_set(levels[m].par_iter().flat_map_iter(|g| {
            extensions(g, k, l)
                .into_iter()
                .map(move |nb| g.add_vertex(nb).unwrap())
        }));
        levels.push(
            next.into_iter()
                .map(|s| graph6::decode(&s).unwrap())
                .collect(),
        );
    }
    levels
}

fn extensions(g: &Graph, k: usize, l: usize) -> Vec<VertexSet> {
    let n = g.order();
    let mut out = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn go(
        g: &Graph,
        n: usize,
        k: usize,
        l: usize,
        v: usize,
        inside: VertexSet,
        outside: VertexSet,
        out: &mut Vec<VertexSet>,
    ) {
        if v == n {
            out.push(inside);
            return;
        }
        let nb = g.neighbors(v);
        // v joins a clique of inside only through its neighbors there.
        if clique_number_within(g, inside & nb) + 1 < k - 1 {
            go(
                g,
                n,
                k,
                l,
                v + 1,
                inside | VertexSet::singleton(v),
                outside,
                out,
            );
        }
        if independence_number_within(g, outside - nb - VertexSet::singleton(v)) + 1 < l - 1 {
            go(
                g,
                n,
                k,
                l,
                v + 1,
                inside,
                outside | VertexSet::singleton(v),
                out,
            );
        }
    }
    go(g, n, k, l, 0, VertexSet::EMPTY, VertexSet::EMPTY, &mut out);
    out
}

/// Directory with externally produced datasets, if configured.
pub fn data_dir() -> Option<PathBuf> {
    std::env::var_os("FOLKMAN_DATA_DIR")
        .map(PathBuf::from)
        .filter(|p| p.is_dir())
}

pub fn workspace_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn expected_counts() -> PathBuf {
    workspace_root().join("config/expected_counts.json")
}

pub fn write_g6(path: &std::path::Path, graphs: &[Graph]) {
    let mut bytes = Vec::new();
    for g in graphs {
        bytes.extend_from_slice(&graph6::encode(g));
        bytes.push(b'\n');
    }
    std::fs::write(path, bytes).unwrap();
}
