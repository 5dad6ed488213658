//! Extension search for maximal K4-free graphs.
//!
//! Given a set 𝒜 of graphs H on `n - s` vertices, every non-Sperner maximal
//! K4-free graph G on `n` vertices with α(G) = s and an independent s-set A
//! such that G − A ∈ 𝒜 is built by attaching s independent vertices whose
//! neighborhoods are maximal triangle-free subsets of V(H). The builder then
//! removes isomorphs, keeps graphs with χ ≥ 6 − p and finally keeps those
//! with K_p + G → (3,3).

use std::collections::{BTreeSet, HashMap, HashSet};

use rayon::prelude::*;

use crate::arrowing::arrows_edge_33_joined;
use crate::canon::canonical_label;
use crate::error::{Error, Result};
use crate::graph::{Bits, Graph, VertexSet, MAX_VERTICES};
use crate::graph6;
use crate::invariants::{
    chromatic_at_least, degree_profile, independence_number, independence_number_within,
};

/// Largest host order for the maximal triangle-free family.
pub const FAMILY_MAX_ORDER: usize = 20;

/// Minimum degree bound used by degree pruning.
pub const PRUNE_MIN_DEGREE: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchParams {
    /// Order of the graphs being built.
    pub n: usize,
    /// Size of the complete graph joined before the arrowing test.
    pub p: usize,
    /// Independence number of the graphs being built.
    pub s: usize,
    /// Restrict to δ(G) ≥ 8 (only sound for n = 19, p = 0).
    pub degree_prune: bool,
    /// Apply the final arrowing filter.
    pub arrow_filter: bool,
}

impl SearchParams {
    pub fn new(n: usize, p: usize, s: usize) -> Result<Self> {
        let params = SearchParams {
            n,
            p,
            s,
            degree_prune: false,
            arrow_filter: true,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_degree_prune(mut self, on: bool) -> Self {
        self.degree_prune = on;
        self
    }

    pub fn with_arrow_filter(mut self, on: bool) -> Self {
        self.arrow_filter = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.s == 0 {
            return Err(Error::InvalidParams("s must be at least 1".into()));
        }
        if self.n <= self.s {
            return Err(Error::InvalidParams(format!(
                "n = {} must exceed s = {}",
                self.n, self.s
            )));
        }
        if self.n + self.p > MAX_VERTICES {
            return Err(Error::InvalidParams(format!(
                "n + p = {} exceeds {MAX_VERTICES}",
                self.n + self.p
            )));
        }
        Ok(())
    }

    /// Order of the graphs in 𝒜.
    pub fn host_order(&self) -> usize {
        self.n - self.s
    }

    /// χ threshold of the chromatic filter.
    pub fn chi_threshold(&self) -> usize {
        6usize.saturating_sub(self.p)
    }
}

/// All maximal triangle-free vertex subsets of a host graph, ascending by
/// bitmask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFamily {
    pub host: Graph,
    pub members: Vec<VertexSet>,
}

impl SetFamily {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

fn check_family_order(h: &Graph) -> Result<()> {
    if h.order() > FAMILY_MAX_ORDER {
        return Err(Error::TooLarge {
            what: "family host order",
            limit: FAMILY_MAX_ORDER,
            actual: h.order(),
        });
    }
    Ok(())
}

/// True iff `nb` (a neighborhood restricted to some set) contains an edge.
#[inline]
fn spans_edge(rows: &[u64], nb: u64) -> bool {
    Bits(nb).any(|u| rows[u] & nb != 0)
}

/// Enumerates maximal triangle-free subsets by include/exclude search over
/// vertices. Excluding `v` is only explored when some later choice can
/// still make `v` close a triangle.
pub fn maximal_k3_free_family(h: &Graph) -> Result<SetFamily> {
    check_family_order(h)?;
    let rows = h.rows();
    let n = h.order();
    let mut members = Vec::new();

    fn go(rows: &[u64], n: usize, v: usize, set: u64, out: &mut Vec<VertexSet>) {
        if v == n {
            let maximal = (0..n)
                .filter(|&u| set >> u & 1 == 0)
                .all(|u| spans_edge(rows, rows[u] & set));
            if maximal {
                out.push(VertexSet(set));
            }
            return;
        }
        let nb = rows[v] & set;
        let addable = !spans_edge(rows, nb);
        if addable {
            go(rows, n, v + 1, set | 1u64 << v, out);
        }
        let later = !((2u64 << v) - 1) & VertexSet::full(n).bits();
        if !addable || spans_edge(rows, rows[v] & (set | later)) {
            go(rows, n, v + 1, set, out);
        }
    }
    go(rows, n, 0, 0, &mut members);
    members.sort_unstable();
    Ok(SetFamily {
        host: h.clone(),
        members,
    })
}

/// Same family by scanning all 2^n vertex subsets.
pub fn maximal_k3_free_family_scan(h: &Graph) -> Result<SetFamily> {
    check_family_order(h)?;
    let rows = h.rows();
    let n = h.order();
    let members = (0u64..1 << n)
        .filter(|&s| Bits(s).all(|v| !spans_edge(rows, rows[v] & s)))
        .filter(|&s| {
            (0..n)
                .filter(|&u| s >> u & 1 == 0)
                .all(|u| spans_edge(rows, rows[u] & s))
        })
        .map(VertexSet)
        .collect();
    Ok(SetFamily {
        host: h.clone(),
        members,
    })
}

/// An s-element choice of family members, by ascending member index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Selection {
    pub members: Vec<usize>,
}

struct SelectionSearch<'a> {
    host: &'a Graph,
    members: &'a [VertexSet],
    /// Member indices passing the single-member conditions.
    eligible: Vec<usize>,
    /// Pairwise compatibility over positions in `eligible`.
    compat: Vec<Vec<u64>>,
    s: usize,
    degree_prune: bool,
    degrees: Vec<usize>,
    alpha_memo: HashMap<u64, usize>,
    chosen: Vec<usize>,
    cover: Vec<usize>,
}

impl SelectionSearch<'_> {
    fn alpha_outside(&mut self, union: u64) -> usize {
        let host = self.host;
        *self
            .alpha_memo
            .entry(union)
            .or_insert_with(|| independence_number_within(host, host.vertices() - VertexSet(union)))
    }

    /// Condition (c) for every N′ that contains the newest member.
    fn newest_satisfies_c(&mut self) -> bool {
        let k = self.chosen.len();
        let newest = self.members[self.eligible[self.chosen[k - 1]]].bits();
        for mask in 0u32..1 << (k - 1) {
            let mut union = newest;
            for (i, &pos) in self.chosen[..k - 1].iter().enumerate() {
                if mask >> i & 1 == 1 {
                    union |= self.members[self.eligible[pos]].bits();
                }
            }
            let size = mask.count_ones() as usize + 1;
            if self.alpha_outside(union) + size > self.s {
                return false;
            }
        }
        true
    }

    /// Condition (e) in per-vertex form, relaxed by the members still to
    /// be chosen.
    fn degrees_can_reach(&self, remaining: usize) -> bool {
        self.degrees
            .iter()
            .zip(&self.cover)
            .all(|(&d, &c)| d + c + remaining >= PRUNE_MIN_DEGREE)
    }

    fn push(&mut self, pos: usize) {
        self.chosen.push(pos);
        for v in self.members[self.eligible[pos]] {
            self.cover[v] += 1;
        }
    }

    fn pop(&mut self) {
        let pos = self.chosen.pop().unwrap();
        for v in self.members[self.eligible[pos]] {
            self.cover[v] -= 1;
        }
    }

    fn dfs<F: FnMut(Selection)>(&mut self, cand: Vec<u64>, emit: &mut F) {
        let depth = self.chosen.len();
        if depth == self.s {
            emit(Selection {
                members: self.chosen.iter().map(|&p| self.eligible[p]).collect(),
            });
            return;
        }
        let need = self.s - depth;
        let mut left: usize = cand.iter().map(|w| w.count_ones() as usize).sum();
        for (wi, &word) in cand.iter().enumerate() {
            for b in Bits(word) {
                if left < need {
                    return;
                }
                left -= 1;
                let pos = wi * 64 + b;
                self.push(pos);
                let ok = self.newest_satisfies_c()
                    && (!self.degree_prune || self.degrees_can_reach(need - 1));
                if ok {
                    let next: Vec<u64> = cand
                        .iter()
                        .zip(&self.compat[pos])
                        .enumerate()
                        .map(|(i, (&a, &c))| {
                            let above = if i < wi {
                                0
                            } else if i == wi {
                                u64::MAX << b << 1
                            } else {
                                u64::MAX
                            };
                            a & c & above
                        })
                        .collect();
                    self.dfs(next, emit);
                }
                self.pop();
            }
        }
    }
}

/// Streams every s-subset of the family satisfying:
/// (a) no member equals a neighborhood N_H(v);
/// (b) every two members intersect in a set spanning an edge;
/// (c) α(H − ⋃N′) ≤ s − |N′| for every N′ ⊆ N;
/// and with degree pruning (d) |M| ≥ 8 and (e) d_H(v) ≥ 8 − s + |N′| for
/// every N′ ⊆ N and every v outside ⋃N′.
pub fn for_each_selection<F: FnMut(Selection)>(
    fam: &SetFamily,
    params: &SearchParams,
    mut emit: F,
) {
    let h = &fam.host;
    let s = params.s;
    if independence_number(h) > s {
        return;
    }
    let neighborhoods: HashSet<u64> = (0..h.order()).map(|v| h.row(v)).collect();
    let eligible: Vec<usize> = fam
        .members
        .iter()
        .enumerate()
        .filter(|(_, m)| !neighborhoods.contains(&m.bits()))
        .filter(|(_, m)| !params.degree_prune || m.len() >= PRUNE_MIN_DEGREE)
        .map(|(i, _)| i)
        .collect();
    let t = eligible.len();
    let words = t.div_ceil(64).max(1);
    let mut compat = vec![vec![0u64; words]; t];
    for i in 0..t {
        for j in i + 1..t {
            let common = fam.members[eligible[i]].bits() & fam.members[eligible[j]].bits();
            if spans_edge(h.rows(), common) {
                compat[i][j / 64] |= 1u64 << (j % 64);
                compat[j][i / 64] |= 1u64 << (i % 64);
            }
        }
    }
    let degrees: Vec<usize> = (0..h.order()).map(|v| h.degree(v)).collect();
    let mut search = SelectionSearch {
        host: h,
        members: &fam.members,
        eligible,
        compat,
        s,
        degree_prune: params.degree_prune,
        degrees,
        alpha_memo: HashMap::new(),
        chosen: Vec::with_capacity(s),
        cover: vec![0; h.order()],
    };
    if params.degree_prune && !search.degrees_can_reach(s) {
        return;
    }
    let mut all = vec![0u64; words];
    for i in 0..t {
        all[i / 64] |= 1u64 << (i % 64);
    }
    search.dfs(all, &mut emit);
}

pub fn admissible_selections(fam: &SetFamily, params: &SearchParams) -> Vec<Selection> {
    let mut out = Vec::new();
    for_each_selection(fam, params, |sel| out.push(sel));
    out
}

/// G(N): H plus independent vertices v_j with N(v_j) = M_{i_j}. Returns
/// `None` when G is Sperner or not maximal K4-free.
pub fn build_candidate(fam: &SetFamily, sel: &Selection) -> Option<Graph> {
    let mut g = fam.host.clone();
    for &m in &sel.members {
        g = g.add_vertex(*fam.members.get(m)?).ok()?;
    }
    if g.is_sperner() {
        return None;
    }
    matches!(g.is_maximal_k4_free(), Ok(true)).then_some(g)
}

/// Per-step counts of one run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counters {
    pub inputs: u64,
    pub generated: u64,
    pub after_dedup: u64,
    pub after_chi: u64,
    pub after_arrow: u64,
}

#[derive(Clone, Debug, Default)]
pub struct ExtensionOutput {
    pub counters: Counters,
    /// Survivors of the χ filter, canonical and sorted.
    pub after_chi: Vec<Graph>,
    /// Final set B, canonical and sorted.
    pub graphs: Vec<Graph>,
}

fn check_orders(graphs: &[Graph], expected: usize) -> Result<()> {
    match graphs.iter().find(|g| g.order() != expected) {
        Some(g) => Err(Error::OrderMismatch {
            expected,
            actual: g.order(),
        }),
        None => Ok(()),
    }
}

fn decode_all(labels: BTreeSet<Vec<u8>>) -> Vec<Graph> {
    labels
        .into_iter()
        .map(|s| graph6::decode(&s).expect("canonical graph6 is well formed"))
        .collect()
}

/// Isomorph-free graphs built from every H ∈ `hosts` by the selection search, with
/// the number of graphs accepted before isomorph rejection.
pub fn extend_hosts(hosts: &[Graph], params: &SearchParams) -> Result<(u64, BTreeSet<Vec<u8>>)> {
    params.validate()?;
    check_orders(hosts, params.host_order())?;
    let result = hosts
        .par_iter()
        .filter(|h| {
            !params.degree_prune || degree_profile(h).min_degree + params.s >= PRUNE_MIN_DEGREE
        })
        .map(|h| -> Result<(u64, BTreeSet<Vec<u8>>)> {
            let fam = maximal_k3_free_family(h)?;
            let mut generated = 0u64;
            let mut labels = BTreeSet::new();
            for_each_selection(&fam, params, |sel| {
                if let Some(g) = build_candidate(&fam, &sel) {
                    generated += 1;
                    labels.insert(canonical_label(&g));
                }
            });
            Ok((generated, labels))
        })
        .try_reduce(
            || (0, BTreeSet::new()),
            |(ga, mut a), (gb, mut b)| {
                if a.len() < b.len() {
                    std::mem::swap(&mut a, &mut b);
                }
                a.append(&mut b);
                Ok((ga + gb, a))
            },
        )?;
    Ok(result)
}

/// Runs the whole extension: build, isomorph rejection, χ ≥ 6 − p, then
/// K_p + G → (3,3). Output order is canonical and independent of the
/// input order and thread count.
pub fn run_algorithm1(hosts: &[Graph], params: &SearchParams) -> Result<ExtensionOutput> {
    let (generated, labels) = extend_hosts(hosts, params)?;
    let mut counters = Counters {
        inputs: hosts.len() as u64,
        generated,
        after_dedup: labels.len() as u64,
        ..Counters::default()
    };
    let deduped = decode_all(labels);
    let threshold = params.chi_threshold();
    let after_chi: Vec<Graph> = deduped
        .into_par_iter()
        .filter(|g| chromatic_at_least(g, threshold))
        .collect();
    counters.after_chi = after_chi.len() as u64;
    let graphs: Vec<Graph> = if params.arrow_filter {
        after_chi
            .par_iter()
            .map(|g| arrows_edge_33_joined(params.p, g).map(|ok| ok.then(|| g.clone())))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect()
    } else {
        after_chi.clone()
    };
    counters.after_arrow = graphs.len() as u64;
    Ok(ExtensionOutput {
        counters,
        after_chi,
        graphs,
    })
}

/// Sperner members of L_max(n; p; s): every vertex duplication of the
/// given maximal K4-free graphs on n − 1 vertices, kept when α = s, still
/// maximal K4-free, χ ≥ 6 − p and (optionally) arrowing. Canonical, sorted.
pub fn sperner_branch(prev: &[Graph], params: &SearchParams) -> Result<Vec<Graph>> {
    params.validate()?;
    check_orders(prev, params.n - 1)?;
    let candidates: Vec<Graph> = prev
        .iter()
        .flat_map(|h| (0..h.order()).map(move |v| h.duplicate_vertex(v)))
        .collect::<Result<_>>()?;
    let threshold = params.chi_threshold();
    let kept: Vec<Graph> = candidates
        .into_par_iter()
        .filter(|g| independence_number(g) == params.s)
        .filter(|g| matches!(g.is_maximal_k4_free(), Ok(true)))
        .filter(|g| chromatic_at_least(g, threshold))
        .map(|g| -> Result<Option<Graph>> {
            if params.arrow_filter && !arrows_edge_33_joined(params.p, &g)? {
                return Ok(None);
            }
            Ok(Some(g))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(crate::canon::dedup_stream(kept))
}

/// All (+K3) graphs reachable from `maximal` by deleting edges one at a
/// time while staying in L(n; p) with α ≤ `alpha_max`. Canonical, sorted.
///
/// Adding an edge preserves (+K3), ω < 4 below a K4-free graph, α ≤ k
/// and arrowing, so every such graph lies on a chain of qualifying graphs
/// below some maximal K4-free supergraph.
pub fn plus_k3_subgraphs(maximal: &[Graph], p: usize, alpha_max: usize) -> Result<Vec<Graph>> {
    edge_removal_closure(maximal, p, |g| {
        g.is_plus_k3() && independence_number(g) <= alpha_max
    })
}

/// Every graph reachable from `maximal` by deleting edges one at a time
/// while `keep` holds and K_p + G → (3,3). Each level is re-tested for
/// arrowing. Canonical, sorted.
pub fn edge_removal_closure<F>(maximal: &[Graph], p: usize, keep: F) -> Result<Vec<Graph>>
where
    F: Fn(&Graph) -> bool + Sync,
{
    let qualifies = |g: &Graph| -> Result<bool> { Ok(keep(g) && arrows_edge_33_joined(p, g)?) };

    let mut accepted: BTreeSet<Vec<u8>> = BTreeSet::new();
    let mut rejected: HashSet<Vec<u8>> = HashSet::new();

    let mut seeds: Vec<(Vec<u8>, Graph)> = maximal
        .par_iter()
        .map(|g| (canonical_label(g), g.clone()))
        .collect();
    seeds.sort_by(|a, b| a.0.cmp(&b.0));
    seeds.dedup_by(|a, b| a.0 == b.0);

    let mut frontier = Vec::new();
    for (label, g) in seeds {
        if qualifies(&g)? {
            accepted.insert(label);
            frontier.push(g);
        } else {
            rejected.insert(label);
        }
    }

    while !frontier.is_empty() {
        let children: BTreeSet<Vec<u8>> = frontier
            .par_iter()
            .flat_map_iter(|g| {
                g.edges().map(move |e| {
                    let mut child = g.clone();
                    child.remove_edge(e.u, e.v).expect("edge exists");
                    canonical_label(&child)
                })
            })
            .filter(|label| !accepted.contains(label) && !rejected.contains(label))
            .collect();
        let tested: Vec<(Vec<u8>, Graph, bool)> = children
            .into_par_iter()
            .map(|label| {
                let g = graph6::decode(&label).expect("canonical graph6 is well formed");
                let ok = qualifies(&g)?;
                Ok((label, g, ok))
            })
            .collect::<Result<_>>()?;
        frontier = Vec::new();
        for (label, g, ok) in tested {
            if ok {
                accepted.insert(label);
                frontier.push(g);
            } else {
                rejected.insert(label);
            }
        }
    }
    Ok(decode_all(accepted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrowing::arrows_edge_33;
    use crate::invariants::clique_number;
    use rand::{Rng, SeedableRng};

    fn random_graph(n: usize, density: f64, rng: &mut impl Rng) -> Graph {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(density) {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
        g
    }

    #[test]
    fn family_examples() {
        let fam = maximal_k3_free_family(&Graph::complete(3)).unwrap();
        assert_eq!(
            fam.members,
            vec![VertexSet(0b011), VertexSet(0b101), VertexSet(0b110)]
        );
        assert_eq!(
            maximal_k3_free_family(&Graph::complete(4)).unwrap().len(),
            6
        );
        let fam = maximal_k3_free_family(&Graph::cycle(5)).unwrap();
        assert_eq!(fam.members, vec![VertexSet::full(5)]);
        assert!(maximal_k3_free_family(&Graph::empty(21)).is_err());
    }

    #[test]
    fn family_search_matches_subset_scan() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(1..=11);
            let g = random_graph(n, rng.gen(), &mut rng);
            assert_eq!(
                maximal_k3_free_family(&g).unwrap(),
                maximal_k3_free_family_scan(&g).unwrap(),
                "{g:?}"
            );
        }
    }

    #[test]
    fn selection_examples() {
        // α(C5) = 2 exceeds s = 1, so nothing is admissible.
        let params = SearchParams::new(6, 3, 1).unwrap();
        let fam = maximal_k3_free_family(&Graph::cycle(5)).unwrap();
        assert!(admissible_selections(&fam, &params).is_empty());

        let params = SearchParams::new(6, 0, 2).unwrap();
        let fam = maximal_k3_free_family(&Graph::complete(4)).unwrap();
        assert!(admissible_selections(&fam, &params).is_empty());
    }

    /// W5 minus two non-adjacent rim vertices: hub 0 joined to {1} ∪ {2,3}.
    fn w5_host() -> Graph {
        Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn wheel_is_rebuilt_from_its_host() {
        let params = SearchParams::new(6, 3, 2).unwrap();
        let fam = maximal_k3_free_family(&w5_host()).unwrap();
        // {0,1,2}, {0,1,3}, {1,2,3}.
        assert_eq!(fam.len(), 3);
        let sels = admissible_selections(&fam, &params);
        let w5 = Graph::cycle(5).join_complete(1).unwrap();
        let built: Vec<Graph> = sels
            .iter()
            .filter_map(|s| build_candidate(&fam, s))
            .collect();
        assert!(built.iter().any(|g| crate::canon::are_isomorphic(g, &w5)));

        let out = run_algorithm1(&[w5_host()], &params).unwrap();
        assert!(out
            .graphs
            .iter()
            .any(|g| crate::canon::are_isomorphic(g, &w5)));
        assert!(arrows_edge_33(&w5.join_complete(3).unwrap()));
        assert!(!arrows_edge_33(&w5.join_complete(1).unwrap()));
        let out = run_algorithm1(&[w5_host()], &SearchParams::new(6, 1, 2).unwrap()).unwrap();
        assert!(out.graphs.is_empty());

        // Every member has at most 3 < 8 vertices.
        let pruned = params.with_degree_prune(true);
        assert!(admissible_selections(&fam, &pruned).is_empty());
    }

    #[test]
    fn repeated_member_is_sperner() {
        let fam = maximal_k3_free_family(&Graph::cycle(5)).unwrap();
        let sel = Selection {
            members: vec![0, 0],
        };
        assert_eq!(build_candidate(&fam, &sel), None);
    }

    #[test]
    fn accepted_candidates_satisfy_contract() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        let mut seen = 0;
        for _ in 0..300 {
            let n = rng.gen_range(4..=7);
            let h = random_graph(n, rng.gen_range(0.3..0.8), &mut rng);
            if clique_number(&h) >= 4 || !h.is_plus_k3() {
                continue;
            }
            let s = rng.gen_range(1..=3);
            let params = SearchParams::new(n + s, 0, s).unwrap();
            let fam = maximal_k3_free_family(&h).unwrap();
            for sel in admissible_selections(&fam, &params) {
                if let Some(g) = build_candidate(&fam, &sel) {
                    seen += 1;
                    assert_eq!(independence_number(&g), s);
                    assert_eq!(clique_number(&g), 3);
                    assert!(!g.is_sperner());
                    assert!(g.non_edges().all(|e| {
                        let mut g2 = g.clone();
                        g2.add_edge(e.u, e.v).unwrap();
                        clique_number(&g2) == 4
                    }));
                    let tail: VertexSet = (n..n + s).collect();
                    assert_eq!(g.remove_vertices(tail).unwrap(), h);
                }
            }
        }
        assert!(seen > 0);
    }

    /// (e) quantified over every N′ ⊆ N.
    fn condition_e_quantified(h: &Graph, chosen: &[VertexSet]) -> bool {
        let s = chosen.len();
        (0u32..1 << s).all(|mask| {
            let union: VertexSet = chosen
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold(VertexSet::EMPTY, |a, (_, m)| a | *m);
            let size = mask.count_ones() as usize;
            (h.vertices() - union)
                .iter()
                .all(|v| h.degree(v) + s >= PRUNE_MIN_DEGREE + size)
        })
    }

    fn condition_e_per_vertex(h: &Graph, chosen: &[VertexSet]) -> bool {
        (0..h.order()).all(|v| {
            h.degree(v) + chosen.iter().filter(|m| m.contains(v)).count() >= PRUNE_MIN_DEGREE
        })
    }

    #[test]
    fn condition_e_forms_agree() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(19);
        for _ in 0..2000 {
            let n = rng.gen_range(6..=14);
            let h = random_graph(n, rng.gen_range(0.3..0.9), &mut rng);
            let s = rng.gen_range(1..=5);
            let chosen: Vec<VertexSet> = (0..s)
                .map(|_| VertexSet(rng.gen::<u64>() & VertexSet::full(n).bits()))
                .collect();
            assert_eq!(
                condition_e_quantified(&h, &chosen),
                condition_e_per_vertex(&h, &chosen)
            );
        }
    }

    #[test]
    fn degree_prune_keeps_exactly_high_min_degree() {
        // Hosts: random K4-free (+K3) graphs on 9 vertices, built to 12.
        let mut rng = rand::rngs::StdRng::seed_from_u64(23);
        let mut hosts = Vec::new();
        while hosts.len() < 40 {
            let h = random_graph(9, rng.gen_range(0.5..0.8), &mut rng);
            if clique_number(&h) < 4 && h.is_plus_k3() {
                hosts.push(h);
            }
        }
        let s = 3;
        let base = SearchParams::new(12, 0, s).unwrap();
        let (_, plain) = extend_hosts(&hosts, &base).unwrap();
        let (_, pruned) = extend_hosts(&hosts, &base.with_degree_prune(true)).unwrap();
        let expected: BTreeSet<Vec<u8>> = plain
            .into_iter()
            .filter(|l| degree_profile(&graph6::decode(l).unwrap()).min_degree >= PRUNE_MIN_DEGREE)
            .collect();
        assert_eq!(pruned, expected);
    }

    #[test]
    fn sperner_branch_examples() {
        assert!(sperner_branch(&[], &SearchParams::new(4, 0, 2).unwrap())
            .unwrap()
            .is_empty());
        let out =
            sperner_branch(&[Graph::complete(3)], &SearchParams::new(4, 0, 2).unwrap()).unwrap();
        assert!(out.is_empty());
        assert!(
            sperner_branch(&[Graph::complete(3)], &SearchParams::new(5, 0, 2).unwrap()).is_err()
        );
    }

    #[test]
    fn plus_k3_closure_examples() {
        let c5 = Graph::cycle(5);
        let out = plus_k3_subgraphs(std::slice::from_ref(&c5), 3, 2).unwrap();
        assert_eq!(out.len(), 1);
        assert!(crate::canon::are_isomorphic(&out[0], &c5));
        // K1 + C5 does not arrow, so C5 is not in L(5; 1).
        assert!(plus_k3_subgraphs(&[c5], 1, 2).unwrap().is_empty());

        let again = plus_k3_subgraphs(&out, 3, 2).unwrap();
        assert_eq!(again, out);
    }

    #[test]
    fn unrestricted_closure_of_graham_graph() {
        // K3 + C5 minus any edge no longer arrows (it is edge-critical).
        let graham = Graph::cycle(5).join_complete(3).unwrap();
        let out = edge_removal_closure(std::slice::from_ref(&graham), 0, |_| true).unwrap();
        assert_eq!(out.len(), 1);
        assert!(crate::canon::are_isomorphic(&out[0], &graham));
    }

    #[test]
    fn run_rejects_wrong_host_order() {
        let params = SearchParams::new(8, 0, 2).unwrap();
        assert!(matches!(
            run_algorithm1(&[Graph::cycle(5)], &params),
            Err(Error::OrderMismatch {
                expected: 6,
                actual: 5
            })
        ));
        let empty = run_algorithm1(&[], &params).unwrap();
        assert_eq!(empty.counters, Counters::default());
    }

    #[test]
    fn params_validation() {
        assert!(SearchParams::new(5, 0, 0).is_err());
        assert!(SearchParams::new(3, 0, 3).is_err());
        assert!(SearchParams::new(60, 3, 2).is_err());
        assert_eq!(SearchParams::new(19, 0, 4).unwrap().chi_threshold(), 6);
        assert_eq!(SearchParams::new(15, 7, 4).unwrap().chi_threshold(), 0);
    }
}
