//! Exact graph invariants: clique and independence numbers by bitset
//! branch and bound, chromatic number by DSATUR backtracking, degree
//! statistics and triangle enumeration.

use crate::graph::{Bits, Edge, Graph, VertexSet};

/// Descending degree inside `within`, ties by index.
fn search_order(rows: &[u64], within: u64) -> Vec<usize> {
    let mut order: Vec<usize> = Bits(within).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse((rows[v] & within).count_ones()), v));
    order
}

/// Rows relabeled into the search order, so that bit `i` is `order[i]`.
fn relabel(rows: &[u64], order: &[usize]) -> Vec<u64> {
    let mut pos = [usize::MAX; 64];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    order
        .iter()
        .map(|&v| {
            Bits(rows[v])
                .filter(|&u| pos[u] != usize::MAX)
                .fold(0u64, |acc, u| acc | 1u64 << pos[u])
        })
        .collect()
}

struct CliqueSearch<'a> {
    rows: &'a [u64],
    current: u64,
    best: u64,
    best_len: usize,
    stop_at: usize,
}

impl CliqueSearch<'_> {
    fn expand(&mut self, cand: u64, size: usize) {
        // Greedy colour classes give an upper bound for each prefix.
        let mut verts = [0u8; 64];
        let mut bound = [0u8; 64];
        let mut count = 0;
        let mut uncolored = cand;
        let mut color = 0u8;
        while uncolored != 0 {
            color += 1;
            let mut q = uncolored;
            while q != 0 {
                let v = q.trailing_zeros() as usize;
                q &= !(1u64 << v) & !self.rows[v];
                uncolored &= !(1u64 << v);
                verts[count] = v as u8;
                bound[count] = color;
                count += 1;
            }
        }

        let mut remaining = cand;
        for i in (0..count).rev() {
            if size + bound[i] as usize <= self.best_len || self.best_len >= self.stop_at {
                return;
            }
            let v = verts[i] as usize;
            self.current |= 1u64 << v;
            let next = remaining & self.rows[v];
            if next == 0 {
                if size + 1 > self.best_len {
                    self.best = self.current;
                    self.best_len = size + 1;
                }
            } else {
                self.expand(next, size + 1);
            }
            self.current &= !(1u64 << v);
            remaining &= !(1u64 << v);
        }
    }
}

/// Largest clique among `within`, stopping early once `stop_at` is reached.
fn clique_search(rows: &[u64], within: u64, stop_at: usize) -> VertexSet {
    if within == 0 {
        return VertexSet::EMPTY;
    }
    let order = search_order(rows, within);
    let local = relabel(rows, &order);
    let mut search = CliqueSearch {
        rows: &local,
        current: 0,
        best: 0,
        best_len: 0,
        stop_at,
    };
    search.expand(VertexSet::full(order.len()).bits(), 0);
    Bits(search.best).map(|i| order[i]).collect()
}

pub fn max_clique(g: &Graph) -> VertexSet {
    clique_search(g.rows(), g.vertices().bits(), usize::MAX)
}

pub fn max_clique_within(g: &Graph, within: VertexSet) -> VertexSet {
    clique_search(g.rows(), within.bits() & g.vertices().bits(), usize::MAX)
}

/// ω(G).
pub fn clique_number(g: &Graph) -> usize {
    max_clique(g).len()
}

pub fn clique_number_within(g: &Graph, within: VertexSet) -> usize {
    max_clique_within(g, within).len()
}

/// True iff ω(G) ≥ k.
pub fn has_clique(g: &Graph, k: usize) -> bool {
    k == 0 || clique_search(g.rows(), g.vertices().bits(), k).len() >= k
}

fn complement_rows(g: &Graph) -> Vec<u64> {
    g.complement().rows().to_vec()
}

pub fn max_independent_set(g: &Graph) -> VertexSet {
    clique_search(&complement_rows(g), g.vertices().bits(), usize::MAX)
}

/// α(G), computed as ω of the complement.
pub fn independence_number(g: &Graph) -> usize {
    max_independent_set(g).len()
}

/// α of the subgraph induced by `within`; 0 for the empty set.
pub fn independence_number_within(g: &Graph, within: VertexSet) -> usize {
    let within = within.bits() & g.vertices().bits();
    if within == 0 {
        return 0;
    }
    clique_search(&complement_rows(g), within, usize::MAX).len()
}

struct Dsatur<'a> {
    rows: &'a [u64],
    k: usize,
    classes: Vec<u64>,
    color: Vec<usize>,
}

impl Dsatur<'_> {
    /// Uncoloured vertex of maximum saturation, then maximum uncoloured
    /// degree, then lowest index.
    fn pick(&self, uncolored: u64) -> usize {
        let mut best = usize::MAX;
        let mut best_key = (0usize, 0u32);
        for v in Bits(uncolored) {
            let sat = self
                .classes
                .iter()
                .filter(|&&c| c & self.rows[v] != 0)
                .count();
            let key = (sat, (self.rows[v] & uncolored).count_ones());
            if best == usize::MAX || key > best_key {
                best = v;
                best_key = key;
            }
        }
        best
    }

    fn solve(&mut self, uncolored: u64, used: usize) -> bool {
        if uncolored == 0 {
            return true;
        }
        let v = self.pick(uncolored);
        let limit = (used + 1).min(self.k);
        for c in 0..limit {
            if self.classes[c] & self.rows[v] != 0 {
                continue;
            }
            self.classes[c] |= 1u64 << v;
            self.color[v] = c;
            if self.solve(uncolored & !(1u64 << v), used.max(c + 1)) {
                return true;
            }
            self.classes[c] &= !(1u64 << v);
        }
        false
    }
}

/// A proper colouring with at most `k` colours (values `0..k`), if one exists.
pub fn k_coloring(g: &Graph, k: usize) -> Option<Vec<usize>> {
    let n = g.order();
    if k == 0 {
        return None;
    }
    let mut search = Dsatur {
        rows: g.rows(),
        k,
        classes: vec![0; k],
        color: vec![0; n],
    };
    search.solve(g.vertices().bits(), 0).then_some(search.color)
}

pub fn is_k_colorable(g: &Graph, k: usize) -> bool {
    k_coloring(g, k).is_some()
}

/// Colours used by DSATUR without backtracking.
pub fn greedy_color_count(g: &Graph) -> usize {
    let n = g.order();
    let mut search = Dsatur {
        rows: g.rows(),
        k: n,
        classes: vec![0; n],
        color: vec![0; n],
    };
    let mut uncolored = g.vertices().bits();
    let mut used = 0;
    while uncolored != 0 {
        let v = search.pick(uncolored);
        let c = (0..n).find(|&c| search.classes[c] & g.row(v) == 0).unwrap();
        search.classes[c] |= 1u64 << v;
        used = used.max(c + 1);
        uncolored &= !(1u64 << v);
    }
    used
}

/// χ(G): tries k = ω, ω+1, ... below the greedy bound.
pub fn chromatic_number(g: &Graph) -> usize {
    let upper = greedy_color_count(g);
    let lower = clique_number(g).max(1);
    (lower..upper)
        .find(|&k| is_k_colorable(g, k))
        .unwrap_or(upper)
}

/// True iff χ(G) ≥ t. Agrees with `chromatic_number(g) >= t`.
pub fn chromatic_at_least(g: &Graph, t: usize) -> bool {
    if t <= 1 {
        return true;
    }
    if has_clique(g, t) {
        return true;
    }
    !is_k_colorable(g, t - 1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeProfile {
    pub min_degree: usize,
    pub max_degree: usize,
    pub edge_count: usize,
    /// Degree sequence in non-increasing order.
    pub degrees: Vec<usize>,
}

pub fn degree_profile(g: &Graph) -> DegreeProfile {
    let mut degrees: Vec<usize> = (0..g.order()).map(|v| g.degree(v)).collect();
    degrees.sort_unstable_by(|a, b| b.cmp(a));
    DegreeProfile {
        min_degree: *degrees.last().unwrap(),
        max_degree: degrees[0],
        edge_count: degrees.iter().sum::<usize>() / 2,
        degrees,
    }
}

/// All triangles of a graph plus, for each edge, the triangles through it.
#[derive(Clone, Debug)]
pub struct TriangleIndex {
    /// Vertex triples `a < b < c`, lexicographic.
    pub triangles: Vec<[usize; 3]>,
    /// Edges in lexicographic order.
    pub edges: Vec<Edge>,
    /// `edge_triangles[i]` lists indices into `triangles` containing `edges[i]`.
    pub edge_triangles: Vec<Vec<usize>>,
}

impl TriangleIndex {
    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let e = Edge::new(u, v).ok()?;
        self.edges.binary_search(&e).ok()
    }
}

pub fn triangle_index(g: &Graph) -> TriangleIndex {
    let edges: Vec<Edge> = g.edges().collect();
    let mut triangles = Vec::new();
    for e in &edges {
        let common = g.row(e.u) & g.row(e.v) & !((2u64 << e.v) - 1);
        for w in Bits(common) {
            triangles.push([e.u, e.v, w]);
        }
    }
    let mut edge_triangles = vec![Vec::new(); edges.len()];
    for (t, &[a, b, c]) in triangles.iter().enumerate() {
        for (x, y) in [(a, b), (a, c), (b, c)] {
            let i = edges.binary_search(&Edge { u: x, v: y }).unwrap();
            edge_triangles[i].push(t);
        }
    }
    TriangleIndex {
        triangles,
        edges,
        edge_triangles,
    }
}

/// True iff the subgraph induced by `s` has no triangle.
pub fn is_k3_free_subset(g: &Graph, s: VertexSet) -> bool {
    let s = s.bits();
    Bits(s).all(|v| {
        let nb = g.row(v) & s;
        Bits(nb).all(|u| g.row(u) & nb == 0)
    })
}
