//! Bitset graphs on at most 62 vertices and the structural operators used
//! throughout the search: joins, vertex removal, vertex addition and
//! duplication, and the Sperner / maximal K4-free / (+K3) predicates.
//!
//! Row `v` of the adjacency is the neighborhood of `v` as a `u64` bitmask.
//! Vertices are dense and 0-based; every operator that removes vertices
//! reindexes the survivors in increasing original order.

use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};

use crate::error::{Error, Result};

/// Largest supported order. Keeps graph6 headers to one byte and each
/// adjacency row in a single machine word.
pub const MAX_VERTICES: usize = 62;

/// A set of vertices of some host graph, stored as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexSet(pub u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    /// All vertices `0..n`.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(1u64 << v)
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        v < 64 && self.0 >> v & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.0 |= 1u64 << v;
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1u64 << v);
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Lowest vertex in the set.
    #[inline]
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> Bits {
        Bits(self.0)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = Bits;
    fn into_iter(self) -> Bits {
        Bits(self.0)
    }
}

impl BitAnd for VertexSet {
    type Output = VertexSet;
    fn bitand(self, rhs: Self) -> Self {
        VertexSet(self.0 & rhs.0)
    }
}

impl BitOr for VertexSet {
    type Output = VertexSet;
    fn bitor(self, rhs: Self) -> Self {
        VertexSet(self.0 | rhs.0)
    }
}

impl Sub for VertexSet {
    type Output = VertexSet;
    fn sub(self, rhs: Self) -> Self {
        VertexSet(self.0 & !rhs.0)
    }
}

impl Not for VertexSet {
    type Output = VertexSet;
    fn not(self) -> Self {
        VertexSet(!self.0)
    }
}

/// Iterator over the set bits of a word, lowest first.
#[derive(Clone, Debug)]
pub struct Bits(pub u64);

impl Iterator for Bits {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for Bits {}

/// An undirected edge, normalized so that `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
}

impl Edge {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == b {
            return Err(Error::SelfLoop(a));
        }
        Ok(Edge {
            u: a.min(b),
            v: a.max(b),
        })
    }
}

/// A simple undirected graph with bitset adjacency rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<u64>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<(usize, usize)> = self.edges().map(|e| (e.u, e.v)).collect();
        f.debug_struct("Graph")
            .field("n", &self.order())
            .field("edges", &edges)
            .finish()
    }
}

fn check_order(n: usize) -> Result<()> {
    if n == 0 || n > MAX_VERTICES {
        Err(Error::VertexCount(n))
    } else {
        Ok(())
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Result<Self> {
        check_order(n)?;
        Ok(Graph { adj: vec![0; n] })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Builds a graph from raw neighborhood rows, validating symmetry,
    /// irreflexivity and the vertex range.
    pub fn from_rows(rows: Vec<u64>) -> Result<Self> {
        let n = rows.len();
        check_order(n)?;
        let full = VertexSet::full(n).bits();
        for (v, &row) in rows.iter().enumerate() {
            if row & !full != 0 {
                let vertex = (row & !full).trailing_zeros() as usize;
                return Err(Error::VertexOutOfRange { vertex, n });
            }
            if row >> v & 1 == 1 {
                return Err(Error::SelfLoop(v));
            }
            for u in Bits(row) {
                if rows[u] >> v & 1 == 0 {
                    return Err(Error::Asymmetric(v, u));
                }
            }
        }
        Ok(Graph { adj: rows })
    }

    /// Rows already known to be valid (internal constructors).
    pub(crate) fn from_rows_unchecked(rows: Vec<u64>) -> Self {
        debug_assert!(Graph::from_rows(rows.clone()).is_ok());
        Graph { adj: rows }
    }

    /// Complete graph K_n. Panics unless `1 <= n <= 62`.
    pub fn complete(n: usize) -> Self {
        check_order(n).expect("order out of range");
        let full = VertexSet::full(n).bits();
        Graph {
            adj: (0..n).map(|v| full & !(1u64 << v)).collect(),
        }
    }

    /// Edgeless graph on `n` vertices. Panics unless `1 <= n <= 62`.
    pub fn empty(n: usize) -> Self {
        Graph::new(n).expect("order out of range")
    }

    /// Cycle C_n. Panics unless `3 <= n <= 62`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).expect("order out of range")
    }

    /// Path P_n on `n` vertices. Panics unless `1 <= n <= 62`.
    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).expect("order out of range")
    }

    /// The Petersen graph: outer 5-cycle 0..5, inner pentagram 5..10.
    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::from_edges(10, &edges).unwrap()
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn rows(&self) -> &[u64] {
        &self.adj
    }

    #[inline]
    pub fn row(&self, v: usize) -> u64 {
        self.adj[v]
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v])
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.order() && self.adj[u] >> v & 1 == 1
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.order())
    }

    pub fn edge_count(&self) -> usize {
        self.adj
            .iter()
            .map(|r| r.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    /// Edges in lexicographic `(u, v)` order with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, &row)| Bits(row & !((2u64 << u) - 1)).map(move |v| Edge { u, v }))
    }

    /// Non-edges in lexicographic order.
    pub fn non_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        let full = self.vertices().bits();
        self.adj.iter().enumerate().flat_map(move |(u, &row)| {
            Bits(!row & full & !((2u64 << u) - 1)).map(move |v| Edge { u, v })
        })
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.order() {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.order(),
            })
        } else {
            Ok(())
        }
    }

    fn check_set(&self, s: VertexSet) -> Result<()> {
        let outside = s - self.vertices();
        match outside.first() {
            Some(vertex) => Err(Error::VertexOutOfRange {
                vertex,
                n: self.order(),
            }),
            None => Ok(()),
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        self.adj[u] |= 1u64 << v;
        self.adj[v] |= 1u64 << u;
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        self.adj[u] &= !(1u64 << v);
        self.adj[v] &= !(1u64 << u);
        Ok(())
    }

    pub fn complement(&self) -> Graph {
        let full = self.vertices().bits();
        Graph {
            adj: self
                .adj
                .iter()
                .enumerate()
                .map(|(v, &row)| !row & full & !(1u64 << v))
                .collect(),
        }
    }

    /// Relabels vertex `v` as `perm[v]`. `perm` must be a permutation of `0..n`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.order(), "permutation length");
        let mut adj = vec![0u64; self.order()];
        for (v, &row) in self.adj.iter().enumerate() {
            let mut image = 0u64;
            for u in Bits(row) {
                image |= 1u64 << perm[u];
            }
            adj[perm[v]] = image;
        }
        Graph { adj }
    }

    /// Induced subgraph on `keep`, reindexed in increasing original order.
    pub fn induced(&self, keep: VertexSet) -> Result<Graph> {
        self.check_set(keep)?;
        if keep.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let order: Vec<usize> = keep.iter().collect();
        let adj = order
            .iter()
            .map(|&v| {
                let row = self.adj[v] & keep.bits();
                order
                    .iter()
                    .enumerate()
                    .filter(|&(_, &u)| row >> u & 1 == 1)
                    .fold(0u64, |acc, (i, _)| acc | 1u64 << i)
            })
            .collect();
        Ok(Graph { adj })
    }

    /// G − A: deletes the vertices in `a`.
    pub fn remove_vertices(&self, a: VertexSet) -> Result<Graph> {
        self.check_set(a)?;
        self.induced(self.vertices() - a)
    }

    /// Adds vertex `n` adjacent exactly to `nbrs`.
    pub fn add_vertex(&self, nbrs: VertexSet) -> Result<Graph> {
        self.check_set(nbrs)?;
        let n = self.order();
        check_order(n + 1)?;
        let mut adj = self.adj.clone();
        for v in nbrs {
            adj[v] |= 1u64 << n;
        }
        adj.push(nbrs.bits());
        Ok(Graph { adj })
    }

    /// Adds a twin `v'` of `v` with N(v') = N(v); `v` and `v'` stay non-adjacent.
    pub fn duplicate_vertex(&self, v: usize) -> Result<Graph> {
        self.check_vertex(v)?;
        self.add_vertex(self.neighbors(v))
    }

    /// The join G₁ + G₂: disjoint union plus every cross edge. Vertices of
    /// `other` are shifted by the order of `self`.
    pub fn join(&self, other: &Graph) -> Result<Graph> {
        let n1 = self.order();
        let n2 = other.order();
        if n1 + n2 > MAX_VERTICES {
            return Err(Error::TooLarge {
                what: "join order",
                limit: MAX_VERTICES,
                actual: n1 + n2,
            });
        }
        let left = VertexSet::full(n1).bits();
        let right = VertexSet::full(n2).bits() << n1;
        let mut adj = Vec::with_capacity(n1 + n2);
        adj.extend(self.adj.iter().map(|&r| r | right));
        adj.extend(other.adj.iter().map(|&r| (r << n1) | left));
        Ok(Graph { adj })
    }

    /// K_p + G, with the clique on the first `p` vertices. `p = 0` returns a copy.
    pub fn join_complete(&self, p: usize) -> Result<Graph> {
        if p == 0 {
            return Ok(self.clone());
        }
        if p + self.order() > MAX_VERTICES {
            return Err(Error::TooLarge {
                what: "join order",
                limit: MAX_VERTICES,
                actual: p + self.order(),
            });
        }
        Graph::complete(p).join(self)
    }

    /// True iff some ordered pair u ≠ v has N(u) ⊆ N(v).
    pub fn is_sperner(&self) -> bool {
        let n = self.order();
        (0..n).any(|u| (0..n).any(|v| u != v && self.adj[u] & !self.adj[v] == 0))
    }

    /// True iff the graph contains a K4.
    pub fn has_k4(&self) -> bool {
        self.edges().any(|e| {
            let common = self.adj[e.u] & self.adj[e.v];
            Bits(common).any(|w| self.adj[w] & common != 0)
        })
    }

    /// True iff every non-edge has an edge inside its common neighborhood,
    /// i.e. adding any missing edge creates a K4. Errors on graphs that
    /// already contain a K4.
    pub fn is_maximal_k4_free(&self) -> Result<bool> {
        if self.has_k4() {
            return Err(Error::ContainsK4);
        }
        Ok(self.non_edges().all(|e| {
            let common = self.adj[e.u] & self.adj[e.v];
            Bits(common).any(|w| self.adj[w] & common != 0)
        }))
    }

    /// True iff every non-adjacent pair has a common neighbor.
    pub fn is_plus_k3(&self) -> bool {
        self.non_edges().all(|e| self.adj[e.u] & self.adj[e.v] != 0)
    }
}
