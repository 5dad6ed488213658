//! Arrowing deciders.
//!
//! * `G → (3,3)` on edges: every red/blue edge colouring has a
//!   monochromatic triangle.
//! * `G → (3,3)` on vertices: every 2-colouring of V(G) has a
//!   monochromatic triangle.
//! * `G → (2,3,3)` on vertices: no partition V₁ ∪ V₂ ∪ V₃ with V₁
//!   independent and V₂, V₃ triangle-free.
//!
//! The deciders are backtracking searches with triangle propagation. The
//! `oracle_*` functions enumerate every colouring and exist to check them.

use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::graph::{Bits, Edge, Graph, VertexSet};
use crate::invariants::triangle_index;

/// Edge colours in lexicographic edge order, each 0 or 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeColoring {
    pub edges: Vec<Edge>,
    pub colors: Vec<u8>,
}

impl EdgeColoring {
    /// True iff no triangle of `g` is monochromatic.
    pub fn is_good(&self, g: &Graph) -> bool {
        if self.edges.len() != g.edge_count() || !self.edges.iter().copied().eq(g.edges()) {
            return false;
        }
        let color = |u: usize, v: usize| {
            let e = Edge::new(u, v).unwrap();
            self.colors[self.edges.binary_search(&e).unwrap()]
        };
        let n = g.order();
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    if g.has_edge(a, b) && g.has_edge(a, c) && g.has_edge(b, c) {
                        let x = color(a, b);
                        if color(a, c) == x && color(b, c) == x {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// `0`/`1` characters in edge order.
    pub fn to_bit_string(&self) -> String {
        self.colors.iter().map(|&c| char::from(b'0' + c)).collect()
    }
}

/// Vertex colours `1..=k`, one per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexColoring {
    pub colors: Vec<u8>,
}

impl VertexColoring {
    pub fn class(&self, color: u8) -> VertexSet {
        self.colors
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c == color)
            .map(|(v, _)| v)
            .collect()
    }

    /// Checks that colour class `i` contains no clique of size `targets[i - 1]`.
    pub fn avoids(&self, g: &Graph, targets: &[usize]) -> bool {
        if self.colors.len() != g.order()
            || self
                .colors
                .iter()
                .any(|&c| c == 0 || c as usize > targets.len())
        {
            return false;
        }
        targets.iter().enumerate().all(|(i, &a)| {
            let class = self.class(i as u8 + 1);
            !naive_has_clique(g, class, a)
        })
    }

    pub fn to_digit_string(&self) -> String {
        self.colors.iter().map(|&c| char::from(b'0' + c)).collect()
    }
}

/// Exhaustive clique test inside `within`, used only for verification.
fn naive_has_clique(g: &Graph, within: VertexSet, size: usize) -> bool {
    fn grow(g: &Graph, cand: u64, need: usize) -> bool {
        if need == 0 {
            return true;
        }
        Bits(cand).any(|v| grow(g, cand & g.row(v) & !((2u64 << v) - 1), need - 1))
    }
    grow(g, within.bits(), size)
}

struct EdgeSearch<'a> {
    adj: &'a [u64],
    /// `color[c][v]`: neighbors of `v` joined by an edge of colour `c`.
    color: [Vec<u64>; 2],
    trail: Vec<(usize, usize, usize)>,
    order: Vec<(usize, usize)>,
}

impl EdgeSearch<'_> {
    #[inline]
    fn unassigned(&self, x: usize) -> u64 {
        self.adj[x] & !self.color[0][x] & !self.color[1][x]
    }

    #[inline]
    fn is_unassigned(&self, u: usize, v: usize) -> bool {
        self.unassigned(u) >> v & 1 == 1
    }

    fn set(&mut self, u: usize, v: usize, c: usize) {
        self.color[c][u] |= 1u64 << v;
        self.color[c][v] |= 1u64 << u;
        self.trail.push((u, v, c));
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (u, v, c) = self.trail.pop().unwrap();
            self.color[c][u] &= !(1u64 << v);
            self.color[c][v] &= !(1u64 << u);
        }
    }

    /// Colours `uv` with `c` and propagates: when two edges of a triangle
    /// share a colour, the third is forced to the other. Returns false on a
    /// monochromatic triangle.
    fn assign(&mut self, u: usize, v: usize, c: usize) -> bool {
        let mut queue = vec![(u, v, c)];
        while let Some((u, v, c)) = queue.pop() {
            if self.color[c][u] >> v & 1 == 1 {
                continue;
            }
            if self.color[1 - c][u] >> v & 1 == 1 {
                return false;
            }
            if self.color[c][u] & self.color[c][v] != 0 {
                return false;
            }
            self.set(u, v, c);
            let common = self.adj[u] & self.adj[v];
            for w in Bits(common & self.color[c][u] & self.unassigned(v)) {
                queue.push((v, w, 1 - c));
            }
            for w in Bits(common & self.color[c][v] & self.unassigned(u)) {
                queue.push((u, w, 1 - c));
            }
        }
        true
    }

    fn solve(&mut self, from: usize) -> bool {
        let Some(pos) = (from..self.order.len()).find(|&i| {
            let (u, v) = self.order[i];
            self.is_unassigned(u, v)
        }) else {
            return true;
        };
        let (u, v) = self.order[pos];
        // The first branching edge only takes colour 0: swapping colours
        // maps any good colouring to one with that edge coloured 0.
        let colors: &[usize] = if self.trail.is_empty() { &[0] } else { &[0, 1] };
        for &c in colors {
            let mark = self.trail.len();
            if self.assign(u, v, c) && self.solve(pos + 1) {
                return true;
            }
            self.undo_to(mark);
        }
        false
    }
}

/// Decides `g → (3,3)` on edges. `Ok(())` means every colouring has a
/// monochromatic triangle; `Err(coloring)` is a good colouring.
pub fn edge_33_search(g: &Graph) -> std::result::Result<(), EdgeColoring> {
    let n = g.order();
    let idx = triangle_index(g);
    let mut order: Vec<(usize, usize, usize)> = idx
        .edges
        .iter()
        .zip(&idx.edge_triangles)
        .filter(|(_, t)| !t.is_empty())
        .map(|(e, t)| (t.len(), e.u, e.v))
        .collect();
    order.sort_by_key(|&(t, u, v)| (std::cmp::Reverse(t), u, v));

    let mut search = EdgeSearch {
        adj: g.rows(),
        color: [vec![0; n], vec![0; n]],
        trail: Vec::new(),
        order: order.into_iter().map(|(_, u, v)| (u, v)).collect(),
    };
    if !search.solve(0) {
        return Ok(());
    }
    let colors = idx
        .edges
        .iter()
        .map(|e| (search.color[1][e.u] >> e.v & 1) as u8)
        .collect();
    Err(EdgeColoring {
        edges: idx.edges,
        colors,
    })
}

pub fn arrows_edge_33(g: &Graph) -> bool {
    edge_33_search(g).is_ok()
}

/// `K_p + g → (3,3)` on edges, deciding on the materialized join.
pub fn arrows_edge_33_joined(p: usize, g: &Graph) -> Result<bool> {
    Ok(arrows_edge_33(&g.join_complete(p)?))
}

/// Two-colouring search on a vertex subset; each colour class must stay
/// triangle-free.
struct VertexSearch<'a> {
    adj: &'a [u64],
    order: Vec<usize>,
    class: [u64; 2],
}

impl VertexSearch<'_> {
    /// Vertices of `free` that would close a triangle if added to class `c`.
    #[inline]
    fn blocked(&self, c: usize, free: u64) -> u64 {
        let mut out = 0;
        for w in Bits(free) {
            let nb = self.adj[w] & self.class[c];
            if Bits(nb).any(|u| self.adj[u] & nb != 0) {
                out |= 1u64 << w;
            }
        }
        out
    }

    fn solve(&mut self, free: u64, depth: usize) -> bool {
        if free == 0 {
            return true;
        }
        // Propagate forced vertices before branching.
        let mut free = free;
        let saved = self.class;
        loop {
            let b0 = self.blocked(0, free);
            let b1 = self.blocked(1, free);
            if b0 & b1 != 0 {
                self.class = saved;
                return false;
            }
            if b0 | b1 == 0 {
                break;
            }
            self.class[1] |= b0;
            self.class[0] |= b1;
            free &= !(b0 | b1);
            if self.class_has_triangle(0) || self.class_has_triangle(1) {
                self.class = saved;
                return false;
            }
        }
        if free == 0 {
            return true;
        }
        let v = *self.order.iter().find(|&&v| free >> v & 1 == 1).unwrap();
        let colors: &[usize] = if depth == 0 && saved == [0, 0] {
            &[0]
        } else {
            &[0, 1]
        };
        for &c in colors {
            let before = self.class;
            self.class[c] |= 1u64 << v;
            if self.solve(free & !(1u64 << v), depth + 1) {
                return true;
            }
            self.class = before;
        }
        self.class = saved;
        false
    }

    fn class_has_triangle(&self, c: usize) -> bool {
        let s = self.class[c];
        Bits(s).any(|v| {
            let nb = self.adj[v] & s;
            Bits(nb).any(|u| self.adj[u] & nb != 0)
        })
    }
}

/// A 2-colouring of `within` with both classes triangle-free, if any.
fn vertex_33_split(g: &Graph, within: VertexSet) -> Option<[u64; 2]> {
    let within = within.bits();
    let mut order: Vec<usize> = Bits(within).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse((g.row(v) & within).count_ones()), v));
    let mut search = VertexSearch {
        adj: g.rows(),
        order,
        class: [0, 0],
    };
    search.solve(within, 0).then_some(search.class)
}

/// Decides `g → (3,3)` on vertices; `Err` carries a good 2-colouring.
pub fn vertex_33_search(g: &Graph) -> std::result::Result<(), VertexColoring> {
    match vertex_33_split(g, g.vertices()) {
        None => Ok(()),
        Some(classes) => Err(VertexColoring {
            colors: (0..g.order())
                .map(|v| if classes[1] >> v & 1 == 1 { 2 } else { 1 })
                .collect(),
        }),
    }
}

pub fn arrows_vertex_33(g: &Graph) -> bool {
    vertex_33_search(g).is_ok()
}

/// True iff the subgraph induced by `within` arrows (3,3) on vertices.
pub fn arrows_vertex_33_within(g: &Graph, within: VertexSet) -> bool {
    vertex_33_split(g, within).is_none()
}

/// Bron–Kerbosch with Tomita pivoting over the rows of `adj`. Calls `f`
/// with every maximal clique; stops early on `ControlFlow::Break`.
pub fn for_each_maximal_clique<F>(adj: &[u64], mut f: F) -> ControlFlow<()>
where
    F: FnMut(VertexSet) -> ControlFlow<()>,
{
    fn bk<F: FnMut(VertexSet) -> ControlFlow<()>>(
        adj: &[u64],
        r: u64,
        mut p: u64,
        mut x: u64,
        f: &mut F,
    ) -> ControlFlow<()> {
        if p == 0 {
            if x == 0 {
                return f(VertexSet(r));
            }
            return ControlFlow::Continue(());
        }
        let pivot = Bits(p | x)
            .max_by_key(|&u| ((adj[u] & p).count_ones(), std::cmp::Reverse(u)))
            .unwrap();
        for v in Bits(p & !adj[pivot]) {
            bk(adj, r | 1u64 << v, p & adj[v], x & adj[v], f)?;
            p &= !(1u64 << v);
            x |= 1u64 << v;
        }
        ControlFlow::Continue(())
    }
    let all = VertexSet::full(adj.len()).bits();
    bk(adj, 0, all, 0, &mut f)
}

/// Every maximal independent set, as maximal cliques of the complement.
pub fn maximal_independent_sets(g: &Graph) -> Vec<VertexSet> {
    let comp = g.complement();
    let mut out = Vec::new();
    let _ = for_each_maximal_clique(comp.rows(), |s| {
        out.push(s);
        ControlFlow::Continue(())
    });
    out
}

/// Decides `g → (2,3,3)` on vertices; `Err` carries a good 3-colouring
/// (colour 1 independent, colours 2 and 3 triangle-free).
///
/// Only maximal independent sets need to be tried for V₁: enlarging V₁
/// shrinks the part that must split into two triangle-free classes.
pub fn vertex_233_search(g: &Graph) -> std::result::Result<(), VertexColoring> {
    let comp = g.complement();
    let all = g.vertices().bits();
    let mut witness = None;
    let _ = for_each_maximal_clique(comp.rows(), |indep| {
        match vertex_33_split(g, VertexSet(all & !indep.bits())) {
            None => ControlFlow::Continue(()),
            Some(classes) => {
                witness = Some((indep.bits(), classes));
                ControlFlow::Break(())
            }
        }
    });
    match witness {
        None => Ok(()),
        Some((indep, classes)) => Err(VertexColoring {
            colors: (0..g.order())
                .map(|v| {
                    if indep >> v & 1 == 1 {
                        1
                    } else if classes[1] >> v & 1 == 1 {
                        3
                    } else {
                        2
                    }
                })
                .collect(),
        }),
    }
}

pub fn arrows_vertex_233(g: &Graph) -> bool {
    vertex_233_search(g).is_ok()
}

/// Largest edge count accepted by `oracle_edge_33`.
pub const EDGE_ORACLE_MAX_EDGES: usize = 25;
/// Largest order accepted by `oracle_vertex`.
pub const VERTEX_ORACLE_MAX_ORDER: usize = 16;

/// Tries all 2^|E| edge colourings. Exits early on the first good one.
pub fn oracle_edge_33(g: &Graph) -> Result<bool> {
    let edges: Vec<Edge> = g.edges().collect();
    let m = edges.len();
    if m > EDGE_ORACLE_MAX_EDGES {
        return Err(Error::TooLarge {
            what: "edge oracle edge count",
            limit: EDGE_ORACLE_MAX_EDGES,
            actual: m,
        });
    }
    let id = |a: usize, b: usize| edges.iter().position(|e| (e.u, e.v) == (a, b)).unwrap();
    let n = g.order();
    let mut triangles: Vec<u32> = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if g.has_edge(a, b) && g.has_edge(a, c) && g.has_edge(b, c) {
                    triangles.push(1 << id(a, b) | 1 << id(a, c) | 1 << id(b, c));
                }
            }
        }
    }
    let good = (0u32..1 << m).any(|coloring| {
        triangles
            .iter()
            .all(|&t| coloring & t != 0 && coloring & t != t)
    });
    Ok(!good)
}

/// Which vertex arrowing the oracle tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexTarget {
    /// (3,3)
    Pair33,
    /// (2,3,3)
    Triple233,
}

impl VertexTarget {
    pub fn clique_sizes(self) -> &'static [usize] {
        match self {
            VertexTarget::Pair33 => &[3, 3],
            VertexTarget::Triple233 => &[2, 3, 3],
        }
    }
}

/// Tries every s-colouring of V(G). Exits early on the first colouring
/// without a forbidden monochromatic clique.
pub fn oracle_vertex(g: &Graph, target: VertexTarget) -> Result<bool> {
    let n = g.order();
    if n > VERTEX_ORACLE_MAX_ORDER {
        return Err(Error::TooLarge {
            what: "vertex oracle order",
            limit: VERTEX_ORACLE_MAX_ORDER,
            actual: n,
        });
    }
    let sizes = target.clique_sizes();
    let k = sizes.len();
    let mut colors = vec![0usize; n];
    loop {
        let good = sizes.iter().enumerate().all(|(c, &a)| {
            let class: VertexSet = (0..n).filter(|&v| colors[v] == c).collect();
            !naive_has_clique(g, class, a)
        });
        if good {
            return Ok(false);
        }
        // Next colouring in base-k counting order.
        let mut i = 0;
        loop {
            if i == n {
                return Ok(true);
            }
            colors[i] += 1;
            if colors[i] < k {
                break;
            }
            colors[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::chromatic_number;

    fn graham() -> Graph {
        Graph::cycle(5).join_complete(3).unwrap()
    }

    #[test]
    fn edge_known_facts() {
        assert!(arrows_edge_33(&Graph::complete(6)));
        let k5 = Graph::complete(5);
        let witness = edge_33_search(&k5).unwrap_err();
        assert!(witness.is_good(&k5));
        assert!(arrows_edge_33(&graham()));
        let c5 = Graph::cycle(5);
        assert!(edge_33_search(&c5).unwrap_err().is_good(&c5));
    }

    #[test]
    fn edge_joined_examples() {
        assert!(arrows_edge_33_joined(3, &Graph::cycle(5)).unwrap());
        assert!(arrows_edge_33_joined(0, &Graph::complete(6)).unwrap());
        // W5: frozen from the exhaustive 2^10 colouring oracle.
        let w5 = Graph::cycle(5).join_complete(1).unwrap();
        assert!(!oracle_edge_33(&w5).unwrap());
        assert!(!arrows_edge_33_joined(1, &Graph::cycle(5)).unwrap());
        assert!(edge_33_search(&w5).unwrap_err().is_good(&w5));
        assert!(arrows_edge_33_joined(60, &Graph::cycle(5)).is_err());
    }

    #[test]
    fn vertex_33_examples() {
        assert!(arrows_vertex_33(&Graph::complete(5)));
        let k4 = Graph::complete(4);
        let w = vertex_33_search(&k4).unwrap_err();
        assert!(w.avoids(&k4, &[3, 3]));
        let c7 = Graph::cycle(7);
        assert!(!arrows_vertex_33(&c7));
        assert!(!arrows_vertex_33(&Graph::petersen()));
    }

    #[test]
    fn vertex_233_examples() {
        assert!(arrows_vertex_233(&Graph::complete(6)));
        let k5 = Graph::complete(5);
        let w = vertex_233_search(&k5).unwrap_err();
        assert!(w.avoids(&k5, &[2, 3, 3]));
        assert!(!arrows_vertex_233(&Graph::petersen()));
        assert!(!arrows_vertex_233(&Graph::cycle(5)));
    }

    #[test]
    fn oracle_examples() {
        assert!(!oracle_edge_33(&Graph::complete(5)).unwrap());
        assert!(oracle_vertex(&Graph::complete(6), VertexTarget::Triple233).unwrap());
        assert!(!oracle_vertex(&Graph::complete(5), VertexTarget::Triple233).unwrap());
        assert!(oracle_vertex(&Graph::complete(5), VertexTarget::Pair33).unwrap());
        assert!(oracle_edge_33(&Graph::complete(8)).is_err());
        assert!(oracle_vertex(&Graph::empty(17), VertexTarget::Pair33).is_err());
    }

    #[test]
    fn arrowing_implies_six_chromatic() {
        for g in [Graph::complete(6), graham()] {
            assert!(arrows_edge_33(&g));
            assert!(chromatic_number(&g) >= 6);
        }
        assert!(arrows_vertex_233(&Graph::complete(6)));
    }

    #[test]
    fn maximal_independent_sets_of_c5() {
        let mut sets = maximal_independent_sets(&Graph::cycle(5));
        sets.sort();
        assert_eq!(sets.len(), 5);
        assert!(sets.iter().all(|s| s.len() == 2));
        assert_eq!(maximal_independent_sets(&Graph::complete(4)).len(), 4);
        assert_eq!(
            maximal_independent_sets(&Graph::empty(4)),
            vec![VertexSet::full(4)]
        );
    }
}
