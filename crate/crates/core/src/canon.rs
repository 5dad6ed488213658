//! Canonical labeling by individualization-refinement.
//!
//! Partitions are ordered lists of vertex cells. Refinement splits cells by
//! neighbor counts into splitter cells until the partition is equitable.
//! The search tree individualizes each vertex of the first smallest
//! non-singleton cell. Every node carries the sequence of cell sizes seen
//! on its path; the canonical leaf minimizes (size trace, graph6 bytes).
//!
//! Automorphisms are detected when two leaves give the same relabeled
//! graph. They prune children in the same orbit, and the orbit sizes along
//! the first path multiply out to |Aut(G)|.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::graph::{Bits, Graph, VertexSet};
use crate::graph6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    /// graph6 encoding of the canonically relabeled graph.
    pub graph6: Vec<u8>,
    pub aut_size: BigUint,
}

impl CanonicalForm {
    pub fn graph(&self) -> Graph {
        graph6::decode(&self.graph6).expect("canonical graph6 is well formed")
    }
}

/// Splits cells by neighbor counts into each queued splitter until no
/// splitter changes the partition.
fn refine(rows: &[u64], cells: &mut Vec<u64>, mut queue: Vec<u64>) {
    let n = rows.len();
    let mut qi = 0;
    let mut buckets: Vec<(u32, u64)> = Vec::with_capacity(n);
    while qi < queue.len() && cells.len() < n {
        let splitter = queue[qi];
        qi += 1;
        let mut i = 0;
        while i < cells.len() {
            let cell = cells[i];
            if cell & (cell - 1) == 0 {
                i += 1;
                continue;
            }
            buckets.clear();
            for v in Bits(cell) {
                let c = (rows[v] & splitter).count_ones();
                match buckets.iter_mut().find(|b| b.0 == c) {
                    Some(b) => b.1 |= 1u64 << v,
                    None => buckets.push((c, 1u64 << v)),
                }
            }
            if buckets.len() == 1 {
                i += 1;
                continue;
            }
            buckets.sort_unstable_by_key(|b| b.0);
            cells.splice(i..=i, buckets.iter().map(|b| b.1));
            queue.extend(buckets.iter().map(|b| b.1));
            i += buckets.len();
        }
    }
}

fn cell_sizes(cells: &[u64]) -> Vec<u8> {
    cells.iter().map(|c| c.count_ones() as u8).collect()
}

/// Columns of the relabeled upper triangle, most significant bit = row 0.
/// Lexicographic order on this key equals lexicographic graph6 order.
fn leaf_key(rows: &[u64], lab: &[usize]) -> Vec<u64> {
    let n = lab.len();
    let mut key = vec![0u64; n];
    for j in 1..n {
        let row = rows[lab[j]];
        let mut col = 0u64;
        for (i, &u) in lab[..j].iter().enumerate() {
            col |= (row >> u & 1) << (63 - i);
        }
        key[j] = col;
    }
    key
}

struct Leaf {
    key: Vec<u64>,
    lab: Vec<usize>,
    traces: Vec<Vec<u8>>,
}

struct Search<'a> {
    rows: &'a [u64],
    n: usize,
    /// Vertices individualized on the path to the first leaf.
    first_path: Vec<usize>,
    first: Option<Leaf>,
    best: Option<Leaf>,
    /// Automorphisms as vertex images.
    gens: Vec<Vec<usize>>,
    aut: BigUint,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

impl Search<'_> {
    /// Union-find orbits of the group generated by the known automorphisms
    /// fixing every vertex of `path`.
    fn orbits(&self, path: &[usize]) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        for gen in &self.gens {
            if path.iter().any(|&v| gen[v] != v) {
                continue;
            }
            for (v, &w) in gen.iter().enumerate() {
                let a = find(&mut parent, v);
                let b = find(&mut parent, w);
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        parent
    }

    fn record_automorphism(&mut self, from: &[usize], to: &[usize]) {
        let mut gen = vec![0; self.n];
        for (&a, &b) in from.iter().zip(to) {
            gen[a] = b;
        }
        if gen.iter().enumerate().any(|(v, &w)| v != w) {
            self.gens.push(gen);
        }
    }

    /// Returns `Some(level)` to abandon the search up to the first-path
    /// node at `level`.
    fn visit(
        &mut self,
        cells: Vec<u64>,
        path: &mut Vec<usize>,
        traces: &mut Vec<Vec<u8>>,
    ) -> Option<usize> {
        traces.push(cell_sizes(&cells));
        let result = self.expand(cells, path, traces);
        traces.pop();
        result
    }

    fn expand(
        &mut self,
        cells: Vec<u64>,
        path: &mut Vec<usize>,
        traces: &mut Vec<Vec<u8>>,
    ) -> Option<usize> {
        let level = path.len();
        let (on_first_path, eq_first) = match (&self.first, &self.best) {
            (Some(first), Some(best)) => {
                let eq_first = first.traces.len() > level && traces[..] == first.traces[..=level];
                let upto = (level + 1).min(best.traces.len());
                if !eq_first && traces[..] > best.traces[..upto] {
                    return None;
                }
                (eq_first && path[..] == self.first_path[..level], eq_first)
            }
            _ => (true, true),
        };

        if cells.len() == self.n {
            return self.leaf(&cells, path, traces, eq_first);
        }

        let target = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.count_ones() > 1)
            .min_by_key(|(i, c)| (c.count_ones(), *i))
            .map(|(i, _)| i)
            .unwrap();
        let cell = cells[target];

        let mut done: Vec<usize> = Vec::new();
        for w in Bits(cell) {
            let mut orbits = self.orbits(path);
            let rep = find(&mut orbits, w);
            if done.iter().any(|&d| find(&mut orbits, d) == rep) {
                continue;
            }
            done.push(w);

            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..target]);
            child.push(1u64 << w);
            child.push(cell & !(1u64 << w));
            child.extend_from_slice(&cells[target + 1..]);
            refine(self.rows, &mut child, vec![1u64 << w]);

            path.push(w);
            let jump = self.visit(child, path, traces);
            path.pop();
            match jump {
                Some(to) if to < level => return Some(to),
                _ => {}
            }
        }

        if on_first_path {
            let mut orbits = self.orbits(path);
            let rep = find(&mut orbits, done[0]);
            let size = (0..self.n).filter(|&u| find(&mut orbits, u) == rep).count();
            self.aut *= BigUint::from(size);
        }
        None
    }

    fn leaf(
        &mut self,
        cells: &[u64],
        path: &[usize],
        traces: &[Vec<u8>],
        eq_first: bool,
    ) -> Option<usize> {
        let lab: Vec<usize> = cells.iter().map(|c| c.trailing_zeros() as usize).collect();
        let key = leaf_key(self.rows, &lab);
        let leaf = Leaf {
            key,
            lab,
            traces: traces.to_vec(),
        };
        let Some(first) = &self.first else {
            self.first_path = path.to_vec();
            self.first = Some(Leaf {
                key: leaf.key.clone(),
                lab: leaf.lab.clone(),
                traces: leaf.traces.clone(),
            });
            self.best = Some(leaf);
            return None;
        };

        if eq_first && leaf.key == first.key {
            let from = first.lab.clone();
            self.record_automorphism(&from, &leaf.lab);
            let diverge = path
                .iter()
                .zip(&self.first_path)
                .position(|(a, b)| a != b)
                .unwrap_or(path.len());
            return Some(diverge);
        }

        let best = self.best.as_ref().unwrap();
        match leaf
            .traces
            .cmp(&best.traces)
            .then_with(|| leaf.key.cmp(&best.key))
        {
            Ordering::Less => self.best = Some(leaf),
            Ordering::Equal => {
                let from = best.lab.clone();
                self.record_automorphism(&from, &leaf.lab);
            }
            Ordering::Greater => {}
        }
        None
    }
}

fn run(g: &Graph) -> (Vec<usize>, BigUint) {
    let rows = g.rows();
    let n = g.order();
    let mut cells = vec![g.vertices().bits()];
    refine(rows, &mut cells, vec![g.vertices().bits()]);
    let mut search = Search {
        rows,
        n,
        first_path: Vec::new(),
        first: None,
        best: None,
        gens: Vec::new(),
        aut: BigUint::from(1u32),
    };
    search.visit(cells, &mut Vec::new(), &mut Vec::new());
    (search.best.unwrap().lab, search.aut)
}

/// Relabels so that position `i` of `lab` becomes vertex `i`.
fn relabel_by(g: &Graph, lab: &[usize]) -> Graph {
    let mut perm = vec![0; lab.len()];
    for (i, &v) in lab.iter().enumerate() {
        perm[v] = i;
    }
    g.permuted(&perm)
}

pub fn canonical_form(g: &Graph) -> CanonicalForm {
    let (lab, aut_size) = run(g);
    CanonicalForm {
        graph6: graph6::encode(&relabel_by(g, &lab)),
        aut_size,
    }
}

/// graph6 bytes of the canonical relabeling.
pub fn canonical_label(g: &Graph) -> Vec<u8> {
    canonical_form(g).graph6
}

pub fn canonical_graph(g: &Graph) -> Graph {
    relabel_by(g, &run(g).0)
}

pub fn aut_size(g: &Graph) -> BigUint {
    run(g).1
}

pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    a.order() == b.order()
        && a.edge_count() == b.edge_count()
        && canonical_label(a) == canonical_label(b)
}

/// Canonical graph6 strings of a graph collection, deduplicated and sorted.
///
/// Shards are canonicalized and deduplicated independently, then merged,
/// so the result does not depend on input order or thread count.
pub fn canonical_set<I>(graphs: I) -> BTreeSet<Vec<u8>>
where
    I: IntoParallelIterator<Item = Graph>,
{
    graphs
        .into_par_iter()
        .fold(BTreeSet::new, |mut set, g| {
            set.insert(canonical_label(&g));
            set
        })
        .reduce(BTreeSet::new, |mut a, mut b| {
            if a.len() < b.len() {
                std::mem::swap(&mut a, &mut b);
            }
            a.append(&mut b);
            a
        })
}

/// One representative per isomorphism class: the canonical relabeling,
/// sorted by canonical graph6.
pub fn dedup_stream<I>(graphs: I) -> Vec<Graph>
where
    I: IntoParallelIterator<Item = Graph>,
{
    canonical_set(graphs)
        .into_iter()
        .map(|s| graph6::decode(&s).expect("canonical graph6 is well formed"))
        .collect()
}

/// Every unlabeled graph on `n` vertices, canonical and sorted. Built by
/// attaching a new vertex to every neighbor subset of each graph on n − 1
/// vertices; practical up to n = 9.
pub fn unlabeled_graphs(n: usize) -> Vec<Graph> {
    assert!(
        (1..=10).contains(&n),
        "unlabeled_graphs supports 1..=10 vertices"
    );
    let mut level = vec![Graph::empty(1)];
    for k in 1..n {
        level =
            dedup_stream(level.par_iter().flat_map_iter(|g| {
                (0u64..1 << k).map(move |nb| g.add_vertex(VertexSet(nb)).unwrap())
            }));
    }
    level
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};

    fn random_perm(n: usize, rng: &mut impl Rng) -> Vec<usize> {
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(rng);
        p
    }

    #[test]
    fn petersen_is_permutation_invariant() {
        let g = Graph::petersen();
        let want = canonical_form(&g);
        assert_eq!(want.aut_size, BigUint::from(120u32));
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..100 {
            let h = g.permuted(&random_perm(10, &mut rng));
            assert_eq!(canonical_form(&h), want);
        }
    }

    #[test]
    fn automorphism_group_sizes() {
        assert_eq!(aut_size(&Graph::cycle(5)), BigUint::from(10u32));
        assert_eq!(aut_size(&Graph::complete(4)), BigUint::from(24u32));
        assert_eq!(aut_size(&Graph::empty(5)), BigUint::from(120u32));
        assert_eq!(aut_size(&Graph::path(4)), BigUint::from(2u32));
        assert_eq!(aut_size(&Graph::complete(1)), BigUint::from(1u32));
        let factorial: BigUint = (1..=62u32).map(BigUint::from).product();
        assert_eq!(aut_size(&Graph::complete(62)), factorial);
    }

    #[test]
    fn canonical_graph_is_isomorphic_copy() {
        let g = Graph::cycle(5).join_complete(3).unwrap();
        let c = canonical_graph(&g);
        assert_eq!(c.edge_count(), g.edge_count());
        assert_eq!(canonical_label(&c), canonical_label(&g));
    }

    #[test]
    fn unlabeled_counts() {
        let counts: Vec<usize> = (1..=6).map(|n| unlabeled_graphs(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 11, 34, 156]);
    }

    #[test]
    fn dedup_examples() {
        let c5 = Graph::cycle(5);
        let relabeled = c5.permuted(&[2, 0, 4, 1, 3]);
        let out = dedup_stream(vec![c5.clone(), relabeled, Graph::complete(3)]);
        assert_eq!(out.len(), 2);
        assert!(dedup_stream(Vec::<Graph>::new()).is_empty());

        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let mut g = Graph::empty(7);
        for u in 0..7 {
            for v in u + 1..7 {
                if rng.gen_bool(0.5) {
                    g.add_edge(u, v).unwrap();
                }
            }
        }
        let copies: Vec<Graph> = (0..21)
            .map(|_| g.permuted(&random_perm(7, &mut rng)))
            .collect();
        assert_eq!(dedup_stream(copies).len(), 1);
    }

    #[test]
    fn dedup_output_is_order_independent() {
        let graphs = vec![
            Graph::cycle(6),
            Graph::path(6),
            Graph::cycle(6).permuted(&[5, 4, 3, 2, 1, 0]),
            Graph::complete(3).join(&Graph::empty(3)).unwrap(),
        ];
        let mut rev = graphs.clone();
        rev.reverse();
        assert_eq!(dedup_stream(graphs), dedup_stream(rev));
    }

    #[test]
    fn distinguishes_cospectral_regular_graphs() {
        // Two 3-regular graphs on 6 vertices: K_{3,3} and the prism.
        let k33 = Graph::from_edges(
            6,
            &[
                (0, 3),
                (0, 4),
                (0, 5),
                (1, 3),
                (1, 4),
                (1, 5),
                (2, 3),
                (2, 4),
                (2, 5),
            ],
        )
        .unwrap();
        let prism = Graph::from_edges(
            6,
            &[
                (0, 1),
                (1, 2),
                (2, 0),
                (3, 4),
                (4, 5),
                (5, 3),
                (0, 3),
                (1, 4),
                (2, 5),
            ],
        )
        .unwrap();
        assert!(!are_isomorphic(&k33, &prism));
        assert_eq!(aut_size(&k33), BigUint::from(72u32));
        assert_eq!(aut_size(&prism), BigUint::from(12u32));
    }
}
