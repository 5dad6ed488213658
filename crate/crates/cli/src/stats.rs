//! Histograms of |E|, δ, Δ, α and |Aut| over a graph stream.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use folkman_core::canon::aut_size;
use folkman_core::invariants::{degree_profile, independence_number};
use folkman_core::Graph;
use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StatsTable {
    pub total: u64,
    pub edges: BTreeMap<usize, u64>,
    pub min_degree: BTreeMap<usize, u64>,
    pub max_degree: BTreeMap<usize, u64>,
    pub alpha: BTreeMap<usize, u64>,
    pub aut: BTreeMap<BigUint, u64>,
}

impl StatsTable {
    pub fn add(&mut self, g: &Graph) {
        let d = degree_profile(g);
        self.total += 1;
        *self.edges.entry(d.edge_count).or_default() += 1;
        *self.min_degree.entry(d.min_degree).or_default() += 1;
        *self.max_degree.entry(d.max_degree).or_default() += 1;
        *self.alpha.entry(independence_number(g)).or_default() += 1;
        *self.aut.entry(aut_size(g)).or_default() += 1;
    }

    pub fn merge(mut self, other: StatsTable) -> StatsTable {
        fn fold<K: Ord>(a: &mut BTreeMap<K, u64>, b: BTreeMap<K, u64>) {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
        }
        self.total += other.total;
        fold(&mut self.edges, other.edges);
        fold(&mut self.min_degree, other.min_degree);
        fold(&mut self.max_degree, other.max_degree);
        fold(&mut self.alpha, other.alpha);
        fold(&mut self.aut, other.aut);
        self
    }

    pub fn from_graphs(graphs: &[Graph]) -> StatsTable {
        graphs
            .par_iter()
            .fold(StatsTable::default, |mut t, g| {
                t.add(g);
                t
            })
            .reduce(StatsTable::default, StatsTable::merge)
    }

    /// Five column pairs side by side, one value per row, blank where a
    /// column has run out:
    ///
    /// ```text
    /// |E(G)|        # | δ(G)        # | ...
    /// ```
    pub fn render(&self) -> String {
        let columns: Vec<(&str, Vec<(String, u64)>)> = vec![
            (
                "|E(G)|",
                self.edges
                    .iter()
                    .map(|(k, v)| (k.to_string(), *v))
                    .collect(),
            ),
            (
                "δ(G)",
                self.min_degree
                    .iter()
                    .map(|(k, v)| (k.to_string(), *v))
                    .collect(),
            ),
            (
                "Δ(G)",
                self.max_degree
                    .iter()
                    .map(|(k, v)| (k.to_string(), *v))
                    .collect(),
            ),
            (
                "α(G)",
                self.alpha
                    .iter()
                    .map(|(k, v)| (k.to_string(), *v))
                    .collect(),
            ),
            (
                "|Aut(G)|",
                self.aut.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            ),
        ];
        let key_w = columns
            .iter()
            .flat_map(|(h, rows)| {
                std::iter::once(h.chars().count()).chain(rows.iter().map(|r| r.0.len()))
            })
            .max()
            .unwrap_or(0);
        let count_w = columns
            .iter()
            .flat_map(|(_, rows)| rows.iter().map(|r| group_digits(r.1).len()))
            .chain(std::iter::once(1))
            .max()
            .unwrap();
        let pad =
            |s: &str, w: usize| format!("{s}{}", " ".repeat(w.saturating_sub(s.chars().count())));

        let mut out = String::new();
        let header: Vec<String> = columns
            .iter()
            .map(|(h, _)| format!("{} {:>count_w$}", pad(h, key_w), "#"))
            .collect();
        writeln!(out, "{}", header.join(" | ").trim_end()).unwrap();
        let height = columns.iter().map(|(_, r)| r.len()).max().unwrap_or(0);
        for i in 0..height {
            let cells: Vec<String> = columns
                .iter()
                .map(|(_, rows)| match rows.get(i) {
                    Some((k, v)) => format!("{} {:>count_w$}", pad(k, key_w), group_digits(*v)),
                    None => " ".repeat(key_w + 1 + count_w),
                })
                .collect();
            writeln!(out, "{}", cells.join(" | ").trim_end()).unwrap();
        }
        writeln!(out, "total {}", group_digits(self.total)).unwrap();
        out
    }

    pub fn to_record(&self) -> StatsRecord {
        let pairs = |m: &BTreeMap<usize, u64>| m.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        StatsRecord {
            total: self.total,
            edges: pairs(&self.edges),
            min_degree: pairs(&self.min_degree),
            max_degree: pairs(&self.max_degree),
            alpha: pairs(&self.alpha),
            aut: self.aut.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }
}

/// Thousands grouped with spaces, as in printed tables.
pub fn group_digits(v: u64) -> String {
    let s = v.to_string();
    let mut out = String::new();
    for (i, c) in s.chars().enumerate() {
        if i > 0 && (s.len() - i).is_multiple_of(3) {
            out.push(' ');
        }
        out.push(c);
    }
    out
}

/// Serializable table: histogram keys are decimal strings so that
/// |Aut| values beyond 64 bits survive.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsRecord {
    pub total: u64,
    pub edges: Vec<(String, u64)>,
    pub min_degree: Vec<(String, u64)>,
    pub max_degree: Vec<(String, u64)>,
    pub alpha: Vec<(String, u64)>,
    pub aut: Vec<(String, u64)>,
}

impl StatsRecord {
    /// Human-readable differences, empty when the tables agree.
    pub fn differences(&self, expected: &StatsRecord) -> Vec<String> {
        let mut out = Vec::new();
        if self.total != expected.total {
            out.push(format!(
                "total: expected {}, got {}",
                expected.total, self.total
            ));
        }
        let columns = [
            ("|E|", &self.edges, &expected.edges),
            ("min degree", &self.min_degree, &expected.min_degree),
            ("max degree", &self.max_degree, &expected.max_degree),
            ("alpha", &self.alpha, &expected.alpha),
            ("|Aut|", &self.aut, &expected.aut),
        ];
        for (name, got, want) in columns {
            let got: BTreeMap<&str, u64> = got.iter().map(|(k, v)| (k.as_str(), *v)).collect();
            let want: BTreeMap<&str, u64> = want.iter().map(|(k, v)| (k.as_str(), *v)).collect();
            for key in got
                .keys()
                .chain(want.keys())
                .collect::<std::collections::BTreeSet<_>>()
            {
                let (g, w) = (
                    got.get(key).copied().unwrap_or(0),
                    want.get(key).copied().unwrap_or(0),
                );
                if g != w {
                    out.push(format!("{name} = {key}: expected {w}, got {g}"));
                }
            }
        }
        out
    }
}
