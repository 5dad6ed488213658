//! Graph predicates given on the command line, e.g. `omega<4,alpha<4`.
//!
//! Terms are comma separated and all must hold. A term is either a
//! comparison `<measure><op><int>` with measure one of `order`, `edges`,
//! `omega`, `alpha`, `chi`, `mindeg`, `maxdeg` and op one of
//! `<`, `<=`, `=`, `>=`, `>`, `!=`, or a property, optionally negated
//! with `!`: `plusk3`, `maxk4free`, `sperner`, `vertex33`, `vertex233`,
//! `arrows:<p>` (K_p + G → (3,3)).

use std::fmt;
use std::str::FromStr;

use folkman_core::arrowing::{arrows_edge_33_joined, arrows_vertex_233, arrows_vertex_33};
use folkman_core::invariants::{
    chromatic_at_least, clique_number, degree_profile, has_clique, independence_number,
};
use folkman_core::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Measure {
    Order,
    Edges,
    Omega,
    Alpha,
    Chi,
    MinDeg,
    MaxDeg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
}

impl Op {
    fn holds(self, a: usize, b: usize) -> bool {
        match self {
            Op::Lt => a < b,
            Op::Le => a <= b,
            Op::Eq => a == b,
            Op::Ne => a != b,
            Op::Ge => a >= b,
            Op::Gt => a > b,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Property {
    PlusK3,
    MaxK4Free,
    Sperner,
    Vertex33,
    Vertex233,
    Arrows(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Term {
    Compare(Measure, Op, usize),
    Has(Property, bool),
}

impl Term {
    fn cost(&self) -> u8 {
        match self {
            Term::Compare(
                Measure::Order | Measure::Edges | Measure::MinDeg | Measure::MaxDeg,
                ..,
            ) => 0,
            Term::Compare(Measure::Omega, ..)
            | Term::Has(Property::PlusK3 | Property::Sperner, _) => 1,
            Term::Compare(Measure::Alpha, ..) | Term::Has(Property::MaxK4Free, _) => 2,
            Term::Compare(Measure::Chi, ..) => 3,
            Term::Has(..) => 4,
        }
    }

    fn holds(&self, g: &Graph) -> bool {
        match *self {
            Term::Compare(m, op, k) => compare(g, m, op, k),
            Term::Has(p, want) => {
                let got = match p {
                    Property::PlusK3 => g.is_plus_k3(),
                    Property::MaxK4Free => matches!(g.is_maximal_k4_free(), Ok(true)),
                    Property::Sperner => g.is_sperner(),
                    Property::Vertex33 => arrows_vertex_33(g),
                    Property::Vertex233 => arrows_vertex_233(g),
                    Property::Arrows(p) => arrows_edge_33_joined(p, g).unwrap_or(false),
                };
                got == want
            }
        }
    }
}

fn compare(g: &Graph, m: Measure, op: Op, k: usize) -> bool {
    match (m, op) {
        // Threshold forms avoid computing the exact value.
        (Measure::Omega, Op::Lt) => !has_clique(g, k),
        (Measure::Omega, Op::Ge) => has_clique(g, k),
        (Measure::Chi, Op::Ge) => chromatic_at_least(g, k),
        (Measure::Chi, Op::Lt) => !chromatic_at_least(g, k),
        _ => {
            let value = match m {
                Measure::Order => g.order(),
                Measure::Edges => g.edge_count(),
                Measure::Omega => clique_number(g),
                Measure::Alpha => independence_number(g),
                Measure::Chi => folkman_core::invariants::chromatic_number(g),
                Measure::MinDeg => degree_profile(g).min_degree,
                Measure::MaxDeg => degree_profile(g).max_degree,
            };
            op.holds(value, k)
        }
    }
}

/// Conjunction of terms, evaluated cheapest first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filter {
    text: String,
    terms: Vec<Term>,
}

impl Filter {
    pub fn accept_all() -> Self {
        Filter {
            text: String::new(),
            terms: Vec::new(),
        }
    }

    pub fn matches(&self, g: &Graph) -> bool {
        self.terms.iter().all(|t| t.holds(g))
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

fn parse_term(raw: &str) -> Result<Term, String> {
    let (negated, body) = match raw.strip_prefix('!') {
        Some(rest) => (true, rest),
        None => (false, raw),
    };
    let property = match body {
        "plusk3" => Some(Property::PlusK3),
        "maxk4free" => Some(Property::MaxK4Free),
        "sperner" => Some(Property::Sperner),
        "vertex33" => Some(Property::Vertex33),
        "vertex233" => Some(Property::Vertex233),
        _ => match body.strip_prefix("arrows:") {
            Some(p) => Some(Property::Arrows(
                p.parse().map_err(|_| format!("bad join size in `{raw}`"))?,
            )),
            None => None,
        },
    };
    if let Some(p) = property {
        return Ok(Term::Has(p, !negated));
    }
    if negated {
        return Err(format!("`!` applies to properties only: `{raw}`"));
    }
    let split = body
        .find(['<', '>', '=', '!'])
        .ok_or_else(|| format!("unknown filter term `{raw}`"))?;
    let (name, rest) = body.split_at(split);
    let measure = match name {
        "order" | "n" => Measure::Order,
        "edges" => Measure::Edges,
        "omega" => Measure::Omega,
        "alpha" => Measure::Alpha,
        "chi" => Measure::Chi,
        "mindeg" => Measure::MinDeg,
        "maxdeg" => Measure::MaxDeg,
        _ => return Err(format!("unknown measure `{name}` in `{raw}`")),
    };
    let (op, value) = [
        ("<=", Op::Le),
        (">=", Op::Ge),
        ("!=", Op::Ne),
        ("<", Op::Lt),
        (">", Op::Gt),
        ("=", Op::Eq),
    ]
    .iter()
    .find_map(|(tok, op)| rest.strip_prefix(tok).map(|v| (*op, v)))
    .ok_or_else(|| format!("bad comparison in `{raw}`"))?;
    let value = value
        .parse()
        .map_err(|_| format!("bad number in `{raw}`"))?;
    Ok(Term::Compare(measure, op, value))
}

impl FromStr for Filter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut terms = s
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(parse_term)
            .collect::<Result<Vec<_>, _>>()?;
        terms.sort_by_key(Term::cost);
        Ok(Filter {
            text: s.trim().to_string(),
            terms,
        })
    }
}
