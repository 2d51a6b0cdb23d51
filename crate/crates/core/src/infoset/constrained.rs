//! Box unions cut down by goodness programs, possibly with hidden
//! (existentially quantified) coordinates.

use std::fmt;

use super::boxes::BoxUnion;
use crate::algebra::Rational;
use crate::error::{Error, Result};
use crate::linsolve::{satisfiable, Node, Outcome, Query};

/// The set `{ x[visible] : x ∈ base, x obeys every node }` over an extended
/// coordinate space of `ext_dim` coordinates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Constrained {
    ext_dim: usize,
    base: BoxUnion,
    nodes: Vec<Node>,
    visible: Vec<usize>,
}

fn node_coords(n: &Node) -> Vec<usize> {
    match n {
        Node::MinOf { out, args } | Node::MaxOf { out, args } => {
            std::iter::once(*out).chain(args.iter().copied()).collect()
        }
        Node::LukConj { out, a, b } | Node::LukImpl { out, a, b } | Node::GodelImpl { out, a, b } => {
            vec![*out, *a, *b]
        }
        Node::ConstEq { out, .. } => vec![*out],
        Node::Same { a, b } => vec![*a, *b],
    }
}

pub(crate) fn remap_node(n: &Node, f: impl Fn(usize) -> usize) -> Node {
    match n {
        Node::MinOf { out, args } => Node::MinOf { out: f(*out), args: args.iter().map(|&a| f(a)).collect() },
        Node::MaxOf { out, args } => Node::MaxOf { out: f(*out), args: args.iter().map(|&a| f(a)).collect() },
        Node::LukConj { out, a, b } => Node::LukConj { out: f(*out), a: f(*a), b: f(*b) },
        Node::LukImpl { out, a, b } => Node::LukImpl { out: f(*out), a: f(*a), b: f(*b) },
        Node::GodelImpl { out, a, b } => Node::GodelImpl { out: f(*out), a: f(*a), b: f(*b) },
        Node::ConstEq { out, value } => Node::ConstEq { out: f(*out), value: value.clone() },
        Node::Same { a, b } => Node::Same { a: f(*a), b: f(*b) },
    }
}

impl Constrained {
    pub fn new(ext_dim: usize, base: BoxUnion, nodes: Vec<Node>, visible: Vec<usize>) -> Result<Self> {
        if base.dim() != ext_dim {
            return Err(Error::Layout(format!("base has {} coordinates, expected {ext_dim}", base.dim())));
        }
        if let Some(v) = visible.iter().find(|&&v| v >= ext_dim) {
            return Err(Error::Layout(format!("visible coordinate x{v} out of range")));
        }
        let mut seen = vec![false; ext_dim];
        for &v in &visible {
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::Layout(format!("coordinate x{v} is shown twice")));
            }
        }
        if let Some(n) = nodes.iter().find(|n| node_coords(n).iter().any(|&c| c >= ext_dim)) {
            return Err(Error::Layout(format!("node `{n}` refers past x{}", ext_dim.saturating_sub(1))));
        }
        Ok(Constrained { ext_dim, base, nodes, visible })
    }

    /// A box union seen as a program without nodes.
    pub fn from_boxes(base: BoxUnion) -> Self {
        let d = base.dim();
        Constrained { ext_dim: d, base, nodes: Vec::new(), visible: (0..d).collect() }
    }

    pub fn ext_dim(&self) -> usize {
        self.ext_dim
    }

    pub fn dim(&self) -> usize {
        self.visible.len()
    }

    pub fn base(&self) -> &BoxUnion {
        &self.base
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn visible(&self) -> &[usize] {
        &self.visible
    }

    pub fn has_hidden(&self) -> bool {
        self.visible.len() < self.ext_dim
    }

    /// Inverse of `visible` when nothing is hidden.
    fn inverse_visible(&self) -> Option<Vec<usize>> {
        if self.has_hidden() {
            return None;
        }
        let mut inv = vec![0; self.ext_dim];
        for (j, &v) in self.visible.iter().enumerate() {
            inv[v] = j;
        }
        Some(inv)
    }

    /// New coordinate `j` is old coordinate `map[j]`.
    pub fn select(&self, map: &[usize]) -> Constrained {
        Constrained { visible: map.iter().map(|&j| self.visible[j]).collect(), ..self.clone() }
    }

    /// Appends `extra` unconstrained visible coordinates.
    pub fn append_full(&self, extra: usize) -> Constrained {
        let mut visible = self.visible.clone();
        visible.extend(self.ext_dim..self.ext_dim + extra);
        Constrained {
            ext_dim: self.ext_dim + extra,
            base: self.base.append_full(extra),
            nodes: self.nodes.clone(),
            visible,
        }
    }

    /// Adds nodes phrased over visible coordinates.
    pub fn with_nodes(&self, nodes: &[Node]) -> Constrained {
        let mut out = self.clone();
        out.nodes.extend(nodes.iter().map(|n| remap_node(n, |j| self.visible[j])));
        out
    }

    pub fn intersect_boxes(&self, b: &BoxUnion, limit: usize) -> Result<Constrained> {
        let lifted = b.lift(self.ext_dim, &self.visible);
        Ok(Constrained { base: self.base.intersect(&lifted, limit)?, ..self.clone() })
    }

    pub fn intersect(&self, other: &Constrained, limit: usize) -> Result<Constrained> {
        if let Some(inv) = other.inverse_visible() {
            // Substitute the other program into our coordinates.
            let map = |k: usize| self.visible[inv[k]];
            let base_in_layout = other.base.select_coords(&other.visible);
            let mut out = self.intersect_boxes(&base_in_layout, limit)?;
            out.nodes.extend(other.nodes.iter().map(|n| remap_node(n, map)));
            return Ok(out);
        }
        if let Some(inv) = self.inverse_visible() {
            // Symmetric case; keep the other side's hidden coordinates.
            let map = |k: usize| other.visible[inv[k]];
            let base_in_layout = self.base.select_coords(&self.visible);
            let mut out = other.intersect_boxes(&base_in_layout, limit)?;
            out.nodes.extend(self.nodes.iter().map(|n| remap_node(n, map)));
            return Ok(out);
        }
        let shift = self.ext_dim;
        let mut nodes = self.nodes.clone();
        nodes.extend(other.nodes.iter().map(|n| remap_node(n, |k| k + shift)));
        nodes.extend(self.visible.iter().zip(&other.visible).map(|(&a, &b)| Node::Same { a, b: b + shift }));
        Ok(Constrained {
            ext_dim: self.ext_dim + other.ext_dim,
            base: self.base.product(&other.base, limit)?,
            nodes,
            visible: self.visible.clone(),
        })
    }

    fn query(&self, within: &BoxUnion, violate: Option<&[Node]>, budget: u64) -> Result<Option<Vec<Rational>>> {
        let out = satisfiable(&Query { dim: self.ext_dim, nodes: &self.nodes, within, violate, budget })?;
        Ok(match out {
            Outcome::Sat(w) => Some(self.visible.iter().map(|&v| w[v].clone()).collect()),
            Outcome::Unsat => None,
        })
    }

    /// Some member, or `None` when empty.
    pub fn witness(&self, budget: u64) -> Result<Option<Vec<Rational>>> {
        self.query(&self.base, None, budget)
    }

    pub fn contains(&self, p: &[Rational], budget: u64) -> Result<bool> {
        if p.len() != self.dim() {
            return Err(Error::Layout(format!("point of length {} for dimension {}", p.len(), self.dim())));
        }
        if !self.has_hidden() {
            let mut x = vec![Rational::default(); self.ext_dim];
            for (j, &v) in self.visible.iter().enumerate() {
                x[v] = p[j].clone();
            }
            return Ok(self.base.contains(&x) && self.nodes.iter().all(|n| n.holds(&x)));
        }
        let pin = BoxUnion::from_points(p.len(), [p]);
        let within = self.base.intersect(&pin.lift(self.ext_dim, &self.visible), usize::MAX)?;
        Ok(self.query(&within, None, budget)?.is_some())
    }

    /// A member of `self` outside `outside`, which must be a box union in
    /// visible coordinates.
    pub fn witness_outside_boxes(
        &self,
        outside: &BoxUnion,
        limit: usize,
        budget: u64,
    ) -> Result<Option<Vec<Rational>>> {
        let comp = outside.complement(limit)?;
        let within = self.base.intersect(&comp.lift(self.ext_dim, &self.visible), limit)?;
        self.query(&within, None, budget)
    }

    /// A member of `self` outside `other`. Needs `other` to have no hidden
    /// coordinates unless the two are identical.
    pub fn witness_outside(&self, other: &Constrained, limit: usize, budget: u64) -> Result<Option<Vec<Rational>>> {
        if self == other {
            return Ok(None);
        }
        let Some(inv) = other.inverse_visible() else {
            return Err(Error::Unsupported(
                "inclusion in a set with projected-away coordinates is not decidable by this solver".into(),
            ));
        };
        let base_in_layout = other.base.select_coords(&other.visible);
        if let Some(w) = self.witness_outside_boxes(&base_in_layout, limit, budget)? {
            return Ok(Some(w));
        }
        let violate: Vec<Node> = other.nodes.iter().map(|n| remap_node(n, |k| self.visible[inv[k]])).collect();
        self.query(&self.base, Some(&violate), budget)
    }
}

impl fmt::Display for Constrained {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "constrained {{ ext {}; base {}; nodes [", self.ext_dim, self.base)?;
        for (k, n) in self.nodes.iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{n}")?;
        }
        f.write_str("]; show [")?;
        for (k, v) in self.visible.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "x{v}")?;
        }
        f.write_str("] }")
    }
}

impl fmt::Debug for Constrained {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
