//! Lazy case search: solve the LP relaxation, split only on what the current
//! witness gets wrong, backtrack when a branch becomes infeasible.

use num_traits::{One, Zero};

use super::program::{CaseSystem, Node};
use super::simplex::{lp_feasible, LinearConstraint, Rel};
use crate::algebra::Rational;
use crate::error::{Error, Result};
use crate::infoset::{BoxUnion, Interval, IntervalUnion, Region};

pub const DEFAULT_CASE_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Sat(Vec<Rational>),
    Unsat,
}

impl Outcome {
    pub fn witness(&self) -> Option<&[Rational]> {
        match self {
            Outcome::Sat(w) => Some(w),
            Outcome::Unsat => None,
        }
    }
}

/// A satisfiability query: a point of `within` obeying every node and, when
/// `violate` is given, breaking at least one of those nodes.
pub struct Query<'a> {
    pub dim: usize,
    pub nodes: &'a [Node],
    pub within: &'a BoxUnion,
    pub violate: Option<&'a [Node]>,
    pub budget: u64,
}

fn interval_rows(v: usize, iv: &Interval) -> Vec<LinearConstraint> {
    let one = || vec![(v, Rational::one())];
    let mut rows = Vec::new();
    if !iv.lo.is_zero() || iv.lo_open {
        rows.push(if iv.lo_open {
            LinearConstraint::gt(one(), iv.lo.clone())
        } else {
            LinearConstraint::ge(one(), iv.lo.clone())
        });
    }
    if !iv.hi.is_one() || iv.hi_open {
        rows.push(LinearConstraint::new(one(), if iv.hi_open { Rel::Lt } else { Rel::Le }, iv.hi.clone()));
    }
    rows
}

/// The smallest interval holding the whole union; closed where any piece is.
fn hull(u: &IntervalUnion) -> Interval {
    let ivs = u.intervals();
    let (first, last) = (&ivs[0], &ivs[ivs.len() - 1]);
    Interval { lo: first.lo.clone(), lo_open: first.lo_open, hi: last.hi.clone(), hi_open: last.hi_open }
}

enum Split<'a> {
    Interval(usize, &'a IntervalUnion),
    Node(&'a Node),
    Violation,
}

struct Searcher<'a> {
    q: &'a Query<'a>,
    explored: u64,
    violation_cases: Vec<CaseSystem>,
}

impl<'a> Searcher<'a> {
    fn lp(&mut self, rows: &[LinearConstraint]) -> Result<Option<Vec<Rational>>> {
        self.explored += 1;
        if self.explored > self.q.budget {
            return Err(Error::CaseBudget { explored: self.explored - 1 });
        }
        Ok(lp_feasible(self.q.dim, rows))
    }

    fn next_split(&self, region: &'a Region, x: &[Rational], violated: bool) -> Option<Split<'a>> {
        for (v, u) in region.coords().iter().enumerate() {
            if u.intervals().len() > 1 && !u.contains(&x[v]) {
                return Some(Split::Interval(v, u));
            }
        }
        if let Some(node) = self.q.nodes.iter().find(|n| !n.holds(x)) {
            return Some(Split::Node(node));
        }
        if self.q.violate.is_some() && !violated {
            let broken = self.q.violate.into_iter().flatten().any(|n| !n.holds(x));
            if !broken {
                return Some(Split::Violation);
            }
        }
        None
    }

    fn dfs(
        &mut self,
        region: &'a Region,
        rows: &mut Vec<LinearConstraint>,
        x: Vec<Rational>,
        violated: bool,
    ) -> Result<Option<Vec<Rational>>> {
        let (alternatives, now_violated): (Vec<CaseSystem>, bool) = match self.next_split(region, &x, violated) {
            None => return Ok(Some(x)),
            Some(Split::Interval(v, u)) => (u.intervals().iter().map(|iv| interval_rows(v, iv)).collect(), violated),
            Some(Split::Node(n)) => (n.cases(), violated),
            Some(Split::Violation) => (self.violation_cases.clone(), true),
        };
        for alt in alternatives {
            let mark = rows.len();
            rows.extend(alt);
            if let Some(y) = self.lp(rows)? {
                if let Some(w) = self.dfs(region, rows, y, now_violated)? {
                    return Ok(Some(w));
                }
            }
            rows.truncate(mark);
        }
        Ok(None)
    }
}

/// Decides the query exactly. Every witness is re-checked against the
/// nodes and the box union before it is returned.
pub fn satisfiable(q: &Query<'_>) -> Result<Outcome> {
    let mut s = Searcher {
        q,
        explored: 0,
        violation_cases: q.violate.into_iter().flatten().flat_map(|n| n.violation_cases()).collect(),
    };
    if q.violate.is_some_and(|v| v.is_empty()) {
        return Ok(Outcome::Unsat);
    }
    for region in q.within.regions() {
        let mut rows: Vec<LinearConstraint> = Vec::new();
        for (v, u) in region.coords().iter().enumerate() {
            rows.extend(interval_rows(v, &hull(u)));
        }
        // Single-case nodes never branch; add them up front.
        for n in q.nodes.iter().filter(|n| n.is_single_case()) {
            rows.extend(n.cases().into_iter().flatten());
        }
        let Some(x) = s.lp(&rows)? else { continue };
        if let Some(w) = s.dfs(region, &mut rows, x, false)? {
            let ok = q.within.contains(&w)
                && q.nodes.iter().all(|n| n.holds(&w))
                && q.violate.is_none_or(|v| v.iter().any(|n| !n.holds(&w)));
            if !ok {
                return Err(Error::Internal("solver witness failed exact re-check".into()));
            }
            return Ok(Outcome::Sat(w));
        }
    }
    Ok(Outcome::Unsat)
}
