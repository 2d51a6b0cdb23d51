//! Good-tuple conditions over flat coordinates, and their exhaustive
//! enumeration over finite chains.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::boxes::BoxUnion;
use super::explicit::Explicit;
use super::{CoordLayout, Setting};
use crate::algebra::{Algebra, ChainTables, Connective, TruthValue};
use crate::error::{Error, Result};
use crate::semantics::grid_point;
use crate::syntax::{Component, Formula, Var};

/// One local condition on a tuple. Coordinates index the flattened tuple.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Constraint {
    /// `x[out] = op(x[a], x[b])`
    Conn {
        out: usize,
        op: Connective,
        a: usize,
        b: usize,
    },
    /// `x[out] = min x[args]`, and `1` when `args` is empty.
    Inf {
        out: usize,
        args: Vec<usize>,
    },
    /// `x[out] = max x[args]`, and `0` when `args` is empty.
    Sup {
        out: usize,
        args: Vec<usize>,
    },
    Const {
        out: usize,
        value: TruthValue,
    },
    Same {
        a: usize,
        b: usize,
    },
}

impl Constraint {
    /// Coordinates read or written, output first.
    pub fn coords(&self) -> Vec<usize> {
        match self {
            Constraint::Conn { out, a, b, .. } => vec![*out, *a, *b],
            Constraint::Inf { out, args } | Constraint::Sup { out, args } => {
                std::iter::once(*out).chain(args.iter().copied()).collect()
            }
            Constraint::Const { out, .. } => vec![*out],
            Constraint::Same { a, b } => vec![*a, *b],
        }
    }

    pub fn output(&self) -> Option<usize> {
        match self {
            Constraint::Conn { out, .. }
            | Constraint::Inf { out, .. }
            | Constraint::Sup { out, .. }
            | Constraint::Const { out, .. } => Some(*out),
            Constraint::Same { .. } => None,
        }
    }

    /// Applies a coordinate renaming.
    pub fn remap(&self, f: impl Fn(usize) -> usize) -> Constraint {
        match self {
            Constraint::Conn { out, op, a, b } => Constraint::Conn { out: f(*out), op: *op, a: f(*a), b: f(*b) },
            Constraint::Inf { out, args } => {
                Constraint::Inf { out: f(*out), args: args.iter().map(|&x| f(x)).collect() }
            }
            Constraint::Sup { out, args } => {
                Constraint::Sup { out: f(*out), args: args.iter().map(|&x| f(x)).collect() }
            }
            Constraint::Const { out, value } => Constraint::Const { out: f(*out), value: value.clone() },
            Constraint::Same { a, b } => Constraint::Same { a: f(*a), b: f(*b) },
        }
    }

    pub fn holds(&self, alg: &Algebra, x: &[TruthValue]) -> bool {
        match self {
            Constraint::Conn { out, op, a, b } => x[*out] == alg.op(*op, &x[*a], &x[*b]),
            Constraint::Inf { out, args } => {
                let v = args.iter().map(|&i| &x[i]).min().cloned().unwrap_or_else(TruthValue::one);
                x[*out] == v
            }
            Constraint::Sup { out, args } => {
                let v = args.iter().map(|&i| &x[i]).max().cloned().unwrap_or_else(TruthValue::zero);
                x[*out] == v
            }
            Constraint::Const { out, value } => x[*out] == *value,
            Constraint::Same { a, b } => x[*a] == x[*b],
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |args: &[usize]| args.iter().map(|a| format!("x{a}")).collect::<Vec<_>>().join(", ");
        match self {
            Constraint::Conn { out, op, a, b } => {
                let name = match op {
                    Connective::Meet => "meet",
                    Connective::Join => "join",
                    Connective::Strong => "strong",
                    Connective::Implies => "implies",
                };
                write!(f, "x{out} = {name}(x{a}, x{b})")
            }
            Constraint::Inf { out, args } => write!(f, "x{out} = min({})", list(args)),
            Constraint::Sup { out, args } => write!(f, "x{out} = max({})", list(args)),
            Constraint::Const { out, value } => write!(f, "x{out} = {value}"),
            Constraint::Same { a, b } => write!(f, "x{a} = x{b}"),
        }
    }
}

impl fmt::Debug for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub fn holds_all(alg: &Algebra, constraints: &[Constraint], x: &[TruthValue]) -> bool {
    constraints.iter().all(|c| c.holds(alg, x))
}

/// Removes exact duplicates, keeping first occurrences.
pub fn dedup(constraints: Vec<Constraint>) -> Vec<Constraint> {
    let mut seen = BTreeSet::new();
    constraints.into_iter().filter(|c| seen.insert(c.clone())).collect()
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
enum InstanceKey<'f> {
    Atom(&'f str, Vec<usize>),
    Other(&'f Formula, Vec<(&'f Var, usize)>),
}

fn coordinate(layout: &CoordLayout, comps: &[Component], j: usize, env: &[(&Var, usize)]) -> usize {
    let m = layout.domain();
    let mut idx = 0;
    for v in comps[j].vars() {
        let e = env.iter().rev().find(|(w, _)| *w == v).map(|(_, e)| *e).expect("child variables are bound");
        idx = idx * m + e;
    }
    layout.offset(j) + idx
}

/// The conditions a tuple over `comps` must meet to be good: connective
/// agreement at every point, quantifiers (or modalities) as inf/sup over
/// instances, fixed values for truth constants and equality atoms, and
/// agreement between coordinates denoting the same atom instance or the
/// same formula at the same binding.
pub fn compile(layout: &CoordLayout, comps: &[Component]) -> Result<Vec<Constraint>> {
    if layout.len() != comps.len() {
        return Err(Error::Layout(format!("{} components for a layout of {}", comps.len(), layout.len())));
    }
    let first_with = |f: &Formula| comps.iter().position(|c| c.formula() == f);
    let mut out = Vec::new();
    match layout.setting() {
        Setting::FirstOrder { domain: m } => {
            let m = *m;
            let mut seen: BTreeMap<InstanceKey, usize> = BTreeMap::new();
            for (i, comp) in comps.iter().enumerate() {
                let f = comp.formula();
                for idx in 0..layout.width(i) {
                    let here = layout.offset(i) + idx;
                    let point = grid_point(m, comp.arity(), idx);
                    let mut env: Vec<(&Var, usize)> = comp.vars().iter().zip(point).collect();
                    let key = match f {
                        Formula::Atom(p, args) => InstanceKey::Atom(
                            p,
                            args.iter()
                                .map(|a| env.iter().find(|(v, _)| *v == a).map(|(_, e)| *e).expect("bound"))
                                .collect(),
                        ),
                        _ => {
                            let mut b = env.clone();
                            b.sort();
                            InstanceKey::Other(f, b)
                        }
                    };
                    match seen.get(&key) {
                        Some(&first) => out.push(Constraint::Same { a: first, b: here }),
                        None => {
                            seen.insert(key, here);
                        }
                    }
                    match f {
                        Formula::Atom(..) => {}
                        Formula::Eq(x, y) => {
                            let ex = env.iter().find(|(v, _)| *v == x).map(|(_, e)| *e);
                            let ey = env.iter().find(|(v, _)| *v == y).map(|(_, e)| *e);
                            let value = if ex == ey { TruthValue::one() } else { TruthValue::zero() };
                            out.push(Constraint::Const { out: here, value });
                        }
                        Formula::Const(v) => out.push(Constraint::Const { out: here, value: v.clone() }),
                        Formula::Conn(op, a, b) => {
                            if let (Some(ja), Some(jb)) = (first_with(a), first_with(b)) {
                                out.push(Constraint::Conn {
                                    out: here,
                                    op: *op,
                                    a: coordinate(layout, comps, ja, &env),
                                    b: coordinate(layout, comps, jb, &env),
                                });
                            }
                        }
                        Formula::Forall(v, body) | Formula::Exists(v, body) => {
                            if let Some(j) = first_with(body) {
                                let mut args = Vec::with_capacity(m);
                                for e in 0..m {
                                    env.push((v, e));
                                    let c = coordinate(layout, comps, j, &env);
                                    env.pop();
                                    if !args.contains(&c) {
                                        args.push(c);
                                    }
                                }
                                out.push(if matches!(f, Formula::Forall(..)) {
                                    Constraint::Inf { out: here, args }
                                } else {
                                    Constraint::Sup { out: here, args }
                                });
                            }
                        }
                        Formula::Necessity(_) | Formula::Possibility(_) => {
                            return Err(Error::IllFormed(format!("modality in a first-order component: {f}")))
                        }
                    }
                }
            }
        }
        Setting::Modal(frame) => {
            for (i, comp) in comps.iter().enumerate() {
                let f = comp.formula();
                for w in 0..frame.worlds() {
                    let here = layout.offset(i) + w;
                    match f {
                        Formula::Atom(..) => {}
                        Formula::Const(v) => out.push(Constraint::Const { out: here, value: v.clone() }),
                        Formula::Conn(op, a, b) => {
                            if let (Some(ja), Some(jb)) = (first_with(a), first_with(b)) {
                                out.push(Constraint::Conn {
                                    out: here,
                                    op: *op,
                                    a: layout.offset(ja) + w,
                                    b: layout.offset(jb) + w,
                                });
                            }
                        }
                        Formula::Necessity(body) | Formula::Possibility(body) => {
                            if let Some(j) = first_with(body) {
                                let args = frame.successors(w).iter().map(|&v| layout.offset(j) + v).collect();
                                out.push(if matches!(f, Formula::Necessity(_)) {
                                    Constraint::Inf { out: here, args }
                                } else {
                                    Constraint::Sup { out: here, args }
                                });
                            }
                        }
                        _ => return Err(Error::IllFormed(format!("not a modal component: {f}"))),
                    }
                }
            }
        }
    }
    Ok(out)
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.0[hi] = lo;
        }
    }
}

/// Index-level form of a defining constraint over classes.
#[derive(Clone)]
enum Def {
    Conn(Connective, usize, usize),
    Inf(Vec<usize>),
    Sup(Vec<usize>),
    Const(Option<u16>),
}

impl Def {
    fn input_list(&self) -> Vec<usize> {
        match self {
            Def::Conn(_, a, b) => vec![*a, *b],
            Def::Inf(args) | Def::Sup(args) => args.clone(),
            Def::Const(_) => Vec::new(),
        }
    }

    fn eval(&self, t: &ChainTables, val: &[u16]) -> Option<u16> {
        match self {
            Def::Conn(op, a, b) => Some(t.op(*op, val[*a], val[*b])),
            Def::Inf(args) => Some(args.iter().map(|&c| val[c]).min().unwrap_or((t.len() - 1) as u16)),
            Def::Sup(args) => Some(args.iter().map(|&c| val[c]).max().unwrap_or(0)),
            Def::Const(v) => *v,
        }
    }
}

/// Every point of `within` whose coordinates lie in the carrier of `alg` and
/// which satisfies `constraints`, found by depth-first search over the free
/// coordinates with box pruning. Stops after `stop_after` points if given;
/// fails if more than `cap` points exist.
pub fn enumerate_good(
    alg: &Algebra,
    dim: usize,
    constraints: &[Constraint],
    within: &BoxUnion,
    cap: usize,
    stop_after: Option<usize>,
) -> Result<Explicit> {
    let tables = alg.chain_tables()?;
    let n = tables.len();
    let mut uf = UnionFind((0..dim).collect());
    for c in constraints {
        if let Constraint::Same { a, b } = c {
            uf.union(*a, *b);
        }
    }
    let mut class_of = vec![0usize; dim];
    let mut reps: Vec<usize> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    for (x, slot) in class_of.iter_mut().enumerate() {
        let r = uf.find(x);
        let id = match reps.iter().position(|&q| q == r) {
            Some(id) => id,
            None => {
                reps.push(r);
                members.push(Vec::new());
                reps.len() - 1
            }
        };
        *slot = id;
        members[id].push(x);
    }
    let k = reps.len();
    let to_def = |c: &Constraint| -> Option<(usize, Def)> {
        Some(match c {
            Constraint::Conn { out, op, a, b } => (class_of[*out], Def::Conn(*op, class_of[*a], class_of[*b])),
            Constraint::Inf { out, args } => (class_of[*out], Def::Inf(args.iter().map(|&a| class_of[a]).collect())),
            Constraint::Sup { out, args } => (class_of[*out], Def::Sup(args.iter().map(|&a| class_of[a]).collect())),
            Constraint::Const { out, value } => (class_of[*out], Def::Const(tables.index_of(value))),
            Constraint::Same { .. } => return None,
        })
    };
    let mut definer: Vec<Option<Def>> = vec![None; k];
    let mut checks: Vec<(usize, Def)> = Vec::new();
    for c in constraints {
        if let Some((cls, d)) = to_def(c) {
            if definer[cls].is_none() && !d.input_list().contains(&cls) {
                definer[cls] = Some(d);
            } else {
                checks.push((cls, d));
            }
        }
    }

    // Schedule: defined classes as soon as their inputs are known, otherwise
    // the next free class in coordinate order; cycles demote a definer.
    let mut order: Vec<usize> = Vec::with_capacity(k);
    let mut placed = vec![false; k];
    while order.len() < k {
        let ready = (0..k)
            .find(|&c| !placed[c] && definer[c].as_ref().is_some_and(|d| d.input_list().iter().all(|&i| placed[i])));
        let next = match ready {
            Some(c) => c,
            None => match (0..k).find(|&c| !placed[c] && definer[c].is_none()) {
                Some(c) => c,
                None => {
                    let c = (0..k).find(|&c| !placed[c]).expect("unplaced class");
                    let d = definer[c].take().expect("defined");
                    checks.push((c, d));
                    c
                }
            },
        };
        placed[next] = true;
        order.push(next);
    }
    let mut position = vec![0usize; k];
    for (p, &c) in order.iter().enumerate() {
        position[c] = p;
    }
    let mut checks_at: Vec<Vec<(usize, Def)>> = vec![Vec::new(); k.max(1)];
    for (cls, d) in checks {
        let at = d.input_list().iter().chain(std::iter::once(&cls)).map(|&c| position[c]).max().unwrap_or(0);
        checks_at[at].push((cls, d));
    }

    let regions = within.regions();
    let mut allowed = vec![false; regions.len() * dim * n];
    for (r, reg) in regions.iter().enumerate() {
        for (x, coord) in reg.coords().iter().enumerate() {
            for (v, val) in tables.values.iter().enumerate() {
                allowed[(r * dim + x) * n + v] = coord.contains_value(val);
            }
        }
    }

    struct Search<'a> {
        n: usize,
        dim: usize,
        tables: &'a ChainTables,
        order: &'a [usize],
        definer: &'a [Option<Def>],
        checks_at: &'a [Vec<(usize, Def)>],
        members: &'a [Vec<usize>],
        class_of: &'a [usize],
        allowed: &'a [bool],
        val: Vec<u16>,
        out: BTreeSet<Vec<u16>>,
        cap: usize,
        stop_after: Option<usize>,
    }

    impl Search<'_> {
        fn done(&self) -> bool {
            self.stop_after.is_some_and(|s| self.out.len() >= s)
        }

        fn go(&mut self, step: usize, viable: &[u32]) -> Result<()> {
            if step == self.order.len() {
                let point: Vec<u16> = (0..self.dim).map(|x| self.val[self.class_of[x]]).collect();
                self.out.insert(point);
                if self.out.len() > self.cap {
                    return Err(Error::SizeGuard {
                        what: "good tuples",
                        needed: self.out.len() as u128,
                        limit: self.cap as u128,
                    });
                }
                return Ok(());
            }
            let cls = self.order[step];
            let candidates: Vec<u16> = match &self.definer[cls] {
                Some(d) => d.eval(self.tables, &self.val).into_iter().collect(),
                None => (0..self.n as u16).collect(),
            };
            for v in candidates {
                self.val[cls] = v;
                let next: Vec<u32> = viable
                    .iter()
                    .copied()
                    .filter(|&r| {
                        self.members[cls]
                            .iter()
                            .all(|&x| self.allowed[(r as usize * self.dim + x) * self.n + v as usize])
                    })
                    .collect();
                if next.is_empty() {
                    continue;
                }
                let ok = self.checks_at[step].iter().all(|(c, d)| d.eval(self.tables, &self.val) == Some(self.val[*c]));
                if !ok {
                    continue;
                }
                self.go(step + 1, &next)?;
                if self.done() {
                    return Ok(());
                }
            }
            Ok(())
        }
    }

    let mut search = Search {
        n,
        dim,
        tables: &tables,
        order: &order,
        definer: &definer,
        checks_at: &checks_at,
        members: &members,
        class_of: &class_of,
        allowed: &allowed,
        val: vec![0; k],
        out: BTreeSet::new(),
        cap,
        stop_after,
    };
    let all: Vec<u32> = (0..regions.len() as u32).collect();
    if !all.is_empty() {
        search.go(0, &all)?;
    }
    Ok(Explicit::from_indices(dim, tables.values.clone(), search.out))
}
