//! Finite-domain models, Kripke frames and evaluation.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{Algebra, TruthValue};
use crate::error::{Error, Result};
use crate::infoset::CoordLayout;
use crate::md::MdSentence;
use crate::syntax::{Component, Formula, Var, Vocabulary};

/// Assignment of domain elements to variables.
pub type Assignment = BTreeMap<Var, usize>;

/// Index of the tuple `args` among the lexicographically ordered points of `M^n`.
pub fn grid_index(m: usize, args: &[usize]) -> usize {
    args.iter().fold(0, |acc, &a| acc * m + a)
}

/// Inverse of [`grid_index`].
pub fn grid_point(m: usize, arity: usize, mut idx: usize) -> Vec<usize> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = idx % m;
        idx /= m;
    }
    out
}

/// `m^n`, or `None` on overflow.
pub fn grid_size(m: usize, arity: usize) -> Option<usize> {
    m.checked_pow(u32::try_from(arity).ok()?)
}

/// A first-order structure over the domain `{0, …, m−1}`. Each table lists
/// the values of one predicate at the points of `M^n` in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Model {
    vocab: Vocabulary,
    domain: usize,
    tables: BTreeMap<String, Vec<TruthValue>>,
}

impl Model {
    pub fn new(vocab: Vocabulary, domain: usize, tables: BTreeMap<String, Vec<TruthValue>>) -> Result<Self> {
        if domain == 0 {
            return Err(Error::Invalid("the domain must be nonempty".into()));
        }
        for (name, arity) in vocab.predicates() {
            let table = tables.get(name).ok_or_else(|| Error::MissingTable(name.clone()))?;
            let need = grid_size(domain, *arity).ok_or(Error::SizeGuard {
                what: "table size",
                needed: u128::MAX,
                limit: usize::MAX as u128,
            })?;
            if table.len() != need {
                return Err(Error::Arity { what: format!("table of {name}"), expected: need, found: table.len() });
            }
        }
        if let Some(extra) = tables.keys().find(|k| vocab.arity(k).is_none()) {
            return Err(Error::UnknownPredicate(extra.clone()));
        }
        Ok(Model { vocab, domain, tables })
    }

    /// Every entry of every table set to `value`.
    pub fn constant(vocab: Vocabulary, domain: usize, value: TruthValue) -> Result<Self> {
        let tables =
            vocab.predicates().iter().map(|(n, a)| (n.clone(), vec![value.clone(); domain.pow(*a as u32)])).collect();
        Model::new(vocab, domain, tables)
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn tables(&self) -> &BTreeMap<String, Vec<TruthValue>> {
        &self.tables
    }

    pub fn table(&self, pred: &str) -> Result<&[TruthValue]> {
        self.tables.get(pred).map(|t| t.as_slice()).ok_or_else(|| Error::MissingTable(pred.into()))
    }

    pub fn value(&self, pred: &str, args: &[usize]) -> Result<&TruthValue> {
        Ok(&self.table(pred)?[grid_index(self.domain, args)])
    }

    pub fn set(&mut self, pred: &str, args: &[usize], v: TruthValue) -> Result<()> {
        let m = self.domain;
        let t = self.tables.get_mut(pred).ok_or_else(|| Error::MissingTable(pred.into()))?;
        t[grid_index(m, args)] = v;
        Ok(())
    }

    /// Checks that every table entry lies in the carrier of `alg`.
    pub fn check_carrier(&self, alg: &Algebra) -> Result<()> {
        self.tables.values().flatten().try_for_each(|v| alg.check_member(v))
    }
}

/// The mapping `M^n → [0,1]` a component defines in a model, listed at the
/// grid points in lexicographic order. Modal tables are indexed by worlds.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FuncTable {
    pub arity: usize,
    pub entries: Vec<TruthValue>,
}

impl FuncTable {
    pub fn at(&self, m: usize, args: &[usize]) -> &TruthValue {
        &self.entries[grid_index(m, args)]
    }
}

fn lookup(env: &[(&Var, usize)], v: &Var) -> Result<usize> {
    env.iter().rev().find(|(w, _)| *w == v).map(|(_, e)| *e).ok_or_else(|| Error::Unassigned(v.to_string()))
}

fn eval_env<'f>(alg: &Algebra, model: &Model, f: &'f Formula, env: &mut Vec<(&'f Var, usize)>) -> Result<TruthValue> {
    Ok(match f {
        Formula::Atom(p, args) => {
            let table = model.table(p)?;
            if args.len() != model.vocab.arity(p).unwrap_or(usize::MAX) {
                return Err(Error::Arity {
                    what: format!("predicate {p}"),
                    expected: model.vocab.arity(p).unwrap_or(0),
                    found: args.len(),
                });
            }
            let mut idx = 0;
            for a in args {
                idx = idx * model.domain + lookup(env, a)?;
            }
            table[idx].clone()
        }
        Formula::Eq(x, y) => {
            if lookup(env, x)? == lookup(env, y)? {
                TruthValue::one()
            } else {
                TruthValue::zero()
            }
        }
        Formula::Const(v) => v.clone(),
        Formula::Conn(c, a, b) => {
            let x = eval_env(alg, model, a, env)?;
            let y = eval_env(alg, model, b, env)?;
            alg.op(*c, &x, &y)
        }
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let universal = matches!(f, Formula::Forall(..));
            let mut acc: Option<TruthValue> = None;
            for e in 0..model.domain {
                env.push((v, e));
                let val = eval_env(alg, model, body, env);
                env.pop();
                let val = val?;
                acc = Some(match acc {
                    None => val,
                    Some(a) if universal => a.min(val),
                    Some(a) => a.max(val),
                });
            }
            acc.expect("nonempty domain")
        }
        Formula::Necessity(_) | Formula::Possibility(_) => {
            return Err(Error::IllFormed(format!("modality in first-order evaluation: {f}")))
        }
    })
}

/// The value of `f` in `model` under `assignment`.
pub fn eval(alg: &Algebra, model: &Model, f: &Formula, assignment: &Assignment) -> Result<TruthValue> {
    let mut env: Vec<(&Var, usize)> = assignment.iter().map(|(v, e)| (v, *e)).collect();
    eval_env(alg, model, f, &mut env)
}

/// The value of a sentence.
pub fn eval_sentence(alg: &Algebra, model: &Model, f: &Formula) -> Result<TruthValue> {
    eval_env(alg, model, f, &mut Vec::new())
}

/// The table of `comp` over `M^n`, with `n` the length of its variable list.
pub fn interpret(alg: &Algebra, model: &Model, comp: &Component) -> Result<FuncTable> {
    let m = model.domain;
    let n = comp.arity();
    let size = grid_size(m, n).ok_or(Error::SizeGuard {
        what: "interpretation table",
        needed: u128::MAX,
        limit: usize::MAX as u128,
    })?;
    let mut entries = Vec::with_capacity(size);
    let mut env: Vec<(&Var, usize)> = comp.vars().iter().map(|v| (v, 0)).collect();
    for idx in 0..size {
        let point = grid_point(m, n, idx);
        for (slot, e) in env.iter_mut().zip(point) {
            slot.1 = e;
        }
        entries.push(eval_env(alg, model, comp.formula(), &mut env)?);
    }
    Ok(FuncTable { arity: n, entries })
}

/// A Kripke frame on worlds `{0, …, m−1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Frame {
    worlds: usize,
    edges: BTreeSet<(usize, usize)>,
    succ: Vec<Vec<usize>>,
}

impl Frame {
    pub fn new(worlds: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if worlds == 0 {
            return Err(Error::Invalid("a frame needs at least one world".into()));
        }
        let edges: BTreeSet<_> = edges.into_iter().collect();
        if let Some(&(a, b)) = edges.iter().find(|(a, b)| *a >= worlds || *b >= worlds) {
            return Err(Error::Invalid(format!("edge ({a},{b}) leaves the {worlds} worlds")));
        }
        let mut succ = vec![Vec::new(); worlds];
        for &(a, b) in &edges {
            succ[a].push(b);
        }
        Ok(Frame { worlds, edges, succ })
    }

    pub fn worlds(&self) -> usize {
        self.worlds
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn successors(&self, w: usize) -> &[usize] {
        &self.succ[w]
    }
}

/// A frame with a valuation of the propositional variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModalModel {
    frame: Frame,
    valuation: BTreeMap<String, Vec<TruthValue>>,
}

impl ModalModel {
    pub fn new(frame: Frame, valuation: BTreeMap<String, Vec<TruthValue>>) -> Result<Self> {
        for (p, vals) in &valuation {
            if vals.len() != frame.worlds {
                return Err(Error::Arity {
                    what: format!("valuation of {p}"),
                    expected: frame.worlds,
                    found: vals.len(),
                });
            }
        }
        Ok(ModalModel { frame, valuation })
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn valuation(&self) -> &BTreeMap<String, Vec<TruthValue>> {
        &self.valuation
    }

    pub fn check_carrier(&self, alg: &Algebra) -> Result<()> {
        self.valuation.values().flatten().try_for_each(|v| alg.check_member(v))
    }
}

/// The value of a modal formula at world `w`. At a world without successors
/// `box` yields 1 and `dia` yields 0.
pub fn eval_modal(alg: &Algebra, mm: &ModalModel, f: &Formula, w: usize) -> Result<TruthValue> {
    Ok(match f {
        Formula::Atom(p, args) if args.is_empty() => {
            mm.valuation.get(p).ok_or_else(|| Error::MissingTable(p.clone()))?[w].clone()
        }
        Formula::Const(v) => v.clone(),
        Formula::Conn(c, a, b) => {
            let x = eval_modal(alg, mm, a, w)?;
            let y = eval_modal(alg, mm, b, w)?;
            alg.op(*c, &x, &y)
        }
        Formula::Necessity(b) => {
            let mut acc = TruthValue::one();
            for &v in mm.frame.successors(w) {
                acc = acc.min(eval_modal(alg, mm, b, v)?);
            }
            acc
        }
        Formula::Possibility(b) => {
            let mut acc = TruthValue::zero();
            for &v in mm.frame.successors(w) {
                acc = acc.max(eval_modal(alg, mm, b, v)?);
            }
            acc
        }
        _ => return Err(Error::IllFormed(format!("not a modal formula: {f}"))),
    })
}

/// The table of a modal formula over the worlds.
pub fn interpret_modal(alg: &Algebra, mm: &ModalModel, f: &Formula) -> Result<FuncTable> {
    let entries = (0..mm.frame.worlds).map(|w| eval_modal(alg, mm, f, w)).collect::<Result<_>>()?;
    Ok(FuncTable { arity: 1, entries })
}

/// Concatenated interpretation tables of `comps`: the point of the product
/// space a model determines.
pub fn tuple_of(alg: &Algebra, model: &Model, comps: &[Component]) -> Result<Vec<TruthValue>> {
    let mut out = Vec::new();
    for c in comps {
        out.extend(interpret(alg, model, c)?.entries);
    }
    Ok(out)
}

pub fn tuple_of_modal(alg: &Algebra, mm: &ModalModel, comps: &[Component]) -> Result<Vec<TruthValue>> {
    let mut out = Vec::new();
    for c in comps {
        out.extend(interpret_modal(alg, mm, c.formula())?.entries);
    }
    Ok(out)
}

/// Whether `model` satisfies `md`.
pub fn satisfies(alg: &Algebra, model: &Model, md: &MdSentence) -> Result<bool> {
    let layout = md.set().layout();
    let expected = CoordLayout::first_order(model.domain, md.components())?;
    if !layout.same_shape(&expected) {
        return Err(Error::Layout(format!(
            "information set is laid out for {}, model has domain {}",
            layout.describe(),
            model.domain
        )));
    }
    let point = tuple_of(alg, model, md.components())?;
    md.set().contains(&point)
}

pub fn satisfies_modal(alg: &Algebra, mm: &ModalModel, md: &MdSentence) -> Result<bool> {
    let layout = md.set().layout();
    let expected = CoordLayout::modal(&mm.frame, md.components())?;
    if !layout.same_shape(&expected) {
        return Err(Error::Layout(format!(
            "information set is laid out for {}, frame has {} worlds",
            layout.describe(),
            mm.frame.worlds
        )));
    }
    let point = tuple_of_modal(alg, mm, md.components())?;
    md.set().contains(&point)
}

/// Default cap on the number of models an enumeration may produce.
pub const DEFAULT_MODEL_CAP: u128 = 1 << 24;

/// `|A|^(Σ m^arity)`, or `None` on overflow.
pub fn model_count(carrier: usize, vocab: &Vocabulary, m: usize) -> Option<u128> {
    let mut entries: u32 = 0;
    for (_, a) in vocab.predicates() {
        let w = grid_size(m, *a)?;
        entries = entries.checked_add(u32::try_from(w).ok()?)?;
    }
    (carrier as u128).checked_pow(entries)
}

/// Counter over `base^len` digit vectors; the last digit moves fastest.
#[derive(Clone, Debug)]
pub(crate) struct Odometer {
    digits: Vec<u16>,
    base: u16,
    started: bool,
    done: bool,
}

impl Odometer {
    pub fn new(len: usize, base: usize) -> Self {
        Odometer { digits: vec![0; len], base: base as u16, started: false, done: base == 0 }
    }

    pub fn advance(&mut self) -> Option<&[u16]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(&self.digits);
        }
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < self.base {
                return Some(&self.digits);
            }
            *d = 0;
        }
        self.done = true;
        None
    }
}

/// Streams every model over a finite carrier. Predicates are laid out in
/// vocabulary order, tables in lexicographic order, and the last entry varies
/// fastest.
pub struct ModelEnumerator {
    vocab: Vocabulary,
    domain: usize,
    values: Vec<TruthValue>,
    widths: Vec<usize>,
    odo: Odometer,
    total: u128,
}

impl ModelEnumerator {
    pub fn total(&self) -> u128 {
        self.total
    }
}

impl Iterator for ModelEnumerator {
    type Item = Model;

    fn next(&mut self) -> Option<Model> {
        let digits = self.odo.advance()?;
        let mut tables = BTreeMap::new();
        let mut at = 0;
        for ((name, _), w) in self.vocab.predicates().iter().zip(&self.widths) {
            let t = digits[at..at + w].iter().map(|&d| self.values[d as usize].clone()).collect();
            tables.insert(name.clone(), t);
            at += w;
        }
        Some(Model { vocab: self.vocab.clone(), domain: self.domain, tables })
    }
}

/// All models of `vocab` over domain size `m` with values in the finite
/// carrier of `alg`, refusing to start if there are more than `cap`.
pub fn enumerate_models(alg: &Algebra, vocab: &Vocabulary, m: usize, cap: u128) -> Result<ModelEnumerator> {
    if m == 0 {
        return Err(Error::Invalid("the domain must be nonempty".into()));
    }
    let values = alg.enumerate_carrier()?;
    let total = model_count(values.len(), vocab, m).unwrap_or(u128::MAX);
    if total > cap {
        return Err(Error::SizeGuard { what: "model enumeration", needed: total, limit: cap });
    }
    let widths: Vec<usize> = vocab.predicates().iter().map(|(_, a)| m.pow(*a as u32)).collect();
    let len = widths.iter().sum();
    Ok(ModelEnumerator {
        vocab: vocab.clone(),
        domain: m,
        odo: Odometer::new(len, values.len()),
        values,
        widths,
        total,
    })
}

/// All valuations of `props` on `frame` over a finite carrier, in the same
/// order convention as [`enumerate_models`].
pub fn enumerate_modal_models(alg: &Algebra, frame: &Frame, props: &[String], cap: u128) -> Result<Vec<ModalModel>> {
    let values = alg.enumerate_carrier()?;
    let len = props.len() * frame.worlds;
    let total = (values.len() as u128).checked_pow(len as u32).unwrap_or(u128::MAX);
    if total > cap {
        return Err(Error::SizeGuard { what: "valuation enumeration", needed: total, limit: cap });
    }
    let mut odo = Odometer::new(len, values.len());
    let mut out = Vec::new();
    while let Some(d) = odo.advance() {
        let valuation = props
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let vals =
                    d[i * frame.worlds..(i + 1) * frame.worlds].iter().map(|&k| values[k as usize].clone()).collect();
                (p.clone(), vals)
            })
            .collect();
        out.push(ModalModel { frame: frame.clone(), valuation });
    }
    Ok(out)
}
