//! Formulas, components and vocabularies, with a text parser and printer.

pub(crate) mod lexer;
mod parser;
mod printer;

use std::collections::BTreeSet;
use std::fmt;

use crate::algebra::{Connective, TruthValue};
use crate::error::{Error, Result};

pub(crate) use parser::FormulaParser;
pub use parser::{parse_component, parse_formula, parse_formula_open};

/// An individual variable.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub String);

impl Var {
    pub fn new(s: impl Into<String>) -> Self {
        Var(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var(s.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    FirstOrder,
    Modal,
}

/// Relational vocabulary. In modal mode every predicate is a propositional
/// variable (arity 0).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Vocabulary {
    preds: Vec<(String, usize)>,
    equality: bool,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_equality(mut self) -> Self {
        self.equality = true;
        self
    }

    pub fn set_equality(&mut self, on: bool) {
        self.equality = on;
    }

    pub fn has_equality(&self) -> bool {
        self.equality
    }

    pub fn add(&mut self, name: impl Into<String>, arity: usize) -> Result<()> {
        let name = name.into();
        if ["forall", "exists", "box", "dia", "c"].contains(&name.as_str()) {
            return Err(Error::Invalid(format!("`{name}` is a reserved word")));
        }
        match self.arity(&name) {
            Some(a) if a == arity => Ok(()),
            Some(a) => Err(Error::Invalid(format!("predicate `{name}` declared with arity {a} and {arity}"))),
            None => {
                self.preds.push((name, arity));
                Ok(())
            }
        }
    }

    pub fn pred(mut self, name: &str, arity: usize) -> Self {
        self.add(name, arity).expect("valid predicate declaration");
        self
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.preds.iter().find(|(n, _)| n == name).map(|(_, a)| *a)
    }

    pub fn predicates(&self) -> &[(String, usize)] {
        &self.preds
    }

    pub fn is_empty(&self) -> bool {
        self.preds.is_empty()
    }

    /// The sub-vocabulary of predicates occurring in `formulas`, in declaration order.
    pub fn restrict_to<'a>(&self, formulas: impl IntoIterator<Item = &'a Formula>) -> Vocabulary {
        let mut used = BTreeSet::new();
        for f in formulas {
            f.collect_predicates(&mut used);
        }
        Vocabulary {
            preds: self.preds.iter().filter(|(n, _)| used.contains(n.as_str())).cloned().collect(),
            equality: self.equality,
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(String, Vec<Var>),
    Eq(Var, Var),
    Const(TruthValue),
    Conn(Connective, Box<Formula>, Box<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
    Necessity(Box<Formula>),
    Possibility(Box<Formula>),
}

impl Formula {
    pub fn atom(pred: &str, args: &[&str]) -> Formula {
        Formula::Atom(pred.to_string(), args.iter().map(|a| Var::from(*a)).collect())
    }

    pub fn prop(name: &str) -> Formula {
        Formula::Atom(name.to_string(), Vec::new())
    }

    pub fn constant(v: TruthValue) -> Formula {
        Formula::Const(v)
    }

    pub fn conn(c: Connective, a: Formula, b: Formula) -> Formula {
        Formula::Conn(c, Box::new(a), Box::new(b))
    }

    pub fn meet(a: Formula, b: Formula) -> Formula {
        Self::conn(Connective::Meet, a, b)
    }

    pub fn join(a: Formula, b: Formula) -> Formula {
        Self::conn(Connective::Join, a, b)
    }

    pub fn strong(a: Formula, b: Formula) -> Formula {
        Self::conn(Connective::Strong, a, b)
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Self::conn(Connective::Implies, a, b)
    }

    /// `¬φ := φ → 0̄`
    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Self::implies(a, Formula::Const(TruthValue::zero()))
    }

    pub fn forall(v: &str, body: Formula) -> Formula {
        Formula::Forall(Var::from(v), Box::new(body))
    }

    pub fn exists(v: &str, body: Formula) -> Formula {
        Formula::Exists(Var::from(v), Box::new(body))
    }

    pub fn nec(body: Formula) -> Formula {
        Formula::Necessity(Box::new(body))
    }

    pub fn pos(body: Formula) -> Formula {
        Formula::Possibility(Box::new(body))
    }

    /// Negated formula if this is `φ → 0̄`.
    pub fn as_negation(&self) -> Option<&Formula> {
        match self {
            Formula::Conn(Connective::Implies, a, b) if matches!(&**b, Formula::Const(z) if z.is_zero()) => Some(a),
            _ => None,
        }
    }

    /// Immediate subformulas, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(..) | Formula::Eq(..) | Formula::Const(_) => vec![],
            Formula::Conn(_, a, b) => vec![a, b],
            Formula::Forall(_, b) | Formula::Exists(_, b) | Formula::Necessity(b) | Formula::Possibility(b) => vec![b],
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Atom(..) | Formula::Eq(..) | Formula::Const(_))
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    /// Free variables in order of first occurrence.
    pub fn free_vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.free_vars_into(&mut Vec::new(), &mut out);
        out
    }

    fn free_vars_into(&self, bound: &mut Vec<Var>, out: &mut Vec<Var>) {
        let mut push = |v: &Var, bound: &Vec<Var>| {
            if !bound.contains(v) && !out.contains(v) {
                out.push(v.clone());
            }
        };
        match self {
            Formula::Atom(_, args) => args.iter().for_each(|v| push(v, bound)),
            Formula::Eq(x, y) => {
                push(x, bound);
                push(y, bound);
            }
            Formula::Const(_) => {}
            Formula::Conn(_, a, b) => {
                a.free_vars_into(bound, out);
                b.free_vars_into(bound, out);
            }
            Formula::Forall(v, b) | Formula::Exists(v, b) => {
                bound.push(v.clone());
                b.free_vars_into(bound, out);
                bound.pop();
            }
            Formula::Necessity(b) | Formula::Possibility(b) => b.free_vars_into(bound, out),
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub(crate) fn collect_predicates<'a>(&'a self, acc: &mut BTreeSet<&'a str>) {
        if let Formula::Atom(p, _) = self {
            acc.insert(p);
        }
        for c in self.children() {
            c.collect_predicates(acc);
        }
    }

    pub fn uses_equality(&self) -> bool {
        matches!(self, Formula::Eq(..)) || self.children().iter().any(|c| c.uses_equality())
    }

    /// Checks arities against `vocab` and the operators allowed in `mode`.
    pub fn check(&self, vocab: &Vocabulary, mode: Mode) -> Result<()> {
        match self {
            Formula::Atom(p, args) => match vocab.arity(p) {
                None => Err(Error::UnknownPredicate(p.clone())),
                Some(a) if a != args.len() => {
                    Err(Error::Arity { what: format!("predicate {p}"), expected: a, found: args.len() })
                }
                Some(_) if mode == Mode::Modal && !args.is_empty() => {
                    Err(Error::IllFormed(format!("modal formulas use propositional variables only, found {self}")))
                }
                Some(_) => Ok(()),
            },
            Formula::Eq(..) if mode == Mode::Modal => Err(Error::IllFormed("equality in a modal formula".into())),
            Formula::Eq(..) if !vocab.has_equality() => {
                Err(Error::IllFormed("equality is not enabled for this vocabulary".into()))
            }
            Formula::Eq(..) | Formula::Const(_) => Ok(()),
            Formula::Conn(_, a, b) => {
                a.check(vocab, mode)?;
                b.check(vocab, mode)
            }
            Formula::Forall(_, b) | Formula::Exists(_, b) => {
                if mode == Mode::Modal {
                    return Err(Error::IllFormed("quantifier in a modal formula".into()));
                }
                b.check(vocab, mode)
            }
            Formula::Necessity(b) | Formula::Possibility(b) => {
                if mode == Mode::FirstOrder {
                    return Err(Error::IllFormed("modality in a first-order formula".into()));
                }
                b.check(vocab, mode)
            }
        }
    }

    /// Replaces free occurrences of `from` by `to`; `to` must not be bound in `self`.
    pub fn rename_free(&self, from: &Var, to: &Var) -> Formula {
        let r = |v: &Var| if v == from { to.clone() } else { v.clone() };
        match self {
            Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(r).collect()),
            Formula::Eq(x, y) => Formula::Eq(r(x), r(y)),
            Formula::Const(_) => self.clone(),
            Formula::Conn(c, a, b) => {
                Formula::Conn(*c, Box::new(a.rename_free(from, to)), Box::new(b.rename_free(from, to)))
            }
            Formula::Forall(v, _) | Formula::Exists(v, _) if v == from => self.clone(),
            Formula::Forall(v, b) => Formula::Forall(v.clone(), Box::new(b.rename_free(from, to))),
            Formula::Exists(v, b) => Formula::Exists(v.clone(), Box::new(b.rename_free(from, to))),
            Formula::Necessity(b) => Formula::Necessity(Box::new(b.rename_free(from, to))),
            Formula::Possibility(b) => Formula::Possibility(Box::new(b.rename_free(from, to))),
        }
    }

    /// Every variable name occurring in the formula, bound or free.
    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut acc = BTreeSet::new();
        self.all_vars_into(&mut acc);
        acc
    }

    fn all_vars_into(&self, acc: &mut BTreeSet<Var>) {
        match self {
            Formula::Atom(_, args) => acc.extend(args.iter().cloned()),
            Formula::Eq(x, y) => {
                acc.insert(x.clone());
                acc.insert(y.clone());
            }
            Formula::Forall(v, _) | Formula::Exists(v, _) => {
                acc.insert(v.clone());
            }
            _ => {}
        }
        for c in self.children() {
            c.all_vars_into(acc);
        }
    }
}

/// A formula paired with the ordered list of its free variables. The list is
/// a permutation of the formula's free variables.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Component {
    formula: Formula,
    vars: Vec<Var>,
}

impl Component {
    pub fn new(formula: Formula) -> Self {
        let vars = formula.free_vars();
        Component { formula, vars }
    }

    pub fn with_vars(formula: Formula, vars: Vec<Var>) -> Result<Self> {
        let free: BTreeSet<_> = formula.free_vars().into_iter().collect();
        let listed: BTreeSet<_> = vars.iter().cloned().collect();
        if listed.len() != vars.len() || listed != free {
            return Err(Error::IllFormed(format!(
                "variable list {vars:?} is not a permutation of the free variables of {formula}"
            )));
        }
        Ok(Component { formula, vars })
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    /// Whether the variable list differs from first-occurrence order.
    pub fn has_custom_order(&self) -> bool {
        self.vars != self.formula.free_vars()
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.formula)?;
        if self.has_custom_order() {
            let vs: Vec<_> = self.vars.iter().map(|v| v.as_str()).collect();
            write!(f, " @ [{}]", vs.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Duplicate-free list containing the inputs (first, in order) followed by
/// every strict subformula, each paired with its own free-variable list.
pub fn subformula_closure(comps: &[Component]) -> Vec<Component> {
    let mut out: Vec<Component> = Vec::new();
    for c in comps {
        if !out.contains(c) {
            out.push(c.clone());
        }
    }
    fn walk(f: &Formula, out: &mut Vec<Component>) {
        for child in f.children() {
            let c = Component::new(child.clone());
            if !out.contains(&c) {
                out.push(c);
            }
            walk(child, out);
        }
    }
    for c in comps {
        walk(c.formula(), &mut out);
    }
    out
}

/// Whether every strict subformula of every component appears (with its
/// default variable order) in the list.
pub fn is_subformula_closed(comps: &[Component]) -> bool {
    comps.iter().all(|c| c.formula().children().into_iter().all(|ch| comps.iter().any(|d| d.formula() == ch)))
}
