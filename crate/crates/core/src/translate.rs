//! Translation of finitely-valued first-order logic into classical logic.
//!
//! Each predicate `P` and value `a` gets a classical predicate `P_a` of the
//! same arity (`P_1_2` for the value 1/2). `T^a(φ)` holds in the starred
//! model exactly when `φ` takes value `a` in the original one.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{Algebra, Connective, TruthValue};
use crate::error::{Error, Result};
use crate::infoset::Body;
use crate::md::MdSentence;
use crate::semantics::{grid_point, Model};
use crate::syntax::{Formula, Var, Vocabulary};

fn value_tag(a: &TruthValue) -> String {
    a.to_string().replace('/', "_")
}

fn falsum() -> Formula {
    Formula::Const(TruthValue::zero())
}

fn verum() -> Formula {
    Formula::Const(TruthValue::one())
}

/// Disjunction without repeated disjuncts; empty means falsum.
fn disjunction(items: Vec<Formula>) -> Formula {
    let mut seen = BTreeSet::new();
    let kept: Vec<Formula> = items.into_iter().filter(|f| seen.insert(f.clone())).collect();
    kept.into_iter().reduce(Formula::join).unwrap_or_else(falsum)
}

fn conjunction(items: Vec<Formula>) -> Formula {
    items.into_iter().reduce(Formula::meet).unwrap_or_else(verum)
}

/// The starred predicates of a vocabulary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarVocabulary {
    values: Vec<TruthValue>,
    names: BTreeMap<(String, TruthValue), String>,
    vocab: Vocabulary,
}

impl StarVocabulary {
    pub fn new(alg: &Algebra, source: &Vocabulary) -> Result<Self> {
        let values = alg.enumerate_carrier()?;
        let mut names = BTreeMap::new();
        let mut vocab = Vocabulary::new();
        vocab.set_equality(source.has_equality());
        for (p, arity) in source.predicates() {
            for a in &values {
                let name = format!("{p}_{}", value_tag(a));
                if vocab.arity(&name).is_some() {
                    return Err(Error::Invalid(format!("starred predicate name `{name}` is ambiguous")));
                }
                vocab.add(name.clone(), *arity)?;
                names.insert((p.clone(), a.clone()), name);
            }
        }
        Ok(StarVocabulary { values, names, vocab })
    }

    pub fn name(&self, pred: &str, a: &TruthValue) -> Result<&str> {
        self.names
            .get(&(pred.to_string(), a.clone()))
            .map(|s| s.as_str())
            .ok_or_else(|| Error::UnknownPredicate(pred.to_string()))
    }

    /// The classical vocabulary of starred predicates.
    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn values(&self) -> &[TruthValue] {
        &self.values
    }
}

fn fresh_var(f: &Formula, avoid: &Var) -> Var {
    let used = f.all_vars();
    let mut k = 0;
    loop {
        let v = Var::new(if k == 0 { "y".to_string() } else { format!("y{k}") });
        if !used.contains(&v) && v != *avoid {
            return v;
        }
        k += 1;
    }
}

struct Translator<'a> {
    alg: &'a Algebra,
    star: StarVocabulary,
}

impl Translator<'_> {
    fn t(&self, a: &TruthValue, f: &Formula) -> Result<Formula> {
        Ok(match f {
            Formula::Atom(p, args) => Formula::Atom(self.star.name(p, a)?.to_string(), args.clone()),
            Formula::Const(r) => {
                if r == a {
                    verum()
                } else {
                    falsum()
                }
            }
            Formula::Eq(x, y) => {
                let eq = Formula::Eq(x.clone(), y.clone());
                if a.is_one() {
                    eq
                } else if a.is_zero() {
                    Formula::not(eq)
                } else {
                    falsum()
                }
            }
            Formula::Conn(c, l, r) => self.connective(*c, a, l, r)?,
            Formula::Exists(x, body) => self.quantifier(a, x, body, true)?,
            Formula::Forall(x, body) => self.quantifier(a, x, body, false)?,
            Formula::Necessity(_) | Formula::Possibility(_) => {
                return Err(Error::Unsupported("modal operators have no classical translation here".into()))
            }
        })
    }

    /// Values a subformula may take: all of the carrier, or just `r` for a
    /// truth constant (whose translation is then trivially true).
    fn choices(&self, f: &Formula) -> Vec<TruthValue> {
        match f {
            Formula::Const(r) => vec![r.clone()],
            _ => self.star.values.clone(),
        }
    }

    fn connective(&self, c: Connective, a: &TruthValue, l: &Formula, r: &Formula) -> Result<Formula> {
        let mut out = Vec::new();
        for b1 in self.choices(l) {
            for b2 in self.choices(r) {
                if self.alg.op(c, &b1, &b2) != *a {
                    continue;
                }
                let mut parts = Vec::new();
                if !matches!(l, Formula::Const(_)) {
                    parts.push(self.t(&b1, l)?);
                }
                if !matches!(r, Formula::Const(_)) {
                    parts.push(self.t(&b2, r)?);
                }
                out.push(conjunction(parts));
            }
        }
        Ok(disjunction(out))
    }

    /// Branches over value sets `B` with `max B = a` (or `min B = a`), each
    /// asking that every value in `B` is attained, and a guard keeping all
    /// values on the right side of `a`. Branches whose value set contains
    /// another branch's set are absorbed by it.
    fn quantifier(&self, a: &TruthValue, x: &Var, body: &Formula, exists: bool) -> Result<Formula> {
        let vals = &self.star.values;
        let n = vals.len();
        if n > 20 {
            return Err(Error::SizeGuard { what: "quantifier value sets", needed: 1u128 << n, limit: 1 << 20 });
        }
        let mut sets: Vec<Vec<usize>> = Vec::new();
        for mask in 1u64..(1u64 << n) {
            let set: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let extreme = if exists { set.last() } else { set.first() };
            if extreme.map(|&i| &vals[i]) == Some(a) {
                sets.push(set);
            }
        }
        let minimal: Vec<&Vec<usize>> = sets
            .iter()
            .filter(|s| !sets.iter().any(|t| t.len() < s.len() && t.iter().all(|i| s.contains(i))))
            .collect();
        let mut branches = Vec::new();
        for set in minimal {
            let mut parts = Vec::new();
            for &i in set {
                parts.push(Formula::Exists(x.clone(), Box::new(self.t(&vals[i], body)?)));
            }
            branches.push(conjunction(parts));
        }
        let y = fresh_var(body, x);
        let renamed = body.rename_free(x, &y);
        let mut guard = Vec::new();
        for b in vals {
            if (exists && b <= a) || (!exists && b >= a) {
                guard.push(self.t(b, &renamed)?);
            }
        }
        Ok(Formula::meet(disjunction(branches), Formula::Forall(y, Box::new(disjunction(guard)))))
    }
}

/// `T^a(f)`: classical, over the starred vocabulary of `vocab`.
pub fn translate(alg: &Algebra, vocab: &Vocabulary, a: &TruthValue, f: &Formula) -> Result<Formula> {
    alg.check_member(a)?;
    let star = StarVocabulary::new(alg, vocab)?;
    Translator { alg, star }.t(a, f)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomKind {
    /// Every tuple has some value.
    Totality { pred: String },
    /// No tuple has two values.
    Disjointness { pred: String, a: TruthValue, b: TruthValue },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaAxiom {
    pub kind: AxiomKind,
    pub formula: Formula,
}

fn tuple_vars(arity: usize) -> Vec<Var> {
    (1..=arity).map(|i| Var::new(format!("x{i}"))).collect()
}

fn close(vars: &[Var], f: Formula) -> Formula {
    vars.iter().rev().fold(f, |acc, v| Formula::Forall(v.clone(), Box::new(acc)))
}

/// The classical theory whose models are exactly the starred models.
pub fn sigma(alg: &Algebra, vocab: &Vocabulary) -> Result<Vec<SigmaAxiom>> {
    let star = StarVocabulary::new(alg, vocab)?;
    let vals = star.values();
    let mut out = Vec::new();
    for (p, arity) in vocab.predicates() {
        let vars = tuple_vars(*arity);
        let atom =
            |a: &TruthValue| -> Result<Formula> { Ok(Formula::Atom(star.name(p, a)?.to_string(), vars.clone())) };
        let some = disjunction(vals.iter().map(atom).collect::<Result<Vec<_>>>()?);
        out.push(SigmaAxiom { kind: AxiomKind::Totality { pred: p.clone() }, formula: close(&vars, some) });
        for (i, a) in vals.iter().enumerate() {
            for b in &vals[i + 1..] {
                let both = Formula::not(Formula::meet(atom(a)?, atom(b)?));
                out.push(SigmaAxiom {
                    kind: AxiomKind::Disjointness { pred: p.clone(), a: a.clone(), b: b.clone() },
                    formula: close(&vars, both),
                });
            }
        }
    }
    Ok(out)
}

/// The classical model where `P_a` holds of the tuples `P` maps to `a`.
pub fn star_model(alg: &Algebra, m: &Model) -> Result<Model> {
    m.check_carrier(alg)?;
    let star = StarVocabulary::new(alg, m.vocabulary())?;
    let mut tables = BTreeMap::new();
    for (p, table) in m.tables() {
        for a in star.values() {
            let t = table.iter().map(|v| if v == a { TruthValue::one() } else { TruthValue::zero() }).collect();
            tables.insert(star.name(p, a)?.to_string(), t);
        }
    }
    Model::new(star.vocabulary().clone(), m.domain(), tables)
}

/// Inverse of [`star_model`] on models of the theory from [`sigma`].
pub fn unstar_model(alg: &Algebra, vocab: &Vocabulary, classical: &Model) -> Result<Model> {
    let star = StarVocabulary::new(alg, vocab)?;
    let m = classical.domain();
    let mut tables = BTreeMap::new();
    for (p, arity) in vocab.predicates() {
        let width = m.pow(*arity as u32);
        let mut table = Vec::with_capacity(width);
        for idx in 0..width {
            let mut held: Option<&TruthValue> = None;
            for a in star.values() {
                let entry = &classical.table(star.name(p, a)?)?[idx];
                if entry.is_one() {
                    if let Some(b) = held {
                        return Err(Error::SigmaViolation {
                            axiom: format!("disjointness of {} and {}", star.name(p, b)?, star.name(p, a)?),
                            tuple: grid_point(m, *arity, idx),
                        });
                    }
                    held = Some(a);
                } else if !entry.is_zero() {
                    return Err(Error::Invalid(format!("{} is not classical", star.name(p, a)?)));
                }
            }
            match held {
                Some(a) => table.push(a.clone()),
                None => {
                    return Err(Error::SigmaViolation {
                        axiom: format!("totality of {p}"),
                        tuple: grid_point(m, *arity, idx),
                    })
                }
            }
        }
        tables.insert(p.clone(), table);
    }
    Model::new(vocab.clone(), m, tables)
}

/// `⋁_{s ∈ S} ⋀_i T^{s_i}(φ_i)` for a sentence-only MD-sentence with a
/// finite set.
pub fn md_translate(alg: &Algebra, vocab: &Vocabulary, md: &MdSentence) -> Result<Formula> {
    if !md.is_sentential() {
        return Err(Error::Invalid("translation needs sentence components".into()));
    }
    let points = match md.set().body() {
        Body::Explicit(e) => e.points().collect::<Vec<_>>(),
        _ => return Err(Error::Unsupported("translation needs an explicit set".into())),
    };
    let star = StarVocabulary::new(alg, vocab)?;
    let tr = Translator { alg, star };
    let mut out = Vec::new();
    for p in points {
        let parts = md.formulas().zip(&p).map(|(f, a)| tr.t(a, f)).collect::<Result<Vec<_>>>()?;
        out.push(conjunction(parts));
    }
    Ok(disjunction(out))
}
