//! Deciding entailment by building the canonical derivation: close the
//! components under subformulas, extend and filter every premise, intersect,
//! move the goal components to the front, project, and weaken to the goal if
//! the result fits inside it. Otherwise a tuple outside the goal set is turned
//! into a countermodel.

use std::collections::BTreeMap;

use super::{extend, good, intersect, permute, project, weaken, Derivation, Justification};
use crate::algebra::{Algebra, TruthValue};
use crate::error::{Error, Result};
use crate::infoset::{CoordLayout, InfoSet, Limits, Setting};
use crate::md::MdSentence;
use crate::semantics::{
    grid_index, grid_point, satisfies, satisfies_modal, tuple_of, tuple_of_modal, Frame, ModalModel, Model,
};
use crate::syntax::{subformula_closure, Component, Formula, Vocabulary};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Structure {
    FirstOrder(Model),
    Modal(ModalModel),
}

/// A structure satisfying every premise but not the goal, with the goal
/// components' values in it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Countermodel {
    pub structure: Structure,
    pub violated_at: Vec<TruthValue>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid(Derivation),
    Invalid(Countermodel),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid(_))
    }
}

fn check_inputs(premises: &[MdSentence], goal: &MdSentence) -> Result<()> {
    for p in premises {
        if p.algebra() != goal.algebra() {
            return Err(Error::Invalid(format!("premise uses {}, goal uses {}", p.algebra(), goal.algebra())));
        }
        if p.layout().setting() != goal.layout().setting() {
            return Err(Error::Layout(format!(
                "premise over {} but goal over {}",
                p.layout().describe(),
                goal.layout().describe()
            )));
        }
    }
    Ok(())
}

/// The predicates of `formulas` with the arities they are used at.
pub fn vocabulary_of<'a>(formulas: impl IntoIterator<Item = &'a Formula>) -> Result<Vocabulary> {
    fn walk(f: &Formula, v: &mut Vocabulary) -> Result<()> {
        match f {
            Formula::Atom(p, args) => match v.arity(p) {
                Some(a) if a != args.len() => {
                    return Err(Error::Arity { what: format!("predicate {p}"), expected: a, found: args.len() })
                }
                Some(_) => {}
                None => v.add(p.clone(), args.len())?,
            },
            Formula::Eq(..) => v.set_equality(true),
            _ => {}
        }
        f.children().into_iter().try_for_each(|c| walk(c, v))
    }
    let mut v = Vocabulary::new();
    for f in formulas {
        walk(f, &mut v)?;
    }
    Ok(v)
}

fn layout_for(goal: &MdSentence, comps: &[Component]) -> Result<CoordLayout> {
    CoordLayout::with_arities(goal.layout().setting().clone(), comps.iter().map(|c| c.arity()).collect())
}

struct Canonical {
    derivation: Derivation,
    /// Index of the step holding every closure component, goal components first.
    full_step: usize,
    /// Index of the projection onto the goal components.
    projected: usize,
}

fn canonical(premises: &[MdSentence], goal: &MdSentence, limits: &Limits) -> Result<Canonical> {
    let mut inputs: Vec<Component> = Vec::new();
    for p in premises {
        inputs.extend_from_slice(p.components());
    }
    inputs.extend_from_slice(goal.components());
    let closure = subformula_closure(&inputs);
    let alg = *goal.algebra();

    let mut d = Derivation::new();
    let mut filtered: Vec<usize> = Vec::new();
    if premises.is_empty() {
        let ax = MdSentence::axiom(closure.clone(), layout_for(goal, &closure)?, alg)?;
        let a = d.push(ax.clone(), Justification::Axiom);
        d.push(good(&ax, limits)?, Justification::Good { from: a });
        filtered.push(d.len() - 1);
    }
    for (i, p) in premises.iter().enumerate() {
        let mut at = d.push(p.clone(), Justification::Premise(i));
        let mut cur = p.clone();
        let added: Vec<Component> = closure.iter().filter(|c| !p.components().contains(c)).cloned().collect();
        if !added.is_empty() {
            cur = extend(&cur, &added)?;
            at = d.push(cur.clone(), Justification::Extend { from: at, added });
        }
        cur = good(&cur, limits)?;
        at = d.push(cur.clone(), Justification::Good { from: at });
        let perm: Vec<usize> = closure
            .iter()
            .map(|c| cur.components().iter().position(|x| x == c).expect("closure component present"))
            .collect();
        if perm.iter().enumerate().any(|(j, &p)| j != p) {
            cur = permute(&cur, &perm)?;
            at = d.push(cur, Justification::Permute { from: at, perm });
        }
        filtered.push(at);
    }
    let mut acc = filtered[0];
    for &next in &filtered[1..] {
        let md = intersect(&d.steps[acc].md, &d.steps[next].md, limits)?;
        acc = d.push(md, Justification::Intersect { left: acc, right: next });
    }

    let k = goal.len();
    let mut perm: Vec<usize> = goal
        .components()
        .iter()
        .map(|c| closure.iter().position(|x| x == c).expect("goal component in closure"))
        .collect();
    let rest: Vec<usize> = (0..closure.len()).filter(|j| !perm.contains(j)).collect();
    perm.extend(rest);
    if perm.iter().enumerate().any(|(j, &p)| j != p) {
        let md = permute(&d.steps[acc].md, &perm)?;
        acc = d.push(md, Justification::Permute { from: acc, perm });
    }
    let full_step = acc;
    let drop = closure.len() - k;
    if drop > 0 {
        let md = project(&d.steps[acc].md, drop)?;
        acc = d.push(md, Justification::Project { from: acc, drop });
    }
    Ok(Canonical { derivation: d, full_step, projected: acc })
}

fn decide(premises: &[MdSentence], goal: &MdSentence, limits: &Limits) -> Result<(Canonical, Option<Vec<TruthValue>>)> {
    check_inputs(premises, goal)?;
    let mut c = canonical(premises, goal, limits)?;
    let t = c.derivation.steps[c.projected].md.clone();
    match t.set().witness_outside(goal.set(), limits)? {
        None => {
            let md = weaken(&t, goal, limits)?;
            c.derivation.push(md, Justification::Weaken { from: c.projected });
            Ok((c, None))
        }
        Some(_) => {
            let full = &c.derivation.steps[c.full_step].md;
            let rest: Vec<usize> = full.components()[goal.len()..].iter().map(|x| x.arity()).collect();
            let wide = goal.set().cylindrify(&rest)?;
            let w = full
                .set()
                .witness_outside(&wide, limits)?
                .ok_or_else(|| Error::Internal("projection and full set disagree".into()))?;
            Ok((c, Some(w)))
        }
    }
}

/// Entailment over the common finite domain of `premises` and `goal`.
pub fn entail(premises: &[MdSentence], goal: &MdSentence, limits: &Limits) -> Result<Verdict> {
    let Setting::FirstOrder { domain } = goal.layout().setting() else {
        return Err(Error::Invalid("first-order entailment needs a domain, not a frame".into()));
    };
    let domain = *domain;
    let (c, witness) = decide(premises, goal, limits)?;
    let Some(w) = witness else {
        return Ok(Verdict::Valid(c.derivation));
    };
    let full = &c.derivation.steps[c.full_step].md;
    let model = realize(full.algebra(), domain, full.components(), &w)?;
    let alg = goal.algebra();
    for p in premises {
        if !satisfies(alg, &model, p)? {
            return Err(Error::Internal(format!("extracted model fails premise {p}")));
        }
    }
    if satisfies(alg, &model, goal)? {
        return Err(Error::Internal("extracted model satisfies the goal".into()));
    }
    let violated_at = tuple_of(alg, &model, goal.components())?;
    Ok(Verdict::Invalid(Countermodel { structure: Structure::FirstOrder(model), violated_at }))
}

/// Entailment over the common frame of `premises` and `goal`.
pub fn entail_modal(premises: &[MdSentence], goal: &MdSentence, limits: &Limits) -> Result<Verdict> {
    let Setting::Modal(frame) = goal.layout().setting() else {
        return Err(Error::Invalid("modal entailment needs a frame".into()));
    };
    let frame = frame.clone();
    let (c, witness) = decide(premises, goal, limits)?;
    let Some(w) = witness else {
        return Ok(Verdict::Valid(c.derivation));
    };
    let full = &c.derivation.steps[c.full_step].md;
    let mm = realize_modal(full.algebra(), &frame, full.components(), &w)?;
    let alg = goal.algebra();
    for p in premises {
        if !satisfies_modal(alg, &mm, p)? {
            return Err(Error::Internal(format!("extracted model fails premise {p}")));
        }
    }
    if satisfies_modal(alg, &mm, goal)? {
        return Err(Error::Internal("extracted model satisfies the goal".into()));
    }
    let violated_at = tuple_of_modal(alg, &mm, goal.components())?;
    Ok(Verdict::Invalid(Countermodel { structure: Structure::Modal(mm), violated_at }))
}

/// A structure satisfying `md`, if there is one. Decided as the failure of
/// `md` to entail the same components with the empty set.
pub fn satisfy(md: &MdSentence, limits: &Limits) -> Result<Option<Structure>> {
    let none = MdSentence::new(md.components().to_vec(), InfoSet::empty(md.layout().clone(), *md.algebra()))?;
    let v = match md.layout().setting() {
        Setting::FirstOrder { .. } => entail(std::slice::from_ref(md), &none, limits)?,
        Setting::Modal(_) => entail_modal(std::slice::from_ref(md), &none, limits)?,
    };
    Ok(match v {
        Verdict::Valid(_) => None,
        Verdict::Invalid(c) => Some(c.structure),
    })
}

/// Reads predicate tables off the atomic components of a good tuple over a
/// subformula-closed list. Entries no atom mentions are 0. The model is
/// checked to reproduce the whole tuple.
pub fn realize(alg: &Algebra, domain: usize, comps: &[Component], tuple: &[TruthValue]) -> Result<Model> {
    let vocab = vocabulary_of(comps.iter().map(|c| c.formula()))?;
    let mut tables: BTreeMap<String, Vec<TruthValue>> =
        vocab.predicates().iter().map(|(n, a)| (n.clone(), vec![TruthValue::zero(); domain.pow(*a as u32)])).collect();
    let mut offset = 0;
    for c in comps {
        let width = domain.pow(c.arity() as u32);
        if let Formula::Atom(p, args) = c.formula() {
            for idx in 0..width {
                let point = grid_point(domain, c.arity(), idx);
                let at: Vec<usize> = args
                    .iter()
                    .map(|a| point[c.vars().iter().position(|v| v == a).expect("argument is free")])
                    .collect();
                tables.get_mut(p).expect("declared")[grid_index(domain, &at)] = tuple[offset + idx].clone();
            }
        }
        offset += width;
    }
    let model = Model::new(vocab, domain, tables)?;
    if tuple_of(alg, &model, comps)? != tuple {
        return Err(Error::Internal("tuple is not realized by its atomic part".into()));
    }
    Ok(model)
}

pub fn realize_modal(alg: &Algebra, frame: &Frame, comps: &[Component], tuple: &[TruthValue]) -> Result<ModalModel> {
    let n = frame.worlds();
    let mut valuation = BTreeMap::new();
    for (i, c) in comps.iter().enumerate() {
        if let Formula::Atom(p, _) = c.formula() {
            valuation.insert(p.clone(), tuple[i * n..(i + 1) * n].to_vec());
        }
    }
    let mm = ModalModel::new(frame.clone(), valuation)?;
    if tuple_of_modal(alg, &mm, comps)? != tuple {
        return Err(Error::Internal("tuple is not realized by its atomic part".into()));
    }
    Ok(mm)
}
