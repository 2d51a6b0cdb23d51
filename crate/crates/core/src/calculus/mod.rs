//! The proof calculus: rule applications, derivations and their checker,
//! and the entailment procedure over a fixed finite domain or frame.

mod entail;
mod sweep;
#[cfg(test)]
mod tests;

use std::fmt;

pub use entail::{
    entail, entail_modal, realize, realize_modal, satisfy, vocabulary_of, Countermodel, Structure, Verdict,
};
pub use sweep::{at_domain, sweep, SweepReport};

use crate::error::{Error, Result};
use crate::infoset::{InfoSet, Limits};
use crate::md::MdSentence;
use crate::syntax::Component;

/// How a step follows. Indices point at earlier steps (or premises), from 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Justification {
    /// The full set over the step's components.
    Axiom,
    Premise(usize),
    /// New component `i` is component `perm[i]` of the source.
    Permute {
        from: usize,
        perm: Vec<usize>,
    },
    /// Appends the given components with unconstrained values.
    Extend {
        from: usize,
        added: Vec<Component>,
    },
    Intersect {
        left: usize,
        right: usize,
    },
    /// Drops the last `drop` components.
    Project {
        from: usize,
        drop: usize,
    },
    /// The step's own set must contain the source set.
    Weaken {
        from: usize,
    },
    /// Keeps the good tuples.
    Good {
        from: usize,
    },
}

impl Justification {
    /// Rule number in the calculus.
    pub fn rule(&self) -> u8 {
        match self {
            Justification::Axiom => 1,
            Justification::Premise(_) => 0,
            Justification::Permute { .. } => 2,
            Justification::Extend { .. } => 3,
            Justification::Intersect { .. } => 4,
            Justification::Project { .. } => 5,
            Justification::Weaken { .. } => 6,
            Justification::Good { .. } => 7,
        }
    }

    pub fn sources(&self) -> Vec<usize> {
        match self {
            Justification::Axiom | Justification::Premise(_) => vec![],
            Justification::Intersect { left, right } => vec![*left, *right],
            Justification::Permute { from, .. }
            | Justification::Extend { from, .. }
            | Justification::Project { from, .. }
            | Justification::Weaken { from }
            | Justification::Good { from } => vec![*from],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub md: MdSentence,
    pub by: Justification,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Derivation {
    pub steps: Vec<Step>,
}

impl Derivation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, md: MdSentence, by: Justification) -> usize {
        self.steps.push(Step { md, by });
        self.steps.len() - 1
    }

    pub fn conclusion(&self) -> Option<&MdSentence> {
        self.steps.last().map(|s| &s.md)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

fn same_context(a: &MdSentence, b: &MdSentence) -> Result<()> {
    if a.layout().setting() != b.layout().setting() {
        return Err(Error::Rule("sentences live over different domains".into()));
    }
    if a.algebra() != b.algebra() {
        return Err(Error::Rule(format!("sentences use {} and {}", a.algebra(), b.algebra())));
    }
    Ok(())
}

/// Rule 2.
pub fn permute(md: &MdSentence, perm: &[usize]) -> Result<MdSentence> {
    let set = md.set().permute(perm)?;
    let comps = perm.iter().map(|&i| md.components()[i].clone()).collect();
    MdSentence::new(comps, set)
}

/// Rule 3.
pub fn extend(md: &MdSentence, added: &[Component]) -> Result<MdSentence> {
    if added.is_empty() {
        return Err(Error::Rule("nothing to add".into()));
    }
    let set = md.set().cylindrify(&added.iter().map(|c| c.arity()).collect::<Vec<_>>())?;
    let mut comps = md.components().to_vec();
    comps.extend_from_slice(added);
    MdSentence::new(comps, set)
}

/// Rule 4.
pub fn intersect(a: &MdSentence, b: &MdSentence, limits: &Limits) -> Result<MdSentence> {
    same_context(a, b)?;
    if a.components() != b.components() {
        return Err(Error::Rule("component mismatch".into()));
    }
    MdSentence::new(a.components().to_vec(), a.set().intersect(b.set(), limits)?)
}

/// Rule 5.
pub fn project(md: &MdSentence, drop: usize) -> Result<MdSentence> {
    let k = md.len();
    if drop == 0 || drop >= k {
        return Err(Error::Rule(format!("cannot drop {drop} of {k} components")));
    }
    MdSentence::new(md.components()[..k - drop].to_vec(), md.set().project(k - drop)?)
}

/// Rule 6: checks that `target` weakens `md`.
pub fn weaken(md: &MdSentence, target: &MdSentence, limits: &Limits) -> Result<MdSentence> {
    same_context(md, target)?;
    if md.components() != target.components() {
        return Err(Error::Rule("component mismatch".into()));
    }
    if let Some(p) = md.set().witness_outside(target.set(), limits)? {
        let shown: Vec<String> = p.iter().map(|v| v.to_string()).collect();
        return Err(Error::Rule(format!("target set misses ({})", shown.join(", "))));
    }
    Ok(target.clone())
}

/// Rule 7.
pub fn good(md: &MdSentence, limits: &Limits) -> Result<MdSentence> {
    MdSentence::new(md.components().to_vec(), md.set().good_filter(md.components(), limits)?)
}

/// Axiom: checks that `target` has the full set.
pub fn axiom(target: &MdSentence, limits: &Limits) -> Result<MdSentence> {
    let full = InfoSet::full(target.layout().clone(), *target.algebra());
    if let Some(p) = full.witness_outside(target.set(), limits)? {
        let shown: Vec<String> = p.iter().map(|v| v.to_string()).collect();
        return Err(Error::Rule(format!("not an axiom: ({}) is missing", shown.join(", "))));
    }
    Ok(target.clone())
}

/// The sentence a justification yields from earlier steps. `claimed` is the
/// step as written; it supplies the target of the axiom, premise and
/// weakening cases.
pub fn apply(
    by: &Justification,
    earlier: &[MdSentence],
    premises: &[MdSentence],
    claimed: &MdSentence,
    limits: &Limits,
) -> Result<MdSentence> {
    let get = |i: usize| earlier.get(i).ok_or_else(|| Error::Rule(format!("step {} is not an earlier step", i + 1)));
    match by {
        Justification::Axiom => axiom(claimed, limits),
        Justification::Premise(i) => {
            premises.get(*i).cloned().ok_or_else(|| Error::Rule(format!("there is no premise {}", i + 1)))
        }
        Justification::Permute { from, perm } => permute(get(*from)?, perm),
        Justification::Extend { from, added } => extend(get(*from)?, added),
        Justification::Intersect { left, right } => intersect(get(*left)?, get(*right)?, limits),
        Justification::Project { from, drop } => project(get(*from)?, *drop),
        Justification::Weaken { from } => weaken(get(*from)?, claimed, limits),
        Justification::Good { from } => good(get(*from)?, limits),
    }
}

/// The first step that does not follow, with the reason.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepFailure {
    /// 0-based step index.
    pub step: usize,
    pub reason: String,
}

impl fmt::Display for StepFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {}: {}", self.step + 1, self.reason)
    }
}

/// Re-derives every step and compares it with the written one: same
/// components, and sets equal as sets.
pub fn check(d: &Derivation, premises: &[MdSentence], limits: &Limits) -> std::result::Result<(), StepFailure> {
    let mut earlier: Vec<MdSentence> = Vec::with_capacity(d.steps.len());
    for (i, step) in d.steps.iter().enumerate() {
        let fail = |reason: String| StepFailure { step: i, reason };
        let got = apply(&step.by, &earlier, premises, &step.md, limits).map_err(|e| match e {
            Error::Rule(msg) => fail(msg),
            e => fail(e.to_string()),
        })?;
        if got.components() != step.md.components() {
            return Err(fail("component mismatch".into()));
        }
        if !got.layout().same_shape(step.md.layout()) || got.algebra() != step.md.algebra() {
            return Err(fail("layout mismatch".into()));
        }
        match got.set().set_eq(step.md.set(), limits) {
            Ok(true) => {}
            Ok(false) => return Err(fail("information set differs from the rule's result".into())),
            Err(e) => return Err(fail(e.to_string())),
        }
        earlier.push(step.md.clone());
    }
    Ok(())
}

/// [`check`], and the last step is `goal`.
pub fn check_proves(
    d: &Derivation,
    premises: &[MdSentence],
    goal: &MdSentence,
    limits: &Limits,
) -> std::result::Result<(), StepFailure> {
    check(d, premises, limits)?;
    let last = d.steps.len().checked_sub(1).ok_or(StepFailure { step: 0, reason: "empty derivation".into() })?;
    let concl = &d.steps[last].md;
    let same = concl.components() == goal.components()
        && concl.set().set_eq(goal.set(), limits).map_err(|e| StepFailure { step: last, reason: e.to_string() })?;
    if !same {
        return Err(StepFailure { step: last, reason: "conclusion is not the goal".into() });
    }
    Ok(())
}
