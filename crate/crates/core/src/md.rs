//! MD-sentences: a component list paired with an information set.

use std::collections::BTreeSet;
use std::fmt;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::infoset::{CoordLayout, InfoSet, Setting};
use crate::syntax::{Component, Formula};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MdSentence {
    components: Vec<Component>,
    set: InfoSet,
}

impl MdSentence {
    pub fn new(components: Vec<Component>, set: InfoSet) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::EmptyInput("MD-sentence components"));
        }
        let mut seen = BTreeSet::new();
        for c in &components {
            if !seen.insert((c.formula(), c.vars())) {
                return Err(Error::Invalid(format!("component `{c}` occurs twice")));
            }
        }
        let layout = set.layout();
        let arities: Vec<usize> = components.iter().map(|c| c.arity()).collect();
        if layout.arities() != arities.as_slice() {
            return Err(Error::Layout(format!(
                "components have arities {arities:?}, information set is laid out for {}",
                layout.describe()
            )));
        }
        if let Setting::Modal(_) = layout.setting() {
            if let Some(c) = components.iter().find(|c| !c.formula().is_sentence()) {
                return Err(Error::Invalid(format!("modal component `{c}` has free variables")));
            }
        }
        Ok(MdSentence { components, set })
    }

    /// Axiom instance: the full set over the given components.
    pub fn axiom(components: Vec<Component>, layout: CoordLayout, alg: Algebra) -> Result<Self> {
        Self::new(components, InfoSet::full(layout, alg))
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.components.iter().map(|c| c.formula())
    }

    pub fn set(&self) -> &InfoSet {
        &self.set
    }

    pub fn algebra(&self) -> &Algebra {
        self.set.algebra()
    }

    pub fn layout(&self) -> &CoordLayout {
        self.set.layout()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn into_parts(self) -> (Vec<Component>, InfoSet) {
        (self.components, self.set)
    }

    /// Whether every component is a sentence.
    pub fn is_sentential(&self) -> bool {
        self.components.iter().all(|c| c.arity() == 0)
    }
}

impl fmt::Display for MdSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (k, c) in self.components.iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, " : {}>", self.set)
    }
}

impl fmt::Debug for MdSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
