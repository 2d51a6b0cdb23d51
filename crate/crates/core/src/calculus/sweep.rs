//! Entailment over every domain size up to a bound. A countermodel at some
//! size refutes entailment; finding none proves nothing beyond the bound.

use rayon::prelude::*;

use super::entail::{entail, Countermodel, Verdict};
use crate::error::{Error, Result};
use crate::infoset::{CoordLayout, Limits, Setting};
use crate::md::MdSentence;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepReport {
    /// Domain sizes checked, in order, up to and including the first failure.
    pub checked: Vec<usize>,
    /// The smallest domain size with a countermodel.
    pub countermodel: Option<(usize, Countermodel)>,
}

/// The sentence read over a domain of size `m`. Only sentence components
/// are allowed, so the set carries over unchanged.
pub fn at_domain(md: &MdSentence, m: usize) -> Result<MdSentence> {
    if !md.is_sentential() {
        return Err(Error::Invalid(format!("`{md}` has a component with free variables; sweeps need sentences")));
    }
    let layout = CoordLayout::with_arities(Setting::FirstOrder { domain: m }, vec![0; md.len()])?;
    MdSentence::new(md.components().to_vec(), md.set().with_layout(layout)?)
}

/// Runs [`entail`] at every size `1..=max` in parallel and keeps the
/// smallest size with a countermodel. Errors at a size below the first
/// countermodel are reported.
pub fn sweep(premises: &[MdSentence], goal: &MdSentence, max: usize, limits: &Limits) -> Result<SweepReport> {
    let results: Vec<Result<Verdict>> = (1..=max)
        .into_par_iter()
        .map(|m| {
            let ps = premises.iter().map(|p| at_domain(p, m)).collect::<Result<Vec<_>>>()?;
            entail(&ps, &at_domain(goal, m)?, limits)
        })
        .collect();
    let mut checked = Vec::new();
    for (m, r) in (1..=max).zip(results) {
        checked.push(m);
        if let Verdict::Invalid(c) = r? {
            return Ok(SweepReport { checked, countermodel: Some((m, c)) });
        }
    }
    Ok(SweepReport { checked, countermodel: None })
}
