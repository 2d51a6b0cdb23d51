//! Multi-dimensional sentences over real-valued and finitely-valued
//! first-order and modal logics: evaluation, a checkable proof calculus,
//! entailment over finite domains, translation to classical logic and
//! zero-one experiments.

pub mod algebra;
pub mod calculus;
pub mod error;
pub mod format;
pub mod infoset;
pub mod linsolve;
pub mod md;
pub mod semantics;
pub mod syntax;
pub mod translate;
pub mod zeroone;

pub use algebra::{Algebra, Carrier, Connective, Family, Rational, TruthValue};
pub use calculus::{check, check_proves, entail, entail_modal, satisfy, sweep, Derivation, Justification, Verdict};
pub use error::{Error, Result};
pub use infoset::{BoxUnion, CoordLayout, Explicit, InfoSet, Limits};
pub use md::MdSentence;
pub use semantics::{Frame, ModalModel, Model};
pub use syntax::{Component, Formula, Mode, Var, Vocabulary};
