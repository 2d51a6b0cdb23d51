//! Information sets over a flattened coordinate space and the set algebra the
//! calculus needs.
//!
//! Component `i` with arity `n` occupies `m^n` consecutive coordinates, one per
//! grid point of `M^n` in lexicographic order. Under a finite algebra every
//! set is read relative to the carrier: a box stands for the carrier points
//! inside it.

mod boxes;
mod constrained;
mod explicit;
mod good;
mod interval;

use std::fmt;

use num_traits::One;

pub use boxes::{BoxUnion, Region};
pub use constrained::Constrained;
pub use explicit::Explicit;
pub use good::{compile as goodness_conditions, dedup, enumerate_good, holds_all, Constraint};
pub use interval::{Interval, IntervalUnion};

use crate::algebra::{Algebra, Rational, TruthValue};
use crate::error::{Error, Result};
use crate::linsolve::{self, DEFAULT_CASE_BUDGET};
use crate::semantics::{grid_size, Frame};
use crate::syntax::Component;

/// Hard ceiling on the number of coordinates of any layout.
pub const MAX_LAYOUT_DIM: usize = 1 << 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Setting {
    FirstOrder { domain: usize },
    Modal(Frame),
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Setting::FirstOrder { domain } => write!(f, "domain {domain}"),
            Setting::Modal(fr) => {
                let es: Vec<String> = fr.edges().iter().map(|(a, b)| format!("({a},{b})")).collect();
                write!(f, "frame {} {{ {} }}", fr.worlds(), es.join(", "))
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CoordLayout {
    setting: Setting,
    arities: Vec<usize>,
    widths: Vec<usize>,
    offsets: Vec<usize>,
    dim: usize,
}

impl CoordLayout {
    pub fn with_arities(setting: Setting, arities: Vec<usize>) -> Result<Self> {
        let mut widths = Vec::with_capacity(arities.len());
        for &a in &arities {
            let w = match &setting {
                Setting::FirstOrder { domain } => grid_size(*domain, a),
                Setting::Modal(frame) if a == 0 => Some(frame.worlds()),
                Setting::Modal(_) => return Err(Error::Layout("modal components have no free variables".into())),
            };
            match w {
                Some(w) if w <= MAX_LAYOUT_DIM => widths.push(w),
                _ => {
                    return Err(Error::SizeGuard {
                        what: "coordinates per component",
                        needed: w.map_or(u128::MAX, |w| w as u128),
                        limit: MAX_LAYOUT_DIM as u128,
                    })
                }
            }
        }
        let mut offsets = Vec::with_capacity(widths.len());
        let mut dim = 0usize;
        for &w in &widths {
            offsets.push(dim);
            dim += w;
        }
        if dim > MAX_LAYOUT_DIM {
            return Err(Error::SizeGuard { what: "coordinates", needed: dim as u128, limit: MAX_LAYOUT_DIM as u128 });
        }
        Ok(CoordLayout { setting, arities, widths, offsets, dim })
    }

    pub fn first_order(domain: usize, comps: &[Component]) -> Result<Self> {
        if domain == 0 {
            return Err(Error::Invalid("domain size must be at least 1".into()));
        }
        Self::with_arities(Setting::FirstOrder { domain }, comps.iter().map(|c| c.arity()).collect())
    }

    pub fn modal(frame: &Frame, comps: &[Component]) -> Result<Self> {
        Self::with_arities(Setting::Modal(frame.clone()), comps.iter().map(|c| c.arity()).collect())
    }

    pub fn setting(&self) -> &Setting {
        &self.setting
    }

    /// Domain size, or the number of worlds.
    pub fn domain(&self) -> usize {
        match &self.setting {
            Setting::FirstOrder { domain } => *domain,
            Setting::Modal(f) => f.worlds(),
        }
    }

    pub fn is_modal(&self) -> bool {
        matches!(self.setting, Setting::Modal(_))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.arities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arities.is_empty()
    }

    pub fn arities(&self) -> &[usize] {
        &self.arities
    }

    pub fn arity(&self, i: usize) -> usize {
        self.arities[i]
    }

    pub fn width(&self, i: usize) -> usize {
        self.widths[i]
    }

    pub fn offset(&self, i: usize) -> usize {
        self.offsets[i]
    }

    pub fn same_shape(&self, other: &CoordLayout) -> bool {
        self.setting == other.setting && self.arities == other.arities
    }

    pub fn describe(&self) -> String {
        let what = match &self.setting {
            Setting::FirstOrder { domain } => format!("domain {domain}"),
            Setting::Modal(f) => format!("a frame of {} worlds", f.worlds()),
        };
        let ar: Vec<String> = self.arities.iter().map(|a| a.to_string()).collect();
        format!("{what} with component arities [{}]", ar.join(", "))
    }

    /// Layout after reordering components so new component `i` is old `perm[i]`,
    /// together with the coordinate map (new coordinate to old).
    pub fn permuted(&self, perm: &[usize]) -> Result<(CoordLayout, Vec<usize>)> {
        check_permutation(perm, self.len())?;
        let layout = Self::with_arities(self.setting.clone(), perm.iter().map(|&i| self.arities[i]).collect())?;
        let map = perm.iter().flat_map(|&i| self.offsets[i]..self.offsets[i] + self.widths[i]).collect();
        Ok((layout, map))
    }

    pub fn appended(&self, extra: &[usize]) -> Result<CoordLayout> {
        let mut ar = self.arities.clone();
        ar.extend_from_slice(extra);
        Self::with_arities(self.setting.clone(), ar)
    }

    pub fn truncated(&self, keep: usize) -> Result<CoordLayout> {
        Self::with_arities(self.setting.clone(), self.arities[..keep].to_vec())
    }
}

impl fmt::Debug for CoordLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

pub fn check_permutation(perm: &[usize], k: usize) -> Result<()> {
    let mut seen = vec![false; k];
    if perm.len() != k {
        return Err(Error::Rule(format!("permutation has {} entries for {k} components", perm.len())));
    }
    for &p in perm {
        if p >= k || std::mem::replace(&mut seen[p], true) {
            return Err(Error::Rule(format!("{perm:?} is not a permutation of 0..{k}")));
        }
    }
    Ok(())
}

/// Size guards and the solver budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_boxes: usize,
    pub max_points: usize,
    /// Largest dimension handed to the linear solver.
    pub max_dim: usize,
    pub case_budget: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_boxes: 100_000, max_points: 1_000_000, max_dim: 64, case_budget: DEFAULT_CASE_BUDGET }
    }
}

impl Limits {
    fn solver_dim(&self, d: usize) -> Result<()> {
        if d > self.max_dim {
            Err(Error::SizeGuard { what: "solver coordinates", needed: d as u128, limit: self.max_dim as u128 })
        } else {
            Ok(())
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Body {
    Explicit(Explicit),
    Boxes(BoxUnion),
    Constrained(Constrained),
}

/// An information set: a subset of `[0,1]^D` for a layout, read under an algebra.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct InfoSet {
    layout: CoordLayout,
    alg: Algebra,
    body: Body,
}

fn to_rationals(p: &[TruthValue]) -> Vec<Rational> {
    p.iter().map(|v| v.as_rational().clone()).collect()
}

fn to_values(p: Vec<Rational>) -> Result<Vec<TruthValue>> {
    p.into_iter().map(TruthValue::new).collect()
}

impl InfoSet {
    pub fn full(layout: CoordLayout, alg: Algebra) -> Self {
        let d = layout.dim();
        InfoSet { layout, alg, body: Body::Boxes(BoxUnion::full(d)) }
    }

    pub fn empty(layout: CoordLayout, alg: Algebra) -> Self {
        let d = layout.dim();
        InfoSet { layout, alg, body: Body::Boxes(BoxUnion::empty(d)) }
    }

    pub fn explicit(layout: CoordLayout, alg: Algebra, set: Explicit) -> Result<Self> {
        if set.dim() != layout.dim() {
            return Err(Error::Layout(format!(
                "explicit points have {} coordinates, {} needs {}",
                set.dim(),
                layout.describe(),
                layout.dim()
            )));
        }
        for v in set.palette() {
            alg.check_member(v)?;
        }
        Ok(InfoSet { layout, alg, body: Body::Explicit(set) })
    }

    pub fn boxes(layout: CoordLayout, alg: Algebra, set: BoxUnion) -> Result<Self> {
        if set.dim() != layout.dim() {
            return Err(Error::Layout(format!(
                "boxes have {} coordinates, {} needs {}",
                set.dim(),
                layout.describe(),
                layout.dim()
            )));
        }
        let set = if alg.is_finite() { set.snap(&alg.enumerate_carrier()?) } else { set };
        Ok(InfoSet { layout, alg, body: Body::Boxes(set) })
    }

    pub fn constrained(layout: CoordLayout, alg: Algebra, set: Constrained) -> Result<Self> {
        if set.dim() != layout.dim() {
            return Err(Error::Layout(format!(
                "constrained set shows {} coordinates, {} needs {}",
                set.dim(),
                layout.describe(),
                layout.dim()
            )));
        }
        if alg.is_finite() {
            return Err(Error::Unsupported("constrained sets are only used with real-valued algebras".into()));
        }
        Ok(InfoSet { layout, alg, body: Body::Constrained(set) })
    }

    pub fn layout(&self) -> &CoordLayout {
        &self.layout
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn body(&self) -> &Body {
        &self.body
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    fn with_body(&self, layout: CoordLayout, body: Body) -> InfoSet {
        InfoSet { layout, alg: self.alg, body }
    }

    fn carrier(&self) -> Result<Vec<TruthValue>> {
        self.alg.enumerate_carrier()
    }

    /// Boxes restricted to the carrier under a finite algebra.
    fn normal(&self, b: BoxUnion) -> Result<BoxUnion> {
        if self.alg.is_finite() {
            Ok(b.snap(&self.carrier()?))
        } else {
            Ok(b)
        }
    }

    /// A box union with the same members; fails for constrained sets.
    fn as_boxes(&self) -> Option<BoxUnion> {
        match &self.body {
            Body::Explicit(e) => Some(e.to_boxes()),
            Body::Boxes(b) => Some(b.clone()),
            Body::Constrained(_) => None,
        }
    }

    fn as_constrained(&self) -> Constrained {
        match &self.body {
            Body::Constrained(c) => c.clone(),
            _ => Constrained::from_boxes(self.as_boxes().expect("not constrained")),
        }
    }

    fn check_point(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::Layout(format!(
                "point of length {len}, {} needs {}",
                self.layout.describe(),
                self.dim()
            )));
        }
        Ok(())
    }

    pub fn contains(&self, p: &[TruthValue]) -> Result<bool> {
        self.contains_with(p, &Limits::default())
    }

    pub fn contains_with(&self, p: &[TruthValue], limits: &Limits) -> Result<bool> {
        self.check_point(p.len())?;
        if self.alg.is_finite() && !p.iter().all(|v| self.alg.contains(v)) {
            return Ok(false);
        }
        Ok(match &self.body {
            Body::Explicit(e) => e.contains_values(p),
            Body::Boxes(b) => b.contains(&to_rationals(p)),
            Body::Constrained(c) => c.contains(&to_rationals(p), limits.case_budget)?,
        })
    }

    fn check_same(&self, other: &InfoSet) -> Result<()> {
        if !self.layout.same_shape(&other.layout) {
            return Err(Error::Layout(format!("{} versus {}", self.layout.describe(), other.layout.describe())));
        }
        if self.alg != other.alg {
            return Err(Error::Layout(format!("sets under {} and {}", self.alg, other.alg)));
        }
        Ok(())
    }

    /// The same body under another layout of equal dimension.
    pub fn with_layout(&self, layout: CoordLayout) -> Result<InfoSet> {
        if layout.dim() != self.dim() {
            return Err(Error::Layout(format!(
                "{} has {} coordinates, not {}",
                layout.describe(),
                layout.dim(),
                self.dim()
            )));
        }
        Ok(self.with_body(layout, self.body.clone()))
    }

    /// Rule 2: new component `i` is old component `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Result<InfoSet> {
        let (layout, map) = self.layout.permuted(perm)?;
        let body = match &self.body {
            Body::Explicit(e) => Body::Explicit(e.select_coords(&map)),
            Body::Boxes(b) => Body::Boxes(b.select_coords(&map)),
            Body::Constrained(c) => Body::Constrained(c.select(&map)),
        };
        Ok(self.with_body(layout, body))
    }

    /// Rule 3: product with the full space of components of the given arities.
    pub fn cylindrify(&self, extra: &[usize]) -> Result<InfoSet> {
        let layout = self.layout.appended(extra)?;
        let add = layout.dim() - self.dim();
        let body = match &self.body {
            Body::Constrained(c) => Body::Constrained(c.append_full(add)),
            _ if add == 0 => self.body.clone(),
            _ => Body::Boxes(self.as_boxes().expect("boxes").append_full(add)),
        };
        Ok(self.with_body(layout, body))
    }

    /// Rule 5: keeps the first `keep` components.
    pub fn project(&self, keep: usize) -> Result<InfoSet> {
        if keep == 0 || keep > self.layout.len() {
            return Err(Error::Rule(format!("cannot keep {keep} of {} components", self.layout.len())));
        }
        let layout = self.layout.truncated(keep)?;
        let map: Vec<usize> = (0..layout.dim()).collect();
        let body = match &self.body {
            Body::Explicit(e) => Body::Explicit(e.select_coords(&map)),
            Body::Boxes(b) => Body::Boxes(b.select_coords(&map)),
            Body::Constrained(c) => Body::Constrained(c.select(&map)),
        };
        Ok(self.with_body(layout, body))
    }

    pub fn intersect(&self, other: &InfoSet, limits: &Limits) -> Result<InfoSet> {
        self.check_same(other)?;
        let body = match (&self.body, &other.body) {
            (Body::Explicit(a), Body::Explicit(b)) => Body::Explicit(a.intersect(b)),
            (Body::Explicit(a), _) => Body::Explicit(self.filter_explicit(a, other, limits)?),
            (_, Body::Explicit(b)) => Body::Explicit(self.filter_explicit(b, self, limits)?),
            (Body::Boxes(a), Body::Boxes(b)) => Body::Boxes(self.normal(a.intersect(b, limits.max_boxes)?)?),
            (Body::Constrained(c), Body::Boxes(b)) | (Body::Boxes(b), Body::Constrained(c)) => {
                Body::Constrained(c.intersect_boxes(b, limits.max_boxes)?)
            }
            (Body::Constrained(a), Body::Constrained(b)) => Body::Constrained(a.intersect(b, limits.max_boxes)?),
        };
        Ok(self.with_body(self.layout.clone(), body))
    }

    fn filter_explicit(&self, e: &Explicit, by: &InfoSet, limits: &Limits) -> Result<Explicit> {
        let mut err = None;
        let out = e.filter(|p| match by.contains_with(p, limits) {
            Ok(b) => b,
            Err(x) => {
                err.get_or_insert(x);
                false
            }
        });
        match err {
            Some(x) => Err(x),
            None => Ok(out),
        }
    }

    /// Complement within `[0,1]^D` (within the carrier points for finite algebras).
    pub fn complement(&self, limits: &Limits) -> Result<InfoSet> {
        let Some(b) = self.as_boxes() else {
            return Err(Error::Unsupported("complement of a constrained set".into()));
        };
        let c = self.normal(b.complement(limits.max_boxes)?)?;
        Ok(self.with_body(self.layout.clone(), Body::Boxes(c)))
    }

    pub fn witness(&self, limits: &Limits) -> Result<Option<Vec<TruthValue>>> {
        match &self.body {
            Body::Explicit(e) => Ok(e.points().next()),
            Body::Boxes(b) => self.least_box_point(b),
            Body::Constrained(c) => {
                limits.solver_dim(c.ext_dim())?;
                c.witness(limits.case_budget)?.map(to_values).transpose()
            }
        }
    }

    pub fn is_empty(&self, limits: &Limits) -> Result<bool> {
        Ok(match &self.body {
            Body::Explicit(e) => e.is_empty(),
            Body::Boxes(b) => b.is_empty(),
            Body::Constrained(_) => self.witness(limits)?.is_none(),
        })
    }

    /// The lexicographically least carrier point under a finite algebra,
    /// otherwise some point.
    fn least_box_point(&self, b: &BoxUnion) -> Result<Option<Vec<TruthValue>>> {
        if self.alg.is_finite() {
            let snapped = b.snap(&self.carrier()?);
            let best = snapped
                .regions()
                .iter()
                .map(|r| r.coords().iter().map(|c| c.intervals()[0].lo.clone()).collect::<Vec<_>>())
                .min();
            best.map(to_values).transpose()
        } else {
            b.sample().map(to_values).transpose()
        }
    }

    /// A point of `self` not in `other`: the lexicographically least one for
    /// explicit sets and finite algebras, the solver's witness otherwise.
    pub fn witness_outside(&self, other: &InfoSet, limits: &Limits) -> Result<Option<Vec<TruthValue>>> {
        self.check_same(other)?;
        if let Body::Explicit(e) = &self.body {
            for p in e.points() {
                if !other.contains_with(&p, limits)? {
                    return Ok(Some(p));
                }
            }
            return Ok(None);
        }
        match (&self.body, other.as_boxes()) {
            (Body::Boxes(a), Some(b)) => {
                if a.is_subset(&b, limits.max_boxes)? {
                    return Ok(None);
                }
                let diff = self.normal(a.difference(&b, limits.max_boxes)?)?;
                self.least_box_point(&diff)
            }
            (_, Some(b)) => {
                let c = self.as_constrained();
                limits.solver_dim(c.ext_dim())?;
                c.witness_outside_boxes(&b, limits.max_boxes, limits.case_budget)?.map(to_values).transpose()
            }
            (_, None) => {
                let a = self.as_constrained();
                let Body::Constrained(b) = &other.body else { unreachable!() };
                limits.solver_dim(a.ext_dim())?;
                a.witness_outside(b, limits.max_boxes, limits.case_budget)?.map(to_values).transpose()
            }
        }
    }

    pub fn subset(&self, other: &InfoSet, limits: &Limits) -> Result<bool> {
        Ok(self.witness_outside(other, limits)?.is_none())
    }

    pub fn set_eq(&self, other: &InfoSet, limits: &Limits) -> Result<bool> {
        Ok(self.subset(other, limits)? && other.subset(self, limits)?)
    }

    /// Rule 7: the good tuples of the set for the given components.
    pub fn good_filter(&self, comps: &[Component], limits: &Limits) -> Result<InfoSet> {
        let constraints = dedup(goodness_conditions(&self.layout, comps)?);
        let body = match &self.body {
            Body::Explicit(e) => Body::Explicit(e.filter(|p| holds_all(&self.alg, &constraints, p))),
            Body::Boxes(b) if self.alg.is_finite() => {
                Body::Explicit(enumerate_good(&self.alg, self.dim(), &constraints, b, limits.max_points, None)?)
            }
            Body::Boxes(b) => {
                limits.solver_dim(self.dim())?;
                let nodes = linsolve::compile(&self.alg, &constraints)?;
                Body::Constrained(Constrained::from_boxes(b.clone()).with_nodes(&nodes))
            }
            Body::Constrained(c) => {
                let nodes = linsolve::compile(&self.alg, &constraints)?;
                let out = c.with_nodes(&nodes);
                limits.solver_dim(out.ext_dim())?;
                Body::Constrained(out)
            }
        };
        Ok(self.with_body(self.layout.clone(), body))
    }

    /// The same set, materialized as explicit points when the algebra is finite.
    pub fn to_explicit(&self, limits: &Limits) -> Result<Explicit> {
        match &self.body {
            Body::Explicit(e) => Ok(e.clone()),
            Body::Boxes(b) if self.alg.is_finite() => {
                enumerate_good(&self.alg, self.dim(), &[], b, limits.max_points, None)
            }
            _ => Err(Error::InfiniteCarrier(self.alg.to_string())),
        }
    }
}

impl fmt::Display for InfoSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.body {
            Body::Explicit(e) => write!(f, "{e}"),
            Body::Boxes(b) if b.is_full() => f.write_str("full"),
            Body::Boxes(b) if b.is_empty() => f.write_str("empty"),
            Body::Boxes(b) => write!(f, "{b}"),
            Body::Constrained(c) => write!(f, "{c}"),
        }
    }
}

impl fmt::Debug for InfoSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The constant-one tuple, the only point of `[0,1]^0 × …` when `dim = 0`.
pub fn ones(dim: usize) -> Vec<TruthValue> {
    vec![TruthValue::new(Rational::one()).expect("one"); dim]
}
