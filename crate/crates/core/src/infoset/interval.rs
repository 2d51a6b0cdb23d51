//! Finite unions of rational intervals inside `[0, 1]`.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Zero};

use crate::algebra::{fmt_rational, Rational, TruthValue};
use crate::error::{Error, Result};

/// A nonempty interval with open/closed endpoints.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub lo: Rational,
    pub lo_open: bool,
    pub hi: Rational,
    pub hi_open: bool,
}

impl Interval {
    /// `None` when the described interval is empty.
    pub fn new(lo: Rational, lo_open: bool, hi: Rational, hi_open: bool) -> Option<Interval> {
        match lo.cmp(&hi) {
            Ordering::Less => Some(Interval { lo, lo_open, hi, hi_open }),
            Ordering::Equal if !lo_open && !hi_open => Some(Interval { lo, lo_open, hi, hi_open }),
            _ => None,
        }
    }

    pub fn closed(lo: Rational, hi: Rational) -> Option<Interval> {
        Interval::new(lo, false, hi, false)
    }

    pub fn point(v: Rational) -> Interval {
        Interval { lo: v.clone(), lo_open: false, hi: v, hi_open: false }
    }

    pub fn unit() -> Interval {
        Interval::point(Rational::zero()).with_hi(Rational::one(), false)
    }

    fn with_hi(mut self, hi: Rational, open: bool) -> Interval {
        self.hi = hi;
        self.hi_open = open;
        self
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, v: &Rational) -> bool {
        let above = if self.lo_open { *v > self.lo } else { *v >= self.lo };
        let below = if self.hi_open { *v < self.hi } else { *v <= self.hi };
        above && below
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let (lo, lo_open) = match self.lo.cmp(&other.lo) {
            Ordering::Greater => (self.lo.clone(), self.lo_open),
            Ordering::Less => (other.lo.clone(), other.lo_open),
            Ordering::Equal => (self.lo.clone(), self.lo_open || other.lo_open),
        };
        let (hi, hi_open) = match self.hi.cmp(&other.hi) {
            Ordering::Less => (self.hi.clone(), self.hi_open),
            Ordering::Greater => (other.hi.clone(), other.hi_open),
            Ordering::Equal => (self.hi.clone(), self.hi_open || other.hi_open),
        };
        Interval::new(lo, lo_open, hi, hi_open)
    }

    /// Whether `self` followed by `next` (with `self.lo <= next.lo`) forms one interval.
    fn touches(&self, next: &Interval) -> bool {
        match self.hi.cmp(&next.lo) {
            Ordering::Greater => true,
            Ordering::Equal => !(self.hi_open && next.lo_open),
            Ordering::Less => false,
        }
    }

    /// Some point of the interval.
    pub fn sample(&self) -> Rational {
        if !self.lo_open {
            self.lo.clone()
        } else if !self.hi_open {
            self.hi.clone()
        } else {
            (&self.lo + &self.hi) / Rational::from_integer(2.into())
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{},{}{}",
            if self.lo_open { '(' } else { '[' },
            fmt_rational(&self.lo),
            fmt_rational(&self.hi),
            if self.hi_open { ')' } else { ']' }
        )
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A subset of `[0,1]` given as sorted, pairwise separated intervals.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntervalUnion(Vec<Interval>);

impl IntervalUnion {
    pub fn empty() -> Self {
        IntervalUnion(Vec::new())
    }

    pub fn full() -> Self {
        IntervalUnion(vec![Interval::unit()])
    }

    pub fn point(v: Rational) -> Self {
        IntervalUnion(vec![Interval::point(v)])
    }

    /// Canonical union of arbitrary intervals, which must lie in `[0,1]`.
    pub fn from_intervals(mut items: Vec<Interval>) -> Result<Self> {
        for i in &items {
            if i.lo < Rational::zero() || i.hi > Rational::one() {
                return Err(Error::OutOfUnitInterval(i.to_string()));
            }
        }
        items.sort_by(|a, b| a.lo.cmp(&b.lo).then(a.lo_open.cmp(&b.lo_open)));
        let mut out: Vec<Interval> = Vec::with_capacity(items.len());
        for it in items {
            match out.last_mut() {
                Some(last) if last.touches(&it) => match last.hi.cmp(&it.hi) {
                    Ordering::Less => {
                        last.hi = it.hi;
                        last.hi_open = it.hi_open;
                    }
                    Ordering::Equal => last.hi_open = last.hi_open && it.hi_open,
                    Ordering::Greater => {}
                },
                _ => out.push(it),
            }
        }
        Ok(IntervalUnion(out))
    }

    fn from_sorted(items: Vec<Interval>) -> Self {
        IntervalUnion::from_intervals(items).expect("intervals within [0,1]")
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.0.len() == 1 && self.0[0] == Interval::unit()
    }

    /// The single point, if the union is one.
    pub fn as_point(&self) -> Option<&Rational> {
        match self.0.as_slice() {
            [i] if i.is_point() => Some(&i.lo),
            _ => None,
        }
    }

    pub fn contains(&self, v: &Rational) -> bool {
        self.0.iter().any(|i| i.contains(v))
    }

    pub fn contains_value(&self, v: &TruthValue) -> bool {
        self.contains(v.as_rational())
    }

    pub fn intersect(&self, other: &IntervalUnion) -> IntervalUnion {
        let mut out = Vec::new();
        for a in &self.0 {
            for b in &other.0 {
                if let Some(c) = a.intersect(b) {
                    out.push(c);
                }
            }
        }
        IntervalUnion::from_sorted(out)
    }

    pub fn union(&self, other: &IntervalUnion) -> IntervalUnion {
        IntervalUnion::from_sorted(self.0.iter().chain(&other.0).cloned().collect())
    }

    /// Complement within `[0,1]`, with endpoint flags dualized.
    pub fn complement(&self) -> IntervalUnion {
        let mut out = Vec::new();
        let mut lo = Rational::zero();
        let mut lo_open = false;
        for i in &self.0 {
            if let Some(gap) = Interval::new(lo.clone(), lo_open, i.lo.clone(), !i.lo_open) {
                out.push(gap);
            }
            lo = i.hi.clone();
            lo_open = !i.hi_open;
        }
        if let Some(gap) = Interval::new(lo, lo_open, Rational::one(), false) {
            out.push(gap);
        }
        IntervalUnion(out)
    }

    pub fn difference(&self, other: &IntervalUnion) -> IntervalUnion {
        self.intersect(&other.complement())
    }

    pub fn is_subset(&self, other: &IntervalUnion) -> bool {
        self.difference(other).is_empty()
    }

    /// Restriction to the given finite set of values, as a union of points;
    /// `full` when every value is kept.
    pub fn snap(&self, values: &[TruthValue]) -> IntervalUnion {
        if self.is_full() || values.iter().all(|v| self.contains(v.as_rational())) {
            return IntervalUnion::full();
        }
        IntervalUnion(
            values
                .iter()
                .filter(|v| self.contains(v.as_rational()))
                .map(|v| Interval::point(v.as_rational().clone()))
                .collect(),
        )
    }

    /// Some member, if nonempty.
    pub fn sample(&self) -> Option<Rational> {
        self.0.first().map(|i| i.sample())
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_full() {
            return f.write_str("full");
        }
        if self.0.is_empty() {
            return f.write_str("none");
        }
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_rational;
    use proptest::prelude::*;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn iv(lo: &str, lo_open: bool, hi: &str, hi_open: bool) -> Interval {
        Interval::new(q(lo), lo_open, q(hi), hi_open).unwrap()
    }

    #[test]
    fn half_open_membership() {
        let s = IntervalUnion::from_intervals(vec![iv("1/2", false, "4/5", true)]).unwrap();
        assert!(s.contains(&q("3/5")));
        assert!(s.contains(&q("1/2")));
        assert!(!s.contains(&q("4/5")));
    }

    #[test]
    fn complement_dualizes_endpoints() {
        let s = IntervalUnion::from_intervals(vec![iv("1/2", false, "4/5", true)]).unwrap();
        let c = s.complement();
        assert_eq!(c.to_string(), "[0,1/2) | [4/5,1]");
        assert!(IntervalUnion::full().complement().is_empty());
        assert!(IntervalUnion::empty().complement().is_full());
        assert_eq!(c.complement(), s);
    }

    #[test]
    fn merging_and_intersection() {
        let a = IntervalUnion::from_intervals(vec![
            iv("0", false, "1/2", true),
            iv("1/2", false, "3/4", false),
            iv("1", false, "1", false),
        ])
        .unwrap();
        assert_eq!(a.to_string(), "[0,3/4] | [1,1]");
        let open =
            IntervalUnion::from_intervals(vec![iv("0", false, "1/2", true), iv("1/2", true, "1", false)]).unwrap();
        assert_eq!(open.intervals().len(), 2);
        let x = IntervalUnion::from_intervals(vec![iv("0", false, "1/2", false)]).unwrap();
        let y = IntervalUnion::from_intervals(vec![iv("1/4", false, "1", false)]).unwrap();
        assert_eq!(x.intersect(&y).to_string(), "[1/4,1/2]");
        assert!(x.is_subset(&IntervalUnion::full()));
        assert!(!y.is_subset(&x));
        assert!(Interval::new(q("1/2"), true, q("1/2"), false).is_none());
        assert!(IntervalUnion::from_intervals(vec![iv("0", false, "1", false).with_hi(q("3/2"), false)]).is_err());
    }

    fn arb_union() -> impl Strategy<Value = IntervalUnion> {
        prop::collection::vec((0i64..=12, 0i64..=12, any::<bool>(), any::<bool>()), 0..4).prop_map(|raw| {
            let items = raw
                .into_iter()
                .filter_map(|(a, b, lo_open, hi_open)| {
                    let (a, b) = (a.min(b), a.max(b));
                    Interval::new(
                        Rational::new(a.into(), 12.into()),
                        lo_open,
                        Rational::new(b.into(), 12.into()),
                        hi_open,
                    )
                })
                .collect();
            IntervalUnion::from_intervals(items).unwrap()
        })
    }

    fn grid() -> Vec<Rational> {
        (0..=48).map(|k| Rational::new(k.into(), 48.into())).collect()
    }

    proptest! {
        #[test]
        fn operations_match_pointwise(a in arb_union(), b in arb_union()) {
            let (i, u, c, d) = (a.intersect(&b), a.union(&b), a.complement(), a.difference(&b));
            for x in grid() {
                prop_assert_eq!(i.contains(&x), a.contains(&x) && b.contains(&x));
                prop_assert_eq!(u.contains(&x), a.contains(&x) || b.contains(&x));
                prop_assert_eq!(c.contains(&x), !a.contains(&x));
                prop_assert_eq!(d.contains(&x), a.contains(&x) && !b.contains(&x));
            }
            prop_assert_eq!(c.complement(), a.clone());
            prop_assert_eq!(a.union(&b), b.union(&a));
        }
    }
}
