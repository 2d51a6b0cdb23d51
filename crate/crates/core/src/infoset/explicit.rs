//! Finite point sets.

use std::collections::BTreeSet;
use std::fmt;

use super::boxes::BoxUnion;
use crate::algebra::{Rational, TruthValue};
use crate::error::{Error, Result};

/// Points stored as index vectors into a sorted palette of values, so the
/// set order is the lexicographic order of the points.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Explicit {
    dim: usize,
    palette: Vec<TruthValue>,
    points: BTreeSet<Vec<u16>>,
}

impl Explicit {
    pub fn empty(dim: usize) -> Self {
        Explicit { dim, palette: Vec::new(), points: BTreeSet::new() }
    }

    pub fn new(dim: usize, points: impl IntoIterator<Item = Vec<TruthValue>>) -> Result<Self> {
        let points: Vec<Vec<TruthValue>> = points.into_iter().collect();
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::Layout(format!("point of length {} in a {dim}-dimensional set", p.len())));
        }
        let mut palette: Vec<TruthValue> = points.iter().flatten().cloned().collect();
        palette.sort();
        palette.dedup();
        if palette.len() > u16::MAX as usize {
            return Err(Error::SizeGuard {
                what: "distinct values",
                needed: palette.len() as u128,
                limit: u16::MAX as u128,
            });
        }
        let idx = |v: &TruthValue| palette.binary_search(v).expect("value in palette") as u16;
        let pts = points.iter().map(|p| p.iter().map(idx).collect()).collect();
        Ok(Explicit { dim, palette, points: pts })
    }

    /// Builds from index vectors into `palette`, which must be sorted and duplicate-free.
    pub fn from_indices(dim: usize, palette: Vec<TruthValue>, points: BTreeSet<Vec<u16>>) -> Self {
        debug_assert!(palette.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(points.iter().all(|p| p.len() == dim));
        Explicit { dim, palette, points }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn palette(&self) -> &[TruthValue] {
        &self.palette
    }

    pub fn indices(&self) -> &BTreeSet<Vec<u16>> {
        &self.points
    }

    pub fn value(&self, i: u16) -> &TruthValue {
        &self.palette[i as usize]
    }

    /// Points in lexicographic order.
    pub fn points(&self) -> impl Iterator<Item = Vec<TruthValue>> + '_ {
        self.points.iter().map(|p| p.iter().map(|&i| self.palette[i as usize].clone()).collect())
    }

    fn encode(&self, p: &[Rational]) -> Option<Vec<u16>> {
        p.iter().map(|v| self.palette.binary_search_by(|w| w.as_rational().cmp(v)).ok().map(|i| i as u16)).collect()
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        p.len() == self.dim && self.encode(p).is_some_and(|k| self.points.contains(&k))
    }

    pub fn contains_values(&self, p: &[TruthValue]) -> bool {
        let raw: Vec<Rational> = p.iter().map(|v| v.as_rational().clone()).collect();
        self.contains(&raw)
    }

    /// Re-indexes both sets over the union of their palettes.
    fn aligned(&self, other: &Explicit) -> (Vec<TruthValue>, BTreeSet<Vec<u16>>, BTreeSet<Vec<u16>>) {
        if self.palette == other.palette {
            return (self.palette.clone(), self.points.clone(), other.points.clone());
        }
        let mut palette: Vec<TruthValue> = self.palette.iter().chain(&other.palette).cloned().collect();
        palette.sort();
        palette.dedup();
        let remap = |e: &Explicit| -> BTreeSet<Vec<u16>> {
            let table: Vec<u16> = e.palette.iter().map(|v| palette.binary_search(v).expect("merged") as u16).collect();
            e.points.iter().map(|p| p.iter().map(|&i| table[i as usize]).collect()).collect()
        };
        let (a, b) = (remap(self), remap(other));
        (palette, a, b)
    }

    pub fn intersect(&self, other: &Explicit) -> Explicit {
        let (palette, a, b) = self.aligned(other);
        Explicit { dim: self.dim, palette, points: a.intersection(&b).cloned().collect() }.compact()
    }

    pub fn union(&self, other: &Explicit) -> Explicit {
        let (palette, a, b) = self.aligned(other);
        Explicit { dim: self.dim, palette, points: a.union(&b).cloned().collect() }
    }

    pub fn difference(&self, other: &Explicit) -> Explicit {
        let (palette, a, b) = self.aligned(other);
        Explicit { dim: self.dim, palette, points: a.difference(&b).cloned().collect() }.compact()
    }

    pub fn is_subset(&self, other: &Explicit) -> bool {
        self.points().all(|p| other.contains_values(&p))
    }

    pub fn set_eq(&self, other: &Explicit) -> bool {
        let (_, a, b) = self.aligned(other);
        a == b
    }

    /// New coordinate `j` is old coordinate `map[j]`.
    pub fn select_coords(&self, map: &[usize]) -> Explicit {
        let points = self.points.iter().map(|p| map.iter().map(|&i| p[i]).collect()).collect();
        Explicit { dim: map.len(), palette: self.palette.clone(), points }.compact()
    }

    pub fn filter(&self, mut keep: impl FnMut(&[TruthValue]) -> bool) -> Explicit {
        let points = self
            .points
            .iter()
            .filter(|p| {
                let vals: Vec<TruthValue> = p.iter().map(|&i| self.palette[i as usize].clone()).collect();
                keep(&vals)
            })
            .cloned()
            .collect();
        Explicit { dim: self.dim, palette: self.palette.clone(), points }
    }

    /// Drops palette values no point uses.
    fn compact(self) -> Explicit {
        let mut used = vec![false; self.palette.len()];
        for p in &self.points {
            for &i in p {
                used[i as usize] = true;
            }
        }
        if used.iter().all(|u| *u) {
            return self;
        }
        let mut table = vec![0u16; self.palette.len()];
        let mut palette = Vec::new();
        for (i, v) in self.palette.into_iter().enumerate() {
            if used[i] {
                table[i] = palette.len() as u16;
                palette.push(v);
            }
        }
        let points = self.points.iter().map(|p| p.iter().map(|&i| table[i as usize]).collect()).collect();
        Explicit { dim: self.dim, palette, points }
    }

    pub fn to_boxes(&self) -> BoxUnion {
        let raw: Vec<Vec<Rational>> =
            self.points().map(|p| p.into_iter().map(|v| v.into_rational()).collect()).collect();
        BoxUnion::from_points(self.dim, raw.iter().map(|p| p.as_slice())).simplified()
    }
}

impl fmt::Display for Explicit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("explicit {")?;
        for (k, p) in self.points().enumerate() {
            f.write_str(if k == 0 { " (" } else { "; (" })?;
            for (j, v) in p.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str(")")?;
        }
        f.write_str(" }")
    }
}

impl fmt::Debug for Explicit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
