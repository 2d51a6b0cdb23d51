//! Finite unions of axis-parallel boxes in `[0,1]^D`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::interval::IntervalUnion;
use crate::algebra::{Rational, TruthValue};
use crate::error::{Error, Result};

/// A product of nonempty interval unions, one per coordinate.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Region(Vec<IntervalUnion>);

impl Region {
    /// `None` if some coordinate is empty.
    pub fn new(coords: Vec<IntervalUnion>) -> Option<Region> {
        if coords.iter().any(|c| c.is_empty()) {
            None
        } else {
            Some(Region(coords))
        }
    }

    pub fn full(dim: usize) -> Region {
        Region(vec![IntervalUnion::full(); dim])
    }

    pub fn point(p: &[Rational]) -> Region {
        Region(p.iter().map(|v| IntervalUnion::point(v.clone())).collect())
    }

    pub fn coords(&self) -> &[IntervalUnion] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        self.0.iter().zip(p).all(|(c, v)| c.contains(v))
    }

    pub fn intersect(&self, other: &Region) -> Option<Region> {
        Region::new(self.0.iter().zip(&other.0).map(|(a, b)| a.intersect(b)).collect())
    }

    pub fn is_subset(&self, other: &Region) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a.is_subset(b))
    }

    /// `self ∖ other` as pairwise disjoint regions.
    pub fn subtract(&self, other: &Region) -> Vec<Region> {
        let Some(common) = self.intersect(other) else {
            return vec![self.clone()];
        };
        let mut out = Vec::new();
        for i in 0..self.dim() {
            let rest = self.0[i].difference(&other.0[i]);
            if rest.is_empty() {
                continue;
            }
            let mut coords = Vec::with_capacity(self.dim());
            coords.extend_from_slice(&common.0[..i]);
            coords.push(rest);
            coords.extend_from_slice(&self.0[i + 1..]);
            out.push(Region(coords));
        }
        out
    }

    /// Some point of the region.
    pub fn sample(&self) -> Vec<Rational> {
        self.0.iter().map(|c| c.sample().expect("nonempty coordinate")).collect()
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("()");
        }
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" x ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Union of regions of a common dimension. Regions may overlap.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BoxUnion {
    dim: usize,
    regions: Vec<Region>,
}

impl BoxUnion {
    pub fn empty(dim: usize) -> Self {
        BoxUnion { dim, regions: Vec::new() }
    }

    pub fn full(dim: usize) -> Self {
        BoxUnion { dim, regions: vec![Region::full(dim)] }
    }

    pub fn new(dim: usize, regions: Vec<Region>) -> Result<Self> {
        if let Some(r) = regions.iter().find(|r| r.dim() != dim) {
            return Err(Error::Layout(format!("box {r} has {} coordinates, expected {dim}", r.dim())));
        }
        Ok(BoxUnion { dim, regions })
    }

    pub fn from_points<'a>(dim: usize, points: impl IntoIterator<Item = &'a [Rational]>) -> Self {
        BoxUnion { dim, regions: points.into_iter().map(Region::point).collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.regions.iter().any(|r| r.coords().iter().all(|c| c.is_full()))
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        self.regions.iter().any(|r| r.contains(p))
    }

    fn guard(n: usize, limit: usize) -> Result<()> {
        if n > limit {
            Err(Error::SizeGuard { what: "box count", needed: n as u128, limit: limit as u128 })
        } else {
            Ok(())
        }
    }

    pub fn intersect(&self, other: &BoxUnion, limit: usize) -> Result<BoxUnion> {
        Self::guard(self.regions.len().saturating_mul(other.regions.len()), limit.saturating_mul(64))?;
        let mut out = Vec::new();
        for a in &self.regions {
            for b in &other.regions {
                if let Some(c) = a.intersect(b) {
                    out.push(c);
                }
            }
        }
        Self::guard(out.len(), limit)?;
        Ok(BoxUnion { dim: self.dim, regions: out }.simplified())
    }

    pub fn union(&self, other: &BoxUnion) -> BoxUnion {
        let mut regions = self.regions.clone();
        regions.extend(other.regions.iter().cloned());
        BoxUnion { dim: self.dim, regions }.simplified()
    }

    pub fn difference(&self, other: &BoxUnion, limit: usize) -> Result<BoxUnion> {
        let mut current = self.regions.clone();
        for c in &other.regions {
            let mut next = Vec::new();
            for r in &current {
                next.extend(r.subtract(c));
            }
            Self::guard(next.len(), limit)?;
            current = next;
            if current.is_empty() {
                break;
            }
        }
        Ok(BoxUnion { dim: self.dim, regions: current }.simplified())
    }

    pub fn complement(&self, limit: usize) -> Result<BoxUnion> {
        BoxUnion::full(self.dim).difference(self, limit)
    }

    pub fn is_subset(&self, other: &BoxUnion, limit: usize) -> Result<bool> {
        if self.regions.iter().all(|r| other.regions.iter().any(|o| r.is_subset(o))) {
            return Ok(true);
        }
        Ok(self.difference(other, limit)?.is_empty())
    }

    /// Restriction of every coordinate to the finite value set.
    pub fn snap(&self, values: &[TruthValue]) -> BoxUnion {
        let regions = self
            .regions
            .iter()
            .filter_map(|r| Region::new(r.coords().iter().map(|c| c.snap(values)).collect()))
            .collect();
        BoxUnion { dim: self.dim, regions }.simplified()
    }

    /// New coordinate `j` is old coordinate `map[j]`.
    pub fn select_coords(&self, map: &[usize]) -> BoxUnion {
        let regions =
            self.regions.iter().map(|r| Region(map.iter().map(|&i| r.coords()[i].clone()).collect())).collect();
        BoxUnion { dim: map.len(), regions }.simplified()
    }

    pub fn append_full(&self, extra: usize) -> BoxUnion {
        let regions = self
            .regions
            .iter()
            .map(|r| {
                let mut c = r.coords().to_vec();
                c.extend(std::iter::repeat_n(IntervalUnion::full(), extra));
                Region(c)
            })
            .collect();
        BoxUnion { dim: self.dim + extra, regions }
    }

    /// Cartesian product, coordinates of `self` first.
    pub fn product(&self, other: &BoxUnion, limit: usize) -> Result<BoxUnion> {
        Self::guard(self.regions.len().saturating_mul(other.regions.len()), limit)?;
        let mut regions = Vec::new();
        for a in &self.regions {
            for b in &other.regions {
                let mut c = a.coords().to_vec();
                c.extend(b.coords().iter().cloned());
                regions.push(Region(c));
            }
        }
        Ok(BoxUnion { dim: self.dim + other.dim, regions })
    }

    /// Embeds into `ext_dim` coordinates: coordinate `j` goes to `at[j]`,
    /// every other coordinate is unconstrained.
    pub fn lift(&self, ext_dim: usize, at: &[usize]) -> BoxUnion {
        let regions = self
            .regions
            .iter()
            .filter_map(|r| {
                let mut c = vec![IntervalUnion::full(); ext_dim];
                for (j, &e) in at.iter().enumerate() {
                    c[e] = c[e].intersect(&r.coords()[j]);
                }
                Region::new(c)
            })
            .collect();
        BoxUnion { dim: ext_dim, regions }
    }

    /// Merges regions that agree outside a single coordinate and, for small
    /// unions, drops regions covered by another region. Deterministic.
    pub fn simplified(mut self) -> BoxUnion {
        const SUBSUME_LIMIT: usize = 200;
        if self.regions.len() <= 1 {
            return self;
        }
        self.regions.sort();
        self.regions.dedup();
        loop {
            let before = self.regions.len();
            for c in 0..self.dim {
                let mut groups: BTreeMap<Vec<IntervalUnion>, IntervalUnion> = BTreeMap::new();
                for r in self.regions.drain(..) {
                    let mut coords = r.0;
                    let here = coords.remove(c);
                    groups.entry(coords).and_modify(|u| *u = u.union(&here)).or_insert(here);
                }
                self.regions = groups
                    .into_iter()
                    .map(|(mut coords, here)| {
                        coords.insert(c, here);
                        Region(coords)
                    })
                    .collect();
            }
            if self.regions.len() <= SUBSUME_LIMIT {
                let n = self.regions.len();
                let mut keep = vec![true; n];
                for i in 0..n {
                    for j in 0..n {
                        if i != j && keep[j] && self.regions[i].is_subset(&self.regions[j]) {
                            keep[i] = false;
                            break;
                        }
                    }
                }
                let regions = std::mem::take(&mut self.regions);
                self.regions = regions.into_iter().zip(keep).filter(|(_, k)| *k).map(|(r, _)| r).collect();
            }
            self.regions.sort();
            if self.regions.len() == before {
                return self;
            }
        }
    }

    /// All points whose coordinates are drawn from `values`, as index vectors
    /// into `values`.
    pub fn enumerate_points(&self, values: &[TruthValue], cap: usize) -> Result<BTreeSet<Vec<u16>>> {
        let mut out = BTreeSet::new();
        for r in &self.regions {
            let choices: Vec<Vec<u16>> = r
                .coords()
                .iter()
                .map(|c| {
                    values
                        .iter()
                        .enumerate()
                        .filter(|(_, v)| c.contains(v.as_rational()))
                        .map(|(i, _)| i as u16)
                        .collect()
                })
                .collect();
            let count = choices.iter().try_fold(1u128, |acc, c| acc.checked_mul(c.len() as u128));
            match count {
                Some(0) => continue,
                Some(n) if n + out.len() as u128 <= cap as u128 => {}
                Some(n) => return Err(Error::SizeGuard { what: "explicit points", needed: n, limit: cap as u128 }),
                None => {
                    return Err(Error::SizeGuard { what: "explicit points", needed: u128::MAX, limit: cap as u128 })
                }
            }
            let mut idx = vec![0usize; self.dim];
            'points: loop {
                out.insert(idx.iter().zip(&choices).map(|(&k, c)| c[k]).collect());
                for pos in (0..self.dim).rev() {
                    idx[pos] += 1;
                    if idx[pos] < choices[pos].len() {
                        continue 'points;
                    }
                    idx[pos] = 0;
                }
                break;
            }
        }
        Ok(out)
    }

    /// Some point, if nonempty.
    pub fn sample(&self) -> Option<Vec<Rational>> {
        self.regions.first().map(|r| r.sample())
    }
}

impl fmt::Display for BoxUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("boxes {")?;
        for (k, r) in self.regions.iter().enumerate() {
            f.write_str(if k == 0 { " " } else { "; " })?;
            write!(f, "{r}")?;
        }
        f.write_str(" }")
    }
}

impl fmt::Debug for BoxUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
