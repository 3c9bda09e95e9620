//! Finite unions of half-open intervals `(lo, hi]` on the half line.
//!
//! Sets are kept canonical: sorted, non-empty members, and `hi_k < lo_{k+1}`
//! (overlapping or touching members are merged). An interval starting at 0
//! also contains the point 0, so `[0, b]` and `(0, b]` are the same set here.
//! Distance laws are atomless, so none of these endpoint conventions change
//! any measure.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::radial_measure::RadialDistribution;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "[f64; 2]", from = "[f64; 2]")]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }

    pub fn contains(&self, d: f64) -> bool {
        (self.lo < d || (self.lo == 0.0 && d == 0.0)) && d <= self.hi
    }
}

impl From<Interval> for [f64; 2] {
    fn from(i: Interval) -> Self {
        [i.lo, i.hi]
    }
}

impl From<[f64; 2]> for Interval {
    fn from([lo, hi]: [f64; 2]) -> Self {
        Interval { lo, hi }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == 0.0 {
            write!(f, "[0, {}]", self.hi)
        } else {
            write!(f, "({}, {}]", self.lo, self.hi)
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct IntervalSet {
    intervals: Vec<Interval>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet::default()
    }

    /// `[0, radius]`.
    pub fn full(radius: f64) -> Self {
        Self::from_canonical(vec![Interval::new(0.0, radius)])
    }

    /// Canonicalizes arbitrary `(lo, hi)` pairs. Degenerate pairs (`lo == hi`)
    /// are dropped; negative, reversed or non-finite bounds are rejected.
    pub fn new<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        let mut v = Vec::new();
        for (lo, hi) in pairs {
            if !lo.is_finite() || !hi.is_finite() || lo < 0.0 || lo > hi {
                return Err(Error::InvalidInterval { lo, hi });
            }
            if lo < hi {
                v.push(Interval::new(lo, hi));
            }
        }
        Ok(Self::canonicalize(v))
    }

    fn from_canonical(intervals: Vec<Interval>) -> Self {
        let intervals = intervals.into_iter().filter(|i| !i.is_empty()).collect();
        IntervalSet { intervals }
    }

    fn canonicalize(mut v: Vec<Interval>) -> Self {
        v.retain(|i| !i.is_empty());
        v.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        let mut out: Vec<Interval> = Vec::with_capacity(v.len());
        for i in v {
            match out.last_mut() {
                Some(last) if i.lo <= last.hi => last.hi = last.hi.max(i.hi),
                _ => out.push(i),
            }
        }
        IntervalSet { intervals: out }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    /// Largest right endpoint, or 0 for the empty set.
    pub fn sup(&self) -> f64 {
        self.intervals.last().map_or(0.0, |i| i.hi)
    }

    pub fn contains(&self, d: f64) -> bool {
        // first interval whose right end is >= d
        let k = self.intervals.partition_point(|i| i.hi < d);
        self.intervals.get(k).is_some_and(|i| i.contains(d))
    }

    /// All interval endpoints in increasing order.
    pub fn endpoints(&self) -> impl Iterator<Item = f64> + '_ {
        self.intervals.iter().flat_map(|i| [i.lo, i.hi])
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        let mut v = self.intervals.clone();
        v.extend_from_slice(&other.intervals);
        Self::canonicalize(v)
    }

    pub fn intersection(&self, other: &IntervalSet) -> IntervalSet {
        let (a, b) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = a[i].lo.max(b[j].lo);
            let hi = a[i].hi.min(b[j].hi);
            if lo < hi {
                out.push(Interval::new(lo, hi));
            }
            if a[i].hi < b[j].hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::canonicalize(out)
    }

    /// Complement within `[0, radius]`.
    pub fn complement(&self, radius: f64) -> IntervalSet {
        let mut out = Vec::with_capacity(self.intervals.len() + 1);
        let mut cursor = 0.0;
        for i in &self.intervals {
            if i.lo >= radius {
                break;
            }
            if i.lo > cursor {
                out.push(Interval::new(cursor, i.lo));
            }
            cursor = cursor.max(i.hi);
        }
        if cursor < radius {
            out.push(Interval::new(cursor, radius));
        }
        Self::from_canonical(out)
    }

    pub fn symmetric_difference(&self, other: &IntervalSet, radius: f64) -> IntervalSet {
        let left = self.intersection(&other.complement(radius));
        let right = other.intersection(&self.complement(radius));
        left.union(&right)
    }

    /// Total probability of the set under `dist`; members are clipped to
    /// `[0, R]`.
    pub fn measure(&self, dist: &RadialDistribution) -> f64 {
        let r = dist.radius();
        self.intervals
            .iter()
            .map(|i| dist.measure_unchecked(i.lo.min(r), i.hi.min(r)))
            .fold(0.0, |a, b| a + b)
    }

    /// Total Lebesgue length.
    pub fn length(&self) -> f64 {
        self.intervals
            .iter()
            .map(Interval::len)
            .fold(0.0, |a, b| a + b)
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return write!(f, "{{}}");
        }
        for (k, i) in self.intervals.iter().enumerate() {
            if k > 0 {
                write!(f, " U ")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}
