//! Step functions: piecewise-constant functions that, unlike signals, need
//! not be right-continuous.  They arise as sliding-window envelopes, where
//! the window infimum/supremum can hold a value at a single instant only.

use std::fmt;

use crate::bvec::BVec;
use crate::error::{Error, Result};
use crate::signal::{LeftTail, Pattern, RightTail, Signal};
use crate::time::Time;

use super::midpoint;

/// One breakpoint of a step function: the value *at* `time`, and the value
/// on the open interval up to the next breakpoint.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StepSeg {
    pub time: Time,
    pub at: BVec,
    pub after: BVec,
}

/// A piecewise-constant function R -> B^n with explicit point values.
///
/// Semantics: `left` governs `(-inf, t_0)`; at each breakpoint `t_i` the
/// value is `at_i`; on `(t_i, t_{i+1})` it is `after_i`.  A `Const` right
/// tail continues the last `after` on `(t_k, inf)`; a `Periodic` right tail
/// governs `(t_k, inf)` by its pattern anchored at `t_k`.
///
/// With no breakpoints at all, the function is the constant stored in the
/// left tail.
#[derive(Clone, PartialEq, Eq)]
pub struct StepFunction {
    dim: usize,
    left: LeftTail,
    segs: Vec<StepSeg>,
    right: RightTail,
}

impl StepFunction {
    /// Build from parts and canonicalize (merge breakpoints at which the
    /// function is in fact continuous).
    pub fn make(dim: usize, left: LeftTail, segs: Vec<StepSeg>, right: RightTail) -> Result<StepFunction> {
        assert!(dim > 0);
        for s in &segs {
            if s.at.dim() != dim || s.after.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: if s.at.dim() != dim { s.at.dim() } else { s.after.dim() },
                });
            }
        }
        for w in segs.windows(2) {
            if w[1].time <= w[0].time {
                return Err(Error::NonIncreasingTimes { at: w[1].time });
            }
        }
        match &left {
            LeftTail::Const(v) => {
                if v.dim() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: v.dim() });
                }
            }
            LeftTail::Periodic(p) => {
                if segs.is_empty() {
                    return Err(Error::EmptyEvents);
                }
                if p.dim() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, found: p.dim() });
                }
            }
        }
        if let RightTail::Periodic(p) = &right {
            if segs.is_empty() {
                return Err(Error::EmptyEvents);
            }
            if p.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: p.dim() });
            }
        }
        let mut f = StepFunction { dim, left, segs, right };
        f.merge_redundant();
        Ok(f)
    }

    /// Drop breakpoints where the function is continuous: the point value
    /// equals the value on both sides.  Breakpoints anchoring a periodic
    /// tail are kept.
    fn merge_redundant(&mut self) {
        let mut out: Vec<StepSeg> = Vec::new();
        let n = self.segs.len();
        for (i, s) in self.segs.iter().enumerate() {
            let before: Option<&BVec> = if let Some(prev) = out.last() {
                Some(&prev.after)
            } else {
                match &self.left {
                    LeftTail::Const(v) => Some(v),
                    LeftTail::Periodic(_) => None, // anchor, always kept
                }
            };
            let is_last = i == n - 1;
            let anchors_periodic = is_last && matches!(self.right, RightTail::Periodic(_));
            let next_val: Option<&BVec> = if !is_last {
                Some(&s.after)
            } else {
                match &self.right {
                    RightTail::Const => Some(&s.after),
                    RightTail::Periodic(_) => None,
                }
            };
            let redundant = !anchors_periodic
                && match (before, next_val) {
                    (Some(b), Some(n)) => *b == s.at && s.at == *n && s.at == s.after,
                    _ => false,
                };
            if !redundant {
                out.push(s.clone());
            }
        }
        self.segs = out;
    }

    /// The embedding of a right-continuous signal as a step function.
    pub fn embed(x: &Signal) -> StepFunction {
        let segs = x
            .events()
            .iter()
            .map(|(t, v)| StepSeg {
                time: *t,
                at: v.clone(),
                after: v.clone(),
            })
            .collect();
        StepFunction {
            dim: x.dim(),
            left: x.left_tail().clone(),
            segs,
            right: x.right_tail().clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn segs(&self) -> &[StepSeg] {
        &self.segs
    }

    pub fn left_tail(&self) -> &LeftTail {
        &self.left
    }

    pub fn right_tail(&self) -> &RightTail {
        &self.right
    }

    pub fn value_at(&self, t: Time) -> &BVec {
        if self.segs.is_empty() {
            match &self.left {
                LeftTail::Const(v) => return v,
                LeftTail::Periodic(_) => unreachable!("periodic tail without anchor"),
            }
        }
        let first = self.segs[0].time;
        let last = self.segs.last().unwrap().time;
        if t < first {
            return match &self.left {
                LeftTail::Const(v) => v,
                LeftTail::Periodic(p) => p.value_at_offset((t - first).rem_euclid(p.period())),
            };
        }
        if t > last {
            return match &self.right {
                RightTail::Const => &self.segs.last().unwrap().after,
                RightTail::Periodic(p) => p.value_at_offset((t - last).rem_euclid(p.period())),
            };
        }
        let i = match self.segs.binary_search_by(|s| s.time.cmp(&t)) {
            Ok(i) => return &self.segs[i].at,
            Err(i) => i - 1,
        };
        &self.segs[i].after
    }

    /// Points where the function may change, inside `[lo, hi]`: breakpoint
    /// times plus unrolled pattern boundaries in the tail regions.
    fn breakpoints_in(&self, lo: Time, hi: Time) -> Vec<Time> {
        let mut out = Vec::new();
        if lo > hi {
            return out;
        }
        if self.segs.is_empty() {
            return out;
        }
        let first = self.segs[0].time;
        let last = self.segs.last().unwrap().time;
        if let LeftTail::Periodic(p) = &self.left {
            push_pattern_boundaries(p, first, lo, Time::min(hi, first), &mut out);
        }
        for s in &self.segs {
            if s.time >= lo && s.time <= hi {
                out.push(s.time);
            }
        }
        if let RightTail::Periodic(p) = &self.right {
            push_pattern_boundaries(p, last, Time::max(lo, last), hi, &mut out);
        }
        out.sort();
        out.dedup();
        out
    }
}

/// Push all times `origin + boundary + k*period` lying in `[lo, hi]`.
fn push_pattern_boundaries(p: &Pattern, origin: Time, lo: Time, hi: Time, out: &mut Vec<Time>) {
    if lo > hi {
        return;
    }
    let period = p.period();
    let mut bounds = vec![Time::zero()];
    let mut acc = Time::zero();
    for (d, _) in p.segs() {
        acc = acc + *d;
        if acc < period {
            bounds.push(acc);
        }
    }
    let mut base = {
        let r = (lo - origin).rem_euclid(period);
        lo - r - period
    };
    'outer: loop {
        for b in &bounds {
            let s = base + *b;
            if s > hi {
                break 'outer;
            }
            if s >= lo {
                out.push(s);
            }
        }
        base = base + period;
    }
}

impl fmt::Debug for StepFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StepFunction<{}>{{ left: {:?}, segs: [", self.dim, self.left)?;
        for (i, s) in self.segs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}/{}", s.time, s.at, s.after)?;
        }
        write!(f, "], right: {:?} }}", self.right)
    }
}

/// Exact decision of `a(t) <= b(t)` (coordinatewise) for every real `t`.
pub fn pointwise_leq(a: &StepFunction, b: &StepFunction) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    // Periods covering the periodic (or constant) behaviour on each side.
    let left_period = |f: &StepFunction| match f.left_tail() {
        LeftTail::Periodic(p) => p.period(),
        LeftTail::Const(_) => Time::int(1),
    };
    let right_period = |f: &StepFunction| match f.right_tail() {
        RightTail::Periodic(p) => p.period(),
        RightTail::Const => Time::int(1),
    };
    let anchor = |f: &StepFunction| f.segs().first().map(|s| s.time).unwrap_or(Time::zero());
    let last = |f: &StepFunction| f.segs().last().map(|s| s.time).unwrap_or(Time::zero());

    let lo = Time::min(anchor(a), anchor(b)) - Time::lcm(left_period(a), left_period(b));
    let hi = Time::max(last(a), last(b)) + Time::lcm(right_period(a), right_period(b));

    let mut pts = vec![lo, hi];
    pts.extend(a.breakpoints_in(lo, hi));
    pts.extend(b.breakpoints_in(lo, hi));
    pts.sort();
    pts.dedup();

    // Beyond [lo, hi] both functions repeat behaviour already inspected:
    // below lo they are jointly periodic with the left lcm (a constant tail
    // is periodic with any period), and symmetrically above hi.
    for t in &pts {
        if !a.value_at(*t).leq(b.value_at(*t)) {
            return Ok(false);
        }
    }
    for w in pts.windows(2) {
        let m = midpoint(w[0], w[1]);
        if !a.value_at(m).leq(b.value_at(m)) {
            return Ok(false);
        }
    }
    Ok(true)
}
