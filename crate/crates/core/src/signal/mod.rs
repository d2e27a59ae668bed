//! Piecewise-constant Boolean signals over exact rational time, with
//! eventually-constant or eventually-periodic behaviour at both ends.
//!
//! Every `Signal` is kept in a canonical form with the property that two
//! signals are equal as functions R -> B^n iff their representations are
//! structurally equal.  All constructors funnel through [`Signal::make`],
//! which normalizes patterns to their minimal period, merges redundant
//! events, and tightens both anchors.

mod step;
mod window;

pub use step::{pointwise_leq, StepFunction, StepSeg};
pub use window::{window_extrema, WindowMode};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bvec::BVec;
use crate::error::{Error, Result};
use crate::time::Time;

fn midpoint(a: Time, b: Time) -> Time {
    (a + b) / 2
}

/// A cyclic pattern: a nonempty list of (duration, value) segments with
/// positive durations.  The pattern describes one period of a periodic
/// function, cut at offset 0.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pattern {
    segs: Vec<(Time, BVec)>,
}

impl Pattern {
    pub fn new(segs: Vec<(Time, BVec)>) -> Result<Pattern> {
        if segs.is_empty() {
            return Err(Error::EmptyPattern);
        }
        let dim = segs[0].1.dim();
        for (d, v) in &segs {
            if !d.is_positive() {
                return Err(Error::NonPositiveDuration);
            }
            if v.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.dim(),
                });
            }
        }
        Ok(Pattern { segs })
    }

    pub fn segs(&self) -> &[(Time, BVec)] {
        &self.segs
    }

    pub fn dim(&self) -> usize {
        self.segs[0].1.dim()
    }

    pub fn period(&self) -> Time {
        self.segs
            .iter()
            .fold(Time::zero(), |acc, (d, _)| acc + *d)
    }

    /// Value at an offset in `[0, period)`.
    pub fn value_at_offset(&self, o: Time) -> &BVec {
        debug_assert!(Time::zero() <= o && o < self.period());
        let mut acc = Time::zero();
        for (d, v) in &self.segs {
            acc = acc + *d;
            if o < acc {
                return v;
            }
        }
        &self.segs.last().unwrap().1
    }

    /// Offsets in `[0, period)` where the cyclic function genuinely changes
    /// value, paired with the value that starts there.  Offset 0 is included
    /// only if the last segment's value differs from the first's.
    fn changes(&self) -> Vec<(Time, BVec)> {
        let mut out = Vec::new();
        let mut acc = Time::zero();
        for (i, (d, v)) in self.segs.iter().enumerate() {
            let prev = if i == 0 {
                &self.segs.last().unwrap().1
            } else {
                &self.segs[i - 1].1
            };
            if v != prev {
                out.push((acc, v.clone()));
            }
            acc = acc + *d;
        }
        out
    }

    /// Rebuild a pattern of period `p` from its cyclic change list, cut at
    /// offset 0.  `changes` must be sorted and nonempty.
    fn from_changes(changes: &[(Time, BVec)], p: Time) -> Pattern {
        debug_assert!(!changes.is_empty());
        let mut segs: Vec<(Time, BVec)> = Vec::new();
        if changes[0].0 != Time::zero() {
            // The segment containing offset 0 wraps around; its value is the
            // one installed by the cyclically last change.
            segs.push((changes[0].0, changes.last().unwrap().1.clone()));
        }
        for (i, (pos, v)) in changes.iter().enumerate() {
            let end = if i + 1 < changes.len() {
                changes[i + 1].0
            } else {
                p
            };
            if end > *pos {
                segs.push((end - *pos, v.clone()));
            }
        }
        Pattern { segs }
    }

    /// The pattern `p'` with `p'(o) = p((o + delta) mod period)`.
    fn rotate(&self, delta: Time) -> Pattern {
        let p = self.period();
        let d = delta.rem_euclid(p);
        if d == Time::zero() {
            return self.clone();
        }
        let mut changes: Vec<(Time, BVec)> = self
            .changes()
            .into_iter()
            .map(|(pos, v)| ((pos - d).rem_euclid(p), v))
            .collect();
        changes.sort_by_key(|a| a.0);
        Pattern::from_changes(&changes, p)
    }

    /// Merge adjacent duplicates, collapse single-valued patterns to a
    /// constant, and reduce to the minimal period (keeping the cut at 0).
    fn normalize(self) -> NormalTail {
        // Merge adjacent equal-valued segments in the list (not across the
        // seam; the cut at offset 0 is part of the phase).
        let mut merged: Vec<(Time, BVec)> = Vec::new();
        for (d, v) in self.segs {
            match merged.last_mut() {
                Some((pd, pv)) if *pv == v => *pd = *pd + d,
                _ => merged.push((d, v)),
            }
        }
        let pat = Pattern { segs: merged };
        let changes = pat.changes();
        if changes.is_empty() {
            return NormalTail::Const(pat.segs[0].1.clone());
        }
        let p = pat.period();
        // Try periods p/j from the smallest up: the change set must be
        // invariant (with values) under translation by p/j mod p.
        for j in (2..=changes.len()).rev() {
            if !changes.len().is_multiple_of(j) {
                continue;
            }
            let q = p / j as i64;
            let ok = changes.iter().all(|(pos, v)| {
                let shifted = (*pos + q).rem_euclid(p);
                changes
                    .binary_search_by(|(cp, _)| cp.cmp(&shifted))
                    .map(|k| changes[k].1 == *v)
                    .unwrap_or(false)
            });
            if ok {
                let sub: Vec<(Time, BVec)> =
                    changes.into_iter().filter(|(pos, _)| *pos < q).collect();
                return NormalTail::Periodic(Pattern::from_changes(&sub, q));
            }
        }
        NormalTail::Periodic(pat)
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pattern[")?;
        for (i, (d, v)) in self.segs.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{d}:{v}")?;
        }
        write!(f, "]")
    }
}

enum NormalTail {
    Const(BVec),
    Periodic(Pattern),
}

/// Behaviour of a signal before its first event.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum LeftTail {
    /// Constant value on `(-inf, t_0)`.
    Const(BVec),
    /// `f(t) = pat((t - t_0) mod P)` for `t < t_0`: the pattern is anchored
    /// so that one period *ends* at the first event.
    Periodic(Pattern),
}

/// Behaviour of a signal from its last event on.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum RightTail {
    /// The last event's value persists on `[t_k, inf)`.
    Const,
    /// `f(t) = pat((t - t_k) mod P)` for `t >= t_k`: one period *begins* at
    /// the last event, and the last event's value equals `pat(0)`.
    Periodic(Pattern),
}

/// Which of the limit classes a signal falls into.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct MembershipClass {
    /// Has a limit at -inf (an initial value).
    pub has_initial: bool,
    /// Has a limit at +inf (a final value).
    pub has_final: bool,
}

/// A piecewise-constant, right-continuous function R -> B^n in canonical
/// form.  Compare with `==` for functional equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signal {
    dim: usize,
    left: LeftTail,
    events: Vec<(Time, BVec)>,
    right: RightTail,
}

// ---------------------------------------------------------------------------
// Periodic extensions and the raw (pre-canonical) evaluator.

/// The everywhere-defined periodic function `t -> pat((t - origin) mod P)`.
struct PeriodicExt<'a> {
    pat: &'a Pattern,
    origin: Time,
    period: Time,
    /// Genuine cyclic change offsets, sorted.
    change_offs: Vec<Time>,
}

impl<'a> PeriodicExt<'a> {
    fn new(pat: &'a Pattern, origin: Time) -> PeriodicExt<'a> {
        let period = pat.period();
        let change_offs = pat.changes().into_iter().map(|(o, _)| o).collect();
        PeriodicExt {
            pat,
            origin,
            period,
            change_offs,
        }
    }

    fn value_at(&self, t: Time) -> &BVec {
        self.pat
            .value_at_offset((t - self.origin).rem_euclid(self.period))
    }

    /// Smallest change point strictly greater than `t`.  Returns `t + period`
    /// offsets relative to the anchored phase; for a constant-free pattern
    /// this always exists.
    fn next_change_after(&self, t: Time) -> Time {
        debug_assert!(!self.change_offs.is_empty());
        let r = (t - self.origin).rem_euclid(self.period);
        let base = t - r; // origin + k*period for some integer k
        for c in &self.change_offs {
            if *c > r {
                return base + *c;
            }
        }
        base + self.period + self.change_offs[0]
    }

    /// Greatest change point strictly less than `t`.
    fn prev_change_before(&self, t: Time) -> Time {
        debug_assert!(!self.change_offs.is_empty());
        let r = (t - self.origin).rem_euclid(self.period);
        let base = t - r;
        for c in self.change_offs.iter().rev() {
            if *c < r {
                return base + *c;
            }
        }
        base - self.period + *self.change_offs.last().unwrap()
    }

    /// All change points in the closed interval `[lo, hi]`.
    fn changes_in(&self, lo: Time, hi: Time) -> Vec<Time> {
        let mut out = Vec::new();
        if lo > hi || self.change_offs.is_empty() {
            return out;
        }
        let mut t = {
            let r = (lo - self.origin).rem_euclid(self.period);
            let base = lo - r;
            base - self.period
        };
        'outer: loop {
            for c in &self.change_offs {
                let s = t + *c;
                if s > hi {
                    break 'outer;
                }
                if s >= lo {
                    out.push(s);
                }
            }
            t = t + self.period;
        }
        out
    }
}

/// A validated but not yet canonical description; evaluates the function
/// exactly and enumerates its change points.
struct RawDesc {
    left: NormalTail,
    events: Vec<(Time, BVec)>,
    right: RawRight,
    /// Event times where the function genuinely changes value (predecessor
    /// taken from the previous event, or from the left tail for the first).
    event_changes: Vec<Time>,
}

enum RawRight {
    Const,
    Periodic(Pattern),
}

impl RawDesc {
    fn new(left: NormalTail, mut events: Vec<(Time, BVec)>, right: RawRight) -> RawDesc {
        // Under a periodic right tail, the tail (not the stored value)
        // governs [t_k, inf); pin the stored value to pat(0) up front.
        if let RawRight::Periodic(pat) = &right {
            let v = pat.value_at_offset(Time::zero()).clone();
            events.last_mut().unwrap().1 = v;
        }
        let mut event_changes = Vec::new();
        for i in 0..events.len() {
            let prev: &BVec = if i == 0 {
                match &left {
                    NormalTail::Const(v) => v,
                    // Value just below the anchor: the pattern's last segment.
                    NormalTail::Periodic(p) => &p.segs.last().unwrap().1,
                }
            } else {
                &events[i - 1].1
            };
            if events[i].1 != *prev {
                event_changes.push(events[i].0);
            }
        }
        RawDesc {
            left,
            events,
            right,
            event_changes,
        }
    }

    fn anchor(&self) -> Time {
        self.events[0].0
    }

    fn last_time(&self) -> Time {
        self.events.last().unwrap().0
    }

    fn value_at(&self, t: Time) -> &BVec {
        if t < self.anchor() {
            return match &self.left {
                NormalTail::Const(v) => v,
                NormalTail::Periodic(p) => {
                    p.value_at_offset((t - self.anchor()).rem_euclid(p.period()))
                }
            };
        }
        if t >= self.last_time() {
            if let RawRight::Periodic(p) = &self.right {
                return p.value_at_offset((t - self.last_time()).rem_euclid(p.period()));
            }
            return &self.events.last().unwrap().1;
        }
        // Last event with time <= t.
        let i = match self.events.binary_search_by(|(et, _)| et.cmp(&t)) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        &self.events[i].1
    }

    /// Smallest change point strictly greater than `t`, if any.
    fn next_change_after(&self, t: Time) -> Option<Time> {
        if t < self.anchor() {
            if let NormalTail::Periodic(p) = &self.left {
                let ext = PeriodicExt::new(p, self.anchor());
                let c = ext.next_change_after(t);
                if c < self.anchor() {
                    return Some(c);
                }
            }
        }
        for c in &self.event_changes {
            if *c > t {
                return Some(*c);
            }
        }
        if let RawRight::Periodic(p) = &self.right {
            let ext = PeriodicExt::new(p, self.last_time());
            let mut c = ext.next_change_after(Time::max(t, self.last_time()));
            // Changes of the tail extension govern f only strictly beyond
            // the last event; at the last event the event list speaks.
            while c <= self.last_time() {
                c = ext.next_change_after(c);
            }
            if c > t {
                return Some(c);
            }
        }
        None
    }

    /// Greatest change point strictly less than `t`, if any.
    fn prev_change_before(&self, t: Time) -> Option<Time> {
        if let RawRight::Periodic(p) = &self.right {
            if t > self.last_time() {
                let ext = PeriodicExt::new(p, self.last_time());
                let c = ext.prev_change_before(t);
                if c > self.last_time() {
                    return Some(c);
                }
            }
        }
        for c in self.event_changes.iter().rev() {
            if *c < t {
                return Some(*c);
            }
        }
        if let NormalTail::Periodic(p) = &self.left {
            let ext = PeriodicExt::new(p, self.anchor());
            let mut c = ext.prev_change_before(Time::min(t, self.anchor()));
            while c >= self.anchor() {
                c = ext.prev_change_before(c);
            }
            if c < t {
                return Some(c);
            }
        }
        None
    }

    /// Change points strictly inside `(lo, hi)`.  Assumes `hi <=` the last
    /// event time, which holds for every call site.
    fn changes_in_open(&self, lo: Time, hi: Time) -> Vec<Time> {
        let mut out = Vec::new();
        if let NormalTail::Periodic(p) = &self.left {
            let ext = PeriodicExt::new(p, self.anchor());
            let top = Time::min(hi, self.anchor());
            for c in ext.changes_in(lo, top) {
                if c > lo && c < hi && c < self.anchor() {
                    out.push(c);
                }
            }
        }
        for c in &self.event_changes {
            if *c > lo && *c < hi {
                out.push(*c);
            }
        }
        out
    }

    /// Greatest change point overall, or `None` if the function is constant.
    /// Only meaningful with a constant right tail.
    fn last_change(&self) -> Option<Time> {
        debug_assert!(matches!(self.right, RawRight::Const));
        if let Some(c) = self.event_changes.last() {
            return Some(*c);
        }
        match &self.left {
            NormalTail::Const(_) => None,
            NormalTail::Periodic(p) => {
                let ext = PeriodicExt::new(p, self.anchor());
                let mut c = ext.prev_change_before(self.anchor() + Time::new(1, 2));
                while c >= self.anchor() {
                    c = ext.prev_change_before(c);
                }
                Some(c)
            }
        }
    }

    /// Smallest `t` with `f(t) != v`, or `None` if `f` is constantly `v`.
    /// Only meaningful with a constant left tail equal to `v`.
    fn first_departure(&self, v: &BVec) -> Option<Time> {
        debug_assert!(matches!(&self.left, NormalTail::Const(w) if w == v));
        for (t, ev) in &self.events {
            if ev != v {
                return Some(*t);
            }
        }
        if let RawRight::Periodic(p) = &self.right {
            // All event values equal v, so pat(0) = v; find the first
            // offset where the pattern departs.
            let mut acc = Time::zero();
            for (d, pv) in &p.segs {
                if pv != v {
                    return Some(self.last_time() + acc);
                }
                acc = acc + *d;
            }
            unreachable!("periodic pattern with a single value survived normalize");
        }
        None
    }
}

/// First `t >= start` with `f(t) != ext(t)`, given they agree on
/// `(-inf, start)`.
fn tighten_up(f: &RawDesc, ext: &PeriodicExt, start: Time, bound: Time) -> Time {
    let mut s = start;
    loop {
        if f.value_at(s) != ext.value_at(s) {
            return s;
        }
        let ne = ext.next_change_after(s);
        let next = match f.next_change_after(s) {
            Some(nf) => Time::min(nf, ne),
            None => ne,
        };
        s = next;
        assert!(s <= bound, "scan ran past the periodicity bound");
    }
}

/// Smallest `b <= start` such that `f = ext` on `[b, inf)`, given they agree
/// on `[start, inf)`.
fn tighten_down(f: &RawDesc, ext: &PeriodicExt, start: Time, bound: Time) -> Time {
    let mut s = start;
    loop {
        let pe = ext.prev_change_before(s);
        let p = match f.prev_change_before(s) {
            Some(pf) => Time::max(pf, pe),
            None => pe,
        };
        let m = midpoint(p, s);
        if f.value_at(m) != ext.value_at(m) {
            return s;
        }
        // Both are constant on [p, s) and agree there, and by right
        // continuity also at p itself.
        s = p;
        assert!(s >= bound, "scan ran past the periodicity bound");
    }
}

/// Whether `f` and `ext` agree everywhere on `[lo, hi]`.
fn agrees_on(f: &RawDesc, ext: &PeriodicExt, lo: Time, hi: Time) -> bool {
    let mut pts = vec![lo, hi];
    if let Some(mut c) = f.next_change_after(lo) {
        while c <= hi {
            pts.push(c);
            c = match f.next_change_after(c) {
                Some(n) => n,
                None => break,
            };
        }
    }
    pts.extend(ext.changes_in(lo, hi));
    pts.sort();
    pts.dedup();
    for w in pts.windows(2) {
        let m = midpoint(w[0], w[1]);
        if f.value_at(m) != ext.value_at(m) {
            return false;
        }
    }
    pts.iter().all(|t| f.value_at(*t) == ext.value_at(*t))
}

impl Signal {
    /// Build a signal from an arbitrary valid description and canonicalize.
    pub fn make(
        dim: usize,
        left: LeftTail,
        mut events: Vec<(Time, BVec)>,
        right: RightTail,
    ) -> Result<Signal> {
        assert!(dim > 0, "signal dimension must be positive");
        if events.is_empty() {
            return Err(Error::EmptyEvents);
        }
        for (_, v) in &events {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.dim(),
                });
            }
        }
        for w in events.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::NonIncreasingTimes { at: w[1].0 });
            }
        }
        let left = match left {
            LeftTail::Const(v) => {
                if v.dim() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: v.dim(),
                    });
                }
                NormalTail::Const(v)
            }
            LeftTail::Periodic(p) => {
                let p = Pattern::new(p.segs)?;
                if p.dim() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: p.dim(),
                    });
                }
                p.normalize()
            }
        };
        let right = match right {
            RightTail::Const => RawRight::Const,
            RightTail::Periodic(p) => {
                let p = Pattern::new(p.segs)?;
                if p.dim() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: p.dim(),
                    });
                }
                match p.normalize() {
                    NormalTail::Const(v) => {
                        // A single-valued pattern is just a constant tail,
                        // and it (not the stored value) governs [t_k, inf).
                        events.last_mut().unwrap().1 = v;
                        RawRight::Const
                    }
                    NormalTail::Periodic(p) => RawRight::Periodic(p),
                }
            }
        };
        Ok(Signal::canonicalize(dim, RawDesc::new(left, events, right)))
    }

    fn canonicalize(dim: usize, raw: RawDesc) -> Signal {
        let anchor = raw.anchor();
        let last = raw.last_time();

        // A signal that agrees with its left periodic extension everywhere
        // gets a dedicated canonical form (both tails are rotations of the
        // same cycle).
        if let (NormalTail::Periodic(pl), RawRight::Periodic(pr)) = (&raw.left, &raw.right) {
            let big = Time::lcm(pl.period(), pr.period());
            let extl = PeriodicExt::new(pl, anchor);
            if agrees_on(&raw, &extl, anchor, last + big) {
                return Signal::fully_periodic(dim, &extl);
            }
        }

        let span = last - anchor;
        let slack = match (&raw.left, &raw.right) {
            (NormalTail::Periodic(pl), RawRight::Periodic(pr)) => {
                Time::lcm(pl.period(), pr.period())
            }
            (NormalTail::Periodic(pl), _) => pl.period(),
            (_, RawRight::Periodic(pr)) => pr.period(),
            _ => Time::int(1),
        };
        let lo_bound = anchor - span - slack * 2 - Time::int(1);
        let hi_bound = last + span + slack * 2 + Time::int(1);

        // Tight right boundary.
        let b: Option<Time> = match &raw.right {
            RawRight::Const => raw.last_change(),
            RawRight::Periodic(p) => {
                let ext = PeriodicExt::new(p, last);
                Some(tighten_down(&raw, &ext, last, lo_bound))
            }
        };

        // Tight left boundary.
        let a: Option<Time> = match &raw.left {
            NormalTail::Const(v) => raw.first_departure(v),
            NormalTail::Periodic(p) => {
                let ext = PeriodicExt::new(p, anchor);
                Some(tighten_up(&raw, &ext, anchor, hi_bound))
            }
        };

        let (new_events, right_final) = match (a, b) {
            (None, None) => {
                // Constant function; anchor at 0.
                let v = match &raw.left {
                    NormalTail::Const(v) => v.clone(),
                    NormalTail::Periodic(_) => unreachable!(),
                };
                return Signal {
                    dim,
                    left: LeftTail::Const(v.clone()),
                    events: vec![(Time::zero(), v)],
                    right: RightTail::Const,
                };
            }
            (a_opt, Some(bb)) => {
                let aa = match a_opt {
                    None => bb,
                    Some(aa) => Time::min(aa, bb),
                };
                let mut times = vec![aa];
                times.extend(raw.changes_in_open(aa, bb));
                if bb > aa {
                    times.push(bb);
                }
                let evs: Vec<(Time, BVec)> = times
                    .into_iter()
                    .map(|t| (t, raw.value_at(t).clone()))
                    .collect();
                let rf = match &raw.right {
                    RawRight::Const => RightTail::Const,
                    RawRight::Periodic(p) => {
                        RightTail::Periodic(p.rotate((bb - last).rem_euclid(p.period())))
                    }
                };
                (evs, rf)
            }
            (Some(_), None) => {
                // A departure from a constant left tail implies a change
                // exists, so last_change cannot be None; and a periodic left
                // tail forces changes below the anchor.
                unreachable!("left boundary without any change point")
            }
        };

        let new_anchor = new_events[0].0;
        let left_final = match raw.left {
            NormalTail::Const(v) => LeftTail::Const(v),
            NormalTail::Periodic(p) => {
                let rot = p.rotate((new_anchor - anchor).rem_euclid(p.period()));
                LeftTail::Periodic(rot)
            }
        };
        let sig = Signal {
            dim,
            left: left_final,
            events: new_events,
            right: right_final,
        };
        debug_assert!(sig.check_canonical().is_ok(), "{:?}", sig.check_canonical());
        sig
    }

    /// Canonical form of a signal that coincides with the periodic function
    /// `ext` everywhere: minimal period q, anchored at the smallest change
    /// point in [0, q), with one period of change points as events.
    fn fully_periodic(dim: usize, ext: &PeriodicExt<'_>) -> Signal {
        let q = ext.period;
        let mut times: Vec<Time> = ext
            .change_offs
            .iter()
            .map(|c| (ext.origin + *c).rem_euclid(q))
            .collect();
        times.sort();
        let b0 = times[0];
        let events: Vec<(Time, BVec)> = times
            .into_iter()
            .map(|t| (t, ext.value_at(t).clone()))
            .collect();
        let t_last = events.last().unwrap().0;
        let left = LeftTail::Periodic(ext.pat.rotate((b0 - ext.origin).rem_euclid(q)));
        let right = RightTail::Periodic(ext.pat.rotate((t_last - ext.origin).rem_euclid(q)));
        let sig = Signal {
            dim,
            left,
            events,
            right,
        };
        debug_assert!(sig.check_canonical().is_ok(), "{:?}", sig.check_canonical());
        sig
    }

    /// Structural test for the fully periodic canonical form: both tails
    /// are rotations of one cycle of minimal period q, the events are
    /// exactly the cycle's change points in `[b0, b0 + q)` with `b0` the
    /// smallest change point in `[0, q)`, and all values match.
    fn is_fully_periodic_form(&self) -> bool {
        let (pl, pr) = match (&self.left, &self.right) {
            (LeftTail::Periodic(pl), RightTail::Periodic(pr)) => (pl, pr),
            _ => return false,
        };
        let q = pl.period();
        if pr.period() != q {
            return false;
        }
        let b0 = self.first_time();
        let t_last = self.last_time();
        if b0 < Time::zero() || t_last >= q {
            return false;
        }
        if *pr != pl.rotate((t_last - b0).rem_euclid(q)) {
            return false;
        }
        let ext = PeriodicExt::new(pl, b0);
        let mut times: Vec<Time> = ext.change_offs.iter().map(|c| b0 + *c).collect();
        times.sort();
        if times.len() != self.events.len() {
            return false;
        }
        self.events
            .iter()
            .zip(times)
            .all(|((t, v), ct)| *t == ct && *v == *ext.value_at(ct))
    }

    /// Verify the canonical-form invariants (used in debug assertions and
    /// by tests).
    pub fn check_canonical(&self) -> std::result::Result<(), String> {
        let evs = &self.events;
        if evs.is_empty() {
            return Err("empty events".into());
        }
        for w in evs.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err("times not increasing".into());
            }
        }
        // Adjacent event values distinct, except that the last event may
        // repeat its predecessor when it anchors a periodic right tail.
        for i in 1..evs.len() {
            if evs[i].1 == evs[i - 1].1
                && !(i == evs.len() - 1 && matches!(self.right, RightTail::Periodic(_)))
            {
                return Err(format!("duplicate adjacent value at index {i}"));
            }
        }
        match &self.left {
            LeftTail::Const(v) => {
                if evs[0].1 == *v {
                    let single = evs.len() == 1;
                    let constant = single
                        && matches!(self.right, RightTail::Const)
                        && evs[0].0 == Time::zero();
                    let anchors_periodic = single && matches!(self.right, RightTail::Periodic(_));
                    if !constant && !anchors_periodic {
                        return Err("first event equals constant left tail".into());
                    }
                }
            }
            LeftTail::Periodic(p) => {
                match Pattern::new(p.segs.clone()).map(Pattern::normalize) {
                    Ok(NormalTail::Periodic(q)) if q == *p => {}
                    _ => return Err("left pattern not minimal".into()),
                }
                if evs[0].1 == *p.value_at_offset(Time::zero()) && evs.len() > 1 {
                    // Allowed only for the fully periodic canonical form,
                    // where the anchor value necessarily equals the phase-0
                    // pattern value.
                    if !self.is_fully_periodic_form() {
                        return Err("left anchor not tight".into());
                    }
                }
            }
        }
        if let RightTail::Periodic(p) = &self.right {
            match Pattern::new(p.segs.clone()).map(Pattern::normalize) {
                Ok(NormalTail::Periodic(q)) if q == *p => {}
                _ => return Err("right pattern not minimal".into()),
            }
            if evs.last().unwrap().1 != *p.value_at_offset(Time::zero()) {
                return Err("last event value disagrees with right pattern".into());
            }
            // Tightness: the value just before the last event must differ
            // from the pattern's last segment, unless the signal has a
            // single event (anchor shared with the left boundary) or is
            // fully periodic.
            if evs.len() > 1 && !self.is_fully_periodic_form() {
                let before = &evs[evs.len() - 2].1;
                if *before == p.segs.last().unwrap().1 {
                    return Err("right anchor not tight".into());
                }
            }
        }
        Ok(())
    }

    /// Constant signal.
    pub fn constant(v: BVec) -> Signal {
        Signal {
            dim: v.dim(),
            left: LeftTail::Const(v.clone()),
            events: vec![(Time::zero(), v)],
            right: RightTail::Const,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left_tail(&self) -> &LeftTail {
        &self.left
    }

    pub fn events(&self) -> &[(Time, BVec)] {
        &self.events
    }

    pub fn right_tail(&self) -> &RightTail {
        &self.right
    }

    pub fn first_time(&self) -> Time {
        self.events[0].0
    }

    pub fn last_time(&self) -> Time {
        self.events.last().unwrap().0
    }

    pub fn value_at(&self, t: Time) -> &BVec {
        if t < self.first_time() {
            return match &self.left {
                LeftTail::Const(v) => v,
                LeftTail::Periodic(p) => {
                    p.value_at_offset((t - self.first_time()).rem_euclid(p.period()))
                }
            };
        }
        if t >= self.last_time() {
            if let RightTail::Periodic(p) = &self.right {
                return p.value_at_offset((t - self.last_time()).rem_euclid(p.period()));
            }
            return &self.events.last().unwrap().1;
        }
        let i = match self.events.binary_search_by(|(et, _)| et.cmp(&t)) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        &self.events[i].1
    }

    /// The limit at -inf, when it exists (constant left tail).
    pub fn initial_value(&self) -> Option<&BVec> {
        match &self.left {
            LeftTail::Const(v) => Some(v),
            LeftTail::Periodic(_) => None,
        }
    }

    /// The limit at +inf, when it exists (constant right tail).
    pub fn final_value(&self) -> Option<&BVec> {
        match self.right {
            RightTail::Const => Some(&self.events.last().unwrap().1),
            RightTail::Periodic(_) => None,
        }
    }

    pub fn membership_class(&self) -> MembershipClass {
        MembershipClass {
            has_initial: self.initial_value().is_some(),
            has_final: self.final_value().is_some(),
        }
    }

    /// Smallest `t` with `f(t) != initial value`; `None` for constant
    /// signals.  Requires an initial value.
    pub fn first_departure(&self) -> Option<Time> {
        let v = self
            .initial_value()
            .expect("first_departure requires an initial value")
            .clone();
        for (t, ev) in &self.events {
            if *ev != v {
                return Some(*t);
            }
        }
        if let RightTail::Periodic(p) = &self.right {
            let mut acc = Time::zero();
            for (d, pv) in p.segs() {
                if *pv != v {
                    return Some(self.last_time() + acc);
                }
                acc = acc + *d;
            }
        }
        None
    }

    /// Greatest `t` with `f(t^-) != final value`, i.e. the instant from which
    /// the signal stays at its final value; `None` for constant signals.
    /// Requires a final value.
    pub fn last_departure(&self) -> Option<Time> {
        let v = self
            .final_value()
            .expect("last_departure requires a final value")
            .clone();
        // Walk events from the end: find where the trailing run of v starts.
        let mut idx = self.events.len();
        while idx > 0 && self.events[idx - 1].1 == v {
            idx -= 1;
        }
        if idx > 0 {
            // events[idx] is the first event of the trailing run.
            return Some(self.events[idx].0);
        }
        // Every event already carries v; look into the left tail.
        match &self.left {
            LeftTail::Const(w) => {
                if *w == v {
                    None
                } else {
                    Some(self.first_time())
                }
            }
            LeftTail::Periodic(p) => {
                // Length of the trailing run of v in the pattern (the run
                // ending just below the anchor).
                let mut run = Time::zero();
                for (d, pv) in p.segs().iter().rev() {
                    if *pv == v {
                        run = run + *d;
                    } else {
                        break;
                    }
                }
                Some(self.first_time() - run)
            }
        }
    }

    /// Coordinatewise complement.
    pub fn complement(&self) -> Signal {
        let flip_pat = |p: &Pattern| Pattern {
            segs: p
                .segs
                .iter()
                .map(|(d, v)| (*d, v.complement()))
                .collect(),
        };
        let sig = Signal {
            dim: self.dim,
            left: match &self.left {
                LeftTail::Const(v) => LeftTail::Const(v.complement()),
                LeftTail::Periodic(p) => LeftTail::Periodic(flip_pat(p)),
            },
            events: self
                .events
                .iter()
                .map(|(t, v)| (*t, v.complement()))
                .collect(),
            right: match &self.right {
                RightTail::Const => RightTail::Const,
                RightTail::Periodic(p) => RightTail::Periodic(flip_pat(p)),
            },
        };
        debug_assert!(sig.check_canonical().is_ok());
        sig
    }

    /// Time translate: the signal `t -> f(t - tau)`.
    pub fn shift(&self, tau: Time) -> Signal {
        // A fully periodic signal keeps its canonical anchor in [0, q);
        // rebuild it around the translated origin.
        if self.is_fully_periodic_form() {
            if let LeftTail::Periodic(p) = &self.left {
                let ext = PeriodicExt::new(p, self.first_time() + tau);
                return Signal::fully_periodic(self.dim, &ext);
            }
        }
        let sig = Signal {
            dim: self.dim,
            left: self.left.clone(),
            events: self.events.iter().map(|(t, v)| (*t + tau, v.clone())).collect(),
            right: self.right.clone(),
        };
        // Shifting moves a canonical constant signal's anchor off 0.
        if sig.events.len() == 1
            && matches!(sig.right, RightTail::Const)
            && matches!(&sig.left, LeftTail::Const(v) if *v == sig.events[0].1)
        {
            return Signal::constant(sig.events[0].1.clone());
        }
        debug_assert!(sig.check_canonical().is_ok());
        sig
    }

    /// All change points of the signal inside `[lo, hi]` (including tail
    /// regions), sorted.
    pub fn breakpoints_in(&self, lo: Time, hi: Time) -> Vec<Time> {
        let mut out = Vec::new();
        if lo > hi {
            return out;
        }
        if let LeftTail::Periodic(p) = &self.left {
            let ext = PeriodicExt::new(p, self.first_time());
            for c in ext.changes_in(lo, Time::min(hi, self.first_time())) {
                if c < self.first_time() {
                    out.push(c);
                }
            }
        }
        for (t, _) in &self.events {
            if *t >= lo && *t <= hi {
                out.push(*t);
            }
        }
        if let RightTail::Periodic(p) = &self.right {
            let ext = PeriodicExt::new(p, self.last_time());
            for c in ext.changes_in(Time::max(lo, self.last_time()), hi) {
                if c > self.last_time() {
                    out.push(c);
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    /// Pairing: the signal `t -> (x(t), y(t))` of dimension `x.dim + y.dim`.
    pub fn concat(x: &Signal, y: &Signal) -> Signal {
        let dim = x.dim + y.dim;
        let a = Time::min(x.first_time(), y.first_time());
        let t_last = Time::max(x.last_time(), y.last_time());

        let left: LeftTail = match (&x.left, &y.left) {
            (LeftTail::Const(u), LeftTail::Const(v)) => LeftTail::Const(u.concat(v)),
            _ => {
                let px = x.left_period();
                let py = y.left_period();
                let big = match (px, py) {
                    (Some(p), Some(q)) => Time::lcm(p, q),
                    (Some(p), None) | (None, Some(p)) => p,
                    (None, None) => unreachable!(),
                };
                LeftTail::Periodic(sample_pattern(x, y, a - big, a))
            }
        };
        let right: RightTail = match (&x.right, &y.right) {
            (RightTail::Const, RightTail::Const) => RightTail::Const,
            _ => {
                let px = x.right_period();
                let py = y.right_period();
                let big = match (px, py) {
                    (Some(p), Some(q)) => Time::lcm(p, q),
                    (Some(p), None) | (None, Some(p)) => p,
                    (None, None) => unreachable!(),
                };
                RightTail::Periodic(sample_pattern(x, y, t_last, t_last + big))
            }
        };

        let mut times = vec![a, t_last];
        times.extend(x.breakpoints_in(a, t_last));
        times.extend(y.breakpoints_in(a, t_last));
        times.sort();
        times.dedup();
        let events: Vec<(Time, BVec)> = times
            .into_iter()
            .map(|t| (t, x.value_at(t).concat(y.value_at(t))))
            .collect();
        Signal::make(dim, left, events, right).expect("pairing of valid signals is valid")
    }

    fn left_period(&self) -> Option<Time> {
        match &self.left {
            LeftTail::Const(_) => None,
            LeftTail::Periodic(p) => Some(p.period()),
        }
    }

    fn right_period(&self) -> Option<Time> {
        match &self.right {
            RightTail::Const => None,
            RightTail::Periodic(p) => Some(p.period()),
        }
    }

    /// Restriction to a coordinate range.
    pub fn project(&self, range: std::ops::Range<usize>) -> Result<Signal> {
        if range.start >= range.end || range.end > self.dim {
            return Err(Error::RangeOutOfBounds {
                lo: range.start,
                hi: range.end,
                dim: self.dim,
            });
        }
        let dim = range.end - range.start;
        let proj_pat = |p: &Pattern| Pattern {
            segs: p
                .segs
                .iter()
                .map(|(d, v)| (*d, v.project(range.clone())))
                .collect(),
        };
        let left = match &self.left {
            LeftTail::Const(v) => LeftTail::Const(v.project(range.clone())),
            LeftTail::Periodic(p) => LeftTail::Periodic(proj_pat(p)),
        };
        let right = match &self.right {
            RightTail::Const => RightTail::Const,
            RightTail::Periodic(p) => RightTail::Periodic(proj_pat(p)),
        };
        let events = self
            .events
            .iter()
            .map(|(t, v)| (*t, v.project(range.clone())))
            .collect();
        Signal::make(dim, left, events, right)
    }
}

/// One period of the pairing of `x` and `y` sampled on `[lo, hi)`, cut so
/// that offset 0 corresponds to `lo`.
fn sample_pattern(x: &Signal, y: &Signal, lo: Time, hi: Time) -> Pattern {
    let mut times = vec![lo];
    for c in x.breakpoints_in(lo, hi) {
        if c > lo && c < hi {
            times.push(c);
        }
    }
    for c in y.breakpoints_in(lo, hi) {
        if c > lo && c < hi {
            times.push(c);
        }
    }
    times.sort();
    times.dedup();
    let mut segs = Vec::new();
    for (i, t) in times.iter().enumerate() {
        let end = if i + 1 < times.len() { times[i + 1] } else { hi };
        segs.push((end - *t, x.value_at(*t).concat(y.value_at(*t))));
    }
    Pattern { segs }
}

impl fmt::Display for Signal {
    /// Canonical multi-line body (without a name header); used for
    /// serialization and for the deterministic ordering of universes.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.left {
            LeftTail::Const(v) => writeln!(f, "left const {v}")?,
            LeftTail::Periodic(p) => {
                write!(f, "left periodic")?;
                for (d, v) in p.segs() {
                    write!(f, " {d}:{v}")?;
                }
                writeln!(f)?;
            }
        }
        write!(f, "events")?;
        for (t, v) in &self.events {
            write!(f, " {t}:{v}")?;
        }
        writeln!(f)?;
        match &self.right {
            RightTail::Const => write!(f, "right const"),
            RightTail::Periodic(p) => {
                write!(f, "right periodic")?;
                for (d, v) in p.segs() {
                    write!(f, " {d}:{v}")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Debug for Signal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Signal<{}>{{ {} }}", self.dim, self.to_string().replace('\n', " | "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BVec {
        BVec::from_bits(s).unwrap()
    }

    fn t(n: i64) -> Time {
        Time::int(n)
    }

    fn tr(n: i64, d: i64) -> Time {
        Time::new(n, d)
    }

    fn pat(segs: &[(Time, &str)]) -> Pattern {
        Pattern::new(segs.iter().map(|(d, v)| (*d, bv(v))).collect()).unwrap()
    }

    #[test]
    fn value_at_covers_all_regions() {
        // left periodic [(1,0),(1,1)] ending at 0, one event (0,1), right const.
        let s = Signal::make(
            1,
            LeftTail::Periodic(pat(&[(t(1), "0"), (t(1), "1")])),
            vec![(t(0), bv("1"))],
            RightTail::Const,
        )
        .unwrap();
        // t = -3/2: offset (-3/2) mod 2 = 1/2 -> first segment -> 0.
        assert_eq!(s.value_at(tr(-3, 2)), &bv("0"));
        assert_eq!(s.value_at(t(-1)), &bv("1"));
        assert_eq!(s.value_at(tr(-1, 2)), &bv("1"));
        assert_eq!(s.value_at(t(0)), &bv("1"));
        assert_eq!(s.value_at(t(100)), &bv("1"));
    }

    #[test]
    fn constant_signal_normalizes_anchor_to_zero() {
        let s = Signal::make(
            1,
            LeftTail::Const(bv("0")),
            vec![(t(5), bv("0"))],
            RightTail::Const,
        )
        .unwrap();
        assert_eq!(s, Signal::constant(bv("0")));
        assert_eq!(s.first_time(), t(0));
        assert_eq!(s.first_departure(), None);
        assert_eq!(s.last_departure(), None);
    }

    #[test]
    fn redundant_events_are_merged() {
        let s = Signal::make(
            1,
            LeftTail::Const(bv("0")),
            vec![
                (t(0), bv("0")),
                (t(1), bv("1")),
                (t(2), bv("1")),
                (t(3), bv("0")),
                (t(4), bv("0")),
            ],
            RightTail::Const,
        )
        .unwrap();
        assert_eq!(
            s.events(),
            &[(t(1), bv("1")), (t(3), bv("0"))]
        );
        assert_eq!(s.first_departure(), Some(t(1)));
        assert_eq!(s.last_departure(), Some(t(3)));
    }

    #[test]
    fn pattern_minimal_period() {
        // [(1,0),(1,1),(1,0),(1,1)] has minimal period 2.
        let s = Signal::make(
            1,
            LeftTail::Periodic(pat(&[(t(1), "0"), (t(1), "1"), (t(1), "0"), (t(1), "1")])),
            vec![(t(0), bv("0")), (t(1), bv("1")), (t(2), bv("0"))],
            RightTail::Const,
        )
        .unwrap();
        match s.left_tail() {
            LeftTail::Periodic(p) => assert_eq!(p.period(), t(2)),
            _ => panic!("expected periodic left tail"),
        }
    }

    #[test]
    fn functional_equality_is_structural() {
        // f is 0 on (-inf, 1), then alternates 1/0 with period 2.  The
        // trailing 0 of each cycle blends into the constant prefix, so the
        // periodic regime really starts at t = 0.
        let a = Signal::make(
            1,
            LeftTail::Const(bv("0")),
            vec![
                (t(0), bv("0")),
                (t(1), bv("1")),
                (t(2), bv("0")),
                (t(3), bv("1")),
            ],
            RightTail::Periodic(pat(&[(t(1), "1"), (t(1), "0")])),
        )
        .unwrap();
        let b = Signal::make(
            1,
            LeftTail::Const(bv("0")),
            vec![(t(0), bv("0"))],
            RightTail::Periodic(pat(&[(t(1), "0"), (t(1), "1")])),
        )
        .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.events(), &[(t(0), bv("0"))]);
        for k in -7..9 {
            assert_eq!(a.value_at(tr(k, 2)), b.value_at(tr(k, 2)));
        }
        assert_eq!(a.value_at(t(1)), &bv("1"));
        assert_eq!(a.value_at(t(4)), &bv("0"));
        assert_eq!(a.value_at(t(-3)), &bv("0"));
    }

    #[test]
    fn right_anchor_tightens() {
        // Events spell out one period of the right tail; moreover the
        // constant prefix 0 matches the pattern's 0-phase for one more unit,
        // so the anchor retracts all the way to t = -1.
        let a = Signal::make(
            1,
            LeftTail::Const(bv("0")),
            vec![(t(0), bv("1")), (t(1), bv("0")), (t(2), bv("1"))],
            RightTail::Periodic(pat(&[(t(1), "1"), (t(1), "0")])),
        )
        .unwrap();
        let b = Signal::make(
            1,
            LeftTail::Const(bv("0")),
            vec![(t(0), bv("1"))],
            RightTail::Periodic(pat(&[(t(1), "1"), (t(1), "0")])),
        )
        .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.last_time(), t(-1));
        assert_eq!(a.events(), &[(t(-1), bv("0"))]);
        match a.right_tail() {
            RightTail::Periodic(p) => {
                assert_eq!(p.segs(), &[(t(1), bv("0")), (t(1), bv("1"))])
            }
            _ => panic!("expected periodic right tail"),
        }
        // Same function either way.
        for k in -6..8 {
            assert_eq!(a.value_at(tr(k, 2)), b.value_at(tr(k, 2)));
        }
        assert_eq!(a.value_at(t(0)), &bv("1"));
    }

    #[test]
    fn left_anchor_tightens() {
        // The events spell out the periodic extension until the signal
        // settles at 1 from t = 4 on.  The last genuine change is at 4 and
        // the extension agrees up to (not including) 5, so the canonical
        // form keeps a single event at 4.
        let a = Signal::make(
            1,
            LeftTail::Periodic(pat(&[(t(1), "1"), (t(1), "0")])),
            vec![
                (t(0), bv("1")),
                (t(1), bv("0")),
                (t(2), bv("1")),
                (t(3), bv("0")),
                (t(4), bv("1")),
            ],
            RightTail::Const,
        )
        .unwrap();
        assert_eq!(a.first_time(), t(4));
        assert_eq!(a.events(), &[(t(4), bv("1"))]);
        match a.left_tail() {
            LeftTail::Periodic(p) => {
                assert_eq!(p.segs(), &[(t(1), bv("1")), (t(1), bv("0"))])
            }
            _ => panic!("expected periodic left tail"),
        }
        // The same function described with its anchor one step later must
        // canonicalize identically.
        let b = Signal::make(
            1,
            LeftTail::Periodic(pat(&[(t(1), "0"), (t(1), "1")])),
            vec![(t(5), bv("1"))],
            RightTail::Const,
        )
        .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.value_at(t(3)), &bv("0"));
        assert_eq!(a.value_at(tr(9, 2)), &bv("1"));
        assert_eq!(a.value_at(t(5)), &bv("1"));
        assert_eq!(a.value_at(t(100)), &bv("1"));
        assert_eq!(a.value_at(t(-1)), &bv("0"));
    }

    #[test]
    fn fully_periodic_signal_has_one_form() {
        // f has period 3: value 0 on [0,1), 1 on [1,3), repeating everywhere.
        let a = Signal::make(
            1,
            LeftTail::Periodic(pat(&[(t(1), "0"), (t(2), "1")])),
            vec![(t(0), bv("0")), (t(1), bv("1"))],
            RightTail::Periodic(pat(&[(t(2), "1"), (t(1), "0")])),
        )
        .unwrap();
        // The same function described one period later.
        let b = Signal::make(
            1,
            LeftTail::Periodic(pat(&[(t(1), "0"), (t(2), "1")])),
            vec![(t(3), bv("0")), (t(4), bv("1"))],
            RightTail::Periodic(pat(&[(t(2), "1"), (t(1), "0")])),
        )
        .unwrap();
        assert_eq!(a, b);
        assert!(a.check_canonical().is_ok());
        // Spot-check the function.
        assert_eq!(a.value_at(t(0)), &bv("0"));
        assert_eq!(a.value_at(tr(1, 2)), &bv("0"));
        assert_eq!(a.value_at(t(1)), &bv("1"));
        assert_eq!(a.value_at(t(2)), &bv("1"));
        assert_eq!(a.value_at(t(3)), &bv("0"));
        assert_eq!(a.value_at(t(-2)), &bv("1"));
    }

    #[test]
    fn complement_is_involution() {
        let s = Signal::make(
            2,
            LeftTail::Const(bv("00")),
            vec![(t(0), bv("10")), (t(1), bv("11"))],
            RightTail::Periodic(pat(&[(t(1), "11"), (t(1), "01")])),
        )
        .unwrap();
        assert_eq!(s.complement().complement(), s);
        assert_eq!(s.complement().value_at(tr(1, 2)), &bv("01"));
    }

    #[test]
    fn shift_translates_time() {
        let s = Signal::make(
            1,
            LeftTail::Const(bv("0")),
            vec![(t(0), bv("1"))],
            RightTail::Const,
        )
        .unwrap();
        let sh = s.shift(tr(3, 2));
        assert_eq!(sh.value_at(t(1)), &bv("0"));
        assert_eq!(sh.value_at(tr(3, 2)), &bv("1"));
        assert_eq!(sh.shift(tr(-3, 2)), s);
    }

    #[test]
    fn concat_project_roundtrip() {
        let x = Signal::make(
            1,
            LeftTail::Const(bv("0")),
            vec![(t(0), bv("1")), (t(2), bv("0"))],
            RightTail::Const,
        )
        .unwrap();
        let y = Signal::make(
            1,
            LeftTail::Periodic(pat(&[(t(1), "0"), (t(1), "1")])),
            vec![(t(1), bv("1"))],
            RightTail::Const,
        )
        .unwrap();
        let z = Signal::concat(&x, &y);
        assert_eq!(z.dim(), 2);
        assert_eq!(z.project(0..1).unwrap(), x);
        assert_eq!(z.project(1..2).unwrap(), y);
        for k in -9..9 {
            let tt = tr(k, 2);
            assert_eq!(
                z.value_at(tt),
                &x.value_at(tt).concat(y.value_at(tt))
            );
        }
    }

    #[test]
    fn membership_classes() {
        let both = Signal::constant(bv("1"));
        assert_eq!(
            both.membership_class(),
            MembershipClass {
                has_initial: true,
                has_final: true
            }
        );
        let no_final = Signal::make(
            1,
            LeftTail::Const(bv("0")),
            vec![(t(0), bv("1"))],
            RightTail::Periodic(pat(&[(t(1), "1"), (t(1), "0")])),
        )
        .unwrap();
        assert!(no_final.membership_class().has_initial);
        assert!(!no_final.membership_class().has_final);
        assert_eq!(no_final.initial_value(), Some(&bv("0")));
        assert_eq!(no_final.final_value(), None);
    }

    #[test]
    fn departure_instants() {
        // Initial departure inside the right periodic tail: every event
        // carries the initial value.
        let s = Signal::make(
            1,
            LeftTail::Const(bv("1")),
            vec![(t(0), bv("1"))],
            RightTail::Periodic(pat(&[(t(2), "1"), (t(1), "0")])),
        )
        .unwrap();
        assert_eq!(s.first_departure(), Some(t(2)));

        // Final departure inside the left periodic tail.
        let s2 = Signal::make(
            1,
            LeftTail::Periodic(pat(&[(t(1), "0"), (t(3), "1")])),
            vec![(t(0), bv("1"))],
            RightTail::Const,
        )
        .unwrap();
        // Pattern ends with a run of 1 of length 3; f equals 1 from -3 on.
        assert_eq!(s2.last_departure(), Some(t(-3)));
    }

    #[test]
    fn single_event_anchoring_periodic_tail_may_repeat_const() {
        // f = 1 on (-inf, 0), then the periodic tail starts at 0 with
        // value 1 as well: legal, and canonical.
        let s = Signal::make(
            1,
            LeftTail::Const(bv("1")),
            vec![(t(0), bv("1"))],
            RightTail::Periodic(pat(&[(t(1), "1"), (t(1), "0")])),
        )
        .unwrap();
        assert_eq!(s.events(), &[(t(0), bv("1"))]);
        assert_eq!(s.value_at(t(1)), &bv("0"));
        assert_eq!(s.value_at(t(-5)), &bv("1"));
    }

    #[test]
    fn display_roundtrips_structure() {
        let s = Signal::make(
            1,
            LeftTail::Const(bv("0")),
            vec![(tr(1, 2), bv("0"))],
            RightTail::Periodic(pat(&[(t(1), "0"), (tr(3, 2), "1")])),
        )
        .unwrap();
        let text = s.to_string();
        assert!(text.contains("left const 0"), "{text}");
        assert!(text.contains("events 1/2:0"), "{text}");
        assert!(text.contains("right periodic 1:0 3/2:1"), "{text}");
    }
}
