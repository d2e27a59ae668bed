//! Sliding-window extrema over a half-open window `[t - d, t)`.

use crate::bvec::BVec;
use crate::error::{Error, Result};
use crate::signal::{LeftTail, RightTail, Signal, StepFunction, StepSeg};
use crate::time::Time;

use super::midpoint;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WindowMode {
    /// Coordinatewise OR over the window.
    Sup,
    /// Coordinatewise AND over the window.
    Inf,
}

/// The function `t -> OP { u(s) : s in [t - d, t) }` as a step function.
///
/// The result is generally not right-continuous, which is why it is a
/// [`StepFunction`] and not a [`Signal`].  `u` must have constant tails on
/// both sides and `d` must be positive.
pub fn window_extrema(u: &Signal, d: Time, mode: WindowMode) -> Result<StepFunction> {
    if !d.is_positive() {
        return Err(Error::NonPositiveWidth);
    }
    if !matches!(u.left_tail(), LeftTail::Const(_)) || !matches!(u.right_tail(), RightTail::Const) {
        return Err(Error::PeriodicUnsupported);
    }
    let v0 = u.initial_value().unwrap().clone();
    let vk = u.final_value().unwrap().clone();

    // The window value can only change when an event of u enters or leaves
    // the window, i.e. at event times and event times + d.
    let mut cands: Vec<Time> = Vec::new();
    for (t, _) in u.events() {
        cands.push(*t);
        cands.push(*t + d);
    }
    cands.sort();
    cands.dedup();

    let op = |u: &Signal, lo: Time, hi: Time| window_fold(u, lo, hi, mode);

    let mut segs = Vec::new();
    for (i, c) in cands.iter().enumerate() {
        let at = op(u, *c - d, *c);
        let after = if i + 1 < cands.len() {
            let m = midpoint(*c, cands[i + 1]);
            op(u, m - d, m)
        } else {
            vk.clone()
        };
        segs.push(StepSeg {
            time: *c,
            at,
            after,
        });
    }
    StepFunction::make(u.dim(), LeftTail::Const(v0), segs, RightTail::Const)
}

/// Fold of `u` over the half-open interval `[lo, hi)`.
fn window_fold(u: &Signal, lo: Time, hi: Time, mode: WindowMode) -> BVec {
    let mut acc = u.value_at(lo).clone();
    for t in u.breakpoints_in(lo, hi) {
        if t >= hi {
            continue;
        }
        let v = u.value_at(t);
        acc = match mode {
            WindowMode::Sup => acc.or(v),
            WindowMode::Inf => acc.and(v),
        };
    }
    acc
}
