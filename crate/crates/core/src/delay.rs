//! The symmetrical bounded delay: a state x is a valid response to an
//! input u when, at every instant, x lies between the infimum and the
//! supremum of u over the trailing half-open window of width d.

use crate::error::{Error, Result};
use crate::pseudo_system::PseudoSystem;
use crate::signal::{window_extrema, LeftTail, RightTail, Signal, StepFunction, WindowMode};
use crate::signal::pointwise_leq;
use crate::time::Time;

/// Window width of the delay; must be strictly positive.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct DelayParams {
    pub d: Time,
}

impl DelayParams {
    pub fn new(d: Time) -> Result<DelayParams> {
        if !d.is_positive() {
            return Err(Error::NonPositiveWidth);
        }
        Ok(DelayParams { d })
    }
}

fn require_plain(x: &Signal) -> Result<()> {
    if x.dim() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: x.dim(),
        });
    }
    if !matches!(x.left_tail(), LeftTail::Const(_)) || !matches!(x.right_tail(), RightTail::Const)
    {
        return Err(Error::PeriodicUnsupported);
    }
    Ok(())
}

/// Exact membership in the delay relation:
/// `inf_{s in [t-d,t)} u(s) <= x(t) <= sup_{s in [t-d,t)} u(s)` for all t.
pub fn delay_membership(u: &Signal, x: &Signal, p: DelayParams) -> Result<bool> {
    require_plain(u)?;
    require_plain(x)?;
    let inf = window_extrema(u, p.d, WindowMode::Inf)?;
    let sup = window_extrema(u, p.d, WindowMode::Sup)?;
    let e = StepFunction::embed(x);
    Ok(pointwise_leq(&inf, &e)? && pointwise_leq(&e, &sup)?)
}

/// The pure-delay solutions `x(t) = u(t - tau)` for the given shifts,
/// deduplicated by canonical form.  Every shift must lie in `(0, d]`.
pub fn pure_delay_states(u: &Signal, p: DelayParams, taus: &[Time]) -> Result<Vec<Signal>> {
    require_plain(u)?;
    let mut out: Vec<Signal> = Vec::new();
    for tau in taus {
        if !tau.is_positive() || *tau > p.d {
            return Err(Error::TauOutOfRange { tau: *tau, d: p.d });
        }
        let shifted = u.shift(*tau);
        if !out.contains(&shifted) {
            out.push(shifted);
        }
    }
    out.sort();
    Ok(out)
}

/// A finite extensional window onto the delay relation: for each input,
/// relate every universe state (pure delays plus extra candidates) that
/// passes exact membership.
pub fn delay_snapshot(
    inputs: &[Signal],
    p: DelayParams,
    taus: &[Time],
    extra_candidates: &[Signal],
) -> Result<PseudoSystem> {
    for u in inputs {
        require_plain(u)?;
    }
    for x in extra_candidates {
        require_plain(x)?;
    }
    let mut states: Vec<Signal> = Vec::new();
    for u in inputs {
        for x in pure_delay_states(u, p, taus)? {
            if !states.contains(&x) {
                states.push(x);
            }
        }
    }
    for x in extra_candidates {
        if !states.contains(x) {
            states.push(x.clone());
        }
    }
    states.sort();
    let mut relation = Vec::new();
    for (iu, u) in inputs.iter().enumerate() {
        for (ix, x) in states.iter().enumerate() {
            if delay_membership(u, x, p)? {
                relation.push((iu, ix));
            }
        }
    }
    PseudoSystem::new(1, 1, inputs.to_vec(), states, &relation)
}
