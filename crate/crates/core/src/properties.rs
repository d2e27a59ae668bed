//! Classification of a pseudo-system's behaviour at the two ends of the
//! time axis: which states have limits there, whether those limits race,
//! and the extremal instants bounding the transient behaviour.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::bvec::BVec;
use crate::error::{Error, Result};
use crate::pseudo_system::PseudoSystem;
use crate::signal::Signal;
use crate::time::Time;

/// Which end of the time axis a report describes.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Initial,
    Final,
}

/// State-limit levels, ordered from weakest to strongest.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateLevel {
    /// Some reachable state lacks a limit on this side.
    None,
    /// Every reachable state has a limit.
    HasStates,
    /// Additionally, all states of any one input share the same limit.
    RaceFree,
    /// Additionally, a single limit value is shared across all inputs.
    Constant,
}

/// Time levels, ordered from weakest to strongest.  In the finite
/// representation the strongest level always holds whenever the relevant
/// state sets are nonempty; the numeric instants carry the information.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeLevel {
    Unbounded,
    Bounded,
    Fix,
}

/// The nine combinations of state level (rows: has-states, race-free,
/// constant) and time level (columns: unbounded, bounded, fix).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cell {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
    I,
}

fn cell_of(state: StateLevel, time: TimeLevel) -> Option<Cell> {
    use Cell::*;
    let row = match state {
        StateLevel::None => return None,
        StateLevel::HasStates => 0,
        StateLevel::RaceFree => 1,
        StateLevel::Constant => 2,
    };
    let col = match time {
        TimeLevel::Unbounded => 0,
        TimeLevel::Bounded => 1,
        TimeLevel::Fix => 2,
    };
    Some([A, B, C, D, E, F, G, H, I][row * 3 + col])
}

/// Per-input detail of a boundary report.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PerInput {
    pub input: Signal,
    /// Limit values of the input's states that possess one.
    pub values: BTreeSet<BVec>,
    /// For the initial side: the largest instant below which every
    /// limit-possessing state still sits at its limit (minimum of first
    /// departures).  For the final side: the smallest instant from which
    /// every such state has settled (maximum of last departures).  `None`
    /// when all relevant states are constant, i.e. any instant works.
    pub extremal_instant: Option<Time>,
}

/// Classification of one side of a pseudo-system.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BoundaryReport {
    pub side: Side,
    pub state_level: StateLevel,
    /// The shared limit when `state_level` is `Constant` and the relation
    /// is nonempty.
    pub constant_value: Option<BVec>,
    pub time_level: TimeLevel,
    pub per_input: Vec<PerInput>,
    /// Extremal instant across all inputs (min for initial, max for final).
    pub global_instant: Option<Time>,
    pub cell: Option<Cell>,
    /// True only for the empty relation, which satisfies every property
    /// trivially (and then `constant_value` stays unset).
    pub vacuous: bool,
    /// On the final side the stored instants bound valid settle times from
    /// below with the bound itself attained; kept explicit because the
    /// defining inequality there is strict (`t > t_f`).
    pub boundary_exclusive: bool,
}

impl BoundaryReport {
    /// Structural consistency: the cell matches the levels, vacuity implies
    /// the trivial classification with no value singled out, race-freedom
    /// caps every per-input value set, and the exclusivity flag follows the
    /// side.
    pub fn check_conformance(&self) -> bool {
        self.cell == cell_of(self.state_level, self.time_level)
            && (!self.vacuous
                || (self.state_level == StateLevel::Constant
                    && self.time_level == TimeLevel::Fix
                    && self.constant_value.is_none()))
            && (self.state_level < StateLevel::RaceFree
                || self.per_input.iter().all(|e| e.values.len() <= 1))
            && self.boundary_exclusive == (self.side == Side::Final)
    }
}

fn limit_of(x: &Signal, side: Side) -> Option<&BVec> {
    match side {
        Side::Initial => x.initial_value(),
        Side::Final => x.final_value(),
    }
}

fn departure_of(x: &Signal, side: Side) -> Option<Time> {
    match side {
        Side::Initial => x.first_departure(),
        Side::Final => x.last_departure(),
    }
}

/// Classify one side of `f`.
pub fn boundary_report(f: &PseudoSystem, side: Side) -> BoundaryReport {
    let boundary_exclusive = side == Side::Final;
    if f.is_null() {
        // The empty relation satisfies all properties vacuously; no value
        // is singled out.
        return BoundaryReport {
            side,
            state_level: StateLevel::Constant,
            constant_value: None,
            time_level: TimeLevel::Fix,
            per_input: Vec::new(),
            global_instant: None,
            cell: Some(Cell::I),
            vacuous: true,
            boundary_exclusive,
        };
    }

    let mut per_input = Vec::new();
    let mut all_have_limits = true;
    let mut race_free = true;
    let mut global_values: BTreeSet<BVec> = BTreeSet::new();
    let mut global_instant: Option<Time> = None;

    for (iu, u) in f.inputs().iter().enumerate() {
        let states: Vec<&Signal> = f.image(iu).map(|ix| &f.states()[ix]).collect();
        if states.is_empty() {
            continue;
        }
        let mut values = BTreeSet::new();
        let mut extremal: Option<Time> = None;
        for x in &states {
            match limit_of(x, side) {
                Some(v) => {
                    values.insert(v.clone());
                    global_values.insert(v.clone());
                    if let Some(dep) = departure_of(x, side) {
                        extremal = Some(match (extremal, side) {
                            (None, _) => dep,
                            (Some(e), Side::Initial) => Time::min(e, dep),
                            (Some(e), Side::Final) => Time::max(e, dep),
                        });
                    }
                }
                None => all_have_limits = false,
            }
        }
        if values.len() > 1 {
            race_free = false;
        }
        if let Some(e) = extremal {
            global_instant = Some(match (global_instant, side) {
                (None, _) => e,
                (Some(g), Side::Initial) => Time::min(g, e),
                (Some(g), Side::Final) => Time::max(g, e),
            });
        }
        per_input.push(PerInput {
            input: u.clone(),
            values,
            extremal_instant: extremal,
        });
    }

    let state_level = if !all_have_limits {
        StateLevel::None
    } else if global_values.len() == 1 {
        StateLevel::Constant
    } else if race_free {
        StateLevel::RaceFree
    } else {
        StateLevel::HasStates
    };
    let constant_value = if state_level == StateLevel::Constant {
        global_values.iter().next().cloned()
    } else {
        None
    };
    // With finite, explicitly enumerated state sets the strongest time
    // level always holds; the instants above are the real content.
    let time_level = TimeLevel::Fix;

    BoundaryReport {
        side,
        state_level,
        constant_value,
        time_level,
        per_input,
        global_instant,
        cell: cell_of(state_level, time_level),
        vacuous: false,
        boundary_exclusive,
    }
}

/// The state function on one side: each admissible input mapped to the set
/// of its states' limit values, plus the overall union.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StateFunctionReport {
    pub side: Side,
    pub phi: Vec<(Signal, BTreeSet<BVec>)>,
    pub theta: BTreeSet<BVec>,
}

impl StateFunctionReport {
    pub fn phi_of(&self, u: &Signal) -> BTreeSet<BVec> {
        self.phi
            .iter()
            .find(|(v, _)| v == u)
            .map(|(_, s)| s.clone())
            .unwrap_or_default()
    }
}

/// Compute the state function; errors if any reachable state lacks the
/// required limit.
pub fn state_function(f: &PseudoSystem, side: Side) -> Result<StateFunctionReport> {
    let mut phi = Vec::new();
    let mut theta = BTreeSet::new();
    for (iu, u) in f.inputs().iter().enumerate() {
        let mut set = BTreeSet::new();
        let mut any = false;
        for ix in f.image(iu) {
            any = true;
            let x = &f.states()[ix];
            match limit_of(x, side) {
                Some(v) => {
                    set.insert(v.clone());
                    theta.insert(v.clone());
                }
                None => {
                    return Err(Error::MissingLimit {
                        side: match side {
                            Side::Initial => "initial",
                            Side::Final => "final",
                        },
                        input: u.to_string().replace('\n', "; "),
                        state: x.to_string().replace('\n', "; "),
                    })
                }
            }
        }
        if any {
            phi.push((u.clone(), set));
        }
    }
    Ok(StateFunctionReport { side, phi, theta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{LeftTail, Pattern, RightTail};

    fn bv(s: &str) -> BVec {
        BVec::from_bits(s).unwrap()
    }

    fn t(n: i64) -> Time {
        Time::int(n)
    }

    fn pulse(from: i64, to: i64) -> Signal {
        Signal::make(
            1,
            LeftTail::Const(bv("0")),
            vec![(t(from), bv("1")), (t(to), bv("0"))],
            RightTail::Const,
        )
        .unwrap()
    }

    fn step(at: i64) -> Signal {
        Signal::make(
            1,
            LeftTail::Const(bv("0")),
            vec![(t(at), bv("1"))],
            RightTail::Const,
        )
        .unwrap()
    }

    fn step_down(at: i64) -> Signal {
        Signal::make(
            1,
            LeftTail::Const(bv("1")),
            vec![(t(at), bv("0"))],
            RightTail::Const,
        )
        .unwrap()
    }

    fn clocked() -> Signal {
        Signal::make(
            1,
            LeftTail::Periodic(Pattern::new(vec![(t(1), bv("0")), (t(1), bv("1"))]).unwrap()),
            vec![(t(0), bv("0"))],
            RightTail::Const,
        )
        .unwrap()
    }

    #[test]
    fn null_relation_is_vacuous() {
        let f = PseudoSystem::new(1, 1, vec![step(0)], vec![step(1)], &[]).unwrap();
        let r = boundary_report(&f, Side::Initial);
        assert!(r.vacuous);
        assert_eq!(r.state_level, StateLevel::Constant);
        assert_eq!(r.constant_value, None);
        assert_eq!(r.time_level, TimeLevel::Fix);
        assert_eq!(r.cell, Some(Cell::I));
        assert!(r.per_input.is_empty());
    }

    #[test]
    fn constant_relation_hits_cell_i() {
        // Both states settle initially at 0.
        let f = PseudoSystem::new(
            1,
            1,
            vec![step(0), step(5)],
            vec![pulse(0, 2), pulse(1, 3)],
            &[(0, 0), (0, 1), (1, 0)],
        )
        .unwrap();
        let r = boundary_report(&f, Side::Initial);
        assert!(!r.vacuous);
        assert_eq!(r.state_level, StateLevel::Constant);
        assert_eq!(r.constant_value, Some(bv("0")));
        assert_eq!(r.cell, Some(Cell::I));
        // First departures: pulse(0,2) leaves 0 at t=0, pulse(1,3) at t=1;
        // the valid shared instant is the minimum.
        assert_eq!(r.global_instant, Some(t(0)));
        let e0 = &r.per_input[0];
        assert_eq!(e0.extremal_instant, Some(t(0)));
        assert_eq!(r.per_input[1].extremal_instant, Some(t(0)));

        // Final side: everything settles back at 0; last departures are 2
        // and 3, the shared instant is the max.
        let rf = boundary_report(&f, Side::Final);
        assert_eq!(rf.state_level, StateLevel::Constant);
        assert_eq!(rf.global_instant, Some(t(3)));
        assert!(rf.boundary_exclusive);
    }

    #[test]
    fn race_free_but_not_constant() {
        // Input 1 settles at 1, input 2 settles at 0: per-input unique but
        // globally two values.
        let f = PseudoSystem::new(
            1,
            1,
            vec![step(0), step(1)],
            vec![step_down(2), step(2)],
            &[(0, 1), (1, 0)],
        )
        .unwrap();
        let r = boundary_report(&f, Side::Final);
        assert_eq!(r.state_level, StateLevel::RaceFree);
        assert_eq!(r.constant_value, None);
        assert_eq!(r.cell, Some(Cell::F));
        for e in &r.per_input {
            assert!(e.values.len() <= 1);
        }
    }

    #[test]
    fn racing_states() {
        let f = PseudoSystem::new(
            1,
            1,
            vec![step(0)],
            vec![step_down(2), step(2)],
            &[(0, 0), (0, 1)],
        )
        .unwrap();
        let r = boundary_report(&f, Side::Final);
        assert_eq!(r.state_level, StateLevel::HasStates);
        assert_eq!(r.cell, Some(Cell::C));
    }

    #[test]
    fn missing_limits_give_none() {
        let f = PseudoSystem::new(
            1,
            1,
            vec![step(0)],
            vec![step(1), clocked()],
            &[(0, 0), (0, 1)],
        )
        .unwrap();
        let r = boundary_report(&f, Side::Initial);
        assert_eq!(r.state_level, StateLevel::None);
        assert_eq!(r.cell, None);
        // The clocked state is simply excluded from value/instant data.
        assert_eq!(r.per_input[0].values.len(), 1);

        // Final side is unaffected: clocked() settles at 0 finally, so both
        // states have final values -- but they disagree under one input.
        let rf = boundary_report(&f, Side::Final);
        assert_eq!(rf.state_level, StateLevel::HasStates);

        assert!(matches!(
            state_function(&f, Side::Initial),
            Err(Error::MissingLimit { side: "initial", .. })
        ));
        let sf = state_function(&f, Side::Final).unwrap();
        assert_eq!(sf.theta.len(), 2);
    }

    #[test]
    fn state_function_matches_definition() {
        let f = PseudoSystem::new(
            1,
            1,
            vec![step(0), step(7)],
            vec![pulse(0, 1), step(3)],
            &[(0, 0), (0, 1), (1, 1)],
        )
        .unwrap();
        let sf = state_function(&f, Side::Final).unwrap();
        assert_eq!(sf.phi_of(&step(0)), [bv("0"), bv("1")].into_iter().collect());
        assert_eq!(sf.phi_of(&step(7)), [bv("1")].into_iter().collect());
        // Non-admissible input: empty.
        assert_eq!(sf.phi_of(&step(9)), BTreeSet::new());
        assert_eq!(sf.theta, [bv("0"), bv("1")].into_iter().collect());
    }

    #[test]
    fn level_ordering_is_a_chain() {
        assert!(StateLevel::Constant > StateLevel::RaceFree);
        assert!(StateLevel::RaceFree > StateLevel::HasStates);
        assert!(StateLevel::HasStates > StateLevel::None);
        assert!(TimeLevel::Fix > TimeLevel::Bounded);
        assert!(TimeLevel::Bounded > TimeLevel::Unbounded);
    }
}
