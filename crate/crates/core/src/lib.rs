//! Exact algebra of asynchronous pseudo-systems.
//!
//! The crate models piecewise-constant Boolean signals over rational time,
//! finite set-valued input/state maps over signal universes, the operator
//! algebra on those maps, property classification, and bounded-delay
//! conditions.  All arithmetic is exact; canonical forms make structural
//! equality coincide with functional equality.

pub mod bvec;
pub mod delay;
pub mod error;
pub mod laws;
pub mod properties;
pub mod pseudo_system;
pub mod signal;
pub mod text;
pub mod time;

pub use delay::DelayParams;
pub use laws::{
    check_transfer_laws, run_identity_suite, run_transfer_suite, Construction, LawFailure,
    LawOutcome,
};
pub use pseudo_system::PseudoSystem;

pub use bvec::BVec;
pub use error::{Error, Result};
pub use signal::{
    pointwise_leq, window_extrema, LeftTail, MembershipClass, Pattern, RightTail, Signal,
    StepFunction, StepSeg, WindowMode,
};
pub use time::Time;
