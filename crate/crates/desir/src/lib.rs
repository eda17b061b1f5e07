//! Desk-scale inference engine for sets of desirable gambles under
//! pluggable closure operators.
//!
//! A gamble is an uncertain monetary reward over a finite possibility
//! space. A subject's dispositions are captured by a set of desirable
//! gambles; which gambles those dispositions *imply* is governed by a
//! closure operator that plays the role of a (possibly nonlinear) utility
//! scale. This crate represents finitely generated sets under a family of
//! built-in closure operators plus a catalog of closed-form sets, and on
//! top of the membership oracles provides:
//!
//! - consistency checks (avoiding partial/sure loss, coherence),
//! - lower and upper previsions by monotone bisection, with an exact LP
//!   route for the linear operator,
//! - conditioning (generalized Bayes rule), marginalisation and marginal
//!   extension,
//! - credal polytopes, emptiness certificates and vertex enumeration,
//! - decision criteria over finite option sets, including an ordered
//!   weighted average model that separates the two classic paired-choice
//!   experiments a linear scale cannot separate.
//!
//! See the `examples/` directory for one runnable example per capability
//! and the `desir` binary for the scenario-driven command line front end.

pub mod consistency;
pub mod credal;
pub mod decide;
pub mod demo;
pub mod gamble;
pub mod lp;
pub mod operators;
pub mod plot;
pub mod previsions;
pub mod sampling;
pub mod scenario;
pub mod structure;

pub use gamble::{
    classify, cutoff, gneq, is_measurable, is_positive, Classification, Event, Gamble,
    GambleError, Partition, PossibilitySpace,
};
pub use operators::{
    CatalogId, ClosureSpec, DesirSet, Membership, MembershipValue, OperatorKind, PriceFunctional,
    Tolerances, UtilityFn, Witness,
};

/// Tri-state verdict used by consistency checks and boundary reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TriState {
    Yes,
    No,
    Unknown,
}

impl TriState {
    pub fn from_bool(b: bool) -> Self {
        if b {
            TriState::Yes
        } else {
            TriState::No
        }
    }

    pub fn negate(self) -> Self {
        match self {
            TriState::Yes => TriState::No,
            TriState::No => TriState::Yes,
            TriState::Unknown => TriState::Unknown,
        }
    }
}
