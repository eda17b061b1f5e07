//! Possibility spaces, gambles, events and partitions.
//!
//! Everything downstream (closure operators, previsions, credal sets,
//! decision criteria) consumes these types. A [`Gamble`] is a finite real
//! vector indexed by the outcomes of a [`PossibilitySpace`]; an [`Event`] is
//! a subset of outcomes identified with its indicator; a [`Partition`] is a
//! disjoint cover by events. All values are immutable after construction and
//! all operations are pure.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GambleError {
    #[error("possibility space needs at least two distinct outcomes, got {0}")]
    SpaceTooSmall(usize),
    #[error("duplicate outcome label `{0}`")]
    DuplicateLabel(String),
    #[error("vector length {got} does not match space size {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("gambles live on different possibility spaces")]
    SpaceMismatch,
    #[error("gamble entries must be finite, found {0}")]
    NonFinite(f64),
    #[error("unknown outcome label `{0}`")]
    UnknownLabel(String),
    #[error("conditioning event must be nonempty")]
    EmptyEvent,
    #[error("invalid partition: {0}")]
    BadPartition(String),
}

/// Finite set of mutually exclusive outcome labels. Cheap to clone (shared).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PossibilitySpace {
    inner: Arc<SpaceInner>,
}

#[derive(Debug, PartialEq, Eq)]
struct SpaceInner {
    outcomes: Vec<String>,
}

impl PossibilitySpace {
    pub fn new<S: Into<String>>(outcomes: Vec<S>) -> Result<Self, GambleError> {
        let outcomes: Vec<String> = outcomes.into_iter().map(Into::into).collect();
        if outcomes.len() < 2 {
            return Err(GambleError::SpaceTooSmall(outcomes.len()));
        }
        for (i, label) in outcomes.iter().enumerate() {
            if outcomes[..i].contains(label) {
                return Err(GambleError::DuplicateLabel(label.clone()));
            }
        }
        Ok(Self {
            inner: Arc::new(SpaceInner { outcomes }),
        })
    }

    /// Space with outcomes `w1..wn`, handy for fixtures.
    pub fn with_size(n: usize) -> Result<Self, GambleError> {
        Self::new((1..=n).map(|i| format!("w{i}")).collect())
    }

    pub fn size(&self) -> usize {
        self.inner.outcomes.len()
    }

    pub fn outcomes(&self) -> &[String] {
        &self.inner.outcomes
    }

    pub fn index_of(&self, label: &str) -> Result<usize, GambleError> {
        self.inner
            .outcomes
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| GambleError::UnknownLabel(label.to_owned()))
    }

    /// Fast pointer check first, content comparison as fallback so that two
    /// independently built spaces with the same labels interoperate.
    pub fn same_as(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner == other.inner
    }
}

/// Bounded real-valued function on a possibility space, in money units.
#[derive(Clone, Debug, PartialEq)]
pub struct Gamble {
    space: PossibilitySpace,
    values: Vec<f64>,
}

impl Gamble {
    pub fn new(space: &PossibilitySpace, values: Vec<f64>) -> Result<Self, GambleError> {
        if values.len() != space.size() {
            return Err(GambleError::DimensionMismatch {
                expected: space.size(),
                got: values.len(),
            });
        }
        if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(GambleError::NonFinite(bad));
        }
        Ok(Self {
            space: space.clone(),
            values,
        })
    }

    pub fn constant(space: &PossibilitySpace, value: f64) -> Result<Self, GambleError> {
        Self::new(space, vec![value; space.size()])
    }

    pub fn zero(space: &PossibilitySpace) -> Self {
        Self::constant(space, 0.0).expect("zero is finite")
    }

    pub fn space(&self) -> &PossibilitySpace {
        &self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn inf(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    fn check_same_space(&self, other: &Gamble) -> Result<(), GambleError> {
        if self.space.same_as(&other.space) {
            Ok(())
        } else if self.len() != other.len() {
            Err(GambleError::DimensionMismatch {
                expected: self.len(),
                got: other.len(),
            })
        } else {
            Err(GambleError::SpaceMismatch)
        }
    }

    pub fn add(&self, other: &Gamble) -> Result<Gamble, GambleError> {
        self.check_same_space(other)?;
        self.map_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Gamble) -> Result<Gamble, GambleError> {
        self.check_same_space(other)?;
        self.map_with(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Gamble {
        self.map(|v| -v)
    }

    pub fn scale(&self, lambda: f64) -> Gamble {
        self.map(|v| lambda * v)
    }

    /// `f + c` with a constant, i.e. a uniform price shift.
    pub fn shift(&self, c: f64) -> Gamble {
        self.map(|v| v + c)
    }

    pub fn dot(&self, weights: &[f64]) -> f64 {
        self.values
            .iter()
            .zip(weights)
            .map(|(v, w)| v * w)
            .sum()
    }

    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> Gamble {
        Gamble {
            space: self.space.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    fn map_with<F: Fn(f64, f64) -> f64>(&self, other: &Gamble, f: F) -> Result<Gamble, GambleError> {
        Ok(Gamble {
            space: self.space.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// Pointwise `self >= other` (exact comparison, no tolerance).
    pub fn dominates(&self, other: &Gamble) -> Result<bool, GambleError> {
        self.check_same_space(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .all(|(a, b)| a >= b))
    }
}

impl fmt::Display for Gamble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// `f > g` in the pointwise-dominance-with-a-strict-coordinate sense:
/// `f >= g` everywhere and `f != g` somewhere. Exact comparison.
pub fn gneq(f: &Gamble, g: &Gamble) -> Result<bool, GambleError> {
    Ok(f.dominates(g)? && f.values() != g.values())
}

/// `f` strictly dominates the zero gamble.
pub fn is_positive(f: &Gamble) -> bool {
    f.values.iter().all(|&v| v >= 0.0) && f.values.iter().any(|&v| v > 0.0)
}

/// Sign classification of a gamble against the status quo.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    /// `f > 0` with at least one strict coordinate.
    Positive,
    /// `f <= 0` everywhere (includes the zero gamble).
    NegativeOrZero,
    /// `sup f < 0`; a strictly negative gamble is in particular nonpositive.
    StrictlyNegative,
    /// Mixed signs: neither comparable with zero.
    Other,
}

impl Classification {
    /// `StrictlyNegative` is a refinement of `NegativeOrZero`.
    pub fn is_negative_or_zero(self) -> bool {
        matches!(self, Classification::NegativeOrZero | Classification::StrictlyNegative)
    }
}

pub fn classify(f: &Gamble) -> Classification {
    if is_positive(f) {
        Classification::Positive
    } else if f.sup() < 0.0 {
        Classification::StrictlyNegative
    } else if f.values().iter().all(|&v| v <= 0.0) {
        Classification::NegativeOrZero
    } else {
        Classification::Other
    }
}

/// Subset of the possibility space, identified with its indicator gamble.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Event {
    space: PossibilitySpace,
    mask: Vec<bool>,
}

impl Event {
    pub fn new(space: &PossibilitySpace, mask: Vec<bool>) -> Result<Self, GambleError> {
        if mask.len() != space.size() {
            return Err(GambleError::DimensionMismatch {
                expected: space.size(),
                got: mask.len(),
            });
        }
        Ok(Self {
            space: space.clone(),
            mask,
        })
    }

    pub fn from_labels(space: &PossibilitySpace, labels: &[&str]) -> Result<Self, GambleError> {
        let mut mask = vec![false; space.size()];
        for label in labels {
            mask[space.index_of(label)?] = true;
        }
        Event::new(space, mask)
    }

    pub fn full(space: &PossibilitySpace) -> Self {
        Event {
            space: space.clone(),
            mask: vec![true; space.size()],
        }
    }

    pub fn space(&self) -> &PossibilitySpace {
        &self.space
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn is_empty(&self) -> bool {
        !self.mask.iter().any(|&b| b)
    }

    pub fn complement(&self) -> Event {
        Event {
            space: self.space.clone(),
            mask: self.mask.iter().map(|&b| !b).collect(),
        }
    }

    pub fn indicator(&self) -> Gamble {
        Gamble {
            space: self.space.clone(),
            values: self.mask.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect(),
        }
    }

    pub fn labels(&self) -> Vec<&str> {
        self.space
            .outcomes()
            .iter()
            .zip(&self.mask)
            .filter(|(_, &b)| b)
            .map(|(l, _)| l.as_str())
            .collect()
    }
}

/// The conditional gamble `Bf`: equals `f` on `B`, zero elsewhere.
pub fn cutoff(f: &Gamble, b: &Event) -> Result<Gamble, GambleError> {
    if !f.space.same_as(&b.space) {
        return Err(GambleError::SpaceMismatch);
    }
    if b.is_empty() {
        return Err(GambleError::EmptyEvent);
    }
    Ok(Gamble {
        space: f.space.clone(),
        values: f
            .values
            .iter()
            .zip(&b.mask)
            .map(|(&v, &inside)| if inside { v } else { 0.0 })
            .collect(),
    })
}

/// Disjoint cover of the possibility space by nonempty events.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    space: PossibilitySpace,
    blocks: Vec<Event>,
}

impl Partition {
    pub fn new(space: &PossibilitySpace, blocks: Vec<Event>) -> Result<Self, GambleError> {
        let mut seen = vec![false; space.size()];
        for block in &blocks {
            if !block.space.same_as(space) {
                return Err(GambleError::SpaceMismatch);
            }
            if block.is_empty() {
                return Err(GambleError::BadPartition("empty block".into()));
            }
            for (i, &inside) in block.mask.iter().enumerate() {
                if inside {
                    if seen[i] {
                        return Err(GambleError::BadPartition(format!(
                            "outcome `{}` covered twice",
                            space.outcomes()[i]
                        )));
                    }
                    seen[i] = true;
                }
            }
        }
        if !seen.iter().all(|&s| s) {
            return Err(GambleError::BadPartition("blocks do not cover the space".into()));
        }
        Ok(Self {
            space: space.clone(),
            blocks,
        })
    }

    pub fn from_labels(space: &PossibilitySpace, blocks: &[Vec<&str>]) -> Result<Self, GambleError> {
        let events = blocks
            .iter()
            .map(|labels| Event::from_labels(space, labels))
            .collect::<Result<Vec<_>, _>>()?;
        Partition::new(space, events)
    }

    /// The one-block partition `{Omega}`.
    pub fn trivial(space: &PossibilitySpace) -> Self {
        Partition {
            space: space.clone(),
            blocks: vec![Event::full(space)],
        }
    }

    pub fn space(&self) -> &PossibilitySpace {
        &self.space
    }

    pub fn blocks(&self) -> &[Event] {
        &self.blocks
    }

    /// Largest partition-measurable gamble below `f` (blockwise infimum).
    pub fn blockwise_inf(&self, f: &Gamble) -> Result<Gamble, GambleError> {
        if !f.space.same_as(&self.space) {
            return Err(GambleError::SpaceMismatch);
        }
        let mut values = vec![0.0; f.len()];
        for block in &self.blocks {
            let lo = f
                .values
                .iter()
                .zip(block.mask())
                .filter(|(_, &inside)| inside)
                .map(|(&v, _)| v)
                .fold(f64::INFINITY, f64::min);
            for (i, &inside) in block.mask().iter().enumerate() {
                if inside {
                    values[i] = lo;
                }
            }
        }
        Gamble::new(&self.space, values)
    }
}

/// True iff `f` is constant on every block of the partition.
pub fn is_measurable(f: &Gamble, partition: &Partition) -> Result<bool, GambleError> {
    if !f.space.same_as(&partition.space) {
        return Err(GambleError::SpaceMismatch);
    }
    for block in &partition.blocks {
        let mut first: Option<f64> = None;
        for (i, &inside) in block.mask.iter().enumerate() {
            if inside {
                match first {
                    None => first = Some(f.values[i]),
                    Some(v) if v != f.values[i] => return Ok(false),
                    _ => {}
                }
            }
        }
    }
    Ok(true)
}
