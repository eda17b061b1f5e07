//! Closure operators as membership oracles.
//!
//! A finitely generated set of desirable gambles is stored as its generator
//! list plus a [`ClosureSpec`]; membership in the natural extension (the
//! closure of generators plus all positive gambles) is decided by a
//! kind-specific oracle. Sets that are not finitely generated under their
//! operator live in a small catalog of closed-form membership predicates.

mod catalog;
mod kappa;
mod probes;

pub use catalog::CatalogId;
pub use probes::{axiom_probe, equivalence_probe, AxiomProbeReport, EquivalenceOutcome};

/// Sampled fixed-point spot check, shared with the consistency module.
pub(crate) fn closure_spotcheck(
    set: &DesirSet,
    kind: &OperatorKind,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Result<Option<bool>, OperatorError> {
    probes::closure_holds(set, kind, rng)
}

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gamble::{cutoff, is_positive, Event, Gamble, GambleError, PossibilitySpace};
use crate::lp::LpError;

#[derive(Debug, Error)]
pub enum OperatorError {
    #[error(transparent)]
    Gamble(#[from] GambleError),
    #[error("lp failure: {0}")]
    Lp(#[from] LpError),
    #[error("utility function overflow while warping gamble")]
    UtilityOverflow,
    #[error("invalid operator spec: {0}")]
    InvalidSpec(String),
    #[error("{0}")]
    Unsupported(String),
}

/// Numerical tolerances carried by every operator spec.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Absolute tolerance for LP feasibility and equality decisions.
    pub lp_tol: f64,
    /// Threshold above which a slack is treated as strictly positive.
    pub strict_margin: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            lp_tol: 1e-9,
            strict_margin: 1e-7,
        }
    }
}

impl Tolerances {
    fn validate(&self) -> Result<(), OperatorError> {
        if !(self.lp_tol > 0.0) || !(self.strict_margin > 0.0) {
            return Err(OperatorError::InvalidSpec(
                "tolerances must be strictly positive".into(),
            ));
        }
        Ok(())
    }
}

/// Strictly increasing invertible utility function with `u(0) = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum UtilityFn {
    Linear { slope: f64 },
    /// `u(x) = sign(x) |x|^a` for `a > 0`.
    OddPower { exponent: f64 },
    /// `u(x) = (1 - exp(-a x)) / a` for `a != 0`.
    Cara { risk: f64 },
}

impl UtilityFn {
    pub fn apply(&self, x: f64) -> f64 {
        match *self {
            UtilityFn::Linear { slope } => slope * x,
            UtilityFn::OddPower { exponent } => x.signum() * x.abs().powf(exponent),
            UtilityFn::Cara { risk } => (1.0 - (-risk * x).exp()) / risk,
        }
    }

    pub fn invert(&self, y: f64) -> Option<f64> {
        match *self {
            UtilityFn::Linear { slope } => Some(y / slope),
            UtilityFn::OddPower { exponent } => Some(y.signum() * y.abs().powf(1.0 / exponent)),
            UtilityFn::Cara { risk } => {
                let arg = 1.0 - risk * y;
                if arg > 0.0 {
                    Some(-arg.ln() / risk)
                } else {
                    None
                }
            }
        }
    }

    /// Numeric sanity check on a grid: strictly increasing, u(0)=0,
    /// invertible back to the argument.
    pub fn validate(&self) -> Result<(), OperatorError> {
        let bad = |msg: &str| Err(OperatorError::InvalidSpec(format!("utility: {msg}")));
        match *self {
            UtilityFn::Linear { slope } if !(slope > 0.0) => return bad("slope must be > 0"),
            UtilityFn::OddPower { exponent } if !(exponent > 0.0) => {
                return bad("exponent must be > 0")
            }
            UtilityFn::Cara { risk } if risk == 0.0 || !risk.is_finite() => {
                return bad("risk aversion must be nonzero and finite")
            }
            _ => {}
        }
        if self.apply(0.0).abs() > 1e-12 {
            return bad("u(0) must be 0");
        }
        let mut prev = f64::NEG_INFINITY;
        let mut x = -3.0;
        while x <= 3.0 + 1e-12 {
            let y = self.apply(x);
            if !y.is_finite() || y <= prev {
                return bad("not strictly increasing on the probe grid");
            }
            if let Some(back) = self.invert(y) {
                if (back - x).abs() > 1e-6 * x.abs().max(1.0) {
                    return bad("inverse does not round-trip on the probe grid");
                }
            } else {
                return bad("not invertible on the probe grid");
            }
            prev = y;
            x += 0.25;
        }
        Ok(())
    }

    pub fn apply_gamble(&self, f: &Gamble) -> Result<Gamble, OperatorError> {
        let warped = f.map(|v| self.apply(v));
        if warped.values().iter().any(|v| !v.is_finite()) {
            return Err(OperatorError::UtilityOverflow);
        }
        Ok(warped)
    }
}

/// Monotone constant-additive price functional with `F(0) = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PriceFunctional {
    /// Expectation under a fixed probability vector.
    Linear { weights: Vec<f64> },
    /// Ordered weighted average: weights applied to the values sorted in
    /// ascending order, so `weights[0]` multiplies the minimum.
    Owa { weights: Vec<f64> },
}

impl PriceFunctional {
    pub fn weights(&self) -> &[f64] {
        match self {
            PriceFunctional::Linear { weights } | PriceFunctional::Owa { weights } => weights,
        }
    }

    pub fn arity(&self) -> usize {
        self.weights().len()
    }

    pub fn validate(&self) -> Result<(), OperatorError> {
        let w = self.weights();
        if w.is_empty() || w.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
            return Err(OperatorError::InvalidSpec(
                "functional weights must be nonnegative".into(),
            ));
        }
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(OperatorError::InvalidSpec(format!(
                "functional weights must sum to one, got {sum}"
            )));
        }
        Ok(())
    }

    pub fn evaluate(&self, f: &Gamble) -> Result<f64, OperatorError> {
        let w = self.weights();
        if w.len() != f.len() {
            return Err(OperatorError::InvalidSpec(format!(
                "functional arity {} does not match space size {}",
                w.len(),
                f.len()
            )));
        }
        match self {
            PriceFunctional::Linear { weights } => Ok(f.dot(weights)),
            PriceFunctional::Owa { weights } => {
                let mut sorted = f.values().to_vec();
                sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
                Ok(sorted.iter().zip(weights).map(|(v, w)| v * w).sum())
            }
        }
    }

    /// Conjugate value `-F(-f)`, the induced infimum selling price.
    pub fn conjugate(&self, f: &Gamble) -> Result<f64, OperatorError> {
        Ok(-self.evaluate(&f.neg())?)
    }
}

/// The closure operator kinds the engine knows how to evaluate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OperatorKind {
    /// Conic hull: arbitrary positive linear combinations.
    Kappa1,
    /// Finite sums with integer multiplicities; the oracle enumerates up to
    /// a multiplicity bound and is sound but incomplete past it.
    Kappa2 { max_multiplicity: u32 },
    /// Dominance of a single positively scaled element.
    Kappa3,
    /// Pointwise dominance of a single element.
    Kappa4,
    /// Linear closure conjugated by an invertible utility.
    UtilityWarp { utility: UtilityFn },
    /// The coherent set induced by a monotone price functional; collapses
    /// to the whole gamble space if some generator is not already in it.
    PrevisionInduced { functional: PriceFunctional },
    /// Dominance closure guarded by a cap on strictly negative
    /// coordinates per accepted gamble; tripping the guard collapses the
    /// closure to the whole space.
    NegLimit { max_negative_coords: usize },
}

impl OperatorKind {
    pub fn name(&self) -> &'static str {
        match self {
            OperatorKind::Kappa1 => "kappa1",
            OperatorKind::Kappa2 { .. } => "kappa2",
            OperatorKind::Kappa3 => "kappa3",
            OperatorKind::Kappa4 => "kappa4",
            OperatorKind::UtilityWarp { .. } => "utility-warp",
            OperatorKind::PrevisionInduced { .. } => "prevision-induced",
            OperatorKind::NegLimit { .. } => "neg-limit",
        }
    }

    /// Some kinds only make sense on one space size (a functional has a
    /// fixed arity); probes use this to pick sampling spaces.
    pub fn required_space_size(&self) -> Option<usize> {
        match self {
            OperatorKind::PrevisionInduced { functional } => Some(functional.arity()),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosureSpec {
    #[serde(flatten)]
    pub kind: OperatorKind,
    #[serde(default)]
    pub tol: Tolerances,
}

impl ClosureSpec {
    pub fn new(kind: OperatorKind) -> Self {
        ClosureSpec {
            kind,
            tol: Tolerances::default(),
        }
    }

    pub fn kappa1() -> Self {
        Self::new(OperatorKind::Kappa1)
    }

    pub fn kappa2(max_multiplicity: u32) -> Self {
        Self::new(OperatorKind::Kappa2 { max_multiplicity })
    }

    pub fn kappa3() -> Self {
        Self::new(OperatorKind::Kappa3)
    }

    pub fn kappa4() -> Self {
        Self::new(OperatorKind::Kappa4)
    }

    pub fn validate(&self) -> Result<(), OperatorError> {
        self.tol.validate()?;
        match &self.kind {
            OperatorKind::Kappa2 { max_multiplicity } if *max_multiplicity < 1 => Err(
                OperatorError::InvalidSpec("max_multiplicity must be >= 1".into()),
            ),
            OperatorKind::UtilityWarp { utility } => utility.validate(),
            OperatorKind::PrevisionInduced { functional } => functional.validate(),
            _ => Ok(()),
        }
    }
}

/// Tri-state membership verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MembershipValue {
    In,
    Out,
    /// Only the bounded-multiplicity oracle may answer Unknown.
    Unknown,
}

/// Checkable certificate attached to an `In` verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// The gamble strictly dominates the status quo.
    Positive,
    DominatesGenerator { index: usize },
    ScaledGenerator { index: usize, lambda: f64 },
    ConicCombination { lambda: Vec<f64> },
    IntegerCombination { counts: Vec<u32> },
    FunctionalValue { value: f64 },
    /// A generator tripped the operator guard, so every gamble is in.
    OperatorCollapsed,
    Region { name: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub value: MembershipValue,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Membership {
    pub fn inside(witness: Witness) -> Self {
        Membership {
            value: MembershipValue::In,
            witness: Some(witness),
            note: None,
        }
    }

    pub fn outside(note: impl Into<String>) -> Self {
        Membership {
            value: MembershipValue::Out,
            witness: None,
            note: Some(note.into()),
        }
    }

    pub fn unknown(note: impl Into<String>) -> Self {
        Membership {
            value: MembershipValue::Unknown,
            witness: None,
            note: Some(note.into()),
        }
    }

    pub fn is_in(&self) -> bool {
        self.value == MembershipValue::In
    }

    pub fn is_out(&self) -> bool {
        self.value == MembershipValue::Out
    }

    pub fn is_unknown(&self) -> bool {
        self.value == MembershipValue::Unknown
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Form {
    Generated {
        generators: Vec<Gamble>,
        spec: ClosureSpec,
    },
    Catalog {
        id: CatalogId,
    },
    /// Lazy restriction `{ f in base : f = Bf }` used by conditioning.
    Conditioned {
        base: Box<DesirSet>,
        event: Event,
    },
}

/// A set of desirable gambles with a decidable membership oracle.
#[derive(Clone, Debug, PartialEq)]
pub struct DesirSet {
    space: PossibilitySpace,
    form: Form,
}

impl DesirSet {
    /// Natural extension of a nonempty generator list under a closure spec.
    /// A prevision-induced set needs no generators (its membership is the
    /// functional's sign), so the emptiness check is waived for that kind.
    pub fn generated(
        space: &PossibilitySpace,
        generators: Vec<Gamble>,
        spec: ClosureSpec,
    ) -> Result<Self, OperatorError> {
        spec.validate()?;
        if generators.is_empty()
            && !matches!(spec.kind, OperatorKind::PrevisionInduced { .. })
        {
            return Err(OperatorError::InvalidSpec(
                "generated form needs at least one generator".into(),
            ));
        }
        for g in &generators {
            if !g.space().same_as(space) {
                return Err(GambleError::SpaceMismatch.into());
            }
        }
        if let Some(n) = spec.kind.required_space_size() {
            if n != space.size() {
                return Err(OperatorError::InvalidSpec(format!(
                    "operator requires a space of size {n}, got {}",
                    space.size()
                )));
            }
        }
        Ok(DesirSet {
            space: space.clone(),
            form: Form::Generated { generators, spec },
        })
    }

    /// The set induced by a monotone price functional: positives plus the
    /// gambles the functional prices strictly above zero.
    pub fn induced_by(
        space: &PossibilitySpace,
        functional: PriceFunctional,
    ) -> Result<Self, OperatorError> {
        Self::generated(
            space,
            Vec::new(),
            ClosureSpec::new(OperatorKind::PrevisionInduced { functional }),
        )
    }

    /// Closed-form catalog set.
    pub fn catalog(space: &PossibilitySpace, id: CatalogId) -> Result<Self, OperatorError> {
        if space.size() != id.space_size() {
            return Err(OperatorError::InvalidSpec(format!(
                "catalog set `{}` lives on a space of size {}, got {}",
                id.name(),
                id.space_size(),
                space.size()
            )));
        }
        Ok(DesirSet {
            space: space.clone(),
            form: Form::Catalog { id },
        })
    }

    /// The conditional restriction `{ f in self : f = Bf }`.
    pub fn conditioned(&self, event: &Event) -> Result<Self, OperatorError> {
        if event.is_empty() {
            return Err(GambleError::EmptyEvent.into());
        }
        if !event.space().same_as(&self.space) {
            return Err(GambleError::SpaceMismatch.into());
        }
        Ok(DesirSet {
            space: self.space.clone(),
            form: Form::Conditioned {
                base: Box::new(self.clone()),
                event: event.clone(),
            },
        })
    }

    pub fn space(&self) -> &PossibilitySpace {
        &self.space
    }

    pub fn generators(&self) -> Option<&[Gamble]> {
        match &self.form {
            Form::Generated { generators, .. } => Some(generators),
            _ => None,
        }
    }

    /// Generators of the set itself or, for a conditional view, of its base.
    pub fn underlying_generators(&self) -> Option<&[Gamble]> {
        match &self.form {
            Form::Generated { generators, .. } => Some(generators),
            Form::Conditioned { base, .. } => base.underlying_generators(),
            Form::Catalog { .. } => None,
        }
    }

    pub fn spec(&self) -> Option<&ClosureSpec> {
        match &self.form {
            Form::Generated { spec, .. } => Some(spec),
            Form::Conditioned { base, .. } => base.spec(),
            Form::Catalog { .. } => None,
        }
    }

    pub fn catalog_id(&self) -> Option<CatalogId> {
        match &self.form {
            Form::Catalog { id } => Some(*id),
            _ => None,
        }
    }

    pub fn tolerances(&self) -> Tolerances {
        self.spec().map(|s| s.tol).unwrap_or_default()
    }

    pub fn describe(&self) -> String {
        match &self.form {
            Form::Generated { generators, spec } => format!(
                "{} extension of {} generator(s)",
                spec.kind.name(),
                generators.len()
            ),
            Form::Catalog { id } => format!("catalog `{}`", id.name()),
            Form::Conditioned { base, event } => format!(
                "{} conditioned on {:?}",
                base.describe(),
                event.labels()
            ),
        }
    }

    /// Decide whether `f` belongs to the set.
    pub fn member(&self, f: &Gamble) -> Result<Membership, OperatorError> {
        if !f.space().same_as(&self.space) {
            return Err(GambleError::SpaceMismatch.into());
        }
        match &self.form {
            Form::Generated { generators, spec } => {
                member_generated(&self.space, generators, spec, f)
            }
            Form::Catalog { id } => Ok(id.member(f)),
            Form::Conditioned { base, event } => {
                let restricted = cutoff(f, event)?;
                if restricted.values() != f.values() {
                    return Ok(Membership::outside("gamble does not vanish outside the event"));
                }
                base.member(f)
            }
        }
    }
}

fn member_generated(
    space: &PossibilitySpace,
    generators: &[Gamble],
    spec: &ClosureSpec,
    f: &Gamble,
) -> Result<Membership, OperatorError> {
    match &spec.kind {
        OperatorKind::Kappa1 => kappa::member_kappa1(space, generators, f, spec.tol),
        OperatorKind::Kappa2 { max_multiplicity } => {
            Ok(kappa::member_kappa2(generators, f, *max_multiplicity))
        }
        OperatorKind::Kappa3 => Ok(kappa::member_kappa3(generators, f)),
        OperatorKind::Kappa4 => Ok(kappa::member_kappa4(generators, f)),
        OperatorKind::UtilityWarp { utility } => {
            member_utility_warp(space, generators, utility, f, spec.tol)
        }
        OperatorKind::PrevisionInduced { functional } => {
            member_prevision_induced(generators, functional, f)
        }
        OperatorKind::NegLimit { max_negative_coords } => {
            Ok(kappa::member_neg_limit(generators, f, *max_negative_coords))
        }
    }
}

/// Membership under the utility-warped linear closure: warp everything
/// pointwise and ask the linear oracle.
pub fn member_utility_warp(
    space: &PossibilitySpace,
    generators: &[Gamble],
    utility: &UtilityFn,
    f: &Gamble,
    tol: Tolerances,
) -> Result<Membership, OperatorError> {
    let warped_f = utility.apply_gamble(f)?;
    let warped_gens = generators
        .iter()
        .map(|g| utility.apply_gamble(g))
        .collect::<Result<Vec<_>, _>>()?;
    let mut verdict = kappa::member_kappa1(space, &warped_gens, &warped_f, tol)?;
    if let Some(note) = &mut verdict.note {
        *note = format!("in warped coordinates: {note}");
    }
    Ok(verdict)
}

/// Membership in the set induced by a monotone price functional: positives
/// plus the gambles with strictly positive price. If some generator lies
/// outside that set the closure collapses to the whole space.
pub fn member_prevision_induced(
    generators: &[Gamble],
    functional: &PriceFunctional,
    f: &Gamble,
) -> Result<Membership, OperatorError> {
    for g in generators {
        if !is_positive(g) && functional.evaluate(g)? <= 0.0 {
            return Ok(Membership::inside(Witness::OperatorCollapsed));
        }
    }
    if is_positive(f) {
        return Ok(Membership::inside(Witness::Positive));
    }
    let value = functional.evaluate(f)?;
    if value > 0.0 {
        Ok(Membership::inside(Witness::FunctionalValue { value }))
    } else {
        Ok(Membership::outside(format!("functional value {value} is not positive")))
    }
}
