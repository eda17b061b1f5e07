//! Lower and upper previsions induced by a set of desirable gambles, and
//! everything priced on top of them: precision tests, axiom observations,
//! conditional previsions via the generalized Bayes rule, and marginal
//! extension previsions.
//!
//! The workhorse is monotone bisection over the membership oracle: the
//! acceptable buying prices for a gamble form a lower set, so
//! `sup { mu : f - mu in D }` brackets cleanly. For the conic-hull
//! operator the same value is computed exactly by LP and the two routes
//! must agree; that dual route is also the oracle-equivalence check the
//! test suite leans on.

mod bisect;

pub use bisect::{bisect_inf, bisect_sup, simplest_rational_in, Bracket, Probe};

use serde::Serialize;
use thiserror::Error;

use crate::consistency;
use crate::gamble::{cutoff, Event, Gamble, PossibilitySpace};
use crate::lp::{LpOutcome, LpProblem, Relation};
use crate::operators::{
    ClosureSpec, DesirSet, MembershipValue, OperatorError, OperatorKind, PriceFunctional,
};
use crate::sampling;
use crate::structure::ConditionalFamily;
use crate::TriState;

#[derive(Debug, Error)]
pub enum PrevisionError {
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Gamble(#[from] crate::gamble::GambleError),
    #[error("acceptable buying prices are unbounded above; the set incurs sure loss")]
    UnboundedAbove,
    #[error("acceptable selling prices are unbounded below; the set incurs sure loss")]
    UnboundedBelow,
    #[error("{method_a} gives {a} but {method_b} gives {b}; routes must agree")]
    Mismatch {
        method_a: &'static str,
        a: f64,
        method_b: &'static str,
        b: f64,
    },
    #[error("cannot certify the sign of the conditioning event's prevision: {0}")]
    UnknownSign(String),
    #[error("{0}")]
    BadInput(String),
}

/// Certified interval around a supremum buying (or infimum selling) price.
#[derive(Clone, Debug, Serialize)]
pub struct PrevisionBracket {
    pub lo: f64,
    pub hi: f64,
    /// Membership of the boundary gamble at the snapped price estimate.
    pub boundary_in: TriState,
    #[serde(skip)]
    pub width_tol: f64,
    #[serde(skip)]
    pub contaminated: bool,
}

impl PrevisionBracket {
    /// Best point estimate: the simplest rational inside the (slightly
    /// padded) bracket.
    pub fn estimate(&self) -> f64 {
        Bracket {
            lo: self.lo,
            hi: self.hi,
            contaminated: self.contaminated,
        }
        .estimate()
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn point(value: f64, width_tol: f64, boundary_in: TriState) -> Self {
        PrevisionBracket {
            lo: value,
            hi: value,
            boundary_in,
            width_tol,
            contaminated: false,
        }
    }
}

fn probe_of(m: MembershipValue) -> Probe {
    match m {
        MembershipValue::In => Probe::In,
        MembershipValue::Out => Probe::Out,
        MembershipValue::Unknown => Probe::Unknown,
    }
}

fn tri_of_membership(m: MembershipValue) -> TriState {
    match m {
        MembershipValue::In => TriState::Yes,
        MembershipValue::Out => TriState::No,
        MembershipValue::Unknown => TriState::Unknown,
    }
}

/// Supremum acceptable buying price for `f`, bracketed by bisection.
/// For the conic-hull operator the value is additionally computed by an
/// exact LP and the two must agree; for a functional-induced set the
/// functional value is the cross check.
pub fn lower_prevision(
    set: &DesirSet,
    f: &Gamble,
    tol: f64,
) -> Result<PrevisionBracket, PrevisionError> {
    let mut bracket = buying_bracket(set, f, tol)?;
    let estimate = bracket.estimate();

    // Exact cross routes. The strictness margin of the conic-hull oracle
    // can park the membership threshold a hair below the true supremum, so
    // the bracket is widened to contain the exact value; the snap then
    // recovers it.
    if let (Some(gens), Some(spec)) = (set.generators(), set.spec()) {
        match &spec.kind {
            OperatorKind::Kappa1 => {
                let lp = kappa1_prevision_lp(set.space(), gens, f)?
                    .ok_or(PrevisionError::UnboundedAbove)?;
                if (lp - estimate).abs() > tol.max(1e-6) {
                    return Err(PrevisionError::Mismatch {
                        method_a: "bisection",
                        a: estimate,
                        method_b: "lp",
                        b: lp,
                    });
                }
                bracket.lo = bracket.lo.min(lp);
                bracket.hi = bracket.hi.max(lp);
            }
            OperatorKind::PrevisionInduced { functional } => {
                let direct = functional.evaluate(f)?;
                if (direct - estimate).abs() > tol.max(1e-6) {
                    return Err(PrevisionError::Mismatch {
                        method_a: "bisection",
                        a: estimate,
                        method_b: "functional",
                        b: direct,
                    });
                }
                bracket.lo = bracket.lo.min(direct);
                bracket.hi = bracket.hi.max(direct);
            }
            _ => {}
        }
    }

    let estimate = bracket.estimate();
    let boundary = set.member(&f.shift(-estimate))?;
    Ok(PrevisionBracket {
        lo: bracket.lo,
        hi: bracket.hi,
        boundary_in: tri_of_membership(boundary.value),
        width_tol: tol,
        contaminated: bracket.contaminated,
    })
}

/// Infimum acceptable selling price, computed directly on the upper set
/// of selling prices and cross-checked against conjugacy with the lower
/// prevision of `-f`.
pub fn upper_prevision(
    set: &DesirSet,
    f: &Gamble,
    tol: f64,
) -> Result<PrevisionBracket, PrevisionError> {
    let space_guard = f.space().same_as(set.space());
    if !space_guard {
        return Err(OperatorError::Gamble(crate::gamble::GambleError::SpaceMismatch).into());
    }
    let mut lo = f.inf() - 1.0;
    let hi = f.sup() + 1.0;
    // pred(mu) = member(mu - f): Out below the infimum, In above
    let pred = |mu: f64| -> Result<Probe, PrevisionError> {
        Ok(probe_of(set.member(&f.neg().shift(mu))?.value))
    };
    match pred(hi)? {
        Probe::In => {}
        _ => {
            return Err(PrevisionError::BadInput(
                "selling prices above the supremum must be acceptable".into(),
            ))
        }
    }
    let mut expansions = 0;
    loop {
        match pred(lo)? {
            Probe::Out => break,
            Probe::In | Probe::Unknown => {
                expansions += 1;
                if expansions > 40 {
                    return Err(PrevisionError::UnboundedBelow);
                }
                lo = f.inf() - (1u64 << expansions.min(50)) as f64;
            }
        }
    }
    let mut bracket = bisect_inf(pred, lo, hi, tol, None)?;
    let estimate = bracket.estimate();

    // conjugacy cross-check; the conjugate route carries the exact lp
    // value for the conic hull, so widen the bracket to include it
    let conj = lower_prevision(set, &f.neg(), tol)?;
    if (estimate + conj.estimate()).abs() > 2.0 * tol.max(1e-6) {
        return Err(PrevisionError::Mismatch {
            method_a: "direct selling-price bisection",
            a: estimate,
            method_b: "conjugate of the buying price of -f",
            b: -conj.estimate(),
        });
    }
    bracket.lo = bracket.lo.min(-conj.estimate());
    bracket.hi = bracket.hi.max(-conj.estimate());

    let estimate = bracket.estimate();
    let boundary = set.member(&f.neg().shift(estimate))?;
    Ok(PrevisionBracket {
        lo: bracket.lo,
        hi: bracket.hi,
        boundary_in: tri_of_membership(boundary.value),
        width_tol: tol,
        contaminated: bracket.contaminated,
    })
}

/// Raw bisection bracket for the buying-price supremum.
fn buying_bracket(set: &DesirSet, f: &Gamble, tol: f64) -> Result<Bracket, PrevisionError> {
    if !f.space().same_as(set.space()) {
        return Err(OperatorError::Gamble(crate::gamble::GambleError::SpaceMismatch).into());
    }
    let lo = f.inf() - 1.0;
    let mut hi = f.sup() + 1.0;
    let pred = |mu: f64| -> Result<Probe, PrevisionError> {
        Ok(probe_of(set.member(&f.shift(-mu))?.value))
    };
    match pred(lo)? {
        Probe::In => {}
        _ => {
            return Err(PrevisionError::BadInput(
                "buying prices below the infimum must be acceptable; is the set restricted?"
                    .into(),
            ))
        }
    }
    let mut expansions = 0;
    loop {
        match pred(hi)? {
            Probe::Out => break,
            Probe::In | Probe::Unknown => {
                expansions += 1;
                if expansions > 40 {
                    return Err(PrevisionError::UnboundedAbove);
                }
                hi = f.sup() + (1u64 << expansions.min(50)) as f64;
            }
        }
    }
    Ok(bisect_sup(pred, lo, hi, tol, None)?)
}

/// Exact conic-hull prevision: maximize `mu` subject to
/// `f - mu >= sum lambda_j g_j`, `lambda >= 0`. `None` means unbounded.
pub fn kappa1_prevision_lp(
    space: &PossibilitySpace,
    generators: &[Gamble],
    f: &Gamble,
) -> Result<Option<f64>, PrevisionError> {
    let m = generators.len();
    let mut objective = vec![0.0; m + 1];
    objective[0] = 1.0;
    let mut lp = LpProblem::new(objective);
    for j in 0..m {
        lp = lp.bound(j + 1, 0.0, f64::INFINITY);
    }
    for w in 0..space.size() {
        let mut row = Vec::with_capacity(m + 1);
        row.push(1.0);
        for g in generators {
            row.push(g.values()[w]);
        }
        lp = lp.constrain(row, Relation::Le, f.values()[w]);
    }
    match crate::lp::solve(&lp).map_err(OperatorError::from)? {
        LpOutcome::Optimal(sol) => Ok(Some(sol.objective)),
        LpOutcome::Unbounded => Ok(None),
        LpOutcome::Infeasible { .. } => Err(PrevisionError::BadInput(
            "prevision lp cannot be infeasible".into(),
        )),
    }
}

/// Randomized spot check that `mu -> member(f - mu)` is nonincreasing,
/// the property bisection relies on.
pub fn lower_set_spotcheck(
    set: &DesirSet,
    f: &Gamble,
    probes: u32,
    seed: u64,
) -> Result<bool, PrevisionError> {
    let mut rng = sampling::rng(seed);
    use rand::Rng;
    let lo = f.inf() - 1.0;
    let hi = f.sup() + 1.0;
    for _ in 0..probes {
        let a = rng.gen_range(lo..hi);
        let b = rng.gen_range(lo..hi);
        let (small, large) = if a < b { (a, b) } else { (b, a) };
        let at_small = set.member(&f.shift(-small))?.value;
        let at_large = set.member(&f.shift(-large))?.value;
        if at_small == MembershipValue::Out && at_large == MembershipValue::In {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, Serialize)]
pub struct ShiftCheck {
    pub shift: f64,
    pub shifted_prevision: f64,
    pub expected: f64,
    pub ok: bool,
}

/// `lower(f + c) = lower(f) + c` for each shift, within `2 tol`.
pub fn check_constant_additivity(
    set: &DesirSet,
    f: &Gamble,
    shifts: &[f64],
    tol: f64,
) -> Result<Vec<ShiftCheck>, PrevisionError> {
    let base = lower_prevision(set, f, tol)?.estimate();
    let mut out = Vec::with_capacity(shifts.len());
    for &c in shifts {
        let shifted = lower_prevision(set, &f.shift(c), tol)?.estimate();
        let expected = base + c;
        out.push(ShiftCheck {
            shift: c,
            shifted_prevision: shifted,
            expected,
            ok: (shifted - expected).abs() <= 2.0 * tol.max(1e-9),
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomObservation {
    pub expected_to_hold: bool,
    pub checked: u32,
    pub violations: Vec<String>,
}

impl AxiomObservation {
    pub fn consistent(&self) -> bool {
        !self.expected_to_hold || self.violations.is_empty()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PAxiomsReport {
    pub bounds: AxiomObservation,
    pub superadditivity: AxiomObservation,
    pub homogeneity: AxiomObservation,
}

impl PAxiomsReport {
    pub fn consistent(&self) -> bool {
        self.bounds.consistent()
            && self.superadditivity.consistent()
            && self.homogeneity.consistent()
    }
}

/// Observe the three classical prevision axioms on samples. The bound
/// axiom holds for every coherent set; superadditivity is only promised
/// by addition-closed operators and homogeneity by scaling-closed ones,
/// so for the others the report records violations as expected behaviour.
pub fn check_p_axioms(
    set: &DesirSet,
    samples: u32,
    seed: u64,
    tol: f64,
) -> Result<PAxiomsReport, PrevisionError> {
    let kind = set.spec().map(|s| s.kind.clone());
    let expect_super = matches!(
        kind,
        Some(OperatorKind::Kappa1) | Some(OperatorKind::Kappa2 { .. })
    );
    let expect_homog = matches!(kind, Some(OperatorKind::Kappa1) | Some(OperatorKind::Kappa3));
    let space = set.space().clone();
    let mut rng = sampling::rng(seed);
    let cmp = 2.0 * tol.max(1e-7);

    let mut bounds = AxiomObservation {
        expected_to_hold: true,
        checked: 0,
        violations: Vec::new(),
    };
    let mut superadd = AxiomObservation {
        expected_to_hold: expect_super,
        checked: 0,
        violations: Vec::new(),
    };
    let mut homog = AxiomObservation {
        expected_to_hold: expect_homog,
        checked: 0,
        violations: Vec::new(),
    };

    for _ in 0..samples {
        let f = sampling::gamble_grid_nonzero(&space, &mut rng);
        let g = sampling::gamble_grid_nonzero(&space, &mut rng);
        let pf = lower_prevision(set, &f, tol)?;
        if pf.contaminated {
            continue;
        }
        let pf = pf.estimate();
        bounds.checked += 1;
        if pf < f.inf() - cmp || pf > f.sup() + cmp {
            bounds
                .violations
                .push(format!("{f}: prevision {pf} escapes [{}, {}]", f.inf(), f.sup()));
        }
        let pg = lower_prevision(set, &g, tol)?.estimate();
        let psum = lower_prevision(set, &f.add(&g)?, tol)?.estimate();
        superadd.checked += 1;
        if psum < pf + pg - cmp {
            superadd
                .violations
                .push(format!("{f} + {g}: {psum} < {pf} + {pg}"));
        }
        let lambda = 2.0;
        let pscaled = lower_prevision(set, &f.scale(lambda), tol)?.estimate();
        homog.checked += 1;
        if (pscaled - lambda * pf).abs() > cmp {
            homog
                .violations
                .push(format!("{f}: prevision of {lambda} f is {pscaled}, not {}", lambda * pf));
        }
    }
    Ok(PAxiomsReport {
        bounds,
        superadditivity: superadd,
        homogeneity: homog,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CancellingPair {
    pub g1: Vec<f64>,
    pub g2: Vec<f64>,
    pub eps: f64,
}

#[derive(Clone, Debug, Serialize)]
pub enum LowerUpperOutcome {
    Holds { samples: u32 },
    Violation {
        gamble: Vec<f64>,
        lower: f64,
        upper: f64,
        pair: Option<CancellingPair>,
    },
}

/// Compare buying and selling prices on samples. When a gamble prices
/// higher to buy than to sell, two members summing to a negative constant
/// must exist; the search scans scaled generator pairs for such a pair,
/// so a `Holds` verdict is sampling evidence only.
pub fn lpr_leq_upr_check(
    set: &DesirSet,
    samples: u32,
    seed: u64,
    tol: f64,
) -> Result<LowerUpperOutcome, PrevisionError> {
    let space = set.space().clone();
    let mut rng = sampling::rng(seed);
    let mut candidates = sampling::battery(&space);
    for _ in 0..samples {
        candidates.push(sampling::gamble_grid_nonzero(&space, &mut rng));
    }
    let cmp = 2.0 * tol.max(1e-7);
    for f in candidates {
        let lower = lower_prevision(set, &f, tol)?;
        let upper = upper_or_conjugate(set, &f, tol)?;
        if lower.contaminated || upper.contaminated {
            continue;
        }
        let (plo, pup) = (lower.estimate(), upper.estimate());
        if plo > pup + cmp {
            let pair = cancelling_pair(set, tol)?;
            return Ok(LowerUpperOutcome::Violation {
                gamble: f.values().to_vec(),
                lower: plo,
                upper: pup,
                pair,
            });
        }
    }
    Ok(LowerUpperOutcome::Holds { samples })
}

/// Upper prevision without the internal `lower <= upper` expectations:
/// computed as the conjugate when the direct route errors out.
fn upper_or_conjugate(
    set: &DesirSet,
    f: &Gamble,
    tol: f64,
) -> Result<PrevisionBracket, PrevisionError> {
    // the direct route already cross-checks conjugacy; reuse it
    upper_prevision(set, f, tol)
}

/// Look for members `g1, g2` with `g1 + g2 = -eps` among scaled generator
/// pairs, solving a tiny LP per ordered pair.
fn cancelling_pair(set: &DesirSet, _tol: f64) -> Result<Option<CancellingPair>, PrevisionError> {
    let Some(gens) = set.generators() else {
        return Ok(None);
    };
    let space = set.space().clone();
    let n = space.size();
    for (i, gi) in gens.iter().enumerate() {
        for (j, gj) in gens.iter().enumerate() {
            if i == j {
                continue;
            }
            // a gi + b gj + e = 0, a,b >= 0, 0 <= e <= 1, maximize e
            let mut lp = LpProblem::new(vec![0.0, 0.0, 1.0])
                .nonnegative()
                .bound(2, 0.0, 1.0);
            for w in 0..n {
                lp = lp.constrain(
                    vec![gi.values()[w], gj.values()[w], 1.0],
                    Relation::Eq,
                    0.0,
                );
            }
            if let LpOutcome::Optimal(sol) = crate::lp::solve(&lp).map_err(OperatorError::from)? {
                let (a, b, e) = (sol.primal[0], sol.primal[1], sol.primal[2]);
                if e > 1e-9 && a > 1e-12 && b > 1e-12 {
                    let g1 = gi.scale(a);
                    let g2 = gj.scale(b);
                    if set.member(&g1)?.is_in() && set.member(&g2)?.is_in() {
                        return Ok(Some(CancellingPair {
                            g1: g1.values().to_vec(),
                            g2: g2.values().to_vec(),
                            eps: e,
                        }));
                    }
                }
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, Serialize)]
pub struct PrecisionReport {
    pub verdict: TriState,
    pub samples: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<(Vec<f64>, f64, f64)>,
    pub note: String,
}

/// Do buying and selling prices coincide? Requires buying prices never to
/// exceed selling prices; then samples both the price gap and the
/// epsilon-compensation criterion for non-members.
pub fn is_precise(
    set: &DesirSet,
    samples: u32,
    seed: u64,
    tol: f64,
) -> Result<PrecisionReport, PrevisionError> {
    if let LowerUpperOutcome::Violation { gamble, lower, upper, .. } =
        lpr_leq_upr_check(set, 40.min(samples), seed ^ 0xabc, tol)?
    {
        return Ok(PrecisionReport {
            verdict: TriState::No,
            samples: 0,
            counterexample: Some((gamble, lower, upper)),
            note: "buying price exceeds selling price; precision is ill-posed".into(),
        });
    }
    let space = set.space().clone();
    let mut rng = sampling::rng(seed);
    let cmp = 2.0 * tol.max(1e-7);
    let mut checked = 0u32;
    let mut unknowns = 0u32;
    let mut candidates = sampling::battery(&space);
    while (candidates.len() as u32) < samples {
        candidates.push(sampling::gamble_uniform(&space, &mut rng, 3.0));
    }
    candidates.truncate(samples as usize);
    for f in candidates {
        let lower = lower_prevision(set, &f, tol)?;
        let upper = upper_prevision(set, &f, tol)?;
        if lower.contaminated || upper.contaminated {
            unknowns += 1;
            continue;
        }
        checked += 1;
        let gap = upper.estimate() - lower.estimate();
        if gap.abs() > cmp {
            return Ok(PrecisionReport {
                verdict: TriState::No,
                samples: checked,
                counterexample: Some((
                    f.values().to_vec(),
                    lower.estimate(),
                    upper.estimate(),
                )),
                note: "buying and selling prices differ".into(),
            });
        }
        // compensation criterion: a non-member must become a member after
        // any positive compensation of its negation
        match set.member(&f)?.value {
            MembershipValue::Out => {
                let compensated = f.neg().shift(1e-6);
                if set.member(&compensated)?.is_out() {
                    return Ok(PrecisionReport {
                        verdict: TriState::No,
                        samples: checked,
                        counterexample: Some((f.values().to_vec(), lower.estimate(), upper.estimate())),
                        note: "epsilon compensation of a non-member is itself rejected".into(),
                    });
                }
            }
            MembershipValue::Unknown => unknowns += 1,
            MembershipValue::In => {}
        }
    }
    Ok(PrecisionReport {
        verdict: if unknowns > checked { TriState::Unknown } else { TriState::Yes },
        samples: checked,
        counterexample: None,
        note: format!("no gap found on {checked} samples ({unknowns} skipped)"),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct WeakClosureReport {
    pub samples: u32,
    pub failures: Vec<String>,
}

/// The nonnegative-prevision set is the pointwise closure of the set:
/// sampled in both directions, using constant additivity to stay off the
/// boundary.
pub fn closure_equals_weak_set(
    set: &DesirSet,
    samples: u32,
    seed: u64,
    tol: f64,
) -> Result<WeakClosureReport, PrevisionError> {
    let space = set.space().clone();
    let mut rng = sampling::rng(seed);
    let mut failures = Vec::new();
    let mut checked = 0;
    for _ in 0..samples {
        let f = sampling::gamble_grid_nonzero(&space, &mut rng);
        let bracket = lower_prevision(set, &f, tol)?;
        if bracket.contaminated {
            continue;
        }
        checked += 1;
        let p = bracket.estimate();
        if p >= 0.0 {
            for eps in [1e-3, 1e-6] {
                if set.member(&f.shift(eps))?.is_out() {
                    failures.push(format!(
                        "{f}: prevision {p} >= 0 but f + {eps} is not a member"
                    ));
                }
            }
        }
        if set.member(&f)?.is_in() && p < -tol.max(1e-9) {
            failures.push(format!("{f}: member with negative prevision {p}"));
        }
    }
    Ok(WeakClosureReport {
        samples: checked,
        failures,
    })
}

/// Where prices come from when checking prevision-level consistency: a
/// functional, an existing set, or a literal table aligned with the probe
/// family.
pub enum PriceAssessor<'a> {
    Functional(&'a PriceFunctional),
    Set(&'a DesirSet),
    Table(&'a [f64]),
}

impl<'a> PriceAssessor<'a> {
    fn prices(&self, probe: &[Gamble], tol: f64) -> Result<Vec<f64>, PrevisionError> {
        match self {
            PriceAssessor::Functional(func) => probe
                .iter()
                .map(|f| func.evaluate(f).map_err(PrevisionError::from))
                .collect(),
            PriceAssessor::Set(set) => probe
                .iter()
                .map(|f| Ok(lower_prevision(set, f, tol)?.estimate()))
                .collect(),
            PriceAssessor::Table(values) => {
                if values.len() != probe.len() {
                    return Err(PrevisionError::BadInput(
                        "price table must align with the probe family".into(),
                    ));
                }
                Ok(values.to_vec())
            }
        }
    }
}

/// Does the price assessment avoid sure loss under the given operator
/// kind? Closed forms for the dominance and scaling kinds (price below
/// the supremum) and for the integer-sum kind (no losing probe subset);
/// otherwise the strict-desirable set built over the probe family is
/// handed to the set-level check.
pub fn lpr_avoids_sure_loss(
    assessor: &PriceAssessor<'_>,
    probe: &[Gamble],
    kind: &OperatorKind,
    tol: f64,
) -> Result<TriState, PrevisionError> {
    if probe.is_empty() {
        return Err(PrevisionError::BadInput("empty probe family".into()));
    }
    let prices: Vec<f64> = assessor.prices(probe, tol)?;
    match kind {
        OperatorKind::Kappa3 | OperatorKind::Kappa4 | OperatorKind::NegLimit { .. } => {
            let ok = probe
                .iter()
                .zip(&prices)
                .all(|(f, &p)| p <= f.sup() + tol);
            Ok(TriState::from_bool(ok))
        }
        OperatorKind::Kappa2 { .. } => {
            let shifted: Vec<Gamble> = probe
                .iter()
                .zip(&prices)
                .map(|(f, &p)| f.shift(-p))
                .collect();
            let k = shifted.len();
            if k > 16 {
                return Err(PrevisionError::BadInput("probe family too large".into()));
            }
            for mask in 1u32..(1 << k) {
                let mut total = Gamble::zero(probe[0].space());
                for (idx, g) in shifted.iter().enumerate() {
                    if mask & (1 << idx) != 0 {
                        total = total.add(g).map_err(OperatorError::from)?;
                    }
                }
                if total.sup() < -tol {
                    return Ok(TriState::No);
                }
            }
            Ok(TriState::Yes)
        }
        _ => {
            // strict-desirable construction over the probe family
            let mut gens = Vec::new();
            for (f, &p) in probe.iter().zip(&prices) {
                for eps in [1e-1, 1e-4, 1e-7] {
                    gens.push(f.shift(-p + eps));
                }
            }
            let set = DesirSet::generated(
                probe[0].space(),
                gens,
                ClosureSpec::new(kind.clone()),
            )?;
            Ok(consistency::avoids_sure_loss(&set, &consistency::EPS_GRID)?.verdict)
        }
    }
}

/// Prevision-level coherence under the given operator kind, on a finite
/// probe family.
pub fn lpr_coherent(
    assessor: &PriceAssessor<'_>,
    probe: &[Gamble],
    kind: &OperatorKind,
    tol: f64,
) -> Result<TriState, PrevisionError> {
    if probe.is_empty() {
        return Err(PrevisionError::BadInput("empty probe family".into()));
    }
    let prices: Vec<f64> = assessor.prices(probe, tol)?;
    // bound axiom first, common to every kind
    for (f, &p) in probe.iter().zip(&prices) {
        if p < f.inf() - tol || p > f.sup() + tol {
            return Ok(TriState::No);
        }
    }
    let shifted: Vec<Gamble> = probe
        .iter()
        .zip(&prices)
        .map(|(f, &p)| f.shift(-p))
        .collect();
    match kind {
        OperatorKind::Kappa4 | OperatorKind::NegLimit { .. } => {
            for a in &shifted {
                for b in &shifted {
                    if a.sub(b).map_err(OperatorError::from)?.sup() < -tol {
                        return Ok(TriState::No);
                    }
                }
            }
            Ok(TriState::Yes)
        }
        OperatorKind::Kappa3 => {
            for a in &shifted {
                for b in &shifted {
                    if !kappa3_pair_ok(a.values(), b.values(), tol) {
                        return Ok(TriState::No);
                    }
                }
            }
            Ok(TriState::Yes)
        }
        OperatorKind::Kappa2 { .. } => {
            let k = shifted.len();
            if k > 14 {
                return Err(PrevisionError::BadInput("probe family too large".into()));
            }
            for (b_idx, b) in shifted.iter().enumerate() {
                for mask in 0u32..(1 << k) {
                    let mut total = b.neg();
                    for (idx, g) in shifted.iter().enumerate() {
                        if mask & (1 << idx) != 0 {
                            total = total.add(g).map_err(OperatorError::from)?;
                        }
                    }
                    let _ = b_idx;
                    if total.sup() < -tol {
                        return Ok(TriState::No);
                    }
                }
            }
            Ok(TriState::Yes)
        }
        OperatorKind::Kappa1 => {
            // natural-extension LP per probe element
            let space = probe[0].space();
            for (f0, &p0) in probe.iter().zip(&prices) {
                let others: Vec<&Gamble> = shifted.iter().collect();
                let m = others.len();
                let mut objective = vec![0.0; m + 1];
                objective[0] = 1.0;
                let mut lp = LpProblem::new(objective);
                for j in 0..m {
                    lp = lp.bound(j + 1, 0.0, f64::INFINITY);
                }
                for w in 0..space.size() {
                    let mut row = Vec::with_capacity(m + 1);
                    row.push(1.0);
                    for g in &others {
                        row.push(g.values()[w]);
                    }
                    lp = lp.constrain(row, Relation::Le, f0.values()[w]);
                }
                match crate::lp::solve(&lp).map_err(OperatorError::from)? {
                    LpOutcome::Optimal(sol) => {
                        if sol.objective > p0 + tol.max(1e-7) {
                            return Ok(TriState::No);
                        }
                    }
                    LpOutcome::Unbounded => return Ok(TriState::No),
                    LpOutcome::Infeasible { .. } => {
                        return Err(PrevisionError::BadInput(
                            "extension lp cannot be infeasible".into(),
                        ))
                    }
                }
            }
            Ok(TriState::Yes)
        }
        _ => {
            let mut gens = Vec::new();
            for g in &shifted {
                for eps in [1e-1, 1e-4, 1e-7] {
                    gens.push(g.shift(eps));
                }
            }
            let set = DesirSet::generated(probe[0].space(), gens, ClosureSpec::new(kind.clone()))?;
            Ok(consistency::is_coherent(&set)?)
        }
    }
}

/// `inf_lambda sup_omega (lambda a - b) >= -tol` over `lambda > 0`: the
/// upper envelope is convex piecewise linear in `lambda`, so its minimum
/// sits at a crossing of two lines or at a boundary limit.
fn kappa3_pair_ok(a: &[f64], b: &[f64], tol: f64) -> bool {
    let max_a = a.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max_a < -tol {
        return false; // envelope dives to -infinity for large lambda
    }
    let mut candidates = vec![1e-9, 1e-6, 1e-3, 1.0, 1e3, 1e9];
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            let da = a[i] - a[j];
            if da.abs() > 1e-15 {
                let l = (b[i] - b[j]) / da;
                if l > 0.0 && l.is_finite() {
                    candidates.push(l);
                }
            }
        }
    }
    candidates.iter().all(|&l| {
        let env = a
            .iter()
            .zip(b)
            .map(|(&ai, &bi)| l * ai - bi)
            .fold(f64::NEG_INFINITY, f64::max);
        env >= -tol
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GbrReport {
    /// Buying-price bracket for the conditioning event's indicator.
    pub event_prevision: PrevisionBracket,
    /// `sup { mu : lower(B(f - mu)) > 0 }`, the conditional prevision.
    pub strict_sup: PrevisionBracket,
    /// `sup { mu : B(f - mu) is a member }`.
    pub member_sup: PrevisionBracket,
    /// `sup { mu : lower(B(f - mu)) >= 0 }`.
    pub weak_sup: PrevisionBracket,
    /// Set when the event has nonpositive lower prevision: the conditional
    /// prevision falls back to the infimum of `f` over the event.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fallback_inf: Option<f64>,
    /// `strict <= member <= weak` within tolerance, when applicable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sandwich_ok: Option<bool>,
}

const SIGN_TOL: f64 = 1e-10;

/// Conditional lower prevision by the generalized Bayes rule, together
/// with its membership-level and weak-inequality companions. The three
/// thresholds sandwich in that order.
pub fn gbr_conditional(
    set: &DesirSet,
    f: &Gamble,
    event: &Event,
    tol: f64,
) -> Result<GbrReport, PrevisionError> {
    if event.is_empty() {
        return Err(OperatorError::Gamble(crate::gamble::GambleError::EmptyEvent).into());
    }
    let indicator = event.indicator();
    let event_prev = lower_prevision(set, &indicator, tol)?;
    if event_prev.contaminated && event_prev.lo <= SIGN_TOL && event_prev.hi > SIGN_TOL {
        return Err(PrevisionError::UnknownSign(format!(
            "event prevision bracket [{}, {}] straddles zero with unknown answers",
            event_prev.lo, event_prev.hi
        )));
    }

    let inf_b = f
        .values()
        .iter()
        .zip(event.mask())
        .filter(|(_, &inside)| inside)
        .map(|(&v, _)| v)
        .fold(f64::INFINITY, f64::min);
    let sup_b = f
        .values()
        .iter()
        .zip(event.mask())
        .filter(|(_, &inside)| inside)
        .map(|(&v, _)| v)
        .fold(f64::NEG_INFINITY, f64::max);
    let (lo0, hi0) = (inf_b - 1.0, sup_b + 1.0);

    let conditional_part =
        |mu: f64| -> Result<Gamble, PrevisionError> { Ok(cutoff(&f.shift(-mu), event).map_err(OperatorError::from)?) };

    // membership threshold
    let member_bracket = bisect_sup(
        |mu| Ok::<_, PrevisionError>(probe_of(set.member(&conditional_part(mu)?)?.value)),
        lo0,
        hi0,
        tol,
        None,
    )?;
    let member_est = member_bracket.estimate();
    let member_boundary = set.member(&conditional_part(member_est)?)?;
    let member_sup = PrevisionBracket {
        lo: member_bracket.lo,
        hi: member_bracket.hi,
        boundary_in: tri_of_membership(member_boundary.value),
        width_tol: tol,
        contaminated: member_bracket.contaminated,
    };

    // inner prevision evaluator; snapped to the simplest nearby rational so
    // the sign tests below are exact on clean data
    let inner = |g: &Gamble| -> Result<f64, PrevisionError> {
        if let (Some(gens), Some(spec)) = (set.generators(), set.spec()) {
            if matches!(spec.kind, OperatorKind::Kappa1) {
                let v = kappa1_prevision_lp(set.space(), gens, g)?
                    .ok_or(PrevisionError::UnboundedAbove)?;
                return Ok(simplest_rational_in(v - 1e-11, v + 1e-11));
            }
        }
        Ok(buying_bracket(set, g, tol.min(1e-11))?.estimate())
    };

    let positive_event = event_prev.estimate() > SIGN_TOL;
    let strict_sup;
    let weak_sup;
    let fallback;
    if positive_event {
        fallback = None;
        let strict_bracket = bisect_sup(
            |mu| {
                let p = inner(&conditional_part(mu)?)?;
                Ok::<_, PrevisionError>(if p > 0.0 { Probe::In } else { Probe::Out })
            },
            lo0,
            hi0,
            tol,
            None,
        )?;
        strict_sup = PrevisionBracket {
            lo: strict_bracket.lo,
            hi: strict_bracket.hi,
            boundary_in: TriState::Unknown,
            width_tol: tol,
            contaminated: strict_bracket.contaminated,
        };
        let weak_bracket = bisect_sup(
            |mu| {
                let p = inner(&conditional_part(mu)?)?;
                Ok::<_, PrevisionError>(if p >= 0.0 { Probe::In } else { Probe::Out })
            },
            lo0,
            hi0,
            tol,
            None,
        )?;
        weak_sup = PrevisionBracket {
            lo: weak_bracket.lo,
            hi: weak_bracket.hi,
            boundary_in: TriState::Unknown,
            width_tol: tol,
            contaminated: weak_bracket.contaminated,
        };
    } else {
        fallback = Some(inf_b);
        strict_sup = PrevisionBracket::point(inf_b, tol, TriState::Unknown);
        weak_sup = PrevisionBracket::point(inf_b, tol, TriState::Unknown);
    }

    let sandwich_ok = if positive_event {
        let pad = tol.max(1e-7);
        Some(
            strict_sup.estimate() <= member_sup.estimate() + pad
                && member_sup.estimate() <= weak_sup.estimate() + pad,
        )
    } else {
        None
    };

    Ok(GbrReport {
        event_prevision: event_prev,
        strict_sup,
        member_sup,
        weak_sup,
        fallback_inf: fallback,
        sandwich_ok,
    })
}

/// Conditional prevision of `f` given one block, against that block's own
/// conditional set. Exact LP route for the conic hull, bisection with a
/// rational snap otherwise.
pub fn conditional_prevision(
    block_set: &DesirSet,
    f: &Gamble,
    block: &Event,
    tol: f64,
) -> Result<f64, PrevisionError> {
    if let (Some(gens), Some(spec)) = (block_set.generators(), block_set.spec()) {
        if matches!(spec.kind, OperatorKind::Kappa1) {
            // max mu  s.t.  B(f) - mu B >= sum lambda_j g_j
            let space = block_set.space();
            let m = gens.len();
            let mut objective = vec![0.0; m + 1];
            objective[0] = 1.0;
            let mut lp = LpProblem::new(objective);
            for j in 0..m {
                lp = lp.bound(j + 1, 0.0, f64::INFINITY);
            }
            let bf = cutoff(f, block).map_err(OperatorError::from)?;
            for w in 0..space.size() {
                let mut row = Vec::with_capacity(m + 1);
                row.push(if block.mask()[w] { 1.0 } else { 0.0 });
                for g in gens {
                    row.push(g.values()[w]);
                }
                lp = lp.constrain(row, Relation::Le, bf.values()[w]);
            }
            return match crate::lp::solve(&lp).map_err(OperatorError::from)? {
                LpOutcome::Optimal(sol) => {
                    Ok(simplest_rational_in(sol.objective - 1e-11, sol.objective + 1e-11))
                }
                LpOutcome::Unbounded => Err(PrevisionError::UnboundedAbove),
                LpOutcome::Infeasible { .. } => Err(PrevisionError::BadInput(
                    "conditional prevision lp cannot be infeasible".into(),
                )),
            };
        }
    }
    let inf_b = f
        .values()
        .iter()
        .zip(block.mask())
        .filter(|(_, &inside)| inside)
        .map(|(&v, _)| v)
        .fold(f64::INFINITY, f64::min);
    let sup_b = f
        .values()
        .iter()
        .zip(block.mask())
        .filter(|(_, &inside)| inside)
        .map(|(&v, _)| v)
        .fold(f64::NEG_INFINITY, f64::max);
    let bracket = bisect_sup(
        |mu| {
            let part = cutoff(&f.shift(-mu), block).map_err(OperatorError::from)?;
            Ok::<_, PrevisionError>(probe_of(block_set.member(&part)?.value))
        },
        inf_b - 1.0,
        sup_b + 1.0,
        tol,
        None,
    )?;
    Ok(bracket.estimate())
}

#[derive(Clone, Debug, Serialize)]
pub struct MarginalExtensionPrevision {
    pub bracket: PrevisionBracket,
    /// Prevision of the same gamble against the assembled marginal
    /// extension set, when its generators are available.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub membership_route: Option<f64>,
}

/// Lower prevision induced by joint marginal and conditional assessments.
/// Under the conic hull this is the composed two-stage prevision; under
/// plain dominance it is the larger of the marginal route (through the
/// blockwise infimum) and the conditional route (the worst block's
/// conditional prevision). Cross-checked against the membership oracle of
/// the assembled extension set where generators permit.
pub fn marginal_extension_prevision(
    marginal: &DesirSet,
    family: &ConditionalFamily,
    kind: &OperatorKind,
    f: &Gamble,
    tol: f64,
) -> Result<MarginalExtensionPrevision, PrevisionError> {
    let partition = family.partition().clone();
    let value = match kind {
        OperatorKind::Kappa1 => {
            // compose: conditional prevision per block, then the marginal
            let mut composed = vec![0.0; f.len()];
            for (block_set, block) in family.per_block().iter().zip(partition.blocks()) {
                let fb = conditional_prevision(block_set, f, block, tol)?;
                for (i, &inside) in block.mask().iter().enumerate() {
                    if inside {
                        composed[i] = fb;
                    }
                }
            }
            let composed = Gamble::new(marginal.space(), composed).map_err(OperatorError::from)?;
            lower_prevision(marginal, &composed, tol)?.estimate()
        }
        OperatorKind::Kappa4 => {
            let floor = partition.blockwise_inf(f).map_err(OperatorError::from)?;
            let via_marginal = lower_prevision(marginal, &floor, tol)?.estimate();
            let mut via_conditional = f64::INFINITY;
            for (block_set, block) in family.per_block().iter().zip(partition.blocks()) {
                via_conditional =
                    via_conditional.min(conditional_prevision(block_set, f, block, tol)?);
            }
            via_marginal.max(via_conditional)
        }
        _ => {
            return Err(PrevisionError::BadInput(
                "marginal extension previsions support the conic and dominance kinds".into(),
            ))
        }
    };

    // membership-route cross check via the assembled extension set
    let membership_route = match crate::structure::marginal_extension_set(
        marginal,
        family,
        ClosureSpec::new(kind.clone()),
    ) {
        Ok(me) => {
            let p = lower_prevision(&me, f, tol)?.estimate();
            if (p - value).abs() > tol.max(1e-6) * 10.0 {
                return Err(PrevisionError::Mismatch {
                    method_a: "two-stage composition",
                    a: value,
                    method_b: "membership oracle of the extension set",
                    b: p,
                });
            }
            Some(p)
        }
        Err(_) => None,
    };

    Ok(MarginalExtensionPrevision {
        bracket: PrevisionBracket::point(value, tol, TriState::Unknown),
        membership_route,
    })
}
