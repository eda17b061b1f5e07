//! Sampling probes for the closure axioms and for distinguishing operator
//! kinds.
//!
//! The axiom probe spot-checks extensiveness, monotonicity, idempotency
//! and dominance on randomly generated sets; the equivalence probe hunts
//! for a set that is coherent and deductively closed under one kind but
//! not the other. Both are evidence generators, not proofs: a
//! counterexample is definite, a clean pass is not.

use rand::Rng;

use crate::gamble::{Gamble, PossibilitySpace};
use crate::sampling;

use super::{ClosureSpec, DesirSet, MembershipValue, OperatorError, OperatorKind};

#[derive(Clone, Debug, serde::Serialize)]
pub struct AxiomProbeReport {
    pub trials: u32,
    pub extensiveness_failures: Vec<String>,
    pub monotonicity_failures: Vec<String>,
    pub idempotency_failures: Vec<String>,
    pub dominance_failures: Vec<String>,
    pub unknown_answers: u32,
}

impl AxiomProbeReport {
    pub fn all_pass(&self) -> bool {
        self.extensiveness_failures.is_empty()
            && self.monotonicity_failures.is_empty()
            && self.idempotency_failures.is_empty()
            && self.dominance_failures.is_empty()
    }
}

/// Sample generator sets and gambles, checking the four structural axioms
/// at the membership level: generators are members (extensiveness),
/// membership survives generator-set growth (monotonicity), adding a known
/// member changes no answers (idempotency), and dominators of members are
/// members (dominance). Unknown answers are excluded and counted.
pub fn axiom_probe(
    spec: &ClosureSpec,
    trials: u32,
    seed: u64,
) -> Result<AxiomProbeReport, OperatorError> {
    spec.validate()?;
    let mut rng = sampling::rng(seed);
    let mut report = AxiomProbeReport {
        trials,
        extensiveness_failures: Vec::new(),
        monotonicity_failures: Vec::new(),
        idempotency_failures: Vec::new(),
        dominance_failures: Vec::new(),
        unknown_answers: 0,
    };

    for trial in 0..trials {
        let size = spec
            .kind
            .required_space_size()
            .unwrap_or_else(|| if rng.gen_bool(0.5) { 2 } else { 3 });
        let space = PossibilitySpace::with_size(size).expect("small space");
        let gens = sampling::generators_grid(&space, &mut rng, 3);
        let set = DesirSet::generated(&space, gens.clone(), spec.clone())?;

        // C1: every generator belongs to its own extension.
        for (i, g) in gens.iter().enumerate() {
            match set.member(g)?.value {
                MembershipValue::In => {}
                MembershipValue::Unknown => report.unknown_answers += 1,
                MembershipValue::Out => report
                    .extensiveness_failures
                    .push(format!("trial {trial}: generator {i} {g} not a member")),
            }
        }

        let extra = sampling::gamble_grid_nonzero(&space, &mut rng);
        let mut grown = gens.clone();
        grown.push(extra);
        let grown_set = DesirSet::generated(&space, grown, spec.clone())?;

        // a known member: any generator pushed up by a positive gamble
        let bump = sampling::gamble_grid_positive(&space, &mut rng);
        let known_member = gens[0].add(&bump)?;
        let mut with_member = gens.clone();
        with_member.push(known_member.clone());
        let idem_set = DesirSet::generated(&space, with_member, spec.clone())?;

        for _ in 0..3 {
            let f = sampling::gamble_grid(&space, &mut rng);
            let base = set.member(&f)?.value;
            if base == MembershipValue::Unknown {
                report.unknown_answers += 1;
                continue;
            }
            // C2: growth of the generator set never loses members.
            if base == MembershipValue::In {
                match grown_set.member(&f)?.value {
                    MembershipValue::In => {}
                    MembershipValue::Unknown => report.unknown_answers += 1,
                    MembershipValue::Out => report
                        .monotonicity_failures
                        .push(format!("trial {trial}: {f} lost under a grown generator set")),
                }
            }
            // C3: adjoining a known member changes no answers.
            match idem_set.member(&f)?.value {
                MembershipValue::Unknown => report.unknown_answers += 1,
                v if v != base => report.idempotency_failures.push(format!(
                    "trial {trial}: {f} flipped {base:?} -> {v:?} after adjoining member {known_member}"
                )),
                _ => {}
            }
            // C4: dominators of members are members.
            if base == MembershipValue::In {
                let dominator = f.add(&sampling::gamble_grid_positive(&space, &mut rng))?;
                match set.member(&dominator)?.value {
                    MembershipValue::In => {}
                    MembershipValue::Unknown => report.unknown_answers += 1,
                    MembershipValue::Out => report
                        .dominance_failures
                        .push(format!("trial {trial}: dominator {dominator} of member {f} rejected")),
                }
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, serde::Serialize)]
pub enum EquivalenceOutcome {
    /// No sampled set separated the two kinds. Evidence, not proof.
    ConsistentSoFar { sets_checked: u32 },
    /// A set coherent and closed under one kind but provably not closed
    /// under the other.
    Distinguished { witness: String },
}

/// Search for a set separating the coherent families of two operator
/// kinds: catalog seeds first, then randomly generated extensions of each
/// kind, checked for closure under the other by sampled derivations.
pub fn equivalence_probe(
    kind_a: &OperatorKind,
    kind_b: &OperatorKind,
    trials: u32,
    seed: u64,
) -> Result<EquivalenceOutcome, OperatorError> {
    if kind_a == kind_b {
        return Ok(EquivalenceOutcome::ConsistentSoFar { sets_checked: 0 });
    }
    let mut rng = sampling::rng(seed);
    let mut checked = 0u32;

    // Catalog seeds: known coherent sets with known closure behaviour.
    for id in super::CatalogId::ALL {
        let space = PossibilitySpace::with_size(id.space_size()).expect("small space");
        let set = DesirSet::catalog(&space, id)?;
        let in_a = family_membership(&set, kind_a, &mut rng)?;
        let in_b = family_membership(&set, kind_b, &mut rng)?;
        checked += 1;
        if let (Some(a), Some(b)) = (in_a, in_b) {
            if a != b {
                return Ok(EquivalenceOutcome::Distinguished {
                    witness: format!(
                        "catalog `{}` is {} under {} but {} under {}",
                        id.name(),
                        verdict(a),
                        kind_a.name(),
                        verdict(b),
                        kind_b.name()
                    ),
                });
            }
        }
    }

    // Random extensions generated under one kind, probed under the other.
    for trial in 0..trials {
        for (gen_kind, other_kind) in [(kind_a, kind_b), (kind_b, kind_a)] {
            if gen_kind.required_space_size().is_some() || other_kind.required_space_size().is_some()
            {
                continue; // fixed-arity kinds are probed via the catalog path only
            }
            let size = if rng.gen_bool(0.5) { 2 } else { 3 };
            let space = PossibilitySpace::with_size(size).expect("small space");
            let gens = sampling::generators_grid(&space, &mut rng, 2);
            let set = DesirSet::generated(&space, gens, ClosureSpec::new(gen_kind.clone()))?;
            // the extension is closed under its own kind by construction;
            // it is in the family iff it avoids partial loss
            if !set.member(&Gamble::zero(&space))?.is_out() {
                continue;
            }
            checked += 1;
            if let Some(false) = closure_holds(&set, other_kind, &mut rng)? {
                return Ok(EquivalenceOutcome::Distinguished {
                    witness: format!(
                        "trial {trial}: a coherent {} extension ({}) is not closed under {}",
                        gen_kind.name(),
                        set.describe(),
                        other_kind.name()
                    ),
                });
            }
        }
    }
    Ok(EquivalenceOutcome::ConsistentSoFar { sets_checked: checked })
}

fn verdict(in_family: bool) -> &'static str {
    if in_family {
        "coherent-and-closed"
    } else {
        "not closed"
    }
}

/// Is the set plausibly in the coherent family of `kind`? `Some(false)` is
/// a definite exclusion (a closure violation or incoherence was exhibited);
/// `Some(true)` is sampled evidence; `None` means the probe could not run.
fn family_membership(
    set: &DesirSet,
    kind: &OperatorKind,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Result<Option<bool>, OperatorError> {
    let space = set.space().clone();
    if set.member(&Gamble::zero(&space))?.is_in() {
        return Ok(Some(false));
    }
    match closure_holds(set, kind, rng)? {
        Some(ok) => Ok(Some(ok)),
        None => Ok(None),
    }
}

/// Sampled fixed-point check: derive consequences of members under `kind`
/// and test that they are still members. Deterministic seed members first.
pub(crate) fn closure_holds(
    set: &DesirSet,
    kind: &OperatorKind,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Result<Option<bool>, OperatorError> {
    let space = set.space().clone();
    let mut members: Vec<Gamble> = Vec::new();
    if let Some(id) = set.catalog_id() {
        for v in id.seed_members() {
            members.push(Gamble::new(&space, v)?);
        }
    }
    if let Some(gens) = set.generators() {
        members.extend(gens.iter().cloned());
    }
    for _ in 0..40 {
        let f = sampling::gamble_grid(&space, rng);
        if set.member(&f)?.is_in() {
            members.push(f);
        }
        if members.len() >= 12 {
            break;
        }
    }
    if members.is_empty() {
        return Ok(None);
    }

    let scalings = [1.0, 0.5, 2.0];
    let mut derived: Vec<Gamble> = Vec::new();
    match kind {
        OperatorKind::Kappa1 => {
            for (i, m1) in members.iter().enumerate() {
                for m2 in &members[i..] {
                    for &l in &scalings {
                        derived.push(m1.scale(l).add(m2)?);
                    }
                }
                for &l in &scalings {
                    derived.push(m1.scale(l));
                }
            }
        }
        OperatorKind::UtilityWarp { utility } => {
            // combine in warped coordinates: u^{-1}(l * u(m1) + u(m2))
            for (i, m1) in members.iter().enumerate() {
                let w1 = utility.apply_gamble(m1)?;
                for m2 in &members[i..] {
                    let w2 = utility.apply_gamble(m2)?;
                    for &l in &scalings {
                        let combo = w1.scale(l).add(&w2)?;
                        let back: Option<Vec<f64>> = combo
                            .values()
                            .iter()
                            .map(|&y| utility.invert(y))
                            .collect();
                        if let Some(values) = back {
                            derived.push(Gamble::new(&space, values)?);
                        }
                    }
                }
            }
        }
        OperatorKind::Kappa2 { .. } => {
            for (i, m1) in members.iter().enumerate() {
                for m2 in &members[i..] {
                    derived.push(m1.add(m2)?);
                }
            }
        }
        OperatorKind::Kappa3 => {
            for m in &members {
                for &l in &scalings {
                    derived.push(m.scale(l));
                }
            }
        }
        OperatorKind::Kappa4 | OperatorKind::NegLimit { .. } => {
            for m in &members {
                derived.push(m.shift(0.25));
            }
        }
        OperatorKind::PrevisionInduced { .. } => {
            // the induced set is closed for free; nothing to derive
            return Ok(Some(true));
        }
    }

    let mut any_checked = false;
    for d in derived {
        match set.member(&d)?.value {
            MembershipValue::Out => return Ok(Some(false)),
            MembershipValue::In => any_checked = true,
            MembershipValue::Unknown => {}
        }
    }
    if any_checked {
        Ok(Some(true))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axioms_hold_for_plain_kinds() {
        for spec in [
            ClosureSpec::kappa1(),
            ClosureSpec::kappa3(),
            ClosureSpec::kappa4(),
        ] {
            let report = axiom_probe(&spec, 60, 7).unwrap();
            assert!(report.all_pass(), "{:?}: {report:?}", spec.kind.name());
        }
    }

    #[test]
    fn axioms_hold_for_kappa2_modulo_unknowns() {
        let report = axiom_probe(&ClosureSpec::kappa2(64), 60, 11).unwrap();
        assert!(report.all_pass(), "{report:?}");
    }

    #[test]
    fn kappa3_and_kappa4_are_distinguished() {
        let out = equivalence_probe(&OperatorKind::Kappa3, &OperatorKind::Kappa4, 40, 3).unwrap();
        assert!(matches!(out, EquivalenceOutcome::Distinguished { .. }), "{out:?}");
    }

    #[test]
    fn kappa1_vs_kappa2_distinguished_by_catalog() {
        let out = equivalence_probe(
            &OperatorKind::Kappa1,
            &OperatorKind::Kappa2 { max_multiplicity: 64 },
            40,
            5,
        )
        .unwrap();
        assert!(matches!(out, EquivalenceOutcome::Distinguished { .. }), "{out:?}");
    }

    #[test]
    fn identical_kinds_are_consistent() {
        let out = equivalence_probe(&OperatorKind::Kappa1, &OperatorKind::Kappa1, 10, 1).unwrap();
        assert!(matches!(out, EquivalenceOutcome::ConsistentSoFar { .. }));
    }
}
