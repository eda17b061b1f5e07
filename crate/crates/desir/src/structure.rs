//! Marginalisation, conditioning, assembly of conditional families,
//! conglomerability checking and marginal extension.
//!
//! A conditional family carries one set of desirable gambles per partition
//! block, each restricted to gambles vanishing outside its block. The
//! assembled set accepts a gamble iff every block part is accepted (or
//! zero), the zero gamble excluded. Conglomerability asks whether the
//! assembled set stays inside the unconditional one; the check hunts for a
//! counterexample deterministically before sampling.

use crate::gamble::{cutoff, is_measurable, Event, Gamble, GambleError, Partition};
use crate::operators::{
    ClosureSpec, DesirSet, Membership, MembershipValue, OperatorError, OperatorKind,
};
use crate::sampling;

/// Per-block conditional assessments over a partition.
#[derive(Clone, Debug)]
pub struct ConditionalFamily {
    partition: Partition,
    per_block: Vec<DesirSet>,
}

impl ConditionalFamily {
    /// Explicit per-block sets; generated ones must have generators that
    /// vanish outside their block.
    pub fn new(partition: Partition, per_block: Vec<DesirSet>) -> Result<Self, OperatorError> {
        if per_block.len() != partition.blocks().len() {
            return Err(OperatorError::InvalidSpec(
                "one conditional set per partition block required".into(),
            ));
        }
        for (set, block) in per_block.iter().zip(partition.blocks()) {
            if !set.space().same_as(partition.space()) {
                return Err(GambleError::SpaceMismatch.into());
            }
            if let Some(gens) = set.generators() {
                for g in gens {
                    if cutoff(g, block)?.values() != g.values() {
                        return Err(OperatorError::InvalidSpec(format!(
                            "generator {g} does not vanish outside its block"
                        )));
                    }
                }
            }
        }
        Ok(ConditionalFamily { partition, per_block })
    }

    /// Derive the family from an unconditional set by restriction; the
    /// per-block sets are lazy membership views, never materialized.
    pub fn from_set(set: &DesirSet, partition: &Partition) -> Result<Self, OperatorError> {
        let per_block = partition
            .blocks()
            .iter()
            .map(|b| set.conditioned(b))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ConditionalFamily {
            partition: partition.clone(),
            per_block,
        })
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn per_block(&self) -> &[DesirSet] {
        &self.per_block
    }

    /// Candidate members of each block set: explicit generators where
    /// available, otherwise block cutoffs of the base generators that pass
    /// conditional membership.
    fn block_candidates(&self) -> Result<Vec<Vec<Gamble>>, OperatorError> {
        let mut out = Vec::with_capacity(self.per_block.len());
        for (set, block) in self.per_block.iter().zip(self.partition.blocks()) {
            let mut candidates = Vec::new();
            if let Some(gens) = set.generators() {
                candidates.extend(gens.iter().cloned());
            } else if let Some(gens) = set.underlying_generators() {
                for g in gens {
                    let part = cutoff(g, block)?;
                    if set.member(&part)?.is_in() {
                        candidates.push(part);
                    }
                }
            }
            out.push(candidates);
        }
        Ok(out)
    }

    /// Cross-block sums of one candidate (or zero) per block, excluding
    /// the all-zero choice. These are exactly the dominance seeds of the
    /// assembled set when every block set is generated.
    pub fn block_combinations(&self) -> Result<Vec<Gamble>, OperatorError> {
        let candidates = self.block_candidates()?;
        let space = self.partition.space().clone();
        let mut combos: Vec<Gamble> = vec![Gamble::zero(&space)];
        for block_list in &candidates {
            let mut next = Vec::new();
            for base in &combos {
                next.push(base.clone());
                for c in block_list {
                    next.push(base.add(c)?);
                }
                if next.len() > 4096 {
                    return Err(OperatorError::Unsupported(
                        "too many cross-block combinations".into(),
                    ));
                }
            }
            combos = next;
        }
        combos.retain(|g| !g.is_zero());
        Ok(combos)
    }
}

/// Member of the partition-marginal: measurable and a member.
pub fn marginal_member(
    set: &DesirSet,
    f: &Gamble,
    partition: &Partition,
) -> Result<Membership, OperatorError> {
    if !is_measurable(f, partition)? {
        return Ok(Membership::outside("not measurable for the partition"));
    }
    set.member(f)
}

/// Member of the conditional set: vanishes outside the event and a member.
pub fn conditional_member(
    set: &DesirSet,
    f: &Gamble,
    event: &Event,
) -> Result<Membership, OperatorError> {
    if event.is_empty() {
        return Err(GambleError::EmptyEvent.into());
    }
    if cutoff(f, event)?.values() != f.values() {
        return Ok(Membership::outside("gamble does not vanish outside the event"));
    }
    set.member(f)
}

/// Member of the assembled conditional set: nonzero, and every block part
/// is either zero or accepted by its block set.
pub fn assembled_member(family: &ConditionalFamily, f: &Gamble) -> Result<Membership, OperatorError> {
    if f.is_zero() {
        return Ok(Membership::outside("the zero gamble is excluded by assembly"));
    }
    let mut unknown = false;
    for (set, block) in family.per_block().iter().zip(family.partition().blocks()) {
        let part = cutoff(f, block)?;
        if part.is_zero() {
            continue;
        }
        match set.member(&part)?.value {
            MembershipValue::In => {}
            MembershipValue::Out => {
                return Ok(Membership::outside(format!(
                    "block part {part} rejected on {:?}",
                    block.labels()
                )))
            }
            MembershipValue::Unknown => unknown = true,
        }
    }
    if unknown {
        Ok(Membership::unknown("some block verdict is unknown"))
    } else {
        Ok(Membership::inside(crate::operators::Witness::Region {
            name: "assembled".into(),
        }))
    }
}

#[derive(Clone, Debug)]
pub enum ConglomerabilityOutcome {
    /// Sampling evidence only, never a proof.
    NoWitness { candidates_checked: u32 },
    /// A gamble in the assembled set but not in the unconditional one.
    Witness { gamble: Gamble },
}

/// Search for a member of the assembled set that the unconditional set
/// rejects: structured cross-block combinations first (deterministic),
/// then seeded random assemblies.
pub fn conglomerability_check(
    set: &DesirSet,
    family: &ConditionalFamily,
    trials: u32,
    seed: u64,
) -> Result<ConglomerabilityOutcome, OperatorError> {
    let mut checked = 0u32;
    let mut consider = |f: &Gamble| -> Result<Option<ConglomerabilityOutcome>, OperatorError> {
        checked += 1;
        if assembled_member(family, f)?.is_in() && set.member(f)?.is_out() {
            return Ok(Some(ConglomerabilityOutcome::Witness { gamble: f.clone() }));
        }
        Ok(None)
    };

    for combo in family.block_combinations()? {
        if let Some(w) = consider(&combo)? {
            return Ok(w);
        }
    }
    let space = set.space().clone();
    let mut rng = sampling::rng(seed);
    for _ in 0..trials {
        // assemble a random gamble blockwise from accepted parts
        let mut values = vec![0.0; space.size()];
        for (block_set, block) in family.per_block().iter().zip(family.partition().blocks()) {
            let raw = cutoff(&sampling::gamble_grid(&space, &mut rng), block)?;
            let part = if block_set.member(&raw)?.is_in() {
                raw
            } else {
                continue;
            };
            for (v, p) in values.iter_mut().zip(part.values()) {
                *v += p;
            }
        }
        let f = Gamble::new(&space, values)?;
        if f.is_zero() {
            continue;
        }
        if let Some(w) = consider(&f)? {
            return Ok(w);
        }
    }
    Ok(ConglomerabilityOutcome::NoWitness {
        candidates_checked: checked,
    })
}

/// Natural extension of joint marginal and conditional assessments: the
/// generated set whose seeds are the marginal generators plus every
/// cross-block combination of conditional generators. Exact for the four
/// built-in kinds, all of which stay below the conic closure.
pub fn marginal_extension_set(
    marginal: &DesirSet,
    family: &ConditionalFamily,
    spec: ClosureSpec,
) -> Result<DesirSet, OperatorError> {
    match spec.kind {
        OperatorKind::Kappa1
        | OperatorKind::Kappa2 { .. }
        | OperatorKind::Kappa3
        | OperatorKind::Kappa4 => {}
        _ => {
            return Err(OperatorError::Unsupported(
                "marginal extension needs an operator below the conic closure".into(),
            ))
        }
    }
    let marg_gens = marginal.generators().ok_or_else(|| {
        OperatorError::Unsupported("marginal extension needs explicit marginal generators".into())
    })?;
    for g in marg_gens {
        if !is_measurable(g, family.partition())? {
            return Err(OperatorError::InvalidSpec(format!(
                "marginal generator {g} is not measurable for the partition"
            )));
        }
    }
    let mut gens = marg_gens.to_vec();
    let combos = family.block_combinations()?;
    if combos.is_empty() {
        return Err(OperatorError::Unsupported(
            "marginal extension needs explicit conditional generators".into(),
        ));
    }
    gens.extend(combos);
    DesirSet::generated(marginal.space(), gens, spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamble::PossibilitySpace;
    use crate::operators::ClosureSpec;
    use crate::TriState;

    fn g(space: &PossibilitySpace, v: &[f64]) -> Gamble {
        Gamble::new(space, v.to_vec()).unwrap()
    }

    /// The guarded-dominance fixture on four outcomes: one generator per
    /// block, each with a single negative coordinate.
    fn guarded_fixture() -> (PossibilitySpace, DesirSet, Partition) {
        let s = PossibilitySpace::with_size(4).unwrap();
        let gens = vec![g(&s, &[-1.0, 1.0, 0.0, 0.0]), g(&s, &[0.0, 0.0, -1.0, 1.0])];
        let spec = ClosureSpec::new(OperatorKind::NegLimit { max_negative_coords: 1 });
        let set = DesirSet::generated(&s, gens, spec).unwrap();
        let p = Partition::from_labels(&s, &[vec!["w1", "w2"], vec!["w3", "w4"]]).unwrap();
        (s, set, p)
    }

    #[test]
    fn marginal_membership() {
        let s = PossibilitySpace::with_size(2).unwrap();
        let set =
            DesirSet::generated(&s, vec![g(&s, &[-1.0, 1.0])], ClosureSpec::kappa4()).unwrap();
        let trivial = Partition::trivial(&s);
        assert!(marginal_member(&set, &Gamble::constant(&s, 0.5).unwrap(), &trivial)
            .unwrap()
            .is_in());
        assert!(marginal_member(&set, &Gamble::constant(&s, -0.5).unwrap(), &trivial)
            .unwrap()
            .is_out());
        let s3 = PossibilitySpace::with_size(3).unwrap();
        let set3 =
            DesirSet::generated(&s3, vec![g(&s3, &[-1.0, 1.0, 1.0])], ClosureSpec::kappa4())
                .unwrap();
        let p = Partition::from_labels(&s3, &[vec!["w1", "w2"], vec!["w3"]]).unwrap();
        // not measurable: rejected regardless of membership
        assert!(marginal_member(&set3, &g(&s3, &[0.0, 1.0, 1.0]), &p).unwrap().is_out());
    }

    #[test]
    fn conditional_membership() {
        let (s, set, _) = guarded_fixture();
        let b = Event::from_labels(&s, &["w1", "w2"]).unwrap();
        assert!(conditional_member(&set, &g(&s, &[0.0, 1.0, 0.0, 0.0]), &b).unwrap().is_in());
        assert!(conditional_member(&set, &g(&s, &[0.0, 1.0, 0.0, 1.0]), &b).unwrap().is_out());
        assert!(conditional_member(&set, &g(&s, &[0.0, -1.0, 0.0, 0.0]), &b).unwrap().is_out());
    }

    #[test]
    fn assembly() {
        let (s, set, p) = guarded_fixture();
        let family = ConditionalFamily::from_set(&set, &p).unwrap();
        assert!(assembled_member(&family, &g(&s, &[-1.0, 1.0, -1.0, 1.0])).unwrap().is_in());
        assert!(assembled_member(&family, &Gamble::zero(&s)).unwrap().is_out());
        // one block zero, the other accepted
        assert!(assembled_member(&family, &g(&s, &[0.0, 0.0, -1.0, 1.0])).unwrap().is_in());
    }

    #[test]
    fn conglomerability_counterexample() {
        let (s, set, p) = guarded_fixture();
        let family = ConditionalFamily::from_set(&set, &p).unwrap();
        match conglomerability_check(&set, &family, 50, 1).unwrap() {
            ConglomerabilityOutcome::Witness { gamble } => {
                assert_eq!(gamble.values(), &[-1.0, 1.0, -1.0, 1.0]);
                // adjoining the witness trips the guard, so the grown set
                // accepts the zero gamble: partial loss
                let mut gens = set.generators().unwrap().to_vec();
                gens.push(gamble);
                let grown = DesirSet::generated(
                    &s,
                    gens,
                    ClosureSpec::new(OperatorKind::NegLimit { max_negative_coords: 1 }),
                )
                .unwrap();
                assert_eq!(
                    crate::consistency::avoids_partial_loss(&grown).unwrap(),
                    TriState::No
                );
            }
            other => panic!("expected witness, got {other:?}"),
        }
    }

    #[test]
    fn trivial_partition_is_conglomerable() {
        let s = PossibilitySpace::with_size(2).unwrap();
        let set =
            DesirSet::generated(&s, vec![g(&s, &[-1.0, 1.0])], ClosureSpec::kappa4()).unwrap();
        let family = ConditionalFamily::from_set(&set, &Partition::trivial(&s)).unwrap();
        assert!(matches!(
            conglomerability_check(&set, &family, 200, 2).unwrap(),
            ConglomerabilityOutcome::NoWitness { .. }
        ));
    }

    #[test]
    fn kappa1_finite_partitions_conglomerable_on_samples() {
        let mut rng = sampling::rng(17);
        let s = PossibilitySpace::with_size(4).unwrap();
        let p = Partition::from_labels(&s, &[vec!["w1", "w2"], vec!["w3", "w4"]]).unwrap();
        let mut tested = 0;
        for _ in 0..20 {
            let gens = sampling::generators_grid(&s, &mut rng, 3);
            let set = DesirSet::generated(&s, gens, ClosureSpec::kappa1()).unwrap();
            if crate::consistency::avoids_partial_loss(&set).unwrap() != TriState::Yes {
                continue;
            }
            tested += 1;
            let family = ConditionalFamily::from_set(&set, &p).unwrap();
            assert!(
                matches!(
                    conglomerability_check(&set, &family, 60, 3).unwrap(),
                    ConglomerabilityOutcome::NoWitness { .. }
                ),
                "additive closure must be conglomerable over finite partitions"
            );
        }
        assert!(tested > 3);
    }

    #[test]
    fn marginal_extension_recovers_assessments() {
        let s = PossibilitySpace::with_size(4).unwrap();
        let p = Partition::from_labels(&s, &[vec!["w1", "w2"], vec!["w3", "w4"]]).unwrap();
        let marg = DesirSet::generated(
            &s,
            vec![g(&s, &[0.5, 0.5, -0.5, -0.5])],
            ClosureSpec::kappa4(),
        )
        .unwrap();
        let b1 = DesirSet::generated(&s, vec![g(&s, &[2.0, -1.0, 0.0, 0.0])], ClosureSpec::kappa4())
            .unwrap();
        let b2 = DesirSet::generated(&s, vec![g(&s, &[0.0, 0.0, 2.0, -1.0])], ClosureSpec::kappa4())
            .unwrap();
        let family = ConditionalFamily::new(p.clone(), vec![b1, b2]).unwrap();
        let me = marginal_extension_set(&marg, &family, ClosureSpec::kappa4()).unwrap();

        // marginal recovery
        assert!(marginal_member(&me, &g(&s, &[0.5, 0.5, -0.5, -0.5]), &p).unwrap().is_in());
        // conditional recovery
        let b = Event::from_labels(&s, &["w1", "w2"]).unwrap();
        assert!(conditional_member(&me, &g(&s, &[2.0, -1.0, 0.0, 0.0]), &b).unwrap().is_in());
        // cross-block sum accepted
        assert!(me.member(&g(&s, &[2.0, -1.0, 2.0, -1.0])).unwrap().is_in());
        // coherence of the joint extension
        assert_eq!(crate::consistency::avoids_partial_loss(&me).unwrap(), TriState::Yes);
    }
}
