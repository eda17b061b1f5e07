//! Worked fixtures with independently derived expected values: interval
//! feasibility computed by hand per generator, functional values by direct
//! arithmetic, tower-property values by the law of total expectation.

use desir::consistency::{coherent_relative, ClaimedSet, RestrictedFamily};
use desir::previsions::{
    check_constant_additivity, check_p_axioms, closure_equals_weak_set, gbr_conditional,
    lower_prevision, lpr_avoids_sure_loss, lpr_coherent, lpr_leq_upr_check,
    marginal_extension_prevision, upper_prevision, LowerUpperOutcome, PriceAssessor,
};
use desir::structure::ConditionalFamily;
use desir::{
    CatalogId, ClosureSpec, DesirSet, Event, Gamble, OperatorKind, Partition, PossibilitySpace,
    PriceFunctional, TriState, UtilityFn,
};

fn space(n: usize) -> PossibilitySpace {
    PossibilitySpace::with_size(n).unwrap()
}

fn g(s: &PossibilitySpace, v: &[f64]) -> Gamble {
    Gamble::new(s, v.to_vec()).unwrap()
}

fn scaling_pair(s: &PossibilitySpace) -> DesirSet {
    DesirSet::generated(
        s,
        vec![g(s, &[-1.0, 1.0]), g(s, &[1.0, -2.0])],
        ClosureSpec::kappa3(),
    )
    .unwrap()
}

#[test]
fn upper_prevision_of_the_scaling_pair() {
    let s = space(2);
    let set = scaling_pair(&s);
    // selling prices for (-2, 3) start at -1/3: the second generator
    // scaled by 5/3 touches mu - f exactly there
    let upper = upper_prevision(&set, &g(&s, &[-2.0, 3.0]), 1e-9).unwrap();
    assert!((upper.estimate() + 1.0 / 3.0).abs() < 1e-9, "{}", upper.estimate());
    assert_eq!(upper.boundary_in, TriState::Yes);
}

#[test]
fn constants_price_at_themselves() {
    let s = space(2);
    for set in [
        scaling_pair(&s),
        DesirSet::catalog(&s, CatalogId::CornerRegionsBinary).unwrap(),
    ] {
        let c = Gamble::constant(&s, 1.75).unwrap();
        let b = lower_prevision(&set, &c, 1e-9).unwrap();
        assert!((b.estimate() - 1.75).abs() < 1e-9);
    }
}

#[test]
fn constant_additivity_shifts() {
    let s = space(2);
    let set = scaling_pair(&s);
    let f = g(&s, &[-2.0, 3.0]);
    let rows = check_constant_additivity(&set, &f, &[1.0, 0.0, -2.0], 1e-9).unwrap();
    assert!(rows.iter().all(|r| r.ok), "{rows:?}");
    assert!((rows[0].shifted_prevision - 1.5).abs() < 1e-9);
    assert!((rows[1].shifted_prevision - 0.5).abs() < 1e-9);

    // the ordered weighted average is constant additive by construction
    let s3 = space(3);
    let owa = DesirSet::induced_by(&s3, PriceFunctional::Owa { weights: vec![0.4, 0.2, 0.4] })
        .unwrap();
    let f = g(&s3, &[0.5, -1.25, 2.0]);
    let rows = check_constant_additivity(&owa, &f, &[-2.0, 0.25], 1e-9).unwrap();
    assert!(rows.iter().all(|r| r.ok), "{rows:?}");
}

#[test]
fn superadditivity_fails_under_scaling_closure() {
    let s = space(2);
    let set = scaling_pair(&s);
    let h1 = g(&s, &[-2.0, 3.0]);
    let h2 = g(&s, &[3.0, -2.0]);
    let p1 = lower_prevision(&set, &h1, 1e-9).unwrap().estimate();
    let p2 = lower_prevision(&set, &h2, 1e-9).unwrap().estimate();
    let psum = lower_prevision(&set, &h1.add(&h2).unwrap(), 1e-9).unwrap().estimate();
    assert!((p1 + p2 - 11.0 / 6.0).abs() < 1e-9);
    assert!((psum - 1.0).abs() < 1e-9);
    assert!(p1 + p2 > psum, "superadditivity should fail here");

    let report = check_p_axioms(&set, 30, 5, 1e-9).unwrap();
    assert!(report.bounds.violations.is_empty());
    assert!(!report.superadditivity.expected_to_hold);
}

#[test]
fn homogeneity_fails_under_dominance_closure() {
    let s = space(2);
    let set =
        DesirSet::generated(&s, vec![g(&s, &[-1.0, 1.0])], ClosureSpec::kappa4()).unwrap();
    let f = g(&s, &[-1.0, 1.0]);
    let single = lower_prevision(&set, &f, 1e-9).unwrap().estimate();
    let doubled = lower_prevision(&set, &f.scale(2.0), 1e-9).unwrap().estimate();
    assert!(single.abs() < 1e-9);
    assert!((doubled + 1.0).abs() < 1e-9);

    let report = check_p_axioms(&set, 30, 6, 1e-9).unwrap();
    assert!(report.bounds.violations.is_empty());
    assert!(!report.homogeneity.expected_to_hold);
    assert!(!report.homogeneity.violations.is_empty(), "the failure should be observed");
}

#[test]
fn buy_above_sell_with_cancelling_pair() {
    let s = space(2);
    let set = scaling_pair(&s);
    match lpr_leq_upr_check(&set, 60, 2, 1e-9).unwrap() {
        LowerUpperOutcome::Violation { lower, upper, pair, .. } => {
            assert!(lower > upper);
            let pair = pair.expect("scaled generator pair should cancel to a constant");
            let total: Vec<f64> = pair.g1.iter().zip(&pair.g2).map(|(a, b)| a + b).collect();
            assert!(total.iter().all(|&v| (v - total[0]).abs() < 1e-7 && v < 0.0));
        }
        LowerUpperOutcome::Holds { .. } => panic!("the scaling pair must violate buy <= sell"),
    }

    // plain dominance with one generator admits no cancelling pair
    let dominance =
        DesirSet::generated(&s, vec![g(&s, &[-1.0, 1.0])], ClosureSpec::kappa4()).unwrap();
    assert!(matches!(
        lpr_leq_upr_check(&dominance, 200, 3, 1e-9).unwrap(),
        LowerUpperOutcome::Holds { .. }
    ));
}

#[test]
fn weak_set_is_the_closure() {
    let s = space(2);
    for set in [
        DesirSet::generated(&s, vec![g(&s, &[-1.0, 2.0])], ClosureSpec::kappa1()).unwrap(),
        DesirSet::generated(&s, vec![g(&s, &[-1.0, 1.0])], ClosureSpec::kappa4()).unwrap(),
    ] {
        let report = closure_equals_weak_set(&set, 80, 7, 1e-9).unwrap();
        assert!(report.failures.is_empty(), "{:?}", report.failures);
    }
}

#[test]
fn prevision_level_sure_loss() {
    let s3 = space(3);
    let owa = PriceFunctional::Owa { weights: vec![0.4, 0.2, 0.4] };
    let probe = vec![
        g(&s3, &[1.0, -1.0, 0.0]),
        g(&s3, &[0.5, 0.5, -2.0]),
        g(&s3, &[-1.0, 2.0, 0.25]),
    ];
    // the average never exceeds the maximum: dominance-level consistency
    let verdict =
        lpr_avoids_sure_loss(&PriceAssessor::Functional(&owa), &probe, &OperatorKind::Kappa4, 1e-9)
            .unwrap();
    assert_eq!(verdict, TriState::Yes);

    // prices pinned one unit above every supremum: a constructed violation
    let prices_above: Vec<f64> = probe.iter().map(|f| f.sup() + 1.0).collect();
    let verdict = lpr_avoids_sure_loss(
        &PriceAssessor::Table(&prices_above),
        &probe,
        &OperatorKind::Kappa4,
        1e-9,
    )
    .unwrap();
    assert_eq!(verdict, TriState::No);

    // a fair linear prevision survives the integer-sum criterion
    let fair = PriceFunctional::Linear { weights: vec![0.2, 0.3, 0.5] };
    let verdict = lpr_avoids_sure_loss(
        &PriceAssessor::Functional(&fair),
        &probe,
        &OperatorKind::Kappa2 { max_multiplicity: 64 },
        1e-9,
    )
    .unwrap();
    assert_eq!(verdict, TriState::Yes);

    // and is coherent under the conic hull
    let verdict = lpr_coherent(
        &PriceAssessor::Functional(&fair),
        &probe,
        &OperatorKind::Kappa1,
        1e-9,
    )
    .unwrap();
    assert_eq!(verdict, TriState::Yes);

    // the average is coherent at dominance level
    let verdict =
        lpr_coherent(&PriceAssessor::Functional(&owa), &probe, &OperatorKind::Kappa4, 1e-9)
            .unwrap();
    assert_eq!(verdict, TriState::Yes);
}

#[test]
fn set_backed_prices() {
    let s = space(2);
    let set = DesirSet::generated(&s, vec![g(&s, &[-1.0, 1.0])], ClosureSpec::kappa4()).unwrap();
    let probe = vec![g(&s, &[1.0, 0.0]), g(&s, &[0.0, 1.0]), g(&s, &[2.0, -1.0])];
    let verdict = lpr_avoids_sure_loss(
        &PriceAssessor::Set(&set),
        &probe,
        &OperatorKind::Kappa4,
        1e-9,
    )
    .unwrap();
    assert_eq!(verdict, TriState::Yes);
}

#[test]
fn warped_membership_examples() {
    let s = space(2);
    let spec = ClosureSpec::new(OperatorKind::UtilityWarp {
        utility: UtilityFn::OddPower { exponent: 2.0 },
    });
    let set = DesirSet::generated(&s, vec![g(&s, &[-1.0, 1.0])], spec).unwrap();
    // squared coordinates: (-0.25, 0.7569) dominates 0.25 * (-1, 1)
    assert!(set.member(&g(&s, &[-0.5, 0.87])).unwrap().is_in());
    // (-0.25, 0.16): any scaling >= 0.25 demands second coordinate >= 0.25
    assert!(set.member(&g(&s, &[-0.5, 0.4])).unwrap().is_out());
}

#[test]
fn functional_membership_examples() {
    let s3 = space(3);
    let owa = DesirSet::induced_by(&s3, PriceFunctional::Owa { weights: vec![0.4, 0.2, 0.4] })
        .unwrap();
    // 0.4(-0.9) + 0.2(0.1) + 0.4(1.0) = 0.06
    assert!(owa.member(&g(&s3, &[0.1, -0.9, 1.0])).unwrap().is_in());
    // 0.4(-1) + 0.2(0) + 0.4(0.9) = -0.04
    assert!(owa.member(&g(&s3, &[0.0, -1.0, 0.9])).unwrap().is_out());
    assert!(owa.member(&Gamble::zero(&s3)).unwrap().is_out());

    // a linear functional reduces to the sign test off the positives
    let s = space(2);
    let linear =
        DesirSet::induced_by(&s, PriceFunctional::Linear { weights: vec![0.25, 0.75] }).unwrap();
    let f = g(&s, &[1.0, -0.5]);
    let sign = 0.25 * 1.0 + 0.75 * (-0.5);
    assert_eq!(linear.member(&f).unwrap().is_in(), sign > 0.0);
}

#[test]
fn two_stage_tower_value() {
    let s = space(4);
    let partition = Partition::from_labels(&s, &[vec!["w1", "w2"], vec!["w3", "w4"]]).unwrap();
    let q = 0.6;
    let marginal = DesirSet::generated(
        &s,
        vec![
            g(&s, &[1.0 - q, 1.0 - q, -q, -q]),
            g(&s, &[q - 1.0, q - 1.0, q, q]),
        ],
        ClosureSpec::kappa1(),
    )
    .unwrap();
    let family = ConditionalFamily::new(
        partition,
        vec![
            DesirSet::generated(
                &s,
                vec![g(&s, &[0.7, -0.3, 0.0, 0.0]), g(&s, &[-0.7, 0.3, 0.0, 0.0])],
                ClosureSpec::kappa1(),
            )
            .unwrap(),
            DesirSet::generated(
                &s,
                vec![g(&s, &[0.0, 0.0, 0.5, -0.5]), g(&s, &[0.0, 0.0, -0.5, 0.5])],
                ClosureSpec::kappa1(),
            )
            .unwrap(),
        ],
    )
    .unwrap();
    let f = g(&s, &[1.0, 2.0, 3.0, 4.0]);
    let report =
        marginal_extension_prevision(&marginal, &family, &OperatorKind::Kappa1, &f, 1e-9).unwrap();
    let tower = 0.18 + 0.42 * 2.0 + 0.2 * 3.0 + 0.2 * 4.0;
    assert!((report.bracket.estimate() - tower).abs() < 1e-6);
    assert!((report.membership_route.unwrap() - tower).abs() < 1e-6);

    // a measurable gamble passes straight through to the marginal
    let coarse = g(&s, &[2.0, 2.0, -1.0, -1.0]);
    let report =
        marginal_extension_prevision(&marginal, &family, &OperatorKind::Kappa1, &coarse, 1e-9)
            .unwrap();
    let direct = lower_prevision(&marginal, &coarse, 1e-9).unwrap().estimate();
    assert!((report.bracket.estimate() - direct).abs() < 1e-6);
}

#[test]
fn dominance_marginal_extension_max_form() {
    let s = space(4);
    let partition = Partition::from_labels(&s, &[vec!["w1", "w2"], vec!["w3", "w4"]]).unwrap();
    let marginal = DesirSet::generated(
        &s,
        vec![Gamble::constant(&s, 0.5).unwrap()],
        ClosureSpec::kappa4(),
    )
    .unwrap();
    let family = ConditionalFamily::new(
        partition,
        vec![
            DesirSet::generated(&s, vec![g(&s, &[-1.0, 1.0, 0.0, 0.0])], ClosureSpec::kappa4())
                .unwrap(),
            DesirSet::generated(&s, vec![g(&s, &[0.0, 0.0, -1.0, 1.0])], ClosureSpec::kappa4())
                .unwrap(),
        ],
    )
    .unwrap();
    for values in [
        [1.0, 2.0, 3.0, 4.0],
        [0.5, -0.5, 1.0, 0.0],
        [-1.0, 1.5, -1.0, 1.5],
    ] {
        let f = g(&s, &values);
        // the max-form value is cross-checked inside against the
        // membership oracle of the assembled extension
        let report =
            marginal_extension_prevision(&marginal, &family, &OperatorKind::Kappa4, &f, 1e-9)
                .unwrap();
        assert!(report.membership_route.is_some());
    }
}

#[test]
fn gbr_refuses_unknown_event_sign() {
    // bounded integer-sum oracle with the event prevision stuck at Unknown
    let s = space(3);
    let set = DesirSet::generated(
        &s,
        vec![g(&s, &[1.0, -1.0, 0.25]), g(&s, &[-1.0, 1.0, 0.25])],
        ClosureSpec::kappa2(2),
    )
    .unwrap();
    let f = g(&s, &[1.0, -1.0, 0.0]);
    let event = Event::from_labels(&s, &["w1", "w2"]).unwrap();
    // either a clean answer or an explicit refusal; never a silent guess
    match gbr_conditional(&set, &f, &event, 1e-9) {
        Ok(report) => assert!(report.sandwich_ok.unwrap_or(true)),
        Err(e) => {
            let msg = e.to_string();
            assert!(
                msg.contains("unknown") || msg.contains("sign") || msg.contains("unbounded"),
                "unexpected error {msg}"
            );
        }
    }
}

#[test]
fn relative_coherence_of_marginal_sets() {
    let s = space(4);
    let partition = Partition::from_labels(&s, &[vec!["w1", "w2"], vec!["w3", "w4"]]).unwrap();
    let set = DesirSet::generated(
        &s,
        vec![g(&s, &[-0.5, 1.0, 0.25, 0.25]), g(&s, &[0.5, 0.5, -0.25, 0.0])],
        ClosureSpec::kappa4(),
    )
    .unwrap();
    let claim = ClaimedSet::Restriction {
        base: &set,
        family: RestrictedFamily::Measurable(partition),
    };
    let report = coherent_relative(&claim, 300, 12).unwrap();
    assert!(report.clean(), "{:?}", report.flags);
}
