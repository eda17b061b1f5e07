//! Acceptance suite: one test per criterion, each printing a pass line
//! with its headline numbers (visible under `--nocapture`). Tolerances are
//! pinned in the assertions.
//!
//! ```bash
//! cargo test -p desir --test acceptance -- --nocapture
//! ```

use desir::consistency::{avoids_partial_loss, avoids_sure_loss, is_coherent, EPS_GRID};
use desir::credal::{credal_intersection, is_empty, vertices, CredalPolytope};
use desir::decide::paired_choice_demo;
use desir::demo::containment_sample;
use desir::operators::axiom_probe;
use desir::previsions::{
    gbr_conditional, kappa1_prevision_lp, lower_prevision, upper_prevision,
};
use desir::scenario::{report_to_json, run, Scenario};
use desir::structure::{conglomerability_check, ConditionalFamily, ConglomerabilityOutcome};
use desir::{
    sampling, CatalogId, Classification, ClosureSpec, DesirSet, Event, Gamble, OperatorKind,
    Partition, PossibilitySpace, PriceFunctional, TriState, UtilityFn,
};

fn space(n: usize) -> PossibilitySpace {
    PossibilitySpace::with_size(n).unwrap()
}

fn g(s: &PossibilitySpace, v: &[f64]) -> Gamble {
    Gamble::new(s, v.to_vec()).unwrap()
}

fn pass(line: &str) {
    println!("acceptance: {line}: PASS");
}

#[test]
fn criterion_01_scaling_closure_prevision_triple() {
    let s = space(2);
    let set = DesirSet::generated(
        &s,
        vec![g(&s, &[-1.0, 1.0]), g(&s, &[1.0, -2.0])],
        ClosureSpec::kappa3(),
    )
    .unwrap();
    let cases = [
        ([-2.0, 3.0], 0.5),
        ([3.0, -2.0], 4.0 / 3.0),
        ([1.0, 1.0], 1.0),
    ];
    for (values, expected) in cases {
        let got = lower_prevision(&set, &g(&s, &values), 1e-9).unwrap().estimate();
        assert!(
            (got - expected).abs() < 1e-6,
            "prevision of {values:?}: {got} vs {expected}"
        );
    }
    pass("criterion 01, scaling-closure previsions (0.5, 4/3, 1) within 1e-6");
}

#[test]
fn criterion_02_dominance_homogeneity_failure() {
    let s = space(2);
    let set =
        DesirSet::generated(&s, vec![g(&s, &[-1.0, 1.0])], ClosureSpec::kappa4()).unwrap();
    let single = lower_prevision(&set, &g(&s, &[-1.0, 1.0]), 1e-9).unwrap().estimate();
    let doubled = lower_prevision(&set, &g(&s, &[-2.0, 2.0]), 1e-9).unwrap().estimate();
    assert!(single.abs() < 1e-6, "lower(f) = {single}");
    assert!((doubled + 1.0).abs() < 1e-6, "lower(2f) = {doubled}");
    pass("criterion 02, dominance closure prices f at 0 and 2f at -1 within 1e-6");
}

#[test]
fn criterion_03_paired_choice_resolution() {
    let report = paired_choice_demo().unwrap();
    let expected = [1.0, 0.96, 0.6, 0.76];
    for (got, want) in report.previsions.iter().zip(&expected) {
        assert!((got - want).abs() <= 1e-12, "{got} vs {want}");
    }
    assert_eq!(report.experiment_one.optimal, vec!["f1"]);
    assert_eq!(report.experiment_two.optimal, vec!["f4"]);
    assert!((report.additive_impossibility.constant_value + 0.02).abs() <= 1e-12);
    assert!(report
        .additive_impossibility
        .total
        .iter()
        .all(|v| (v + 0.02).abs() <= 1e-12));
    assert_eq!(
        report.additive_impossibility.classification,
        Classification::StrictlyNegative
    );
    pass("criterion 03, paired-choice previsions exact to 1e-12, selections f1/f4, impossibility constant -0.02");
}

#[test]
fn criterion_04_precise_nonlinear_corner_set() {
    let s = space(2);
    let set = DesirSet::catalog(&s, CatalogId::CornerRegionsBinary).unwrap();
    let p1 = lower_prevision(&set, &g(&s, &[-2.0, 1.0]), 1e-9).unwrap().estimate();
    let p2 = lower_prevision(&set, &g(&s, &[-1.0, 0.5]), 1e-9).unwrap().estimate();
    assert!(p1.abs() < 1e-6, "price of (-2,1) = {p1}");
    assert!((p2 + 0.5).abs() < 1e-6, "price of (-1,0.5) = {p2}");
    let report = desir::previsions::is_precise(&set, 10_000, 41, 1e-9).unwrap();
    assert_eq!(report.verdict, TriState::Yes, "{report:?}");
    pass("criterion 04, corner-region set precise over 10_000 samples with prices 0 and -0.5");
}

#[test]
fn criterion_05_conditional_supremum_sandwich() {
    let s = space(3);
    let f = g(&s, &[1.0, -1.0, 0.0]);
    let event = Event::from_labels(&s, &["w1", "w2"]).unwrap();

    let strict_set = DesirSet::catalog(&s, CatalogId::MedianStrictTernary).unwrap();
    let r = gbr_conditional(&strict_set, &f, &event, 1e-9).unwrap();
    for (got, want) in [
        (r.strict_sup.estimate(), -1.0),
        (r.member_sup.estimate(), -1.0),
        (r.weak_sup.estimate(), 1.0),
    ] {
        assert!((got - want).abs() < 1e-6, "{got} vs {want}");
    }
    assert_eq!(r.sandwich_ok, Some(true));

    let weak_set = DesirSet::catalog(&s, CatalogId::MedianWeakTernary).unwrap();
    let r = gbr_conditional(&weak_set, &f, &event, 1e-9).unwrap();
    for (got, want) in [
        (r.strict_sup.estimate(), -1.0),
        (r.member_sup.estimate(), 1.0),
        (r.weak_sup.estimate(), 1.0),
    ] {
        assert!((got - want).abs() < 1e-6, "{got} vs {want}");
    }
    assert_eq!(r.sandwich_ok, Some(true));

    // the trio set: membership threshold pinned; the outer bounds are the
    // values the oracle certifies, printed for comparison against other
    // derivations of the same fixture
    let trio = DesirSet::catalog(&s, CatalogId::ConeTrioTernary).unwrap();
    let r = gbr_conditional(&trio, &f, &event, 1e-9).unwrap();
    assert!((r.event_prevision.estimate() - 0.1).abs() < 1e-6);
    assert!((r.member_sup.estimate() - 0.5).abs() < 1e-6);
    assert_eq!(r.sandwich_ok, Some(true));
    // oracle-certified outer bounds for this fixture
    assert!((r.strict_sup.estimate() + 0.9).abs() < 1e-6, "strict {}", r.strict_sup.estimate());
    assert!((r.weak_sup.estimate() - 0.5).abs() < 1e-6, "weak {}", r.weak_sup.estimate());
    println!(
        "acceptance: criterion 05 note: trio fixture certifies (strict, member, weak) = ({}, {}, {})",
        r.strict_sup.estimate(),
        r.member_sup.estimate(),
        r.weak_sup.estimate()
    );
    pass("criterion 05, conditional supremum sandwich over the three fixtures");
}

#[test]
fn criterion_06_conglomerability_counterexample() {
    let s = space(4);
    let gens = vec![g(&s, &[-1.0, 1.0, 0.0, 0.0]), g(&s, &[0.0, 0.0, -1.0, 1.0])];
    let spec = ClosureSpec::new(OperatorKind::NegLimit { max_negative_coords: 1 });
    let set = DesirSet::generated(&s, gens.clone(), spec.clone()).unwrap();
    let partition = Partition::from_labels(&s, &[vec!["w1", "w2"], vec!["w3", "w4"]]).unwrap();
    let family = ConditionalFamily::from_set(&set, &partition).unwrap();
    match conglomerability_check(&set, &family, 100, 6).unwrap() {
        ConglomerabilityOutcome::Witness { gamble } => {
            assert_eq!(gamble.values(), &[-1.0, 1.0, -1.0, 1.0]);
            let mut grown = gens;
            grown.push(gamble);
            let grown_set = DesirSet::generated(&s, grown, spec).unwrap();
            assert_eq!(avoids_partial_loss(&grown_set).unwrap(), TriState::No);
        }
        other => panic!("expected a witness, got {other:?}"),
    }
    pass("criterion 06, guarded-dominance witness (-1,1,-1,1) whose assembly incurs partial loss");
}

#[test]
fn criterion_07_operator_zoo_containment() {
    let (checked, violations) = containment_sample(500, 0x515).unwrap();
    assert_eq!(violations, 0, "containment violations over {checked} checks");
    pass(&format!(
        "criterion 07, membership containment along the implication diagram over 500 seeded sets ({checked} checks, 0 violations)"
    ));
}

#[test]
fn criterion_08_axiom_suite() {
    let specs = [
        ClosureSpec::kappa1(),
        ClosureSpec::kappa2(64),
        ClosureSpec::kappa3(),
        ClosureSpec::kappa4(),
        ClosureSpec::new(OperatorKind::UtilityWarp {
            utility: UtilityFn::OddPower { exponent: 2.0 },
        }),
        ClosureSpec::new(OperatorKind::UtilityWarp {
            utility: UtilityFn::Cara { risk: 0.5 },
        }),
        ClosureSpec::new(OperatorKind::PrevisionInduced {
            functional: PriceFunctional::Owa {
                weights: vec![0.4, 0.2, 0.4],
            },
        }),
        ClosureSpec::new(OperatorKind::NegLimit { max_negative_coords: 1 }),
    ];
    for spec in &specs {
        let report = axiom_probe(spec, 200, 0x88).unwrap();
        assert!(
            report.all_pass(),
            "{} axiom probe failed: {report:?}",
            spec.kind.name()
        );
    }

    // boundary axioms on every coherent fixture: all positives in, the
    // zero gamble never in
    let mut rng = sampling::rng(0x99);
    let coherent_sets: Vec<DesirSet> = {
        let s2 = space(2);
        let s3 = space(3);
        let mut sets = vec![
            DesirSet::generated(
                &s2,
                vec![g(&s2, &[-1.0, 1.0]), g(&s2, &[1.0, -2.0])],
                ClosureSpec::kappa3(),
            )
            .unwrap(),
            DesirSet::generated(&s2, vec![g(&s2, &[-1.0, 1.0])], ClosureSpec::kappa4()).unwrap(),
            DesirSet::induced_by(
                &s3,
                PriceFunctional::Owa { weights: vec![0.4, 0.2, 0.4] },
            )
            .unwrap(),
        ];
        for id in CatalogId::ALL {
            let s = space(id.space_size());
            sets.push(DesirSet::catalog(&s, id).unwrap());
        }
        sets
    };
    for set in &coherent_sets {
        assert_eq!(is_coherent(set).unwrap(), TriState::Yes, "{}", set.describe());
        let zero = Gamble::zero(set.space());
        assert!(set.member(&zero).unwrap().is_out(), "{}", set.describe());
        for _ in 0..50 {
            let p = sampling::gamble_grid_positive(set.space(), &mut rng);
            assert!(set.member(&p).unwrap().is_in(), "{} rejects {p}", set.describe());
        }
    }
    pass("criterion 08, structural axioms over 200 trials per kind and boundary axioms on every coherent fixture");
}

#[test]
fn criterion_09_bisection_lp_oracle_equivalence() {
    let mut rng = sampling::rng(0x1009);
    let s2 = space(2);
    let s3 = space(3);
    let mut compared = 0;
    while compared < 200 {
        let s = if compared % 2 == 0 { &s2 } else { &s3 };
        let gens = sampling::generators_grid(s, &mut rng, 3);
        let set = DesirSet::generated(s, gens.clone(), ClosureSpec::kappa1()).unwrap();
        if avoids_sure_loss(&set, &EPS_GRID).unwrap().verdict != TriState::Yes {
            continue; // unbounded previsions ahead; skip the instance
        }
        let f = sampling::gamble_grid(s, &mut rng);
        let lp = kappa1_prevision_lp(s, &gens, &f).unwrap().expect("bounded");
        // lower_prevision bisects and cross-checks internally; compare the
        // reported estimate against the raw lp value again here
        let bracket = lower_prevision(&set, &f, 1e-9).unwrap();
        assert!(
            (bracket.estimate() - lp).abs() < 1e-6,
            "bisection {} vs lp {lp} on {f} over {gens:?}",
            bracket.estimate()
        );
        compared += 1;
    }
    pass("criterion 09, bisection and lp previsions agree within 1e-6 on 200 seeded instances");
}

#[test]
fn criterion_10_credal_geometry() {
    let s = space(2);
    let set =
        DesirSet::generated(&s, vec![g(&s, &[-1.0, 2.0])], ClosureSpec::kappa1()).unwrap();
    let poly = credal_intersection(&set).unwrap();
    let verts = vertices(&poly).unwrap();
    let coords: Vec<&[f64]> = verts.iter().map(|v| v.weights.as_slice()).collect();
    assert_eq!(coords.len(), 2);
    assert!(coords
        .iter()
        .any(|p| (p[0] - 2.0 / 3.0).abs() <= 1e-9 && (p[1] - 1.0 / 3.0).abs() <= 1e-9));
    assert!(coords.iter().any(|p| p[0].abs() <= 1e-9 && (p[1] - 1.0).abs() <= 1e-9));

    let clash = CredalPolytope::new(&s, vec![g(&s, &[-1.0, 1.0]), g(&s, &[1.0, -2.0])]).unwrap();
    let report = is_empty(&clash).unwrap();
    assert!(report.empty);
    let mixture = report.mixture.expect("certificate mixture");
    assert!(mixture.iter().cloned().fold(f64::NEG_INFINITY, f64::max) < 0.0);

    // separation criterion against the integer-sum loss verdict
    let mut rng = sampling::rng(0x10);
    let mut agreed = 0;
    while agreed < 100 {
        let s = if agreed % 2 == 0 { space(2) } else { space(3) };
        let gens = sampling::generators_grid(&s, &mut rng, 3);
        let set = DesirSet::generated(&s, gens.clone(), ClosureSpec::kappa2(64)).unwrap();
        let asl = avoids_sure_loss(&set, &EPS_GRID).unwrap().verdict;
        if asl == TriState::Unknown {
            continue;
        }
        let poly = CredalPolytope::new(&s, gens).unwrap();
        let empty = is_empty(&poly).unwrap().empty;
        assert_eq!(
            empty,
            asl == TriState::No,
            "separation and loss verdicts must match"
        );
        agreed += 1;
    }
    pass("criterion 10, polytope vertices to 1e-9, separation certificate, and 100 matched loss verdicts");
}

#[test]
fn criterion_11_conjugacy_and_constant_additivity() {
    let mut rng = sampling::rng(0x11);
    let kinds: Vec<(OperatorKind, usize)> = vec![
        (OperatorKind::Kappa1, 2),
        (OperatorKind::Kappa2 { max_multiplicity: 64 }, 2),
        (OperatorKind::Kappa3, 2),
        (OperatorKind::Kappa4, 3),
        (
            OperatorKind::UtilityWarp { utility: UtilityFn::OddPower { exponent: 3.0 } },
            2,
        ),
        (
            OperatorKind::PrevisionInduced {
                functional: PriceFunctional::Owa { weights: vec![0.4, 0.2, 0.4] },
            },
            3,
        ),
        (OperatorKind::NegLimit { max_negative_coords: 1 }, 3),
    ];
    let mut samples = 0;
    let mut guard = 0;
    while samples < 500 {
        guard += 1;
        assert!(guard < 20_000, "sampler failed to produce 500 clean instances");
        let (kind, size) = &kinds[samples % kinds.len()];
        let s = space(*size);
        let gens = match kind {
            OperatorKind::PrevisionInduced { .. } => Vec::new(),
            _ => sampling::generators_grid(&s, &mut rng, 2),
        };
        let set = match DesirSet::generated(&s, gens, ClosureSpec::new(kind.clone())) {
            Ok(set) => set,
            Err(_) => continue,
        };
        if avoids_sure_loss(&set, &EPS_GRID).unwrap().verdict != TriState::Yes {
            continue;
        }
        let f = sampling::gamble_grid_nonzero(&s, &mut rng);
        let lower_of_neg = match lower_prevision(&set, &f.neg(), 1e-9) {
            Ok(b) if !b.contaminated => b,
            _ => continue,
        };
        let upper = match upper_prevision(&set, &f, 1e-9) {
            Ok(b) if !b.contaminated => b,
            _ => continue,
        };
        assert!(
            (upper.estimate() + lower_of_neg.estimate()).abs() <= 2e-9,
            "{} conjugacy on {f}: {} vs {}",
            kind.name(),
            upper.estimate(),
            lower_of_neg.estimate()
        );
        let base = match lower_prevision(&set, &f, 1e-9) {
            Ok(b) if !b.contaminated => b.estimate(),
            _ => continue,
        };
        let c = 0.75;
        let shifted = lower_prevision(&set, &f.shift(c), 1e-9).unwrap().estimate();
        assert!(
            (shifted - base - c).abs() <= 2e-9,
            "{} constant additivity on {f}: {shifted} vs {base} + {c}",
            kind.name()
        );
        samples += 1;
    }
    pass("criterion 11, conjugacy and constant additivity within 2e-9 on 500 seeded samples across kinds");
}

#[test]
fn criterion_12_deterministic_reports() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios");
    let mut checked = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        let text = std::fs::read_to_string(&path).unwrap();
        let scenario = Scenario::from_json(&text).unwrap();
        let a = report_to_json(&run(&scenario, None, None, false).unwrap()).unwrap();
        let b = report_to_json(&run(&scenario, None, None, false).unwrap()).unwrap();
        assert_eq!(a, b, "report for {path:?} not byte-identical");
        checked += 1;
    }
    assert!(checked >= 5, "expected the bundled scenarios, found {checked}");
    pass(&format!(
        "criterion 12, byte-identical reports for {checked} bundled scenarios"
    ));
}
