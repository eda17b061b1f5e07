//! Structural probes: the closure axioms on random sets, the implication
//! chain between the built-in operator kinds, and the searches that tell
//! the kinds apart.
//!
//! ```bash
//! cargo run -p desir --example operator_probes
//! ```

use desir::demo::containment_sample;
use desir::operators::{axiom_probe, equivalence_probe, EquivalenceOutcome};
use desir::{ClosureSpec, OperatorKind, PriceFunctional, UtilityFn};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let specs = [
        ClosureSpec::kappa1(),
        ClosureSpec::kappa2(64),
        ClosureSpec::kappa3(),
        ClosureSpec::kappa4(),
        ClosureSpec::new(OperatorKind::UtilityWarp {
            utility: UtilityFn::OddPower { exponent: 2.0 },
        }),
        ClosureSpec::new(OperatorKind::PrevisionInduced {
            functional: PriceFunctional::Owa { weights: vec![0.4, 0.2, 0.4] },
        }),
        ClosureSpec::new(OperatorKind::NegLimit { max_negative_coords: 1 }),
    ];
    for spec in &specs {
        let report = axiom_probe(spec, 100, 17)?;
        println!(
            "{}: extensiveness/monotonicity/idempotency/dominance pass = {}, unknown answers = {}",
            spec.kind.name(),
            report.all_pass(),
            report.unknown_answers
        );
    }

    let (checked, violations) = containment_sample(300, 5)?;
    println!(
        "\nmembership containment along the implication chain: {checked} checks, {violations} violations"
    );

    for (a, b) in [
        (OperatorKind::Kappa1, OperatorKind::Kappa2 { max_multiplicity: 64 }),
        (OperatorKind::Kappa3, OperatorKind::Kappa4),
        (OperatorKind::Kappa2 { max_multiplicity: 64 }, OperatorKind::Kappa3),
    ] {
        match equivalence_probe(&a, &b, 50, 23)? {
            EquivalenceOutcome::Distinguished { witness } => {
                println!("{} vs {}: {witness}", a.name(), b.name())
            }
            EquivalenceOutcome::ConsistentSoFar { sets_checked } => println!(
                "{} vs {}: consistent over {sets_checked} sets",
                a.name(),
                b.name()
            ),
        }
    }
    Ok(())
}
