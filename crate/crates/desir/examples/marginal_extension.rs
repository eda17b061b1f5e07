//! Combining marginal and conditional assessments into one joint set, and
//! the prevision it induces.
//!
//! Under the conic hull the induced prevision is the classical two-stage
//! composition (condition first, then apply the marginal), reproducing the
//! law of total expectation when everything is linear. The same value
//! falls out of the membership oracle of the assembled extension set.
//!
//! ```bash
//! cargo run -p desir --example marginal_extension
//! ```

use desir::previsions::marginal_extension_prevision;
use desir::structure::{marginal_extension_set, ConditionalFamily};
use desir::{ClosureSpec, DesirSet, Gamble, OperatorKind, Partition, PossibilitySpace};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let space = PossibilitySpace::with_size(4)?;
    let partition = Partition::from_labels(&space, &[vec!["w1", "w2"], vec!["w3", "w4"]])?;

    // a precise linear marginal: first block weighs 0.6
    let q = 0.6;
    let marginal_gens = vec![
        Gamble::new(&space, vec![1.0 - q, 1.0 - q, -q, -q])?,
        Gamble::new(&space, vec![q - 1.0, q - 1.0, q, q])?,
    ];
    // precise linear conditionals within each block
    let block_one = vec![
        Gamble::new(&space, vec![0.7, -0.3, 0.0, 0.0])?,
        Gamble::new(&space, vec![-0.7, 0.3, 0.0, 0.0])?,
    ];
    let block_two = vec![
        Gamble::new(&space, vec![0.0, 0.0, 0.5, -0.5])?,
        Gamble::new(&space, vec![0.0, 0.0, -0.5, 0.5])?,
    ];

    let spec = ClosureSpec::kappa1();
    let marginal = DesirSet::generated(&space, marginal_gens, spec.clone())?;
    let family = ConditionalFamily::new(
        partition,
        vec![
            DesirSet::generated(&space, block_one, spec.clone())?,
            DesirSet::generated(&space, block_two, spec.clone())?,
        ],
    )?;

    let f = Gamble::new(&space, vec![1.0, 2.0, 3.0, 4.0])?;
    let report =
        marginal_extension_prevision(&marginal, &family, &OperatorKind::Kappa1, &f, 1e-9)?;
    // blockwise weights: 0.6 * (0.3, 0.7) and 0.4 * (0.5, 0.5)
    let expected = 0.18 * 1.0 + 0.42 * 2.0 + 0.2 * 3.0 + 0.2 * 4.0;
    println!(
        "two-stage prevision of {f}: {} (tower value {expected})",
        report.bracket.estimate()
    );
    if let Some(p) = report.membership_route {
        println!("membership oracle of the assembled extension agrees: {p}");
    }

    // the assembled set recovers both assessments
    let me = marginal_extension_set(&marginal, &family, ClosureSpec::kappa1())?;
    let marg_gen = Gamble::new(&space, vec![0.4, 0.4, -0.6, -0.6])?;
    let cond_gen = Gamble::new(&space, vec![0.7, -0.3, 0.0, 0.0])?;
    println!(
        "marginal generator back in the joint set: {:?}",
        me.member(&marg_gen)?.value
    );
    println!(
        "conditional generator back in the joint set: {:?}",
        me.member(&cond_gen)?.value
    );
    Ok(())
}
