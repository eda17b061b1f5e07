//! A coherent set whose conditional assembly escapes it: conglomerability
//! can fail over a finite partition once the closure is nonlinear.
//!
//! The operator caps accepted gambles at one strictly negative coordinate.
//! Each block's conditional part is fine on its own, but their assembly
//! has two negative coordinates, trips the cap, and the grown set
//! collapses into partial loss.
//!
//! ```bash
//! cargo run -p desir --example conglomerability
//! ```

use desir::consistency::avoids_partial_loss;
use desir::structure::{conglomerability_check, ConditionalFamily, ConglomerabilityOutcome};
use desir::{ClosureSpec, DesirSet, Gamble, OperatorKind, Partition, PossibilitySpace};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let space = PossibilitySpace::with_size(4)?;
    let gens = vec![
        Gamble::new(&space, vec![-1.0, 1.0, 0.0, 0.0])?,
        Gamble::new(&space, vec![0.0, 0.0, -1.0, 1.0])?,
    ];
    let spec = ClosureSpec::new(OperatorKind::NegLimit { max_negative_coords: 1 });
    let set = DesirSet::generated(&space, gens.clone(), spec.clone())?;
    println!("base set avoids partial loss: {:?}", avoids_partial_loss(&set)?);

    let partition = Partition::from_labels(&space, &[vec!["w1", "w2"], vec!["w3", "w4"]])?;
    let family = ConditionalFamily::from_set(&set, &partition)?;
    match conglomerability_check(&set, &family, 100, 42)? {
        ConglomerabilityOutcome::Witness { gamble } => {
            println!("assembled member outside the set: {gamble}");
            let mut grown = gens;
            grown.push(gamble);
            let collapsed = DesirSet::generated(&space, grown, spec)?;
            println!(
                "after adjoining it, partial loss avoided: {:?}",
                avoids_partial_loss(&collapsed)?
            );
        }
        ConglomerabilityOutcome::NoWitness { candidates_checked } => {
            println!("no witness in {candidates_checked} candidates");
        }
    }

    // under the conic hull the same construction stays conglomerable
    let linear = DesirSet::generated(
        &space,
        vec![
            Gamble::new(&space, vec![-1.0, 1.0, 0.0, 0.0])?,
            Gamble::new(&space, vec![0.0, 0.0, -1.0, 1.0])?,
        ],
        ClosureSpec::kappa1(),
    )?;
    let family = ConditionalFamily::from_set(&linear, &partition)?;
    match conglomerability_check(&linear, &family, 200, 42)? {
        ConglomerabilityOutcome::NoWitness { candidates_checked } => println!(
            "conic closure: conglomerable over the finite partition ({candidates_checked} candidates checked)"
        ),
        ConglomerabilityOutcome::Witness { gamble } => {
            println!("unexpected witness {gamble}")
        }
    }
    Ok(())
}
