//! Avoiding partial and sure loss, coherence, and decisiveness probing.
//!
//! The same generator pair is harmless under single-scaling but incurs
//! loss once arbitrary positive combinations are allowed: three copies of
//! the first plus two of the second sum to a strictly negative constant.
//!
//! ```bash
//! cargo run -p desir --example consistency_checks
//! ```

use desir::consistency::{
    avoids_partial_loss, avoids_sure_loss, decisiveness_probe, is_coherent, DecisivenessOutcome,
    EPS_GRID,
};
use desir::{CatalogId, ClosureSpec, DesirSet, Gamble, PossibilitySpace, PriceFunctional};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let space = PossibilitySpace::with_size(2)?;
    let gens = vec![
        Gamble::new(&space, vec![-1.0, 1.0])?,
        Gamble::new(&space, vec![1.0, -2.0])?,
    ];

    for spec in [ClosureSpec::kappa1(), ClosureSpec::kappa3(), ClosureSpec::kappa4()] {
        let name = spec.kind.name();
        let set = DesirSet::generated(&space, gens.clone(), spec)?;
        let apl = avoids_partial_loss(&set)?;
        let asl = avoids_sure_loss(&set, &EPS_GRID)?;
        let coherent = is_coherent(&set)?;
        println!("{name}: partial loss avoided {apl:?}, sure loss avoided {:?}, coherent {coherent:?}", asl.verdict);
        if let Some(w) = asl.witness {
            println!("  sure-loss witness in the extension: {w}");
        }
    }

    // a dominance-closed set is rarely decisive: both f and -f can miss
    let space3 = PossibilitySpace::with_size(3)?;
    let owa = DesirSet::induced_by(
        &space3,
        PriceFunctional::Owa { weights: vec![0.4, 0.2, 0.4] },
    )?;
    match decisiveness_probe(&owa, 200, 1)? {
        DecisivenessOutcome::Counterexample { gamble, both_in } => println!(
            "ordered-weighted-average set is indecisive at {gamble:?} (both in: {both_in})"
        ),
        DecisivenessOutcome::NoCounterexample { .. } => println!("no indecision found"),
    }

    // the corner-region set prices every non-boundary gamble decisively
    let space2 = PossibilitySpace::with_size(2)?;
    let corners = DesirSet::catalog(&space2, CatalogId::CornerRegionsBinary)?;
    match decisiveness_probe(&corners, 10_000, 2)? {
        DecisivenessOutcome::NoCounterexample { trials, .. } => {
            println!("corner-region set: no indecision in {trials} random trials")
        }
        DecisivenessOutcome::Counterexample { gamble, .. } => {
            println!("unexpected indecision at {gamble:?}")
        }
    }
    Ok(())
}
