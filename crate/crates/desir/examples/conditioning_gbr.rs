//! Conditional previsions via the generalized Bayes rule, and the gap
//! between its strict form, the membership threshold, and the weak form.
//!
//! For a linear closure the three coincide; for nonlinear closures they
//! can all differ, and the three median/cone fixtures realize every
//! arrangement.
//!
//! ```bash
//! cargo run -p desir --example conditioning_gbr
//! ```

use desir::previsions::gbr_conditional;
use desir::structure::{assembled_member, conditional_member, ConditionalFamily};
use desir::{CatalogId, DesirSet, Event, Gamble, Partition, PossibilitySpace};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let space = PossibilitySpace::with_size(3)?;
    let f = Gamble::new(&space, vec![1.0, -1.0, 0.0])?;
    let event = Event::from_labels(&space, &["w1", "w2"])?;

    for id in [
        CatalogId::MedianStrictTernary,
        CatalogId::MedianWeakTernary,
        CatalogId::ConeTrioTernary,
    ] {
        let set = DesirSet::catalog(&space, id)?;
        let report = gbr_conditional(&set, &f, &event, 1e-9)?;
        println!(
            "{}: event prevision {}, strict {}, member {}, weak {}, sandwich {:?}",
            id.name(),
            report.event_prevision.estimate(),
            report.strict_sup.estimate(),
            report.member_sup.estimate(),
            report.weak_sup.estimate(),
            report.sandwich_ok
        );
    }

    // conditional membership and blockwise assembly
    let set = DesirSet::catalog(&space, CatalogId::MedianStrictTernary)?;
    let vanishing = Gamble::new(&space, vec![0.5, 1.0, 0.0])?;
    println!(
        "\n{vanishing} in the conditional set given {:?}: {:?}",
        event.labels(),
        conditional_member(&set, &vanishing, &event)?.value
    );
    let partition = Partition::from_labels(&space, &[vec!["w1", "w2"], vec!["w3"]])?;
    let family = ConditionalFamily::from_set(&set, &partition)?;
    let candidate = Gamble::new(&space, vec![0.5, 1.0, 0.25])?;
    println!(
        "{candidate} in the assembled conditional set: {:?}",
        assembled_member(&family, &candidate)?.value
    );
    Ok(())
}
