//! Spaces, gambles, events and partitions: the substrate everything else
//! consumes.
//!
//! ```bash
//! cargo run -p desir --example gamble_basics
//! ```

use desir::{classify, cutoff, gneq, is_measurable, Event, Gamble, Partition, PossibilitySpace};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let space = PossibilitySpace::new(vec!["rain", "hail", "sun"])?;
    println!("possibility space: {:?}", space.outcomes());

    let f = Gamble::new(&space, vec![1.0, -1.0, 0.0])?;
    let g = Gamble::new(&space, vec![0.5, -1.0, 0.0])?;
    println!("f = {f}, g = {g}");
    println!("f strictly dominates g: {}", gneq(&f, &g)?);
    println!("g strictly dominates f: {}", gneq(&g, &f)?);

    for values in [vec![0.0, 2.0, 1.0], vec![0.0, 0.0, 0.0], vec![-1.0, -2.0, -0.5]] {
        let h = Gamble::new(&space, values)?;
        println!("classify {h}: {:?}", classify(&h));
    }

    // conditional gamble: called off outside the event
    let wet = Event::from_labels(&space, &["rain", "hail"])?;
    let called_off = cutoff(&f, &wet)?;
    println!("f restricted to wet outcomes: {called_off}");
    assert_eq!(cutoff(&called_off, &wet)?, called_off); // idempotent

    // the two halves recompose the original gamble
    let dry_part = cutoff(&f, &wet.complement())?;
    assert_eq!(called_off.add(&dry_part)?, f);

    let weather = Partition::from_labels(&space, &[vec!["rain", "hail"], vec!["sun"]])?;
    let coarse = Gamble::new(&space, vec![2.0, 2.0, 5.0])?;
    println!(
        "{coarse} measurable for the wet/dry partition: {}",
        is_measurable(&coarse, &weather)?
    );
    let fine = Gamble::new(&space, vec![2.0, 3.0, 5.0])?;
    println!(
        "{fine} measurable for the wet/dry partition: {}",
        is_measurable(&fine, &weather)?
    );
    Ok(())
}
