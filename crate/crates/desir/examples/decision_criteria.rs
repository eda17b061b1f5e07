//! The five optimality criteria, ending with the paired-choice experiments
//! that motivated the whole nonlinear apparatus.
//!
//! An ordered weighted average over worst/middle/best outcomes prices a
//! sure million above the richer lottery, yet prefers the richer lottery
//! once the safety net is gone, and no additive utility scale can hold
//! both preferences at once.
//!
//! ```bash
//! cargo run -p desir --example decision_criteria
//! ```

use desir::decide::{
    e_admissible_kappa1, gamma_maximax, gamma_maximin, interval_dominance, maximality_kappa1,
    paired_choice_demo,
};
use desir::{ClosureSpec, DesirSet, Gamble, PossibilitySpace};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let space = PossibilitySpace::with_size(2)?;
    let gens = vec![Gamble::new(&space, vec![-1.0, 1.0])?];
    let set = DesirSet::generated(&space, gens.clone(), ClosureSpec::kappa4())?;

    let options = vec![
        ("steady".to_string(), Gamble::new(&space, vec![0.2, 0.2])?),
        ("risky".to_string(), Gamble::new(&space, vec![0.0, 1.0])?),
    ];
    let tol = 1e-9;
    for report in [
        gamma_maximin(&set, &options, tol)?,
        gamma_maximax(&set, &options, tol)?,
        interval_dominance(&set, &options, tol)?,
    ] {
        println!("{}: optimal {:?}", report.criterion, report.optimal);
    }

    // the two credal criteria need the conic hull
    let cone_gens = vec![
        Gamble::new(&space, vec![0.5, -0.5])?,
        Gamble::new(&space, vec![-0.5, 0.5])?,
    ];
    let options = vec![
        ("sure".to_string(), Gamble::new(&space, vec![1.0, 0.0])?),
        ("half".to_string(), Gamble::new(&space, vec![0.0, 0.5])?),
    ];
    let report = maximality_kappa1(&space, &cone_gens, &options, tol)?;
    println!("{}: optimal {:?}", report.criterion, report.optimal);
    let report = e_admissible_kappa1(&space, &cone_gens, &options, tol)?;
    println!("{}: optimal {:?}", report.criterion, report.optimal);

    // the paired-choice experiments
    let demo = paired_choice_demo()?;
    println!("\npaired-choice previsions: {:?}", demo.previsions);
    println!(
        "experiment 1 keeps {:?}; experiment 2 keeps {:?}",
        demo.experiment_one.optimal, demo.experiment_two.optimal
    );
    println!(
        "additive closures accepting those prices must accept the constant {} ({:?})",
        demo.additive_impossibility.constant_value, demo.additive_impossibility.classification
    );
    Ok(())
}
