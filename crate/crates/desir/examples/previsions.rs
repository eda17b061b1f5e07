//! Lower and upper previsions from a set of desirable gambles.
//!
//! Under single-scaling closure the prevision is not superadditive: the
//! two probe gambles price at 1/2 and 4/3 separately but their sum prices
//! at 1. Under plain dominance, positive homogeneity fails too: doubling
//! a generator halves nothing, it costs a full unit.
//!
//! ```bash
//! cargo run -p desir --example previsions
//! ```

use desir::previsions::{
    check_constant_additivity, check_p_axioms, lower_prevision, lpr_leq_upr_check,
    upper_prevision, LowerUpperOutcome,
};
use desir::{ClosureSpec, DesirSet, Gamble, PossibilitySpace};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let space = PossibilitySpace::with_size(2)?;
    let gens = vec![
        Gamble::new(&space, vec![-1.0, 1.0])?,
        Gamble::new(&space, vec![1.0, -2.0])?,
    ];
    let scaled = DesirSet::generated(&space, gens, ClosureSpec::kappa3())?;

    let tol = 1e-9;
    for values in [vec![-2.0, 3.0], vec![3.0, -2.0], vec![1.0, 1.0]] {
        let f = Gamble::new(&space, values)?;
        let lower = lower_prevision(&scaled, &f, tol)?;
        let upper = upper_prevision(&scaled, &f, tol)?;
        println!(
            "f = {f}: buying up to {} (attained: {:?}), selling from {}",
            lower.estimate(),
            lower.boundary_in,
            upper.estimate()
        );
    }

    // buying above the selling price: the scaled closure admits two
    // members summing to a negative constant, and the checker finds them
    match lpr_leq_upr_check(&scaled, 50, 7, tol)? {
        LowerUpperOutcome::Violation { gamble, lower, upper, pair } => {
            println!("\nviolation at {gamble:?}: buy {lower} > sell {upper}");
            if let Some(pair) = pair {
                println!(
                    "  members {:?} and {:?} sum to the constant -{}",
                    pair.g1, pair.g2, pair.eps
                );
            }
        }
        LowerUpperOutcome::Holds { samples } => println!("no violation in {samples} samples"),
    }

    // prices shift with constants even though they do not scale
    let f = Gamble::new(&space, vec![-2.0, 3.0])?;
    for row in check_constant_additivity(&scaled, &f, &[1.0, -2.0, 0.0], tol)? {
        println!(
            "shift {:+}: prevision {} (expected {}) ok={}",
            row.shift, row.shifted_prevision, row.expected, row.ok
        );
    }

    // axiom observations: the bound axiom always holds, superadditivity
    // and homogeneity only under the operators that promise them
    let dominance = DesirSet::generated(
        &space,
        vec![Gamble::new(&space, vec![-1.0, 1.0])?],
        ClosureSpec::kappa4(),
    )?;
    let report = check_p_axioms(&dominance, 40, 3, tol)?;
    println!(
        "\ndominance closure: bounds {} violations, homogeneity {} violations (expected to hold: {})",
        report.bounds.violations.len(),
        report.homogeneity.violations.len(),
        report.homogeneity.expected_to_hold
    );
    let two_f = Gamble::new(&space, vec![-2.0, 2.0])?;
    let f = Gamble::new(&space, vec![-1.0, 1.0])?;
    println!(
        "lower(f) = {}, lower(2f) = {}: homogeneity visibly fails",
        lower_prevision(&dominance, &f, tol)?.estimate(),
        lower_prevision(&dominance, &two_f, tol)?.estimate()
    );
    Ok(())
}
