//! One generator list, four closure operators, four different extensions.
//!
//! The oracles answer with checkable witnesses: a conic coefficient
//! vector, a scaled or dominated generator, or integer multiplicities.
//!
//! ```bash
//! cargo run -p desir --example membership_oracles
//! ```

use desir::{ClosureSpec, DesirSet, Gamble, PossibilitySpace};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let space = PossibilitySpace::with_size(2)?;
    let gens = vec![
        Gamble::new(&space, vec![-1.0, 1.0])?,
        Gamble::new(&space, vec![1.0, -2.0])?,
    ];

    let specs = [
        ClosureSpec::kappa1(),
        ClosureSpec::kappa2(64),
        ClosureSpec::kappa3(),
        ClosureSpec::kappa4(),
    ];
    let probes = [
        vec![-2.4, 2.6],
        vec![-2.6, 2.4],
        vec![-1.0, -1.0],
        vec![-4.0, 4.0],
        vec![0.0, 2.0],
    ];

    for spec in specs {
        let name = spec.kind.name();
        let set = DesirSet::generated(&space, gens.clone(), spec)?;
        println!("extension under {name}:");
        for values in &probes {
            let f = Gamble::new(&space, values.clone())?;
            let verdict = set.member(&f)?;
            print!("  {f} -> {:?}", verdict.value);
            if let Some(w) = verdict.witness {
                print!("  witness {w:?}");
            }
            println!();
        }
        println!();
    }

    // the integer-sum oracle is honest about its bound: far rungs of the
    // ladder come back Unknown instead of a wrong No
    let single = vec![Gamble::new(&space, vec![-2.0, 2.0])?];
    let tight = DesirSet::generated(&space, single, ClosureSpec::kappa2(3))?;
    let far = Gamble::new(&space, vec![-10.0, 10.0])?;
    println!("bounded integer-sum oracle at {far}: {:?}", tight.member(&far)?.value);
    Ok(())
}
