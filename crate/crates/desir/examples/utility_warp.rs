//! Nonlinear utility as a coordinate change: warp every gamble through an
//! invertible function, close linearly, and pull back.
//!
//! With the identity warp this is exactly the conic hull; with an odd
//! power it accepts gambles the linear scale rejects and vice versa.
//!
//! ```bash
//! cargo run -p desir --example utility_warp
//! ```

use desir::{ClosureSpec, DesirSet, Gamble, OperatorKind, PossibilitySpace, UtilityFn};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let space = PossibilitySpace::with_size(2)?;
    let generator = Gamble::new(&space, vec![-1.0, 1.0])?;

    let warp = |u: UtilityFn| -> Result<DesirSet, desir::operators::OperatorError> {
        DesirSet::generated(
            &space,
            vec![generator.clone()],
            ClosureSpec::new(OperatorKind::UtilityWarp { utility: u }),
        )
    };

    let linear = warp(UtilityFn::Linear { slope: 1.0 })?;
    let squared = warp(UtilityFn::OddPower { exponent: 2.0 })?;
    let cautious = warp(UtilityFn::Cara { risk: 1.0 })?;
    let plain = DesirSet::generated(&space, vec![generator.clone()], ClosureSpec::kappa1())?;

    let probes = [
        vec![-0.5, 0.87],
        vec![-0.5, 0.4],
        vec![-0.5, 0.5],
        vec![-2.0, 2.5],
    ];
    println!("gamble        linear  squared  cautious  plain-conic");
    for values in probes {
        let f = Gamble::new(&space, values)?;
        println!(
            "{f}:  {:?}  {:?}  {:?}  {:?}",
            linear.member(&f)?.value,
            squared.member(&f)?.value,
            cautious.member(&f)?.value,
            plain.member(&f)?.value,
        );
    }

    // the identity warp agrees with the conic hull everywhere
    let mut rng = desir::sampling::rng(99);
    for _ in 0..200 {
        let f = desir::sampling::gamble_grid(&space, &mut rng);
        assert_eq!(linear.member(&f)?.value, plain.member(&f)?.value);
    }
    println!("\nidentity warp matched the conic hull on 200 random gambles");
    Ok(())
}
