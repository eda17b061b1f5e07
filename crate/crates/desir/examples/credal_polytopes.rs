//! Credal sets: the probability vectors compatible with every assessment.
//!
//! A generated set's polytope is cut by one halfspace per generator.
//! Emptiness comes with a verified separation certificate: convex weights
//! over the generators whose mixture has strictly negative supremum, i.e.
//! an explicit sure loss.
//!
//! ```bash
//! cargo run -p desir --example credal_polytopes
//! ```

use desir::credal::{credal_intersection, credal_family_consistency, is_empty, vertices};
use desir::{ClosureSpec, DesirSet, Gamble, OperatorKind, PossibilitySpace};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let space = PossibilitySpace::with_size(2)?;

    // one generator: a halfline of the simplex survives
    let set = DesirSet::generated(
        &space,
        vec![Gamble::new(&space, vec![-1.0, 2.0])?],
        ClosureSpec::kappa1(),
    )?;
    let poly = credal_intersection(&set)?;
    println!("constraints: {:?}", poly.constraints);
    let report = is_empty(&poly)?;
    println!("empty: {}, witness point: {:?}", report.empty, report.point);
    for v in vertices(&poly)? {
        println!("vertex: {:?}", v.weights);
    }

    // two incompatible generators: empty, with an explicit certificate
    let clash = DesirSet::generated(
        &space,
        vec![
            Gamble::new(&space, vec![-1.0, 1.0])?,
            Gamble::new(&space, vec![1.0, -2.0])?,
        ],
        ClosureSpec::kappa3(),
    )?;
    let poly = credal_intersection(&clash)?;
    let report = is_empty(&poly)?;
    println!(
        "\nclashing pair: empty = {}, certificate weights {:?}, mixture {:?}",
        report.empty, report.certificate, report.mixture
    );

    // per-gamble credal family handed back to the loss checks
    let p = [0.25, 0.75];
    let probes = [
        Gamble::new(&space, vec![1.0, 0.0])?,
        Gamble::new(&space, vec![2.0, -1.0])?,
    ];
    let family: Vec<(Gamble, Vec<Gamble>)> = probes
        .iter()
        .map(|f| {
            let fair = f.values()[0] * p[0] + f.values()[1] * p[1];
            (f.clone(), vec![f.shift(-fair)])
        })
        .collect();
    let consistency = credal_family_consistency(&family, &OperatorKind::Kappa1)?;
    println!(
        "\nfamily of fair-price credal sets: lower envelopes {:?}, avoids sure loss {:?}, coherent {:?}",
        consistency.lower_envelopes, consistency.avoids_sure_loss, consistency.coherent
    );
    Ok(())
}
