//! Render membership regions of binary-space sets as SVG files.
//!
//! ```bash
//! cargo run -p desir --example plot_regions
//! # writes corner_regions.svg, conic_hull.svg, dominance.svg
//! ```

use desir::plot::render_membership_svg;
use desir::{CatalogId, ClosureSpec, DesirSet, Gamble, PossibilitySpace};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let space = PossibilitySpace::with_size(2)?;

    let corner = DesirSet::catalog(&space, CatalogId::CornerRegionsBinary)?;
    let marks = vec![
        ("a".to_string(), Gamble::new(&space, vec![-2.0, 1.0])?),
        ("b".to_string(), Gamble::new(&space, vec![-1.0, 0.5])?),
    ];
    std::fs::write(
        "corner_regions.svg",
        render_membership_svg(&corner, 300, &marks)?,
    )?;

    let generator = Gamble::new(&space, vec![-1.0, 1.0])?;
    let conic = DesirSet::generated(&space, vec![generator.clone()], ClosureSpec::kappa1())?;
    std::fs::write("conic_hull.svg", render_membership_svg(&conic, 300, &[])?)?;

    let dominance = DesirSet::generated(&space, vec![generator], ClosureSpec::kappa4())?;
    std::fs::write("dominance.svg", render_membership_svg(&dominance, 300, &[])?)?;

    println!("wrote corner_regions.svg, conic_hull.svg, dominance.svg");
    Ok(())
}
