//! 2D membership rendering for binary spaces: rasterize the set over a
//! square grid and emit plain SVG 1.1. In cells are shaded, unknown cells
//! get their own tint, generators are marked as dots.

use thiserror::Error;

use crate::gamble::Gamble;
use crate::operators::{DesirSet, MembershipValue, OperatorError};

#[derive(Debug, Error)]
pub enum PlotError {
    #[error("plotting needs a binary possibility space, got size {0}")]
    WrongDimension(usize),
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

const RANGE: f64 = 3.0;
const CANVAS: f64 = 640.0;
const MARGIN: f64 = 40.0;

/// Render the membership region over `[-3, 3]^2` at the given resolution.
/// `marks` are labeled points drawn on top of the region.
pub fn render_membership_svg(
    set: &DesirSet,
    resolution: usize,
    marks: &[(String, Gamble)],
) -> Result<String, PlotError> {
    let n = set.space().size();
    if n != 2 {
        return Err(PlotError::WrongDimension(n));
    }
    let resolution = resolution.clamp(10, 2000);
    let cell = (CANVAS - 2.0 * MARGIN) / resolution as f64;
    let to_canvas = |x: f64, y: f64| -> (f64, f64) {
        (
            MARGIN + (x + RANGE) / (2.0 * RANGE) * (CANVAS - 2.0 * MARGIN),
            CANVAS - MARGIN - (y + RANGE) / (2.0 * RANGE) * (CANVAS - 2.0 * MARGIN),
        )
    };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{CANVAS}\" height=\"{CANVAS}\" viewBox=\"0 0 {CANVAS} {CANVAS}\">\n"
    ));
    svg.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{CANVAS}\" height=\"{CANVAS}\" fill=\"white\"/>\n"
    ));

    // membership raster, run-length encoded per row
    for row in 0..resolution {
        let y = RANGE - (row as f64 + 0.5) / resolution as f64 * 2.0 * RANGE;
        let mut col = 0usize;
        while col < resolution {
            let x = -RANGE + (col as f64 + 0.5) / resolution as f64 * 2.0 * RANGE;
            let value = set
                .member(&Gamble::new(set.space(), vec![x, y]).expect("finite grid point"))?
                .value;
            let color = match value {
                MembershipValue::In => Some("#9ecae1"),
                MembershipValue::Unknown => Some("#fdd0a2"),
                MembershipValue::Out => None,
            };
            // extend the run while the verdict repeats
            let mut run = 1usize;
            while col + run < resolution {
                let x2 = -RANGE + ((col + run) as f64 + 0.5) / resolution as f64 * 2.0 * RANGE;
                let v2 = set
                    .member(&Gamble::new(set.space(), vec![x2, y]).expect("finite grid point"))?
                    .value;
                if v2 != value {
                    break;
                }
                run += 1;
            }
            if let Some(color) = color {
                let (cx, cy) = (
                    MARGIN + col as f64 * cell,
                    MARGIN + row as f64 * cell,
                );
                svg.push_str(&format!(
                    "<rect x=\"{cx:.2}\" y=\"{cy:.2}\" width=\"{:.2}\" height=\"{cell:.2}\" fill=\"{color}\"/>\n",
                    cell * run as f64
                ));
            }
            col += run;
        }
    }

    // axes through the origin, labeled by outcomes
    let (ox, oy) = to_canvas(0.0, 0.0);
    svg.push_str(&format!(
        "<line x1=\"{MARGIN}\" y1=\"{oy}\" x2=\"{:.1}\" y2=\"{oy}\" stroke=\"black\" stroke-width=\"1\"/>\n",
        CANVAS - MARGIN
    ));
    svg.push_str(&format!(
        "<line x1=\"{ox}\" y1=\"{MARGIN}\" x2=\"{ox}\" y2=\"{:.1}\" stroke=\"black\" stroke-width=\"1\"/>\n",
        CANVAS - MARGIN
    ));
    let outcomes = set.space().outcomes();
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"14\">{}</text>\n",
        CANVAS - MARGIN + 4.0,
        oy + 4.0,
        outcomes[0]
    ));
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"14\">{}</text>\n",
        ox + 6.0,
        MARGIN - 8.0,
        outcomes[1]
    ));
    for tick in [-2.0f64, -1.0, 1.0, 2.0] {
        let (tx, _) = to_canvas(tick, 0.0);
        svg.push_str(&format!(
            "<line x1=\"{tx:.1}\" y1=\"{:.1}\" x2=\"{tx:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
            oy - 3.0,
            oy + 3.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"10\">{tick}</text>\n",
            tx - 6.0,
            oy + 16.0
        ));
        let (_, ty) = to_canvas(0.0, tick);
        svg.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{ty:.1}\" x2=\"{:.1}\" y2=\"{ty:.1}\" stroke=\"black\"/>\n",
            ox - 3.0,
            ox + 3.0
        ));
    }

    // generators and marks
    if let Some(gens) = set.generators() {
        for g in gens {
            let (cx, cy) = to_canvas(g.values()[0], g.values()[1]);
            svg.push_str(&format!(
                "<circle cx=\"{cx:.1}\" cy=\"{cy:.1}\" r=\"4\" fill=\"#d62728\"/>\n"
            ));
        }
    }
    for (label, g) in marks {
        let (cx, cy) = to_canvas(g.values()[0], g.values()[1]);
        svg.push_str(&format!(
            "<circle cx=\"{cx:.1}\" cy=\"{cy:.1}\" r=\"4\" fill=\"#2ca02c\"/>\n"
        ));
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\">{label}</text>\n",
            cx + 6.0,
            cy - 6.0
        ));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamble::PossibilitySpace;
    use crate::operators::{CatalogId, ClosureSpec};

    #[test]
    fn renders_corner_regions() {
        let s = PossibilitySpace::with_size(2).unwrap();
        let set = DesirSet::catalog(&s, CatalogId::CornerRegionsBinary).unwrap();
        let svg = render_membership_svg(&set, 60, &[]).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("#9ecae1"));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn rejects_ternary_spaces() {
        let s = PossibilitySpace::with_size(3).unwrap();
        let g = Gamble::new(&s, vec![-1.0, 1.0, 0.0]).unwrap();
        let set = DesirSet::generated(&s, vec![g], ClosureSpec::kappa4()).unwrap();
        assert!(matches!(
            render_membership_svg(&set, 50, &[]),
            Err(PlotError::WrongDimension(3))
        ));
    }

    #[test]
    fn conic_region_is_shaded() {
        let s = PossibilitySpace::with_size(2).unwrap();
        let g = Gamble::new(&s, vec![-1.0, 1.0]).unwrap();
        let set = DesirSet::generated(&s, vec![g], ClosureSpec::kappa1()).unwrap();
        let svg = render_membership_svg(&set, 40, &[]).unwrap();
        assert!(svg.matches("<rect").count() > 10);
    }
}
