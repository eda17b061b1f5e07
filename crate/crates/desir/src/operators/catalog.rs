//! Catalog of closed-form example sets.
//!
//! These sets are coherent under some operator kind but not finitely
//! generated under it, so they carry hand-written membership predicates.
//! Each entry is pinned to a space size.

use serde::{Deserialize, Serialize};

use crate::gamble::{is_positive, Gamble};

use super::{Membership, Witness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CatalogId {
    /// Binary: positives plus every gamble dominating `(-n, n)` for some
    /// integer `n >= 1`. Closed under integer sums but not under scaling.
    LadderBinary,
    /// Binary: gambles dominating `(lambda, -lambda)` for some nonzero
    /// real `lambda`, i.e. a positive maximum and a nonnegative total.
    /// Closed under scaling but not under sums.
    SignedRayBinary,
    /// Ternary: positives plus the gambles with strictly positive median.
    MedianStrictTernary,
    /// Ternary: gambles with nonnegative median, minus the nonpositive
    /// ones.
    MedianWeakTernary,
    /// Binary: the union of three dominance-closed corner regions; induces
    /// a precise but nonlinear prevision.
    CornerRegionsBinary,
    /// Ternary: dominance cones of two fixed gambles plus an open wedge
    /// family; separates the three conditional-supremum brackets.
    ConeTrioTernary,
}

impl CatalogId {
    pub const ALL: [CatalogId; 6] = [
        CatalogId::LadderBinary,
        CatalogId::SignedRayBinary,
        CatalogId::MedianStrictTernary,
        CatalogId::MedianWeakTernary,
        CatalogId::CornerRegionsBinary,
        CatalogId::ConeTrioTernary,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CatalogId::LadderBinary => "ladder-binary",
            CatalogId::SignedRayBinary => "signed-ray-binary",
            CatalogId::MedianStrictTernary => "median-strict-ternary",
            CatalogId::MedianWeakTernary => "median-weak-ternary",
            CatalogId::CornerRegionsBinary => "corner-regions-binary",
            CatalogId::ConeTrioTernary => "cone-trio-ternary",
        }
    }

    pub fn parse(name: &str) -> Option<CatalogId> {
        Self::ALL.iter().copied().find(|id| id.name() == name)
    }

    pub fn space_size(&self) -> usize {
        match self {
            CatalogId::LadderBinary
            | CatalogId::SignedRayBinary
            | CatalogId::CornerRegionsBinary => 2,
            CatalogId::MedianStrictTernary
            | CatalogId::MedianWeakTernary
            | CatalogId::ConeTrioTernary => 3,
        }
    }

    pub fn member(&self, f: &Gamble) -> Membership {
        let v = f.values();
        let inside = |name: &'static str| {
            Membership::inside(Witness::Region { name: name.to_string() })
        };
        match self {
            CatalogId::LadderBinary => {
                if is_positive(f) {
                    return Membership::inside(Witness::Positive);
                }
                // f >= (-n, n) for some integer n >= 1; best candidate is
                // the largest n allowed by the second coordinate
                let n = v[1].floor();
                if n >= 1.0 && v[0] >= -n {
                    inside("ladder")
                } else {
                    Membership::outside("below every rung of the ladder")
                }
            }
            CatalogId::SignedRayBinary => {
                if v.iter().cloned().fold(f64::NEG_INFINITY, f64::max) > 0.0
                    && v[0] + v[1] >= 0.0
                {
                    inside("signed-ray")
                } else {
                    Membership::outside("needs a positive maximum and nonnegative total")
                }
            }
            CatalogId::MedianStrictTernary => {
                if is_positive(f) {
                    return Membership::inside(Witness::Positive);
                }
                if median3(v) > 0.0 {
                    inside("median-positive")
                } else {
                    Membership::outside("median is not strictly positive")
                }
            }
            CatalogId::MedianWeakTernary => {
                let nonpositive = v.iter().all(|&x| x <= 0.0);
                if median3(v) >= 0.0 && !nonpositive {
                    inside("median-nonnegative")
                } else {
                    Membership::outside("median negative or gamble nonpositive")
                }
            }
            CatalogId::CornerRegionsBinary => {
                if is_positive(f) {
                    return Membership::inside(Witness::Positive);
                }
                if v[0] < 0.0 && v[1] > 1.0 {
                    inside("upper-left")
                } else if v[0] > 0.0 && v[1] > -1.0 {
                    inside("right")
                } else {
                    Membership::outside("outside all three corner regions")
                }
            }
            CatalogId::ConeTrioTernary => {
                if is_positive(f) {
                    return Membership::inside(Witness::Positive);
                }
                if v[0] >= 0.5 && v[1] >= -1.5 && v[2] >= 0.0 {
                    inside("cone-a")
                } else if v[0] >= 0.9 && v[1] >= -0.1 && v[2] >= -0.1 {
                    inside("cone-b")
                } else if v[0] > 0.25 && v[1] >= -0.75 && v[2] > 0.0 {
                    inside("wedge")
                } else {
                    Membership::outside("outside both cones and the wedge")
                }
            }
        }
    }

    /// Operator kinds under which the set is deductively closed; probes use
    /// the strongest one for fixed-point spot checks.
    pub fn closed_under(&self) -> &'static [super::OperatorKind] {
        use super::OperatorKind::*;
        match self {
            CatalogId::LadderBinary => &[Kappa2 { max_multiplicity: 64 }, Kappa4],
            CatalogId::SignedRayBinary => &[Kappa3, Kappa4],
            _ => &[Kappa4],
        }
    }

    /// A few concrete members, used as seeds by sampling probes.
    pub fn seed_members(&self) -> Vec<Vec<f64>> {
        match self {
            CatalogId::LadderBinary => vec![vec![-1.0, 1.0], vec![-2.0, 2.0], vec![0.5, 1.0]],
            CatalogId::SignedRayBinary => {
                vec![vec![1.0, -1.0], vec![-1.0, 1.0], vec![2.0, -1.0]]
            }
            CatalogId::MedianStrictTernary => {
                vec![vec![-1.0, 1.0, 1.0], vec![1.0, 1.0, -5.0], vec![0.5, 0.5, 0.5]]
            }
            CatalogId::MedianWeakTernary => {
                vec![vec![-1.0, 0.0, 1.0], vec![0.0, 2.0, -3.0], vec![1.0, 0.0, 0.0]]
            }
            CatalogId::CornerRegionsBinary => {
                vec![vec![-1.0, 2.0], vec![1.0, -0.5], vec![0.5, 0.5]]
            }
            CatalogId::ConeTrioTernary => {
                vec![vec![0.5, -1.5, 0.0], vec![0.9, -0.1, -0.1], vec![0.3, -0.75, 0.1]]
            }
        }
    }
}

fn median3(v: &[f64]) -> f64 {
    let mut s = [v[0], v[1], v[2]];
    s.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    s[1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamble::PossibilitySpace;

    fn member(id: CatalogId, v: &[f64]) -> bool {
        let s = PossibilitySpace::with_size(v.len()).unwrap();
        id.member(&Gamble::new(&s, v.to_vec()).unwrap()).is_in()
    }

    #[test]
    fn ladder() {
        assert!(member(CatalogId::LadderBinary, &[-1.0, 1.0]));
        assert!(member(CatalogId::LadderBinary, &[-4.0, 4.0]));
        assert!(member(CatalogId::LadderBinary, &[-3.5, 4.0]));
        assert!(!member(CatalogId::LadderBinary, &[-0.5, 0.5]));
        assert!(!member(CatalogId::LadderBinary, &[1.0, -1.0]));
        assert!(!member(CatalogId::LadderBinary, &[0.0, 0.0]));
    }

    #[test]
    fn signed_ray() {
        assert!(member(CatalogId::SignedRayBinary, &[1.0, -1.0]));
        assert!(member(CatalogId::SignedRayBinary, &[-1.0, 1.0]));
        assert!(member(CatalogId::SignedRayBinary, &[0.0, 0.5]));
        assert!(!member(CatalogId::SignedRayBinary, &[2.0, -3.0]));
        assert!(!member(CatalogId::SignedRayBinary, &[0.0, 0.0]));
    }

    #[test]
    fn medians() {
        assert!(member(CatalogId::MedianStrictTernary, &[-1.0, 1.0, 2.0]));
        assert!(!member(CatalogId::MedianStrictTernary, &[1.0, -1.0, 0.0]));
        assert!(member(CatalogId::MedianWeakTernary, &[1.0, -1.0, 0.0]));
        assert!(!member(CatalogId::MedianWeakTernary, &[0.0, -2.0, 0.0]));
        assert!(!member(CatalogId::MedianWeakTernary, &[0.0, 0.0, 0.0]));
    }

    #[test]
    fn corner_regions() {
        assert!(member(CatalogId::CornerRegionsBinary, &[-2.0, 1.5]));
        assert!(member(CatalogId::CornerRegionsBinary, &[0.5, -0.5]));
        assert!(!member(CatalogId::CornerRegionsBinary, &[-2.0, 1.0]));
        assert!(!member(CatalogId::CornerRegionsBinary, &[0.5, -1.5]));
    }

    #[test]
    fn cone_trio() {
        assert!(member(CatalogId::ConeTrioTernary, &[1.0, -1.0, 0.0]));
        assert!(member(CatalogId::ConeTrioTernary, &[0.3, -0.5, 0.1]));
        assert!(!member(CatalogId::ConeTrioTernary, &[0.3, -0.5, 0.0]));
        assert!(!member(CatalogId::ConeTrioTernary, &[-1.0, -1.0, -1.0]));
    }
}
