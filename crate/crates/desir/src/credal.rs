//! Credal polytopes: the linear previsions compatible with a set of
//! desirable gambles.
//!
//! A linear prevision dominates every assessed price iff it is nonnegative
//! on every member of the set; since linear previsions respect sums,
//! positive scalings and dominance, nonnegativity on the generators
//! already pins the polytope for the four built-in kinds. Emptiness is
//! decided by LP with a separation certificate: a convex mixture of
//! constraints whose supremum is strictly negative.

use serde::Serialize;

use crate::gamble::{Gamble, GambleError, PossibilitySpace};
use crate::lp::{LpOutcome, LpProblem, Relation};
use crate::operators::{DesirSet, OperatorError, OperatorKind};
use crate::previsions::{lower_prevision, PrevisionError};

/// Expectation operator of a single probability vector.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinearPrevision {
    pub weights: Vec<f64>,
}

impl LinearPrevision {
    pub fn new(weights: Vec<f64>) -> Result<Self, OperatorError> {
        let sum: f64 = weights.iter().sum();
        if weights.iter().any(|&w| !(w >= -1e-12) || !w.is_finite()) || (sum - 1.0).abs() > 1e-12 {
            return Err(OperatorError::InvalidSpec(
                "probability vector must be nonnegative and sum to one".into(),
            ));
        }
        Ok(LinearPrevision { weights })
    }

    pub fn evaluate(&self, f: &Gamble) -> f64 {
        f.dot(&self.weights)
    }
}

/// Probability vectors on the simplex satisfying `p . g >= 0` for every
/// constraint gamble.
#[derive(Clone, Debug, Serialize)]
pub struct CredalPolytope {
    #[serde(skip)]
    space: PossibilitySpace,
    pub constraints: Vec<Vec<f64>>,
}

impl CredalPolytope {
    pub fn new(space: &PossibilitySpace, constraints: Vec<Gamble>) -> Result<Self, OperatorError> {
        for c in &constraints {
            if !c.space().same_as(space) {
                return Err(GambleError::SpaceMismatch.into());
            }
        }
        Ok(CredalPolytope {
            space: space.clone(),
            constraints: constraints.iter().map(|c| c.values().to_vec()).collect(),
        })
    }

    pub fn space(&self) -> &PossibilitySpace {
        &self.space
    }

    pub fn dimension(&self) -> usize {
        self.space.size()
    }

    /// `min p . f` over the polytope, the lower envelope at `f`; `None`
    /// when the polytope is empty.
    pub fn lower_envelope(&self, f: &Gamble) -> Result<Option<f64>, OperatorError> {
        let n = self.dimension();
        let mut lp = LpProblem::new(f.values().iter().map(|v| -v).collect()).nonnegative();
        lp = lp.constrain(vec![1.0; n], Relation::Eq, 1.0);
        for c in &self.constraints {
            lp = lp.constrain(c.clone(), Relation::Ge, 0.0);
        }
        match crate::lp::solve(&lp)? {
            LpOutcome::Optimal(sol) => Ok(Some(-sol.objective)),
            LpOutcome::Infeasible { .. } => Ok(None),
            LpOutcome::Unbounded => Err(crate::lp::LpError::Numerical(
                "bounded feasible region cannot be unbounded".into(),
            )
            .into()),
        }
    }
}

/// The intersection polytope of the per-gamble credal sets of a generated
/// set: one constraint per generator. Valid for the four built-in kinds,
/// whose derivation rules (sums, positive scalings, dominance) preserve
/// nonnegativity under linear previsions.
pub fn credal_intersection(set: &DesirSet) -> Result<CredalPolytope, OperatorError> {
    let spec = set
        .spec()
        .ok_or_else(|| OperatorError::Unsupported("catalog sets need a probe family".into()))?;
    match spec.kind {
        OperatorKind::Kappa1
        | OperatorKind::Kappa2 { .. }
        | OperatorKind::Kappa3
        | OperatorKind::Kappa4 => {}
        _ => {
            return Err(OperatorError::Unsupported(
                "use credal_from_probe for non-cone operator kinds".into(),
            ))
        }
    }
    let gens = set
        .generators()
        .ok_or_else(|| OperatorError::Unsupported("generated form required".into()))?;
    CredalPolytope::new(set.space(), gens.to_vec())
}

/// Credal polytope over a finite probe family for sets without the
/// generator reduction: one constraint `f - lower(f)` per probe gamble.
pub fn credal_from_probe(
    set: &DesirSet,
    probe: &[Gamble],
    tol: f64,
) -> Result<CredalPolytope, PrevisionError> {
    let mut constraints = Vec::with_capacity(probe.len());
    for f in probe {
        let p = lower_prevision(set, f, tol)?.estimate();
        constraints.push(f.shift(-p));
    }
    Ok(CredalPolytope::new(set.space(), constraints)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct EmptinessReport {
    pub empty: bool,
    /// A feasible probability vector when nonempty.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<f64>>,
    /// When empty: convex weights over the constraints whose mixture has
    /// strictly negative supremum.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Vec<f64>>,
    /// The mixture the certificate produces.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mixture: Option<Vec<f64>>,
}

/// LP feasibility on the simplex with a verified separation certificate in
/// the empty case.
pub fn is_empty(polytope: &CredalPolytope) -> Result<EmptinessReport, OperatorError> {
    let n = polytope.dimension();
    let m = polytope.constraints.len();
    if m == 0 {
        return Ok(EmptinessReport {
            empty: false,
            point: Some(vec![1.0 / n as f64; n]),
            certificate: None,
            mixture: None,
        });
    }
    // max delta  s.t.  p . g_j >= delta, p in simplex
    let mut objective = vec![0.0; n + 1];
    objective[n] = 1.0;
    let mut lp = LpProblem::new(objective);
    for v in 0..n {
        lp = lp.bound(v, 0.0, f64::INFINITY);
    }
    let mut row = vec![1.0; n];
    row.push(0.0);
    lp = lp.constrain(row, Relation::Eq, 1.0);
    for c in &polytope.constraints {
        let mut row = c.clone();
        row.push(-1.0);
        lp = lp.constrain(row, Relation::Ge, 0.0);
    }
    let delta_sol = match crate::lp::solve(&lp)? {
        LpOutcome::Optimal(sol) => sol,
        _ => {
            return Err(crate::lp::LpError::Numerical(
                "simplex feasibility lp must be solvable".into(),
            )
            .into())
        }
    };
    if delta_sol.objective >= -1e-9 {
        return Ok(EmptinessReport {
            empty: false,
            point: Some(delta_sol.primal[..n].to_vec()),
            certificate: None,
            mixture: None,
        });
    }

    // empty: find convex weights y with sup_w sum_j y_j g_j(w) < 0 via
    // max -s  s.t.  sum_j y_j g_j(w) <= s for all w, sum y = 1, y >= 0
    let mut objective = vec![0.0; m + 1];
    objective[m] = -1.0;
    let mut lp = LpProblem::new(objective);
    for j in 0..m {
        lp = lp.bound(j, 0.0, f64::INFINITY);
    }
    let mut row = vec![1.0; m];
    row.push(0.0);
    lp = lp.constrain(row, Relation::Eq, 1.0);
    for w in 0..n {
        let mut row: Vec<f64> = polytope.constraints.iter().map(|c| c[w]).collect();
        row.push(-1.0);
        lp = lp.constrain(row, Relation::Le, 0.0);
    }
    match crate::lp::solve(&lp)? {
        LpOutcome::Optimal(sol) => {
            let y = sol.primal[..m].to_vec();
            let mut mixture = vec![0.0; n];
            for (j, c) in polytope.constraints.iter().enumerate() {
                for (mix, v) in mixture.iter_mut().zip(c) {
                    *mix += y[j] * v;
                }
            }
            let sup = mixture.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            if sup >= -1e-9 {
                return Err(crate::lp::LpError::Numerical(
                    "separation certificate failed verification".into(),
                )
                .into());
            }
            Ok(EmptinessReport {
                empty: true,
                point: None,
                certificate: Some(y),
                mixture: Some(mixture),
            })
        }
        _ => Err(crate::lp::LpError::Numerical("certificate lp must be solvable".into()).into()),
    }
}

const VERTEX_DIM_CAP: usize = 5;
const VERTEX_TOL: f64 = 1e-9;

/// Vertex enumeration by the double description method: start from the
/// simplex vertices and cut one halfspace at a time, intersecting each
/// adjacent in/out pair. Adjacency is the rank test on shared active
/// constraints. Output is deduplicated at `1e-9` and sorted.
pub fn vertices(polytope: &CredalPolytope) -> Result<Vec<LinearPrevision>, OperatorError> {
    let n = polytope.dimension();
    if n > VERTEX_DIM_CAP {
        return Err(OperatorError::Unsupported(format!(
            "vertex enumeration capped at dimension {VERTEX_DIM_CAP}"
        )));
    }

    #[derive(Clone)]
    struct V {
        p: Vec<f64>,
        /// active constraint ids: 0..n are the nonnegativity facets,
        /// n + j is the j-th halfspace
        active: Vec<usize>,
    }

    let mut verts: Vec<V> = (0..n)
        .map(|i| V {
            p: (0..n).map(|k| if k == i { 1.0 } else { 0.0 }).collect(),
            active: (0..n).filter(|&k| k != i).collect(),
        })
        .collect();

    let normal = |id: usize| -> Vec<f64> {
        if id < n {
            (0..n).map(|k| if k == id { 1.0 } else { 0.0 }).collect()
        } else {
            polytope.constraints[id - n].clone()
        }
    };

    for (j, c) in polytope.constraints.iter().enumerate() {
        let id = n + j;
        let value = |v: &V| -> f64 { v.p.iter().zip(c).map(|(p, g)| p * g).sum() };
        let mut kept: Vec<V> = Vec::new();
        let mut dropped: Vec<V> = Vec::new();
        for mut v in verts.drain(..) {
            let val = value(&v);
            if val > VERTEX_TOL {
                kept.push(v);
            } else if val >= -VERTEX_TOL {
                v.active.push(id);
                kept.push(v);
            } else {
                dropped.push(v);
            }
        }
        let mut fresh: Vec<V> = Vec::new();
        for inside in kept.iter().filter(|v| !v.active.contains(&id)) {
            for outside in &dropped {
                if !adjacent(&inside.active, &outside.active, n, &normal) {
                    continue;
                }
                let vi = value(inside);
                let vo = value(outside);
                let t = vi / (vi - vo);
                let p: Vec<f64> = inside
                    .p
                    .iter()
                    .zip(&outside.p)
                    .map(|(a, b)| a + t * (b - a))
                    .collect();
                let mut active: Vec<usize> = inside
                    .active
                    .iter()
                    .filter(|a| outside.active.contains(a))
                    .copied()
                    .collect();
                active.push(id);
                fresh.push(V { p, active });
            }
        }
        kept.extend(fresh);
        verts = kept;
    }

    let mut unique: Vec<Vec<f64>> = Vec::new();
    for v in verts {
        if !unique
            .iter()
            .any(|u| u.iter().zip(&v.p).all(|(a, b)| (a - b).abs() <= VERTEX_TOL))
        {
            unique.push(v.p);
        }
    }
    unique.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
    unique
        .into_iter()
        .map(|p| {
            // clamp clipping noise off the simplex facets
            let cleaned: Vec<f64> = p
                .iter()
                .map(|&x| if x.abs() < VERTEX_TOL { 0.0 } else { x })
                .collect();
            let total: f64 = cleaned.iter().sum();
            LinearPrevision::new(cleaned.iter().map(|x| x / total).collect())
        })
        .collect()
}

/// Two vertices share an edge iff their common active constraints together
/// with the simplex equality pin down a line: rank `n - 1`.
fn adjacent(a: &[usize], b: &[usize], n: usize, normal: &dyn Fn(usize) -> Vec<f64>) -> bool {
    let common: Vec<usize> = a.iter().filter(|x| b.contains(x)).copied().collect();
    let mut rows: Vec<Vec<f64>> = vec![vec![1.0; n]];
    rows.extend(common.iter().map(|&id| normal(id)));
    rank(rows) >= n - 1
}

fn rank(mut rows: Vec<Vec<f64>>) -> usize {
    let n = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut r = 0;
    for col in 0..n {
        let pivot = (r..rows.len())
            .filter(|&i| rows[i][col].abs() > 1e-9)
            .max_by(|&i, &j| {
                rows[i][col]
                    .abs()
                    .partial_cmp(&rows[j][col].abs())
                    .expect("finite")
            });
        let Some(pivot) = pivot else { continue };
        rows.swap(r, pivot);
        let lead = rows[r][col];
        for i in 0..rows.len() {
            if i != r && rows[i][col] != 0.0 {
                let factor = rows[i][col] / lead;
                for k in 0..n {
                    let sub = factor * rows[r][k];
                    rows[i][k] -= sub;
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

#[derive(Clone, Debug, Serialize)]
pub struct CredalFamilyReport {
    pub lower_envelopes: Vec<f64>,
    pub avoids_sure_loss: crate::TriState,
    pub coherent: crate::TriState,
    pub notes: Vec<String>,
}

/// Consistency of a family of per-gamble credal sets: extract each lower
/// envelope by LP, rebuild the induced strictly-desirable generators, and
/// hand the generated set to the loss checks under the requested kind. An
/// empty credal set prices its gamble at plus infinity, which fails every
/// consistency notion outright.
pub fn credal_family_consistency(
    family: &[(Gamble, Vec<Gamble>)],
    kind: &OperatorKind,
) -> Result<CredalFamilyReport, OperatorError> {
    if family.is_empty() {
        return Err(OperatorError::InvalidSpec("empty credal family".into()));
    }
    let space = family[0].0.space().clone();
    let mut envelopes = Vec::with_capacity(family.len());
    let mut gens = Vec::new();
    for (f, constraints) in family {
        let m = CredalPolytope::new(&space, constraints.clone())?;
        let lower = match m.lower_envelope(f)? {
            Some(v) => v,
            None => {
                return Ok(CredalFamilyReport {
                    lower_envelopes: envelopes,
                    avoids_sure_loss: crate::TriState::No,
                    coherent: crate::TriState::No,
                    notes: vec![format!(
                        "credal set for {f} is empty: it prices the gamble above its supremum"
                    )],
                })
            }
        };
        envelopes.push(lower);
        for eps in [1e-1, 1e-4, 1e-7] {
            gens.push(f.shift(-lower + eps));
        }
    }
    let set = DesirSet::generated(
        &space,
        gens,
        crate::operators::ClosureSpec::new(kind.clone()),
    )?;
    let asl = crate::consistency::avoids_sure_loss(&set, &crate::consistency::EPS_GRID)?;
    let coherent = crate::consistency::is_coherent(&set)?;
    Ok(CredalFamilyReport {
        lower_envelopes: envelopes,
        avoids_sure_loss: asl.verdict,
        coherent,
        notes: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::ClosureSpec;

    fn space2() -> PossibilitySpace {
        PossibilitySpace::with_size(2).unwrap()
    }

    fn g(space: &PossibilitySpace, v: &[f64]) -> Gamble {
        Gamble::new(space, v.to_vec()).unwrap()
    }

    #[test]
    fn single_generator_polytope() {
        let s = space2();
        let set =
            DesirSet::generated(&s, vec![g(&s, &[-1.0, 2.0])], ClosureSpec::kappa1()).unwrap();
        let poly = credal_intersection(&set).unwrap();
        let report = is_empty(&poly).unwrap();
        assert!(!report.empty);
        let verts = vertices(&poly).unwrap();
        let coords: Vec<Vec<f64>> = verts.iter().map(|v| v.weights.clone()).collect();
        assert_eq!(coords.len(), 2, "{coords:?}");
        assert!(coords
            .iter()
            .any(|p| (p[0] - 2.0 / 3.0).abs() < 1e-9 && (p[1] - 1.0 / 3.0).abs() < 1e-9));
        assert!(coords
            .iter()
            .any(|p| p[0].abs() < 1e-9 && (p[1] - 1.0).abs() < 1e-9));
    }

    #[test]
    fn strictly_negative_generator_empties() {
        let s = space2();
        let poly = CredalPolytope::new(&s, vec![g(&s, &[-1.0, -1.0])]).unwrap();
        let report = is_empty(&poly).unwrap();
        assert!(report.empty);
        let mixture = report.mixture.unwrap();
        assert!(mixture.iter().cloned().fold(f64::NEG_INFINITY, f64::max) < 0.0);
    }

    #[test]
    fn incompatible_pair_empties_with_certificate() {
        let s = space2();
        let poly =
            CredalPolytope::new(&s, vec![g(&s, &[-1.0, 1.0]), g(&s, &[1.0, -2.0])]).unwrap();
        let report = is_empty(&poly).unwrap();
        assert!(report.empty);
        let y = report.certificate.unwrap();
        assert!((y.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        let mixture = report.mixture.unwrap();
        assert!(mixture.iter().cloned().fold(f64::NEG_INFINITY, f64::max) < -1e-9);
    }

    #[test]
    fn nonempty_dominance_polytope() {
        let s = space2();
        let poly = CredalPolytope::new(&s, vec![g(&s, &[-1.0, 1.0])]).unwrap();
        let report = is_empty(&poly).unwrap();
        assert!(!report.empty);
        let p = report.point.unwrap();
        assert!(-p[0] + p[1] >= -1e-9);
    }

    #[test]
    fn unconstrained_simplex_vertices() {
        let s = PossibilitySpace::with_size(3).unwrap();
        let poly = CredalPolytope::new(&s, vec![]).unwrap();
        let verts = vertices(&poly).unwrap();
        assert_eq!(verts.len(), 3);
    }

    #[test]
    fn vertices_satisfy_constraints() {
        let s = PossibilitySpace::with_size(3).unwrap();
        let constraints = vec![g(&s, &[-1.0, 2.0, 0.0]), g(&s, &[1.0, -1.0, -0.5])];
        let poly = CredalPolytope::new(&s, constraints.clone()).unwrap();
        let verts = vertices(&poly).unwrap();
        assert!(!verts.is_empty());
        for v in verts {
            for c in &constraints {
                assert!(v.evaluate(c) >= -1e-8, "{v:?} violates {c}");
            }
            let active = constraints
                .iter()
                .filter(|c| v.evaluate(c).abs() <= 1e-8)
                .count()
                + v.weights.iter().filter(|w| w.abs() <= 1e-9).count();
            assert!(active >= 2, "vertex {v:?} has too few active constraints");
        }
    }

    #[test]
    fn empty_polytope_has_no_vertices() {
        let s = space2();
        let poly =
            CredalPolytope::new(&s, vec![g(&s, &[-1.0, 1.0]), g(&s, &[1.0, -2.0])]).unwrap();
        assert!(vertices(&poly).unwrap().is_empty());
    }

    #[test]
    fn family_from_single_linear_prevision_is_consistent() {
        let s = space2();
        let p = vec![0.25, 0.75];
        let probes = vec![g(&s, &[1.0, 0.0]), g(&s, &[0.0, 1.0]), g(&s, &[2.0, -1.0])];
        let family: Vec<(Gamble, Vec<Gamble>)> = probes
            .iter()
            .map(|f| {
                let price = f.dot(&p);
                (f.clone(), vec![f.shift(-price)])
            })
            .collect();
        for kind in [
            OperatorKind::Kappa1,
            OperatorKind::Kappa3,
            OperatorKind::Kappa4,
        ] {
            let report = credal_family_consistency(&family, &kind).unwrap();
            assert_eq!(report.avoids_sure_loss, crate::TriState::Yes, "{kind:?}");
            assert_eq!(report.coherent, crate::TriState::Yes, "{kind:?}");
        }
    }

    #[test]
    fn empty_credal_set_fails_consistency() {
        let s = space2();
        let f = g(&s, &[1.0, 0.0]);
        let family = vec![(f, vec![g(&s, &[-1.0, -1.0])])];
        let report = credal_family_consistency(&family, &OperatorKind::Kappa4).unwrap();
        assert_eq!(report.avoids_sure_loss, crate::TriState::No);
    }
}
