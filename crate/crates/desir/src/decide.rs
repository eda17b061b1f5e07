//! Optimality criteria over a finite option set under a set of desirable
//! gambles.
//!
//! The price-set formulations compare whole sets of acceptable buying (or
//! selling) prices, which carry one more bit than the prevision values:
//! when two previsions tie, attainment of the boundary breaks the tie.
//! The classic worked example is the ordered-weighted-average model over a
//! ternary space, which prices the two paired-choice experiments the way
//! people actually choose and provably cannot be reproduced by any
//! additive closure.

use serde::Serialize;
use thiserror::Error;

use crate::credal::{is_empty, CredalPolytope};
use crate::gamble::{classify, Classification, Gamble, PossibilitySpace};
use crate::lp::{LpOutcome, LpProblem, Relation};
use crate::operators::{DesirSet, OperatorError, PriceFunctional};
use crate::previsions::{
    kappa1_prevision_lp, lower_prevision, upper_prevision, PrevisionError,
};
use crate::TriState;

pub const GAMMA_MAXIMIN: &str = "gamma-maximin";
pub const GAMMA_MAXIMAX: &str = "gamma-maximax";
pub const INTERVAL_DOMINANCE: &str = "interval-dominance";
pub const MAXIMALITY: &str = "maximality";
pub const E_ADMISSIBILITY: &str = "e-admissibility";

#[derive(Debug, Error)]
pub enum DecideError {
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Prevision(#[from] PrevisionError),
    #[error("criterion requires the conic-hull operator")]
    WrongOperator,
    #[error("criterion inapplicable: {0}")]
    Inapplicable(String),
    #[error("criterion unavailable without an enumerator of decisive supersets")]
    Unavailable,
    #[error("option sets must be nonempty")]
    EmptyOptionSet,
}

#[derive(Clone, Debug, Serialize)]
pub struct Rejection {
    pub option: String,
    pub dominated_by: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecisionReport {
    pub criterion: String,
    pub optimal: Vec<String>,
    pub rejected: Vec<Rejection>,
    pub ties_resolved_by_boundary: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// A named option set.
pub type OptionSet<'a> = &'a [(String, Gamble)];

struct PriceSummary {
    value: f64,
    boundary: TriState,
    contaminated: bool,
}

fn buying_summaries(
    set: &DesirSet,
    options: OptionSet<'_>,
    tol: f64,
) -> Result<Vec<PriceSummary>, DecideError> {
    options
        .iter()
        .map(|(_, f)| {
            let b = lower_prevision(set, f, tol)?;
            Ok(PriceSummary {
                value: b.estimate(),
                boundary: b.boundary_in,
                contaminated: b.contaminated,
            })
        })
        .collect()
}

fn selling_summaries(
    set: &DesirSet,
    options: OptionSet<'_>,
    tol: f64,
) -> Result<Vec<PriceSummary>, DecideError> {
    options
        .iter()
        .map(|(_, f)| {
            let b = upper_prevision(set, f, tol)?;
            Ok(PriceSummary {
                value: b.estimate(),
                boundary: b.boundary_in,
                contaminated: b.contaminated,
            })
        })
        .collect()
}

fn finish(
    criterion: &str,
    options: OptionSet<'_>,
    rejected: Vec<Rejection>,
    boundary_used: bool,
    notes: Vec<String>,
) -> DecisionReport {
    let optimal = options
        .iter()
        .map(|(name, _)| name.clone())
        .filter(|name| !rejected.iter().any(|r| &r.option == name))
        .collect();
    DecisionReport {
        criterion: criterion.to_string(),
        optimal,
        rejected,
        ties_resolved_by_boundary: boundary_used,
        notes,
    }
}

/// An option is ruled out when another option's acceptable buying prices
/// strictly include its own.
pub fn gamma_maximin(
    set: &DesirSet,
    options: OptionSet<'_>,
    tol: f64,
) -> Result<DecisionReport, DecideError> {
    if options.is_empty() {
        return Err(DecideError::EmptyOptionSet);
    }
    let prices = buying_summaries(set, options, tol)?;
    let cmp = tol.max(1e-7);
    let mut rejected = Vec::new();
    let mut boundary_used = false;
    let mut notes = Vec::new();
    for (i, (name_i, _)) in options.iter().enumerate() {
        let mut dominated_by = None;
        for (j, (name_j, _)) in options.iter().enumerate() {
            if i == j {
                continue;
            }
            let (pi, pj) = (&prices[i], &prices[j]);
            if pi.contaminated || pj.contaminated {
                notes.push(format!(
                    "comparison {name_i} vs {name_j} contaminated by unknown answers; kept"
                ));
                continue;
            }
            if pj.value > pi.value + cmp {
                dominated_by = Some((name_j.clone(), format!("{} > {}", pj.value, pi.value)));
                break;
            }
            if (pj.value - pi.value).abs() <= cmp
                && pj.boundary == TriState::Yes
                && pi.boundary == TriState::No
            {
                boundary_used = true;
                dominated_by = Some((
                    name_j.clone(),
                    format!("equal prevision {}; boundary attained only by {name_j}", pj.value),
                ));
                break;
            }
        }
        if let Some((by, detail)) = dominated_by {
            rejected.push(Rejection {
                option: name_i.clone(),
                dominated_by: by,
                detail,
            });
        }
    }
    Ok(finish(GAMMA_MAXIMIN, options, rejected, boundary_used, notes))
}

/// An option is ruled out when its acceptable selling prices strictly
/// include another option's (selling dearer is better).
pub fn gamma_maximax(
    set: &DesirSet,
    options: OptionSet<'_>,
    tol: f64,
) -> Result<DecisionReport, DecideError> {
    if options.is_empty() {
        return Err(DecideError::EmptyOptionSet);
    }
    let prices = selling_summaries(set, options, tol)?;
    let cmp = tol.max(1e-7);
    let mut rejected = Vec::new();
    let mut boundary_used = false;
    let mut notes = Vec::new();
    for (i, (name_i, _)) in options.iter().enumerate() {
        let mut dominated_by = None;
        for (j, (name_j, _)) in options.iter().enumerate() {
            if i == j {
                continue;
            }
            let (pi, pj) = (&prices[i], &prices[j]);
            if pi.contaminated || pj.contaminated {
                notes.push(format!(
                    "comparison {name_i} vs {name_j} contaminated by unknown answers; kept"
                ));
                continue;
            }
            if pi.value < pj.value - cmp {
                dominated_by = Some((name_j.clone(), format!("{} < {}", pi.value, pj.value)));
                break;
            }
            if (pj.value - pi.value).abs() <= cmp
                && pi.boundary == TriState::Yes
                && pj.boundary == TriState::No
            {
                boundary_used = true;
                dominated_by = Some((
                    name_j.clone(),
                    format!(
                        "equal selling price {}; boundary attained only by {name_i}",
                        pi.value
                    ),
                ));
                break;
            }
        }
        if let Some((by, detail)) = dominated_by {
            rejected.push(Rejection {
                option: name_i.clone(),
                dominated_by: by,
                detail,
            });
        }
    }
    Ok(finish(GAMMA_MAXIMAX, options, rejected, boundary_used, notes))
}

/// An option is ruled out when some price is simultaneously an acceptable
/// selling price for it and an acceptable buying price for another option.
pub fn interval_dominance(
    set: &DesirSet,
    options: OptionSet<'_>,
    tol: f64,
) -> Result<DecisionReport, DecideError> {
    if options.is_empty() {
        return Err(DecideError::EmptyOptionSet);
    }
    let buying = buying_summaries(set, options, tol)?;
    let selling = selling_summaries(set, options, tol)?;
    let cmp = tol.max(1e-7);
    let mut rejected = Vec::new();
    let mut boundary_used = false;
    let mut notes = Vec::new();
    for (i, (name_i, _)) in options.iter().enumerate() {
        let mut dominated_by = None;
        for (j, (name_j, _)) in options.iter().enumerate() {
            if i == j {
                continue;
            }
            let upper_i = &selling[i];
            let lower_j = &buying[j];
            if upper_i.contaminated || lower_j.contaminated {
                notes.push(format!(
                    "comparison {name_i} vs {name_j} contaminated by unknown answers; kept"
                ));
                continue;
            }
            if upper_i.value < lower_j.value - cmp {
                dominated_by = Some((
                    name_j.clone(),
                    format!("selling {} below buying {}", upper_i.value, lower_j.value),
                ));
                break;
            }
            if (upper_i.value - lower_j.value).abs() <= cmp
                && upper_i.boundary == TriState::Yes
                && lower_j.boundary == TriState::Yes
            {
                boundary_used = true;
                dominated_by = Some((
                    name_j.clone(),
                    format!("price {} acceptable on both sides", upper_i.value),
                ));
                break;
            }
        }
        if let Some((by, detail)) = dominated_by {
            rejected.push(Rejection {
                option: name_i.clone(),
                dominated_by: by,
                detail,
            });
        }
    }
    Ok(finish(INTERVAL_DOMINANCE, options, rejected, boundary_used, notes))
}

/// Maximality under the conic hull: optimal iff no other option's margin
/// prices positively, pair by pair through the exact LP.
pub fn maximality_kappa1(
    space: &PossibilitySpace,
    generators: &[Gamble],
    options: OptionSet<'_>,
    tol: f64,
) -> Result<DecisionReport, DecideError> {
    if options.is_empty() {
        return Err(DecideError::EmptyOptionSet);
    }
    let mut rejected = Vec::new();
    for (i, (name_i, fi)) in options.iter().enumerate() {
        let mut dominated_by = None;
        for (j, (name_j, fj)) in options.iter().enumerate() {
            if i == j {
                continue;
            }
            let margin = fj.sub(fi).map_err(OperatorError::from)?;
            let value = kappa1_prevision_lp(space, generators, &margin)?
                .ok_or_else(|| DecideError::Inapplicable("unbounded margin prevision".into()))?;
            if value > tol.max(1e-9) {
                dominated_by = Some((
                    name_j.clone(),
                    format!("margin prices at {value} > 0"),
                ));
                break;
            }
        }
        if let Some((by, detail)) = dominated_by {
            rejected.push(Rejection {
                option: name_i.clone(),
                dominated_by: by,
                detail,
            });
        }
    }
    Ok(finish(MAXIMALITY, options, rejected, false, Vec::new()))
}

/// E-admissibility under the conic hull: optimal iff some probability in
/// the credal polytope weakly prefers the option to every other.
pub fn e_admissible_kappa1(
    space: &PossibilitySpace,
    generators: &[Gamble],
    options: OptionSet<'_>,
    tol: f64,
) -> Result<DecisionReport, DecideError> {
    if options.is_empty() {
        return Err(DecideError::EmptyOptionSet);
    }
    let polytope = CredalPolytope::new(space, generators.to_vec())?;
    if is_empty(&polytope)?.empty {
        return Err(DecideError::Inapplicable(
            "credal polytope is empty; no probability backs any option".into(),
        ));
    }
    let n = space.size();
    let mut rejected = Vec::new();
    for (i, (name_i, fi)) in options.iter().enumerate() {
        // feasibility: p in polytope with p . (fi - fj) >= 0 for all j
        let mut objective = vec![0.0; n + 1];
        objective[n] = 1.0;
        let mut lp = LpProblem::new(objective);
        for v in 0..n {
            lp = lp.bound(v, 0.0, f64::INFINITY);
        }
        lp = lp.bound(n, f64::NEG_INFINITY, 1.0);
        let mut row = vec![1.0; n];
        row.push(0.0);
        lp = lp.constrain(row, Relation::Eq, 1.0);
        for g in generators {
            let mut row = g.values().to_vec();
            row.push(0.0);
            lp = lp.constrain(row, Relation::Ge, 0.0);
        }
        for (j, (_, fj)) in options.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut row: Vec<f64> = fi
                .values()
                .iter()
                .zip(fj.values())
                .map(|(a, b)| a - b)
                .collect();
            row.push(-1.0);
            lp = lp.constrain(row, Relation::Ge, 0.0);
        }
        let admissible = match crate::lp::solve(&lp).map_err(OperatorError::from)? {
            LpOutcome::Optimal(sol) => sol.objective >= -tol.max(1e-9),
            LpOutcome::Infeasible { .. } => false,
            LpOutcome::Unbounded => true,
        };
        if !admissible {
            rejected.push(Rejection {
                option: name_i.clone(),
                dominated_by: "(every probability prefers another option)".into(),
                detail: "no backing probability in the credal polytope".into(),
            });
        }
    }
    Ok(finish(E_ADMISSIBILITY, options, rejected, false, Vec::new()))
}

/// Maximality quantified over a supplied finite family of decisive
/// supersets; without the enumerator the criterion is unavailable.
pub fn generic_maximality(
    supersets: Option<&[DesirSet]>,
    options: OptionSet<'_>,
    tol: f64,
) -> Result<DecisionReport, DecideError> {
    let supersets = supersets.ok_or(DecideError::Unavailable)?;
    if options.is_empty() {
        return Err(DecideError::EmptyOptionSet);
    }
    let mut rejected = Vec::new();
    for (i, (name_i, _)) in options.iter().enumerate() {
        let mut dominated_by = None;
        'others: for (j, (name_j, _)) in options.iter().enumerate() {
            if i == j {
                continue;
            }
            // g beats f when, under every decisive superset, g's buying
            // prices strictly include f's
            for superset in supersets {
                if !strictly_preferred(superset, &options[j].1, &options[i].1, tol)? {
                    continue 'others;
                }
            }
            dominated_by = Some(name_j.clone());
            break;
        }
        if let Some(by) = dominated_by {
            rejected.push(Rejection {
                option: name_i.clone(),
                dominated_by: by.clone(),
                detail: format!("{by} preferred under every decisive superset"),
            });
        }
    }
    Ok(finish(MAXIMALITY, options, rejected, false, Vec::new()))
}

/// E-admissibility over a supplied finite family of decisive supersets:
/// optimal iff undominated under at least one of them.
pub fn generic_e_admissibility(
    supersets: Option<&[DesirSet]>,
    options: OptionSet<'_>,
    tol: f64,
) -> Result<DecisionReport, DecideError> {
    let supersets = supersets.ok_or(DecideError::Unavailable)?;
    if options.is_empty() {
        return Err(DecideError::EmptyOptionSet);
    }
    let mut rejected = Vec::new();
    for (i, (name_i, fi)) in options.iter().enumerate() {
        let mut admissible = false;
        'supersets: for superset in supersets {
            for (j, (_, fj)) in options.iter().enumerate() {
                if i != j && strictly_preferred(superset, fj, fi, tol)? {
                    continue 'supersets;
                }
            }
            admissible = true;
            break;
        }
        if !admissible {
            rejected.push(Rejection {
                option: name_i.clone(),
                dominated_by: "(dominated under every decisive superset)".into(),
                detail: "no decisive superset leaves the option undominated".into(),
            });
        }
    }
    Ok(finish(E_ADMISSIBILITY, options, rejected, false, Vec::new()))
}

/// Does `g`'s buying-price set strictly include `f`'s under `set`?
fn strictly_preferred(
    set: &DesirSet,
    g: &Gamble,
    f: &Gamble,
    tol: f64,
) -> Result<bool, DecideError> {
    let pg = lower_prevision(set, g, tol)?;
    let pf = lower_prevision(set, f, tol)?;
    let cmp = tol.max(1e-7);
    if pg.estimate() > pf.estimate() + cmp {
        return Ok(true);
    }
    Ok((pg.estimate() - pf.estimate()).abs() <= cmp
        && pg.boundary_in == TriState::Yes
        && pf.boundary_in == TriState::No)
}

#[derive(Clone, Debug, Serialize)]
pub struct AdditiveImpossibility {
    pub summands: Vec<Vec<f64>>,
    pub total: Vec<f64>,
    pub constant_value: f64,
    pub classification: Classification,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairedChoiceReport {
    pub previsions: [f64; 4],
    pub experiment_one: DecisionReport,
    pub experiment_two: DecisionReport,
    pub additive_impossibility: AdditiveImpossibility,
}

/// The ordered-weighted-average resolution of the classic paired-choice
/// experiments: a sure million against a slightly richer lottery, and the
/// two thinned-down variants. The induced precise prevision prefers the
/// sure thing in the first pair and the richer lottery in the second,
/// while the closing computation shows any additive closure holding those
/// prices would accept a strictly negative constant.
pub fn paired_choice_demo() -> Result<PairedChoiceReport, DecideError> {
    let space = PossibilitySpace::with_size(3).map_err(OperatorError::from)?;
    let g = |v: [f64; 3]| Gamble::new(&space, v.to_vec()).expect("finite");
    let f1 = g([1.0, 1.0, 1.0]);
    let f2 = g([1.0, 0.0, 1.9]);
    let f3 = g([0.0, 1.0, 1.0]);
    let f4 = g([0.0, 0.0, 1.9]);
    let functional = PriceFunctional::Owa {
        weights: vec![0.4, 0.2, 0.4],
    };
    let previsions = [
        functional.evaluate(&f1).map_err(OperatorError::from)?,
        functional.evaluate(&f2).map_err(OperatorError::from)?,
        functional.evaluate(&f3).map_err(OperatorError::from)?,
        functional.evaluate(&f4).map_err(OperatorError::from)?,
    ];
    let set = DesirSet::induced_by(&space, functional)?;
    let tol = 1e-9;
    let j1 = vec![("f1".to_string(), f1.clone()), ("f2".to_string(), f2.clone())];
    let j2 = vec![("f3".to_string(), f3.clone()), ("f4".to_string(), f4.clone())];
    let experiment_one = gamma_maximin(&set, &j1, tol)?;
    let experiment_two = gamma_maximin(&set, &j2, tol)?;

    // any additive closure holding mu1 < 1 as an unacceptable buying price
    // for f2 while accepting f4 - mu2 must accept this constant:
    let (mu1, mu2, eps) = (0.96, 0.7, 0.01);
    let s1 = f2.neg().shift(eps + mu1);
    let s2 = f3.neg().shift(eps + mu2);
    let s3 = f4.shift(-mu2);
    let total = s1
        .add(&s2)
        .and_then(|t| t.add(&s3))
        .map_err(OperatorError::from)?;
    let constant_value = 2.0 * eps + mu1 - 1.0;
    let classification = classify(&total);
    Ok(PairedChoiceReport {
        previsions,
        experiment_one,
        experiment_two,
        additive_impossibility: AdditiveImpossibility {
            summands: vec![
                s1.values().to_vec(),
                s2.values().to_vec(),
                s3.values().to_vec(),
            ],
            total: total.values().to_vec(),
            constant_value,
            classification,
        },
    })
}
