//! Membership oracles for the four built-in closure operator kinds plus
//! the guarded dominance operator.
//!
//! Every oracle decides membership of `f` in the natural extension of a
//! generator list: the closure of the generators together with all
//! positive gambles. Order comparisons against generators are exact; LP
//! tolerances apply only inside the conic-hull oracle.

use crate::gamble::{is_positive, Gamble, PossibilitySpace};
use crate::lp::{LpOutcome, LpProblem, Relation};

use super::{Membership, OperatorError, Tolerances, Witness};

/// Conic hull membership: `f` is in iff it dominates, with some strict
/// slack, a nonnegative combination of generators, or equals one with a
/// strictly positive total coefficient.
///
/// Decided by two LPs: first maximize the total pointwise slack
/// `sum(f - sum lambda_j g_j)` over feasible nonnegative `lambda`; a total
/// slack above `strict_margin` certifies a dominated combination with a
/// strict coordinate. Otherwise every feasible point is an exact equality,
/// and a second LP maximizes `sum lambda` over the equality system.
pub fn member_kappa1(
    space: &PossibilitySpace,
    generators: &[Gamble],
    f: &Gamble,
    tol: Tolerances,
) -> Result<Membership, OperatorError> {
    if is_positive(f) {
        return Ok(Membership::inside(Witness::Positive));
    }
    let n = space.size();
    let m = generators.len();
    if m == 0 {
        return Ok(Membership::outside("no generators and not a positive gamble"));
    }

    // Variables: lambda_1..lambda_m, p_1..p_n (all >= 0).
    // Rows: sum_j lambda_j g_j(w) + p_w = f(w).
    let build = |objective: Vec<f64>| {
        let mut p = LpProblem::new(objective).nonnegative();
        for w in 0..n {
            let mut row = Vec::with_capacity(m + n);
            for g in generators {
                row.push(g.values()[w]);
            }
            for q in 0..n {
                row.push(if q == w { 1.0 } else { 0.0 });
            }
            p = p.constrain(row, Relation::Eq, f.values()[w]);
        }
        p
    };

    let mut slack_obj = vec![0.0; m];
    slack_obj.extend(std::iter::repeat(1.0).take(n));
    let slack_lp = build(slack_obj);
    match crate::lp::solve(&slack_lp)? {
        LpOutcome::Infeasible { .. } => {
            return Ok(Membership::outside(
                "no nonnegative combination of generators is dominated by the gamble",
            ))
        }
        LpOutcome::Unbounded => {
            // Slack grows without bound along a recession direction; any
            // feasible point with visible slack is a witness.
            let capped = {
                let mut p = build(vec![0.0; m + n]);
                let mut cap = vec![0.0; m];
                cap.extend(std::iter::repeat(1.0).take(n));
                p = p.constrain(cap, Relation::Ge, 1.0);
                p
            };
            if let LpOutcome::Optimal(sol) = crate::lp::solve(&capped)? {
                return Ok(Membership::inside(Witness::ConicCombination {
                    lambda: sol.primal[..m].to_vec(),
                }));
            }
            return Ok(Membership::inside(Witness::ConicCombination { lambda: vec![] }));
        }
        LpOutcome::Optimal(sol) => {
            if sol.objective > tol.strict_margin {
                return Ok(Membership::inside(Witness::ConicCombination {
                    lambda: sol.primal[..m].to_vec(),
                }));
            }
        }
    }

    // All feasible points have (numerically) zero slack: only an exact
    // conic representation with positive total weight remains.
    let mut eq_obj = vec![1.0; m];
    eq_obj.extend(std::iter::repeat(0.0).take(n));
    let mut eq_lp = LpProblem::new(eq_obj).nonnegative();
    for w in 0..n {
        let mut row: Vec<f64> = generators.iter().map(|g| g.values()[w]).collect();
        row.extend(std::iter::repeat(0.0).take(n));
        eq_lp = eq_lp.constrain(row, Relation::Eq, f.values()[w]);
    }
    // p variables pinned at zero
    for q in 0..n {
        eq_lp = eq_lp.bound(m + q, 0.0, 0.0);
    }
    match crate::lp::solve(&eq_lp)? {
        LpOutcome::Infeasible { .. } => Ok(Membership::outside(
            "gamble is not an exact conic combination of generators",
        )),
        LpOutcome::Unbounded => Ok(Membership::inside(Witness::ConicCombination {
            lambda: vec![],
        })),
        LpOutcome::Optimal(sol) => {
            if sol.objective > tol.lp_tol {
                Ok(Membership::inside(Witness::ConicCombination {
                    lambda: sol.primal[..m].to_vec(),
                }))
            } else {
                Ok(Membership::outside(
                    "only the zero combination reproduces the gamble",
                ))
            }
        }
    }
}

/// Integer-multiplicity sums: `f` is in iff it pointwise dominates (or
/// equals) `sum n_j g_j` for some multiplicities `0 <= n_j <=
/// max_multiplicity` with `sum n_j >= 1`, or is itself positive.
///
/// Depth-first enumeration over the generators carrying a positive
/// coordinate, with nonpositive generators resolved greedily at the
/// leaves. Sound but incomplete: when a branch is truncated by the
/// multiplicity bound and no witness was found, the verdict is Unknown.
pub fn member_kappa2(generators: &[Gamble], f: &Gamble, max_multiplicity: u32) -> Membership {
    if is_positive(f) {
        return Membership::inside(Witness::Positive);
    }
    let n = f.len();
    let fv = f.values();

    let mut pos_idx = Vec::new(); // generators with a positive coordinate
    let mut neg_idx = Vec::new(); // nonzero generators that are <= 0 everywhere
    let mut zero_idx = None;
    for (j, g) in generators.iter().enumerate() {
        if g.is_zero() {
            zero_idx = zero_idx.or(Some(j));
        } else if g.values().iter().any(|&v| v > 0.0) {
            pos_idx.push(j);
        } else {
            neg_idx.push(j);
        }
    }

    if zero_idx.is_some() && fv.iter().all(|&v| v >= 0.0) {
        let mut counts = vec![0u32; generators.len()];
        counts[zero_idx.unwrap()] = 1;
        return Membership::inside(Witness::IntegerCombination { counts });
    }

    struct Search<'a> {
        gens: &'a [Gamble],
        pos: &'a [usize],
        neg: &'a [usize],
        f: &'a [f64],
        bound: u32,
        n: usize,
        nodes: u64,
        bound_hit: bool,
        witness: Option<Vec<u32>>,
    }

    impl<'a> Search<'a> {
        /// Can coordinate `w` still be lowered by generators not yet fixed?
        fn relief_after(&self, depth: usize, w: usize) -> bool {
            self.pos[depth..]
                .iter()
                .chain(self.neg.iter())
                .any(|&j| self.gens[j].values()[w] < 0.0)
        }

        fn dfs(&mut self, depth: usize, sum: &mut [f64], counts: &mut [u32], total: u32) -> bool {
            self.nodes += 1;
            if self.nodes > 2_000_000 {
                self.bound_hit = true;
                return false;
            }
            // prune: a coordinate already exceeds f with no relief left
            for w in 0..self.n {
                if sum[w] > self.f[w] && !self.relief_after(depth, w) {
                    return false;
                }
            }
            if depth == self.pos.len() {
                return self.resolve_tail(sum, counts, total);
            }
            let j = self.pos[depth];
            let gv = self.gens[j].values();
            // residual cap from positive coordinates that nothing later can relieve
            let mut cap: Option<u32> = None;
            for w in 0..self.n {
                if gv[w] > 0.0 && !self.relief_after(depth + 1, w) {
                    let room = (self.f[w] - sum[w]) / gv[w];
                    let k = if room < 0.0 { 0 } else { room.floor() as u32 };
                    cap = Some(cap.map_or(k, |c| c.min(k)));
                }
            }
            let capped_by_bound = cap.is_none() || cap.unwrap() > self.bound;
            let cap = cap.unwrap_or(self.bound).min(self.bound);
            let base = sum.to_vec();
            for k in 0..=cap {
                for w in 0..self.n {
                    sum[w] = base[w] + gv[w] * k as f64;
                }
                counts[j] = k;
                if self.dfs(depth + 1, sum, counts, total + k) {
                    return true;
                }
            }
            sum.copy_from_slice(&base);
            counts[j] = 0;
            if capped_by_bound {
                self.bound_hit = true;
            }
            false
        }

        /// All positive-coordinate generators fixed; cover the remaining
        /// deficits with nonpositive generators. Since those only lower
        /// coordinates, overshooting is harmless: each one independently
        /// covers every deficit it can touch, which is complete.
        fn resolve_tail(&mut self, sum: &[f64], counts: &mut [u32], total: u32) -> bool {
            let mut tail = vec![0u32; self.neg.len()];
            for (slot, &j) in self.neg.iter().enumerate() {
                let gv = self.gens[j].values();
                for w in 0..self.n {
                    if sum[w] > self.f[w] && gv[w] < 0.0 {
                        let need = ((sum[w] - self.f[w]) / -gv[w]).ceil() as u32;
                        if need > self.bound {
                            self.bound_hit = true;
                            return false;
                        }
                        tail[slot] = tail[slot].max(need);
                    }
                }
            }
            let mut fixed = sum.to_vec();
            for (slot, &j) in self.neg.iter().enumerate() {
                let gv = self.gens[j].values();
                for w in 0..self.n {
                    fixed[w] += gv[w] * tail[slot] as f64;
                }
            }
            if fixed.iter().zip(self.f).any(|(s, f)| s > f) {
                return false; // some deficit has no covering generator
            }
            if total + tail.iter().sum::<u32>() == 0 {
                // need at least one summand; a nonpositive generator is free
                // to add whenever f dominates it outright
                match self
                    .neg
                    .iter()
                    .enumerate()
                    .find(|(_, &j)| self.f.iter().zip(self.gens[j].values()).all(|(f, g)| f >= g))
                {
                    Some((slot, _)) => tail[slot] = 1,
                    None => return false,
                }
            }
            let mut full = counts.to_vec();
            for (slot, &j) in self.neg.iter().enumerate() {
                full[j] = tail[slot];
            }
            self.witness = Some(full);
            true
        }
    }

    let mut search = Search {
        gens: generators,
        pos: &pos_idx,
        neg: &neg_idx,
        f: fv,
        bound: max_multiplicity,
        n,
        nodes: 0,
        bound_hit: false,
        witness: None,
    };
    let mut sum = vec![0.0; n];
    let mut counts = vec![0u32; generators.len()];
    let found = search.dfs(0, &mut sum, &mut counts, 0);
    if found {
        let counts = search.witness.expect("witness recorded on success");
        debug_assert!(verify_integer_witness(generators, f, &counts));
        Membership::inside(Witness::IntegerCombination { counts })
    } else if search.bound_hit {
        Membership::unknown(format!(
            "exhausted multiplicity bound {max_multiplicity} without a certificate"
        ))
    } else {
        Membership::outside("no integer combination up to the bound is dominated")
    }
}

fn verify_integer_witness(generators: &[Gamble], f: &Gamble, counts: &[u32]) -> bool {
    if counts.iter().all(|&c| c == 0) {
        return false;
    }
    let mut sum = vec![0.0; f.len()];
    for (g, &c) in generators.iter().zip(counts) {
        for (s, v) in sum.iter_mut().zip(g.values()) {
            *s += v * c as f64;
        }
    }
    f.values().iter().zip(&sum).all(|(fv, sv)| fv >= sv)
}

/// Single positively scaled generator: `f` is in iff it is positive or
/// dominates `lambda * g` for some generator `g` and `lambda > 0`. The
/// feasible scalings per generator form an interval with exactly
/// computable endpoints.
pub fn member_kappa3(generators: &[Gamble], f: &Gamble) -> Membership {
    if is_positive(f) {
        return Membership::inside(Witness::Positive);
    }
    let mut notes = Vec::new();
    for (index, g) in generators.iter().enumerate() {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        let mut zero_ok = true;
        for (&fv, &gv) in f.values().iter().zip(g.values()) {
            if gv > 0.0 {
                hi = hi.min(fv / gv);
            } else if gv < 0.0 {
                lo = lo.max(fv / gv);
            } else if fv < 0.0 {
                zero_ok = false;
            }
        }
        if zero_ok && lo <= hi && hi > 0.0 {
            let floor = lo.max(0.0);
            let lambda = if hi.is_finite() {
                if hi > floor {
                    0.5 * (floor + hi)
                } else {
                    hi
                }
            } else {
                floor + 1.0
            };
            return Membership::inside(Witness::ScaledGenerator { index, lambda });
        }
        notes.push(format!("g{index}: feasible scalings [{lo}, {hi}] exclude (0, inf)"));
    }
    Membership::outside(notes.join("; "))
}

/// Pointwise dominance of a single generator.
pub fn member_kappa4(generators: &[Gamble], f: &Gamble) -> Membership {
    if is_positive(f) {
        return Membership::inside(Witness::Positive);
    }
    for (index, g) in generators.iter().enumerate() {
        if f.values().iter().zip(g.values()).all(|(fv, gv)| fv >= gv) {
            return Membership::inside(Witness::DominatesGenerator { index });
        }
    }
    Membership::outside("dominates no generator and is not positive")
}

/// Dominance closure guarded by a cap on strictly negative coordinates: if
/// every generator respects the cap the oracle is plain dominance,
/// otherwise the closure collapses and everything is in.
pub fn member_neg_limit(generators: &[Gamble], f: &Gamble, max_negative_coords: usize) -> Membership {
    let tripped = generators
        .iter()
        .any(|g| g.values().iter().filter(|&&v| v < 0.0).count() > max_negative_coords);
    if tripped {
        return Membership::inside(Witness::OperatorCollapsed);
    }
    member_kappa4(generators, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamble::PossibilitySpace;

    fn space2() -> PossibilitySpace {
        PossibilitySpace::with_size(2).unwrap()
    }

    fn g(space: &PossibilitySpace, v: &[f64]) -> Gamble {
        Gamble::new(space, v.to_vec()).unwrap()
    }

    #[test]
    fn kappa1_exact_scaling() {
        let s = space2();
        let gens = vec![g(&s, &[-1.0, 2.0])];
        let tol = Tolerances::default();
        let m = member_kappa1(&s, &gens, &g(&s, &[-0.5, 1.0]), tol).unwrap();
        assert!(m.is_in(), "{m:?}");
        match m.witness {
            Some(Witness::ConicCombination { lambda }) => {
                assert!((lambda[0] - 0.5).abs() < 1e-7)
            }
            w => panic!("unexpected witness {w:?}"),
        }
    }

    #[test]
    fn kappa1_interval_infeasible() {
        let s = space2();
        let gens = vec![g(&s, &[-1.0, 2.0])];
        let m = member_kappa1(&s, &gens, &g(&s, &[-1.0, 1.0]), Tolerances::default()).unwrap();
        assert!(m.is_out(), "{m:?}");
    }

    #[test]
    fn kappa1_loss_combination() {
        // 3(-1,1) + 2(1,-2) = (-1,-1)
        let s = space2();
        let gens = vec![g(&s, &[-1.0, 1.0]), g(&s, &[1.0, -2.0])];
        let m = member_kappa1(&s, &gens, &g(&s, &[-1.0, -1.0]), Tolerances::default()).unwrap();
        assert!(m.is_in(), "{m:?}");
    }

    #[test]
    fn kappa1_partial_slack_is_in() {
        // f = g + (0,1,0): slack in one coordinate only, no exact equality
        let s = PossibilitySpace::with_size(3).unwrap();
        let gens = vec![g(&s, &[1.0, 0.0, -1.0])];
        let m = member_kappa1(&s, &gens, &g(&s, &[1.0, 1.0, -1.0]), Tolerances::default()).unwrap();
        assert!(m.is_in(), "{m:?}");
    }

    #[test]
    fn kappa2_examples() {
        let s = space2();
        let gens = vec![g(&s, &[-2.0, 2.0])];
        assert!(member_kappa2(&gens, &g(&s, &[-4.0, 4.0]), 64).is_in());
        assert!(member_kappa2(&gens, &g(&s, &[1.0, -1.0]), 64).is_out());
        assert!(member_kappa2(&gens, &g(&s, &[-3.0, 3.0]), 64).is_out());
    }

    #[test]
    fn kappa2_needs_nonpositive_generator() {
        let s = space2();
        let gens = vec![g(&s, &[-1.0, 0.0])];
        let m = member_kappa2(&gens, &g(&s, &[-5.0, 0.0]), 64);
        assert!(m.is_in(), "{m:?}");
        match m.witness {
            Some(Witness::IntegerCombination { counts }) => assert_eq!(counts, vec![5]),
            w => panic!("unexpected witness {w:?}"),
        }
    }

    #[test]
    fn kappa2_mixed_combination() {
        // 3(-1,1) + 2(1,-2) = (-1,-1)
        let s = space2();
        let gens = vec![g(&s, &[-1.0, 1.0]), g(&s, &[1.0, -2.0])];
        let m = member_kappa2(&gens, &g(&s, &[-1.0, -1.0]), 64);
        assert!(m.is_in(), "{m:?}");
    }

    #[test]
    fn kappa2_unknown_on_tight_bound() {
        let s = space2();
        let gens = vec![g(&s, &[-2.0, 2.0])];
        // (-10,10) = 5 copies; with bound 3 the search is truncated
        let m = member_kappa2(&gens, &g(&s, &[-10.0, 10.0]), 3);
        assert!(m.is_unknown(), "{m:?}");
    }

    #[test]
    fn kappa3_examples() {
        let s = space2();
        let one = vec![g(&s, &[-1.0, 1.0])];
        assert!(member_kappa3(&one, &g(&s, &[-0.5, 0.5])).is_in());
        assert!(member_kappa3(&one, &g(&s, &[0.0, 0.0])).is_out());
        let two = vec![g(&s, &[-1.0, 1.0]), g(&s, &[1.0, -2.0])];
        assert!(member_kappa3(&two, &g(&s, &[-2.4, 2.6])).is_in());
        assert!(member_kappa3(&two, &g(&s, &[-2.6, 2.4])).is_out());
    }

    #[test]
    fn kappa4_examples() {
        let s = space2();
        let gens = vec![g(&s, &[-1.0, 1.0])];
        assert!(member_kappa4(&gens, &g(&s, &[-1.0, 1.0])).is_in());
        assert!(member_kappa4(&gens, &g(&s, &[0.0, 2.0])).is_in());
        assert!(member_kappa4(&gens, &g(&s, &[-2.0, 2.0])).is_out());
    }

    #[test]
    fn neg_limit_guard() {
        let s = PossibilitySpace::with_size(4).unwrap();
        let ok = vec![g(&s, &[-1.0, 1.0, 0.0, 0.0]), g(&s, &[0.0, 0.0, -1.0, 1.0])];
        assert!(member_neg_limit(&ok, &g(&s, &[-1.0, 1.0, -1.0, 1.0]), 1).is_out());
        let tripped = vec![g(&s, &[-1.0, 1.0, -1.0, 1.0])];
        assert!(member_neg_limit(&tripped, &g(&s, &[-9.0, -9.0, -9.0, -9.0]), 1).is_in());
    }
}
