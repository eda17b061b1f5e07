//! Monotone bisection over a tri-state predicate, plus a rational snap for
//! boundary decisions.
//!
//! Acceptable buying prices form a lower set, so `mu -> member(f - mu)` is
//! nonincreasing and a supremum can be bracketed by plain bisection. The
//! bracket is driven to machine width (well past any caller tolerance) so
//! the boundary point itself can be probed: the simplest rational inside
//! the final bracket is, for desk-scale data, the supremum exactly.

/// One probe of the monotone predicate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Probe {
    In,
    Out,
    Unknown,
}

#[derive(Clone, Copy, Debug)]
pub struct Bracket {
    /// Certified inside (for a sup bracket) or outside (for an inf).
    pub lo: f64,
    pub hi: f64,
    /// Some probe answered Unknown; the bracket is the widest certified one.
    pub contaminated: bool,
}

impl Bracket {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// The simplest rational inside the bracket: the best point estimate of
    /// the true threshold. The window is padded by a few ulps so that a
    /// rational sitting exactly on the machine-tight boundary is not lost
    /// to division noise.
    pub fn estimate(&self) -> f64 {
        let scale = self.hi.abs().max(self.lo.abs());
        let pad = scale * 4e-15 + (self.hi - self.lo).abs() * 1e-3;
        simplest_rational_in(self.lo - pad, self.hi + pad)
    }
}

const MAX_ITERS: usize = 120;

/// Bracket `sup { mu : pred(mu) = In }` given `pred(lo) = In` and
/// `pred(hi) = Out`. Unknown probes shrink the bracket where certified
/// answers allow and otherwise stop the refinement.
pub fn bisect_sup<E>(
    mut pred: impl FnMut(f64) -> Result<Probe, E>,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    mut stalled: Option<&mut bool>,
) -> Result<Bracket, E> {
    let mut contaminated = false;
    for _ in 0..MAX_ITERS {
        if hi - lo <= 0.0 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // machine tight
        }
        match pred(mid)? {
            Probe::In => lo = mid,
            Probe::Out => hi = mid,
            Probe::Unknown => {
                contaminated = true;
                let q1 = lo + 0.25 * (hi - lo);
                let q3 = lo + 0.75 * (hi - lo);
                let p1 = if q1 > lo && q1 < hi { pred(q1)? } else { Probe::Unknown };
                let p3 = if q3 > lo && q3 < hi { pred(q3)? } else { Probe::Unknown };
                match (p1, p3) {
                    (_, Probe::In) => lo = q3,
                    (Probe::Out, _) => hi = q1,
                    (Probe::In, Probe::Out) => {
                        lo = q1;
                        hi = q3;
                    }
                    (Probe::In, Probe::Unknown) => lo = q1,
                    (Probe::Unknown, Probe::Out) => hi = q3,
                    (Probe::Unknown, Probe::Unknown) => {
                        if let Some(flag) = stalled.as_deref_mut() {
                            *flag = true;
                        }
                        break;
                    }
                }
            }
        }
    }
    let _ = tol;
    Ok(Bracket { lo, hi, contaminated })
}

/// Mirror image: bracket `inf { mu : pred(mu) = In }` given
/// `pred(lo) = Out` and `pred(hi) = In`.
pub fn bisect_inf<E>(
    mut pred: impl FnMut(f64) -> Result<Probe, E>,
    lo: f64,
    hi: f64,
    tol: f64,
    stalled: Option<&mut bool>,
) -> Result<Bracket, E> {
    // inf over an upper set = -sup of the reflected lower set
    let reflected = bisect_sup(|mu| pred(-mu), -hi, -lo, tol, stalled)?;
    Ok(Bracket {
        lo: -reflected.hi,
        hi: -reflected.lo,
        contaminated: reflected.contaminated,
    })
}

/// Simplest rational (smallest denominator, ties to smallest numerator
/// magnitude) in the closed interval `[lo, hi]`, by a Stern-Brocot walk.
/// Falls back to the midpoint if the walk does not terminate quickly,
/// which only happens for genuinely irrational thresholds.
pub fn simplest_rational_in(lo: f64, hi: f64) -> f64 {
    if lo > hi {
        return lo;
    }
    if lo <= 0.0 && 0.0 <= hi {
        return 0.0;
    }
    if hi < 0.0 {
        return -simplest_positive(-hi, -lo);
    }
    simplest_positive(lo, hi)
}

fn simplest_positive(lo: f64, hi: f64) -> f64 {
    fn rec(lo: f64, hi: f64, depth: u32) -> Option<(f64, f64)> {
        if depth > 64 || !lo.is_finite() || !hi.is_finite() {
            return None;
        }
        let fl = lo.floor();
        if lo == fl {
            return Some((fl, 1.0));
        }
        if fl + 1.0 <= hi {
            return Some((fl + 1.0, 1.0));
        }
        let (p, q) = rec(1.0 / (hi - fl), 1.0 / (lo - fl), depth + 1)?;
        Some((fl * p + q, p))
    }
    match rec(lo, hi, 0) {
        Some((p, q)) => {
            let candidate = p / q;
            if (lo..=hi).contains(&candidate) {
                candidate
            } else {
                0.5 * (lo + hi)
            }
        }
        None => 0.5 * (lo + hi),
    }
}
