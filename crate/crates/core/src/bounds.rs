//! Dimension bounds for two-valued families.

use crate::error::{Result, SpidError};
use crate::spid::{find_max_sunflower, is_junta, sort_nonincreasing, SpidFamily};

/// `k + (t1 - 1)(n - 1) + 2`: a family spanning at least this much is a
/// `(k - t1)`-junta.
pub fn junta_bound(k: usize, t1: usize, n: usize) -> usize {
    k + (t1 - 1) * (n - 1) + 2
}

/// `k + (n - 1)(t1 - 1) - (t1 - t2) + 2`, the sharper ceiling available when
/// some `δ_s <= t2` sits strictly between the sunflower and the first member
/// missing its center.
pub fn refined_bound(k: usize, t1: usize, t2: usize, n: usize) -> usize {
    k + (n - 1) * (t1 - 1) + 2 - (t1 - t2)
}

/// Largest span of a non-junta `(k; k-t, k-t+1)` family, `k + (n-1)(t-1) + 1`.
pub fn extremal_dim(k: usize, t: usize, n: usize) -> usize {
    junta_bound(k, t, n) - 1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub n: usize,
    pub k: usize,
    pub t1: usize,
    pub t2: usize,
    pub dim_span: usize,
    pub junta_threshold: usize,
    /// Only for `t1 > t2 + 1`; informational, not asserted.
    pub refined_threshold: Option<usize>,
    pub is_junta_at_center_dim: bool,
    /// `k - t1 - dim(π_r ∩ V')` for the first member in sorted order that
    /// misses the sunflower center `V'`.
    pub epsilon: Option<usize>,
    /// `k > t1 > t2 >= 2`.
    pub within_hypotheses: bool,
    /// `dim_span >= threshold` implies junta.
    pub implication_holds: bool,
    pub notes: Vec<String>,
}

/// Evaluates the junta bound on a family with exactly two attained
/// intersection dimensions.
///
/// A failed implication is an error only when the family lies within the
/// hypotheses `k > t1 > t2 >= 2`; outside them it is reported in the
/// `implication_holds` flag.
pub fn check_theorem_2_1(family: &SpidFamily) -> Result<BoundReport> {
    let n = family.len();
    let k = family.k();
    if n < 3 {
        return Err(SpidError::Precondition(format!(
            "the bound needs at least three members, got {n}"
        )));
    }
    let values = family.profile().attained();
    let [low, high] = values[..] else {
        return Err(SpidError::Precondition(format!(
            "the bound needs exactly two attained intersection dimensions, got {values:?}"
        )));
    };
    let (t1, t2) = (k - low, k - high);
    let dim_span = family.dim_span();
    let junta_threshold = junta_bound(k, t1, n);
    let center = is_junta(family, low);
    let is_junta_at_center_dim = center.is_some();

    let mut notes = Vec::new();
    let within_hypotheses = t2 >= 2 && t1 < k;
    if t2 < 2 {
        notes.push(format!("t2 = {t2} is below 2, outside the bound's hypotheses"));
    }
    if t1 >= k {
        notes.push("members meet trivially (t1 = k), outside the bound's hypotheses".into());
    }

    let epsilon = if is_junta_at_center_dim {
        None
    } else {
        let sorted = sort_nonincreasing(family)?;
        let sunflower = find_max_sunflower(family, low)?
            .expect("the smallest dimension is attained by some pair");
        let v_prime = sunflower.center;
        let mut eps = None;
        for &r in &sorted.ordering {
            let m = family.member(r);
            if !m.contains(&v_prime)? {
                eps = Some(low - m.intersection_dim(&v_prime)?);
                break;
            }
        }
        eps
    };

    let implication_holds = dim_span < junta_threshold || is_junta_at_center_dim;
    if within_hypotheses && !implication_holds {
        return Err(SpidError::TheoremViolation(format!(
            "non-junta family spans {dim_span} >= {junta_threshold}"
        )));
    }
    let refined_threshold = (t1 > t2 + 1).then(|| refined_bound(k, t1, t2, n));

    Ok(BoundReport {
        n,
        k,
        t1,
        t2,
        dim_span,
        junta_threshold,
        refined_threshold,
        is_junta_at_center_dim,
        epsilon,
        within_hypotheses,
        implication_holds,
        notes,
    })
}
