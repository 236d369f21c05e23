//! Recognising which extremal shape a `(k; k-t, k-t+1)` family has.
//!
//! A family spanning exactly `k + (n-1)(t-1) + 1` is a `(k-t)`-junta or has
//! one of four shapes. The shapes are not mutually exclusive as families,
//! so every anchor pair is examined and all matching shapes are reported;
//! the verdict is the most specific one, in the order Junta, II, III, IV, I.

use std::fmt;

use crate::bounds::extremal_dim;
use crate::error::{Result, SpidError};
use crate::spid::{find_max_sunflower, is_junta, sort_nonincreasing, SpidFamily};
use crate::subspace::Subspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verdict {
    Junta,
    ClassI,
    ClassII,
    ClassIII,
    ClassIV,
}

impl Verdict {
    /// Lower is more specific.
    fn precedence(self) -> u8 {
        match self {
            Verdict::Junta => 0,
            Verdict::ClassII => 1,
            Verdict::ClassIII => 2,
            Verdict::ClassIV => 3,
            Verdict::ClassI => 4,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Junta => "Junta",
            Verdict::ClassI => "ClassI",
            Verdict::ClassII => "ClassII",
            Verdict::ClassIII => "ClassIII",
            Verdict::ClassIV => "ClassIV",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Junta {
        center: Subspace,
    },
    /// A `(k-t)`-sunflower of maximal dimension with `m >= 3` petals.
    Sunflower {
        center: Subspace,
        petals: Vec<usize>,
    },
    /// Every other member meets `<π_a, π_b>` in the same `(k-t+1)`-space `w`.
    CommonHyperplane {
        anchor: [usize; 2],
        w: Subspace,
    },
    /// The other members meet `<π_a, π_b>` in `s >= 2` hyperplanes of the
    /// `(k-t+2)`-space `v_prime`; `classes[h]` lists the members on
    /// `hyperplanes[h]`.
    Pencil {
        anchor: [usize; 2],
        v_prime: Subspace,
        hyperplanes: Vec<Subspace>,
        classes: Vec<Vec<usize>>,
        anchor_dims: [usize; 2],
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapeMatch {
    pub verdict: Verdict,
    pub witness: Witness,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationResult {
    pub verdict: Verdict,
    pub witness: Witness,
    pub k: usize,
    pub t: usize,
    /// Size of the largest `(k-t)`-sunflower of maximal dimension.
    pub m: usize,
    /// Other shapes the family also has, most specific first.
    pub also_matches: Vec<Verdict>,
    pub notes: Vec<String>,
}

impl ClassificationResult {
    pub fn s(&self) -> Option<usize> {
        match &self.witness {
            Witness::CommonHyperplane { .. } => Some(1),
            Witness::Pencil { hyperplanes, .. } => Some(hyperplanes.len()),
            _ => None,
        }
    }
}

enum AnchorOutcome {
    Match(ShapeMatch),
    /// Both anchor members meet `V'` in `(k-t)`-spaces.
    CaseOne,
    Mismatch(String),
}

/// Reads the shape of the family around the anchor pair `(a, b)`, which
/// must meet in dimension `k - t`.
fn analyze_anchor(family: &SpidFamily, a: usize, b: usize, t: usize) -> Result<AnchorOutcome> {
    let k = family.k();
    let (pa, pb) = (family.member(a), family.member(b));
    let plane = pa.sum(pb)?;
    let mut hyperplanes: Vec<Subspace> = Vec::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for j in (0..family.len()).filter(|&j| j != a && j != b) {
        let wj = family.member(j).intersect(&plane)?;
        if wj.dim() != k - t + 1 {
            return Ok(AnchorOutcome::Mismatch(format!(
                "member {j} meets <π_{a}, π_{b}> in dimension {}",
                wj.dim()
            )));
        }
        match hyperplanes.iter().position(|h| *h == wj) {
            Some(h) => classes[h].push(j),
            None => {
                hyperplanes.push(wj);
                classes.push(vec![j]);
            }
        }
    }
    let anchor = [a, b];

    if hyperplanes.len() == 1 {
        let w = hyperplanes.pop().expect("one class");
        let wa = pa.intersect(&w)?;
        let wb = pb.intersect(&w)?;
        if wa.dim() != k - t || wb.dim() != k - t || wa == wb {
            return Ok(AnchorOutcome::Mismatch(format!(
                "anchor members meet W in dimensions {} and {}",
                wa.dim(),
                wb.dim()
            )));
        }
        for &j in &classes[0] {
            for i in anchor {
                let d = family.intersection_dim(i, j);
                if d != k - t {
                    return Ok(AnchorOutcome::Mismatch(format!(
                        "members {i} and {j} meet in dimension {d}"
                    )));
                }
            }
        }
        return Ok(AnchorOutcome::Match(ShapeMatch {
            verdict: Verdict::ClassII,
            witness: Witness::CommonHyperplane { anchor, w },
        }));
    }

    let v_prime = Subspace::sum_all(&hyperplanes)?.expect("s >= 2");
    if v_prime.dim() != k - t + 2 {
        return Ok(AnchorOutcome::Mismatch(format!(
            "the {} hyperplanes span dimension {}, not {}",
            hyperplanes.len(),
            v_prime.dim(),
            k - t + 2
        )));
    }
    let ca = pa.intersect(&v_prime)?;
    let cb = pb.intersect(&v_prime)?;
    let anchor_dims = [ca.dim(), cb.dim()];
    let verdict = match (ca.dim(), cb.dim()) {
        (x, y) if x == k - t && y == k - t => return Ok(AnchorOutcome::CaseOne),
        (x, y) if x == k - t + 1 && y == k - t + 1 => Verdict::ClassIV,
        (x, y) if x.min(y) == k - t && x.max(y) == k - t + 1 => {
            let (small, big) = if x < y { (&ca, &cb) } else { (&cb, &ca) };
            for h in &hyperplanes {
                if !h.contains(small)? {
                    return Ok(AnchorOutcome::Mismatch(
                        "the smaller anchor trace misses a hyperplane".into(),
                    ));
                }
            }
            if big.contains(small)? {
                return Ok(AnchorOutcome::Mismatch(
                    "the smaller anchor trace lies in the larger".into(),
                ));
            }
            Verdict::ClassIII
        }
        (x, y) => {
            return Ok(AnchorOutcome::Mismatch(format!(
                "anchor members meet V' in dimensions {x} and {y}"
            )))
        }
    };
    Ok(AnchorOutcome::Match(ShapeMatch {
        verdict,
        witness: Witness::Pencil {
            anchor,
            v_prime,
            hyperplanes,
            classes,
            anchor_dims,
        },
    }))
}

/// Every shape the family has, found by trying each qualifying anchor pair.
pub fn all_shape_matches(family: &SpidFamily, t: usize) -> Result<Vec<ShapeMatch>> {
    let k = family.k();
    let mut out: Vec<ShapeMatch> = Vec::new();
    if let Some(sf) = find_max_sunflower(family, k - t)? {
        if sf.indices.len() >= 3 {
            out.push(ShapeMatch {
                verdict: Verdict::ClassI,
                witness: Witness::Sunflower {
                    center: sf.center,
                    petals: sf.indices,
                },
            });
        }
    }
    for a in 0..family.len() {
        for b in a + 1..family.len() {
            if family.intersection_dim(a, b) != k - t {
                continue;
            }
            if let AnchorOutcome::Match(m) = analyze_anchor(family, a, b, t)? {
                if !out.iter().any(|o| o.verdict == m.verdict) {
                    out.push(m);
                }
            }
        }
    }
    out.sort_by_key(|m| m.verdict.precedence());
    Ok(out)
}

/// Classifies an extremal `(k; k-t, k-t+1)` family.
pub fn classify_extremal(family: &SpidFamily) -> Result<ClassificationResult> {
    let n = family.len();
    let k = family.k();
    if n < 3 {
        return Err(SpidError::Precondition(format!("need n >= 3, got {n}")));
    }
    let values = family.profile().attained();
    let [low, high] = values[..] else {
        return Err(SpidError::Precondition(format!(
            "need exactly two attained intersection dimensions, got {values:?}"
        )));
    };
    if high != low + 1 {
        return Err(SpidError::Precondition(format!(
            "intersection dimensions {low} and {high} are not consecutive"
        )));
    }
    let t = k - low;
    if !(2..k).contains(&t) {
        return Err(SpidError::Precondition(format!("need 2 <= t <= k - 1, got t = {t}, k = {k}")));
    }
    let target = extremal_dim(k, t, n);
    let dim = family.dim_span();
    if dim != target {
        return Err(SpidError::Precondition(format!(
            "dim <S> = {dim} is not the extremal value {target}"
        )));
    }

    let sf = find_max_sunflower(family, low)?.expect("the value k - t is attained");
    let m = sf.indices.len();
    let mut notes = Vec::new();

    if let Some(center) = is_junta(family, low) {
        return Ok(ClassificationResult {
            verdict: Verdict::Junta,
            witness: Witness::Junta { center },
            k,
            t,
            m,
            also_matches: Vec::new(),
            notes,
        });
    }

    let mut matches = all_shape_matches(family, t)?;

    if m < 3 {
        // no 3-petal sunflower: the first two sorted members must expose
        // one of the shapes II, III, IV
        let sorted = sort_nonincreasing(family)?;
        let mut expected = vec![k, t];
        expected.extend(std::iter::repeat_n(t - 1, n - 2));
        if sorted.values != expected {
            return Err(SpidError::TheoremViolation(format!(
                "without a 3-petal sunflower the sorted δ-array should be {expected:?}, got {:?}",
                sorted.values
            )));
        }
        let (a, b) = (sorted.ordering[0], sorted.ordering[1]);
        match analyze_anchor(family, a, b, t)? {
            AnchorOutcome::Match(sm) => {
                if !matches.iter().any(|o| o.verdict == sm.verdict) {
                    matches.push(sm);
                    matches.sort_by_key(|m| m.verdict.precedence());
                }
            }
            AnchorOutcome::CaseOne => {
                return Err(SpidError::TheoremViolation(format!(
                    "anchor ({a}, {b}) meets V' in two (k-t)-spaces although s >= 2"
                )))
            }
            AnchorOutcome::Mismatch(why) => {
                return Err(SpidError::TheoremViolation(format!("anchor ({a}, {b}): {why}")))
            }
        }
    }

    if matches.is_empty() {
        return Err(SpidError::TheoremViolation(
            "extremal non-junta family matches none of the four shapes".into(),
        ));
    }
    let best = matches.remove(0);
    let also_matches: Vec<Verdict> = matches.iter().map(|m| m.verdict).collect();
    if !also_matches.is_empty() {
        notes.push(format!(
            "also has the shape of {}",
            also_matches.iter().map(|v| v.as_str()).collect::<Vec<_>>().join(", ")
        ));
    }
    if let Witness::Pencil {
        v_prime,
        hyperplanes,
        anchor,
        ..
    } = &best.witness
    {
        if hyperplanes.len() == 2 && n == 4 {
            let hits = anchor
                .iter()
                .filter(|&&i| {
                    let c = family.member(i).intersect(v_prime).expect("same ambient");
                    hyperplanes.contains(&c)
                })
                .count();
            notes.push(format!(
                "s = 2, n = 4: {hits} of the two anchor traces on V' coincide with W_1 or W_2"
            ));
        }
    }
    Ok(ClassificationResult {
        verdict: best.verdict,
        witness: best.witness,
        k,
        t,
        m,
        also_matches,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::*;

    #[test]
    fn round_trips_on_small_builds() {
        let cases = [
            (ConstructionParams::ClassII(ClassIIParams::new(2, 3, 2, 4)), Verdict::ClassII),
            (
                ConstructionParams::ClassIII(ClassIIIParams::new(3, 4, 2, 6, 3)),
                Verdict::ClassIII,
            ),
            (
                ConstructionParams::ClassIV(ClassIVParams::new(3, 4, 2, 6, 3)),
                Verdict::ClassIV,
            ),
            (ConstructionParams::ClassI(ClassIParams::new(2, 4, 3, 6, 4)), Verdict::ClassI),
        ];
        for (p, want) in cases {
            let fam = p.build().unwrap();
            let r = classify_extremal(&fam).unwrap();
            assert_eq!(r.verdict, want, "{p:?}: {r:?}");
        }
    }

    #[test]
    fn rejects_non_extremal() {
        let fam = build_remark_example(&RemarkExampleParams::new(2, 6, 4, 2, 6, 3, 5)).unwrap();
        assert!(matches!(classify_extremal(&fam), Err(SpidError::Precondition(_))));
    }
}
