//! Families of k-spaces with prescribed pairwise intersection dimensions.
//!
//! A family is a SPID for a value set `L` when every pair of members meets in
//! a dimension from `L` and every value of `L` is realised by at least one
//! pair. The δ-array of an ordering records how much each member adds to the
//! span of its predecessors.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Result, SpidError};
use crate::gf::FieldPrime;
use crate::subspace::Subspace;

/// Largest family handed to the exhaustive sunflower search.
pub const SUNFLOWER_SEARCH_CAP: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpidFamily {
    field: FieldPrime,
    ambient_dim: usize,
    k: usize,
    members: Vec<Subspace>,
}

impl SpidFamily {
    /// Builds a family from at least two pairwise distinct subspaces of equal
    /// dimension in a common ambient space.
    pub fn new(members: Vec<Subspace>) -> Result<Self> {
        if members.len() < 2 {
            return Err(SpidError::InvalidFamily(format!(
                "a family needs at least two members, got {}",
                members.len()
            )));
        }
        let field = members[0].field();
        let ambient_dim = members[0].ambient_dim();
        let k = members[0].dim();
        for (i, m) in members.iter().enumerate() {
            if m.field() != field {
                return Err(SpidError::FieldMismatch {
                    left: field.order(),
                    right: m.field().order(),
                });
            }
            if m.ambient_dim() != ambient_dim {
                return Err(SpidError::AmbientMismatch {
                    left: ambient_dim,
                    right: m.ambient_dim(),
                });
            }
            if m.dim() != k {
                return Err(SpidError::InvalidFamily(format!(
                    "member {i} has dimension {} but member 0 has dimension {k}",
                    m.dim()
                )));
            }
        }
        if k == 0 {
            return Err(SpidError::InvalidFamily("members must have positive dimension".into()));
        }
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                if members[i] == members[j] {
                    return Err(SpidError::InvalidFamily(format!(
                        "members {i} and {j} are the same subspace"
                    )));
                }
            }
        }
        Ok(Self {
            field,
            ambient_dim,
            k,
            members,
        })
    }

    pub fn field(&self) -> FieldPrime {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn member(&self, i: usize) -> &Subspace {
        &self.members[i]
    }

    pub fn into_members(self) -> Vec<Subspace> {
        self.members
    }

    /// `<S>`.
    pub fn span(&self) -> Subspace {
        self.span_of(0..self.len())
    }

    pub fn dim_span(&self) -> usize {
        self.span().dim()
    }

    /// Span of the members with the given indices (the null space when empty).
    pub fn span_of<I: IntoIterator<Item = usize>>(&self, indices: I) -> Subspace {
        Subspace::sum_all(indices.into_iter().map(|i| &self.members[i]))
            .expect("members share an ambient space")
            .unwrap_or_else(|| Subspace::zero(self.field, self.ambient_dim))
    }

    pub fn intersection(&self, i: usize, j: usize) -> Subspace {
        self.members[i]
            .intersect(&self.members[j])
            .expect("members share an ambient space")
    }

    pub fn intersection_dim(&self, i: usize, j: usize) -> usize {
        self.members[i]
            .intersection_dim(&self.members[j])
            .expect("members share an ambient space")
    }

    /// Same members in the order `ordering[0], ordering[1], ...`.
    pub fn reordered(&self, ordering: &[usize]) -> Result<SpidFamily> {
        check_permutation(ordering, self.len())?;
        Ok(SpidFamily {
            field: self.field,
            ambient_dim: self.ambient_dim,
            k: self.k,
            members: ordering.iter().map(|&i| self.members[i].clone()).collect(),
        })
    }

    /// Whether `dim V >= n (k - l) + l` for the smallest attained
    /// intersection dimension `l`; below this an l-sunflower of maximal
    /// dimension may not fit in the ambient space.
    pub fn meets_ambient_assumption(&self) -> bool {
        let l = self.profile().attained().first().copied().unwrap_or(0);
        self.ambient_dim >= self.len() * (self.k - l) + l
    }

    /// All pairwise intersection dimensions.
    pub fn profile(&self) -> IntersectionProfile {
        let n = self.len();
        let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                pairs.push(PairDim {
                    i,
                    j,
                    dim: self.intersection_dim(i, j),
                });
            }
        }
        IntersectionProfile::new(self.k, pairs)
    }
}

fn check_permutation(ordering: &[usize], n: usize) -> Result<()> {
    if ordering.len() != n {
        return Err(SpidError::InvalidPermutation(format!(
            "expected {n} indices, got {}",
            ordering.len()
        )));
    }
    let mut seen = vec![false; n];
    for &i in ordering {
        if i >= n || std::mem::replace(&mut seen[i], true) {
            return Err(SpidError::InvalidPermutation(format!(
                "{ordering:?} is not a permutation of 0..{n}"
            )));
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairDim {
    pub i: usize,
    pub j: usize,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionProfile {
    pub k: usize,
    /// One entry per unordered pair, `i < j`, in lexicographic order.
    pub pairs: Vec<PairDim>,
    /// Distinct co-dimensions `k - l`, largest first.
    pub t_values: Vec<usize>,
}

impl IntersectionProfile {
    fn new(k: usize, pairs: Vec<PairDim>) -> Self {
        let attained: BTreeSet<usize> = pairs.iter().map(|p| p.dim).collect();
        let t_values = attained.iter().map(|&l| k - l).collect();
        Self { k, pairs, t_values }
    }

    /// Distinct attained intersection dimensions, ascending.
    pub fn attained(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.pairs.iter().map(|p| p.dim).collect();
        set.into_iter().collect()
    }

    /// Number of pairs meeting in dimension `l`.
    pub fn count(&self, l: usize) -> usize {
        self.pairs.iter().filter(|p| p.dim == l).count()
    }
}

/// Why a family fails to be a SPID for a given value set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpidViolation {
    pub allowed: Vec<usize>,
    pub offending: Vec<PairDim>,
    pub unattained: Vec<usize>,
}

impl fmt::Display for SpidViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "not a SPID for values {:?}", self.allowed)?;
        for p in &self.offending {
            write!(f, "; pair ({}, {}) meets in dimension {}", p.i, p.j, p.dim)?;
        }
        for l in &self.unattained {
            write!(f, "; value {l} is not attained by any pair")?;
        }
        Ok(())
    }
}

/// Checks the family against the value set `values`, returning the full
/// profile on success.
pub fn verify_spid(family: &SpidFamily, values: &[usize]) -> Result<IntersectionProfile> {
    let allowed: BTreeSet<usize> = values.iter().copied().collect();
    let profile = family.profile();
    let offending: Vec<PairDim> = profile
        .pairs
        .iter()
        .filter(|p| !allowed.contains(&p.dim))
        .copied()
        .collect();
    let unattained: Vec<usize> = allowed
        .iter()
        .filter(|&&l| profile.count(l) == 0)
        .copied()
        .collect();
    if offending.is_empty() && unattained.is_empty() {
        Ok(profile)
    } else {
        Err(SpidError::NotSpid(SpidViolation {
            allowed: allowed.into_iter().collect(),
            offending,
            unattained,
        }))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaArray {
    pub values: Vec<usize>,
    /// `ordering[j]` is the index of the member placed at position `j`.
    pub ordering: Vec<usize>,
}

impl DeltaArray {
    pub fn sum(&self) -> usize {
        self.values.iter().sum()
    }

    /// `δ_2 >= δ_3 >= ... >= δ_n`.
    pub fn is_nonincreasing_tail(&self) -> bool {
        self.values.iter().skip(1).collect::<Vec<_>>().windows(2).all(|w| w[0] >= w[1])
    }
}

impl fmt::Display for DeltaArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// δ-array of the family listed in the order `ordering`.
pub fn delta_array(family: &SpidFamily, ordering: &[usize]) -> Result<DeltaArray> {
    check_permutation(ordering, family.len())?;
    let mut span = Subspace::zero(family.field(), family.ambient_dim());
    let mut values = Vec::with_capacity(ordering.len());
    for &i in ordering {
        let next = span.sum(family.member(i))?;
        values.push(next.dim() - span.dim());
        span = next;
    }
    Ok(DeltaArray {
        values,
        ordering: ordering.to_vec(),
    })
}

/// Orders the family so that `t_1 = δ_2 >= δ_3 >= ... >= δ_n`.
///
/// A maximum (k - t_1)-sunflower of maximal dimension goes first. The rest
/// is filled from the back: at each step the remaining member meeting the
/// span of all other not-yet-placed members in the largest dimension is put
/// in the last free slot (lowest index on ties).
pub fn sort_nonincreasing(family: &SpidFamily) -> Result<DeltaArray> {
    let n = family.len();
    if n < 3 {
        return Err(SpidError::Precondition(format!(
            "ordering needs at least three members, got {n}"
        )));
    }
    let k = family.k();
    let min_dim = family
        .profile()
        .pairs
        .iter()
        .map(|p| p.dim)
        .min()
        .expect("n >= 3");
    let sunflower = find_max_sunflower(family, min_dim)?.ok_or_else(|| {
        SpidError::TheoremViolation(format!(
            "no pair realises the minimum intersection dimension {min_dim}"
        ))
    })?;
    debug_assert!(k > min_dim);

    let in_sunflower: BTreeSet<usize> = sunflower.indices.iter().copied().collect();
    let mut remaining: Vec<usize> = (0..n).filter(|i| !in_sunflower.contains(i)).collect();
    let mut back: Vec<usize> = Vec::with_capacity(remaining.len());
    while !remaining.is_empty() {
        let placed: BTreeSet<usize> = back.iter().copied().collect();
        let mut best: Option<(usize, usize)> = None;
        for (pos, &i) in remaining.iter().enumerate() {
            let others = family.span_of((0..n).filter(|&h| h != i && !placed.contains(&h)));
            let d = family.member(i).intersection_dim(&others)?;
            if best.is_none_or(|(_, bd)| d > bd) {
                best = Some((pos, d));
            }
        }
        let (pos, _) = best.expect("remaining is non-empty");
        back.push(remaining.remove(pos));
    }
    let mut ordering = sunflower.indices;
    ordering.extend(back.into_iter().rev());
    delta_array(family, &ordering)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sunflower {
    /// Member indices, ascending.
    pub indices: Vec<usize>,
    pub center: Subspace,
}

/// Largest set of members forming an `center_dim`-sunflower of maximal
/// dimension; the lexicographically least index set wins among maxima.
/// Returns `None` when no pair meets in dimension `center_dim`.
pub fn find_max_sunflower(family: &SpidFamily, center_dim: usize) -> Result<Option<Sunflower>> {
    let n = family.len();
    let k = family.k();
    if center_dim >= k {
        return Err(SpidError::Precondition(format!(
            "sunflower center dimension {center_dim} must be below k = {k}"
        )));
    }
    if n > SUNFLOWER_SEARCH_CAP {
        return Err(SpidError::Precondition(format!(
            "sunflower search is exhaustive and capped at {SUNFLOWER_SEARCH_CAP} members, got {n}"
        )));
    }
    let mut meets: Vec<Vec<Option<Subspace>>> = vec![vec![None; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let c = family.intersection(i, j);
            meets[i][j] = Some(c.clone());
            meets[j][i] = Some(c);
        }
    }
    let petal_gain = k - center_dim;
    let mut search = SunflowerSearch {
        family,
        meets: &meets,
        petal_gain,
        best: None,
    };
    for i in 0..n {
        for j in i + 1..n {
            let center = meets[i][j].as_ref().expect("filled");
            if center.dim() != center_dim {
                continue;
            }
            if search.best.as_ref().is_some_and(|b| b.indices.len() >= n - i) {
                break;
            }
            let span = family.member(i).sum(family.member(j))?;
            let mut chosen = vec![i, j];
            search.grow(&mut chosen, center, &span)?;
        }
    }
    Ok(search.best)
}

struct SunflowerSearch<'a> {
    family: &'a SpidFamily,
    meets: &'a [Vec<Option<Subspace>>],
    petal_gain: usize,
    best: Option<Sunflower>,
}

impl SunflowerSearch<'_> {
    fn grow(&mut self, chosen: &mut Vec<usize>, center: &Subspace, span: &Subspace) -> Result<()> {
        if self.best.as_ref().is_none_or(|b| chosen.len() > b.indices.len()) {
            self.best = Some(Sunflower {
                indices: chosen.clone(),
                center: center.clone(),
            });
        }
        let n = self.family.len();
        let last = *chosen.last().expect("seeded with a pair");
        for h in last + 1..n {
            // even taking every later member cannot beat the incumbent
            let best_len = self.best.as_ref().map_or(0, |b| b.indices.len());
            if chosen.len() + (n - h) <= best_len {
                break;
            }
            if !chosen
                .iter()
                .all(|&x| self.meets[h][x].as_ref() == Some(center))
            {
                continue;
            }
            let next = span.sum(self.family.member(h))?;
            if next.dim() != span.dim() + self.petal_gain {
                continue;
            }
            chosen.push(h);
            self.grow(chosen, center, &next)?;
            chosen.pop();
        }
        Ok(())
    }
}

/// The common center if `subset` is a sunflower of maximal dimension:
/// all pairs meet in the same space `C` and the span has dimension
/// `k + (m - 1)(k - dim C)`.
pub fn is_sunflower_max_dim(subset: &[Subspace]) -> Result<Option<Subspace>> {
    if subset.len() < 2 {
        return Err(SpidError::Precondition("a sunflower needs at least two members".into()));
    }
    let k = subset[0].dim();
    if subset.iter().any(|s| s.dim() != k) {
        return Err(SpidError::Precondition("sunflower members must share a dimension".into()));
    }
    let center = subset[0].intersect(&subset[1])?;
    for i in 0..subset.len() {
        for j in i + 1..subset.len() {
            if (i, j) != (0, 1) && subset[i].intersect(&subset[j])? != center {
                return Ok(None);
            }
        }
    }
    let span = Subspace::sum_all(subset)?.expect("non-empty");
    let m = subset.len();
    if span.dim() == k + (m - 1) * (k - center.dim()) {
        Ok(Some(center))
    } else {
        Ok(None)
    }
}

/// The common intersection of all members when it has dimension at least `l`.
pub fn is_junta(family: &SpidFamily, l: usize) -> Option<Subspace> {
    let common = common_intersection(family);
    (common.dim() >= l).then_some(common)
}

pub fn common_intersection(family: &SpidFamily) -> Subspace {
    family.members()[1..]
        .iter()
        .try_fold(family.member(0).clone(), |acc, m| acc.intersect(m))
        .expect("members share an ambient space")
}
