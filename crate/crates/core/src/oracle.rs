//! Brute-force reference implementations.
//!
//! Nothing here calls into the row reduction of [`crate::subspace`]:
//! ranks come from a separate elimination routine (Fermat inverses, plus a
//! bit-packed path for GF(2)), and subspaces are compared as explicit sets
//! of vectors. `Subspace` values are only used as containers for their
//! basis rows.

use std::collections::BTreeSet;

use crate::error::{Result, SpidError};
use crate::gf::FieldPrime;
use crate::spid::{is_sunflower_max_dim, sort_nonincreasing, DeltaArray, SpidFamily};
use crate::subspace::Subspace;

/// Largest `q^N` for which whole vector sets are materialised.
pub const VECTOR_SET_CAP: u128 = 1 << 14;
/// Largest Gaussian binomial handed to [`enumerate_subspaces`].
pub const ENUMERATION_CAP: u128 = 1_000_000;
/// Largest family for [`exhaustive_ordering_check`].
pub const ORDERING_CAP: usize = 7;
/// Largest family for [`exhaustive_max_sunflower`].
pub const SUBSET_CAP: usize = 12;
/// Largest family size for [`exhaustive_spid_search`].
pub const SEARCH_SIZE_CAP: usize = 4;

/// Caps are on unless `SPIDLAB_ORACLE_CAPS=off`.
pub fn caps_enforced() -> bool {
    std::env::var("SPIDLAB_ORACLE_CAPS").map_or(true, |v| v.trim() != "off")
}

fn cap(what: &'static str, value: u128, limit: u128) -> Result<()> {
    if value > limit && caps_enforced() {
        Err(SpidError::CapExceeded {
            what,
            value,
            cap: limit,
        })
    } else {
        Ok(())
    }
}

fn mulmod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

fn powmod(mut a: u32, mut e: u32, p: u32) -> u32 {
    let mut r = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn invmod(a: u32, p: u32) -> u32 {
    powmod(a, p - 2, p)
}

/// Incrementally built echelon basis; every stored row has a unit pivot.
#[derive(Clone, Debug)]
struct Echelon {
    p: u32,
    rows: Vec<(usize, Vec<u32>)>,
}

impl Echelon {
    fn new(p: u32) -> Self {
        Self { p, rows: Vec::new() }
    }

    fn reduce(&self, v: &mut [u32]) {
        let p = self.p;
        for (piv, row) in &self.rows {
            let c = v[*piv];
            if c != 0 {
                for (x, &y) in v.iter_mut().zip(row) {
                    *x = (*x + p - mulmod(c, y, p)) % p;
                }
            }
        }
    }

    /// Adds `v`; returns whether it was independent of the stored rows.
    fn insert(&mut self, v: &[u32]) -> bool {
        let mut v = v.to_vec();
        self.reduce(&mut v);
        let Some(piv) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = invmod(v[piv], self.p);
        for x in v.iter_mut() {
            *x = mulmod(*x, inv, self.p);
        }
        self.rows.push((piv, v));
        true
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Fully reduced rows ordered by pivot.
    fn into_rref(mut self) -> Vec<Vec<u32>> {
        let p = self.p;
        self.rows.sort_by_key(|(piv, _)| *piv);
        let n = self.rows.len();
        for i in (0..n).rev() {
            let (piv, pivot_row) = self.rows[i].clone();
            for j in 0..i {
                let c = self.rows[j].1[piv];
                if c != 0 {
                    for (x, &y) in self.rows[j].1.iter_mut().zip(&pivot_row) {
                        *x = (*x + p - mulmod(c, y, p)) % p;
                    }
                }
            }
        }
        self.rows.into_iter().map(|(_, r)| r).collect()
    }
}

fn pack2(v: &[u32]) -> u64 {
    v.iter()
        .enumerate()
        .fold(0u64, |acc, (i, &x)| if x & 1 == 1 { acc | (1 << i) } else { acc })
}

/// Rank of a set of rows over GF(p).
pub fn oracle_rank<'a, I>(p: u32, ambient: usize, rows: I) -> usize
where
    I: IntoIterator<Item = &'a [u32]>,
{
    if p == 2 && ambient <= 64 {
        let mut basis: Vec<u64> = Vec::new();
        for r in rows {
            let mut x = pack2(r);
            for &b in &basis {
                x = x.min(x ^ b);
            }
            if x != 0 {
                basis.push(x);
                basis.sort_unstable_by(|a, b| b.cmp(a));
            }
        }
        basis.len()
    } else {
        let mut e = Echelon::new(p);
        for r in rows {
            e.insert(r);
        }
        e.rank()
    }
}

/// Canonical reduced row echelon basis computed by the oracle routine.
pub fn oracle_rref(p: u32, rows: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut e = Echelon::new(p);
    for r in rows {
        e.insert(r);
    }
    e.into_rref()
}

fn rows_of(s: &Subspace) -> impl Iterator<Item = &[u32]> {
    s.basis().iter().map(|r| r.as_slice())
}

/// `dim(U ∩ W)` through the oracle rank and Grassmann's identity.
pub fn oracle_intersection_dim(u: &Subspace, w: &Subspace) -> usize {
    let p = u.field().order();
    let r = oracle_rank(p, u.ambient_dim(), rows_of(u).chain(rows_of(w)));
    u.dim() + w.dim() - r
}

/// A subspace stored as the explicit set of all its vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorSetSubspace {
    p: u32,
    ambient: usize,
    vectors: BTreeSet<Vec<u32>>,
}

impl VectorSetSubspace {
    /// All linear combinations of `rows`.
    pub fn from_rows(p: u32, ambient: usize, rows: &[Vec<u32>]) -> Result<Self> {
        cap("q^N", (p as u128).saturating_pow(ambient as u32), VECTOR_SET_CAP)?;
        let mut vectors = BTreeSet::new();
        vectors.insert(vec![0; ambient]);
        for row in rows {
            let current: Vec<Vec<u32>> = vectors.iter().cloned().collect();
            for v in current {
                for c in 1..p {
                    let w: Vec<u32> = v
                        .iter()
                        .zip(row)
                        .map(|(&a, &b)| (a + mulmod(c, b, p)) % p)
                        .collect();
                    vectors.insert(w);
                }
            }
        }
        Ok(Self { p, ambient, vectors })
    }

    pub fn from_subspace(s: &Subspace) -> Result<Self> {
        Self::from_rows(s.field().order(), s.ambient_dim(), s.basis())
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &BTreeSet<Vec<u32>> {
        &self.vectors
    }

    /// `log_q |S|`.
    pub fn dim(&self) -> usize {
        let mut size = self.vectors.len();
        let mut d = 0;
        while size > 1 {
            assert_eq!(size % self.p as usize, 0, "not the size of a subspace");
            size /= self.p as usize;
            d += 1;
        }
        d
    }

    /// Contains zero and is closed under addition and scaling.
    pub fn is_closed(&self) -> bool {
        let p = self.p;
        if !self.vectors.contains(&vec![0; self.ambient]) {
            return false;
        }
        for a in &self.vectors {
            for c in 1..p {
                let s: Vec<u32> = a.iter().map(|&x| mulmod(c, x, p)).collect();
                if !self.vectors.contains(&s) {
                    return false;
                }
            }
            for b in &self.vectors {
                let s: Vec<u32> = a.iter().zip(b).map(|(&x, &y)| (x + y) % p).collect();
                if !self.vectors.contains(&s) {
                    return false;
                }
            }
        }
        true
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self {
            p: self.p,
            ambient: self.ambient,
            vectors: self.vectors.intersection(&other.vectors).cloned().collect(),
        }
    }

    /// RREF basis of the set, computed by the oracle elimination.
    pub fn canonical_basis(&self) -> Vec<Vec<u32>> {
        let mut e = Echelon::new(self.p);
        let d = self.dim();
        for v in &self.vectors {
            if e.rank() == d {
                break;
            }
            e.insert(v);
        }
        e.into_rref()
    }
}

/// Set intersection of the explicit vector sets of `u` and `w`.
pub fn naive_intersection(u: &Subspace, w: &Subspace) -> Result<VectorSetSubspace> {
    if u.field() != w.field() || u.ambient_dim() != w.ambient_dim() {
        return Err(SpidError::AmbientMismatch {
            left: u.ambient_dim(),
            right: w.ambient_dim(),
        });
    }
    let a = VectorSetSubspace::from_subspace(u)?;
    let b = VectorSetSubspace::from_subspace(w)?;
    Ok(a.intersection(&b))
}

/// `[N choose d]_q` by the product formula; saturates at `u128::MAX`.
pub fn gaussian_binomial(ambient: usize, d: usize, q: u32) -> u128 {
    if d > ambient {
        return 0;
    }
    let q = q as u128;
    let mut acc: u128 = 1;
    for j in 0..d {
        let num = match q.checked_pow((ambient - j) as u32) {
            Some(x) => x - 1,
            None => return u128::MAX,
        };
        let den = q.pow((j + 1) as u32) - 1;
        // acc * num / den is again a Gaussian binomial, hence exact
        acc = match acc.checked_mul(num) {
            Some(x) => x / den,
            None => return u128::MAX,
        };
    }
    acc
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < r - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, r, &mut Vec::new(), &mut out);
    out
}

/// Every `d`-dimensional subspace of `F^N` exactly once, sorted by
/// canonical basis. Built directly from pivot patterns and free entries.
pub fn enumerate_subspaces(ambient: usize, d: usize, field: FieldPrime) -> Result<Vec<Subspace>> {
    let q = field.order();
    cap("Gaussian binomial", gaussian_binomial(ambient, d, q), ENUMERATION_CAP)?;
    let mut out = Vec::new();
    for pivots in combinations(ambient, d) {
        let pivot_set: BTreeSet<usize> = pivots.iter().copied().collect();
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &pc)| {
                let pivot_set = &pivot_set;
                (pc + 1..ambient)
                    .filter(move |c| !pivot_set.contains(c))
                    .map(move |c| (r, c))
            })
            .collect();
        let count = (q as u64).pow(free.len() as u32);
        for code in 0..count {
            let mut rows = vec![vec![0u32; ambient]; d];
            for (r, &pc) in pivots.iter().enumerate() {
                rows[r][pc] = 1;
            }
            let mut c = code;
            for &(r, col) in &free {
                rows[r][col] = (c % q as u64) as u32;
                c /= q as u64;
            }
            out.push(Subspace::span(field, ambient, rows)?);
        }
    }
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct OrderingReport {
    pub t1: usize,
    /// δ-arrays of every ordering with `δ_2 = t1` and a non-increasing tail.
    pub valid_deltas: BTreeSet<Vec<usize>>,
    pub valid_orderings: usize,
    pub sorted: DeltaArray,
    /// δ-array of the sorted ordering recomputed by the oracle.
    pub sorted_oracle_delta: Vec<usize>,
}

impl OrderingReport {
    pub fn sorted_is_valid(&self) -> bool {
        self.sorted_oracle_delta == self.sorted.values && self.valid_deltas.contains(&self.sorted.values)
    }

    pub fn passed(&self) -> bool {
        !self.valid_deltas.is_empty() && self.sorted_is_valid()
    }
}

/// Walks every ordering of the family (pruning prefixes that already break
/// the shape) and checks the output of [`sort_nonincreasing`] against them.
pub fn exhaustive_ordering_check(family: &SpidFamily) -> Result<OrderingReport> {
    let n = family.len();
    cap("family size", n as u128, ORDERING_CAP as u128)?;
    let k = family.k();
    let p = family.field().order();
    let mut min_meet = k;
    for i in 0..n {
        for j in i + 1..n {
            min_meet = min_meet.min(oracle_intersection_dim(family.member(i), family.member(j)));
        }
    }
    let t1 = k - min_meet;

    struct Walk<'a> {
        family: &'a SpidFamily,
        t1: usize,
        used: Vec<bool>,
        delta: Vec<usize>,
        valid: BTreeSet<Vec<usize>>,
        count: usize,
    }
    impl Walk<'_> {
        fn go(&mut self, span: &Echelon) {
            let n = self.family.len();
            if self.delta.len() == n {
                self.valid.insert(self.delta.clone());
                self.count += 1;
                return;
            }
            for i in 0..n {
                if self.used[i] {
                    continue;
                }
                let mut next = span.clone();
                for r in self.family.member(i).basis() {
                    next.insert(r);
                }
                let d = next.rank() - span.rank();
                let pos = self.delta.len();
                let ok = match pos {
                    0 => true,
                    1 => d == self.t1,
                    _ => d <= self.delta[pos - 1],
                };
                if !ok {
                    continue;
                }
                self.used[i] = true;
                self.delta.push(d);
                self.go(&next);
                self.delta.pop();
                self.used[i] = false;
            }
        }
    }
    let mut walk = Walk {
        family,
        t1,
        used: vec![false; n],
        delta: Vec::new(),
        valid: BTreeSet::new(),
        count: 0,
    };
    walk.go(&Echelon::new(p));

    let sorted = sort_nonincreasing(family)?;
    let mut span = Echelon::new(p);
    let mut sorted_oracle_delta = Vec::with_capacity(n);
    for &i in &sorted.ordering {
        let before = span.rank();
        for r in family.member(i).basis() {
            span.insert(r);
        }
        sorted_oracle_delta.push(span.rank() - before);
    }
    Ok(OrderingReport {
        t1,
        valid_deltas: walk.valid,
        valid_orderings: walk.count,
        sorted,
        sorted_oracle_delta,
    })
}

/// Lexicographically least largest subset forming a `center_dim`-sunflower
/// of maximal dimension, by plain subset enumeration.
pub fn exhaustive_max_sunflower(family: &SpidFamily, center_dim: usize) -> Result<Option<Vec<usize>>> {
    let n = family.len();
    cap("family size", n as u128, SUBSET_CAP as u128)?;
    for size in (2..=n).rev() {
        for subset in combinations(n, size) {
            let members: Vec<Subspace> = subset.iter().map(|&i| family.member(i).clone()).collect();
            if let Some(c) = is_sunflower_max_dim(&members)? {
                if c.dim() == center_dim {
                    return Ok(Some(subset));
                }
            }
        }
    }
    Ok(None)
}

/// Stream of all `n`-subsets of the `k`-spaces of `F_q^N` whose pairwise
/// intersection dimensions lie in `values`, each value attained.
pub struct SpidSearch {
    spaces: Vec<Subspace>,
    n: usize,
    values: BTreeSet<usize>,
    /// Candidate lists per depth and the cursor into each.
    cands: Vec<Vec<usize>>,
    cursor: Vec<usize>,
    chosen: Vec<usize>,
    anchored: bool,
    done: bool,
}

impl SpidSearch {
    fn new(spaces: Vec<Subspace>, n: usize, values: &[usize], anchored: bool) -> Self {
        let values: BTreeSet<usize> = values.iter().copied().collect();
        let mut s = Self {
            cands: Vec::new(),
            cursor: Vec::new(),
            chosen: Vec::new(),
            done: spaces.len() < n || n < 2 || values.is_empty(),
            spaces,
            n,
            values,
            anchored,
        };
        if !s.done {
            let first: Vec<usize> = if anchored { vec![0] } else { (0..s.spaces.len()).collect() };
            s.cands.push(first);
            s.cursor.push(0);
        }
        s
    }

    pub fn is_anchored(&self) -> bool {
        self.anchored
    }

    /// Number of `k`-spaces being combined.
    pub fn pool_size(&self) -> usize {
        self.spaces.len()
    }

    fn meets_ok(&self, i: usize, j: usize) -> bool {
        self.values
            .contains(&oracle_intersection_dim(&self.spaces[i], &self.spaces[j]))
    }

    fn all_values_attained(&self) -> bool {
        let mut seen = BTreeSet::new();
        for a in 0..self.chosen.len() {
            for b in a + 1..self.chosen.len() {
                seen.insert(oracle_intersection_dim(
                    &self.spaces[self.chosen[a]],
                    &self.spaces[self.chosen[b]],
                ));
            }
        }
        seen == self.values
    }
}

impl Iterator for SpidSearch {
    type Item = SpidFamily;

    fn next(&mut self) -> Option<SpidFamily> {
        while !self.done {
            let depth = self.cands.len() - 1;
            let pos = self.cursor[depth];
            if pos >= self.cands[depth].len() {
                self.cands.pop();
                self.cursor.pop();
                if self.cands.is_empty() {
                    self.done = true;
                    return None;
                }
                self.chosen.pop();
                continue;
            }
            let idx = self.cands[depth][pos];
            self.cursor[depth] += 1;
            self.chosen.push(idx);
            if self.chosen.len() == self.n {
                let hit = self.all_values_attained();
                let members: Vec<Subspace> = self.chosen.iter().map(|&i| self.spaces[i].clone()).collect();
                self.chosen.pop();
                if hit {
                    return Some(SpidFamily::new(members).expect("distinct equal-dimension spaces"));
                }
                continue;
            }
            // later candidates compatible with everything chosen so far
            let pool: Vec<usize> = if depth == 0 {
                (idx + 1..self.spaces.len()).collect()
            } else {
                self.cands[depth][pos + 1..].to_vec()
            };
            let next: Vec<usize> = pool.into_iter().filter(|&j| self.meets_ok(idx, j)).collect();
            self.cands.push(next);
            self.cursor.push(0);
        }
        None
    }
}

fn search_pool(ambient: usize, k: usize, q: u32, n: usize) -> Result<Vec<Subspace>> {
    cap("search family size", n as u128, SEARCH_SIZE_CAP as u128)?;
    enumerate_subspaces(ambient, k, FieldPrime::new(q)?)
}

/// Every qualifying family, as a lazy stream.
pub fn exhaustive_spid_search(ambient: usize, k: usize, q: u32, n: usize, values: &[usize]) -> Result<SpidSearch> {
    Ok(SpidSearch::new(search_pool(ambient, k, q, n)?, n, values, false))
}

/// Every qualifying family containing the first enumerated `k`-space.
/// Since `GL(N, q)` is transitive on `k`-spaces, this covers every family up
/// to a change of basis, and dimension and junta properties are invariant
/// under such changes.
pub fn anchored_spid_search(ambient: usize, k: usize, q: u32, n: usize, values: &[usize]) -> Result<SpidSearch> {
    Ok(SpidSearch::new(search_pool(ambient, k, q, n)?, n, values, true))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32) -> FieldPrime {
        FieldPrime::new(p).unwrap()
    }

    #[test]
    fn gaussian_counts() {
        assert_eq!(gaussian_binomial(2, 1, 2), 3);
        assert_eq!(gaussian_binomial(4, 2, 2), 35);
        assert_eq!(gaussian_binomial(5, 0, 3), 1);
        assert_eq!(gaussian_binomial(3, 4, 2), 0);
        assert_eq!(gaussian_binomial(7, 3, 2), 11811);
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_subspaces(2, 1, f(2)).unwrap().len(), 3);
        let all = enumerate_subspaces(4, 2, f(2)).unwrap();
        assert_eq!(all.len(), 35);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        let zero = enumerate_subspaces(3, 0, f(3)).unwrap();
        assert_eq!(zero, vec![Subspace::zero(f(3), 3)]);
    }

    #[test]
    fn vector_sets() {
        let u = Subspace::span(f(2), 2, vec![vec![1, 0]]).unwrap();
        let w = Subspace::span(f(2), 2, vec![vec![0, 1]]).unwrap();
        let meet = naive_intersection(&u, &w).unwrap();
        assert_eq!(meet.dim(), 0);
        let same = naive_intersection(&u, &u).unwrap();
        assert_eq!(same.canonical_basis(), u.basis().to_vec());
        let big = VectorSetSubspace::from_subspace(&Subspace::full(f(3), 3)).unwrap();
        assert_eq!(big.len(), 27);
        assert!(big.is_closed());
    }

    #[test]
    fn ranks_agree_between_paths() {
        let rows = [vec![1, 1, 0, 1], vec![0, 1, 1, 1], vec![1, 0, 1, 0]];
        let r = oracle_rank(2, 4, rows.iter().map(|r| r.as_slice()));
        let mut e = Echelon::new(2);
        for row in &rows {
            e.insert(row);
        }
        assert_eq!(r, 2);
        assert_eq!(e.rank(), 2);
    }

    #[test]
    fn search_small_cases() {
        assert_eq!(exhaustive_spid_search(3, 2, 2, 3, &[0]).unwrap().count(), 0);
        let fams: Vec<SpidFamily> = exhaustive_spid_search(4, 2, 2, 3, &[1]).unwrap().collect();
        assert!(!fams.is_empty());
        for fam in &fams {
            assert_eq!(fam.profile().attained(), vec![1]);
        }
    }
}
