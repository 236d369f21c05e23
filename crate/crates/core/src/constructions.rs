//! Builders for the extremal families and the two-value example with a
//! sharper bound.
//!
//! Every builder lays its independent pieces out on consecutive blocks of
//! standard basis vectors, so the ambient dimension is the sum of the block
//! sizes and every member is spanned by unit vectors plus a few explicit
//! combinations.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SpidError};
use crate::gf::FieldPrime;
use crate::spid::{is_junta, verify_spid, SpidFamily};
use crate::subspace::Subspace;

#[derive(Clone, Copy, Debug)]
struct Block {
    start: usize,
    len: usize,
}

impl Block {
    fn index(&self, i: usize) -> usize {
        assert!(i < self.len, "block index {i} out of range {}", self.len);
        self.start + i
    }

    fn range(&self, from: usize, to: usize) -> std::ops::Range<usize> {
        assert!(from <= to && to <= self.len);
        self.start + from..self.start + to
    }

    fn all(&self) -> std::ops::Range<usize> {
        self.range(0, self.len)
    }
}

/// Consecutive coordinate blocks of a freshly assembled ambient space.
struct Layout {
    field: FieldPrime,
    dim: usize,
    blocks: Vec<Block>,
}

impl Layout {
    fn new(field: FieldPrime) -> Self {
        Self {
            field,
            dim: 0,
            blocks: Vec::new(),
        }
    }

    fn block(&mut self, len: usize) -> Block {
        let b = Block {
            start: self.dim,
            len,
        };
        self.dim += len;
        self.blocks.push(b);
        b
    }

    fn unit(&self, i: usize) -> Vec<u32> {
        let mut v = vec![0; self.dim];
        v[i] = 1;
        v
    }

    fn span(&self, coords: impl IntoIterator<Item = usize>, extra: &[Vec<u32>]) -> Subspace {
        let rows = coords
            .into_iter()
            .map(|i| self.unit(i))
            .chain(extra.iter().cloned());
        Subspace::span(self.field, self.dim, rows).expect("layout vectors are well formed")
    }

    /// Sum of `coeffs[i] * e_{coords[i]}`.
    fn combo(&self, coords: &[usize], coeffs: &[u32]) -> Vec<u32> {
        let mut v = vec![0; self.dim];
        for (&c, &x) in coords.iter().zip(coeffs) {
            v[c] = self.field.add(v[c], x);
        }
        v
    }

    /// The blocks really are independent: their sum has the full dimension.
    fn assert_independent(&self) -> Result<()> {
        let spaces: Vec<Subspace> = self.blocks.iter().map(|b| self.span(b.all(), &[])).collect();
        let total = Subspace::sum_all(&spaces)?
            .map(|s| s.dim())
            .unwrap_or(0);
        let expected: usize = spaces.iter().map(|s| s.dim()).sum();
        if total != expected || total != self.dim {
            return Err(SpidError::TheoremViolation(format!(
                "construction blocks are dependent: span {total}, block total {expected}"
            )));
        }
        Ok(())
    }
}

fn field(q: u32) -> Result<FieldPrime> {
    FieldPrime::new(q)
}

fn check(ok: bool, constraint: &str, detail: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(SpidError::constraint(constraint, detail()))
    }
}

fn check_t(k: usize, t: usize) -> Result<()> {
    check((2..k).contains(&t), "2 <= t <= k - 1", || format!("k = {k}, t = {t}"))
}

/// Scales `v` so that its first nonzero entry is 1.
fn normalize(v: &[u32], f: FieldPrime) -> Option<Vec<u32>> {
    let lead = *v.iter().find(|&&x| x != 0)?;
    let inv = f.inv(lead).ok()?;
    Some(v.iter().map(|&x| f.mul(x, inv)).collect())
}

fn check_partition(n: usize, s: usize, sizes: &[usize]) -> Result<()> {
    check(sizes.len() == s, "class_sizes has s parts", || {
        format!("s = {s}, got {} parts", sizes.len())
    })?;
    check(sizes.iter().all(|&c| c >= 1), "class sizes are positive", || {
        format!("{sizes:?}")
    })?;
    check(sizes.iter().sum::<usize>() + 2 == n, "class sizes sum to n - 2", || {
        format!("n = {n}, sizes {sizes:?}")
    })
}

/// Default split of `n - 2` members into `s` classes: the first class takes
/// everything the others leave over.
pub fn default_class_sizes(n: usize, s: usize) -> Vec<usize> {
    if s == 0 || n < s + 2 {
        return Vec::new();
    }
    let mut sizes = vec![1; s];
    sizes[0] = n - 2 - (s - 1);
    sizes
}

/// Nonincreasing partitions of `total` into exactly `parts` positive parts.
pub fn partitions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, parts: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if rest == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if rest < parts {
            return;
        }
        let hi = max.min(rest - (parts - 1));
        for x in (1..=hi).rev() {
            cur.push(x);
            go(rest - x, parts - 1, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(total, parts, total, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassIParams {
    pub q: u32,
    pub k: usize,
    pub t: usize,
    pub n: usize,
    pub m: usize,
    /// Coordinates of `b_{m+1}, ..., b_{n-1}` over `a_1, ..., a_m`.
    /// `None` puts every `b_j` on `a_1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<Vec<u32>>>,
}

impl ClassIParams {
    pub fn new(q: u32, k: usize, t: usize, n: usize, m: usize) -> Self {
        Self { q, k, t, n, m, b: None }
    }

    /// Normalized coordinate vectors of the `b_j`.
    pub fn b_coords(&self) -> Result<Vec<Vec<u32>>> {
        let f = field(self.q)?;
        let count = self.n.saturating_sub(self.m + 1);
        let raw = match &self.b {
            Some(b) => b.clone(),
            None => {
                let mut a1 = vec![0; self.m];
                if self.m > 0 {
                    a1[0] = 1;
                }
                vec![a1; count]
            }
        };
        check(raw.len() == count, "one b_j for each j in m+1..n-1", || {
            format!("expected {count}, got {}", raw.len())
        })?;
        raw.iter()
            .map(|v| {
                check(v.len() == self.m, "b_j in <a_1, ..., a_m>", || {
                    format!("coordinate vector {v:?} has length {}, expected m = {}", v.len(), self.m)
                })?;
                check(v.iter().all(|&x| x < self.q), "b_j in <a_1, ..., a_m>", || {
                    format!("{v:?} has entries outside GF({})", self.q)
                })?;
                normalize(v, f).ok_or_else(|| {
                    SpidError::constraint("b_j in <a_1, ..., a_m>", "zero vector is not a 1-space")
                })
            })
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        field(self.q)?;
        let (k, t, n, m) = (self.k, self.t, self.n, self.m);
        check_t(k, t)?;
        check(m > 2, "2 < m", || format!("m = {m}"))?;
        check(m <= t + 1, "m <= t + 1", || format!("m = {m}, t = {t}"))?;
        check(m < n, "m <= n - 1", || format!("m = {m}, n = {n}"))?;
        let b = self.b_coords()?;
        if !b.is_empty() {
            let distinct: BTreeSet<&Vec<u32>> = b.iter().collect();
            let repeated = distinct.len() < b.len();
            let on_axis = b.iter().any(|v| v.iter().filter(|&&x| x != 0).count() == 1);
            check(
                repeated || on_axis,
                "(i) two b_j coincide or (ii) some b_j equals an a_i",
                || format!("b = {b:?}"),
            )?;
        }
        Ok(())
    }

    pub fn ambient_dim(&self) -> usize {
        (self.k - self.t) + self.m * self.t + (self.n - 1 - self.m) * (self.t - 1) + (self.t + 1 - self.m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassIIParams {
    pub q: u32,
    pub k: usize,
    pub t: usize,
    pub n: usize,
}

impl ClassIIParams {
    pub fn new(q: u32, k: usize, t: usize, n: usize) -> Self {
        Self { q, k, t, n }
    }

    pub fn validate(&self) -> Result<()> {
        field(self.q)?;
        check_t(self.k, self.t)?;
        check(self.n >= 3, "n >= 3", || format!("n = {}", self.n))
    }

    pub fn ambient_dim(&self) -> usize {
        (self.k - self.t + 1) + (2 * self.t - 1) + (self.n - 2) * (self.t - 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassIIIParams {
    pub q: u32,
    pub k: usize,
    pub t: usize,
    pub n: usize,
    pub s: usize,
    pub class_sizes: Vec<usize>,
}

impl ClassIIIParams {
    pub fn new(q: u32, k: usize, t: usize, n: usize, s: usize) -> Self {
        Self {
            q,
            k,
            t,
            n,
            s,
            class_sizes: default_class_sizes(n, s),
        }
    }

    pub fn validate(&self) -> Result<()> {
        field(self.q)?;
        check_t(self.k, self.t)?;
        check(self.n >= 3, "n >= 3", || format!("n = {}", self.n))?;
        check(self.s >= 2 && self.s < self.n, "2 <= s < n", || {
            format!("s = {}, n = {}", self.s, self.n)
        })?;
        check(self.q as usize + 1 >= self.s, "q+1 >= s", || {
            format!("q = {}, s = {}", self.q, self.s)
        })?;
        check_partition(self.n, self.s, &self.class_sizes)
    }

    pub fn ambient_dim(&self) -> usize {
        (self.k - self.t + 2) + (2 * self.t - 2) + (self.n - 2) * (self.t - 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassIVParams {
    pub q: u32,
    pub k: usize,
    pub t: usize,
    pub n: usize,
    pub s: usize,
    pub class_sizes: Vec<usize>,
}

impl ClassIVParams {
    pub fn new(q: u32, k: usize, t: usize, n: usize, s: usize) -> Self {
        Self {
            q,
            k,
            t,
            n,
            s,
            class_sizes: default_class_sizes(n, s),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let f = field(self.q)?;
        check_t(self.k, self.t)?;
        check(self.n >= 3, "n >= 3", || format!("n = {}", self.n))?;
        check(self.s >= 2 && self.s < self.n, "2 <= s < n", || {
            format!("s = {}, n = {}", self.s, self.n)
        })?;
        let d = self.k - self.t + 2;
        let hyperplanes = f.projective_points(d);
        check(
            hyperplanes >= self.s as u128 + 2,
            "(q^(k-t+2) - 1)/(q - 1) >= s + 2",
            || format!("{hyperplanes} hyperplanes available, {} needed", self.s + 2),
        )?;
        check_partition(self.n, self.s, &self.class_sizes)
    }

    pub fn ambient_dim(&self) -> usize {
        (self.k - self.t + 2) + self.n * (self.t - 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemarkExampleParams {
    pub q: u32,
    pub k: usize,
    pub t1: usize,
    pub t2: usize,
    pub n: usize,
    pub m: usize,
    pub s: usize,
    /// For `l = s..n-1`, the index `i` (0-based) with `Q_l = <A_i>`.
    /// `None` uses `A_1` throughout.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_choices: Option<Vec<usize>>,
}

impl RemarkExampleParams {
    pub fn new(q: u32, k: usize, t1: usize, t2: usize, n: usize, m: usize, s: usize) -> Self {
        Self {
            q,
            k,
            t1,
            t2,
            n,
            m,
            s,
            q_choices: None,
        }
    }

    pub fn choices(&self) -> Vec<usize> {
        self.q_choices
            .clone()
            .unwrap_or_else(|| vec![0; self.n.saturating_sub(self.s)])
    }

    pub fn validate(&self) -> Result<()> {
        let f = field(self.q)?;
        let (k, t1, t2, n, m, s) = (self.k, self.t1, self.t2, self.n, self.m, self.s);
        check(t2 >= 2, "t2 >= 2", || format!("t2 = {t2}"))?;
        check(t1 > t2 + 1, "t1 > t2 + 1", || format!("t1 = {t1}, t2 = {t2}"))?;
        check(k > t1, "k > t1", || format!("k = {k}, t1 = {t1}"))?;
        check(m + t2 > t1, "t1 - t2 + 1 <= m", || {
            format!("m = {m}, t1 = {t1}, t2 = {t2}")
        })?;
        check(m <= t1 + 1, "m <= t1 + 1", || format!("m = {m}, t1 = {t1}"))?;
        check(m < n, "m <= n - 1", || format!("m = {m}, n = {n}"))?;
        check(m < s && s < n, "m < s < n", || format!("m = {m}, s = {s}, n = {n}"))?;
        let points = f.projective_points(m);
        let needed = (s - m - 1) as u128;
        check(points >= needed, "(q^m - 1)/(q - 1) >= s - m - 1", || {
            format!("{points} points, {needed} needed")
        })?;
        // the b_j must also avoid the m points a_11, ..., a_m1
        check(
            points - m as u128 >= needed,
            "(q^m - 1)/(q - 1) - m >= s - m - 1",
            || format!("{} points off the a_i1, {needed} needed", points - m as u128),
        )?;
        let choices = self.choices();
        check(choices.len() == n - s, "one Q_l for each l in s..n-1", || {
            format!("expected {}, got {}", n - s, choices.len())
        })?;
        check(choices.iter().all(|&i| i < m), "Q_l = <A_i> with i <= m", || {
            format!("{choices:?}")
        })
    }

    pub fn ambient_dim(&self) -> usize {
        let (k, t1, t2, n, m, s) = (self.k, self.t1, self.t2, self.n, self.m, self.s);
        (k - t1) + (t1 + 1 - m) + m * t1 + (s - 1 - m) * (t1 - 1) + (n - s) * t2
    }

    /// `k + (n-1)(t1-1) - (n-s)(t1-t2-1) + 1`.
    pub fn predicted_dim(&self) -> usize {
        let (k, t1, t2, n, s) = (self.k, self.t1, self.t2, self.n, self.s);
        k + (n - 1) * (t1 - 1) + 1 - (n - s) * (t1 - t2 - 1)
    }

    /// The δ-array of the family in its constructed order.
    pub fn expected_delta(&self) -> Vec<usize> {
        let (k, t1, t2, n, m, s) = (self.k, self.t1, self.t2, self.n, self.m, self.s);
        let mut d = vec![k];
        d.extend(std::iter::repeat_n(t1, m - 1));
        d.extend(std::iter::repeat_n(t1 - 1, s - m - 1));
        d.extend(std::iter::repeat_n(t2, n - s));
        d.push(t1 + 1 - m);
        d
    }
}

/// Any of the parameter bundles, tagged by class name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class")]
pub enum ConstructionParams {
    #[serde(rename = "I")]
    ClassI(ClassIParams),
    #[serde(rename = "II")]
    ClassII(ClassIIParams),
    #[serde(rename = "III")]
    ClassIII(ClassIIIParams),
    #[serde(rename = "IV")]
    ClassIV(ClassIVParams),
    #[serde(rename = "remark")]
    Remark(RemarkExampleParams),
}

impl ConstructionParams {
    pub fn name(&self) -> &'static str {
        match self {
            Self::ClassI(_) => "I",
            Self::ClassII(_) => "II",
            Self::ClassIII(_) => "III",
            Self::ClassIV(_) => "IV",
            Self::Remark(_) => "remark",
        }
    }

    pub fn q(&self) -> u32 {
        match self {
            Self::ClassI(p) => p.q,
            Self::ClassII(p) => p.q,
            Self::ClassIII(p) => p.q,
            Self::ClassIV(p) => p.q,
            Self::Remark(p) => p.q,
        }
    }

    pub fn k(&self) -> usize {
        match self {
            Self::ClassI(p) => p.k,
            Self::ClassII(p) => p.k,
            Self::ClassIII(p) => p.k,
            Self::ClassIV(p) => p.k,
            Self::Remark(p) => p.k,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Self::ClassI(p) => p.n,
            Self::ClassII(p) => p.n,
            Self::ClassIII(p) => p.n,
            Self::ClassIV(p) => p.n,
            Self::Remark(p) => p.n,
        }
    }

    /// `(t1, t2)`; consecutive for the four extremal classes.
    pub fn t_pair(&self) -> (usize, usize) {
        match self {
            Self::ClassI(p) => (p.t, p.t - 1),
            Self::ClassII(p) => (p.t, p.t - 1),
            Self::ClassIII(p) => (p.t, p.t - 1),
            Self::ClassIV(p) => (p.t, p.t - 1),
            Self::Remark(p) => (p.t1, p.t2),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::ClassI(p) => p.validate(),
            Self::ClassII(p) => p.validate(),
            Self::ClassIII(p) => p.validate(),
            Self::ClassIV(p) => p.validate(),
            Self::Remark(p) => p.validate(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            Self::ClassI(p) => p.ambient_dim(),
            Self::ClassII(p) => p.ambient_dim(),
            Self::ClassIII(p) => p.ambient_dim(),
            Self::ClassIV(p) => p.ambient_dim(),
            Self::Remark(p) => p.ambient_dim(),
        }
    }

    /// The dimension of `<S>` the construction is designed to reach.
    pub fn predicted_dim(&self) -> usize {
        match self {
            Self::Remark(p) => p.predicted_dim(),
            _ => {
                let (t, _) = self.t_pair();
                self.k() + (self.n() - 1) * (t - 1) + 1
            }
        }
    }

    /// The two intersection dimensions `{k - t1, k - t2}`, ascending.
    pub fn declared_values(&self) -> Vec<usize> {
        let (t1, t2) = self.t_pair();
        vec![self.k() - t1, self.k() - t2]
    }

    /// Intersection dimensions actually realised by the build, ascending.
    ///
    /// Some legal bundles only realise the smaller value: Class I with
    /// `m = n - 1` (no `b_j`), Class II with `n = 3`, and Classes III/IV
    /// when every class has a single member.
    pub fn intersection_values(&self) -> Vec<usize> {
        let vals = self.declared_values();
        let larger_attained = match self {
            Self::ClassI(p) => p.n > p.m + 1,
            Self::ClassII(p) => p.n >= 4,
            Self::ClassIII(p) => p.class_sizes.iter().any(|&c| c >= 2),
            Self::ClassIV(p) => p.class_sizes.iter().any(|&c| c >= 2),
            Self::Remark(_) => true,
        };
        if larger_attained {
            vals
        } else {
            vals[..1].to_vec()
        }
    }

    pub fn is_two_valued(&self) -> bool {
        self.intersection_values().len() == 2
    }

    pub fn build(&self) -> Result<SpidFamily> {
        match self {
            Self::ClassI(p) => build_class_i(p),
            Self::ClassII(p) => build_class_ii(p),
            Self::ClassIII(p) => build_class_iii(p),
            Self::ClassIV(p) => build_class_iv(p),
            Self::Remark(p) => build_remark_example(p),
        }
    }
}

/// Checks a finished build against what its parameters promise.
fn finish(params: ConstructionParams, members: Vec<Subspace>) -> Result<SpidFamily> {
    let family = SpidFamily::new(members)?;
    let name = params.name();
    let fail = |what: String| SpidError::TheoremViolation(format!("{name} build: {what}"));
    if family.ambient_dim() != params.ambient_dim() {
        return Err(fail(format!(
            "ambient {} but expected {}",
            family.ambient_dim(),
            params.ambient_dim()
        )));
    }
    verify_spid(&family, &params.intersection_values())
        .map_err(|e| fail(e.to_string()))?;
    let dim = family.dim_span();
    if dim != params.predicted_dim() {
        return Err(fail(format!("dim <S> = {dim}, expected {}", params.predicted_dim())));
    }
    let low = params.declared_values()[0];
    if is_junta(&family, low).is_some() {
        return Err(fail(format!("family is a {low}-junta")));
    }
    Ok(family)
}

pub fn build_class_i(p: &ClassIParams) -> Result<SpidFamily> {
    p.validate()?;
    let f = field(p.q)?;
    let (k, t, n, m) = (p.k, p.t, p.n, p.m);
    let mut lay = Layout::new(f);
    let vp = lay.block(k - t);
    let ns: Vec<Block> = (0..m).map(|_| lay.block(t)).collect();
    let ms: Vec<Block> = (m + 1..n).map(|_| lay.block(t - 1)).collect();
    let x = lay.block(t + 1 - m);
    lay.assert_independent()?;

    let a: Vec<usize> = ns.iter().map(|b| b.index(0)).collect();
    let mut members: Vec<Subspace> = ns.iter().map(|nb| lay.span(vp.all().chain(nb.all()), &[])).collect();
    for (mb, coeffs) in ms.iter().zip(p.b_coords()?) {
        let b = lay.combo(&a, &coeffs);
        members.push(lay.span(vp.all().chain(mb.all()), &[b]));
    }
    let w = vp.range(0, k - t - 1);
    members.push(lay.span(w.chain(a.iter().copied()).chain(x.all()), &[]));
    finish(ConstructionParams::ClassI(p.clone()), members)
}

pub fn build_class_ii(p: &ClassIIParams) -> Result<SpidFamily> {
    p.validate()?;
    let f = field(p.q)?;
    let (k, t, n) = (p.k, p.t, p.n);
    let mut lay = Layout::new(f);
    let w = lay.block(k - t + 1);
    let xs = lay.block(2 * t - 1);
    let ms: Vec<Block> = (3..=n).map(|_| lay.block(t - 1)).collect();
    lay.assert_independent()?;

    // X_1 and X_2 share the middle vector of the X block
    let w1 = w.range(0, k - t);
    let w2 = w.range(1, k - t + 1);
    let mut members = vec![
        lay.span(w1.chain(xs.range(0, t)), &[]),
        lay.span(w2.chain(xs.range(t - 1, 2 * t - 1)), &[]),
    ];
    members.extend(ms.iter().map(|mb| lay.span(w.all().chain(mb.all()), &[])));
    finish(ConstructionParams::ClassII(p.clone()), members)
}

pub fn build_class_iii(p: &ClassIIIParams) -> Result<SpidFamily> {
    p.validate()?;
    let f = field(p.q)?;
    let (k, t, n) = (p.k, p.t, p.n);
    let d = k - t + 2;
    let mut lay = Layout::new(f);
    let vp = lay.block(d);
    let xs = lay.block(2 * t - 2);
    let ms: Vec<Block> = (3..=n).map(|_| lay.block(t - 1)).collect();
    lay.assert_independent()?;

    let w = vp.range(0, d - 2);
    let pencil_base = lay.span([vp.index(d - 2), vp.index(d - 1)], &[]);
    let pencil = pencil_base.enumerate_one_spaces();
    let w0 = vp.range(1, d);

    let mut members = vec![
        lay.span(w.clone().chain(xs.range(0, t)), &[]),
        lay.span(w0.chain(xs.range(t - 1, 2 * t - 2)), &[]),
    ];
    let mut next = ms.iter();
    for (class, &size) in p.class_sizes.iter().enumerate() {
        let u = pencil[class].basis()[0].clone();
        for _ in 0..size {
            let mb = next.next().expect("sizes sum to n - 2");
            members.push(lay.span(w.clone().chain(mb.all()), std::slice::from_ref(&u)));
        }
    }
    finish(ConstructionParams::ClassIII(p.clone()), members)
}

/// Linear forms on `F^d` defining the hyperplanes `V_0, W_0, W_1, ...`: the
/// last three coordinate forms first, then the remaining forms in
/// canonical order.
fn class_iv_forms(f: FieldPrime, d: usize, count: usize) -> Vec<Vec<u32>> {
    let mut forms: Vec<Vec<u32>> = (1..=3)
        .map(|back| {
            let mut v = vec![0; d];
            v[d - back] = 1;
            v
        })
        .collect();
    for line in Subspace::full(f, d).enumerate_one_spaces() {
        if forms.len() >= count {
            break;
        }
        let v = line.basis()[0].clone();
        if !forms.contains(&v) {
            forms.push(v);
        }
    }
    forms.truncate(count);
    forms
}

/// Basis of the kernel of a normalized form, as vectors of `F^d`.
fn kernel_basis(f: FieldPrime, form: &[u32]) -> Vec<Vec<u32>> {
    let d = form.len();
    let p = form.iter().position(|&x| x != 0).expect("nonzero form");
    (0..d)
        .filter(|&j| j != p)
        .map(|j| {
            let mut v = vec![0; d];
            v[j] = 1;
            v[p] = f.neg(f.mul(form[j], f.inv(form[p]).expect("nonzero")));
            v
        })
        .collect()
}

pub fn build_class_iv(p: &ClassIVParams) -> Result<SpidFamily> {
    p.validate()?;
    let f = field(p.q)?;
    let (k, t) = (p.k, p.t);
    let d = k - t + 2;
    let mut lay = Layout::new(f);
    let vp = lay.block(d);
    let ms: Vec<Block> = (0..p.n).map(|_| lay.block(t - 1)).collect();
    lay.assert_independent()?;

    let coords: Vec<usize> = vp.all().collect();
    let hyperplanes: Vec<Subspace> = class_iv_forms(f, d, p.s + 2)
        .iter()
        .map(|form| {
            let rows: Vec<Vec<u32>> = kernel_basis(f, form)
                .iter()
                .map(|v| lay.combo(&coords, v))
                .collect();
            lay.span([], &rows)
        })
        .collect();
    let common = hyperplanes[1..]
        .iter()
        .try_fold(hyperplanes[0].clone(), |acc, h| acc.intersect(h))?;
    if common.dim() >= k - t {
        return Err(SpidError::TheoremViolation(format!(
            "Class IV hyperplanes share a {}-space",
            common.dim()
        )));
    }

    let with = |h: &Subspace, mb: &Block| -> Result<Subspace> { h.sum(&lay.span(mb.all(), &[])) };
    let mut members = vec![with(&hyperplanes[0], &ms[0])?, with(&hyperplanes[1], &ms[1])?];
    let mut next = ms[2..].iter();
    for (class, &size) in p.class_sizes.iter().enumerate() {
        for _ in 0..size {
            members.push(with(&hyperplanes[class + 2], next.next().expect("sizes sum to n - 2"))?);
        }
    }
    finish(ConstructionParams::ClassIV(p.clone()), members)
}

pub fn build_remark_example(p: &RemarkExampleParams) -> Result<SpidFamily> {
    p.validate()?;
    let f = field(p.q)?;
    let (k, t1, t2, n, m, s) = (p.k, p.t1, p.t2, p.n, p.m, p.s);
    let mut lay = Layout::new(f);
    let vp = lay.block(k - t1);
    let x = lay.block(t1 + 1 - m);
    let ns: Vec<Block> = (0..m).map(|_| lay.block(t1)).collect();
    let ms: Vec<Block> = (m + 1..s).map(|_| lay.block(t1 - 1)).collect();
    let ps: Vec<Block> = (s..n).map(|_| lay.block(t2)).collect();
    lay.assert_independent()?;

    let a: Vec<usize> = ns.iter().map(|b| b.index(0)).collect();
    let a_points: BTreeSet<Subspace> = a.iter().map(|&i| lay.span([i], &[])).collect();
    let bs: Vec<Vec<u32>> = lay
        .span(a.iter().copied(), &[])
        .enumerate_one_spaces()
        .into_iter()
        .filter(|pt| !a_points.contains(pt))
        .take(s - m - 1)
        .map(|pt| pt.basis()[0].clone())
        .collect();
    if bs.len() < s - m - 1 {
        return Err(SpidError::constraint(
            "(q^m - 1)/(q - 1) - m >= s - m - 1",
            format!("only {} points available", bs.len()),
        ));
    }

    let mut members: Vec<Subspace> = ns.iter().map(|nb| lay.span(vp.all().chain(nb.all()), &[])).collect();
    for (mb, b) in ms.iter().zip(&bs) {
        members.push(lay.span(vp.all().chain(mb.all()), std::slice::from_ref(b)));
    }
    for (pb, &i) in ps.iter().zip(&p.choices()) {
        let a_i = ns[i].range(0, t1 - t2);
        members.push(lay.span(vp.all().chain(a_i).chain(pb.all()), &[]));
    }
    let w = vp.range(0, k - t1 - 1);
    members.push(lay.span(w.chain(a.iter().copied()).chain(x.all()), &[]));
    finish(ConstructionParams::Remark(p.clone()), members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spid::delta_array;

    fn natural(fam: &SpidFamily) -> Vec<usize> {
        delta_array(fam, &(0..fam.len()).collect::<Vec<_>>()).unwrap().values
    }

    #[test]
    fn class_i_examples() {
        let fam = build_class_i(&ClassIParams::new(2, 4, 3, 5, 3)).unwrap();
        assert_eq!(fam.dim_span(), 13);
        assert_eq!(natural(&fam), vec![4, 3, 3, 2, 1]);

        let fam = build_class_i(&ClassIParams::new(2, 3, 2, 4, 3)).unwrap();
        assert_eq!(fam.dim_span(), 7);
        assert_eq!(natural(&fam), vec![3, 2, 2, 0]);
    }

    #[test]
    fn class_i_rejections() {
        let err = build_class_i(&ClassIParams::new(2, 4, 3, 5, 2)).unwrap_err();
        assert!(err.to_string().contains("2 < m"), "{err}");
        let mut p = ClassIParams::new(3, 5, 3, 6, 3);
        // two distinct off-axis points: neither (i) nor (ii)
        p.b = Some(vec![vec![1, 1, 0], vec![1, 2, 0]]);
        assert!(build_class_i(&p).is_err());
        p.b = Some(vec![vec![1, 1, 0], vec![2, 2, 0]]);
        assert!(build_class_i(&p).is_ok());
        p.b = Some(vec![vec![0, 0, 2], vec![1, 2, 0]]);
        assert!(build_class_i(&p).is_ok());
        p.b = Some(vec![vec![0, 0, 0], vec![1, 2, 0]]);
        assert!(build_class_i(&p).is_err());
    }

    #[test]
    fn class_ii_examples() {
        let fam = build_class_ii(&ClassIIParams::new(2, 3, 2, 4)).unwrap();
        assert_eq!(fam.dim_span(), 7);
        assert_eq!(fam.intersection(2, 3).dim(), 2);
        assert_eq!(natural(&fam), vec![3, 2, 1, 1]);
        let fam = build_class_ii(&ClassIIParams::new(2, 3, 2, 3)).unwrap();
        assert_eq!(fam.dim_span(), 6);
        assert!(is_junta(&fam, 0).is_some());
        assert!(is_junta(&fam, 1).is_none());
    }

    #[test]
    fn class_iii_examples() {
        let mut p = ClassIIIParams::new(2, 3, 2, 4, 2);
        assert_eq!(p.class_sizes, vec![1, 1]);
        assert_eq!(build_class_iii(&p).unwrap().dim_span(), 7);
        p = ClassIIIParams::new(2, 4, 3, 5, 3);
        assert_eq!(build_class_iii(&p).unwrap().dim_span(), 13);
        p = ClassIIIParams::new(2, 4, 3, 6, 4);
        let err = build_class_iii(&p).unwrap_err();
        assert!(err.to_string().contains("q+1 >= s"), "{err}");
        p = ClassIIIParams::new(3, 5, 3, 7, 3);
        p.class_sizes = vec![2, 2, 1];
        let fam = build_class_iii(&p).unwrap();
        assert_eq!(natural(&fam), vec![5, 3, 2, 2, 2, 2, 2]);
    }

    #[test]
    fn class_iv_examples() {
        let fam = build_class_iv(&ClassIVParams::new(2, 3, 2, 4, 2)).unwrap();
        assert_eq!(fam.ambient_dim(), 7);
        assert_eq!(fam.dim_span(), 7);
        assert!(build_class_iv(&ClassIVParams::new(2, 3, 2, 5, 5)).is_err());
        let mut p = ClassIVParams::new(2, 3, 2, 7, 5);
        p.class_sizes = vec![1, 1, 1, 1, 1];
        assert!(build_class_iv(&p).is_ok());
        let err = build_class_iv(&ClassIVParams::new(2, 3, 2, 8, 6)).unwrap_err();
        assert!(err.to_string().contains("s + 2"), "{err}");
    }

    #[test]
    fn two_value_example() {
        let p = RemarkExampleParams::new(2, 6, 4, 2, 6, 3, 5);
        let fam = build_remark_example(&p).unwrap();
        assert_eq!(fam.dim_span(), 21);
        assert_eq!(natural(&fam), p.expected_delta());
        assert_eq!(p.expected_delta(), vec![6, 4, 4, 3, 2, 2]);
        assert!(build_remark_example(&RemarkExampleParams::new(2, 6, 3, 2, 6, 3, 5)).is_err());
    }

    #[test]
    fn two_value_example_needs_points_off_the_axes() {
        // q = 2, m = 3: seven points, three of them are a_i1, four remain
        let ok = RemarkExampleParams::new(2, 7, 4, 2, 10, 3, 8);
        assert!(build_remark_example(&ok).is_ok());
        let short = RemarkExampleParams::new(2, 7, 4, 2, 11, 3, 9);
        let err = build_remark_example(&short).unwrap_err();
        assert!(err.to_string().contains("- m >= s - m - 1"), "{err}");
    }

    #[test]
    fn partitions_are_nonincreasing_and_complete() {
        assert_eq!(partitions(4, 2), vec![vec![3, 1], vec![2, 2]]);
        assert_eq!(partitions(3, 3), vec![vec![1, 1, 1]]);
        assert!(partitions(2, 3).is_empty());
        assert_eq!(partitions(7, 3).len(), 4);
    }

    #[test]
    fn attainment_matches_builds() {
        let bundles = [
            ConstructionParams::ClassI(ClassIParams::new(2, 3, 2, 4, 3)),
            ConstructionParams::ClassII(ClassIIParams::new(2, 3, 2, 3)),
            ConstructionParams::ClassIII(ClassIIIParams::new(2, 3, 2, 4, 2)),
            ConstructionParams::ClassIV(ClassIVParams::new(3, 4, 2, 5, 2)),
        ];
        for b in bundles {
            let fam = b.build().unwrap();
            assert_eq!(fam.profile().attained(), b.intersection_values(), "{b:?}");
        }
    }

    #[test]
    fn params_round_trip_through_json() {
        let p = ConstructionParams::ClassIII(ClassIIIParams::new(3, 4, 2, 6, 3));
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.contains("\"class\":\"III\""));
        assert_eq!(serde_json::from_str::<ConstructionParams>(&s).unwrap(), p);
    }
}
