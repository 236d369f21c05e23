//! Subspaces of GF(p)^N held in reduced row echelon form.
//!
//! The RREF basis is canonical, so structural equality of two [`Subspace`]
//! values is equality of the spaces they span.

use std::fmt;

use crate::error::{Result, SpidError};
use crate::gf::{FVector, FieldPrime};

/// Reduces `rows` to reduced row echelon form over `field`, dropping zero
/// rows. Returns the pivot columns.
pub(crate) fn rref_rows(rows: &mut Vec<Vec<u32>>, field: FieldPrime, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == rows.len() {
            break;
        }
        let Some(found) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, found);
        let lead = rows[rank][col];
        if lead != 1 {
            let inv = field.inv(lead).expect("nonzero pivot");
            for x in rows[rank][col..].iter_mut() {
                *x = field.mul(*x, inv);
            }
        }
        let pivot_row = std::mem::take(&mut rows[rank]);
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank {
                continue;
            }
            let c = row[col];
            if c == 0 {
                continue;
            }
            for (x, &y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                if y != 0 {
                    *x = field.sub(*x, field.mul(c, y));
                }
            }
        }
        rows[rank] = pivot_row;
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    pivots
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    field: FieldPrime,
    ambient_dim: usize,
    rows: Vec<Vec<u32>>,
}

impl Subspace {
    /// The null subspace of `field^ambient_dim` (a `0 x N` basis).
    pub fn zero(field: FieldPrime, ambient_dim: usize) -> Self {
        Self {
            field,
            ambient_dim,
            rows: Vec::new(),
        }
    }

    pub fn full(field: FieldPrime, ambient_dim: usize) -> Self {
        let rows = (0..ambient_dim)
            .map(|i| FVector::unit(ambient_dim, i).into_entries())
            .collect();
        Self {
            field,
            ambient_dim,
            rows,
        }
    }

    /// Canonical subspace spanned by `rows`.
    pub fn span<I>(field: FieldPrime, ambient_dim: usize, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<u32>>,
    {
        let mut rows: Vec<Vec<u32>> = rows.into_iter().collect();
        for row in &rows {
            if row.len() != ambient_dim {
                return Err(SpidError::AmbientMismatch {
                    left: ambient_dim,
                    right: row.len(),
                });
            }
            if let Some(&bad) = row.iter().find(|&&e| e >= field.order()) {
                return Err(SpidError::InvalidEntry {
                    value: bad,
                    modulus: field.order(),
                });
            }
        }
        rref_rows(&mut rows, field, ambient_dim);
        Ok(Self {
            field,
            ambient_dim,
            rows,
        })
    }

    /// Canonicalizes a non-empty list of vectors; the ambient dimension is
    /// taken from the vectors themselves.
    pub fn rref(rows: &[FVector], field: FieldPrime) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(SpidError::Precondition(
                "rref of an empty list needs an explicit ambient dimension; use Subspace::zero".into(),
            ));
        };
        Self::span(
            field,
            first.ambient_dim(),
            rows.iter().map(|v| v.entries().to_vec()),
        )
    }

    pub fn field(&self) -> FieldPrime {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rows of the canonical basis matrix.
    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn basis_vectors(&self) -> Vec<FVector> {
        self.rows.iter().cloned().map(FVector::from_raw).collect()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows
            .iter()
            .map(|r| r.iter().position(|&x| x != 0).expect("nonzero row"))
            .collect()
    }

    /// Checks the RREF invariants of the stored basis.
    pub fn is_canonical(&self) -> bool {
        let mut last: Option<usize> = None;
        for row in &self.rows {
            if row.len() != self.ambient_dim {
                return false;
            }
            let Some(p) = row.iter().position(|&x| x != 0) else {
                return false;
            };
            if row[p] != 1 || last.is_some_and(|l| p <= l) {
                return false;
            }
            if self.rows.iter().filter(|r| r[p] != 0).count() != 1 {
                return false;
            }
            last = Some(p);
        }
        true
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        if self.field != other.field {
            return Err(SpidError::FieldMismatch {
                left: self.field.order(),
                right: other.field.order(),
            });
        }
        if self.ambient_dim != other.ambient_dim {
            return Err(SpidError::AmbientMismatch {
                left: self.ambient_dim,
                right: other.ambient_dim,
            });
        }
        Ok(())
    }

    /// `<U, W>`.
    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let mut rows: Vec<Vec<u32>> = self.rows.iter().chain(&other.rows).cloned().collect();
        rref_rows(&mut rows, self.field, self.ambient_dim);
        Ok(Subspace {
            field: self.field,
            ambient_dim: self.ambient_dim,
            rows,
        })
    }

    /// `U ∩ W` by Zassenhaus: reduce `[[U, U], [W, 0]]`; rows whose left
    /// half vanishes carry a basis of the intersection on the right.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let n = self.ambient_dim;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.field, n));
        }
        let mut block: Vec<Vec<u32>> = Vec::with_capacity(self.dim() + other.dim());
        for r in &self.rows {
            let mut row = r.clone();
            row.extend_from_slice(r);
            block.push(row);
        }
        for r in &other.rows {
            let mut row = r.clone();
            row.resize(2 * n, 0);
            block.push(row);
        }
        rref_rows(&mut block, self.field, 2 * n);
        let mut rows: Vec<Vec<u32>> = block
            .into_iter()
            .filter(|r| r[..n].iter().all(|&x| x == 0))
            .map(|r| r[n..].to_vec())
            .collect();
        rref_rows(&mut rows, self.field, n);
        Ok(Subspace {
            field: self.field,
            ambient_dim: n,
            rows,
        })
    }

    /// Dimension of `U ∩ W` without building its basis.
    pub fn intersection_dim(&self, other: &Subspace) -> Result<usize> {
        let s = self.sum(other)?;
        Ok(self.dim() + other.dim() - s.dim())
    }

    /// `W ⊆ U`.
    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        Ok(self.sum(other)?.dim() == self.dim())
    }

    pub fn contains_vector(&self, v: &[u32]) -> Result<bool> {
        if v.len() != self.ambient_dim {
            return Err(SpidError::AmbientMismatch {
                left: self.ambient_dim,
                right: v.len(),
            });
        }
        let mut rows = self.rows.clone();
        rows.push(v.to_vec());
        Ok(rref_rows(&mut rows, self.field, self.ambient_dim).len() == self.dim())
    }

    /// Dimension of the image of `U` in `V / M`, i.e. `dim U - dim(U ∩ M)`.
    pub fn quotient_dim(&self, modulus: &Subspace) -> Result<usize> {
        Ok(self.dim() - self.intersection_dim(modulus)?)
    }

    /// Every 1-dimensional subspace of `U`, sorted by canonical
    /// representative.
    pub fn enumerate_one_spaces(&self) -> Vec<Subspace> {
        let r = self.dim();
        let q = self.field.order();
        let mut out = Vec::new();
        // coefficient vectors whose first nonzero entry is 1
        for lead in 0..r {
            let free = r - lead - 1;
            let count = (q as u64).pow(free as u32);
            for code in 0..count {
                let mut coeffs = vec![0u32; r];
                coeffs[lead] = 1;
                let mut c = code;
                for slot in coeffs[lead + 1..].iter_mut() {
                    *slot = (c % q as u64) as u32;
                    c /= q as u64;
                }
                let mut v = vec![0u32; self.ambient_dim];
                for (ci, row) in coeffs.iter().zip(&self.rows) {
                    if *ci == 0 {
                        continue;
                    }
                    for (x, &y) in v.iter_mut().zip(row) {
                        *x = self.field.add(*x, self.field.mul(*ci, y));
                    }
                }
                out.push(Subspace {
                    field: self.field,
                    ambient_dim: self.ambient_dim,
                    rows: vec![v],
                });
            }
        }
        out.sort();
        out
    }

    /// Span of an iterator of subspaces; `None` when the iterator is empty.
    pub fn sum_all<'a, I>(spaces: I) -> Result<Option<Subspace>>
    where
        I: IntoIterator<Item = &'a Subspace>,
    {
        let mut iter = spaces.into_iter();
        let Some(first) = iter.next() else {
            return Ok(None);
        };
        let mut rows = first.rows.clone();
        for s in iter {
            first.check_compatible(s)?;
            rows.extend(s.rows.iter().cloned());
        }
        rref_rows(&mut rows, first.field, first.ambient_dim);
        Ok(Some(Subspace {
            field: first.field,
            ambient_dim: first.ambient_dim,
            rows,
        }))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace[{}^{}, dim {}](", self.field, self.ambient_dim, self.dim())?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            for x in r {
                write!(f, "{x}")?;
            }
        }
        write!(f, ")")
    }
}
