//! Exact rational linear algebra on subspaces of `Q^r`.
//!
//! Every [`Subspace`] is stored by its reduced row-echelon basis with unit
//! pivots, so two subspaces are equal exactly when their stored rows are.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Builds the rational `num/den`. Panics if `den` is zero.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(value.into())
}

/// Row-reduces `rows` in place to reduced row-echelon form and returns the
/// pivot columns. Zero rows are dropped.
pub fn rref(rows: &mut Vec<Vec<Rational>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == rows.len() {
            break;
        }
        let Some(found) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, found);
        let inv = rows[rank][col].recip();
        if !inv.is_one() {
            for x in rows[rank][col..].iter_mut() {
                *x *= &inv;
            }
        }
        let (head, tail) = rows.split_at_mut(rank);
        let (pivot_row, rest) = tail.split_first_mut().unwrap();
        for row in head.iter_mut().chain(rest.iter_mut()) {
            if row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    pivots
}

/// Rank of a matrix given by its rows.
pub fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    let mut work = rows.to_vec();
    rref(&mut work, ncols).len()
}

/// A linear subspace of `Q^ambient_dim`, held in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<Vec<Rational>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            rows: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let rows = (0..ambient)
            .map(|i| {
                (0..ambient)
                    .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        Subspace { ambient, rows }
    }

    /// Span of `generators`, canonicalized.
    pub fn span(generators: Vec<Vec<Rational>>, ambient: usize) -> Result<Self> {
        if let Some(bad) = generators.iter().find(|g| g.len() != ambient) {
            return Err(Error::DimensionMismatch {
                expected: ambient,
                found: bad.len(),
            });
        }
        let mut rows = generators;
        rref(&mut rows, ambient);
        Ok(Subspace { ambient, rows })
    }

    /// Span of integer generators.
    pub fn span_int(generators: &[&[i64]], ambient: usize) -> Result<Self> {
        Self::span(
            generators
                .iter()
                .map(|g| g.iter().map(|&x| int(x)).collect())
                .collect(),
            ambient,
        )
    }

    pub fn line(vector: &[i64]) -> Self {
        Self::span_int(&[vector], vector.len()).expect("length matches by construction")
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        Ok(())
    }

    fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows
            .iter()
            .map(|row| row.iter().position(|x| !x.is_zero()).unwrap())
    }

    /// Membership test. With unit pivots, `v` lies in the row space iff
    /// `v - sum_k v[pivot_k] * row_k` vanishes.
    pub fn contains(&self, v: &[Rational]) -> bool {
        if v.len() != self.ambient {
            return false;
        }
        let mut residual = v.to_vec();
        for (row, p) in self.rows.iter().zip(self.pivots().collect::<Vec<_>>()) {
            let c = residual[p].clone();
            if c.is_zero() {
                continue;
            }
            for (x, r) in residual.iter_mut().zip(row) {
                *x -= &c * r;
            }
        }
        residual.iter().all(Zero::is_zero)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient
            && self.dim() <= other.dim()
            && self.rows.iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        if other.is_zero() || self.is_full() {
            return Ok(self.clone());
        }
        if self.is_zero() || other.is_full() {
            return Ok(other.clone());
        }
        let rows = self.rows.iter().chain(&other.rows).cloned().collect();
        Subspace::span(rows, self.ambient)
    }

    /// Orthogonal complement under the standard bilinear pairing, i.e. the
    /// null space of the basis matrix.
    pub fn annihilator(&self) -> Subspace {
        let pivots: Vec<usize> = self.pivots().collect();
        let mut rows = Vec::with_capacity(self.ambient - pivots.len());
        for free in (0..self.ambient).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Rational::zero(); self.ambient];
            v[free] = Rational::one();
            for (row, &p) in self.rows.iter().zip(&pivots) {
                v[p] = -row[free].clone();
            }
            rows.push(v);
        }
        Subspace::span(rows, self.ambient).expect("null-space vectors have ambient length")
    }

    /// Intersection via `(A^perp + B^perp)^perp`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_full() {
            return Ok(self.clone());
        }
        if other.is_zero() || self.is_full() {
            return Ok(other.clone());
        }
        Ok(self.annihilator().sum(&other.annihilator())?.annihilator())
    }

    /// `self ⊕ other` inside `Q^(a+b)`, with `self` in the leading block.
    pub fn direct_sum(&self, other: &Subspace) -> Subspace {
        let ambient = self.ambient + other.ambient;
        let mut rows = Vec::with_capacity(self.dim() + other.dim());
        for r in &self.rows {
            let mut v = r.clone();
            v.resize(ambient, Rational::zero());
            rows.push(v);
        }
        for r in &other.rows {
            let mut v = vec![Rational::zero(); self.ambient];
            v.extend(r.iter().cloned());
            rows.push(v);
        }
        Subspace::span(rows, ambient).expect("block rows have the summed length")
    }

    /// `self ⊗ other` inside `Q^(a*b)`, coordinates ordered row-major
    /// (index `i * b + k`).
    pub fn tensor(&self, other: &Subspace) -> Subspace {
        let ambient = self.ambient * other.ambient;
        let rows = self
            .rows
            .iter()
            .flat_map(|x| {
                other
                    .rows
                    .iter()
                    .map(move |y| x.iter().flat_map(|a| y.iter().map(move |b| a * b)).collect())
            })
            .collect();
        Subspace::span(rows, ambient).expect("kronecker rows have the product length")
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace({}; ", self.ambient)?;
        fmt::Display::fmt(self, f)?;
        write!(f, ")")
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{{")?;
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "(")?;
            for (k, x) in row.iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        write!(f, "}}")
    }
}
