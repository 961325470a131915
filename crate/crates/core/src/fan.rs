//! The fan of `P^n`: rays `e_0, ..., e_{n-1}` and `-(e_0 + ... + e_{n-1})`,
//! with every proper subset of rays spanning a cone.

use std::fmt;

use crate::error::{Error, Result};

/// A cone of the fan, as an ascending list of ray indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone(Vec<usize>);

impl Cone {
    pub fn new(mut rays: Vec<usize>) -> Self {
        rays.sort_unstable();
        rays.dedup();
        Cone(rays)
    }

    pub fn zero() -> Self {
        Cone(Vec::new())
    }

    pub fn rays(&self) -> &[usize] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "}}")
    }
}

/// A face of a cone together with its sign in the boundary map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedFace {
    pub face: Cone,
    pub sign: i8,
}

/// Signed boundary of a cone. The face omitting the ray at position `i`
/// (positions counted from 0 in ascending order) carries sign `(-1)^i`.
pub fn boundary(cone: &Cone) -> Result<Vec<SignedFace>> {
    if cone.dim() == 0 {
        return Err(Error::EmptyCone);
    }
    Ok((0..cone.dim())
        .map(|i| {
            let mut rays = cone.0.clone();
            rays.remove(i);
            SignedFace {
                face: Cone(rays),
                sign: if i % 2 == 0 { 1 } else { -1 },
            }
        })
        .collect())
}

/// A torus character `m` in `M = Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character(pub Vec<i64>);

impl fmt::Display for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// A torus-invariant divisor `sum_i l_i D_i`, one coefficient per ray.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Divisor(pub Vec<i64>);

impl Divisor {
    pub fn zero(rays: usize) -> Self {
        Divisor(vec![0; rays])
    }

    /// `coeff * D_ray` on a fan with `rays` rays.
    pub fn single(rays: usize, ray: usize, coeff: i64) -> Self {
        let mut c = vec![0; rays];
        c[ray] = coeff;
        Divisor(c)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    /// Degree under `D_i ~ H`.
    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn negate(&self) -> Divisor {
        Divisor(self.0.iter().map(|x| -x).collect())
    }

    pub fn add(&self, other: &Divisor) -> Divisor {
        Divisor(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for Divisor {
    /// Writes e.g. `-D0-D1+2D2`, or `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.unsigned_abs();
            if mag == 1 {
                write!(f, "{sign}D{i}")?;
            } else {
                write!(f, "{sign}{mag}D{i}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The complete fan of `P^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fan {
    n: usize,
}

impl Fan {
    pub fn projective(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidFanDimension);
        }
        Ok(Fan { n })
    }

    pub fn plane() -> Self {
        Fan { n: 2 }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_rays(&self) -> usize {
        self.n + 1
    }

    fn check_ray(&self, index: usize) -> Result<()> {
        if index > self.n {
            return Err(Error::RayOutOfRange {
                index,
                rays: self.num_rays(),
            });
        }
        Ok(())
    }

    /// Primitive generator `u_i`.
    pub fn ray(&self, index: usize) -> Result<Vec<i64>> {
        self.check_ray(index)?;
        Ok(if index < self.n {
            (0..self.n).map(|k| i64::from(k == index)).collect()
        } else {
            vec![-1; self.n]
        })
    }

    /// `<m, u_i>`.
    pub fn pairing(&self, m: &Character, index: usize) -> Result<i64> {
        self.check_ray(index)?;
        if m.0.len() != self.n {
            return Err(Error::CharacterLength {
                expected: self.n,
                found: m.0.len(),
            });
        }
        Ok(if index < self.n {
            m.0[index]
        } else {
            -m.0.iter().sum::<i64>()
        })
    }

    /// All pairings `<m, u_0>, ..., <m, u_n>`. These always sum to zero.
    pub fn pairings(&self, m: &Character) -> Result<Vec<i64>> {
        (0..self.num_rays()).map(|i| self.pairing(m, i)).collect()
    }

    /// The character with prescribed pairings on rays `0..n`.
    pub fn character_from_pairings(&self, js: &[i64]) -> Character {
        Character(js[..self.n].to_vec())
    }

    /// Cones of dimension `k`, in lexicographic order.
    pub fn cones(&self, k: usize) -> Result<Vec<Cone>> {
        if k > self.n {
            return Err(Error::ConeDimOutOfRange { k, n: self.n });
        }
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(k);
        subsets(self.num_rays(), k, 0, &mut current, &mut out);
        Ok(out)
    }

    pub fn maximal_cones(&self) -> Vec<Cone> {
        self.cones(self.n).expect("n is in range")
    }

    pub fn check_divisor(&self, d: &Divisor) -> Result<()> {
        if d.0.len() != self.num_rays() {
            return Err(Error::DivisorLength {
                expected: self.num_rays(),
                found: d.0.len(),
            });
        }
        Ok(())
    }
}

fn subsets(total: usize, k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Cone>) {
    if current.len() == k {
        out.push(Cone(current.clone()));
        return;
    }
    for i in start..total {
        current.push(i);
        subsets(total, k, i + 1, current, out);
        current.pop();
    }
}
