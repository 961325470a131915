//! The two-term resolution of a rank-2 toric bundle on `P^2`,
//!
//! ```text
//! 0 -> O(a_0^2 D_0 + a_1^2 D_1 + a_2^2 D_2) -> ⊕_{(i,j,k) ∈ A} O(a_i^2 D_i + a_j^2 D_j + a_k^1 D_k) -> E -> 0
//! ```
//!
//! with `A = {(0,1,2), (1,2,0), (2,0,1)}`, checked numerically against the
//! filtration side through rank, `c_1` and `χ` of every twist.

use std::fmt;
use std::ops::RangeInclusive;

use serde::Serialize;

use crate::bundle::ToricBundle;
use crate::chern::c1;
use crate::cohomology::euler_char;
use crate::error::Result;
use crate::fan::Divisor;
use crate::shifting::ShiftingIndices;

const CYCLIC: [[usize; 3]; 3] = [[0, 1, 2], [1, 2, 0], [2, 0, 1]];

/// `χ(O(k))` on `P^2`.
pub fn chi_line(k: i64) -> i64 {
    (k + 1) * (k + 2) / 2
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerlingResolution {
    pub left: Divisor,
    pub middle: [Divisor; 3],
}

pub fn perling_resolution(delta: &ShiftingIndices) -> PerlingResolution {
    let (lower, upper) = (delta.lower(), delta.upper());
    let middle = CYCLIC.map(|[i, j, k]| {
        let mut c = vec![0; 3];
        c[i] = lower[i];
        c[j] = lower[j];
        c[k] = upper[k];
        Divisor(c)
    });
    PerlingResolution {
        left: Divisor(lower.to_vec()),
        middle,
    }
}

impl PerlingResolution {
    pub fn rank(&self) -> i64 {
        self.middle.len() as i64 - 1
    }

    /// `Σ deg(middle) - deg(left)`.
    pub fn c1(&self) -> i64 {
        self.middle.iter().map(Divisor::degree).sum::<i64>() - self.left.degree()
    }

    /// `χ(E(t))` read off the resolution.
    pub fn chi(&self, t: i64) -> i64 {
        self.middle.iter().map(|m| chi_line(m.degree() + t)).sum::<i64>() - chi_line(self.left.degree() + t)
    }
}

impl fmt::Display for PerlingResolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0 -> O({}) -> ", self.left)?;
        for (i, m) in self.middle.iter().enumerate() {
            if i > 0 {
                write!(f, " ⊕ ")?;
            }
            write!(f, "O({m})")?;
        }
        write!(f, " -> E -> 0")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChiCheck {
    pub twist: i64,
    pub from_cohomology: i64,
    pub from_resolution: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionReport {
    pub delta: ShiftingIndices,
    pub rank: i64,
    pub c1_filtration: i64,
    pub c1_resolution: i64,
    pub chi: Vec<ChiCheck>,
}

impl ResolutionReport {
    pub fn rank_ok(&self) -> bool {
        self.rank == 2
    }

    pub fn c1_ok(&self) -> bool {
        self.c1_filtration == self.c1_resolution
    }

    pub fn chi_ok(&self) -> bool {
        self.chi.iter().all(|c| c.from_cohomology == c.from_resolution)
    }

    pub fn ok(&self) -> bool {
        self.rank_ok() && self.c1_ok() && self.chi_ok()
    }
}

impl fmt::Display for ResolutionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |b: bool| if b { "ok" } else { "MISMATCH" };
        writeln!(f, "rank: 3 - 1 = {} [{}]", self.rank, mark(self.rank_ok()))?;
        writeln!(
            f,
            "c1: filtrations {} / resolution {} [{}]",
            self.c1_filtration,
            self.c1_resolution,
            mark(self.c1_ok())
        )?;
        for c in &self.chi {
            writeln!(
                f,
                "chi(E({})): cohomology {} / resolution {} [{}]",
                c.twist,
                c.from_cohomology,
                c.from_resolution,
                mark(c.from_cohomology == c.from_resolution)
            )?;
        }
        Ok(())
    }
}

/// Checks over the twists `-5..=5`.
pub fn verify_resolution(delta: &ShiftingIndices) -> Result<ResolutionReport> {
    verify_resolution_over(delta, -5..=5)
}

pub fn verify_resolution_over(
    delta: &ShiftingIndices,
    twists: RangeInclusive<i64>,
) -> Result<ResolutionReport> {
    let res = perling_resolution(delta);
    let e = ToricBundle::from_shifting_indices(delta);
    let chi = twists
        .map(|t| {
            Ok(ChiCheck {
                twist: t,
                from_cohomology: euler_char(&e.twist_hyperplane(t))?,
                from_resolution: res.chi(t),
            })
        })
        .collect::<Result<_>>()?;
    Ok(ResolutionReport {
        delta: *delta,
        rank: res.rank(),
        c1_filtration: c1(&e),
        c1_resolution: res.c1(),
        chi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn delta(t: [i64; 6]) -> ShiftingIndices {
        ShiftingIndices::from_tuple(t).unwrap()
    }

    #[test]
    fn twisted_euler_sequence() {
        let r = perling_resolution(&delta([-1, 0, -1, 0, 0, 1]));
        assert_eq!(r.left, Divisor(vec![-1, -1, 0]));
        let mut mids: Vec<_> = r.middle.to_vec();
        mids.sort();
        let mut expected = vec![Divisor(vec![-1, -1, 1]), Divisor(vec![-1, 0, 0]), Divisor(vec![0, -1, 0])];
        expected.sort();
        assert_eq!(mids, expected);
        assert_eq!(
            r.to_string(),
            "0 -> O(-D0-D1) -> O(-D0-D1+D2) ⊕ O(-D1) ⊕ O(-D0) -> E -> 0"
        );
    }

    #[test]
    fn semistable_example() {
        let r = perling_resolution(&delta([-1, 0, -1, 0, 0, 2]));
        assert_eq!(r.left, Divisor(vec![-1, -1, 0]));
        assert_eq!(r.middle[0], Divisor(vec![-1, -1, 2]));
        assert_eq!(r.chi(0), 1);
        let report = verify_resolution(&delta([-1, 0, -1, 0, 0, 2])).unwrap();
        assert!(report.ok(), "{report}");
        assert_eq!(report.chi.len(), 11);
    }

    #[test]
    fn substituted_rule() {
        let r = perling_resolution(&delta([-1, 0, -1, 1, 0, 1]));
        assert_eq!(r.middle[0], Divisor(vec![-1, -1, 1]));
        assert_eq!(r.middle[1], Divisor(vec![0, -1, 0]));
        assert_eq!(r.middle[2], Divisor(vec![-1, 1, 0]));
        assert_eq!(r.rank(), 2);
        let report = verify_resolution(&delta([-1, 0, -1, 1, 0, 1])).unwrap();
        assert!(report.ok(), "{report}");
    }

    #[test]
    fn c1_sides_agree_for_tangent_twist() {
        let report = verify_resolution(&delta([-1, 0, -1, 0, 0, 1])).unwrap();
        assert_eq!(report.c1_filtration, report.c1_resolution);
        assert!(report.ok());
    }
}
