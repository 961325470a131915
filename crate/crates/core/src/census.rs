//! Non-split rank-2 toric bundles on `P^2` with `H^1(E(dt)) = 0` for all
//! `t`, counted up to `O(dt)` twists.
//!
//! Every class has a unique representative in `SI(d)`: shifting indices with
//! `a_0^2 = a_1^2 = -1`, `a_0^1, a_1^1 >= 0`, `0 <= a_2^2 < a_2^1` and
//! `a_0^1 + a_1^1 + a_2^1 <= d - 1`.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::bundle::ToricBundle;
use crate::cohomology::{hp_chain, support_box};
use crate::error::{Error, Result};
use crate::shifting::ShiftingIndices;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CensusType {
    /// Already in `SI(d-1)`.
    I,
    /// `O(1)`-twist of an entry of `SI(d-1) \ SI(d-2)`.
    II,
    /// New band configuration with lower indices `(-1,-1,0)`.
    III,
}

impl fmt::Display for CensusType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CensusType::I => "I",
            CensusType::II => "II",
            CensusType::III => "III",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CensusEntry {
    pub delta: ShiftingIndices,
    pub d: i64,
    pub kind: CensusType,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalized {
    Entry(CensusEntry),
    NotAcm,
}

impl Normalized {
    pub fn entry(self) -> Option<CensusEntry> {
        match self {
            Normalized::Entry(e) => Some(e),
            Normalized::NotAcm => None,
        }
    }
}

fn check_d(d: i64, min: i64) -> Result<()> {
    if d < min {
        return Err(Error::InvalidD {
            d,
            reason: if min == 1 { "d must be positive" } else { "d must be at least 2" },
        });
    }
    Ok(())
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -(-a).div_euclid(b)
}

/// Combinatorial d-aCM test.
///
/// `H^1(E(dt)) ≠ 0` for some `t` iff some `j_i ∈ (a_i^2, a_i^1]` has
/// `j_0 + j_1 + j_2 ≡ 0 (mod d)`. The `j_i` range over integer intervals, so
/// their sums fill `[L, U]` with `L = Σ (a_i^2 + 1)` and `U = Σ a_i^1`; the
/// bundle is d-aCM iff that interval holds no multiple of `d`.
pub fn is_d_acm_fast(delta: &ShiftingIndices, d: i64) -> Result<bool> {
    check_d(d, 1)?;
    let (lo, hi) = (delta.min_band_sum(), delta.max_band_sum());
    Ok(hi.div_euclid(d) < ceil_div(lo, d))
}

/// Twists `t` for which the middle-degree support of `E(dt)` can be
/// nonempty.
fn oracle_twist_range(e: &ToricBundle, d: i64) -> Option<(i64, i64)> {
    let lo: Option<i64> = e.filtrations().iter().map(|f| f.last_full().map(|x| x + 1)).sum();
    let hi: Option<i64> = e.filtrations().iter().map(|f| f.last_nonzero()).sum();
    let (lo, hi) = (lo?, hi?);
    let (first, last) = (ceil_div(-hi, d), (-lo).div_euclid(d));
    (first <= last).then_some((first, last))
}

fn middle_cohomology_vanishes(e: &ToricBundle) -> Result<bool> {
    for p in 1..e.fan().n() {
        for m in support_box(e, p)?.characters() {
            if hp_chain(e, p, &m)? != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// d-aCM test by computing `H^p(E(dt))`, `0 < p < n`, over every twist
/// where it can be nonzero. One twist past each end of that range is also
/// computed and must vanish.
pub fn is_d_acm_oracle(e: &ToricBundle, d: i64) -> Result<bool> {
    check_d(d, 1)?;
    if e.fan().n() < 2 {
        return Ok(true);
    }
    let Some((first, last)) = oracle_twist_range(e, d) else {
        // the margin twists of an empty range still have to vanish
        return Ok(true);
    };
    for t in [first - 1, last + 1] {
        assert!(
            middle_cohomology_vanishes(&e.twist_hyperplane(d * t))?,
            "middle cohomology outside the derived twist range at t = {t}"
        );
    }
    for t in first..=last {
        if !middle_cohomology_vanishes(&e.twist_hyperplane(d * t))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Canonical `SI(d)` representative of the class of `delta`, or
/// [`Normalized::NotAcm`].
///
/// A principal twist `(c_0, c_1, -c_0-c_1)` first brings `a_0^2 = a_1^2 = -1`;
/// then ray 2 is shifted by the unique multiple of `d` with `a_2^2 >= 0` and
/// `Σ a_i^1 <= d - 1`. Such a multiple lies in an interval of length
/// `d - 2 - (U - L) < d`, so there is at most one, and there is one exactly
/// when the fast test passes.
pub fn normalize(delta: &ShiftingIndices, d: i64) -> Result<Normalized> {
    check_d(d, 2)?;
    let lower = delta.lower();
    let c0 = -1 - lower[0];
    let c1 = -1 - lower[1];
    let shifted = delta.shifted([c0, c1, -c0 - c1]);
    let a22 = shifted.lower()[2];
    let upper_sum = shifted.max_band_sum();
    let t_min = ceil_div(-a22, d);
    let t_max = (d - 1 - upper_sum).div_euclid(d);
    if t_min > t_max {
        return Ok(Normalized::NotAcm);
    }
    assert_eq!(t_min, t_max, "normalizing twist must be unique for {delta}, d = {d}");
    let canonical = shifted.shifted([0, 0, d * t_min]);
    debug_assert!(in_si(&canonical, d));
    Ok(Normalized::Entry(CensusEntry {
        delta: canonical,
        d,
        kind: classify_type(&canonical, d)?,
    }))
}

/// Membership in `SI(d)`.
pub fn in_si(delta: &ShiftingIndices, d: i64) -> bool {
    let (lower, upper) = (delta.lower(), delta.upper());
    lower[0] == -1
        && lower[1] == -1
        && upper[0] >= 0
        && upper[1] >= 0
        && lower[2] >= 0
        && upper[2] > lower[2]
        && delta.max_band_sum() < d
}

/// Type I/II/III of an `SI(d)` entry.
pub fn classify_type(delta: &ShiftingIndices, d: i64) -> Result<CensusType> {
    check_d(d, 2)?;
    if !in_si(delta, d) {
        return Err(Error::NotInCensus {
            delta: delta.to_string(),
            d,
        });
    }
    Ok(if delta.max_band_sum() < d - 1 {
        CensusType::I
    } else if delta.lower()[2] > 0 {
        CensusType::II
    } else {
        CensusType::III
    })
}

/// All of `SI(d)`, sorted lexicographically by the 6-tuple.
pub fn enumerate_si(d: i64) -> Result<Vec<CensusEntry>> {
    check_d(d, 2)?;
    let budget = d - 1;
    let mut out = Vec::new();
    for a01 in 0..=budget {
        for a11 in 0..=budget - a01 {
            for a22 in 0..budget - a01 - a11 {
                for a21 in a22 + 1..=budget - a01 - a11 {
                    let delta = ShiftingIndices::new([-1, -1, a22], [a01, a11, a21])?;
                    out.push(CensusEntry {
                        delta,
                        d,
                        kind: classify_type(&delta, d)?,
                    });
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// `(d-1) d (d+1) (d+2) / 24`.
pub fn count_closed(d: i64) -> Result<u128> {
    check_d(d, 2)?;
    let d = d as u128;
    Ok((d - 1) * d * (d + 1) * (d + 2) / 24)
}

/// `S(2) = 1`, `S(3) = 5`, `S(d) = 2 S(d-1) - S(d-2) + C(d, 2)`.
pub fn count_recurrence(d: i64) -> Result<u128> {
    check_d(d, 2)?;
    let (mut prev, mut cur) = (1u128, 5u128);
    if d == 2 {
        return Ok(prev);
    }
    for k in 4..=d as u128 {
        let next = 2 * cur - prev + k * (k - 1) / 2;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Every tuple with `a_i^2 ∈ [-1, d]` and `a_i^1 - a_i^2 ∈ [1, d + 1]`.
/// All of `SI(d)` lies inside.
pub fn census_box(d: i64) -> Vec<ShiftingIndices> {
    let lows: Vec<i64> = (-1..=d).collect();
    let bands: Vec<i64> = (1..=d + 1).collect();
    let mut out = Vec::with_capacity((lows.len() * bands.len()).pow(3));
    for &l0 in &lows {
        for &b0 in &bands {
            for &l1 in &lows {
                for &b1 in &bands {
                    for &l2 in &lows {
                        for &b2 in &bands {
                            out.push(
                                ShiftingIndices::new([l0, l1, l2], [l0 + b0, l1 + b1, l2 + b2])
                                    .expect("positive bands"),
                            );
                        }
                    }
                }
            }
        }
    }
    out
}

/// Normalizes every d-aCM tuple of [`census_box`] (as decided by `is_acm`)
/// and collects the distinct representatives.
pub fn brute_force_census<F>(d: i64, is_acm: F) -> Result<BTreeSet<ShiftingIndices>>
where
    F: Fn(&ShiftingIndices) -> Result<bool> + Sync,
{
    check_d(d, 2)?;
    let found: Vec<Option<ShiftingIndices>> = census_box(d)
        .par_iter()
        .map(|delta| -> Result<Option<ShiftingIndices>> {
            if !is_acm(delta)? {
                return Ok(None);
            }
            Ok(normalize(delta, d)?.entry().map(|e| e.delta))
        })
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::Fan;

    fn delta(t: [i64; 6]) -> ShiftingIndices {
        ShiftingIndices::from_tuple(t).unwrap()
    }

    #[test]
    fn fast_examples() {
        assert!(is_d_acm_fast(&delta([-1, 0, -1, 0, 0, 1]), 2).unwrap());
        assert!(!is_d_acm_fast(&delta([-1, 0, -1, 0, 0, 1]), 1).unwrap());
        for d in 1..8 {
            assert!(!is_d_acm_fast(&delta([-1, 0, -1, 0, -1, 0]), d).unwrap());
        }
        assert!(is_d_acm_fast(&delta([-1, 0, -1, 0, 0, 1]), 0).is_err());
    }

    #[test]
    fn oracle_examples() {
        let t = ToricBundle::tangent(Fan::plane());
        assert!(is_d_acm_oracle(&t, 2).unwrap());
        assert!(is_d_acm_oracle(&t.twist_hyperplane(-2), 2).unwrap());
        assert!(!is_d_acm_oracle(&t, 1).unwrap());
        let l = |t| ToricBundle::hyperplane_power(Fan::plane(), t);
        let split = l(2).direct_sum(&l(-5)).unwrap();
        for d in 1..5 {
            assert!(is_d_acm_oracle(&split, d).unwrap());
        }
    }

    #[test]
    fn normalize_examples() {
        let target = delta([-1, 0, -1, 0, 0, 1]);
        let n = normalize(&delta([0, 1, 0, 1, 0, 1]), 2).unwrap().entry().unwrap();
        assert_eq!(n.delta, target);
        let n = normalize(&delta([-1, 0, 0, 1, -1, 0]), 2).unwrap().entry().unwrap();
        assert_eq!(n.delta, target);
        assert_eq!(normalize(&delta([-1, 0, -1, 0, -1, 0]), 3).unwrap(), Normalized::NotAcm);
        for e in enumerate_si(5).unwrap() {
            assert_eq!(normalize(&e.delta, 5).unwrap(), Normalized::Entry(e));
        }
    }

    #[test]
    fn small_lists() {
        let si2: Vec<_> = enumerate_si(2).unwrap().into_iter().map(|e| e.delta).collect();
        assert_eq!(si2, vec![delta([-1, 0, -1, 0, 0, 1])]);
        let si3: Vec<_> = enumerate_si(3).unwrap().into_iter().map(|e| e.delta).collect();
        assert_eq!(
            si3,
            vec![
                delta([-1, 0, -1, 0, 0, 1]),
                delta([-1, 0, -1, 0, 0, 2]),
                delta([-1, 0, -1, 0, 1, 2]),
                delta([-1, 0, -1, 1, 0, 1]),
                delta([-1, 1, -1, 0, 0, 1]),
            ]
        );
        assert_eq!(enumerate_si(4).unwrap().len(), 15);
    }

    #[test]
    fn counts() {
        assert_eq!(count_closed(2).unwrap(), 1);
        assert_eq!(count_closed(3).unwrap(), 5);
        assert_eq!(count_closed(4).unwrap(), 15);
        assert_eq!(count_closed(10).unwrap(), 495);
        for d in 2..=30 {
            assert_eq!(count_recurrence(d).unwrap(), count_closed(d).unwrap());
        }
        assert!(count_closed(1).is_err());
        assert!(count_recurrence(0).is_err());
    }

    #[test]
    fn classification() {
        assert_eq!(classify_type(&delta([-1, 0, -1, 0, 0, 1]), 3).unwrap(), CensusType::I);
        assert_eq!(classify_type(&delta([-1, 0, -1, 0, 1, 2]), 3).unwrap(), CensusType::II);
        assert_eq!(classify_type(&delta([-1, 0, -1, 0, 0, 2]), 3).unwrap(), CensusType::III);
        assert!(matches!(
            classify_type(&delta([0, 1, -1, 0, 0, 1]), 3),
            Err(Error::NotInCensus { .. })
        ));
    }

    #[test]
    fn type_three_count_is_binomial() {
        for d in 2..=12 {
            let n3 = enumerate_si(d)
                .unwrap()
                .iter()
                .filter(|e| e.kind == CensusType::III)
                .count() as i64;
            assert_eq!(n3, d * (d - 1) / 2);
        }
    }

    #[test]
    fn brute_force_with_fast_test_small() {
        for d in 2..=3 {
            let found = brute_force_census(d, |x| is_d_acm_fast(x, d)).unwrap();
            let expected: BTreeSet<_> = enumerate_si(d).unwrap().into_iter().map(|e| e.delta).collect();
            assert_eq!(found, expected);
        }
    }
}
