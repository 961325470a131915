//! Random bundles and the cross-validation suite run by `toric-acm validate`.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bundle::{Step, ToricBundle};
use crate::census::{
    brute_force_census, census_box, count_closed, count_recurrence, enumerate_si, in_si,
    is_d_acm_fast, is_d_acm_oracle, normalize, CensusType, Normalized,
};
use crate::chern::{c1, chern_total, ChernData};
use crate::cohomology::{h, hp_chain, hp_closed, support_box};
use crate::error::Result;
use crate::fan::{Character, Divisor, Fan};
use crate::linalg::{ratio, Rational, Subspace};
use crate::resolution::{perling_resolution, verify_resolution_over};
use crate::shifting::ShiftingIndices;

pub const DEFAULT_SEED: u64 = 0x5eed_2024;

fn random_entry<R: Rng>(rng: &mut R) -> Rational {
    ratio(rng.gen_range(-3..=3), rng.gen_range(1..=3))
}

fn random_vector<R: Rng>(rng: &mut R, r: usize, pool: &[Vec<Rational>]) -> Vec<Rational> {
    if !pool.is_empty() && rng.gen_bool(0.5) {
        return pool.choose(rng).expect("nonempty pool").clone();
    }
    (0..r).map(|_| random_entry(rng)).collect()
}

/// A random full flag prefix `Q^r = V_0 ⊋ V_1 ⊋ ... ⊋ V_k ⊋ 0` with
/// strictly increasing thresholds in `[-4, 4]`.
fn random_filtration<R: Rng>(rng: &mut R, r: usize, pool: &[Vec<Rational>]) -> Vec<Step> {
    // a random basis, with vectors drawn from a shared pool half of the time
    // so that different rays meet in special position
    let mut basis: Vec<Vec<Rational>> = Vec::with_capacity(r);
    while basis.len() < r {
        let v = random_vector(rng, r, pool);
        let mut candidate = basis.clone();
        candidate.push(v.clone());
        if Subspace::span(candidate, r).expect("ambient matches").dim() == basis.len() + 1 {
            basis.push(v);
        }
    }
    let mut dims: Vec<usize> = (1..r).filter(|_| rng.gen_bool(0.5)).collect();
    dims.push(r);
    dims.sort_unstable_by(|a, b| b.cmp(a));
    let mut thresholds: Vec<i64> = (-4..=4).collect();
    thresholds.shuffle(rng);
    let mut thresholds: Vec<i64> = thresholds[..dims.len()].to_vec();
    thresholds.sort_unstable();
    dims.iter()
        .zip(thresholds)
        .map(|(&k, until)| Step {
            until,
            space: Subspace::span(basis[..k].to_vec(), r).expect("ambient matches"),
        })
        .collect()
}

/// A random bundle of rank `1..=max_rank` on `fan`, with thresholds in
/// `[-4, 4]` and rational subspaces.
pub fn random_bundle<R: Rng>(rng: &mut R, fan: Fan, max_rank: usize) -> ToricBundle {
    let r = rng.gen_range(1..=max_rank.max(1));
    random_bundle_of_rank(rng, fan, r)
}

pub fn random_bundle_of_rank<R: Rng>(rng: &mut R, fan: Fan, r: usize) -> ToricBundle {
    let pool: Vec<Vec<Rational>> = (0..r + 1).map(|_| (0..r).map(|_| random_entry(rng)).collect()).collect();
    let steps = (0..fan.num_rays()).map(|_| random_filtration(rng, r, &pool)).collect();
    ToricBundle::from_steps(fan, r, steps).expect("random filtrations are valid")
}

/// Rejection-samples [`random_bundle`] until the result is locally free
/// and does not split. Needed from `P^3` on, where most filtration
/// families fail the compatibility condition.
pub fn random_locally_free<R: Rng>(rng: &mut R, fan: Fan, max_rank: usize) -> Option<ToricBundle> {
    (0..100_000)
        .map(|_| random_bundle(rng, fan, max_rank))
        .find(|e| e.check_locally_free() && !e.is_split())
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(serialize_with = "as_secs")]
    pub elapsed: Duration,
}

fn as_secs<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

impl std::fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}] {:>2}. {} ({:.2}s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

fn timed(id: usize, name: &'static str, check: impl FnOnce() -> Result<(bool, String)>) -> CriterionResult {
    let start = Instant::now();
    let (passed, detail) = match check() {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionResult {
        id,
        name,
        passed,
        detail,
        elapsed: start.elapsed(),
    }
}

/// Counting formulas agree with the enumeration for `2 <= d <= max_d`.
pub fn check_counts(max_d: i64) -> Result<(bool, String)> {
    for d in 2..=max_d {
        let listed = enumerate_si(d)?.len() as u128;
        let (rec, closed) = (count_recurrence(d)?, count_closed(d)?);
        if listed != rec || rec != closed {
            return Ok((false, format!("d = {d}: enumerate {listed}, recurrence {rec}, closed {closed}")));
        }
    }
    Ok((true, format!("d = 2..={max_d}")))
}

fn tuples(d: i64) -> Result<Vec<[i64; 6]>> {
    Ok(enumerate_si(d)?.iter().map(|e| e.delta.as_tuple()).collect())
}

pub fn check_small_lists() -> Result<(bool, String)> {
    let si2 = tuples(2)?;
    let si3 = tuples(3)?;
    let expected3 = vec![
        [-1, 0, -1, 0, 0, 1],
        [-1, 0, -1, 0, 0, 2],
        [-1, 0, -1, 0, 1, 2],
        [-1, 0, -1, 1, 0, 1],
        [-1, 1, -1, 0, 0, 1],
    ];
    let si4 = enumerate_si(4)?;
    let type3 = si4.iter().filter(|e| e.kind == CensusType::III).count();
    let ok = si2 == vec![[-1, 0, -1, 0, 0, 1]] && si3 == expected3 && si4.len() == 15 && type3 == 6;
    Ok((ok, format!("|SI(4)| = {}, type III = {type3}, types I/II = {}", si4.len(), si4.len() - type3)))
}

/// Fast and oracle d-aCM tests agree on the whole box for `2 <= d <= max_d`.
pub fn check_fast_oracle(max_d: i64) -> Result<(bool, String)> {
    let mut total = 0usize;
    for d in 2..=max_d {
        let tuples = census_box(d);
        total += tuples.len();
        let disagreements: Vec<ShiftingIndices> = tuples
            .par_iter()
            .map(|delta| -> Result<Option<ShiftingIndices>> {
                let fast = is_d_acm_fast(delta, d)?;
                let oracle = is_d_acm_oracle(&ToricBundle::from_shifting_indices(delta), d)?;
                Ok((fast != oracle).then_some(*delta))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        if let Some(first) = disagreements.first() {
            return Ok((false, format!("d = {d}: {} disagreements, first {first}", disagreements.len())));
        }
    }
    Ok((true, format!("{total} tuples, d = 2..={max_d}")))
}

/// Chain and closed cohomology agree on random bundles, and both vanish on
/// the margin ring around the support region.
pub fn check_cross_path(samples: usize, seed: u64) -> Result<(bool, String)> {
    let mut rng = seeded_rng(seed);
    let bundles: Vec<ToricBundle> = (0..samples).map(|_| random_bundle(&mut rng, Fan::plane(), 4)).collect();
    let mut points = 0usize;
    for (idx, e) in bundles.iter().enumerate() {
        for p in 0..=2 {
            let region = support_box(e, p)?;
            for m in region.expanded(1).characters() {
                let chain = hp_chain(e, p, &m)?;
                let closed = hp_closed(e, p, &m)?;
                points += 1;
                if chain != closed || (!region.contains(&m) && chain != 0) {
                    return Ok((
                        false,
                        format!("bundle #{idx}, p = {p}, m = {m}: chain {chain}, closed {closed}"),
                    ));
                }
            }
        }
    }
    Ok((true, format!("{samples} bundles, {points} graded pieces")))
}

fn lattice_points(t: i64) -> usize {
    if t < 0 {
        0
    } else {
        ((t + 1) * (t + 2) / 2) as usize
    }
}

pub fn check_known_values() -> Result<(bool, String)> {
    let plane = Fan::plane();
    let t = ToricBundle::tangent(plane);
    let mut fails = Vec::new();
    let totals = [h(&t, 0)?, h(&t, 1)?, h(&t, 2)?];
    if totals != [8, 0, 0] {
        fails.push(format!("h(T) = {totals:?}"));
    }
    // T(-3) as T ⊗ O(-D_0 - D_1 - D_2), which puts its H^1 at the origin
    let t3 = t.twist(&Divisor(vec![-1, -1, -1]))?;
    let graded: Vec<(Character, usize)> = support_box(&t3, 1)?
        .characters()
        .into_iter()
        .map(|m| Ok((m.clone(), hp_chain(&t3, 1, &m)?)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|(_, v)| *v > 0)
        .collect();
    if graded != vec![(Character(vec![0, 0]), 1)] {
        fails.push(format!("H^1(T(-3)) graded = {graded:?}"));
    }
    for k in -6..=6 {
        let o = ToricBundle::hyperplane_power(plane, k);
        if (0..=6).contains(&k) && h(&o, 0)? != lattice_points(k) {
            fails.push(format!("h0(O({k}))"));
        }
        if h(&o, 1)? != 0 {
            fails.push(format!("h1(O({k}))"));
        }
    }
    if h(&ToricBundle::hyperplane_power(plane, -3), 2)? != 1 {
        fails.push("h2(O(-3))".into());
    }
    Ok((fails.is_empty(), if fails.is_empty() { "all exact".into() } else { fails.join("; ") }))
}

pub fn check_chern(max_d: i64) -> Result<(bool, String)> {
    let mut count = 0;
    for d in 2..=max_d {
        for entry in enumerate_si(d)? {
            count += 1;
            let e = ToricBundle::from_shifting_indices(&entry.delta);
            let res = perling_resolution(&entry.delta);
            if c1(&e) != res.c1() {
                return Ok((false, format!("{}: c1 {} vs {}", entry.delta, c1(&e), res.c1())));
            }
        }
    }
    let t = chern_total(&ToricBundle::tangent(Fan::plane()))?;
    let s = chern_total(&ToricBundle::from_shifting_indices(&ShiftingIndices::from_tuple([
        -1, 0, -1, 0, 0, 2,
    ])?))?;
    let ok = t == ChernData { rank: 2, c1: 3, c2: 3 } && s == ChernData { rank: 2, c1: 0, c2: 1 };
    Ok((ok, format!("{count} entries; tangent {t}; (-1,0;-1,0;0,2) {s}")))
}

pub fn check_resolution_chi(max_d: i64) -> Result<(bool, String)> {
    let entries: Vec<ShiftingIndices> = (2..=max_d)
        .map(enumerate_si)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .map(|e| e.delta)
        .collect();
    let bad: Vec<ShiftingIndices> = entries
        .par_iter()
        .map(|delta| -> Result<Option<ShiftingIndices>> {
            let report = verify_resolution_over(delta, -5..=5)?;
            Ok((!report.ok()).then_some(*delta))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    match bad.first() {
        Some(first) => Ok((false, format!("{} mismatches, first {first}", bad.len()))),
        None => Ok((true, format!("{} entries x 11 twists", entries.len()))),
    }
}

pub fn check_normalization(max_d: i64) -> Result<(bool, String)> {
    let target = ShiftingIndices::from_tuple([-1, 0, -1, 0, 0, 1])?;
    let example = normalize(&ShiftingIndices::from_tuple([0, 1, 0, 1, 0, 1])?, 2)?;
    if example.entry().map(|e| e.delta) != Some(target) {
        return Ok((false, format!("normalize((0,1;0,1;0,1), 2) = {example:?}")));
    }
    for d in 2..=max_d {
        for delta in census_box(d) {
            if let Normalized::Entry(e) = normalize(&delta, d)? {
                if normalize(&e.delta, d)? != Normalized::Entry(e) {
                    return Ok((false, format!("normalize not idempotent at {delta}, d = {d}")));
                }
            }
        }
        let found = brute_force_census(d, |x| is_d_acm_fast(x, d))?;
        let expected: BTreeSet<ShiftingIndices> = enumerate_si(d)?.into_iter().map(|e| e.delta).collect();
        if found != expected {
            return Ok((false, format!("d = {d}: brute force found {} classes, SI has {}", found.len(), expected.len())));
        }
    }
    Ok((true, format!("d = 2..={max_d}")))
}

pub fn check_monotone(max_d: i64) -> Result<(bool, String)> {
    let mut pairs = 0;
    for d in 2..max_d {
        let si = enumerate_si(d)?;
        for d2 in d + 1..=max_d {
            pairs += 1;
            for e in &si {
                if !in_si(&e.delta, d2) || !is_d_acm_fast(&e.delta, d2)? {
                    return Ok((false, format!("{} in SI({d}) fails for d' = {d2}", e.delta)));
                }
            }
        }
    }
    Ok((true, format!("{pairs} pairs (d, d')")))
}

/// `h^2(E(t)) = h^0(E^*(-t-3))`.
pub fn serre_holds(e: &ToricBundle, twists: std::ops::RangeInclusive<i64>) -> Result<bool> {
    let dual = e.dual();
    for t in twists {
        if h(&e.twist_hyperplane(t), 2)? != h(&dual.twist_hyperplane(-t - 3), 0)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn check_stability_and_duality(samples: usize, seed: u64) -> Result<(bool, String)> {
    let stable = ToricBundle::from_shifting_indices(&ShiftingIndices::from_tuple([-1, 0, -1, 0, 0, 1])?);
    let semistable = ToricBundle::from_shifting_indices(&ShiftingIndices::from_tuple([-1, 0, -1, 0, 0, 2])?);
    if !stable.is_slope_stable()? || semistable.is_slope_stable()? {
        return Ok((false, "stability examples".into()));
    }
    let mut rng = seeded_rng(seed);
    for idx in 0..samples {
        let e = random_bundle_of_rank(&mut rng, Fan::plane(), 2);
        if !serre_holds(&e, -5..=5)? {
            return Ok((false, format!("Serre duality fails on random bundle #{idx}")));
        }
    }
    Ok((true, format!("{samples} random rank-2 bundles, t = -5..=5")))
}

/// Every check of the suite. `max_d` caps each range of `d`; the full suite
/// uses `max_d >= 30`.
pub fn run_suite(max_d: i64, seed: u64) -> Vec<CriterionResult> {
    let cap = |limit: i64| limit.min(max_d);
    vec![
        timed(1, "counting formula", || check_counts(cap(30))),
        timed(2, "small census lists", check_small_lists),
        timed(3, "fast/oracle d-aCM equivalence", || check_fast_oracle(cap(5))),
        timed(4, "chain/closed cohomology", || check_cross_path(200, seed)),
        timed(5, "known cohomology values", check_known_values),
        timed(6, "Chern consistency", || check_chern(cap(6))),
        timed(7, "resolution Euler characteristics", || check_resolution_chi(cap(5))),
        timed(8, "normalization and brute-force census", || check_normalization(cap(5))),
        timed(9, "monotone inclusion", || check_monotone(cap(10))),
        timed(10, "stability and Serre duality", || check_stability_and_duality(50, seed)),
    ]
}

/// Characters with `H^p` nonzero, used for the `cohom --graded` report.
pub fn graded_support(e: &ToricBundle, p: usize) -> Result<Vec<(Character, usize)>> {
    support_box(e, p)?
        .characters()
        .into_iter()
        .filter_map(|m| match hp_chain(e, p, &m) {
            Ok(0) => None,
            Ok(v) => Some(Ok((m, v))),
            Err(err) => Some(Err(err)),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_bundles_are_deterministic_and_valid() {
        let a: Vec<_> = {
            let mut rng = seeded_rng(7);
            (0..20).map(|_| random_bundle(&mut rng, Fan::plane(), 4)).collect()
        };
        let b: Vec<_> = {
            let mut rng = seeded_rng(7);
            (0..20).map(|_| random_bundle(&mut rng, Fan::plane(), 4)).collect()
        };
        assert_eq!(a, b);
        for e in &a {
            assert!((1..=4).contains(&e.rank()));
            for f in e.filtrations() {
                for s in f.steps() {
                    assert!((-4..=4).contains(&s.until));
                }
            }
        }
    }

    #[test]
    fn small_suite_passes() {
        for r in run_suite(3, DEFAULT_SEED) {
            assert!(r.passed, "{r}");
        }
    }
}
