//! Toric vector bundles on `P^n` as families of decreasing filtrations of a
//! common fiber `Q^r`, one filtration per ray.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::error::{Error, Result};
use crate::fan::{Character, Divisor, Fan};
use crate::linalg::Subspace;
use crate::shifting::ShiftingIndices;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FiltrationError {
    #[error("step {0} has a subspace of the wrong ambient dimension")]
    Ambient(usize),
    #[error("first step must be the whole space")]
    FirstNotFull,
    #[error("step {0} is the zero subspace")]
    ZeroStep(usize),
    #[error("step {0} does not strictly shrink the previous subspace")]
    NotDecreasing(usize),
    #[error("step {0} has a threshold that does not increase")]
    UntilNotIncreasing(usize),
    #[error("a positive-rank filtration needs at least one step")]
    Empty,
}

/// One step of a filtration: the value `space` holds on
/// `(previous until, until]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub until: i64,
    pub space: Subspace,
}

/// A full decreasing `Z`-filtration of `Q^r`.
///
/// `E(j)` is `steps[0].space` (the whole space) for `j <= steps[0].until`,
/// `steps[k].space` for `steps[k-1].until < j <= steps[k].until`, and zero
/// past the last threshold.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Filtration {
    steps: Vec<Step>,
    zero: Subspace,
}

impl Filtration {
    pub fn new(ambient: usize, steps: Vec<Step>) -> Result<Self, FiltrationError> {
        if ambient > 0 && steps.is_empty() {
            return Err(FiltrationError::Empty);
        }
        for (k, step) in steps.iter().enumerate() {
            if step.space.ambient_dim() != ambient {
                return Err(FiltrationError::Ambient(k));
            }
            if step.space.is_zero() {
                return Err(FiltrationError::ZeroStep(k));
            }
            if k == 0 {
                if !step.space.is_full() {
                    return Err(FiltrationError::FirstNotFull);
                }
                continue;
            }
            let prev = &steps[k - 1];
            if step.until <= prev.until {
                return Err(FiltrationError::UntilNotIncreasing(k));
            }
            if step.space.dim() >= prev.space.dim() || !step.space.is_subspace_of(&prev.space) {
                return Err(FiltrationError::NotDecreasing(k));
            }
        }
        Ok(Filtration {
            steps,
            zero: Subspace::zero(ambient),
        })
    }

    /// Filtration that is the whole space up to `until` and zero afterwards.
    pub fn jump(ambient: usize, until: i64) -> Self {
        let steps = if ambient == 0 {
            Vec::new()
        } else {
            vec![Step {
                until,
                space: Subspace::full(ambient),
            }]
        };
        Filtration {
            steps,
            zero: Subspace::zero(ambient),
        }
    }

    /// Rebuilds a filtration from a piecewise-constant function that is
    /// constant on each interval `(c_prev, c]` between consecutive
    /// `breakpoints`, full at or below the first and zero above the last.
    fn from_breakpoints(
        ambient: usize,
        breakpoints: &BTreeSet<i64>,
        value: impl Fn(i64) -> Subspace,
    ) -> Self {
        let mut steps: Vec<Step> = Vec::new();
        for &c in breakpoints {
            let space = value(c);
            if space.is_zero() {
                break;
            }
            match steps.last_mut() {
                Some(last) if last.space == space => last.until = c,
                _ => steps.push(Step { until: c, space }),
            }
        }
        Filtration::new(ambient, steps).expect("breakpoint construction yields a valid filtration")
    }

    pub fn ambient_dim(&self) -> usize {
        self.zero.ambient_dim()
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// `E(j)`.
    pub fn eval(&self, j: i64) -> &Subspace {
        self.steps
            .iter()
            .find(|s| j <= s.until)
            .map_or(&self.zero, |s| &s.space)
    }

    pub fn dim_at(&self, j: i64) -> usize {
        self.eval(j).dim()
    }

    /// Last index at which the filtration is still the whole space.
    pub fn last_full(&self) -> Option<i64> {
        self.steps.first().map(|s| s.until)
    }

    /// Last index at which the filtration is nonzero.
    pub fn last_nonzero(&self) -> Option<i64> {
        self.steps.last().map(|s| s.until)
    }

    fn shifted(&self, by: i64) -> Filtration {
        Filtration {
            steps: self
                .steps
                .iter()
                .map(|s| Step {
                    until: s.until + by,
                    space: s.space.clone(),
                })
                .collect(),
            zero: self.zero.clone(),
        }
    }

    /// Dimension drops `(j, dim E(j) - dim E(j+1))`, nonzero entries only.
    pub fn drops(&self) -> impl Iterator<Item = (i64, usize)> + '_ {
        self.steps.iter().enumerate().map(move |(k, s)| {
            let next = self.steps.get(k + 1).map_or(0, |n| n.space.dim());
            (s.until, s.space.dim() - next)
        })
    }
}

/// A torus-equivariant vector bundle on `P^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ToricBundle {
    fan: Fan,
    rank: usize,
    filtrations: Vec<Filtration>,
}

impl ToricBundle {
    pub fn new(fan: Fan, rank: usize, filtrations: Vec<Filtration>) -> Result<Self> {
        if filtrations.len() != fan.num_rays() {
            return Err(Error::InvalidFiltration {
                ray: filtrations.len(),
                reason: format!(
                    "expected {} filtrations, one per ray, got {}",
                    fan.num_rays(),
                    filtrations.len()
                ),
            });
        }
        if let Some(ray) = filtrations.iter().position(|f| f.ambient_dim() != rank) {
            return Err(Error::InvalidFiltration {
                ray,
                reason: format!("ambient dimension differs from rank {rank}"),
            });
        }
        Ok(ToricBundle {
            fan,
            rank,
            filtrations,
        })
    }

    /// Builds each filtration from raw steps, reporting the failing ray.
    pub fn from_steps(fan: Fan, rank: usize, steps: Vec<Vec<Step>>) -> Result<Self> {
        let filtrations = steps
            .into_iter()
            .enumerate()
            .map(|(ray, s)| {
                Filtration::new(rank, s).map_err(|e| Error::InvalidFiltration {
                    ray,
                    reason: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(fan, rank, filtrations)
    }

    /// `O(D)`: on ray `i` the fiber is present exactly for `j <= l_i`.
    pub fn line_bundle(fan: Fan, divisor: &Divisor) -> Result<Self> {
        fan.check_divisor(divisor)?;
        let filtrations = divisor.coeffs().iter().map(|&l| Filtration::jump(1, l)).collect();
        Self::new(fan, 1, filtrations)
    }

    /// `O(t)`, realized as `O(t D_n)`.
    pub fn hyperplane_power(fan: Fan, t: i64) -> Self {
        Self::line_bundle(fan, &Divisor::single(fan.num_rays(), fan.n(), t))
            .expect("divisor length matches fan")
    }

    /// Tangent bundle: on ray `i`, whole fiber for `j <= 0`, the line
    /// through `u_i` at `j = 1`, zero afterwards.
    pub fn tangent(fan: Fan) -> Self {
        let n = fan.n();
        let steps = (0..fan.num_rays())
            .map(|i| {
                let u = fan.ray(i).expect("ray index in range");
                vec![
                    Step {
                        until: 0,
                        space: Subspace::full(n),
                    },
                    Step {
                        until: 1,
                        space: Subspace::line(&u),
                    },
                ]
            })
            .collect();
        Self::from_steps(fan, n, steps).expect("tangent filtrations are valid")
    }

    /// The non-split rank-2 bundle on `P^2` with shifting indices `delta`,
    /// using the lines through `(1,0)`, `(0,1)` and `(1,1)`.
    pub fn from_shifting_indices(delta: &ShiftingIndices) -> Self {
        let lines = [[1, 0], [0, 1], [1, 1]];
        let (lower, upper) = (delta.lower(), delta.upper());
        let steps = (0..3)
            .map(|i| {
                vec![
                    Step {
                        until: lower[i],
                        space: Subspace::full(2),
                    },
                    Step {
                        until: upper[i],
                        space: Subspace::line(&lines[i]),
                    },
                ]
            })
            .collect();
        Self::from_steps(Fan::plane(), 2, steps).expect("valid shifting indices give valid filtrations")
    }

    pub fn fan(&self) -> Fan {
        self.fan
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn filtrations(&self) -> &[Filtration] {
        &self.filtrations
    }

    pub fn filtration(&self, ray: usize) -> Result<&Filtration> {
        self.filtrations.get(ray).ok_or(Error::RayOutOfRange {
            index: ray,
            rays: self.filtrations.len(),
        })
    }

    /// `E^{ray}(j)`.
    pub fn eval(&self, ray: usize, j: i64) -> Result<&Subspace> {
        Ok(self.filtration(ray)?.eval(j))
    }

    /// `E^{ray}_m = E^{ray}(<m, u_ray>)`.
    pub fn eval_at(&self, ray: usize, m: &Character) -> Result<&Subspace> {
        let j = self.fan.pairing(m, ray)?;
        self.eval(ray, j)
    }

    fn check_same_fan(&self, other: &ToricBundle) -> Result<()> {
        if self.fan != other.fan {
            return Err(Error::FanMismatch(self.fan.n(), other.fan.n()));
        }
        Ok(())
    }

    /// `E ⊗ O(D)`: shifts the thresholds of ray `i` by `l_i`.
    pub fn twist(&self, divisor: &Divisor) -> Result<Self> {
        self.fan.check_divisor(divisor)?;
        Ok(ToricBundle {
            fan: self.fan,
            rank: self.rank,
            filtrations: self
                .filtrations
                .iter()
                .zip(divisor.coeffs())
                .map(|(f, &l)| f.shifted(l))
                .collect(),
        })
    }

    /// `E(t)`, realized as `E ⊗ O(t D_n)`.
    pub fn twist_hyperplane(&self, t: i64) -> Self {
        self.twist(&Divisor::single(self.fan.num_rays(), self.fan.n(), t))
            .expect("divisor length matches fan")
    }

    /// `E ⊕ F`, with `E` in the leading coordinates.
    pub fn direct_sum(&self, other: &ToricBundle) -> Result<Self> {
        self.check_same_fan(other)?;
        let rank = self.rank + other.rank;
        let filtrations = self
            .filtrations
            .iter()
            .zip(&other.filtrations)
            .map(|(e, f)| {
                let breaks: BTreeSet<i64> = e.steps.iter().chain(&f.steps).map(|s| s.until).collect();
                Filtration::from_breakpoints(rank, &breaks, |j| e.eval(j).direct_sum(f.eval(j)))
            })
            .collect();
        Self::new(self.fan, rank, filtrations)
    }

    /// `E ⊗ F` on `Q^(r*s)` with row-major coordinates:
    /// `(E⊗F)(j) = sum_{s+t=j} E(s) ⊗ F(t)`.
    pub fn tensor(&self, other: &ToricBundle) -> Result<Self> {
        self.check_same_fan(other)?;
        let rank = self.rank * other.rank;
        let filtrations = self
            .filtrations
            .iter()
            .zip(&other.filtrations)
            .map(|(e, f)| {
                // sum_{s+t=j} E(s)⊗F(t) is spanned by the products of step
                // spaces whose thresholds add up to at least j.
                let products: Vec<(i64, Subspace)> = e
                    .steps
                    .iter()
                    .flat_map(|a| {
                        f.steps
                            .iter()
                            .map(move |b| (a.until + b.until, a.space.tensor(&b.space)))
                    })
                    .collect();
                let breaks: BTreeSet<i64> = products.iter().map(|(u, _)| *u).collect();
                Filtration::from_breakpoints(rank, &breaks, |j| {
                    products
                        .iter()
                        .filter(|(u, _)| *u >= j)
                        .fold(Subspace::zero(rank), |acc, (_, s)| {
                            acc.sum(s).expect("tensor spaces share the ambient")
                        })
                })
            })
            .collect();
        Self::new(self.fan, rank, filtrations)
    }

    /// Dual bundle: `E^*(j) = E(1 - j)^perp` in the dual fiber.
    pub fn dual(&self) -> Self {
        let filtrations = self
            .filtrations
            .iter()
            .map(|f| {
                let breaks: BTreeSet<i64> = f.steps.iter().map(|s| -s.until).collect();
                Filtration::from_breakpoints(self.rank, &breaks, |j| f.eval(1 - j).annihilator())
            })
            .collect();
        ToricBundle {
            fan: self.fan,
            rank: self.rank,
            filtrations,
        }
    }

    /// Distinct proper nonzero subspaces occurring in any filtration.
    fn proper_subspaces(&self) -> Vec<Subspace> {
        let set: BTreeSet<&Subspace> = self
            .filtrations
            .iter()
            .flat_map(|f| f.steps.iter().map(|s| &s.space))
            .filter(|s| !s.is_full())
            .collect();
        set.into_iter().cloned().collect()
    }

    /// Whether every filtration subspace is a coordinate subspace of one
    /// common basis, i.e. whether the bundle splits into line bundles.
    ///
    /// For subspaces `S_0..S_k` and `T ⊆ {0..k}` let `V_T = ∩_{i∈T} S_i`. An
    /// adapted basis has exactly `dim V_T - dim Σ_{T'⊋T} V_T'` vectors lying
    /// in precisely the `S_i` with `i ∈ T`; choosing that many complement
    /// vectors for every `T` always spans, and gives a basis iff the counts
    /// add up to the rank.
    pub fn is_split(&self) -> bool {
        let subspaces = self.proper_subspaces();
        let k = subspaces.len();
        assert!(k < 24, "too many distinct subspaces for the split test");
        let mut meet: Vec<Subspace> = Vec::with_capacity(1 << k);
        meet.push(Subspace::full(self.rank));
        for mask in 1usize..(1 << k) {
            let top = usize::BITS as usize - 1 - mask.leading_zeros() as usize;
            let v = meet[mask & !(1 << top)]
                .intersect(&subspaces[top])
                .expect("shared ambient");
            meet.push(v);
        }
        let mut count = 0usize;
        for mask in 0usize..(1 << k) {
            if meet[mask].is_zero() {
                continue;
            }
            let above = (0..k)
                .filter(|i| mask & (1 << i) == 0)
                .fold(Subspace::zero(self.rank), |acc, i| {
                    acc.sum(&meet[mask | (1 << i)]).expect("shared ambient")
                });
            count += meet[mask].dim() - above.dim();
            if count > self.rank {
                return false;
            }
        }
        count == self.rank
    }

    /// Local freeness via the graded pieces over each maximal cone: the
    /// quotients `E^σ(j) / Σ_ρ E^σ(j + e_ρ)` must have total dimension equal
    /// to the rank.
    pub fn check_locally_free(&self) -> bool {
        self.fan
            .maximal_cones()
            .iter()
            .all(|cone| self.graded_total(cone.rays()) == self.rank)
    }

    fn graded_total(&self, rays: &[usize]) -> usize {
        // Only thresholds can carry a nonzero quotient, so scanning the
        // product of threshold sets suffices.
        let axes: Vec<Vec<i64>> = rays
            .iter()
            .map(|&r| self.filtrations[r].steps.iter().map(|s| s.until).collect())
            .collect();
        if axes.iter().any(Vec::is_empty) {
            return 0;
        }
        let mut cache: HashMap<Vec<i64>, Subspace> = HashMap::new();
        let mut component = |js: &[i64]| -> Subspace {
            cache
                .entry(js.to_vec())
                .or_insert_with(|| {
                    rays.iter().zip(js).fold(Subspace::full(self.rank), |acc, (&r, &j)| {
                        acc.intersect(self.filtrations[r].eval(j)).expect("shared ambient")
                    })
                })
                .clone()
        };
        let mut total = 0;
        let mut idx = vec![0usize; rays.len()];
        loop {
            let js: Vec<i64> = idx.iter().zip(&axes).map(|(&i, a)| a[i]).collect();
            let here = component(&js);
            if !here.is_zero() {
                let mut above = Subspace::zero(self.rank);
                for k in 0..js.len() {
                    let mut up = js.clone();
                    up[k] += 1;
                    above = above.sum(&component(&up)).expect("shared ambient");
                }
                total += here.dim() - above.dim();
            }
            let mut pos = 0;
            loop {
                if pos == idx.len() {
                    return total;
                }
                idx[pos] += 1;
                if idx[pos] < axes[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }

    fn require_plane_rank2(&self) -> Result<()> {
        if self.fan.n() != 2 {
            return Err(Error::NotPlane(self.fan.n()));
        }
        if self.rank != 2 {
            return Err(Error::WrongRank {
                expected: 2,
                found: self.rank,
            });
        }
        Ok(())
    }

    /// Shifting indices of a non-split rank-2 bundle on `P^2`.
    pub fn shifting_indices(&self) -> Result<ShiftingIndices> {
        self.require_plane_rank2()?;
        let mut lower = [0; 3];
        let mut upper = [0; 3];
        for (i, f) in self.filtrations.iter().enumerate() {
            match f.steps.as_slice() {
                [full, line] => {
                    lower[i] = full.until;
                    upper[i] = line.until;
                }
                _ => return Err(Error::SplitBundle),
            }
        }
        if self.is_split() {
            return Err(Error::SplitBundle);
        }
        ShiftingIndices::new(lower, upper)
    }

    /// Slope stability of a non-split rank-2 bundle on `P^2`: the band
    /// lengths satisfy the strict triangle inequality.
    pub fn is_slope_stable(&self) -> Result<bool> {
        let alpha = self.shifting_indices()?.band_lengths();
        Ok(strict_triangle(alpha))
    }
}

pub fn strict_triangle(alpha: [i64; 3]) -> bool {
    let total: i64 = alpha.iter().sum();
    alpha.iter().all(|&a| 2 * a < total)
}
