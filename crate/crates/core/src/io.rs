//! JSON form of a toric bundle.
//!
//! ```json
//! {"rank": 2, "n": 2, "filtrations": [
//!   {"ray": 0, "steps": [{"until": 0, "basis": [[1, 0], [0, 1]]},
//!                        {"until": 1, "basis": [[1, 0]]}]},
//!   ...
//! ]}
//! ```
//!
//! Basis entries are integers or `"p/q"` strings. Every ray appears exactly
//! once. A bare shifting-index string such as `-1,0;-1,0;0,1` is also
//! accepted wherever a bundle is read.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::bundle::{Step, ToricBundle};
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::linalg::{Rational, Subspace};
use crate::shifting::ShiftingIndices;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Text(String),
}

impl Entry {
    fn to_rational(&self) -> Result<Rational> {
        match self {
            Entry::Int(v) => Ok(Rational::from_integer(BigInt::from(*v))),
            Entry::Text(s) => {
                let s = s.trim();
                let (num, den) = s.split_once('/').unwrap_or((s, "1"));
                let parse = |x: &str| {
                    x.trim()
                        .parse::<BigInt>()
                        .map_err(|_| Error::Parse(format!("invalid rational entry {s:?}")))
                };
                let den = parse(den)?;
                if den == BigInt::from(0) {
                    return Err(Error::Parse(format!("zero denominator in {s:?}")));
                }
                Ok(Rational::new(parse(num)?, den))
            }
        }
    }

    fn from_rational(q: &Rational) -> Entry {
        if q.denom().is_one() {
            if let Some(v) = q.numer().to_i64() {
                return Entry::Int(v);
            }
        }
        Entry::Text(q.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepFile {
    pub until: i64,
    pub basis: Vec<Vec<Entry>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiltrationFile {
    pub ray: usize,
    pub steps: Vec<StepFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleFile {
    pub rank: usize,
    pub n: usize,
    pub filtrations: Vec<FiltrationFile>,
}

impl BundleFile {
    pub fn from_bundle(e: &ToricBundle) -> Self {
        let filtrations = e
            .filtrations()
            .iter()
            .enumerate()
            .map(|(ray, f)| FiltrationFile {
                ray,
                steps: f
                    .steps()
                    .iter()
                    .map(|s| StepFile {
                        until: s.until,
                        basis: s
                            .space
                            .basis()
                            .iter()
                            .map(|row| row.iter().map(Entry::from_rational).collect())
                            .collect(),
                    })
                    .collect(),
            })
            .collect();
        BundleFile {
            rank: e.rank(),
            n: e.fan().n(),
            filtrations,
        }
    }

    pub fn to_bundle(&self) -> Result<ToricBundle> {
        let fan = Fan::projective(self.n)?;
        let rays = fan.num_rays();
        let mut slots: Vec<Option<Vec<Step>>> = vec![None; rays];
        for f in &self.filtrations {
            let slot = slots.get_mut(f.ray).ok_or(Error::RayOutOfRange {
                index: f.ray,
                rays,
            })?;
            if slot.is_some() {
                return Err(Error::InvalidFiltration {
                    ray: f.ray,
                    reason: "ray listed more than once".into(),
                });
            }
            let steps = f
                .steps
                .iter()
                .map(|s| {
                    let rows = s
                        .basis
                        .iter()
                        .map(|row| row.iter().map(Entry::to_rational).collect::<Result<Vec<_>>>())
                        .collect::<Result<Vec<_>>>()?;
                    Ok(Step {
                        until: s.until,
                        space: Subspace::span(rows, self.rank).map_err(|e| Error::InvalidFiltration {
                            ray: f.ray,
                            reason: e.to_string(),
                        })?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            *slot = Some(steps);
        }
        let steps = slots
            .into_iter()
            .enumerate()
            .map(|(ray, s)| {
                s.ok_or_else(|| Error::InvalidFiltration {
                    ray,
                    reason: "ray missing".into(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        ToricBundle::from_steps(fan, self.rank, steps)
    }
}

/// Reads a bundle from JSON, or from a shifting-index string.
pub fn parse_bundle(text: &str) -> Result<ToricBundle> {
    let trimmed = text.trim();
    if !trimmed.starts_with('{') {
        if let Ok(delta) = trimmed.parse::<ShiftingIndices>() {
            return Ok(ToricBundle::from_shifting_indices(&delta));
        }
    }
    let file: BundleFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.to_bundle()
}

pub fn serialize_bundle(e: &ToricBundle) -> String {
    serde_json::to_string_pretty(&BundleFile::from_bundle(e)).expect("bundle files always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::Divisor;

    #[test]
    fn round_trips() {
        let bundles = vec![
            ToricBundle::tangent(Fan::plane()),
            ToricBundle::tangent(Fan::projective(3).unwrap()),
            ToricBundle::line_bundle(Fan::plane(), &Divisor(vec![1, -2, 3])).unwrap(),
            ToricBundle::from_shifting_indices(&"-1,0;-1,2;1,4".parse().unwrap()),
        ];
        for e in bundles {
            assert_eq!(parse_bundle(&serialize_bundle(&e)).unwrap(), e);
        }
    }

    #[test]
    fn tangent_json() {
        let text = r#"{"rank":2,"n":2,"filtrations":[
            {"ray":0,"steps":[{"until":0,"basis":[[1,0],[0,1]]},{"until":1,"basis":[[1,0]]}]},
            {"ray":1,"steps":[{"until":0,"basis":[[1,0],[0,1]]},{"until":1,"basis":[[0,1]]}]},
            {"ray":2,"steps":[{"until":0,"basis":[[1,0],[0,1]]},{"until":1,"basis":[["-1/2","-1/2"]]}]}
        ]}"#;
        assert_eq!(parse_bundle(text).unwrap(), ToricBundle::tangent(Fan::plane()));
    }

    #[test]
    fn shifting_string() {
        let e = parse_bundle("-1,0;-1,0;0,1\n").unwrap();
        assert_eq!(e.shifting_indices().unwrap().as_tuple(), [-1, 0, -1, 0, 0, 1]);
    }

    #[test]
    fn errors() {
        let err = parse_bundle("{\"rank\": 2,\n \"n\": }").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let missing = r#"{"rank":1,"n":2,"filtrations":[{"ray":0,"steps":[{"until":0,"basis":[[1]]}]}]}"#;
        assert!(matches!(parse_bundle(missing), Err(Error::InvalidFiltration { ray: 1, .. })));
        let dup = r#"{"rank":1,"n":1,"filtrations":[{"ray":0,"steps":[{"until":0,"basis":[[1]]}]},{"ray":0,"steps":[{"until":0,"basis":[[1]]}]}]}"#;
        assert!(matches!(parse_bundle(dup), Err(Error::InvalidFiltration { ray: 0, .. })));
        let bad = r#"{"rank":1,"n":1,"filtrations":[{"ray":0,"steps":[{"until":0,"basis":[["1/0"]]}]},{"ray":1,"steps":[{"until":0,"basis":[[1]]}]}]}"#;
        assert!(matches!(parse_bundle(bad), Err(Error::Parse(_))));
    }
}
