use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Drop positions of a non-split rank-2 bundle on `P^2`.
///
/// On ray `i` the filtration is the whole fiber for `j <= lower[i]`, a line
/// for `lower[i] < j <= upper[i]`, and zero above. Written
/// `(a_0^2, a_0^1; a_1^2, a_1^1; a_2^2, a_2^1)` with `a_i^2 = lower[i]` and
/// `a_i^1 = upper[i]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ShiftingIndices {
    lower: [i64; 3],
    upper: [i64; 3],
}

/// Lexicographic on the flat 6-tuple.
impl Ord for ShiftingIndices {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.as_tuple().cmp(&other.as_tuple())
    }
}

impl PartialOrd for ShiftingIndices {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl ShiftingIndices {
    pub fn new(lower: [i64; 3], upper: [i64; 3]) -> Result<Self> {
        let delta = ShiftingIndices { lower, upper };
        if let Some(i) = (0..3).find(|&i| upper[i] <= lower[i]) {
            return Err(Error::InvalidShiftingIndices {
                delta: delta.to_string(),
                reason: format!("ray {i} has an empty rank-1 band (a_{i}^1 <= a_{i}^2)"),
            });
        }
        Ok(delta)
    }

    /// From the flat tuple `(a_0^2, a_0^1, a_1^2, a_1^1, a_2^2, a_2^1)`.
    pub fn from_tuple(t: [i64; 6]) -> Result<Self> {
        Self::new([t[0], t[2], t[4]], [t[1], t[3], t[5]])
    }

    pub fn as_tuple(&self) -> [i64; 6] {
        [
            self.lower[0],
            self.upper[0],
            self.lower[1],
            self.upper[1],
            self.lower[2],
            self.upper[2],
        ]
    }

    pub fn lower(&self) -> [i64; 3] {
        self.lower
    }

    pub fn upper(&self) -> [i64; 3] {
        self.upper
    }

    /// Band lengths `alpha_i = a_i^1 - a_i^2`.
    pub fn band_lengths(&self) -> [i64; 3] {
        [0, 1, 2].map(|i| self.upper[i] - self.lower[i])
    }

    /// Shifts ray `i` by `shift[i]` (tensoring with `O(sum shift_i D_i)`).
    pub fn shifted(&self, shift: [i64; 3]) -> Self {
        ShiftingIndices {
            lower: [0, 1, 2].map(|i| self.lower[i] + shift[i]),
            upper: [0, 1, 2].map(|i| self.upper[i] + shift[i]),
        }
    }

    /// Smallest sum `j_0 + j_1 + j_2` with every `j_i` inside its rank-1 band.
    pub fn min_band_sum(&self) -> i64 {
        self.lower.iter().map(|a| a + 1).sum()
    }

    /// Largest such sum.
    pub fn max_band_sum(&self) -> i64 {
        self.upper.iter().sum()
    }
}

impl fmt::Display for ShiftingIndices {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{};{},{};{},{}",
            self.lower[0], self.upper[0], self.lower[1], self.upper[1], self.lower[2], self.upper[2]
        )
    }
}

impl FromStr for ShiftingIndices {
    type Err = Error;

    /// Parses `"a02,a01;a12,a11;a22,a21"`. Parentheses and whitespace are
    /// ignored.
    fn from_str(s: &str) -> Result<Self> {
        let cleaned: String = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '(' && *c != ')')
            .collect();
        let groups: Vec<&str> = cleaned.split(';').collect();
        if groups.len() != 3 {
            return Err(Error::Parse(format!(
                "shifting indices need three ';'-separated pairs, got {:?}",
                s
            )));
        }
        let mut t = [0i64; 6];
        for (g, group) in groups.iter().enumerate() {
            let parts: Vec<&str> = group.split(',').collect();
            if parts.len() != 2 {
                return Err(Error::Parse(format!("expected a pair 'a,b' in {:?}", group)));
            }
            for (k, p) in parts.iter().enumerate() {
                t[2 * g + k] = p
                    .parse()
                    .map_err(|_| Error::Parse(format!("not an integer: {:?}", p)))?;
            }
        }
        Self::from_tuple(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let d: ShiftingIndices = "-1,0;-1,0;0,2".parse().unwrap();
        assert_eq!(d.as_tuple(), [-1, 0, -1, 0, 0, 2]);
        assert_eq!(d.to_string(), "-1,0;-1,0;0,2");
        let e: ShiftingIndices = "(-1, 0; -1, 0; 0, 2)".parse().unwrap();
        assert_eq!(d, e);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!("1,2;3,4".parse::<ShiftingIndices>(), Err(Error::Parse(_))));
        assert!(matches!("1,2,3;3,4;5,6".parse::<ShiftingIndices>(), Err(Error::Parse(_))));
        assert!(matches!("a,2;3,4;5,6".parse::<ShiftingIndices>(), Err(Error::Parse(_))));
        assert!(matches!(
            "0,0;0,1;0,1".parse::<ShiftingIndices>(),
            Err(Error::InvalidShiftingIndices { .. })
        ));
    }

    #[test]
    fn band_sums() {
        let d = ShiftingIndices::from_tuple([-1, 0, -1, 0, 0, 2]).unwrap();
        assert_eq!(d.band_lengths(), [1, 1, 2]);
        assert_eq!(d.min_band_sum(), 1);
        assert_eq!(d.max_band_sum(), 2);
    }
}
