//! Chern data of toric bundles.

use std::fmt;

use serde::Serialize;

use crate::bundle::ToricBundle;
use crate::cohomology::euler_char;
use crate::error::{Error, Result};

/// `c_1(E)` as a multiple of `H`: every dimension drop of size `k` at index
/// `j` on any ray contributes `j * k`.
pub fn c1(e: &ToricBundle) -> i64 {
    e.filtrations()
        .iter()
        .flat_map(|f| f.drops())
        .map(|(j, k)| j * k as i64)
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ChernData {
    pub rank: usize,
    pub c1: i64,
    pub c2: i64,
}

impl fmt::Display for ChernData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rank {}, c1 = {}·H, c2 = {}·H^2", self.rank, self.c1, self.c2)
    }
}

/// Rank, `c_1` and `c_2` on `P^2`, with `c_2` recovered from Riemann–Roch
/// `χ(E) = r + c_1(c_1 + 3)/2 - c_2`.
pub fn chern_total(e: &ToricBundle) -> Result<ChernData> {
    if e.fan().n() != 2 {
        return Err(Error::NotPlane(e.fan().n()));
    }
    let rank = e.rank();
    let c1 = c1(e);
    let c2 = if rank <= 1 {
        0
    } else {
        rank as i64 + c1 * (c1 + 3) / 2 - euler_char(e)?
    };
    Ok(ChernData { rank, c1, c2 })
}
