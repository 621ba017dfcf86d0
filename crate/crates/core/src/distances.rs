//! Gaps between the 1s of an AIR matrix.
//!
//! Every quantity exists twice: a `*_scan` function that walks the bits of a
//! built [`AirMatrix`], and a closed form that only reads the [`LambdaChain`].
//! The two are kept independent so each can check the other.

use serde::{Deserialize, Serialize};

use crate::chain::LambdaChain;
use crate::error::{Error, Result};
use crate::matrix::{check_index, entry_from_chain, locate_in, AirMatrix, SubmatrixKind};

fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

/// `x mod 0` reads as `x`.
fn mod_or_self(x: usize, m: usize) -> usize {
    if m == 0 {
        x
    } else {
        x % m
    }
}

pub fn down_distance_scan(matrix: &AirMatrix, k: usize) -> Result<usize> {
    check_index("column", k, matrix.cols())?;
    (k + 1..matrix.rows())
        .rev()
        .find(|&j| matrix.get(j, k))
        .map(|j| j - k)
        .ok_or_else(|| Error::Structural(format!("column {k} has no 1 below the diagonal")))
}

pub fn up_distance_scan(matrix: &AirMatrix, j: usize, k: usize) -> Result<usize> {
    check_index("row", j, matrix.rows())?;
    check_index("column", k, matrix.cols())?;
    if j < matrix.cols() || !matrix.get(j, k) {
        return Err(precondition(format!("up-distance needs a 1 below the top identity, got ({j}, {k})")));
    }
    (0..j)
        .rev()
        .find(|&r| matrix.get(r, k))
        .map(|r| j - r)
        .ok_or_else(|| Error::Structural(format!("column {k} has no 1 above row {j}")))
}

pub fn right_distance_scan(matrix: &AirMatrix, j: usize, k: usize) -> Result<usize> {
    let (block, _, _) = matrix.locate(j, k)?;
    if !matrix.get(j, k) || !matches!(block.kind, SubmatrixKind::Even(_)) {
        return Err(precondition(format!("right-distance needs a 1 in an even block, got ({j}, {k})")));
    }
    (k + 1..matrix.cols())
        .find(|&c| matrix.get(j, c))
        .map(|c| c - k)
        .ok_or_else(|| precondition(format!("no 1 to the right of ({j}, {k})")))
}

/// Index `i` of the column interval `C_i` containing column `k`.
fn column_block(chain: &LambdaChain, k: usize) -> Result<usize> {
    check_index("column", k, chain.after() + 1)?;
    let n = chain.after() + 1;
    (0..=chain.half_ceil())
        .find(|&i| {
            let i = i as isize;
            let lo = n - chain.lambda(2 * i - 1);
            let hi = n - chain.lambda(2 * i + 1);
            (lo..hi).contains(&k)
        })
        .ok_or_else(|| Error::Structural(format!("column {k} in no column interval")))
}

/// Closed-form down-distance of the diagonal entry `(k, k)`.
pub fn down_distance(chain: &LambdaChain, k: usize) -> Result<usize> {
    let i = column_block(chain, k)? as isize;
    let lam = |x: isize| chain.lambda(x) as isize;
    let base = chain.lambda(0) as isize;
    if lam(2 * i) == 0 {
        // Last column interval of an odd-depth chain: the lowest 1 sits in
        // the final stacked identity.
        return Ok(base as usize);
    }
    let m = chain.after() + 1 - chain.lambda(2 * i - 1);
    let c = (mod_or_self(k, m) / chain.lambda(2 * i)) as isize;
    let beta = chain.beta(2 * i as usize) as isize;
    Ok((base + lam(2 * i + 1) + (beta - 1 - c) * lam(2 * i)) as usize)
}

/// Closed-form up-distance of the 1 at `(j, k)`, `j >= D + 1`.
pub fn up_distance(chain: &LambdaChain, j: usize, k: usize) -> Result<usize> {
    if j <= chain.after() || !entry_from_chain(chain, j, k)? {
        return Err(precondition(format!("up-distance needs a 1 below the top identity, got ({j}, {k})")));
    }
    let (block, _, kr) = locate_in(chain, j, k)?;
    match block.kind {
        SubmatrixKind::Odd(i) => Ok(chain.lambda(2 * i as isize + 1)),
        SubmatrixKind::Even(i) => {
            let i = i as isize;
            let c = kr / chain.lambda(2 * i);
            Ok(chain.lambda(2 * i - 1) - c * chain.lambda(2 * i))
        }
        SubmatrixKind::IdentityTop => unreachable!("rows below D are outside the top identity"),
    }
}

/// Closed-form right-distance of the 1 at `(j, k)` inside an even block.
pub fn right_distance(chain: &LambdaChain, j: usize, k: usize) -> Result<usize> {
    let (block, jr, kr) = locate_in(chain, j, k)?;
    let SubmatrixKind::Even(i) = block.kind else {
        return Err(precondition(format!("right-distance needs a 1 in an even block, got ({j}, {k})")));
    };
    if !block.local_entry(jr, kr) {
        return Err(precondition(format!("right-distance needs a 1 in an even block, got ({j}, {k})")));
    }
    let i = i as isize;
    let lam = chain.lambda(2 * i);
    let beta = chain.beta(2 * i as usize);
    if kr < (beta - 1) * lam {
        return Ok(lam);
    }
    let next = chain.lambda(2 * i + 1);
    if next == 0 {
        return Err(precondition(format!("no 1 to the right of ({j}, {k})")));
    }
    Ok(lam - (jr / next) * next)
}

/// Down-distance, right-distance and the `r`-th down-distances of column `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceProfile {
    pub k: usize,
    pub d_down: usize,
    pub mu: usize,
    pub p: usize,
    pub t: Vec<usize>,
}

impl DistanceProfile {
    /// Row of the lowest 1 in column `k`.
    pub fn pivot_row(&self) -> usize {
        self.k + self.d_down
    }
}

/// Largest column with a defined profile, `D - gcd(K, D+1)`. `None` when
/// `D + 1` divides `K`: the matrix is then stacked identities only and no
/// row has a second 1.
pub fn profile_limit(chain: &LambdaChain) -> Option<usize> {
    chain.after().checked_sub(chain.gcd())
}

pub fn distance_profile(matrix: &AirMatrix, k: usize) -> Result<DistanceProfile> {
    match profile_limit(matrix.chain()) {
        Some(limit) if k <= limit => {}
        Some(limit) => return Err(precondition(format!("distance profile is defined for k <= {limit}, got {k}"))),
        None => return Err(precondition("no column has a distance profile when D+1 divides K")),
    }
    let d_down = down_distance_scan(matrix, k)?;
    let pivot = k + d_down;
    let mu = right_distance_scan(matrix, pivot, k)?;
    let col = k + mu;
    let t: Vec<usize> = (pivot + 1..matrix.rows())
        .filter(|&j| matrix.get(j, col))
        .map(|j| j - pivot)
        .collect();
    Ok(DistanceProfile {
        k,
        d_down,
        mu,
        p: t.len(),
        t,
    })
}
