//! Problem parameters, the Euclid remainder chain of `(D+1, K-D-1)` and the
//! row/column interval layout that locates every block of the AIR matrix.
//!
//! Chain indices follow the usual numbering: `lambda(-1) = D+1`,
//! `lambda(0) = K-D-1`, `lambda(i-1) = beta(i) * lambda(i) + lambda(i+1)`,
//! ending at `lambda(l+1) = 0`. Indices past the end read as zero, which lets
//! the interval formulas run without special cases at either end.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An SNI instance: `K` messages, `D` interfering messages after the demand
/// and `U = gcd(K, D+1) - 1` before it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProblemParams {
    #[serde(rename = "K")]
    pub messages: usize,
    #[serde(rename = "D")]
    pub after: usize,
    #[serde(rename = "U")]
    pub before: usize,
}

impl ProblemParams {
    /// Length of the index code, `D + 1`.
    pub fn code_len(&self) -> usize {
        self.after + 1
    }
}

impl fmt::Display for ProblemParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K={} D={} U={}", self.messages, self.after, self.before)
    }
}

pub(crate) fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn derive_params(messages: usize, after: usize) -> Result<ProblemParams> {
    if messages < 3 || after < 1 || after > messages - 2 {
        return Err(Error::ParameterOutOfRange { messages, after });
    }
    let params = ProblemParams {
        messages,
        after,
        before: gcd(messages, after + 1) - 1,
    };
    // gcd(K, D+1) divides K-D-1, so it cannot exceed it.
    assert!(params.before + params.after < messages);
    Ok(params)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaChain {
    pub params: ProblemParams,
    /// `lambda(-1) = D + 1`.
    pub lambda_minus1: usize,
    /// `lambda(0) ..= lambda(l+1)`; the last entry is always zero.
    pub lambdas: Vec<usize>,
    /// `beta(0) ..= beta(l)`.
    pub betas: Vec<usize>,
    /// Chain depth `l`.
    pub l: usize,
}

impl LambdaChain {
    /// `lambda(i)` for `i >= -1`; zero past `l + 1`.
    pub fn lambda(&self, i: isize) -> usize {
        match i {
            -1 => self.lambda_minus1,
            i if i >= 0 => self.lambdas.get(i as usize).copied().unwrap_or(0),
            _ => panic!("lambda index {i} below -1"),
        }
    }

    /// `beta(i)`; zero past `l`.
    pub fn beta(&self, i: usize) -> usize {
        self.betas.get(i).copied().unwrap_or(0)
    }

    pub fn messages(&self) -> usize {
        self.params.messages
    }

    pub fn after(&self) -> usize {
        self.params.after
    }

    /// `floor(l / 2)`: index of the last even block.
    pub fn half_floor(&self) -> usize {
        self.l / 2
    }

    /// `ceil(l / 2)`: index of the last column interval.
    pub fn half_ceil(&self) -> usize {
        self.l.div_ceil(2)
    }

    /// Last nonzero remainder, which is `gcd(K, D+1)`.
    pub fn gcd(&self) -> usize {
        self.lambdas[self.l]
    }
}

pub fn compute_chain(messages: usize, after: usize) -> Result<LambdaChain> {
    let params = derive_params(messages, after)?;
    let mut lambdas = vec![messages - after - 1];
    let mut betas = Vec::new();
    let mut prev = after + 1;
    loop {
        let cur = *lambdas.last().unwrap();
        betas.push(prev / cur);
        let rem = prev % cur;
        lambdas.push(rem);
        if rem == 0 {
            break;
        }
        prev = cur;
    }
    let l = betas.len() - 1;
    Ok(LambdaChain {
        params,
        lambda_minus1: after + 1,
        lambdas,
        betas,
        l,
    })
}

pub fn gcd_of(chain: &LambdaChain) -> usize {
    chain.gcd()
}

/// Inclusive `[lo:hi]` index interval; empty when `lo > hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: isize,
    pub hi: isize,
}

impl Interval {
    pub fn new(lo: isize, hi: isize) -> Self {
        Self { lo, hi }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn len(&self) -> usize {
        if self.is_empty() {
            0
        } else {
            (self.hi - self.lo + 1) as usize
        }
    }

    pub fn contains(&self, x: usize) -> bool {
        let x = x as isize;
        self.lo <= x && x <= self.hi
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        
        if self.is_empty() {
            0..0
        } else {
            self.lo as usize..self.hi as usize + 1
        }
    }

    pub fn shifted(&self, by: isize) -> Self {
        if self.is_empty() {
            *self
        } else {
            Self::new(self.lo + by, self.hi + by)
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            write!(f, "[]")
        } else {
            write!(f, "[{}:{}]", self.lo, self.hi)
        }
    }
}

impl Serialize for Interval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.lo, self.hi].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [lo, hi] = <[isize; 2]>::deserialize(d)?;
        Ok(Self { lo, hi })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalLayout {
    /// `R_0 ..= R_{floor(l/2)+1}`.
    pub rows: Vec<Interval>,
    /// `C_0 ..= C_{ceil(l/2)}`.
    pub cols: Vec<Interval>,
    /// `C_i` shifted down by `lambda(0)`: the receivers past case (i).
    pub shifted_cols: Vec<Interval>,
    /// Leading part of each shifted column interval (two-symbol receivers).
    pub dtilde: Vec<Interval>,
    /// Trailing part of each shifted column interval.
    pub etilde: Vec<Interval>,
}

impl IntervalLayout {
    /// Receivers decoding from a single symbol of the top identity.
    pub fn head(&self, chain: &LambdaChain) -> Interval {
        Interval::new(0, chain.lambda(0) as isize - 1)
    }
}

pub fn interval_layout(chain: &LambdaChain) -> IntervalLayout {
    let k = chain.messages() as isize;
    let d = chain.after() as isize;
    let lam = |i: isize| chain.lambda(i) as isize;

    let mut rows = vec![Interval::new(0, k - lam(0) - 1)];
    for i in 1..=chain.half_floor() as isize + 1 {
        rows.push(Interval::new(k - lam(2 * (i - 1)), k - lam(2 * i) - 1));
    }

    let mut cols = Vec::new();
    let mut shifted_cols = Vec::new();
    let mut dtilde = Vec::new();
    let mut etilde = Vec::new();
    for i in 0..=chain.half_ceil() as isize {
        // For i = 0 this is [0 : beta_0 lambda_0 - 1], empty when beta_0 = 0.
        let c = Interval::new(d - lam(2 * i - 1) + 1, d - lam(2 * i + 1));
        let shifted = c.shifted(lam(0));
        debug_assert!(c.is_empty() || shifted == Interval::new(k - lam(2 * i - 1), k - lam(2 * i + 1) - 1));
        let (lead, trail) = if shifted.is_empty() {
            (shifted, shifted)
        } else {
            // beta(2i) >= 1 whenever the interval is nonempty and 2i <= l;
            // past the chain lambda(2i) = 0 and the lead is empty.
            let lead_len = (chain.beta(2 * i as usize) as isize - 1).max(0) * lam(2 * i);
            let split = shifted.lo + lead_len;
            (
                Interval::new(shifted.lo, split - 1),
                Interval::new(split, shifted.hi),
            )
        };
        cols.push(c);
        shifted_cols.push(shifted);
        dtilde.push(lead);
        etilde.push(trail);
    }

    IntervalLayout {
        rows,
        cols,
        shifted_cols,
        dtilde,
        etilde,
    }
}
