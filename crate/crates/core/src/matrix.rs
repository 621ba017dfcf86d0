//! The `K x (D+1)` AIR encoding matrix.
//!
//! The matrix is built by alternately filling the unfilled region with
//! vertically stacked identities (rows) and side-by-side identities
//! (columns), exactly as the Euclid chain shrinks. The block geometry is
//! also derived from the chain alone ([`submatrices`]), so it can be checked
//! against the filled bits.

use std::fmt;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::chain::{compute_chain, interval_layout, IntervalLayout, LambdaChain};
use crate::error::{Error, Result};
use crate::linalg::Gf2Basis;

/// `m / n` copies of `I_n` stacked vertically, as rows of 0/1.
pub fn stacked_identity(m: usize, n: usize) -> Result<Vec<Vec<u8>>> {
    if n == 0 || !m.is_multiple_of(n) {
        return Err(Error::NotDivisible { m, n });
    }
    Ok((0..m)
        .map(|j| (0..n).map(|k| u8::from(j % n == k)).collect())
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "index")]
pub enum SubmatrixKind {
    /// The `(D+1) x (D+1)` identity on top.
    IdentityTop,
    /// `lambda(2i)` rows of `beta(2i)` side-by-side `I_{lambda(2i)}`.
    Even(usize),
    /// `beta(2i+1)` stacked copies of `I_{lambda(2i+1)}`.
    Odd(usize),
}

impl fmt::Display for SubmatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubmatrixKind::IdentityTop => write!(f, "identity-top"),
            SubmatrixKind::Even(i) => write!(f, "even({i})"),
            SubmatrixKind::Odd(i) => write!(f, "odd({i})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubmatrixRef {
    pub kind: SubmatrixKind,
    pub row_offset: usize,
    pub col_offset: usize,
    pub height: usize,
    pub width: usize,
}

impl SubmatrixRef {
    pub fn contains(&self, j: usize, k: usize) -> bool {
        (self.row_offset..self.row_offset + self.height).contains(&j)
            && (self.col_offset..self.col_offset + self.width).contains(&k)
    }

    /// Entry at local coordinates; every block is an identity repeated along
    /// its long side.
    pub fn local_entry(&self, jr: usize, kr: usize) -> bool {
        match self.kind {
            SubmatrixKind::IdentityTop => jr == kr,
            SubmatrixKind::Even(_) => kr % self.height == jr,
            SubmatrixKind::Odd(_) => jr % self.width == kr,
        }
    }
}

/// Block geometry implied by the chain: identity on top, then for each chain
/// index an even (fat) or odd (tall) block. The even(0) block is absent when
/// `beta(0) = 0`.
pub fn submatrices(chain: &LambdaChain) -> Vec<SubmatrixRef> {
    let k = chain.messages();
    let n = chain.after() + 1;
    let lam = |i: isize| chain.lambda(i);
    let mut out = vec![SubmatrixRef {
        kind: SubmatrixKind::IdentityTop,
        row_offset: 0,
        col_offset: 0,
        height: n,
        width: n,
    }];
    for idx in 0..=chain.l {
        let i = idx as isize;
        let beta = chain.beta(idx);
        if beta == 0 {
            continue;
        }
        if idx % 2 == 0 {
            out.push(SubmatrixRef {
                kind: SubmatrixKind::Even(idx / 2),
                row_offset: k - lam(i),
                col_offset: n - lam(i - 1),
                height: lam(i),
                width: beta * lam(i),
            });
        } else {
            out.push(SubmatrixRef {
                kind: SubmatrixKind::Odd(idx / 2),
                row_offset: k - lam(i - 1),
                col_offset: n - lam(i),
                height: beta * lam(i),
                width: lam(i),
            });
        }
    }
    out
}

/// Finds the block containing `(j, k)` and the local coordinates inside it.
pub fn locate_in(chain: &LambdaChain, j: usize, k: usize) -> Result<(SubmatrixRef, usize, usize)> {
    check_index("row", j, chain.messages())?;
    check_index("column", k, chain.after() + 1)?;
    submatrices(chain)
        .into_iter()
        .find(|s| s.contains(j, k))
        .map(|s| (s, j - s.row_offset, k - s.col_offset))
        .ok_or_else(|| Error::Structural(format!("({j}, {k}) lies in no block")))
}

/// Entry of the AIR matrix computed from the chain geometry only.
pub fn entry_from_chain(chain: &LambdaChain, j: usize, k: usize) -> Result<bool> {
    let (s, jr, kr) = locate_in(chain, j, k)?;
    Ok(s.local_entry(jr, kr))
}

pub(crate) fn check_index(what: &'static str, index: usize, bound: usize) -> Result<()> {
    if index < bound {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { what, index, bound })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFormat {
    Txt,
    Csv,
    Pbm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AirMatrix {
    chain: LambdaChain,
    layout: IntervalLayout,
    blocks: Vec<SubmatrixRef>,
    rows: usize,
    cols: usize,
    words: usize,
    bits: Vec<u64>,
    col_weights: Vec<usize>,
    col_support: Vec<Vec<usize>>,
}

pub fn build_air(messages: usize, after: usize) -> Result<AirMatrix> {
    let chain = compute_chain(messages, after)?;
    Ok(AirMatrix::from_chain(chain))
}

impl AirMatrix {
    pub fn from_chain(chain: LambdaChain) -> Self {
        let rows = chain.messages();
        let cols = chain.after() + 1;
        let words = cols.div_ceil(64);
        let mut m = AirMatrix {
            layout: interval_layout(&chain),
            blocks: submatrices(&chain),
            chain,
            rows,
            cols,
            words,
            bits: vec![0; rows * words],
            col_weights: Vec::new(),
            col_support: Vec::new(),
        };

        // Unfilled region: rows [top, top + height), columns [left, left + width).
        let (mut top, mut left, mut height, mut width) = (0, 0, rows, cols);
        loop {
            let (q, r) = (height / width, height % width);
            for j in 0..q * width {
                m.set(top + j, left + j % width);
            }
            if r == 0 {
                break;
            }
            top += q * width;
            height = r;

            let (q, r) = (width / height, width % height);
            for c in 0..q * height {
                m.set(top + c % height, left + c);
            }
            if r == 0 {
                break;
            }
            left += q * height;
            width = r;
        }

        m.col_support = (0..cols)
            .map(|k| (0..rows).filter(|&j| m.get(j, k)).collect())
            .collect();
        m.col_weights = m.col_support.iter().map(Vec::len).collect();
        m
    }

    fn set(&mut self, j: usize, k: usize) {
        self.bits[j * self.words + k / 64] |= 1 << (k % 64);
    }

    pub fn get(&self, j: usize, k: usize) -> bool {
        self.bits[j * self.words + k / 64] >> (k % 64) & 1 == 1
    }

    /// Number of rows, `K`.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns, `D + 1`.
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn chain(&self) -> &LambdaChain {
        &self.chain
    }

    pub fn layout(&self) -> &IntervalLayout {
        &self.layout
    }

    pub fn blocks(&self) -> &[SubmatrixRef] {
        &self.blocks
    }

    pub fn params(&self) -> crate::ProblemParams {
        self.chain.params
    }

    /// Packed bits of row `j`, least significant bit first.
    pub fn row_words(&self, j: usize) -> &[u64] {
        &self.bits[j * self.words..(j + 1) * self.words]
    }

    pub fn row_ones(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.cols).filter(move |&k| self.get(j, k))
    }

    /// Rows holding a 1 in column `k`, ascending.
    pub fn column_support(&self, k: usize) -> &[usize] {
        &self.col_support[k]
    }

    pub fn column_weight(&self, k: usize) -> Result<usize> {
        check_index("column", k, self.cols)?;
        Ok(self.col_weights[k])
    }

    pub fn locate(&self, j: usize, k: usize) -> Result<(SubmatrixRef, usize, usize)> {
        check_index("row", j, self.rows)?;
        check_index("column", k, self.cols)?;
        self.blocks
            .iter()
            .find(|s| s.contains(j, k))
            .map(|s| (*s, j - s.row_offset, k - s.col_offset))
            .ok_or_else(|| Error::Structural(format!("({j}, {k}) lies in no block")))
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows)
            .map(|j| (0..self.cols).map(|k| u8::from(self.get(j, k))).collect())
            .collect()
    }

    /// GF(2) rank of each window of `D + 1` cyclically consecutive rows,
    /// starting at every row. Diagnostic only.
    pub fn adjacent_row_ranks(&self) -> Vec<usize> {
        (0..self.rows)
            .map(|start| {
                let mut basis = Gf2Basis::new(self.cols);
                (0..self.cols)
                    .filter(|off| basis.insert(self.row_words((start + off) % self.rows).to_vec()))
                    .count()
            })
            .collect()
    }

    /// Writes the matrix one row at a time.
    pub fn write<W: Write>(&self, out: &mut W, format: MatrixFormat) -> io::Result<()> {
        if format == MatrixFormat::Pbm {
            write!(out, "P1\n{} {}\n", self.cols, self.rows)?;
        }
        let sep = if format == MatrixFormat::Csv { "," } else { "" };
        let mut line = String::with_capacity(self.cols * 2 + 1);
        for j in 0..self.rows {
            line.clear();
            for k in 0..self.cols {
                if k > 0 {
                    line.push_str(sep);
                }
                line.push(if self.get(j, k) { '1' } else { '0' });
            }
            line.push('\n');
            out.write_all(line.as_bytes())?;
        }
        Ok(())
    }
}

impl fmt::Display for AirMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut buf = Vec::new();
        self.write(&mut buf, MatrixFormat::Txt).map_err(|_| fmt::Error)?;
        f.write_str(&String::from_utf8_lossy(&buf))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ones(m: &AirMatrix, j: usize) -> Vec<usize> {
        m.row_ones(j).collect()
    }

    #[test]
    fn stacked_identity_examples() {
        assert_eq!(
            stacked_identity(4, 2).unwrap(),
            vec![vec![1, 0], vec![0, 1], vec![1, 0], vec![0, 1]]
        );
        assert_eq!(
            stacked_identity(3, 3).unwrap(),
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]
        );
        let s = stacked_identity(12, 4).unwrap();
        for (j, row) in s.iter().enumerate() {
            assert_eq!(row.iter().position(|&b| b == 1), Some(j % 4));
            assert_eq!(row.iter().map(|&b| b as usize).sum::<usize>(), 1);
        }
        assert_eq!(stacked_identity(5, 2), Err(Error::NotDivisible { m: 5, n: 2 }));
        assert_eq!(stacked_identity(5, 0), Err(Error::NotDivisible { m: 5, n: 0 }));
    }

    #[test]
    fn rows_12_7() {
        let m = build_air(12, 7).unwrap();
        for j in 0..8 {
            assert_eq!(ones(&m, j), vec![j]);
        }
        assert_eq!(ones(&m, 8), vec![0, 4]);
        assert_eq!(ones(&m, 9), vec![1, 5]);
        assert_eq!(ones(&m, 10), vec![2, 6]);
        assert_eq!(ones(&m, 11), vec![3, 7]);
    }

    #[test]
    fn spot_rows_33_20() {
        let m = build_air(33, 20).unwrap();
        assert_eq!(ones(&m, 21), vec![0, 12]);
        assert_eq!(ones(&m, 30), vec![9, 12, 15, 18]);
        assert_eq!(ones(&m, 32), vec![11, 14, 17, 20]);
    }

    #[test]
    fn divisible_case_is_stacked_identities() {
        let m = build_air(12, 3).unwrap();
        assert_eq!(m.to_rows(), stacked_identity(12, 4).unwrap());
        for k in 0..4 {
            assert_eq!(m.column_weight(k).unwrap(), 3);
        }
    }

    #[test]
    fn locate_examples() {
        let m = build_air(12, 7).unwrap();
        let (s, jr, kr) = m.locate(8, 0).unwrap();
        assert_eq!(s.kind, SubmatrixKind::Even(0));
        assert_eq!((jr, kr), (0, 0));

        let m = build_air(33, 20).unwrap();
        let (s, jr, kr) = m.locate(5, 5).unwrap();
        assert_eq!(s.kind, SubmatrixKind::IdentityTop);
        assert_eq!((jr, kr), (5, 5));

        let (s, jr, kr) = m.locate(30, 12).unwrap();
        assert_eq!(s.kind, SubmatrixKind::Even(1));
        assert_eq!((s.height, s.width), (3, 9));
        assert_eq!((jr, kr), (0, 0));
        assert!(m.get(30, 12));

        assert!(matches!(m.locate(33, 0), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(m.locate(0, 21), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn column_weight_examples() {
        let m = build_air(12, 7).unwrap();
        assert_eq!(m.column_weight(0).unwrap(), 2);
        let m = build_air(33, 20).unwrap();
        assert_eq!(m.column_weight(12).unwrap(), 3);
        assert_eq!(m.column_support(12), &[12, 21, 30]);
        assert!(m.column_weight(21).is_err());
    }

    #[test]
    fn beta_zero_drops_even_zero() {
        let m = build_air(432, 175).unwrap();
        assert!(!m.blocks().iter().any(|b| b.kind == SubmatrixKind::Even(0)));
        assert_eq!(m.blocks().len(), 1 + 3);
    }

    #[test]
    fn local_coordinates_agree_with_modular_reduction() {
        // Where the modulus exceeds the local index, offsets and the
        // modular reduction rules give the same coordinates.
        for k in 3..=40 {
            for d in 1..=k - 2 {
                let m = build_air(k, d).unwrap();
                let c = m.chain();
                let n = d + 1;
                let modulo = |x: usize, q: usize| if q == 0 { x } else { x % q };
                for j in 0..k {
                    for col in 0..n {
                        let (s, jr, kr) = m.locate(j, col).unwrap();
                        let (mj, mk) = match s.kind {
                            SubmatrixKind::IdentityTop => (j, col),
                            SubmatrixKind::Even(0) => (j % n, col),
                            SubmatrixKind::Odd(i) => (
                                modulo(j, k - c.lambda(2 * i as isize)),
                                modulo(col, n - c.lambda(2 * i as isize + 1)),
                            ),
                            SubmatrixKind::Even(i) => (
                                modulo(j, k - c.lambda(2 * i as isize)),
                                modulo(col, n - c.lambda(2 * i as isize - 1)),
                            ),
                        };
                        let odd_zero_after_empty_even =
                            s.kind == SubmatrixKind::Odd(0) && c.beta(0) == 0;
                        if !odd_zero_after_empty_even {
                            assert_eq!((jr, kr), (mj, mk), "K={k} D={d} ({j},{col}) {}", s.kind);
                        } else {
                            assert_eq!(jr % n, mj % n);
                        }
                    }
                }
            }
        }
    }

    fn same_as_fill(m: &AirMatrix) -> bool {
        (0..m.rows()).all(|j| (0..m.cols()).all(|c| entry_from_chain(m.chain(), j, c).unwrap() == m.get(j, c)))
    }

    #[test]
    fn block_rules_reconstruct_the_fill() {
        for k in 3..=60 {
            for d in 1..=k - 2 {
                assert!(same_as_fill(&build_air(k, d).unwrap()), "K={k} D={d}");
            }
        }
    }

    mod large {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn block_rules_reconstruct((k, d) in (61usize..=300).prop_flat_map(|k| (Just(k), 1..=k - 2))) {
                prop_assert!(same_as_fill(&build_air(k, d).unwrap()));
            }
        }
    }

    #[test]
    fn formats() {
        let m = build_air(12, 7).unwrap();
        let mut txt = Vec::new();
        m.write(&mut txt, MatrixFormat::Txt).unwrap();
        let txt = String::from_utf8(txt).unwrap();
        assert_eq!(txt.lines().count(), 12);
        assert_eq!(txt.lines().next(), Some("10000000"));
        assert_eq!(txt.lines().nth(8), Some("10001000"));

        let mut csv = Vec::new();
        m.write(&mut csv, MatrixFormat::Csv).unwrap();
        assert!(String::from_utf8(csv).unwrap().starts_with("1,0,0,0,0,0,0,0\n0,1,"));

        let mut pbm = Vec::new();
        m.write(&mut pbm, MatrixFormat::Pbm).unwrap();
        assert!(String::from_utf8(pbm).unwrap().starts_with("P1\n8 12\n10000000\n01000000\n"));
    }

    #[test]
    fn adjacent_rows_have_full_rank_on_examples() {
        for (k, d) in [(12, 7), (33, 20), (12, 3)] {
            let m = build_air(k, d).unwrap();
            assert!(m.adjacent_row_ranks().iter().all(|&r| r == d + 1));
        }
    }
}
