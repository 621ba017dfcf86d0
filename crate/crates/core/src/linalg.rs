//! Small elimination kernels: an incremental GF(2) basis over packed rows,
//! an incremental basis over a prime field, and a Gauss-Jordan solver.

use crate::field::PrimeField;

/// Echelon basis of GF(2) row vectors packed into `u64` words.
#[derive(Debug, Clone)]
pub struct Gf2Basis {
    words: usize,
    // (pivot bit, row); each row has its pivot as lowest set bit of the
    // reduced form, and no other basis row has that bit set.
    rows: Vec<(usize, Vec<u64>)>,
}

fn lowest_bit(v: &[u64]) -> Option<usize> {
    v.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

impl Gf2Basis {
    pub fn new(bits: usize) -> Self {
        Self {
            words: bits.div_ceil(64),
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        debug_assert_eq!(v.len(), self.words);
        for (pivot, row) in &self.rows {
            if v[pivot / 64] >> (pivot % 64) & 1 == 1 {
                xor_into(&mut v, row);
            }
        }
        v
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: Vec<u64>) -> bool {
        let v = self.reduce(v);
        match lowest_bit(&v) {
            None => false,
            Some(pivot) => {
                for (_, row) in self.rows.iter_mut() {
                    if row[pivot / 64] >> (pivot % 64) & 1 == 1 {
                        xor_into(row, &v);
                    }
                }
                self.rows.push((pivot, v));
                true
            }
        }
    }

    pub fn contains(&self, v: Vec<u64>) -> bool {
        self.reduce(v).iter().all(|&w| w == 0)
    }
}

/// Echelon basis of row vectors over a prime field.
#[derive(Debug, Clone)]
pub struct FpBasis {
    field: PrimeField,
    len: usize,
    // (pivot column, row normalised to 1 at the pivot)
    rows: Vec<(usize, Vec<u32>)>,
}

impl FpBasis {
    pub fn new(field: PrimeField, len: usize) -> Self {
        Self {
            field,
            len,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, mut v: Vec<u32>) -> Vec<u32> {
        debug_assert_eq!(v.len(), self.len);
        let f = self.field;
        for (pivot, row) in &self.rows {
            let factor = v[*pivot];
            if factor != 0 {
                for (x, r) in v.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(factor, *r));
                }
            }
        }
        v
    }

    pub fn insert(&mut self, v: Vec<u32>) -> bool {
        let mut v = self.reduce(v);
        let Some(pivot) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let f = self.field;
        let inv = f.inv(v[pivot]).expect("nonzero pivot");
        for x in v.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for (_, row) in self.rows.iter_mut() {
            let factor = row[pivot];
            if factor != 0 {
                for (r, x) in row.iter_mut().zip(&v) {
                    *r = f.sub(*r, f.mul(factor, *x));
                }
            }
        }
        self.rows.push((pivot, v));
        true
    }

    pub fn contains(&self, v: Vec<u32>) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }
}

/// Solves `A x = b` over the field by Gauss-Jordan elimination; free
/// variables are set to zero. `a` is row-major with `cols` columns.
pub fn solve(field: &PrimeField, a: &[Vec<u32>], b: &[u32], cols: usize) -> Option<Vec<u32>> {
    let f = *field;
    let mut m: Vec<Vec<u32>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r: Vec<u32> = row.iter().map(|&x| x % f.modulus()).collect();
            r.push(rhs % f.modulus());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut next = 0;
    for c in 0..cols {
        let Some(p) = (next..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(next, p);
        let inv = f.inv(m[next][c]).expect("nonzero pivot");
        for x in m[next].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot_row = m[next].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != next && row[c] != 0 {
                let factor = row[c];
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x = f.sub(*x, f.mul(factor, *p));
                }
            }
        }
        pivots.push(c);
        next += 1;
    }
    if m[next..].iter().any(|row| row[cols] != 0) {
        return None;
    }
    let mut x = vec![0; cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = m[i][cols];
    }
    Some(x)
}
