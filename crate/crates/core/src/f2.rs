//! Bit vectors and matrices over the two-element field.

use std::fmt;

use crate::error::{Error, Result};

/// Fixed-length bit vector; bit `i` is coordinate `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F2Vec {
    len: usize,
    words: Vec<u64>,
}

impl F2Vec {
    pub fn zeros(len: usize) -> Self {
        F2Vec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = F2Vec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Low `len` bits of `mask`.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!(len <= 64, "mask form holds at most 64 coordinates");
        let mut v = F2Vec::zeros(len);
        if len > 0 {
            v.words[0] = if len == 64 { mask } else { mask & ((1u64 << len) - 1) };
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        if value {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn xor_assign(&mut self, other: &F2Vec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Size of the common support.
    pub fn overlap(&self, other: &F2Vec) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Standard inner product over the field.
    pub fn dot(&self, other: &F2Vec) -> bool {
        self.overlap(other) % 2 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    /// Keeps only coordinates in `mask` (first word only).
    pub(crate) fn masked_low(&self, mask: u64) -> u64 {
        self.words.first().copied().unwrap_or(0) & mask
    }

    /// New vector made of the listed coordinates in order.
    pub fn select(&self, coords: &[usize]) -> F2Vec {
        let mut v = F2Vec::zeros(coords.len());
        for (k, &c) in coords.iter().enumerate() {
            if self.get(c) {
                v.set(k, true);
            }
        }
        v
    }

    pub fn concat(&self, other: &F2Vec) -> F2Vec {
        let mut v = F2Vec::zeros(self.len + other.len);
        for i in self.ones() {
            v.set(i, true);
        }
        for i in other.ones() {
            v.set(self.len + i, true);
        }
        v
    }
}

impl fmt::Display for F2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.get(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// Incremental row-space basis kept in echelon form keyed by leading bit.
#[derive(Clone, Debug)]
pub(crate) struct XorBasis {
    rows: Vec<F2Vec>,
}

impl XorBasis {
    pub(crate) fn new() -> Self {
        XorBasis { rows: Vec::new() }
    }

    /// Reduces `v` against the basis; returns the remainder.
    pub(crate) fn reduce(&self, mut v: F2Vec) -> F2Vec {
        for r in &self.rows {
            let lead = r.first_one().expect("basis rows are nonzero");
            if v.get(lead) {
                v.xor_assign(r);
            }
        }
        v
    }

    /// Inserts `v`; returns whether the rank grew.
    pub(crate) fn insert(&mut self, v: F2Vec) -> bool {
        let v = self.reduce(v);
        let Some(lead) = v.first_one() else {
            return false;
        };
        for r in &mut self.rows {
            if r.get(lead) {
                r.xor_assign(&v);
            }
        }
        self.rows.push(v);
        true
    }

    pub(crate) fn into_rows(self) -> Vec<F2Vec> {
        self.rows
    }
}

/// Reduced row-echelon form: nonzero rows sorted by pivot, every pivot column
/// containing a single one. Returns rows and their pivot columns.
pub fn rref(rows: &[F2Vec]) -> (Vec<F2Vec>, Vec<usize>) {
    let mut basis = XorBasis::new();
    for r in rows {
        basis.insert(r.clone());
    }
    let mut out = basis.into_rows();
    out.sort_by_key(|r| r.first_one());
    let pivots = out.iter().map(|r| r.first_one().expect("nonzero")).collect();
    (out, pivots)
}

/// Rank of a set of vectors.
pub fn rank(rows: &[F2Vec]) -> usize {
    let mut basis = XorBasis::new();
    rows.iter().filter(|r| basis.insert((*r).clone())).count()
}

/// Matrix over the field stored by rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    cols: usize,
    rows: Vec<F2Vec>,
}

impl F2Matrix {
    pub fn new(cols: usize, rows: Vec<F2Vec>) -> Result<Self> {
        if let Some(bad) = rows.iter().position(|r| r.len() != cols) {
            return Err(Error::Invalid(format!(
                "row {bad} has length {} but the matrix has {cols} columns",
                rows[bad].len()
            )));
        }
        Ok(F2Matrix { cols, rows })
    }

    pub fn identity(k: usize) -> Self {
        let rows = (0..k)
            .map(|i| {
                let mut v = F2Vec::zeros(k);
                v.set(i, true);
                v
            })
            .collect();
        F2Matrix { cols: k, rows }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        F2Matrix {
            cols,
            rows: vec![F2Vec::zeros(cols); rows],
        }
    }

    /// Parses lines of `0`/`1` characters, one row per line; blank lines and
    /// `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        let mut cols: Option<usize> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let indent = line.len() - line.trim_start().len();
            let mut bits = Vec::with_capacity(trimmed.len());
            for (k, ch) in trimmed.chars().enumerate() {
                match ch {
                    '0' => bits.push(false),
                    '1' => bits.push(true),
                    other => {
                        return Err(Error::parse(
                            lineno + 1,
                            indent + k + 1,
                            format!("expected 0 or 1, found {other:?}"),
                        ))
                    }
                }
            }
            match cols {
                None => cols = Some(bits.len()),
                Some(c) if c != bits.len() => {
                    return Err(Error::parse(
                        lineno + 1,
                        indent + 1,
                        format!("row has {} entries, expected {c}", bits.len()),
                    ))
                }
                _ => {}
            }
            rows.push(F2Vec::from_bits(&bits));
        }
        let cols = cols.ok_or_else(|| Error::parse(1, 1, "matrix has no rows"))?;
        Ok(F2Matrix { cols, rows })
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[F2Vec] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn column(&self, c: usize) -> F2Vec {
        let mut v = F2Vec::zeros(self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            if row.get(c) {
                v.set(r, true);
            }
        }
        v
    }

    pub fn rank(&self) -> usize {
        rank(&self.rows)
    }

    /// Rank of the columns selected by `mask` (requires at most 64 columns).
    pub fn column_rank_mask(&self, mask: u64) -> usize {
        let mut basis = [0u64; 64];
        let mut r = 0;
        for row in &self.rows {
            let mut x = row.masked_low(mask);
            while x != 0 {
                let lead = x.trailing_zeros() as usize;
                if basis[lead] == 0 {
                    basis[lead] = x;
                    r += 1;
                    break;
                }
                x ^= basis[lead];
            }
        }
        r
    }

    /// Rank of an arbitrary list of columns.
    pub fn column_rank(&self, cols: &[usize]) -> usize {
        let selected: Vec<F2Vec> = self.rows.iter().map(|r| r.select(cols)).collect();
        rank(&selected)
    }

    pub fn delete_column(&self, c: usize) -> F2Matrix {
        let keep: Vec<usize> = (0..self.cols).filter(|&k| k != c).collect();
        F2Matrix {
            cols: keep.len(),
            rows: self.rows.iter().map(|r| r.select(&keep)).collect(),
        }
    }

    /// Contraction of column `c`: pivot on a row containing it, clear the
    /// column elsewhere, then drop that row and the column. A zero column is
    /// simply deleted.
    pub fn contract_column(&self, c: usize) -> F2Matrix {
        let Some(pivot) = self.rows.iter().position(|r| r.get(c)) else {
            return self.delete_column(c);
        };
        let p = self.rows[pivot].clone();
        let rows: Vec<F2Vec> = self
            .rows
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != pivot)
            .map(|(_, r)| {
                let mut r = r.clone();
                if r.get(c) {
                    r.xor_assign(&p);
                }
                r
            })
            .collect();
        F2Matrix {
            cols: self.cols,
            rows,
        }
        .delete_column(c)
    }

    pub fn to_file_string(&self) -> String {
        self.rows.iter().map(|r| format!("{r}\n")).collect()
    }
}

impl fmt::Display for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_file_string())
    }
}
