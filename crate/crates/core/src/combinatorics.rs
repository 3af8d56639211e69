//! Partitions, semistandard tableaux, and profile matrices, together with the
//! counting helpers used throughout the crate.

use crate::error::{Error, Result};
use num::BigInt;
use num::One;
use std::fmt;

pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    acc
}

/// Binomial coefficient with the convention that out-of-range indices give 0.
pub fn binomial(a: i64, b: i64) -> BigInt {
    if b < 0 || b > a || a < 0 {
        return BigInt::ZERO;
    }
    let b = b.min(a - b) as u64;
    let a = a as u64;
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for k in 0..b {
        num *= a - k;
        den *= k + 1;
    }
    num / den
}

/// n! / (parts_0! * ... * parts_k!), assuming the parts sum to n.
pub fn multinomial(n: u32, parts: &[u32]) -> BigInt {
    debug_assert_eq!(parts.iter().sum::<u32>(), n);
    let mut acc = factorial(n as u64);
    for &k in parts {
        acc /= factorial(k as u64);
    }
    acc
}

/// All length-k vectors of nonnegative integers summing to n, in ascending
/// lexicographic order.
pub fn enum_compositions(n: u32, k: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; k];
    fn rec(pos: usize, rem: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos + 1 == cur.len() {
            cur[pos] = rem;
            out.push(cur.clone());
            return;
        }
        for v in 0..=rem {
            cur[pos] = v;
            rec(pos + 1, rem - v, cur, out);
        }
    }
    if k == 0 {
        if n == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(0, n, &mut cur, &mut out);
    out
}

/// An integer partition, stored as its positive parts in weakly decreasing
/// order. The empty partition is the partition of 0.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Partition {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        assert!(parts.windows(2).all(|w| w[0] >= w[1]), "parts not weakly decreasing");
        Partition { parts }
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    /// The i-th part, 0 beyond the last one.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Conjugate partition: part j counts the rows of length > j.
    pub fn dual(&self) -> Partition {
        let cols = self.part(0);
        let parts = (0..cols)
            .map(|j| self.parts.iter().filter(|&&r| r > j).count())
            .collect();
        Partition::new(parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", inner.join(","))
    }
}

/// Partitions of n with at most max_parts parts, in decreasing lexicographic
/// order.
pub fn enum_partitions(n: usize, max_parts: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(rem: usize, max_part: usize, slots: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition::new(cur.clone()));
            return;
        }
        if slots == 0 || max_part == 0 {
            return;
        }
        for k in (1..=rem.min(max_part)).rev() {
            cur.push(k);
            rec(rem - k, k, slots - 1, cur, out);
            cur.pop();
        }
    }
    rec(n, n, max_parts, &mut cur, &mut out);
    out
}

/// A filling of a Young diagram with symbols 0..p-1, boxes stored row by row.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Tableau {
    shape: Partition,
    entries: Vec<usize>,
}

impl Tableau {
    pub fn new(shape: Partition, entries: Vec<usize>) -> Tableau {
        assert_eq!(entries.len(), shape.n(), "entry count must match shape");
        Tableau { shape, entries }
    }

    /// The superstandard filling: every box of row j holds symbol j.
    pub fn superstandard(shape: &Partition) -> Tableau {
        let mut entries = Vec::with_capacity(shape.n());
        for (row, &len) in shape.parts().iter().enumerate() {
            entries.extend(std::iter::repeat(row).take(len));
        }
        Tableau { shape: shape.clone(), entries }
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    /// Entries in box order, rows read left to right, top to bottom.
    pub fn reading_word(&self) -> &[usize] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> usize {
        let offset: usize = self.shape.parts()[..row].iter().sum();
        self.entries[offset + col]
    }

    /// Number of boxes holding each symbol.
    pub fn weight(&self, p: usize) -> Vec<u32> {
        let mut w = vec![0u32; p];
        for &e in &self.entries {
            w[e] += 1;
        }
        w
    }

    pub fn is_semistandard(&self) -> bool {
        let mut offset = 0;
        for (row, &len) in self.shape.parts().iter().enumerate() {
            for col in 0..len {
                let v = self.entries[offset + col];
                if col > 0 && self.entries[offset + col - 1] > v {
                    return false;
                }
                if row > 0 {
                    let above_offset: usize = self.shape.parts()[..row - 1].iter().sum();
                    if self.entries[above_offset + col] >= v {
                        return false;
                    }
                }
            }
            offset += len;
        }
        true
    }

    /// Profile against the superstandard tableau of the same shape: entry
    /// (i, j) counts the boxes of row j holding symbol i.
    pub fn profile(&self, p: usize) -> Profile {
        let mut d = vec![0u32; p * p];
        let mut offset = 0;
        for (row, &len) in self.shape.parts().iter().enumerate() {
            for col in 0..len {
                d[self.entries[offset + col] * p + row] += 1;
            }
            offset += len;
        }
        Profile { p, d }
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut offset = 0;
        let mut first = true;
        for &len in self.shape.parts() {
            if !first {
                write!(f, "/")?;
            }
            first = false;
            for col in 0..len {
                write!(f, "{}", self.entries[offset + col] + 1)?;
            }
            offset += len;
        }
        Ok(())
    }
}

/// Semistandard tableaux of the given shape over symbols 0..p-1, ordered
/// lexicographically by reading word.
pub fn enum_ssyt(shape: &Partition, p: usize) -> Vec<Tableau> {
    let n = shape.n();
    let mut boxes = Vec::with_capacity(n);
    for (row, &len) in shape.parts().iter().enumerate() {
        for col in 0..len {
            boxes.push((row, col));
        }
    }
    let row_offset: Vec<usize> = shape
        .parts()
        .iter()
        .scan(0, |acc, &len| {
            let v = *acc;
            *acc += len;
            Some(v)
        })
        .collect();
    let mut out = Vec::new();
    let mut entries = vec![0usize; n];
    fn rec(
        b: usize,
        boxes: &[(usize, usize)],
        row_offset: &[usize],
        p: usize,
        entries: &mut Vec<usize>,
        out: &mut Vec<Tableau>,
        shape: &Partition,
    ) {
        if b == boxes.len() {
            out.push(Tableau { shape: shape.clone(), entries: entries.clone() });
            return;
        }
        let (row, col) = boxes[b];
        let mut lo = 0usize;
        if col > 0 {
            lo = lo.max(entries[row_offset[row] + col - 1]);
        }
        if row > 0 {
            lo = lo.max(entries[row_offset[row - 1] + col] + 1);
        }
        for v in lo..p {
            entries[row_offset[row] + col] = v;
            rec(b + 1, boxes, row_offset, p, entries, out, shape);
        }
    }
    rec(0, &boxes, &row_offset, p, &mut entries, &mut out, shape);
    out
}

/// A p x p matrix of nonnegative integers recording, for a pair of words or a
/// pair of tableaux, how many positions move symbol j to symbol i. Stored row
/// major; the derived ordering is lexicographic on the flattened entries.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Profile {
    p: usize,
    d: Vec<u32>,
}

impl Profile {
    pub fn new(p: usize, d: Vec<u32>) -> Profile {
        assert_eq!(d.len(), p * p);
        Profile { p, d }
    }

    pub fn from_rows(rows: &[&[u32]]) -> Profile {
        let p = rows.len();
        let mut d = Vec::with_capacity(p * p);
        for row in rows {
            assert_eq!(row.len(), p);
            d.extend_from_slice(row);
        }
        Profile { p, d }
    }

    pub fn diagonal(mu: &[u32]) -> Profile {
        let p = mu.len();
        let mut d = vec![0u32; p * p];
        for (i, &v) in mu.iter().enumerate() {
            d[i * p + i] = v;
        }
        Profile { p, d }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.d.iter().sum()
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.d[i * self.p + j]
    }

    pub fn entries(&self) -> &[u32] {
        &self.d
    }

    pub fn transpose(&self) -> Profile {
        let p = self.p;
        let mut d = vec![0u32; p * p];
        for i in 0..p {
            for j in 0..p {
                d[j * p + i] = self.d[i * p + j];
            }
        }
        Profile { p, d }
    }

    pub fn row_sums(&self) -> Vec<u32> {
        (0..self.p).map(|i| (0..self.p).map(|j| self.get(i, j)).sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<u32> {
        (0..self.p).map(|j| (0..self.p).map(|i| self.get(i, j)).sum()).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.p).all(|i| (0..self.p).all(|j| i == j || self.get(i, j) == 0))
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.p).all(|i| (i + 1..self.p).all(|j| self.get(i, j) == 0))
    }

    /// The profile with entry (i, j) shifted by delta, or None when the shift
    /// would make the entry negative.
    pub fn with_delta(&self, i: usize, j: usize, delta: i32) -> Option<Profile> {
        let cur = self.get(i, j) as i64 + delta as i64;
        if cur < 0 {
            return None;
        }
        let mut d = self.d.clone();
        d[i * self.p + j] = cur as u32;
        Some(Profile { p: self.p, d })
    }

    /// Number of word pairs with this profile: n! over the product of entry
    /// factorials.
    pub fn orbit_size(&self) -> BigInt {
        multinomial(self.n(), &self.d)
    }

    /// The row-sorted tableau whose profile this is; the column sums must form
    /// a partition for the shape to exist.
    pub fn sorted_tableau(&self) -> Result<Tableau> {
        let cols = self.col_sums();
        let mut trimmed = cols.clone();
        while trimmed.last() == Some(&0) {
            trimmed.pop();
        }
        if trimmed.windows(2).any(|w| w[0] < w[1]) || trimmed.iter().any(|&c| c == 0) {
            return Err(Error::BadInput(format!(
                "column sums {trimmed:?} do not form a partition"
            )));
        }
        let shape = Partition::new(trimmed.iter().map(|&c| c as usize).collect());
        let mut entries = Vec::with_capacity(shape.n());
        for j in 0..shape.num_parts() {
            for i in 0..self.p {
                entries.extend(std::iter::repeat(i).take(self.get(i, j) as usize));
            }
        }
        Ok(Tableau::new(shape, entries))
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.p)
            .map(|i| {
                (0..self.p)
                    .map(|j| self.get(i, j).to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        write!(f, "[{}]", rows.join(";"))
    }
}

/// All profiles with entry sum n, in ascending lexicographic order on the
/// flattened matrix.
pub fn enum_profiles(n: u32, p: usize) -> Vec<Profile> {
    enum_compositions(n, p * p)
        .into_iter()
        .map(|d| Profile { p, d })
        .collect()
}

/// dim of the invariant algebra: profiles of n over p symbols.
pub fn profile_count(n: u32, p: usize) -> BigInt {
    let pp = (p * p) as i64;
    binomial(n as i64 + pp - 1, pp - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_conventions() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(5, -1), BigInt::ZERO);
        assert_eq!(binomial(3, 4), BigInt::ZERO);
        assert_eq!(binomial(0, 0), BigInt::one());
    }

    #[test]
    fn multinomial_value() {
        assert_eq!(multinomial(4, &[2, 1, 1]), BigInt::from(12));
        assert_eq!(multinomial(0, &[0, 0]), BigInt::one());
    }

    #[test]
    fn partition_enumeration_order() {
        let parts = enum_partitions(4, 4);
        let shown: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
        assert_eq!(shown, vec!["(4)", "(3,1)", "(2,2)", "(2,1,1)", "(1,1,1,1)"]);
        let parts = enum_partitions(4, 2);
        let shown: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
        assert_eq!(shown, vec!["(4)", "(3,1)", "(2,2)"]);
        assert_eq!(enum_partitions(0, 3).len(), 1);
    }

    #[test]
    fn dual_involution() {
        for n in 0..=12 {
            for lambda in enum_partitions(n, n) {
                assert_eq!(lambda.dual().dual(), lambda);
                assert_eq!(lambda.dual().n(), lambda.n());
            }
        }
        assert_eq!(Partition::new(vec![3, 1]).dual(), Partition::new(vec![2, 1, 1]));
    }

    #[test]
    fn ssyt_enumeration() {
        // Shape (2,1) over 3 symbols has 8 semistandard fillings.
        let shape = Partition::new(vec![2, 1]);
        let tabs = enum_ssyt(&shape, 3);
        assert_eq!(tabs.len(), 8);
        assert!(tabs.iter().all(|t| t.is_semistandard()));
        // Lexicographic on reading words.
        let words: Vec<Vec<usize>> = tabs.iter().map(|t| t.reading_word().to_vec()).collect();
        let mut sorted = words.clone();
        sorted.sort();
        assert_eq!(words, sorted);
        // Two-row shapes over 2 symbols: single column pair forces 0/1.
        let shape = Partition::new(vec![2, 2]);
        assert_eq!(enum_ssyt(&shape, 2).len(), 1);
        // More parts than symbols: none.
        let shape = Partition::new(vec![1, 1, 1]);
        assert_eq!(enum_ssyt(&shape, 2).len(), 0);
    }

    #[test]
    fn ssyt_counts_match_hook_content() {
        // Number of SSYT of shape lambda over p symbols, from the hook content
        // formula, for a couple of shapes.
        // shape (2): p(p+1)/2, shape (1,1): p(p-1)/2
        for p in 1..=4 {
            let two = Partition::new(vec![2]);
            assert_eq!(enum_ssyt(&two, p).len(), p * (p + 1) / 2);
            let oneone = Partition::new(vec![1, 1]);
            assert_eq!(enum_ssyt(&oneone, p).len(), p * (p - 1) / 2);
        }
    }

    #[test]
    fn superstandard_profile_is_diagonal() {
        let shape = Partition::new(vec![3, 2]);
        let t = Tableau::superstandard(&shape);
        let d = t.profile(3);
        assert!(d.is_diagonal());
        assert_eq!(d.get(0, 0), 3);
        assert_eq!(d.get(1, 1), 2);
    }

    #[test]
    fn profile_roundtrip_through_sorted_tableau() {
        let shape = Partition::new(vec![2, 1]);
        for t in enum_ssyt(&shape, 3) {
            let d = t.profile(3);
            let back = d.sorted_tableau().unwrap();
            // Semistandard rows are sorted, so the roundtrip is exact.
            assert_eq!(back, t);
        }
    }

    #[test]
    fn profile_enumeration_is_lex_sorted_and_complete() {
        let profiles = enum_profiles(3, 2);
        assert_eq!(BigInt::from(profiles.len()), profile_count(3, 2));
        let mut sorted = profiles.clone();
        sorted.sort();
        assert_eq!(profiles, sorted);
        assert_eq!(profiles[0], Profile::from_rows(&[&[0, 0], &[0, 3]]));
    }

    #[test]
    fn transpose_and_sums() {
        let d = Profile::from_rows(&[&[1, 2], &[3, 4]]);
        assert_eq!(d.transpose(), Profile::from_rows(&[&[1, 3], &[2, 4]]));
        assert_eq!(d.row_sums(), vec![3, 7]);
        assert_eq!(d.col_sums(), vec![4, 6]);
        assert_eq!(d.n(), 10);
        assert!(!d.is_lower_triangular());
        assert!(Profile::from_rows(&[&[1, 0], &[3, 4]]).is_lower_triangular());
    }

    #[test]
    fn orbit_sizes_sum_to_all_pairs() {
        // Every word pair has exactly one profile, so orbit sizes over all
        // profiles sum to (p^2)^n.
        let total: BigInt = enum_profiles(3, 2).iter().map(Profile::orbit_size).sum();
        assert_eq!(total, BigInt::from(64));
    }
}
