use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{BitVector, TreeKind, TreeNode};
use crate::error::{Error, Result};

/// A strictly lower triangular square `{0,1}`-matrix: a node of `T2`.
///
/// Entries are stored row-major over the full `n × n` domain; every
/// constructor rejects a nonzero entry on or above the diagonal.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LtMatrix {
    order: usize,
    entries: Vec<bool>,
}

impl LtMatrix {
    /// Build from row-major entries.
    pub fn new(order: usize, entries: Vec<bool>) -> Result<Self> {
        if entries.len() != order * order {
            return Err(Error::usage(format!(
                "expected {} entries for order {order}, got {}",
                order * order,
                entries.len()
            )));
        }
        for i in 0..order {
            for j in i..order {
                if entries[i * order + j] {
                    return Err(Error::usage(format!(
                        "entry ({i},{j}) is nonzero; matrix must be strictly lower triangular"
                    )));
                }
            }
        }
        Ok(LtMatrix { order, entries })
    }

    /// Build from rows of `0`/`1` values.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let order = rows.len();
        let mut entries = Vec::with_capacity(order * order);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != order {
                return Err(Error::usage(format!(
                    "row {i} has {} entries, expected {order}",
                    row.len()
                )));
            }
            entries.extend(row.iter().map(|&x| x != 0));
        }
        LtMatrix::new(order, entries)
    }

    pub fn empty() -> Self {
        LtMatrix::default()
    }

    pub fn zero(order: usize) -> Self {
        LtMatrix {
            order,
            entries: vec![false; order * order],
        }
    }

    /// Set the given sub-diagonal positions of a zero matrix.
    pub fn with_ones(order: usize, ones: &[(usize, usize)]) -> Result<Self> {
        let mut entries = vec![false; order * order];
        for &(i, j) in ones {
            if i >= order || j >= order {
                return Err(Error::usage(format!("entry ({i},{j}) outside order {order}")));
            }
            entries[i * order + j] = true;
        }
        LtMatrix::new(order, entries)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `A_{i,j}`; panics outside the domain.
    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(i < self.order && j < self.order, "entry ({i},{j}) outside order {}", self.order);
        self.entries[i * self.order + j]
    }

    pub fn entries(&self) -> &[bool] {
        &self.entries
    }

    pub fn count_ones(&self) -> usize {
        self.entries.iter().filter(|&&b| b).count()
    }

    /// `A↾k`.
    pub fn restrict(&self, k: usize) -> Result<LtMatrix> {
        if k > self.order {
            return Err(Error::usage(format!(
                "cannot restrict a matrix of order {} to {k}",
                self.order
            )));
        }
        Ok(self.truncate(k))
    }

    /// `A⌢v`; requires `|v| = |A|`.
    pub fn extend(&self, v: &BitVector) -> Result<LtMatrix> {
        if v.len() != self.order {
            return Err(Error::usage(format!(
                "cannot extend a matrix of order {} by a vector of length {}",
                self.order,
                v.len()
            )));
        }
        let n = self.order + 1;
        let mut entries = vec![false; n * n];
        for i in 0..self.order {
            entries[i * n..i * n + self.order]
                .copy_from_slice(&self.entries[i * self.order..(i + 1) * self.order]);
        }
        entries[self.order * n..self.order * n + self.order].copy_from_slice(v.bits());
        Ok(LtMatrix { order: n, entries })
    }

    /// Full-width row `i` (length `|A|`).
    pub fn row(&self, i: usize) -> Result<BitVector> {
        self.check_row(i)?;
        Ok(BitVector::new(
            self.entries[i * self.order..(i + 1) * self.order].to_vec(),
        ))
    }

    /// Strictly sub-diagonal part of row `i` (length `i`). Entries at index
    /// `>= i` are zero, so nothing is lost relative to [`LtMatrix::row`].
    pub fn row_prefix(&self, i: usize) -> Result<BitVector> {
        self.check_row(i)?;
        Ok(self.sub_row(i))
    }

    pub(crate) fn sub_row(&self, i: usize) -> BitVector {
        BitVector::new(self.entries[i * self.order..i * self.order + i].to_vec())
    }

    fn check_row(&self, i: usize) -> Result<()> {
        if i >= self.order {
            return Err(Error::usage(format!(
                "row {i} out of range for order {}",
                self.order
            )));
        }
        Ok(())
    }

    /// Multi-line text: the order, then one line of space-separated entries per row.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.order);
        for i in 0..self.order {
            let row: Vec<&str> = (0..self.order)
                .map(|j| if self.get(i, j) { "1" } else { "0" })
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parse the multi-line text form from an iterator of `(line_no, line)` pairs.
    pub fn parse_lines<'a, I>(lines: &mut I) -> Result<LtMatrix>
    where
        I: Iterator<Item = (usize, &'a str)>,
    {
        let (no, header) = lines
            .next()
            .ok_or_else(|| Error::parse(0, "missing matrix order"))?;
        let order: usize = header
            .trim()
            .parse()
            .map_err(|_| Error::parse(no, format!("bad matrix order `{}`", header.trim())))?;
        let mut entries = Vec::with_capacity(order * order);
        for _ in 0..order {
            let (no, line) = lines
                .next()
                .ok_or_else(|| Error::parse(no, "truncated matrix"))?;
            let row: Vec<bool> = line
                .split_whitespace()
                .map(|t| match t {
                    "0" => Ok(false),
                    "1" => Ok(true),
                    other => Err(Error::parse(no, format!("bad matrix entry `{other}`"))),
                })
                .collect::<Result<_>>()?;
            if row.len() != order {
                return Err(Error::parse(no, format!("expected {order} entries, got {}", row.len())));
            }
            entries.extend(row);
        }
        LtMatrix::new(order, entries).map_err(|e| Error::parse(no, e.to_string()))
    }

    pub fn parse_text(text: &str) -> Result<LtMatrix> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| !l.trim().is_empty());
        let m = LtMatrix::parse_lines(&mut lines)?;
        if let Some((no, _)) = lines.next() {
            return Err(Error::parse(no, "trailing input after matrix"));
        }
        Ok(m)
    }
}

impl TreeNode for LtMatrix {
    const KIND: TreeKind = TreeKind::T2;

    fn root() -> Self {
        LtMatrix::empty()
    }

    fn level(&self) -> usize {
        self.order
    }

    fn truncate(&self, k: usize) -> Self {
        assert!(k <= self.order);
        let mut entries = Vec::with_capacity(k * k);
        for i in 0..k {
            entries.extend_from_slice(&self.entries[i * self.order..i * self.order + k]);
        }
        LtMatrix { order: k, entries }
    }

    fn is_below(&self, other: &Self) -> bool {
        if self.order > other.order {
            return false;
        }
        (1..self.order).all(|i| {
            self.entries[i * self.order..i * self.order + i]
                == other.entries[i * other.order..i * other.order + i]
        })
    }

    fn meet(&self, other: &Self) -> Self {
        let n = self.order.min(other.order);
        let first_diff = (1..n)
            .find(|&i| {
                self.entries[i * self.order..i * self.order + i]
                    != other.entries[i * other.order..i * other.order + i]
            })
            .unwrap_or(n);
        self.truncate(first_diff)
    }

    fn branching(level: usize) -> u64 {
        assert!(level < 64, "branching at level {level} does not fit in u64");
        1u64 << level
    }

    fn direction_at(&self, level: usize) -> u64 {
        self.sub_row(level).as_number()
    }

    fn step(&self, dir: u64) -> Self {
        self.extend(&BitVector::from_number(self.order, dir))
            .expect("direction has the right length")
    }

    fn free_bits(from: usize, to: usize) -> u32 {
        debug_assert!(from <= to);
        (from..to).map(|j| j as u32).sum()
    }

    fn fill(&self, to: usize, bits: u64) -> Self {
        let total = Self::free_bits(self.order, to);
        let mut entries = vec![false; to * to];
        for i in 0..self.order {
            entries[i * to..i * to + self.order]
                .copy_from_slice(&self.entries[i * self.order..(i + 1) * self.order]);
        }
        let mut idx = 0u32;
        for i in self.order..to {
            for j in 0..i {
                entries[i * to + j] = bits.checked_shr(total - 1 - idx).unwrap_or(0) & 1 == 1;
                idx += 1;
            }
        }
        LtMatrix { order: to, entries }
    }

    /// Compact single-line form: rows joined by `/`, `-` for the empty matrix.
    fn to_token(&self) -> String {
        if self.order == 0 {
            return "-".to_string();
        }
        (0..self.order)
            .map(|i| {
                (0..self.order)
                    .map(|j| if self.get(i, j) { '1' } else { '0' })
                    .collect::<String>()
            })
            .collect::<Vec<_>>()
            .join("/")
    }

    fn from_token(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "-" {
            return Ok(LtMatrix::empty());
        }
        let rows: Vec<Vec<u8>> = s
            .split('/')
            .map(|r| {
                r.chars()
                    .map(|c| match c {
                        '0' => Ok(0),
                        '1' => Ok(1),
                        other => Err(Error::parse(1, format!("bad matrix character `{other}`"))),
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        LtMatrix::from_rows(&rows).map_err(|e| Error::parse(1, e.to_string()))
    }
}

impl Ord for LtMatrix {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order
            .cmp(&other.order)
            .then_with(|| self.entries.cmp(&other.entries))
    }
}

impl PartialOrd for LtMatrix {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for LtMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LtMatrix({})", self.to_token())
    }
}

impl fmt::Display for LtMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_token())
    }
}

impl Serialize for LtMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_token())
    }
}

impl<'de> Deserialize<'de> for LtMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        LtMatrix::from_token(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_upper_entries() {
        assert!(LtMatrix::from_rows(&[[0u8, 1], [0, 0]]).is_err());
        assert!(LtMatrix::from_rows(&[[1u8]]).is_err());
        assert!(LtMatrix::from_rows(&[[0u8, 0], [1, 0]]).is_ok());
    }

    #[test]
    fn extend_small_cases() {
        let one = LtMatrix::empty().extend(&BitVector::empty()).unwrap();
        assert_eq!(one, LtMatrix::zero(1));
        let two = one.extend(&BitVector::from_bits(&[0])).unwrap();
        assert_eq!(two, LtMatrix::zero(2));
        assert!(two.extend(&BitVector::from_bits(&[1])).is_err());
    }

    #[test]
    fn meet_finds_first_differing_row() {
        let a = LtMatrix::from_rows(&[[0u8, 0, 0], [1, 0, 0], [0, 1, 0]]).unwrap();
        let b = LtMatrix::from_rows(&[[0u8, 0, 0], [1, 0, 0], [1, 1, 0]]).unwrap();
        assert_eq!(a.meet(&b).order(), 2);
        let c = LtMatrix::from_rows(&[[0u8, 0], [0, 0]]).unwrap();
        assert_eq!(a.meet(&c).order(), 1);
        assert_eq!(a.meet(&a), a);
    }

    #[test]
    fn fill_and_direction_agree() {
        let base = LtMatrix::zero(2);
        for d in 0..4 {
            let s = base.step(d);
            assert_eq!(s.direction_at(2), d);
            assert_eq!(s.truncate(2), base);
        }
        // Free bits from level 2 to 4: rows 2 and 3, 2 + 3 = 5 bits.
        assert_eq!(LtMatrix::free_bits(2, 4), 5);
        let m = base.fill(4, 0b10_011);
        assert_eq!(m.sub_row(2), BitVector::from_bits(&[1, 0]));
        assert_eq!(m.sub_row(3), BitVector::from_bits(&[0, 1, 1]));
    }

    #[test]
    fn nodes_at_level_are_sorted() {
        let nodes: Vec<LtMatrix> = LtMatrix::nodes_at_level(3).collect();
        assert_eq!(nodes.len(), 8);
        assert!(nodes.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn text_round_trip() {
        let m = LtMatrix::from_rows(&[[0u8, 0, 0], [1, 0, 0], [0, 1, 0]]).unwrap();
        assert_eq!(m.to_text(), "3\n0 0 0\n1 0 0\n0 1 0\n");
        assert_eq!(LtMatrix::parse_text(&m.to_text()).unwrap(), m);
        assert_eq!(m.to_token(), "000/100/010");
        assert_eq!(LtMatrix::from_token("000/100/010").unwrap(), m);
        assert_eq!(LtMatrix::empty().to_text(), "0\n");
        assert_eq!(LtMatrix::parse_text("0\n").unwrap(), LtMatrix::empty());
    }
}
