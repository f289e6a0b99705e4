//! Integer partitions and the partition families used to index decompositions.
//!
//! A [`Partition`] never stores trailing zeros. Rows and columns are 1-indexed
//! whenever a cell `(row, column)` is mentioned.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// Builds a partition, dropping trailing zeros. Fails if the parts increase.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::BadPartition(format!("{parts:?}")));
        }
        Ok(Partition { parts })
    }

    /// Sorts arbitrary nonnegative parts into a partition.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition { parts }
    }

    pub(crate) fn from_vec_unchecked(parts: Vec<u32>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        debug_assert!(parts.last() != Some(&0));
        Partition { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Zero-indexed part, zero past the end.
    pub fn get(&self, i: usize) -> u32 {
        self.parts.get(i).copied().unwrap_or(0)
    }

    pub fn first(&self) -> u32 {
        self.get(0)
    }

    pub fn transpose(&self) -> Partition {
        let width = self.first() as usize;
        let parts = (1..=width as u32)
            .map(|j| self.parts.iter().filter(|&&p| p >= j).count() as u32)
            .collect();
        Partition { parts }
    }

    /// Size of the main diagonal.
    pub fn durfee_rank(&self) -> u32 {
        self.parts
            .iter()
            .enumerate()
            .take_while(|(i, &p)| p as usize > *i)
            .count() as u32
    }

    pub fn is_self_conjugate(&self) -> bool {
        *self == self.transpose()
    }

    /// Young diagram containment `other ⊆ self`.
    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.parts.iter().zip(&self.parts).all(|(a, b)| a <= b)
    }

    pub fn contains_cell(&self, row: usize, col: usize) -> bool {
        row >= 1 && col >= 1 && self.get(row - 1) as usize >= col
    }

    /// Deletes the first row and the first column.
    pub fn strip_first_hook(&self) -> Partition {
        let parts = self.parts.iter().skip(1).map(|p| p - 1).filter(|&p| p > 0).collect();
        Partition { parts }
    }

    /// Every partition of `n`, in reverse lexicographic order.
    pub fn all_of_size(n: u32) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fill_partitions(n, n, &mut cur, &mut out);
        out
    }

    /// Every partition with `|λ| <= n`, sorted by size then parts.
    pub fn all_up_to(n: u32) -> Vec<Partition> {
        let mut out: Vec<Partition> = (0..=n).flat_map(Partition::all_of_size).collect();
        out.sort();
        out
    }

    /// Partitions of size `n` with at most `rows` rows and parts at most `cols`.
    pub fn in_box(n: u32, rows: usize, cols: u32) -> Vec<Partition> {
        Partition::all_of_size(n)
            .into_iter()
            .filter(|p| p.len() <= rows && p.first() <= cols)
            .collect()
    }

    /// Partitions of size `n` contained in `self`.
    pub fn sub_partitions_of_size(&self, n: u32) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        self.fill_contained(0, n, u32::MAX, &mut cur, &mut out);
        out
    }

    fn fill_contained(&self, row: usize, left: u32, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if left == 0 {
            out.push(Partition { parts: cur.clone() });
            return;
        }
        if row >= self.len() {
            return;
        }
        let hi = left.min(cap).min(self.parts[row]);
        for part in (1..=hi).rev() {
            cur.push(part);
            self.fill_contained(row + 1, left - part, part, cur, out);
            cur.pop();
        }
    }

    /// Frobenius coordinates `(a_1 > ... > a_r | b_1 > ... > b_r)`: arm and leg lengths
    /// of the diagonal hooks.
    pub fn frobenius(&self) -> (Vec<u32>, Vec<u32>) {
        let r = self.durfee_rank() as usize;
        let t = self.transpose();
        let arms = (0..r).map(|i| self.parts[i] - i as u32 - 1).collect();
        let legs = (0..r).map(|i| t.parts[i] - i as u32 - 1).collect();
        (arms, legs)
    }
}

fn fill_partitions(left: u32, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if left == 0 {
        out.push(Partition { parts: cur.clone() });
        return;
    }
    for part in (1..=left.min(cap)).rev() {
        cur.push(part);
        fill_partitions(left - part, part, cur, out);
        cur.pop();
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size().cmp(&other.size()).then_with(|| self.parts.cmp(&other.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "0");
        }
        let strs: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", strs.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|_| Error::BadPartition(s.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts).map_err(|_| Error::BadPartition(s.to_string()))
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<&[u32]> for Partition {
    /// Panics on increasing input; intended for literals.
    fn from(parts: &[u32]) -> Self {
        Partition::new(parts.to_vec()).expect("parts must be weakly decreasing")
    }
}

impl<const K: usize> From<[u32; K]> for Partition {
    fn from(parts: [u32; K]) -> Self {
        Partition::from(&parts[..])
    }
}

/// Self-conjugate `μ` with `2i = |μ| + rank(μ)`.
pub fn self_conjugate_with_index(i: u32) -> Vec<Partition> {
    // |μ| <= 2i bounds the search
    (0..=2 * i)
        .flat_map(Partition::all_of_size)
        .filter(|mu| mu.is_self_conjugate() && mu.size() + mu.durfee_rank() == 2 * i)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// Members of `Q_{-1}` of size `2i`, built by prepending a first row and column
/// to smaller members.
pub fn q_minus(i: u32) -> Vec<Partition> {
    let mut out: BTreeSet<Partition> = BTreeSet::new();
    if i == 0 {
        out.insert(Partition::empty());
        return out.into_iter().collect();
    }
    for inner_half in 0..i {
        let first = i - inner_half;
        for inner in q_minus(inner_half) {
            if let Some(mu) = extend_q_minus(&inner, first) {
                out.insert(mu);
            }
        }
    }
    out.into_iter().collect()
}

/// Wraps `inner` with a first row of length `first` and `first + 1` rows in total.
fn extend_q_minus(inner: &Partition, first: u32) -> Option<Partition> {
    if inner.len() > first as usize || inner.first() + 1 > first {
        return None;
    }
    let mut parts = vec![first];
    parts.extend((0..first as usize).map(|j| inner.get(j) + 1));
    Some(Partition::from_vec_unchecked(parts))
}

pub fn q_plus(i: u32) -> Vec<Partition> {
    let mut out: Vec<Partition> = q_minus(i).iter().map(Partition::transpose).collect();
    out.sort();
    out
}

/// `#{μ ∈ Q_{-1} : μ_1 <= n}` by explicit enumeration.
pub fn count_q_minus_bounded(n: u32) -> u64 {
    q_minus_bounded(n).len() as u64
}

/// Members of `Q_{-1}` whose first part is at most `n`.
pub fn q_minus_bounded(n: u32) -> Vec<Partition> {
    let mut out = vec![Partition::empty()];
    for first in 1..=n {
        for inner in q_minus_bounded(first - 1) {
            if let Some(mu) = extend_q_minus(&inner, first) {
                out.push(mu);
            }
        }
    }
    out.sort();
    out
}

/// A border strip: connected skew shape without 2×2 blocks, cells listed from
/// the lowest-leftmost cell along the rim.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BorderStrip {
    pub cells: Vec<(usize, usize)>,
}

impl BorderStrip {
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn columns(&self) -> usize {
        self.cells.iter().map(|c| c.1).collect::<BTreeSet<_>>().len()
    }

    pub fn has_two_by_two(&self) -> bool {
        let set: BTreeSet<_> = self.cells.iter().copied().collect();
        set.iter()
            .any(|&(r, c)| set.contains(&(r + 1, c)) && set.contains(&(r, c + 1)) && set.contains(&(r + 1, c + 1)))
    }

    pub fn is_connected(&self) -> bool {
        let set: BTreeSet<_> = self.cells.iter().copied().collect();
        let Some(&start) = set.iter().next() else {
            return true;
        };
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some((r, c)) = stack.pop() {
            let nbrs = [(r + 1, c), (r, c + 1), (r.wrapping_sub(1), c), (r, c.wrapping_sub(1))];
            for nb in nbrs {
                if set.contains(&nb) && seen.insert(nb) {
                    stack.push(nb);
                }
            }
        }
        seen.len() == set.len()
    }
}

/// Removes the border strip of length `len` that starts at the foot of the first
/// column, `(ℓ(p), 1)`. Returns `None` when the walk runs out of rim or the
/// remainder is not a partition.
pub fn remove_first_column_strip(p: &Partition, len: usize) -> Result<Option<(Partition, BorderStrip)>> {
    if len == 0 {
        return Err(Error::ZeroStrip);
    }
    if p.is_empty() {
        return Ok(None);
    }
    let mut rows: Vec<u32> = p.parts().to_vec();
    let mut cells = Vec::with_capacity(len);
    let (mut r, mut c) = (p.len(), 1usize);
    loop {
        cells.push((r, c));
        if cells.len() == len {
            break;
        }
        if (c as u32) < p.get(r - 1) {
            c += 1;
        } else if r > 1 {
            r -= 1;
        } else {
            return Ok(None);
        }
    }
    // the last cell must end its row, otherwise a gap is left behind
    if c as u32 != p.get(r - 1) {
        return Ok(None);
    }
    for &(row, col) in &cells {
        rows[row - 1] = rows[row - 1].min(col as u32 - 1);
    }
    let rest = Partition::new(rows).ok();
    Ok(rest.map(|rest| (rest, BorderStrip { cells })))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::from(parts)
    }

    #[test]
    fn transpose_examples() {
        assert_eq!(Partition::empty().transpose(), Partition::empty());
        assert_eq!(p(&[2, 1, 1]).transpose(), p(&[3, 1]));
        assert_eq!(p(&[3, 1]).transpose(), p(&[2, 1, 1]));
    }

    #[test]
    fn durfee_examples() {
        assert_eq!(Partition::empty().durfee_rank(), 0);
        assert_eq!(p(&[2, 2, 2]).durfee_rank(), 2);
        assert_eq!(p(&[3, 1, 1]).durfee_rank(), 1);
    }

    #[test]
    fn trailing_zeros_are_dropped() {
        assert_eq!(Partition::new(vec![2, 1, 0, 0]).unwrap(), p(&[2, 1]));
        assert!(Partition::new(vec![1, 2]).is_err());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("3,1,1".parse::<Partition>().unwrap(), p(&[3, 1, 1]));
        assert_eq!("0".parse::<Partition>().unwrap(), Partition::empty());
        assert_eq!("".parse::<Partition>().unwrap(), Partition::empty());
        assert!("1,x".parse::<Partition>().is_err());
        assert!("1,2".parse::<Partition>().is_err());
        assert_eq!(p(&[2, 1]).to_string(), "2,1");
    }

    #[test]
    fn self_conjugate_examples() {
        assert_eq!(self_conjugate_with_index(0), vec![Partition::empty()]);
        assert_eq!(self_conjugate_with_index(1), vec![p(&[1])]);
        assert_eq!(self_conjugate_with_index(2), vec![p(&[2, 1])]);
        assert_eq!(self_conjugate_with_index(3), vec![p(&[2, 2]), p(&[3, 1, 1])]);
    }

    #[test]
    fn self_conjugate_matches_brute_force() {
        // enumerate every self-conjugate partition once and bucket by index
        for i in 0..=6u32 {
            let brute: Vec<Partition> = Partition::all_up_to(2 * i)
                .into_iter()
                .filter(|mu| mu.transpose() == *mu && mu.size() + mu.durfee_rank() == 2 * i)
                .collect();
            assert_eq!(self_conjugate_with_index(i), brute, "i = {i}");
        }
    }

    #[test]
    fn q_minus_examples() {
        assert_eq!(q_minus(0), vec![Partition::empty()]);
        assert_eq!(q_minus(1), vec![p(&[1, 1])]);
        assert_eq!(q_minus(2), vec![p(&[2, 1, 1])]);
        assert_eq!(q_minus(3), vec![p(&[2, 2, 2]), p(&[3, 1, 1, 1])]);
        assert_eq!(q_plus(2), vec![p(&[3, 1])]);
    }

    /// Hook-sequence characterization: Frobenius legs exceed arms by exactly one.
    fn in_q_minus_by_hooks(mu: &Partition) -> bool {
        let (arms, legs) = mu.frobenius();
        arms.iter().zip(&legs).all(|(a, b)| *b == a + 1)
    }

    #[test]
    fn q_minus_matches_hook_oracle() {
        for i in 0..=6u32 {
            let oracle: Vec<Partition> =
                Partition::all_of_size(2 * i).into_iter().filter(in_q_minus_by_hooks).collect::<BTreeSet<_>>().into_iter().collect();
            assert_eq!(q_minus(i), oracle, "i = {i}");
        }
    }

    #[test]
    fn q_plus_is_transpose_of_q_minus() {
        for i in 0..=6u32 {
            let mut t: Vec<Partition> = q_plus(i).iter().map(Partition::transpose).collect();
            t.sort();
            assert_eq!(q_minus(i), t);
        }
    }

    #[test]
    fn bounded_count_is_power_of_two() {
        assert_eq!(count_q_minus_bounded(0), 1);
        assert_eq!(count_q_minus_bounded(2), 4);
        assert_eq!(count_q_minus_bounded(3), 8);
        for n in 0..=8 {
            assert_eq!(count_q_minus_bounded(n), 1 << n);
        }
    }

    #[test]
    fn strip_examples() {
        let (rest, strip) = remove_first_column_strip(&p(&[1, 1]), 1).unwrap().unwrap();
        assert_eq!(rest, p(&[1]));
        assert_eq!(strip.cells, vec![(2, 1)]);
        assert_eq!(strip.columns(), 1);

        assert_eq!(remove_first_column_strip(&p(&[2, 2]), 1).unwrap(), None);

        let (rest, strip) = remove_first_column_strip(&p(&[2, 2, 1]), 3).unwrap().unwrap();
        assert_eq!(rest, p(&[2]));
        assert_eq!(strip.cells, vec![(3, 1), (2, 1), (2, 2)]);
        assert_eq!(strip.columns(), 2);
    }

    #[test]
    fn zero_length_strip_rejected() {
        assert_eq!(remove_first_column_strip(&p(&[1]), 0), Err(Error::ZeroStrip));
    }

    #[test]
    fn strips_are_connected_without_blocks() {
        for lam in Partition::all_up_to(10) {
            for len in 1..=lam.size() as usize {
                if let Some((rest, strip)) = remove_first_column_strip(&lam, len).unwrap() {
                    assert!(strip.is_connected(), "{lam:?} {len}");
                    assert!(!strip.has_two_by_two(), "{lam:?} {len}");
                    assert_eq!(strip.len(), len);
                    assert_eq!(rest.size() as usize + len, lam.size() as usize);
                    assert!(lam.contains(&rest));
                    for &(r, c) in &strip.cells {
                        assert!(lam.contains_cell(r, c) && !rest.contains_cell(r, c));
                    }
                }
            }
        }
    }

    #[test]
    fn transpose_is_involutive() {
        for lam in Partition::all_up_to(14) {
            assert_eq!(lam.transpose().transpose(), lam);
        }
    }

    #[test]
    fn sub_partitions_are_contained() {
        let lam = p(&[3, 2, 1]);
        let subs = lam.sub_partitions_of_size(3);
        assert_eq!(subs.len(), 3); // (3), (2,1), (1,1,1)
        assert!(subs.iter().all(|mu| lam.contains(mu)));
    }
}
