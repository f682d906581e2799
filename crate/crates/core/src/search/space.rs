//! Ranking of head tuples.
//!
//! A head is a tuple of `n` pool indices. Each enumeration mode admits a
//! subset of tuples and orders them colexicographically, so that the last
//! slot varies slowest:
//!
//! * ordered: every tuple, rank `Σ idx[k]·Mᵏ`;
//! * multiset: non-decreasing tuples, ranked as the strictly increasing
//!   tuple `idx[k] + k` over `M + n − 1` values;
//! * subset: strictly increasing tuples, rank `Σ C(idx[k], k + 1)`.

use super::EnumerationMode;

pub(crate) fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeadSpace {
    pub mode: EnumerationMode,
    /// Pool size.
    pub m: usize,
    /// Head length.
    pub n: usize,
}

impl HeadSpace {
    /// Number of admitted heads, `None` if it does not fit in `u64`.
    pub fn total(&self) -> Option<u64> {
        let (m, n) = (self.m as u64, self.n as u64);
        match self.mode {
            EnumerationMode::OrderedDedup => m.checked_pow(self.n as u32),
            EnumerationMode::MultisetDedup => {
                if m == 0 {
                    Some(0)
                } else {
                    binomial(m + n - 1, n)
                }
            }
            EnumerationMode::SubsetOnly => binomial(m, n),
        }
    }

    fn combo_offset(&self) -> usize {
        usize::from(self.mode == EnumerationMode::MultisetDedup)
    }

    /// Whether the mode admits this tuple.
    pub fn admits(&self, idx: &[usize]) -> bool {
        if idx.len() != self.n || idx.iter().any(|&i| i >= self.m) {
            return false;
        }
        match self.mode {
            EnumerationMode::OrderedDedup => true,
            EnumerationMode::MultisetDedup => idx.windows(2).all(|w| w[0] <= w[1]),
            EnumerationMode::SubsetOnly => idx.windows(2).all(|w| w[0] < w[1]),
        }
    }

    /// Rank of an admitted tuple.
    pub fn rank(&self, idx: &[usize]) -> u64 {
        debug_assert!(self.admits(idx));
        match self.mode {
            EnumerationMode::OrderedDedup => idx.iter().rev().fold(0u64, |acc, &i| acc * self.m as u64 + i as u64),
            _ => {
                let off = self.combo_offset();
                idx.iter()
                    .enumerate()
                    .map(|(k, &i)| binomial((i + k * off) as u64, k as u64 + 1).expect("rank fits"))
                    .sum()
            }
        }
    }

    pub fn unrank(&self, mut rank: u64) -> Vec<usize> {
        let mut idx = vec![0; self.n];
        match self.mode {
            EnumerationMode::OrderedDedup => {
                for slot in idx.iter_mut() {
                    *slot = (rank % self.m as u64) as usize;
                    rank /= self.m as u64;
                }
            }
            _ => {
                let off = self.combo_offset();
                let universe = self.m + off * (self.n.saturating_sub(1));
                let mut upper = universe;
                for k in (0..self.n).rev() {
                    // Largest c < upper with C(c, k + 1) <= rank.
                    let mut c = upper - 1;
                    while binomial(c as u64, k as u64 + 1).expect("fits") > rank {
                        c -= 1;
                    }
                    rank -= binomial(c as u64, k as u64 + 1).expect("fits");
                    idx[k] = c - k * off;
                    upper = c;
                }
            }
        }
        idx
    }

    /// Steps to the tuple of the next rank; `false` past the last one.
    pub fn advance(&self, idx: &mut [usize]) -> bool {
        match self.mode {
            EnumerationMode::OrderedDedup => {
                for slot in idx.iter_mut() {
                    *slot += 1;
                    if *slot < self.m {
                        return true;
                    }
                    *slot = 0;
                }
                false
            }
            _ => {
                let off = self.combo_offset();
                let universe = self.m + off * (self.n.saturating_sub(1));
                // Work on the strictly increasing image c[k] = idx[k] + k·off.
                let c = |idx: &[usize], k: usize| idx[k] + k * off;
                for k in 0..self.n {
                    let limit = if k + 1 == self.n { universe } else { c(idx, k + 1) };
                    if c(idx, k) + 1 < limit {
                        idx[k] += 1;
                        for (j, slot) in idx.iter_mut().enumerate().take(k) {
                            *slot = j - j * off;
                        }
                        return true;
                    }
                }
                false
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(space: &HeadSpace) -> Vec<Vec<usize>> {
        // All tuples in colex order: compare from the last slot.
        let mut all: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..space.n {
            all = all.into_iter().flat_map(|t| (0..space.m).map(move |i| [t.clone(), vec![i]].concat())).collect();
        }
        let mut admitted: Vec<_> = all.into_iter().filter(|t| space.admits(t)).collect();
        admitted.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
        admitted
    }

    #[test]
    fn rank_unrank_advance_agree_with_brute_force() {
        for mode in [EnumerationMode::OrderedDedup, EnumerationMode::MultisetDedup, EnumerationMode::SubsetOnly] {
            for m in 0..6 {
                for n in 1..5 {
                    let space = HeadSpace { mode, m, n };
                    let expected = brute(&space);
                    assert_eq!(space.total(), Some(expected.len() as u64), "{mode:?} m={m} n={n}");
                    for (r, t) in expected.iter().enumerate() {
                        assert_eq!(space.rank(t), r as u64);
                        assert_eq!(&space.unrank(r as u64), t);
                    }
                    if let Some(first) = expected.first() {
                        let mut cur = first.clone();
                        let mut seen = vec![cur.clone()];
                        while space.advance(&mut cur) {
                            seen.push(cur.clone());
                        }
                        assert_eq!(seen, expected);
                    }
                }
            }
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(17, 3), Some(680));
        assert_eq!(binomial(93, 3), Some(129_766));
        assert_eq!(binomial(3, 5), Some(0));
        assert_eq!(binomial(200, 100), None);
    }
}
