//! Exhaustive search over vertex subsets on machine words.
//!
//! Subsets are grown by adding vertices in increasing index order while the
//! image `Γ(X)` is maintained incrementally. Two facts drive the pruning:
//! images only grow, so once `|V ∖ Γ(X)| < k` no extension qualifies; and a
//! boundary vertex below the last added index can never re-enter `X`, so the
//! count of such vertices bounds every extension's boundary from below.

use std::cmp::Ordering;

use crate::set::cmp_masks;

/// Largest vertex count accepted by exhaustive enumeration.
pub const EXHAUSTIVE_LIMIT: usize = 24;

pub(crate) struct MaskSearch<'a> {
    n: usize,
    rows: &'a [u64],
    k: usize,
}

#[inline]
fn upto(v: usize) -> u64 {
    if v >= 63 {
        u64::MAX
    } else {
        (1u64 << (v + 1)) - 1
    }
}

#[inline]
fn pop(x: u64) -> usize {
    x.count_ones() as usize
}

/// Which qualifying sets `collect` keeps.
#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) enum Goal {
    /// Every set with the target boundary.
    All,
    /// Only those of minimum cardinality.
    Smallest,
}

struct Collector {
    target: usize,
    goal: Goal,
    cap: usize,
    found: Vec<u64>,
}

impl<'a> MaskSearch<'a> {
    pub(crate) fn new(n: usize, rows: &'a [u64], k: usize) -> Self {
        debug_assert!(n <= 64 && rows.len() == n && k >= 1);
        Self { n, rows, k }
    }

    fn qualifies(&self, size: usize, img: u64) -> bool {
        size >= self.k && self.n - pop(img) >= self.k
    }

    /// Minimum `|∂X|` over `k`-separating `X`, or `None` when no set
    /// separates. With `rooted` only sets containing vertex 0 are visited.
    pub(crate) fn min_boundary(&self, rooted: bool) -> Option<usize> {
        let ceiling = (self.n + 1).saturating_sub(2 * self.k);
        let mut best = ceiling;
        if rooted {
            let img = self.rows[0];
            if self.n - pop(img) < self.k {
                return None;
            }
            if self.qualifies(1, img) {
                best = best.min(pop(img & !1));
            }
            self.descend_min(1, img, 1, 1, &mut best);
        } else {
            self.descend_min(0, 0, 0, 0, &mut best);
        }
        (best < ceiling).then_some(best)
    }

    fn descend_min(&self, x: u64, img: u64, size: usize, start: usize, best: &mut usize) {
        for v in start..self.n {
            let x2 = x | (1u64 << v);
            let img2 = img | self.rows[v];
            if self.n - pop(img2) < self.k {
                continue;
            }
            let outside = img2 & !x2;
            if pop(outside & upto(v)) >= *best {
                continue;
            }
            if size + 1 >= self.k {
                *best = (*best).min(pop(outside));
            }
            self.descend_min(x2, img2, size + 1, v + 1, best);
        }
    }

    /// Qualifying sets whose boundary equals `target`, in no particular order.
    pub(crate) fn collect(&self, rooted: bool, target: usize, goal: Goal) -> Vec<u64> {
        let mut c = Collector {
            target,
            goal,
            cap: usize::MAX,
            found: Vec::new(),
        };
        if rooted {
            let img = self.rows[0];
            if self.n - pop(img) < self.k {
                return Vec::new();
            }
            self.offer(&mut c, 1, img, 1);
            self.descend_collect(&mut c, 1, img, 1, 1);
        } else {
            self.descend_collect(&mut c, 0, 0, 0, 0);
        }
        c.found
    }

    fn offer(&self, c: &mut Collector, x: u64, img: u64, size: usize) {
        if !self.qualifies(size, img) || pop(img & !x) != c.target {
            return;
        }
        if c.goal == Goal::Smallest {
            match size.cmp(&c.cap) {
                Ordering::Greater => return,
                Ordering::Less => {
                    c.cap = size;
                    c.found.clear();
                }
                Ordering::Equal => {}
            }
        }
        c.found.push(x);
    }

    fn descend_collect(&self, c: &mut Collector, x: u64, img: u64, size: usize, start: usize) {
        if size >= c.cap {
            return;
        }
        for v in start..self.n {
            let x2 = x | (1u64 << v);
            let img2 = img | self.rows[v];
            if self.n - pop(img2) < self.k {
                continue;
            }
            if pop(img2 & !x2 & upto(v)) > c.target {
                continue;
            }
            self.offer(c, x2, img2, size + 1);
            self.descend_collect(c, x2, img2, size + 1, v + 1);
        }
    }
}

pub(crate) fn permute_mask(mask: u64, perm: &[u32]) -> u64 {
    let mut out = 0u64;
    let mut m = mask;
    while m != 0 {
        let v = m.trailing_zeros() as usize;
        m &= m - 1;
        out |= 1u64 << perm[v];
    }
    out
}

/// Sorts into canonical set order and removes duplicates.
pub(crate) fn canonicalize(masks: &mut Vec<u64>) {
    masks.sort_unstable_by(|a, b| cmp_masks(*a, *b));
    masks.dedup();
}

/// All images of `rooted` under the transitive action, canonicalized.
pub(crate) fn expand_translates(rooted: &[u64], action: &[Vec<u32>]) -> Vec<u64> {
    let mut all: Vec<u64> = rooted
        .iter()
        .flat_map(|&m| action.iter().map(move |perm| permute_mask(m, perm)))
        .collect();
    canonicalize(&mut all);
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Straight enumeration of every subset, no pruning.
    fn brute(n: usize, rows: &[u64], k: usize) -> (Option<usize>, Vec<u64>) {
        let mut best: Option<usize> = None;
        let mut sets = Vec::new();
        for x in 1u64..(1 << n) {
            let img = (0..n).filter(|v| x >> v & 1 == 1).fold(0, |acc, v| acc | rows[v]);
            if pop(x) < k || n - pop(img) < k {
                continue;
            }
            let b = pop(img & !x);
            match best {
                Some(cur) if b > cur => {}
                Some(cur) if b == cur => sets.push(x),
                _ => {
                    best = Some(b);
                    sets = vec![x];
                }
            }
        }
        canonicalize(&mut sets);
        (best, sets)
    }

    fn circulant(n: usize, s: &[usize]) -> Vec<u64> {
        (0..n)
            .map(|x| s.iter().fold(0u64, |acc, &d| acc | 1 << ((x + d) % n)))
            .collect()
    }

    #[test]
    fn matches_brute_force_on_circulants() {
        for (n, s) in [
            (7, vec![0, 1, 3]),
            (8, vec![0, 1, 4]),
            (9, vec![0, 1]),
            (10, vec![0, 2, 5, 7]),
            (12, vec![0, 1, 6, 7]),
            (6, vec![0, 2, 4]),
        ] {
            let rows = circulant(n, &s);
            for k in 1..=3 {
                if 2 * k > n + 1 {
                    continue;
                }
                let search = MaskSearch::new(n, &rows, k);
                let (best, sets) = brute(n, &rows, k);
                assert_eq!(search.min_boundary(false), best, "n={n} s={s:?} k={k}");
                assert_eq!(search.min_boundary(true), best, "rooted n={n} s={s:?} k={k}");
                if let Some(b) = best {
                    let mut got = search.collect(false, b, Goal::All);
                    canonicalize(&mut got);
                    assert_eq!(got, sets);
                    let smallest = sets.iter().map(|m| pop(*m)).min().unwrap();
                    let mut atoms = search.collect(false, b, Goal::Smallest);
                    canonicalize(&mut atoms);
                    let expect: Vec<u64> = sets.iter().copied().filter(|m| pop(*m) == smallest).collect();
                    assert_eq!(atoms, expect);
                }
            }
        }
    }

    #[test]
    fn permute_and_expand() {
        let shift: Vec<Vec<u32>> = (0..4).map(|a| (0..4).map(|x| ((x + a) % 4) as u32).collect()).collect();
        assert_eq!(permute_mask(0b0011, &shift[1]), 0b0110);
        let all = expand_translates(&[0b0011], &shift);
        assert_eq!(all, vec![0b0011, 0b1001, 0b0110, 0b1100]);
    }
}
