//! Set arithmetic on machine words for groups of order at most 64.

use rand::Rng;

use crate::groups::FiniteGroup;

pub(crate) fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            v
        })
    })
}

pub(crate) fn pop(m: u64) -> usize {
    m.count_ones() as usize
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Multiplication table copied into a flat array of `u8`-sized indices.
pub(crate) struct MaskGroup {
    n: usize,
    table: Vec<u8>,
    inverse: Vec<u8>,
}

impl MaskGroup {
    pub(crate) fn new(g: &FiniteGroup) -> Self {
        let n = g.order();
        assert!(n <= 64, "mask arithmetic is limited to 64 elements");
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                table.push(g.mul(x, y) as u8);
            }
        }
        let inverse = (0..n).map(|x| g.inv(x) as u8).collect();
        Self { n, table, inverse }
    }

    /// `X⁻¹`.
    pub(crate) fn inverse_set(&self, x: u64) -> u64 {
        bits(x).fold(0u64, |acc, y| acc | 1 << self.inverse[y])
    }

    pub(crate) fn order(&self) -> usize {
        self.n
    }

    pub(crate) fn full(&self) -> u64 {
        full_mask(self.n)
    }

    #[inline]
    pub(crate) fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.n + y] as usize
    }

    /// `xB` for every `x`.
    pub(crate) fn left_rows(&self, b: u64) -> Vec<u64> {
        (0..self.n)
            .map(|x| bits(b).fold(0u64, |acc, y| acc | 1 << self.mul(x, y)))
            .collect()
    }

    /// `AB`, given the rows of [`MaskGroup::left_rows`] for `B`.
    pub(crate) fn product_with_rows(a: u64, rows: &[u64]) -> u64 {
        bits(a).fold(0u64, |acc, x| acc | rows[x])
    }

    pub(crate) fn product(&self, a: u64, b: u64) -> u64 {
        let mut out = 0u64;
        for x in bits(a) {
            for y in bits(b) {
                out |= 1 << self.mul(x, y);
            }
        }
        out
    }

    /// `{x : Cx = C}`.
    pub(crate) fn right_stabilizer(&self, c: u64) -> u64 {
        (0..self.n)
            .filter(|&x| bits(c).all(|y| c >> self.mul(y, x) & 1 == 1))
            .fold(0u64, |acc, x| acc | 1 << x)
    }

    /// `⟨S⟩`.
    pub(crate) fn generated(&self, s: u64) -> u64 {
        let mut h = 1u64;
        let mut frontier = 1u64;
        while frontier != 0 {
            let next = self.product(frontier, s);
            frontier = next & !h;
            h |= next;
        }
        h
    }

    pub(crate) fn elements_commute(&self, s: u64) -> bool {
        bits(s).all(|x| bits(s).all(|y| self.mul(x, y) == self.mul(y, x)))
    }
}

/// A uniformly random nonempty subset of `0..n`.
pub(crate) fn random_nonempty<R: Rng>(rng: &mut R, n: usize) -> u64 {
    loop {
        let m = rng.gen::<u64>() & full_mask(n);
        if m != 0 {
            return m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products_agree_with_group_arithmetic() {
        let g = FiniteGroup::symmetric(3).unwrap();
        let mg = MaskGroup::new(&g);
        for a in 1u64..64 {
            for b in [1u64, 0b110, 0b101010, 63] {
                let ea = crate::set::ElementSet::from_mask(6, a);
                let eb = crate::set::ElementSet::from_mask(6, b);
                let expect = g.minkowski_product(&ea, &eb).unwrap().to_mask();
                assert_eq!(mg.product(a, b), expect);
                assert_eq!(MaskGroup::product_with_rows(a, &mg.left_rows(b)), expect);
                let (_, r) = g.stabilizers(&ea).unwrap();
                assert_eq!(mg.right_stabilizer(a), r.to_mask());
            }
            let ea = crate::set::ElementSet::from_mask(6, a);
            assert_eq!(mg.generated(a | 1), g.subgroup_generated(&ea).to_mask());
            assert_eq!(mg.inverse_set(a), g.inverse_set(&ea).to_mask());
        }
        assert_eq!(bits(0b1010).collect::<Vec<_>>(), vec![1, 3]);
    }
}
