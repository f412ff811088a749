//! Finite groups given by their multiplication tables, and the set-level
//! arithmetic built on them: Minkowski products, generated subgroups,
//! stabilizers, coset decompositions, quotients, progressions.
//!
//! Elements are dense indices `0..order` and the identity is always `0`.
//! Everything is written multiplicatively; cyclic groups simply use residues
//! as labels.

mod catalog;
mod spec;

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::error::{same_universe, Error, Result};
use crate::set::ElementSet;

pub use catalog::{generating_sets, identity_subsets, Catalog, CatalogEntry, SWEEP_ORDER_LIMIT};
pub use spec::GroupSpec;

/// Groups larger than this are rejected: the full table would not fit
/// comfortably in memory.
pub const MAX_ORDER: usize = 2048;

/// Full associativity is checked up to this order; above it a fixed-seed
/// sample of triples is tested.
pub const FULL_ASSOCIATIVITY_LIMIT: usize = 64;
const SAMPLED_TRIPLES: usize = 100_000;

#[derive(Clone)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    labels: Vec<String>,
    abelian: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Partition of a set by its traces on the cosets of a subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetDecomposition {
    pub subgroup: ElementSet,
    pub side: Side,
    /// Nonempty parts, ordered by their smallest element.
    pub parts: Vec<ElementSet>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinSubgroupOrder {
    Order(usize),
    /// No subgroup of order at least two exists (the trivial group).
    Infinite,
}

/// `{ratio^start, ratio^(start+1), ..., ratio^(start+len-1)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Progression {
    pub ratio: usize,
    pub start: usize,
    pub len: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SemiNormality {
    Normal,
    /// `x S x⁻¹ = S a⁻¹ x a x⁻¹` for every `x`, with `a = witness`.
    SemiNormal { witness: usize },
    Neither,
}

#[derive(Deserialize)]
struct TableFile {
    order: usize,
    table: Vec<Vec<usize>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("name", &self.name)
            .field("order", &self.order)
            .finish()
    }
}

/// Builds the group named by `spec`.
pub fn make_group(spec: &GroupSpec) -> Result<FiniteGroup> {
    match spec {
        GroupSpec::Cyclic(n) => FiniteGroup::cyclic(*n),
        GroupSpec::Dihedral(n) => FiniteGroup::dihedral(*n),
        GroupSpec::Symmetric(n) => FiniteGroup::symmetric(*n),
        GroupSpec::Alternating(n) => FiniteGroup::alternating(*n),
        GroupSpec::Quaternion(order) => {
            if *order < 8 || !order.is_power_of_two() {
                return Err(Error::GroupSpec(format!(
                    "quaternion order must be a power of two >= 8, got {order}"
                )));
            }
            let mut g = FiniteGroup::dicyclic(*order)?;
            g.name = format!("Q{order}");
            Ok(g)
        }
        GroupSpec::Dicyclic(order) => FiniteGroup::dicyclic(*order),
        GroupSpec::Elementary { p, rank } => {
            if *rank == 0 {
                return FiniteGroup::cyclic(1);
            }
            let factors = vec![FiniteGroup::cyclic(*p)?; *rank];
            let mut g = FiniteGroup::direct_product(&factors)?;
            g.name = format!("Z{p}^{rank}");
            Ok(g)
        }
        GroupSpec::Semidirect { m, n, r } => FiniteGroup::semidirect(*m, *n, *r),
        GroupSpec::Product(factors) => {
            let groups = factors.iter().map(make_group).collect::<Result<Vec<_>>>()?;
            FiniteGroup::direct_product(&groups)
        }
        GroupSpec::Table(path) => {
            let text = std::fs::read_to_string(path)?;
            FiniteGroup::from_table_json(&path.display().to_string(), &text)
        }
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn check_order(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::GroupSpec("a group needs at least one element".into()));
    }
    if n > MAX_ORDER {
        return Err(Error::GroupSpec(format!("order {n} exceeds limit {MAX_ORDER}")));
    }
    Ok(())
}

/// Checks the group axioms on a flat table and returns the identity.
fn validate(n: usize, table: &[u32]) -> Result<usize> {
    let at = |x: usize, y: usize| table[x * n + y] as usize;
    for x in 0..n {
        let mut row = vec![false; n];
        let mut col = vec![false; n];
        for y in 0..n {
            let r = at(x, y);
            let c = at(y, x);
            if r >= n || c >= n {
                return Err(Error::GroupAxiom {
                    axiom: "latin square",
                    detail: format!("entry out of range in row/column {x}"),
                });
            }
            if std::mem::replace(&mut row[r], true) {
                return Err(Error::GroupAxiom {
                    axiom: "latin square",
                    detail: format!("row {x} repeats {r}"),
                });
            }
            if std::mem::replace(&mut col[c], true) {
                return Err(Error::GroupAxiom {
                    axiom: "latin square",
                    detail: format!("column {x} repeats {c}"),
                });
            }
        }
    }
    let identity = (0..n)
        .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
        .ok_or_else(|| Error::GroupAxiom {
            axiom: "identity",
            detail: "no two-sided identity element".into(),
        })?;
    for x in 0..n {
        let y = (0..n).find(|&y| at(x, y) == identity).unwrap_or(n);
        if y == n || at(y, x) != identity {
            return Err(Error::GroupAxiom {
                axiom: "inverse",
                detail: format!("element {x} has no two-sided inverse"),
            });
        }
    }
    let assoc = |x: usize, y: usize, z: usize| -> Result<()> {
        if at(at(x, y), z) != at(x, at(y, z)) {
            return Err(Error::GroupAxiom {
                axiom: "associativity",
                detail: format!("({x}*{y})*{z} != {x}*({y}*{z})"),
            });
        }
        Ok(())
    };
    if n <= FULL_ASSOCIATIVITY_LIMIT {
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    assoc(x, y, z)?;
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..SAMPLED_TRIPLES {
            assoc(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
        }
    }
    Ok(identity)
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn is_even(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    let mut transpositions = 0;
    for start in 0..p.len() {
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = p[x];
            len += 1;
        }
        if len > 0 {
            transpositions += len - 1;
        }
    }
    transpositions % 2 == 0
}

impl FiniteGroup {
    fn build(
        name: String,
        n: usize,
        labels: Vec<String>,
        mul: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        check_order(n)?;
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                table.push(mul(x, y) as u32);
            }
        }
        Self::from_flat(name, n, table, labels)
    }

    /// Validates `table` and relabels so that the identity becomes index 0.
    fn from_flat(name: String, n: usize, table: Vec<u32>, mut labels: Vec<String>) -> Result<Self> {
        let e = validate(n, &table)?;
        let table = if e == 0 {
            table
        } else {
            let swap = |x: usize| {
                if x == e {
                    0
                } else if x == 0 {
                    e
                } else {
                    x
                }
            };
            labels.swap(0, e);
            let mut relabeled = vec![0u32; n * n];
            for x in 0..n {
                for y in 0..n {
                    relabeled[swap(x) * n + swap(y)] = swap(table[x * n + y] as usize) as u32;
                }
            }
            relabeled
        };
        let mut inverse = vec![0u32; n];
        for x in 0..n {
            for y in 0..n {
                if table[x * n + y] == 0 {
                    inverse[x] = y as u32;
                    break;
                }
            }
        }
        let abelian = (0..n).all(|x| (0..x).all(|y| table[x * n + y] == table[y * n + x]));
        Ok(Self {
            name,
            order: n,
            table,
            inverse,
            labels,
            abelian,
        })
    }

    /// Builds a group from an explicit Cayley table (`rows[x][y] = x·y`).
    pub fn from_table(name: &str, rows: &[Vec<usize>]) -> Result<Self> {
        let n = rows.len();
        check_order(n)?;
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::GroupAxiom {
                axiom: "latin square",
                detail: "table is not square".into(),
            });
        }
        let table = rows.iter().flatten().map(|&v| v as u32).collect();
        let labels = (0..n).map(|i| i.to_string()).collect();
        Self::from_flat(name.to_string(), n, table, labels)
    }

    /// Parses the `{"order": n, "table": [[...]]}` file format.
    pub fn from_table_json(name: &str, json: &str) -> Result<Self> {
        let file: TableFile = serde_json::from_str(json)?;
        if file.table.len() != file.order {
            return Err(Error::GroupAxiom {
                axiom: "latin square",
                detail: format!("order {} but {} rows", file.order, file.table.len()),
            });
        }
        Self::from_table(name, &file.table)
    }

    pub fn trivial() -> Self {
        Self::cyclic(1).expect("trivial group")
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        let labels = (0..n).map(|i| i.to_string()).collect();
        Self::build(format!("Z{n}"), n, labels, |x, y| (x + y) % n.max(1))
    }

    /// `Z_m ⋊ Z_n` with `(a, b)(c, d) = (a + r^b c, b + d)`, indexed `a + m b`.
    pub fn semidirect(m: usize, n: usize, r: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::GroupSpec("semidirect factors must be nonempty".into()));
        }
        let r = r % m;
        let mut powers = vec![1 % m; n + 1];
        for b in 1..=n {
            powers[b] = powers[b - 1] * r % m;
        }
        if powers[n] != 1 % m || (m > 1 && gcd(r, m) != 1) {
            return Err(Error::GroupSpec(format!(
                "multiplier {r} does not define an action of Z{n} on Z{m}"
            )));
        }
        let labels = (0..m * n).map(|i| format!("({},{})", i % m, i / m)).collect();
        Self::build(format!("Z{m}:Z{n}[{r}]"), m * n, labels, |x, y| {
            let (a, b) = (x % m, x / m);
            let (c, d) = (y % m, y / m);
            (a + powers[b] * c) % m + m * ((b + d) % n)
        })
    }

    /// Dihedral group of order `2n`; element `i + n j` is `r^i s^j`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::GroupSpec("dihedral:0 is empty".into()));
        }
        let mut g = Self::semidirect(n, 2, n - 1)?;
        g.name = format!("D{n}");
        g.labels = (0..2 * n)
            .map(|i| {
                let (a, b) = (i % n, i / n);
                if b == 0 {
                    format!("r^{a}")
                } else {
                    format!("r^{a}s")
                }
            })
            .collect();
        Ok(g)
    }

    /// Dicyclic group of order `4m`: `a^{2m} = 1`, `x² = a^m`, `x a x⁻¹ = a⁻¹`.
    pub fn dicyclic(order: usize) -> Result<Self> {
        if order < 8 || !order.is_multiple_of(4) {
            return Err(Error::GroupSpec(format!(
                "dicyclic order must be a multiple of 4 and at least 8, got {order}"
            )));
        }
        let m = order / 4;
        let c = 2 * m;
        let labels = (0..order)
            .map(|i| {
                if i < c {
                    format!("a^{i}")
                } else {
                    format!("a^{}x", i - c)
                }
            })
            .collect();
        Self::build(format!("Dic{m}"), order, labels, |x, y| {
            let (i, j) = (x % c, x / c);
            let (k, l) = (y % c, y / c);
            match (j, l) {
                (0, _) => (i + k) % c + c * l,
                (_, 0) => (i + c - k) % c + c,
                _ => (i + c - k + m) % c,
            }
        })
    }

    pub fn symmetric(degree: usize) -> Result<Self> {
        Self::permutation_group(degree, false)
    }

    pub fn alternating(degree: usize) -> Result<Self> {
        Self::permutation_group(degree, true)
    }

    fn permutation_group(degree: usize, even_only: bool) -> Result<Self> {
        if degree > 6 {
            return Err(Error::GroupSpec(format!("degree {degree} too large (max 6)")));
        }
        let mut perms = Vec::new();
        let mut p: Vec<usize> = (0..degree).collect();
        loop {
            if !even_only || is_even(&p) {
                perms.push(p.clone());
            }
            if !next_permutation(&mut p) {
                break;
            }
        }
        let index: std::collections::HashMap<Vec<usize>, usize> =
            perms.iter().cloned().enumerate().map(|(i, q)| (q, i)).collect();
        let labels = perms.iter().map(|q| format!("{q:?}")).collect();
        let name = if even_only {
            format!("A{degree}")
        } else {
            format!("S{degree}")
        };
        Self::build(name, perms.len(), labels, |x, y| {
            let composed: Vec<usize> = perms[y].iter().map(|&i| perms[x][i]).collect();
            index[&composed]
        })
    }

    /// Direct product, indexed in mixed radix with the first factor most significant.
    pub fn direct_product(factors: &[FiniteGroup]) -> Result<Self> {
        if factors.is_empty() {
            return Ok(Self::trivial());
        }
        let n: usize = factors.iter().map(|g| g.order).product();
        check_order(n)?;
        let split = |mut x: usize| {
            let mut digits = vec![0; factors.len()];
            for (i, g) in factors.iter().enumerate().rev() {
                digits[i] = x % g.order;
                x /= g.order;
            }
            digits
        };
        let join = |digits: &[usize]| {
            digits
                .iter()
                .zip(factors)
                .fold(0, |acc, (&d, g)| acc * g.order + d)
        };
        let labels = (0..n)
            .map(|x| {
                let parts: Vec<&str> = split(x)
                    .iter()
                    .zip(factors)
                    .map(|(&d, g)| g.labels[d].as_str())
                    .collect();
                format!("({})", parts.join(","))
            })
            .collect();
        let name = factors.iter().map(|g| g.name.as_str()).collect::<Vec<_>>().join("x");
        Self::build(name, n, labels, |x, y| {
            let (dx, dy) = (split(x), split(y));
            let prod: Vec<usize> = factors
                .iter()
                .enumerate()
                .map(|(i, g)| g.mul(dx[i], dy[i]))
                .collect();
            join(&prod)
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.order + y] as usize
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inverse[x] as usize
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    /// The table as nested rows, as used by the JSON table format.
    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|x| (0..self.order).map(|y| self.mul(x, y)).collect())
            .collect()
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn pow(&self, x: usize, e: usize) -> usize {
        (0..e).fold(0, |acc, _| self.mul(acc, x))
    }

    pub fn empty_set(&self) -> ElementSet {
        ElementSet::empty(self.order)
    }

    pub fn full_set(&self) -> ElementSet {
        ElementSet::full(self.order)
    }

    pub fn set(&self, elements: &[usize]) -> Result<ElementSet> {
        ElementSet::from_indices(self.order, elements)
    }

    fn check_universe(&self, x: &ElementSet) -> Result<()> {
        if x.universe() != self.order {
            return Err(Error::UniverseMismatch {
                left: self.order,
                right: x.universe(),
            });
        }
        Ok(())
    }

    /// `AB = {xy : x ∈ A, y ∈ B}`.
    pub fn minkowski_product(&self, a: &ElementSet, b: &ElementSet) -> Result<ElementSet> {
        same_universe(a, b)?;
        self.check_universe(a)?;
        let mut out = self.empty_set();
        for x in a {
            for y in b {
                out.insert(self.mul(x, y));
            }
        }
        Ok(out)
    }

    /// `S^j`, the `j`-fold product of `S` with itself (`j ≥ 1`).
    pub fn power_set(&self, s: &ElementSet, j: usize) -> Result<ElementSet> {
        assert!(j >= 1, "S^0 is not used");
        let mut acc = s.clone();
        for _ in 1..j {
            acc = self.minkowski_product(&acc, s)?;
        }
        Ok(acc)
    }

    pub fn left_translate(&self, a: usize, x: &ElementSet) -> ElementSet {
        let mut out = self.empty_set();
        for y in x {
            out.insert(self.mul(a, y));
        }
        out
    }

    pub fn right_translate(&self, x: &ElementSet, a: usize) -> ElementSet {
        let mut out = self.empty_set();
        for y in x {
            out.insert(self.mul(y, a));
        }
        out
    }

    pub fn inverse_set(&self, x: &ElementSet) -> ElementSet {
        let mut out = self.empty_set();
        for y in x {
            out.insert(self.inv(y));
        }
        out
    }

    /// `g X g⁻¹`.
    pub fn conjugate_set(&self, g: usize, x: &ElementSet) -> ElementSet {
        let gi = self.inv(g);
        let mut out = self.empty_set();
        for y in x {
            out.insert(self.mul(self.mul(g, y), gi));
        }
        out
    }

    /// `⟨S⟩`; the empty set generates the trivial subgroup.
    pub fn subgroup_generated(&self, s: &ElementSet) -> ElementSet {
        let mut h = self.empty_set();
        h.insert(0);
        let mut frontier = vec![0usize];
        let gens: Vec<usize> = s.iter().collect();
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = self.mul(x, g);
                if h.insert(y) {
                    frontier.push(y);
                }
            }
        }
        h
    }

    pub fn is_subgroup(&self, h: &ElementSet) -> bool {
        if h.universe() != self.order || !h.contains(0) {
            return false;
        }
        h.iter().all(|x| h.iter().all(|y| h.contains(self.mul(x, y))))
    }

    fn require_subgroup(&self, h: &ElementSet) -> Result<()> {
        self.check_universe(h)?;
        if !self.is_subgroup(h) {
            return Err(Error::NotSubgroup(h.clone()));
        }
        Ok(())
    }

    /// Left and right stabilizers `Π^l(X) = {x : xX = X}`, `Π^r(X) = {x : Xx = X}`.
    pub fn stabilizers(&self, x: &ElementSet) -> Result<(ElementSet, ElementSet)> {
        self.check_universe(x)?;
        if x.is_empty() {
            return Err(Error::EmptySet("stabilizer"));
        }
        let mut left = self.empty_set();
        let mut right = self.empty_set();
        for a in 0..self.order {
            if x.iter().all(|y| x.contains(self.mul(a, y))) {
                left.insert(a);
            }
            if x.iter().all(|y| x.contains(self.mul(y, a))) {
                right.insert(a);
            }
        }
        Ok((left, right))
    }

    pub fn right_stabilizer(&self, x: &ElementSet) -> Result<ElementSet> {
        Ok(self.stabilizers(x)?.1)
    }

    /// The coset of `h` through `x`: `xH` for [`Side::Left`], `Hx` for [`Side::Right`].
    pub fn coset(&self, x: usize, h: &ElementSet, side: Side) -> ElementSet {
        match side {
            Side::Left => self.left_translate(x, h),
            Side::Right => self.right_translate(h, x),
        }
    }

    pub fn coset_decomposition(
        &self,
        a: &ElementSet,
        h: &ElementSet,
        side: Side,
    ) -> Result<CosetDecomposition> {
        same_universe(a, h)?;
        self.require_subgroup(h)?;
        let mut remaining = a.clone();
        let mut parts = Vec::new();
        while let Some(x) = remaining.first() {
            let part = self.coset(x, h, side).intersection(a);
            remaining = remaining.difference(&part);
            parts.push(part);
        }
        Ok(CosetDecomposition {
            subgroup: h.clone(),
            side,
            parts,
        })
    }

    /// Some `x` with `x H x⁻¹ ≠ H`, or `None` when `H` is normal.
    pub fn normality_witness(&self, h: &ElementSet) -> Option<usize> {
        (0..self.order).find(|&x| self.conjugate_set(x, h) != *h)
    }

    pub fn normalizer(&self, h: &ElementSet) -> ElementSet {
        let mut out = self.empty_set();
        for x in 0..self.order {
            if self.conjugate_set(x, h) == *h {
                out.insert(x);
            }
        }
        out
    }

    /// `G/H` together with the canonical projection. Cosets are numbered by
    /// their smallest element, so the identity coset is `0`.
    pub fn quotient(&self, h: &ElementSet) -> Result<(FiniteGroup, Vec<usize>)> {
        self.require_subgroup(h)?;
        if let Some(witness) = self.normality_witness(h) {
            return Err(Error::NotNormal { witness });
        }
        let mut projection = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for x in 0..self.order {
            if projection[x] == usize::MAX {
                for y in self.left_translate(x, h).iter() {
                    projection[y] = reps.len();
                }
                reps.push(x);
            }
        }
        let labels = reps.iter().map(|&r| format!("{}H", self.labels[r])).collect();
        let q = Self::build(
            format!("{}/H{}", self.name, h.len()),
            reps.len(),
            labels,
            |i, j| projection[self.mul(reps[i], reps[j])],
        )?;
        Ok((q, projection))
    }

    /// `H` as a group in its own right, with the embedding back into `self`.
    /// Elements keep their relative order, so the identity stays at 0.
    pub fn subgroup_as_group(&self, h: &ElementSet) -> Result<(FiniteGroup, Vec<usize>)> {
        self.require_subgroup(h)?;
        let embed: Vec<usize> = h.iter().collect();
        let mut position = vec![usize::MAX; self.order];
        for (i, &x) in embed.iter().enumerate() {
            position[x] = i;
        }
        let labels = embed.iter().map(|&x| self.labels[x].clone()).collect();
        let sub = Self::build(format!("<{}>", self.name), embed.len(), labels, |i, j| {
            position[self.mul(embed[i], embed[j])]
        })?;
        Ok((sub, embed))
    }

    /// `p(G)`: the smallest order of a subgroup with at least two elements.
    pub fn min_subgroup_order(&self) -> MinSubgroupOrder {
        (1..self.order)
            .map(|x| self.element_order(x))
            .min()
            .map_or(MinSubgroupOrder::Infinite, MinSubgroupOrder::Order)
    }

    /// Finds `r, j` with `S = {r^j, ..., r^{j+|S|-1}}`, scanning `r` and then
    /// `j` in increasing order.
    pub fn detect_progression(&self, s: &ElementSet) -> Option<Progression> {
        let len = s.len();
        if len == 0 {
            return None;
        }
        for r in 0..self.order {
            let ord = self.element_order(r);
            if len > ord {
                continue;
            }
            let powers: Vec<usize> = (0..ord).map(|e| self.pow(r, e)).collect();
            for start in 0..ord {
                if (0..len).all(|i| s.contains(powers[(start + i) % ord])) {
                    return Some(Progression { ratio: r, start, len });
                }
            }
        }
        None
    }

    /// Finds a translate `a` and progression `P` with `S = a·P`.
    pub fn detect_translated_progression(&self, s: &ElementSet) -> Option<(usize, Progression)> {
        (0..self.order).find_map(|a| {
            let shifted = self.left_translate(self.inv(a), s);
            self.detect_progression(&shifted).map(|p| (a, p))
        })
    }

    pub fn is_normal_set(&self, s: &ElementSet) -> bool {
        (0..self.order).all(|x| self.conjugate_set(x, s) == *s)
    }

    /// Classifies `S` as normal, semi-normal (with witness), or neither, by
    /// exhaustive search over the witness and the conjugating element.
    pub fn seminormality(&self, s: &ElementSet) -> SemiNormality {
        if self.is_normal_set(s) {
            return SemiNormality::Normal;
        }
        for a in 1..self.order {
            let ai = self.inv(a);
            let ok = (0..self.order).all(|x| {
                let twist = self.mul(self.mul(ai, x), self.mul(a, self.inv(x)));
                self.conjugate_set(x, s) == self.right_translate(s, twist)
            });
            if ok {
                return SemiNormality::SemiNormal { witness: a };
            }
        }
        SemiNormality::Neither
    }

    pub fn conjugacy_classes(&self) -> Vec<ElementSet> {
        let mut seen = self.empty_set();
        let mut classes = Vec::new();
        for x in 0..self.order {
            if seen.contains(x) {
                continue;
            }
            let mut class = self.empty_set();
            for g in 0..self.order {
                class.insert(self.mul(self.mul(g, x), self.inv(g)));
            }
            seen.union_with(&class);
            classes.push(class);
        }
        classes
    }

    /// Every subgroup, in canonical set order (so `{0}` comes first).
    pub fn all_subgroups(&self) -> Vec<ElementSet> {
        let cyclic: Vec<ElementSet> = (0..self.order)
            .map(|x| self.subgroup_generated(&ElementSet::singleton(self.order, x)))
            .collect();
        let mut found: std::collections::BTreeSet<ElementSet> = cyclic.iter().cloned().collect();
        let mut frontier: Vec<ElementSet> = found.iter().cloned().collect();
        while let Some(h) = frontier.pop() {
            for c in &cyclic {
                if c.is_subset(&h) {
                    continue;
                }
                let joined = self.subgroup_generated(&h.union(c));
                if found.insert(joined.clone()) {
                    frontier.push(joined);
                }
            }
        }
        found.into_iter().collect()
    }

    pub fn format_set(&self, x: &ElementSet) -> String {
        let parts: Vec<&str> = x.iter().map(|e| self.label(e)).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> FiniteGroup {
        FiniteGroup::cyclic(n).unwrap()
    }

    fn set(g: &FiniteGroup, xs: &[usize]) -> ElementSet {
        g.set(xs).unwrap()
    }

    #[test]
    fn cyclic_table() {
        let g = z(6);
        assert_eq!(g.order(), 6);
        assert_eq!(g.mul(2, 5), 1);
        assert!(g.is_abelian());
    }

    #[test]
    fn symmetric_three_is_nonabelian() {
        let g = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        assert_eq!(FiniteGroup::alternating(4).unwrap().order(), 12);
    }

    #[test]
    fn explicit_two_by_two_table() {
        let g = FiniteGroup::from_table("t", &[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.mul(1, 1), 0);
    }

    #[test]
    fn identity_is_normalized_to_zero() {
        // Z3 with identity stored at index 2.
        let rows = vec![vec![1, 2, 0], vec![2, 0, 1], vec![0, 1, 2]];
        let g = FiniteGroup::from_table("shifted", &rows).unwrap();
        assert_eq!(g.mul(0, 1), 1);
        assert_eq!(g.mul(1, 0), 1);
        assert_eq!(g.mul(2, 2), g.mul(2, 2));
        assert_eq!(g.element_order(1), 3);
    }

    #[test]
    fn axiom_violations_are_named() {
        let not_latin = FiniteGroup::from_table("bad", &[vec![0, 0], vec![1, 0]]);
        assert!(matches!(not_latin, Err(Error::GroupAxiom { axiom: "latin square", .. })));
        // x·y = -x-y mod 3 is a Latin square with no identity.
        let no_identity =
            FiniteGroup::from_table("bad", &[vec![0, 2, 1], vec![2, 1, 0], vec![1, 0, 2]]);
        assert!(matches!(no_identity, Err(Error::GroupAxiom { axiom: "identity", .. })));
        // A Latin square with identity 0 that is not associative (order 5 loop).
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = FiniteGroup::from_table("loop", &loop5).unwrap_err();
        assert!(matches!(err, Error::GroupAxiom { axiom: "associativity", .. }), "{err}");
    }

    #[test]
    fn named_families_have_expected_orders() {
        assert_eq!(FiniteGroup::dihedral(4).unwrap().order(), 8);
        assert!(!FiniteGroup::dihedral(4).unwrap().is_abelian());
        assert!(FiniteGroup::dihedral(2).unwrap().is_abelian());
        let q8 = make_group(&"quaternion:8".parse().unwrap()).unwrap();
        assert_eq!(q8.order(), 8);
        // Q8 has a unique involution.
        assert_eq!((1..8).filter(|&x| q8.element_order(x) == 2).count(), 1);
        let f21 = FiniteGroup::semidirect(7, 3, 2).unwrap();
        assert_eq!(f21.order(), 21);
        assert!(!f21.is_abelian());
        assert!(FiniteGroup::semidirect(7, 3, 3).is_err());
        let p = make_group(&"product:cyclic:2,cyclic:3".parse().unwrap()).unwrap();
        assert!(p.is_abelian());
        assert!((0..6).any(|x| p.element_order(x) == 6));
        let e = make_group(&"elementary:2:3".parse().unwrap()).unwrap();
        assert!((1..8).all(|x| e.element_order(x) == 2));
    }

    #[test]
    fn minkowski_examples() {
        let g = z(5);
        assert_eq!(
            g.minkowski_product(&set(&g, &[0, 1]), &set(&g, &[0, 1])).unwrap(),
            set(&g, &[0, 1, 2])
        );
        assert!(g.minkowski_product(&g.empty_set(), &set(&g, &[0])).unwrap().is_empty());
        let g = z(6);
        assert_eq!(
            g.minkowski_product(&set(&g, &[0, 3]), &set(&g, &[0, 1])).unwrap(),
            set(&g, &[0, 1, 3, 4])
        );
        assert!(matches!(
            g.minkowski_product(&set(&g, &[0]), &ElementSet::empty(5)),
            Err(Error::UniverseMismatch { .. })
        ));
    }

    #[test]
    fn generated_subgroups() {
        let g = z(6);
        assert_eq!(g.subgroup_generated(&set(&g, &[2, 3])), g.full_set());
        assert_eq!(g.subgroup_generated(&set(&g, &[2])), set(&g, &[0, 2, 4]));
        assert_eq!(g.subgroup_generated(&g.empty_set()), set(&g, &[0]));
    }

    #[test]
    fn stabilizer_examples() {
        let g = z(6);
        let (l, r) = g.stabilizers(&set(&g, &[0, 2, 4])).unwrap();
        assert_eq!(l, set(&g, &[0, 2, 4]));
        assert_eq!(r, l);
        let (l, r) = g.stabilizers(&set(&g, &[0, 1])).unwrap();
        assert_eq!(l, set(&g, &[0]));
        assert_eq!(r, l);
        assert!(matches!(g.stabilizers(&g.empty_set()), Err(Error::EmptySet(_))));

        let s3 = FiniteGroup::symmetric(3).unwrap();
        let inv = (1..6).find(|&x| s3.element_order(x) == 2).unwrap();
        let h = s3.set(&[0, inv]).unwrap();
        assert!(s3.normality_witness(&h).is_some());
        let (l, r) = s3.stabilizers(&h).unwrap();
        assert_eq!(l, h);
        assert_eq!(r, h);
    }

    #[test]
    fn coset_decomposition_examples() {
        let g = z(6);
        let h = set(&g, &[0, 3]);
        let d = g.coset_decomposition(&set(&g, &[0, 1, 3]), &h, Side::Left).unwrap();
        assert_eq!(d.parts, vec![set(&g, &[0, 3]), set(&g, &[1])]);
        let d = g.coset_decomposition(&h, &h, Side::Right).unwrap();
        assert_eq!(d.parts, vec![h.clone()]);
        let d = g.coset_decomposition(&set(&g, &[0, 1, 2]), &h, Side::Left).unwrap();
        assert_eq!(d.parts.len(), 3);
        assert!(matches!(
            g.coset_decomposition(&h, &set(&g, &[0, 1]), Side::Left),
            Err(Error::NotSubgroup(_))
        ));
    }

    #[test]
    fn quotient_examples() {
        let g = z(6);
        let (q, phi) = g.quotient(&set(&g, &[0, 3])).unwrap();
        assert_eq!(q.order(), 3);
        assert!(q.is_abelian());
        for x in 0..6 {
            for y in 0..6 {
                assert_eq!(phi[g.mul(x, y)], q.mul(phi[x], phi[y]));
            }
        }
        let (q, _) = g.quotient(&set(&g, &[0])).unwrap();
        assert_eq!(q.order(), 6);
        let (q, _) = g.quotient(&g.full_set()).unwrap();
        assert_eq!(q.order(), 1);

        let s3 = FiniteGroup::symmetric(3).unwrap();
        let inv = (1..6).find(|&x| s3.element_order(x) == 2).unwrap();
        let err = s3.quotient(&s3.set(&[0, inv]).unwrap()).unwrap_err();
        let Error::NotNormal { witness } = err else { panic!("{err}") };
        let h = s3.set(&[0, inv]).unwrap();
        assert_ne!(s3.conjugate_set(witness, &h), h);
    }

    #[test]
    fn min_subgroup_order_examples() {
        assert_eq!(z(6).min_subgroup_order(), MinSubgroupOrder::Order(2));
        assert_eq!(z(7).min_subgroup_order(), MinSubgroupOrder::Order(7));
        assert_eq!(z(1).min_subgroup_order(), MinSubgroupOrder::Infinite);
        assert_eq!(z(15).min_subgroup_order(), MinSubgroupOrder::Order(3));
    }

    #[test]
    fn progression_examples() {
        let g = z(7);
        assert_eq!(
            g.detect_progression(&set(&g, &[0, 1, 2])),
            Some(Progression { ratio: 1, start: 0, len: 3 })
        );
        assert_eq!(
            g.detect_progression(&set(&g, &[2, 4, 6])),
            Some(Progression { ratio: 2, start: 1, len: 3 })
        );
        assert_eq!(g.detect_progression(&set(&g, &[0, 1, 3])), None);
        let g = z(11);
        assert_eq!(g.detect_progression(&set(&g, &[0, 2, 4])).map(|p| p.ratio), Some(2));
        // In Z8 the odd progression {1,3,5} is not a run of powers of any
        // element, only a translate of one.
        let g = z(8);
        let s = set(&g, &[1, 3, 5]);
        assert_eq!(g.detect_progression(&s), None);
        let (a, p) = g.detect_translated_progression(&s).unwrap();
        assert_eq!(g.left_translate(g.inv(a), &s).len(), p.len);
    }

    /// Brute-force oracle for the `{0,1,3}` example: enumerate every
    /// `(r, j)` pair and every length-3 window of powers.
    #[test]
    fn progression_negative_case_by_enumeration() {
        let g = z(7);
        let target = [0usize, 1, 3];
        let mut hits = 0;
        for r in 0..7 {
            for j in 0..7 {
                let mut w: Vec<usize> = (0..3).map(|i| (r * (j + i)) % 7).collect();
                w.sort();
                w.dedup();
                if w == target {
                    hits += 1;
                }
            }
        }
        assert_eq!(hits, 0);
        assert_eq!(g.detect_progression(&set(&g, &target)), None);
    }

    #[test]
    fn seminormality_examples() {
        let g = z(6);
        assert_eq!(g.seminormality(&set(&g, &[0, 1, 4])), SemiNormality::Normal);

        let s3 = FiniteGroup::symmetric(3).unwrap();
        let classes = s3.conjugacy_classes();
        assert_eq!(classes.len(), 3);
        let transpositions = classes.iter().find(|c| c.len() == 3).unwrap();
        let s = transpositions.union(&s3.set(&[0]).unwrap());
        assert_eq!(s3.seminormality(&s), SemiNormality::Normal);

        // X normal, a arbitrary: Xa is semi-normal.
        let a = transpositions.first().unwrap();
        let x = transpositions.clone();
        let xa = s3.right_translate(&x, a);
        assert!(xa.contains(0));
        assert!(matches!(
            s3.seminormality(&xa),
            SemiNormality::SemiNormal { .. } | SemiNormality::Normal
        ));
        let inv = transpositions.first().unwrap();
        let rot = (1..6).find(|&x| s3.element_order(x) == 3).unwrap();
        let odd = s3.set(&[0, inv, rot]).unwrap();
        assert_eq!(s3.seminormality(&odd), SemiNormality::Neither);
    }

    #[test]
    fn subgroup_lattice_sizes() {
        assert_eq!(z(12).all_subgroups().len(), 6);
        assert_eq!(FiniteGroup::symmetric(3).unwrap().all_subgroups().len(), 6);
        assert_eq!(FiniteGroup::symmetric(4).unwrap().all_subgroups().len(), 30);
        assert_eq!(FiniteGroup::dihedral(4).unwrap().all_subgroups().len(), 10);
    }

    #[test]
    fn subgroup_as_group_keeps_identity() {
        let g = z(12);
        let h = set(&g, &[0, 4, 8]);
        let (sub, embed) = g.subgroup_as_group(&h).unwrap();
        assert_eq!(sub.order(), 3);
        assert_eq!(embed, vec![0, 4, 8]);
        assert_eq!(sub.mul(1, 2), 0);
    }
}
