//! The manifest-driven group catalog swept by the theorem checkers.

use serde::Deserialize;

use super::{make_group, FiniteGroup, GroupSpec};
use crate::error::{Error, Result};
use crate::set::ElementSet;

const BUILTIN_MANIFEST: &str = include_str!("../../catalog/groups.json");

/// Subset sweeps enumerate `2^(n-1)` masks; beyond this they are refused.
pub const SWEEP_ORDER_LIMIT: usize = 24;

#[derive(Deserialize)]
struct Manifest {
    groups: Vec<ManifestEntry>,
}

#[derive(Deserialize)]
struct ManifestEntry {
    name: String,
    spec: String,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub spec: GroupSpec,
    pub group: FiniteGroup,
}

#[derive(Debug, Clone)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    /// The catalog shipped with the crate (`catalog/groups.json`).
    pub fn builtin() -> Result<Self> {
        Self::from_manifest(BUILTIN_MANIFEST)
    }

    pub fn from_manifest(json: &str) -> Result<Self> {
        let manifest: Manifest = serde_json::from_str(json)?;
        let entries = manifest
            .groups
            .into_iter()
            .map(|e| {
                let spec: GroupSpec = e.spec.parse()?;
                let group = make_group(&spec)?.with_name(&e.name);
                Ok(CatalogEntry {
                    name: e.name,
                    spec,
                    group,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { entries })
    }

    /// Entries of order at most `max_order`, preserving manifest order.
    pub fn up_to(&self, max_order: usize) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .filter(|e| e.group.order() <= max_order)
                .cloned()
                .collect(),
        }
    }

    pub fn abelian(&self) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .filter(|e| e.group.is_abelian())
                .cloned()
                .collect(),
        }
    }

    pub fn get(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, CatalogEntry> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn check_sweepable(g: &FiniteGroup) -> Result<()> {
    if g.order() > SWEEP_ORDER_LIMIT {
        return Err(Error::ExhaustiveLimit {
            vertices: g.order(),
            limit: SWEEP_ORDER_LIMIT,
        });
    }
    Ok(())
}

/// `⟨S⟩` computed on machine words.
pub(crate) fn generated_mask(g: &FiniteGroup, s: u64) -> u64 {
    let mut h = 1u64;
    let mut frontier = 1u64;
    while frontier != 0 {
        let mut next = 0u64;
        let mut f = frontier;
        while f != 0 {
            let x = f.trailing_zeros() as usize;
            f &= f - 1;
            let mut gens = s;
            while gens != 0 {
                let y = gens.trailing_zeros() as usize;
                gens &= gens - 1;
                next |= 1u64 << g.mul(x, y);
            }
        }
        frontier = next & !h;
        h |= next;
    }
    h
}

/// Every subset containing the identity, in increasing mask order.
pub fn identity_subsets(g: &FiniteGroup) -> Result<Vec<ElementSet>> {
    check_sweepable(g)?;
    let n = g.order();
    Ok((0u64..1 << (n - 1))
        .map(|m| ElementSet::from_mask(n, (m << 1) | 1))
        .collect())
}

/// Every generating subset containing the identity, in increasing mask order.
pub fn generating_sets(g: &FiniteGroup) -> Result<Vec<ElementSet>> {
    check_sweepable(g)?;
    let n = g.order();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    Ok((0u64..1 << (n - 1))
        .map(|m| (m << 1) | 1)
        .filter(|&s| generated_mask(g, s) == full)
        .map(|s| ElementSet::from_mask(n, s))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_catalog_loads() {
        let cat = Catalog::builtin().unwrap();
        assert!(cat.len() >= 40);
        let small = cat.up_to(16);
        // Abelian groups of order <= 16 up to isomorphism: 1,1,1,2,1,1,1,3,2,1,1,2,1,1,1,5.
        assert_eq!(small.abelian().len(), 25);
        for e in small.iter() {
            assert!(e.group.order() <= 16);
        }
        assert_eq!(cat.get("F21").unwrap().group.order(), 21);
    }

    #[test]
    fn generating_sets_of_z6() {
        let g = FiniteGroup::cyclic(6).unwrap();
        let sets = generating_sets(&g).unwrap();
        for s in &sets {
            assert!(s.contains(0));
            assert_eq!(g.subgroup_generated(s), g.full_set());
        }
        // Oracle: count subsets of {1..5} that generate Z6 by brute force.
        let count = (0u32..32)
            .filter(|m| {
                let s = ElementSet::from_mask(6, ((*m as u64) << 1) | 1);
                g.subgroup_generated(&s).len() == 6
            })
            .count();
        assert_eq!(sets.len(), count);
        assert_eq!(identity_subsets(&g).unwrap().len(), 32);
    }

    #[test]
    fn sweeps_refuse_large_groups() {
        let g = FiniteGroup::cyclic(30).unwrap();
        assert!(matches!(generating_sets(&g), Err(Error::ExhaustiveLimit { .. })));
    }
}
