//! Connectivities `κ_k`, fragments, atoms and atom multiplicities of finite
//! reflexive graphs, plus the subset classification used by the checkers.
//!
//! `κ_k` is the minimum of `|∂X|` over sets with `|X| ≥ k` and
//! `|V ∖ Γ(X)| ≥ k`; when no such set exists it is `|V| − 2k + 1`.

pub(crate) mod calculus;
pub(crate) mod engine;

use serde::Serialize;

use crate::digraph::{cayley_graph, Digraph, Sign};
use crate::error::{Error, Result};
use crate::groups::FiniteGroup;
use crate::menger;
use crate::set::ElementSet;

pub use calculus::{
    check_dual_fragment_order, check_duality, check_fragment_intersection,
    check_fragment_pair_bounds, check_isoperimetric_inequality, check_submodularity,
    check_translation_closure, CalculusReport, Violation,
};
pub use engine::EXHAUSTIVE_LIMIT;
use engine::{canonicalize, expand_translates, Goal, MaskSearch};

/// Above this many vertices `κ₁` is computed by max-flow.
pub const FLOW_THRESHOLD: usize = 20;

/// A list of fragments or atoms. For non-separable graphs every `k`-subset
/// qualifies, and the list is kept as a description rather than materialized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FragmentList {
    Listed(Vec<ElementSet>),
    AllKSubsets { n: usize, k: usize },
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

impl FragmentList {
    pub fn len(&self) -> u128 {
        match self {
            FragmentList::Listed(v) => v.len() as u128,
            FragmentList::AllKSubsets { n, k } => binomial(*n, *k),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_listed(&self) -> bool {
        matches!(self, FragmentList::Listed(_))
    }

    pub fn contains(&self, x: &ElementSet) -> bool {
        match self {
            FragmentList::Listed(v) => v.binary_search(x).is_ok(),
            FragmentList::AllKSubsets { n, k } => x.universe() == *n && x.len() == *k,
        }
    }

    /// Sets in canonical order; `k`-subsets are generated on the fly.
    pub fn iter(&self) -> Box<dyn Iterator<Item = ElementSet> + '_> {
        match self {
            FragmentList::Listed(v) => Box::new(v.iter().cloned()),
            FragmentList::AllKSubsets { n, k } => Box::new(Combinations::new(*n, *k)),
        }
    }

    pub fn first(&self) -> Option<ElementSet> {
        self.iter().next()
    }

    /// At most `limit` sets, for display.
    pub fn take(&self, limit: usize) -> Vec<ElementSet> {
        self.iter().take(limit).collect()
    }
}

/// `k`-subsets of `0..n` in lexicographic order.
pub struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        Self {
            n,
            idx: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = ElementSet;

    fn next(&mut self) -> Option<ElementSet> {
        if self.done {
            return None;
        }
        let out = ElementSet::from_indices(self.n, &self.idx).expect("in range");
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Per-`(k, sign)` record: connectivity, fragments, atoms and multiplicity.
#[derive(Debug, Clone)]
pub struct IsoProfile {
    pub k: usize,
    pub sign: Sign,
    pub separable: bool,
    pub kappa: usize,
    pub alpha: usize,
    /// Minimum over vertices of the number of atoms containing the vertex.
    pub omega: u128,
    /// Maximum of the same count.
    pub omega_max: u128,
    pub fragments: FragmentList,
    pub atoms: FragmentList,
}

/// The same record without the full fragment list, which is usually much
/// longer than the atom list.
#[derive(Debug, Clone)]
pub struct AtomProfile {
    pub k: usize,
    pub sign: Sign,
    pub separable: bool,
    pub kappa: usize,
    pub alpha: usize,
    pub omega: u128,
    pub omega_max: u128,
    pub atoms: FragmentList,
}

impl AtomProfile {
    /// First atom in canonical order containing `v`.
    pub fn atom_containing(&self, v: usize) -> Option<ElementSet> {
        self.atoms.iter().find(|a| a.contains(v))
    }
}

impl IsoProfile {
    pub fn atom_profile(&self) -> AtomProfile {
        AtomProfile {
            k: self.k,
            sign: self.sign,
            separable: self.separable,
            kappa: self.kappa,
            alpha: self.alpha,
            omega: self.omega,
            omega_max: self.omega_max,
            atoms: self.atoms.clone(),
        }
    }
}

/// JSON summary emitted by the command line.
#[derive(Debug, Clone, Serialize)]
pub struct ProfileSummary {
    pub k: usize,
    pub sign: Sign,
    pub kappa: usize,
    pub alpha: usize,
    pub omega: u128,
    pub separable: bool,
    pub atoms: Vec<ElementSet>,
    pub atoms_count: u128,
    pub fragments_count: Option<u128>,
}

impl From<&AtomProfile> for ProfileSummary {
    fn from(p: &AtomProfile) -> Self {
        ProfileSummary {
            k: p.k,
            sign: p.sign,
            kappa: p.kappa,
            alpha: p.alpha,
            omega: p.omega,
            separable: p.separable,
            atoms: p.atoms.iter().collect(),
            atoms_count: p.atoms.len(),
            fragments_count: None,
        }
    }
}

impl From<&IsoProfile> for ProfileSummary {
    fn from(p: &IsoProfile) -> Self {
        let mut s = ProfileSummary::from(&p.atom_profile());
        s.fragments_count = Some(p.fragments.len());
        s
    }
}

fn check_input(g: &Digraph, k: usize) -> Result<()> {
    g.require_reflexive()?;
    if k == 0 {
        return Err(Error::ZeroK);
    }
    if g.vertex_count() + 1 < 2 * k {
        return Err(Error::TooFewVertices {
            vertices: g.vertex_count(),
            k,
        });
    }
    Ok(())
}

fn require_exhaustive(g: &Digraph) -> Result<()> {
    if g.vertex_count() > EXHAUSTIVE_LIMIT {
        return Err(Error::ExhaustiveLimit {
            vertices: g.vertex_count(),
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    Ok(())
}

/// Adjacency rows in the direction given by `sign`.
fn oriented_rows(g: &Digraph, sign: Sign) -> Vec<u64> {
    (0..g.vertex_count())
        .map(|v| g.neighbors(v, sign).to_mask())
        .collect()
}

fn non_separable_value(n: usize, k: usize) -> usize {
    n + 1 - 2 * k
}

/// Exhaustive `κ_k` in direction `sign`, with the separability flag.
fn exhaustive_kappa(g: &Digraph, k: usize, sign: Sign) -> (usize, bool) {
    let n = g.vertex_count();
    let rows = oriented_rows(g, sign);
    let rooted = g.transitive_action().is_some();
    match MaskSearch::new(n, &rows, k).min_boundary(rooted) {
        Some(b) => (b, true),
        None => (non_separable_value(n, k), false),
    }
}

/// `κ_k` (forward) or `κ_{−k}` (reverse).
pub fn kappa(g: &Digraph, k: usize, sign: Sign) -> Result<usize> {
    check_input(g, k)?;
    if k == 1 && g.vertex_count() > FLOW_THRESHOLD {
        return menger::kappa1_flow(&g.oriented(sign));
    }
    require_exhaustive(g)?;
    Ok(exhaustive_kappa(g, k, sign).0)
}

/// Sets in `masks` as canonical [`ElementSet`]s; for transitive graphs the
/// masks are the ones through vertex 0 and are expanded by the action.
fn materialize(g: &Digraph, mut masks: Vec<u64>) -> Vec<ElementSet> {
    let n = g.vertex_count();
    let masks = match g.transitive_action() {
        Some(action) => expand_translates(&masks, action),
        None => {
            canonicalize(&mut masks);
            masks
        }
    };
    masks.into_iter().map(|m| ElementSet::from_mask(n, m)).collect()
}

fn multiplicity(g: &Digraph, atoms: &FragmentList) -> (u128, u128) {
    let n = g.vertex_count();
    match atoms {
        FragmentList::AllKSubsets { n, k } => {
            let c = binomial(n - 1, k - 1);
            (c, c)
        }
        FragmentList::Listed(list) => {
            let mut count = vec![0u128; n];
            for a in list {
                for v in a {
                    count[v] += 1;
                }
            }
            let min = count.iter().copied().min().unwrap_or(0);
            let max = count.iter().copied().max().unwrap_or(0);
            (min, max)
        }
    }
}

/// Atoms, `α_k` and `ω_k` without listing every fragment.
pub fn atom_profile(g: &Digraph, k: usize, sign: Sign) -> Result<AtomProfile> {
    check_input(g, k)?;
    require_exhaustive(g)?;
    let n = g.vertex_count();
    let (kappa, separable) = exhaustive_kappa(g, k, sign);
    let atoms = if separable {
        let rows = oriented_rows(g, sign);
        let rooted = g.transitive_action().is_some();
        let found = MaskSearch::new(n, &rows, k).collect(rooted, kappa, Goal::Smallest);
        FragmentList::Listed(materialize(g, found))
    } else {
        FragmentList::AllKSubsets { n, k }
    };
    let alpha = match &atoms {
        FragmentList::Listed(v) => v[0].len(),
        FragmentList::AllKSubsets { k, .. } => *k,
    };
    let (omega, omega_max) = multiplicity(g, &atoms);
    Ok(AtomProfile {
        k,
        sign,
        separable,
        kappa,
        alpha,
        omega,
        omega_max,
        atoms,
    })
}

/// Full profile including every fragment.
pub fn profile(g: &Digraph, k: usize, sign: Sign) -> Result<IsoProfile> {
    check_input(g, k)?;
    require_exhaustive(g)?;
    let n = g.vertex_count();
    let (kappa, separable) = exhaustive_kappa(g, k, sign);
    if !separable {
        let all = FragmentList::AllKSubsets { n, k };
        let (omega, omega_max) = multiplicity(g, &all);
        return Ok(IsoProfile {
            k,
            sign,
            separable,
            kappa,
            alpha: k,
            omega,
            omega_max,
            fragments: all.clone(),
            atoms: all,
        });
    }
    let rows = oriented_rows(g, sign);
    let rooted = g.transitive_action().is_some();
    let found = MaskSearch::new(n, &rows, k).collect(rooted, kappa, Goal::All);
    let fragments = materialize(g, found);
    let alpha = fragments.iter().map(ElementSet::len).min().expect("separable");
    let atoms = FragmentList::Listed(fragments.iter().filter(|f| f.len() == alpha).cloned().collect());
    let (omega, omega_max) = multiplicity(g, &atoms);
    Ok(IsoProfile {
        k,
        sign,
        separable,
        kappa,
        alpha,
        omega,
        omega_max,
        fragments: FragmentList::Listed(fragments),
        atoms,
    })
}

pub fn fragments(g: &Digraph, k: usize, sign: Sign) -> Result<FragmentList> {
    Ok(profile(g, k, sign)?.fragments)
}

pub fn atoms(g: &Digraph, k: usize, sign: Sign) -> Result<(usize, FragmentList)> {
    let p = atom_profile(g, k, sign)?;
    Ok((p.alpha, p.atoms))
}

pub fn omega(g: &Digraph, k: usize, sign: Sign) -> Result<u128> {
    Ok(atom_profile(g, k, sign)?.omega)
}

/// Invariants of a connection set, computed in `Cay(⟨S⟩, S)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsetInvariants {
    pub generated_order: usize,
    pub kappa1: usize,
    /// `None` when `⟨S⟩` has fewer than three elements.
    pub kappa2: Option<usize>,
    pub two_separable: bool,
    /// `κ₂(S) − |S|`.
    pub mu: Option<i64>,
    pub min_valency: usize,
    pub cauchy: bool,
    pub vosper: bool,
}

/// `Cay(⟨S⟩, S)` and the embedding of `⟨S⟩` into the ambient group.
pub fn generated_cayley_graph(g: &FiniteGroup, s: &ElementSet) -> Result<(Digraph, FiniteGroup, Vec<usize>)> {
    if s.universe() != g.order() {
        return Err(Error::UniverseMismatch {
            left: g.order(),
            right: s.universe(),
        });
    }
    if !s.contains(g.identity()) {
        return Err(Error::MissingIdentity);
    }
    let h = g.subgroup_generated(s);
    let (sub, embed) = if h.len() == g.order() {
        (g.clone(), (0..g.order()).collect())
    } else {
        g.subgroup_as_group(&h)?
    };
    let mut local = sub.empty_set();
    for (i, &x) in embed.iter().enumerate() {
        if s.contains(x) {
            local.insert(i);
        }
    }
    Ok((cayley_graph(&sub, &local)?, sub, embed))
}

pub fn classify(g: &FiniteGroup, s: &ElementSet) -> Result<SubsetInvariants> {
    let (graph, sub, _) = generated_cayley_graph(g, s)?;
    let n = sub.order();
    let kappa1 = kappa(&graph, 1, Sign::Forward)?;
    let (kappa2, two_separable) = if n >= 3 {
        require_exhaustive(&graph)?;
        let (value, sep) = exhaustive_kappa(&graph, 2, Sign::Forward);
        (Some(value), sep)
    } else {
        (None, false)
    };
    let delta = s.len();
    Ok(SubsetInvariants {
        generated_order: n,
        kappa1,
        kappa2,
        two_separable,
        mu: kappa2.map(|k2| k2 as i64 - delta as i64),
        min_valency: delta,
        cauchy: kappa1 + 1 == delta,
        vosper: !two_separable || kappa2.is_some_and(|k2| k2 >= delta),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::cayley_graph;

    fn cay(n: usize, s: &[usize]) -> Digraph {
        let g = FiniteGroup::cyclic(n).unwrap();
        cayley_graph(&g, &g.set(s).unwrap()).unwrap()
    }

    fn set(n: usize, xs: &[usize]) -> ElementSet {
        ElementSet::from_indices(n, xs).unwrap()
    }

    fn listed(list: &FragmentList) -> &[ElementSet] {
        match list {
            FragmentList::Listed(v) => v,
            _ => panic!("expected a listed family"),
        }
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa(&cay(7, &[0, 1, 3]), 1, Sign::Forward).unwrap(), 2);
        assert_eq!(kappa(&cay(4, &[0, 1, 2]), 2, Sign::Forward).unwrap(), 1);
        assert_eq!(kappa(&cay(7, &[0, 1, 2]), 2, Sign::Forward).unwrap(), 2);
        assert!(matches!(
            kappa(&cay(4, &[0, 1]), 3, Sign::Forward),
            Err(Error::TooFewVertices { .. })
        ));
    }

    /// Oracle for `Cay(Z7, {0,1,2})`, `k = 2`: scan every subset directly.
    #[test]
    fn kappa2_z7_interval_by_scan() {
        let g = cay(7, &[0, 1, 2]);
        let mut best = usize::MAX;
        for m in 1u64..128 {
            let x = ElementSet::from_mask(7, m);
            let far = g.co_complement(&x, Sign::Forward);
            if x.len() >= 2 && far.len() >= 2 {
                best = best.min(g.boundary(&x, Sign::Forward).len());
            }
        }
        assert_eq!(best, 2);
    }

    #[test]
    fn fragments_of_directed_cycle() {
        let frags = fragments(&cay(5, &[0, 1]), 1, Sign::Forward).unwrap();
        assert_eq!(frags.len(), 15);
        for f in frags.iter() {
            // Every fragment is an interval: its image adds exactly one vertex.
            assert_eq!(f.len() + 1, cay(5, &[0, 1]).image(&f, Sign::Forward).len());
        }
    }

    #[test]
    fn non_separable_fragments_are_k_subsets() {
        let p = profile(&cay(4, &[0, 1, 2]), 2, Sign::Forward).unwrap();
        assert!(!p.separable);
        assert_eq!(p.fragments.len(), 6);
        assert_eq!(p.fragments.first().unwrap(), set(4, &[0, 1]));
        assert_eq!(p.omega, 3);
        let all: Vec<_> = p.fragments.iter().collect();
        assert_eq!(all.len(), 6);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn singleton_is_fragment_for_cauchy_set() {
        let frags = fragments(&cay(7, &[0, 1, 3]), 1, Sign::Forward).unwrap();
        assert!(frags.contains(&set(7, &[0])));
    }

    #[test]
    fn atom_examples() {
        let (alpha, found) = atoms(&cay(7, &[0, 1]), 1, Sign::Forward).unwrap();
        assert_eq!(alpha, 1);
        assert_eq!(found.len(), 7);

        let p = atom_profile(&cay(6, &[0, 1, 3, 4]), 1, Sign::Forward).unwrap();
        assert_eq!(p.alpha, 2);
        assert_eq!(p.atom_containing(0).unwrap(), set(6, &[0, 3]));

        let (_, found) = atoms(&cay(7, &[0, 1, 2]), 2, Sign::Forward).unwrap();
        assert!(found.contains(&set(7, &[0, 1])));
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega(&cay(7, &[0, 1]), 1, Sign::Forward).unwrap(), 1);
        assert_eq!(omega(&cay(5, &[0, 1]), 1, Sign::Forward).unwrap(), 1);
    }

    #[test]
    fn atoms_closed_under_translation() {
        let grp = FiniteGroup::dihedral(4).unwrap();
        let s = grp.set(&[0, 1, 4]).unwrap();
        let g = cayley_graph(&grp, &s).unwrap();
        let p = profile(&g, 1, Sign::Forward).unwrap();
        for a in listed(&p.atoms) {
            for x in 0..grp.order() {
                assert!(p.atoms.contains(&grp.left_translate(x, a)));
            }
        }
    }

    #[test]
    fn rooted_and_plain_searches_agree() {
        let grp = FiniteGroup::symmetric(3).unwrap();
        for m in 0u64..32 {
            let s = ElementSet::from_mask(6, (m << 1) | 1);
            let cayley = cayley_graph(&grp, &s).unwrap();
            let plain = Digraph::from_file(&cayley.to_file()).unwrap();
            for k in 1..=3 {
                for sign in [Sign::Forward, Sign::Reverse] {
                    let a = profile(&cayley, k, sign).unwrap();
                    let b = profile(&plain, k, sign).unwrap();
                    assert_eq!(a.kappa, b.kappa);
                    assert_eq!(a.fragments, b.fragments);
                    assert_eq!(a.omega, b.omega);
                }
            }
        }
    }

    #[test]
    fn flow_path_used_for_large_graphs() {
        let g = cay(23, &[0, 1, 5]);
        assert_eq!(kappa(&g, 1, Sign::Forward).unwrap(), 2);
        let big = cay(30, &[0, 1, 2]);
        assert_eq!(kappa(&big, 1, Sign::Forward).unwrap(), 2);
        assert!(matches!(
            kappa(&big, 2, Sign::Forward),
            Err(Error::ExhaustiveLimit { .. })
        ));
    }

    #[test]
    fn classify_examples() {
        let z7 = FiniteGroup::cyclic(7).unwrap();
        let c = classify(&z7, &z7.set(&[0, 1, 3]).unwrap()).unwrap();
        assert!(c.cauchy);
        assert_eq!(c.kappa1, 2);
        let c = classify(&z7, &z7.set(&[0, 1, 2]).unwrap()).unwrap();
        assert_eq!(c.mu, Some(-1));
        let z6 = FiniteGroup::cyclic(6).unwrap();
        let c = classify(&z6, &z6.set(&[0, 1, 3, 4]).unwrap()).unwrap();
        assert_eq!(c.kappa1, 2);
        assert!(!c.cauchy);
        // Non-generating: computed inside <2> = {0,2,4}.
        let c = classify(&z6, &z6.set(&[0, 2]).unwrap()).unwrap();
        assert_eq!(c.generated_order, 3);
        assert_eq!(c.kappa1, 1);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 2), 15);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(Combinations::new(5, 2).count(), 10);
        assert_eq!(Combinations::new(3, 0).count(), 1);
    }
}
