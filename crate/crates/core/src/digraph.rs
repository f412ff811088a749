//! Finite directed graphs with per-vertex bit-set adjacency, the boundary
//! operators `Γ`, `∂`, `∂⁻`, the far sides `X^⋏` / `X^⋎`, and Cayley graphs.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::FiniteGroup;
use crate::set::ElementSet;

/// Which adjacency a boundary operator follows: `Γ` or `Γ⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    #[serde(rename = "fwd")]
    Forward,
    #[serde(rename = "rev")]
    Reverse,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Forward => Sign::Reverse,
            Sign::Reverse => Sign::Forward,
        }
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fwd" | "forward" | "+" => Ok(Sign::Forward),
            "rev" | "reverse" | "-" => Ok(Sign::Reverse),
            other => Err(Error::Parse(format!("unknown sign {other:?}"))),
        }
    }
}

#[derive(Clone)]
pub struct Digraph {
    n: usize,
    out: Vec<ElementSet>,
    inn: Vec<ElementSet>,
    reflexive: bool,
    /// `action[v]` is an automorphism sending vertex 0 to `v`, when the graph
    /// is known to be vertex-transitive.
    action: Option<Arc<Vec<Vec<u32>>>>,
}

impl std::fmt::Debug for Digraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Digraph")
            .field("n", &self.n)
            .field("arcs", &self.arc_count())
            .field("reflexive", &self.reflexive)
            .finish()
    }
}

/// On-disk format: `{"n": int, "arcs": [[u, v], ...], "reflexive": bool}`.
/// When `reflexive` is true the loops are implied even if not listed.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct GraphFile {
    pub n: usize,
    pub arcs: Vec<[usize; 2]>,
    pub reflexive: bool,
}

impl Digraph {
    pub fn new(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut out = vec![ElementSet::empty(n); n];
        for (u, v) in arcs {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange {
                        vertex: w,
                        vertices: n,
                    });
                }
            }
            out[u].insert(v);
        }
        Ok(Self::from_out_sets(out))
    }

    pub fn from_out_sets(out: Vec<ElementSet>) -> Self {
        let n = out.len();
        let mut inn = vec![ElementSet::empty(n); n];
        for (u, succ) in out.iter().enumerate() {
            assert_eq!(succ.universe(), n, "adjacency universe must equal vertex count");
            for v in succ {
                inn[v].insert(u);
            }
        }
        let reflexive = (0..n).all(|v| out[v].contains(v));
        Self {
            n,
            out,
            inn,
            reflexive,
            action: None,
        }
    }

    pub fn from_file(file: &GraphFile) -> Result<Self> {
        let g = Self::new(file.n, file.arcs.iter().map(|a| (a[0], a[1])))?;
        Ok(if file.reflexive { g.reflexive_closure() } else { g })
    }

    pub fn from_json(json: &str) -> Result<Self> {
        Self::from_file(&serde_json::from_str(json)?)
    }

    /// Every arc, loops included, in lexicographic order.
    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            n: self.n,
            arcs: self.arcs().map(|(u, v)| [u, v]).collect(),
            reflexive: self.reflexive,
        }
    }

    /// A seeded random graph: each off-diagonal arc present with probability
    /// `density`, plus every loop.
    pub fn random_reflexive<R: Rng>(n: usize, density: f64, rng: &mut R) -> Self {
        let mut out = vec![ElementSet::empty(n); n];
        for (u, succ) in out.iter_mut().enumerate() {
            for v in 0..n {
                if u == v || rng.gen_bool(density) {
                    succ.insert(v);
                }
            }
        }
        Self::from_out_sets(out)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn is_reflexive(&self) -> bool {
        self.reflexive
    }

    pub fn require_reflexive(&self) -> Result<()> {
        if self.reflexive {
            Ok(())
        } else {
            Err(Error::NotReflexive)
        }
    }

    pub fn successors(&self, v: usize) -> &ElementSet {
        &self.out[v]
    }

    pub fn predecessors(&self, v: usize) -> &ElementSet {
        &self.inn[v]
    }

    pub fn neighbors(&self, v: usize, sign: Sign) -> &ElementSet {
        match sign {
            Sign::Forward => &self.out[v],
            Sign::Reverse => &self.inn[v],
        }
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out[u].contains(v)
    }

    pub fn arc_count(&self) -> usize {
        self.out.iter().map(ElementSet::len).sum()
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, succ)| succ.iter().map(move |v| (u, v)))
    }

    pub fn empty_set(&self) -> ElementSet {
        ElementSet::empty(self.n)
    }

    pub fn full_set(&self) -> ElementSet {
        ElementSet::full(self.n)
    }

    /// `Γ⁻¹`: same vertices, every arc reversed.
    pub fn reverse(&self) -> Self {
        Self {
            n: self.n,
            out: self.inn.clone(),
            inn: self.out.clone(),
            reflexive: self.reflexive,
            action: self.action.clone(),
        }
    }

    /// The graph viewed through `sign`: itself or its reverse.
    pub fn oriented(&self, sign: Sign) -> Self {
        match sign {
            Sign::Forward => self.clone(),
            Sign::Reverse => self.reverse(),
        }
    }

    pub fn reflexive_closure(&self) -> Self {
        let mut out = self.out.clone();
        for (v, succ) in out.iter_mut().enumerate() {
            succ.insert(v);
        }
        let mut g = Self::from_out_sets(out);
        g.action = self.action.clone();
        g
    }

    /// Automorphisms `a_v` with `a_v(0) = v`, when the graph carries them.
    pub fn transitive_action(&self) -> Option<&[Vec<u32>]> {
        self.action.as_deref().map(Vec::as_slice)
    }

    pub fn min_valency(&self, sign: Sign) -> usize {
        (0..self.n)
            .map(|v| self.neighbors(v, sign).len())
            .min()
            .unwrap_or(0)
    }

    fn check_set(&self, x: &ElementSet) -> Result<()> {
        if x.universe() != self.n {
            return Err(Error::UniverseMismatch {
                left: self.n,
                right: x.universe(),
            });
        }
        Ok(())
    }

    /// `Γ(X)` (forward) or `Γ⁻¹(X)` (reverse).
    pub fn image(&self, x: &ElementSet, sign: Sign) -> ElementSet {
        let mut out = self.empty_set();
        for v in x {
            out.union_with(self.neighbors(v, sign));
        }
        out
    }

    /// `∂(X) = Γ(X) ∖ X` or `∂⁻(X) = Γ⁻¹(X) ∖ X`.
    pub fn boundary(&self, x: &ElementSet, sign: Sign) -> ElementSet {
        self.image(x, sign).difference(x)
    }

    /// `X^⋏ = V ∖ (X ∪ Γ(X))` or `X^⋎ = V ∖ (X ∪ Γ⁻¹(X))`.
    pub fn co_complement(&self, x: &ElementSet, sign: Sign) -> ElementSet {
        self.image(x, sign).union(x).complement()
    }

    pub fn try_boundary(&self, x: &ElementSet, sign: Sign) -> Result<ElementSet> {
        self.check_set(x)?;
        Ok(self.boundary(x, sign))
    }

    pub fn try_co_complement(&self, x: &ElementSet, sign: Sign) -> Result<ElementSet> {
        self.check_set(x)?;
        Ok(self.co_complement(x, sign))
    }

    /// Returns some `X` inducing a `k`-separation (`|X| ≥ k`, `|X^⋏| ≥ k`),
    /// or `None`. A separating set contains a separating `k`-subset, so only
    /// `k`-subsets are scanned, in lexicographic order.
    pub fn k_separation(&self, k: usize) -> Result<Option<ElementSet>> {
        self.require_reflexive()?;
        if k == 0 {
            return Err(Error::ZeroK);
        }
        if 2 * k > self.n {
            return Ok(None);
        }
        let mut combo: Vec<usize> = (0..k).collect();
        loop {
            let x = ElementSet::from_indices(self.n, &combo).expect("in range");
            if self.co_complement(&x, Sign::Forward).len() >= k {
                return Ok(Some(x));
            }
            // Advance to the next k-combination.
            let mut i = k;
            loop {
                if i == 0 {
                    return Ok(None);
                }
                i -= 1;
                if combo[i] < self.n - k + i {
                    combo[i] += 1;
                    for j in i + 1..k {
                        combo[j] = combo[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    pub fn is_k_separable(&self, k: usize) -> Result<bool> {
        Ok(self.k_separation(k)?.is_some())
    }

    /// Out-adjacency rows as machine words (graphs of at most 64 vertices).
    pub(crate) fn out_masks(&self) -> Vec<u64> {
        self.out.iter().map(ElementSet::to_mask).collect()
    }
}

/// `Cay(G, S)`: arcs `(x, y)` with `x⁻¹y ∈ S`, so `Γ(F) = FS`.
pub fn cayley_graph(g: &FiniteGroup, s: &ElementSet) -> Result<Digraph> {
    if s.universe() != g.order() {
        return Err(Error::UniverseMismatch {
            left: g.order(),
            right: s.universe(),
        });
    }
    if !s.contains(g.identity()) {
        return Err(Error::MissingIdentity);
    }
    let n = g.order();
    let out = (0..n).map(|x| g.left_translate(x, s)).collect();
    let mut graph = Digraph::from_out_sets(out);
    let action: Vec<Vec<u32>> = (0..n)
        .map(|v| (0..n).map(|x| g.mul(v, x) as u32).collect())
        .collect();
    graph.action = Some(Arc::new(action));
    Ok(graph)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cay(n: usize, s: &[usize]) -> Digraph {
        let g = FiniteGroup::cyclic(n).unwrap();
        cayley_graph(&g, &g.set(s).unwrap()).unwrap()
    }

    fn set(n: usize, xs: &[usize]) -> ElementSet {
        ElementSet::from_indices(n, xs).unwrap()
    }

    #[test]
    fn cayley_cycle() {
        let g = cay(5, &[0, 1]);
        assert!(g.is_reflexive());
        assert_eq!(g.arc_count(), 10);
        for v in 0..5 {
            assert_eq!(g.successors(v).to_vec().len(), 2);
            assert!(g.has_arc(v, (v + 1) % 5));
        }
    }

    #[test]
    fn cayley_requires_identity() {
        let g = FiniteGroup::cyclic(5).unwrap();
        assert!(matches!(
            cayley_graph(&g, &g.set(&[1, 2]).unwrap()),
            Err(Error::MissingIdentity)
        ));
    }

    #[test]
    fn cayley_image_is_product() {
        let g = cay(7, &[0, 1, 3]);
        assert_eq!(g.image(&set(7, &[0]), Sign::Forward), set(7, &[0, 1, 3]));
        assert_eq!(g.image(&set(7, &[0, 1]), Sign::Forward), set(7, &[0, 1, 2, 3, 4]));
    }

    #[test]
    fn reverse_of_cayley_is_inverse_connection_set() {
        let grp = FiniteGroup::symmetric(3).unwrap();
        let s = grp.set(&[0, 1, 3]).unwrap();
        let rev = cayley_graph(&grp, &s).unwrap().reverse();
        let inv = cayley_graph(&grp, &grp.inverse_set(&s)).unwrap();
        for v in 0..6 {
            assert_eq!(rev.successors(v), inv.successors(v));
        }
    }

    #[test]
    fn image_edge_cases() {
        let g = cay(7, &[0, 1, 3]);
        assert!(g.image(&g.empty_set(), Sign::Forward).is_empty());
        assert_eq!(g.image(&g.full_set(), Sign::Forward), g.full_set());
    }

    #[test]
    fn boundary_examples() {
        let g = cay(7, &[0, 1]);
        assert_eq!(g.boundary(&set(7, &[0, 1, 2]), Sign::Forward), set(7, &[3]));
        assert!(g.boundary(&g.full_set(), Sign::Forward).is_empty());
        let g = cay(6, &[0, 1, 3]);
        assert_eq!(g.boundary(&set(6, &[0, 3]), Sign::Forward), set(6, &[1, 4]));
    }

    #[test]
    fn co_complement_examples() {
        let g = cay(7, &[0, 1]);
        assert_eq!(g.co_complement(&set(7, &[0, 1, 2]), Sign::Forward), set(7, &[4, 5, 6]));
        assert!(g.co_complement(&g.full_set(), Sign::Forward).is_empty());
        let g = cay(7, &[0, 1, 3]);
        assert_eq!(g.co_complement(&set(7, &[0]), Sign::Forward), set(7, &[2, 4, 5, 6]));
    }

    #[test]
    fn separability_examples() {
        assert_eq!(cay(4, &[0, 1, 2]).k_separation(2).unwrap(), None);
        assert_eq!(cay(7, &[0, 1]).k_separation(2).unwrap(), Some(set(7, &[0, 1])));
        let path = Digraph::new(3, [(0, 1), (1, 2)]).unwrap().reflexive_closure();
        assert!(path.is_k_separable(1).unwrap());
        let raw = Digraph::new(2, [(0, 1)]).unwrap();
        assert!(matches!(raw.k_separation(1), Err(Error::NotReflexive)));
    }

    /// Oracle for the `Cay(Z4, {0,1,2})`, `k = 2` case: every 2-subset X has X+S = Z4.
    #[test]
    fn z4_not_two_separable_by_enumeration() {
        let g = cay(4, &[0, 1, 2]);
        for a in 0..4 {
            for b in a + 1..4 {
                let x = set(4, &[a, b]);
                assert_eq!(g.image(&x, Sign::Forward).len(), 4);
            }
        }
    }

    #[test]
    fn graph_file_round_trip() {
        let g = cay(4, &[0, 1, 2]);
        let file = g.to_file();
        assert_eq!(file.arcs.len(), 12);
        assert!(file.reflexive);
        let back = Digraph::from_file(&file).unwrap();
        assert_eq!(back.to_file(), file);
        let bad = GraphFile { n: 2, arcs: vec![[0, 2]], reflexive: false };
        assert!(Digraph::from_file(&bad).is_err());
    }

    #[test]
    fn left_translations_are_automorphisms() {
        let grp = FiniteGroup::dihedral(4).unwrap();
        let s = grp.set(&[0, 1, 4]).unwrap();
        let g = cayley_graph(&grp, &s).unwrap();
        let action = g.transitive_action().unwrap();
        for (v, perm) in action.iter().enumerate() {
            assert_eq!(perm[0] as usize, v);
            for (x, y) in g.arcs() {
                assert!(g.has_arc(perm[x] as usize, perm[y] as usize));
            }
        }
    }

    proptest! {
        #[test]
        fn transpose_and_far_side_laws(seed in any::<u64>(), n in 1usize..9, xm in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = Digraph::random_reflexive(n, 0.35, &mut rng);
            let r = g.reverse();
            let x = ElementSet::from_mask(n, xm);
            for (u, v) in g.arcs() {
                prop_assert!(r.has_arc(v, u));
            }
            prop_assert_eq!(g.boundary(&x, Sign::Reverse), r.boundary(&x, Sign::Forward));
            let far = g.co_complement(&x, Sign::Forward);
            prop_assert!(g.image(&x, Sign::Forward).is_disjoint(&far));
            // X separates Γ iff X^⋏ separates Γ⁻¹ (with the same k).
            let k = x.len().min(far.len());
            if k >= 1 {
                let back = r.co_complement(&far, Sign::Forward);
                prop_assert!(back.len() >= k && far.len() >= k);
            }
        }
    }
}
