//! Vertex connectivity between two vertices by max-flow: local
//! connectivity, openly disjoint paths, minimum separating parts, fans, and
//! matchings across a vertex set.
//!
//! Each vertex `v` becomes `v_in → v_out` with capacity one and each arc
//! `u → w` becomes `u_out → w_in` with unbounded capacity. Loops are dropped.
//! Flow goes from `x_out` to `y_in`.

mod flow;

use serde::Serialize;

use crate::digraph::{cayley_graph, Digraph, Sign};
use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, Side};
use crate::iso;
use crate::set::ElementSet;
use flow::{FlowNetwork, INF};

/// Openly disjoint paths from `source` to `target`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathFamily {
    pub source: usize,
    pub target: usize,
    pub paths: Vec<Vec<usize>>,
}

impl PathFamily {
    /// Checks endpoints, arcs, and that interiors are pairwise disjoint and
    /// avoid both endpoints.
    pub fn verify(&self, g: &Digraph) -> std::result::Result<(), String> {
        let mut used = vec![false; g.vertex_count()];
        for p in &self.paths {
            if p.first() != Some(&self.source) || p.last() != Some(&self.target) || p.len() < 2 {
                return Err(format!("path {p:?} does not run from {} to {}", self.source, self.target));
            }
            for w in p.windows(2) {
                if !g.has_arc(w[0], w[1]) {
                    return Err(format!("path {p:?} uses a missing arc {} -> {}", w[0], w[1]));
                }
            }
            for &v in &p[1..p.len() - 1] {
                if v == self.source || v == self.target || used[v] {
                    return Err(format!("vertex {v} of path {p:?} is shared"));
                }
                used[v] = true;
            }
        }
        Ok(())
    }
}

/// A set `A` with `x ∈ A`, `y ∉ Γ(A)` and `|∂(A)| = boundary_size`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KPart {
    pub set: ElementSet,
    pub boundary: ElementSet,
    pub boundary_size: usize,
    pub x: usize,
    pub y: usize,
}

impl KPart {
    /// `∂⁻(A^⋏) = ∂(A)`: every boundary vertex has an arc into the far side.
    pub fn far_side_duality_holds(&self, g: &Digraph) -> bool {
        let far = g.co_complement(&self.set, Sign::Forward);
        g.boundary(&far, Sign::Reverse) == g.boundary(&self.set, Sign::Forward)
    }
}

/// Arcs `(x_i, y_i)` with distinct tails in `X` and distinct heads outside.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
}

impl Matching {
    pub fn verify(&self, g: &Digraph, x: &ElementSet) -> std::result::Result<(), String> {
        let mut tails = g.empty_set();
        let mut heads = g.empty_set();
        for &(a, b) in &self.pairs {
            if !x.contains(a) || x.contains(b) {
                return Err(format!("pair ({a},{b}) does not leave the set"));
            }
            if !g.has_arc(a, b) {
                return Err(format!("pair ({a},{b}) is not an arc"));
            }
            if !tails.insert(a) || !heads.insert(b) {
                return Err(format!("pair ({a},{b}) reuses a vertex"));
            }
        }
        Ok(())
    }
}

fn check_pair(g: &Digraph, x: usize, y: usize) -> Result<()> {
    g.require_reflexive()?;
    let n = g.vertex_count();
    for v in [x, y] {
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, vertices: n });
        }
    }
    if g.has_arc(x, y) {
        return Err(Error::AdjacentPair { x, y });
    }
    Ok(())
}

fn split_network(g: &Digraph, extra: usize) -> FlowNetwork {
    let n = g.vertex_count();
    let mut net = FlowNetwork::new(2 * n + extra);
    for v in 0..n {
        net.add_edge(2 * v, 2 * v + 1, 1);
    }
    for (u, w) in g.arcs() {
        if u != w {
            net.add_edge(2 * u + 1, 2 * w, INF);
        }
    }
    net
}

/// Vertices whose unit edge separates the residual source side from the rest.
fn cut_vertices(g: &Digraph, side: &[bool]) -> ElementSet {
    let mut cut = g.empty_set();
    for v in 0..g.vertex_count() {
        if side[2 * v] && !side[2 * v + 1] {
            cut.insert(v);
        }
    }
    cut
}

/// Removes one unit of flow from `x_out` to `sink` and returns the vertices
/// it visits, with any cycles cut out.
fn peel_path(net: &mut FlowNetwork, x: usize, sink: usize) -> Option<Vec<usize>> {
    let mut path = vec![x];
    let mut node = 2 * x + 1;
    loop {
        let (e, head) = net.flow_out(node).next()?;
        net.take_unit(e);
        let v = head / 2;
        if head == sink {
            path.push(v);
            return Some(path);
        }
        match path.iter().position(|&p| p == v) {
            Some(pos) => path.truncate(pos + 1),
            None => path.push(v),
        }
        let (split, _) = net.flow_out(head).next()?;
        net.take_unit(split);
        node = head + 1;
    }
}

fn solve(g: &Digraph, x: usize, y: usize, bound: u32) -> (FlowNetwork, usize) {
    let mut net = split_network(g, 0);
    let value = net.max_flow(2 * x + 1, 2 * y, bound);
    (net, value as usize)
}

/// The largest `k` such that every `A` with `x ∈ A`, `y ∉ Γ(A)` has
/// `|∂(A)| ≥ k`.
pub fn local_connectivity(g: &Digraph, x: usize, y: usize) -> Result<usize> {
    check_pair(g, x, y)?;
    Ok(solve(g, x, y, INF).1)
}

/// The source side of a minimum vertex cut between `x` and `y`.
pub fn min_k_part(g: &Digraph, x: usize, y: usize) -> Result<KPart> {
    check_pair(g, x, y)?;
    let (net, value) = solve(g, x, y, INF);
    let side = net.reachable(2 * x + 1);
    let mut set = g.empty_set();
    set.insert(x);
    for v in 0..g.vertex_count() {
        if side[2 * v + 1] {
            set.insert(v);
        }
    }
    let boundary = g.boundary(&set, Sign::Forward);
    let part = KPart {
        boundary_size: boundary.len(),
        boundary,
        set,
        x,
        y,
    };
    assert_eq!(part.boundary_size, value, "cut side boundary must equal the flow value");
    assert!(!g.image(&part.set, Sign::Forward).contains(y));
    assert!(part.far_side_duality_holds(g), "far-side duality failed on a minimum part");
    Ok(part)
}

/// Exactly `k` openly disjoint paths from `x` to `y`.
pub fn disjoint_paths(g: &Digraph, x: usize, y: usize, k: usize) -> Result<PathFamily> {
    check_pair(g, x, y)?;
    let (mut net, value) = solve(g, x, y, (k as u32).min(INF));
    if value < k {
        let (full, _) = solve(g, x, y, INF);
        let cut = cut_vertices(g, &full.reachable(2 * x + 1));
        return Err(Error::InsufficientConnectivity {
            requested: k,
            available: value,
            cut,
        });
    }
    let sink = 2 * y;
    let mut paths = Vec::with_capacity(k);
    for _ in 0..k {
        let p = peel_path(&mut net, x, sink).expect("a unit of flow per path");
        paths.push(p);
    }
    Ok(PathFamily {
        source: x,
        target: y,
        paths,
    })
}

/// Paths from `x` to every vertex of `targets`, pairwise sharing only `x`.
pub fn fan(g: &Digraph, x: usize, targets: &ElementSet) -> Result<Vec<Vec<usize>>> {
    g.require_reflexive()?;
    let n = g.vertex_count();
    if x >= n {
        return Err(Error::VertexOutOfRange { vertex: x, vertices: n });
    }
    if targets.contains(x) {
        return Err(Error::Precondition(format!("fan source {x} lies in the target set")));
    }
    let mut net = split_network(g, 2);
    // Two extra nodes keep the sink even, so it reads as an in-node.
    let sink = 2 * n;
    for t in targets {
        net.add_edge(2 * t + 1, sink, 1);
    }
    let value = net.max_flow(2 * x + 1, sink, targets.len() as u32) as usize;
    if value < targets.len() {
        let cut = cut_vertices(g, &net.reachable(2 * x + 1));
        return Err(Error::InsufficientConnectivity {
            requested: targets.len(),
            available: value,
            cut,
        });
    }
    let mut paths = Vec::with_capacity(value);
    for _ in 0..value {
        let mut p = peel_path(&mut net, x, sink).expect("a unit of flow per path");
        // The sink is not a vertex of the graph.
        p.pop();
        paths.push(p);
    }
    paths.sort();
    Ok(paths)
}

/// `κ₁` as the minimum local connectivity over non-adjacent ordered pairs;
/// for graphs with a transitive action only pairs starting at vertex 0.
pub fn kappa1_flow(g: &Digraph) -> Result<usize> {
    g.require_reflexive()?;
    let n = g.vertex_count();
    let sources: Vec<usize> = if g.transitive_action().is_some() {
        vec![0]
    } else {
        (0..n).collect()
    };
    let mut best: Option<usize> = None;
    for &x in &sources {
        for y in 0..n {
            if g.has_arc(x, y) {
                continue;
            }
            let bound = best.map_or(INF, |b| b as u32);
            let (_, value) = solve(g, x, y, bound);
            best = Some(best.map_or(value, |b| b.min(value)));
            if best == Some(0) {
                return Ok(0);
            }
        }
    }
    // No non-adjacent pair: the graph is complete and not separable.
    Ok(best.unwrap_or(n.saturating_sub(1)))
}

/// Maximum matching from `X` into `V ∖ X` along arcs, by augmenting paths.
/// Tails are tried in increasing order, heads in increasing order.
fn max_matching(g: &Digraph, x: &ElementSet) -> Vec<(usize, usize)> {
    let n = g.vertex_count();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    fn augment(
        g: &Digraph,
        x: &ElementSet,
        a: usize,
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for b in g.successors(a) {
            if x.contains(b) || seen[b] {
                continue;
            }
            seen[b] = true;
            if owner[b].is_none_or(|other| augment(g, x, other, seen, owner)) {
                owner[b] = Some(a);
                return true;
            }
        }
        false
    }
    for a in x {
        let mut seen = vec![false; n];
        augment(g, x, a, &mut seen, &mut owner);
    }
    let mut pairs: Vec<(usize, usize)> = owner
        .iter()
        .enumerate()
        .filter_map(|(b, o)| o.map(|a| (a, b)))
        .collect();
    pairs.sort();
    pairs
}

/// The same search on adjacency masks, for graphs with at most 64 vertices.
fn max_matching_masks(rows: &[u64], x: u64) -> Vec<(usize, usize)> {
    const FREE: usize = usize::MAX;
    fn augment(rows: &[u64], x: u64, a: usize, seen: &mut u64, owner: &mut [usize]) -> bool {
        let mut candidates = rows[a] & !x;
        while candidates != 0 {
            let b = candidates.trailing_zeros() as usize;
            candidates &= candidates - 1;
            if *seen >> b & 1 == 1 {
                continue;
            }
            *seen |= 1 << b;
            if owner[b] == FREE || augment(rows, x, owner[b], seen, owner) {
                owner[b] = a;
                return true;
            }
        }
        false
    }
    let mut owner = vec![FREE; rows.len()];
    let mut tails = x;
    while tails != 0 {
        let a = tails.trailing_zeros() as usize;
        tails &= tails - 1;
        let mut seen = 0u64;
        augment(rows, x, a, &mut seen, &mut owner);
    }
    let mut pairs: Vec<(usize, usize)> = owner
        .iter()
        .enumerate()
        .filter(|&(_, &a)| a != FREE)
        .map(|(b, &a)| (a, b))
        .collect();
    pairs.sort();
    pairs
}

/// Caches `κ₁` so that many sets can be matched against one graph.
pub struct StrongIsoMatcher<'a> {
    graph: &'a Digraph,
    kappa1: usize,
    rows: Option<Vec<u64>>,
}

impl<'a> StrongIsoMatcher<'a> {
    pub fn new(graph: &'a Digraph) -> Result<Self> {
        let kappa1 = iso::kappa(graph, 1, Sign::Forward)?;
        Ok(Self::with_kappa1(graph, kappa1))
    }

    pub fn with_kappa1(graph: &'a Digraph, kappa1: usize) -> Self {
        let rows = (graph.vertex_count() <= 64).then(|| graph.out_masks());
        Self { graph, kappa1, rows }
    }

    pub fn kappa1(&self) -> usize {
        self.kappa1
    }

    /// The largest `k` the strong isoperimetric property promises for `X`.
    pub fn promised(&self, x: &ElementSet) -> usize {
        let n = self.graph.vertex_count();
        self.kappa1.min(x.len()).min(n - x.len())
    }

    pub fn matching(&self, x: &ElementSet, k: usize) -> Result<Matching> {
        if x.universe() != self.graph.vertex_count() {
            return Err(Error::UniverseMismatch {
                left: self.graph.vertex_count(),
                right: x.universe(),
            });
        }
        if k > self.kappa1 {
            return Err(Error::Precondition(format!("k = {k} exceeds kappa_1 = {}", self.kappa1)));
        }
        let outside = self.graph.vertex_count() - x.len();
        if x.len().min(outside) < k {
            return Err(Error::Precondition(format!(
                "set of size {} leaves {outside} outside; both must be at least {k}",
                x.len()
            )));
        }
        let mut pairs = match &self.rows {
            Some(rows) => max_matching_masks(rows, x.to_mask()),
            None => max_matching(self.graph, x),
        };
        if pairs.len() < k {
            return Err(Error::Precondition(format!(
                "only {} disjoint arcs leave {x}; expected {k}",
                pairs.len()
            )));
        }
        pairs.truncate(k);
        Ok(Matching { pairs })
    }
}

/// A size-`k` matching from `X` to its complement along arcs of `g`.
pub fn strong_iso_matching(g: &Digraph, x: &ElementSet, k: usize) -> Result<Matching> {
    StrongIsoMatcher::new(g)?.matching(x, k)
}

/// Witness for the quotient form of the strong isoperimetric property.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientWitness {
    /// Parts of `X` on the cosets of `H`, numbered from 0.
    pub x_parts: Vec<ElementSet>,
    /// Parts of `S`; part 0 is `S ∩ H`.
    pub s_parts: Vec<ElementSet>,
    pub quotient_kappa1: usize,
    /// `n_i`: indices into `x_parts`.
    pub indices: Vec<usize>,
    /// `y_i ∈ S ∖ H`.
    pub elements: Vec<usize>,
    /// `|φ(X ∪ X_{n_1}y_1 ∪ ⋯)|`, recounted in `G`.
    pub image_size: usize,
}

/// In an abelian group with a subgroup `H` that is a 2-fragment of `S`, and
/// `X` meeting `t+1` cosets while `S` meets `u+1`, picks distinct parts
/// `X_{n_i}` and `y_i ∈ S ∖ H` whose translates reach `t+1+u` cosets.
pub fn abelian_strong_iso(
    g: &FiniteGroup,
    s: &ElementSet,
    h: &ElementSet,
    x: &ElementSet,
) -> Result<QuotientWitness> {
    if !g.is_abelian() {
        return Err(Error::Precondition("group is not abelian".into()));
    }
    if x.is_empty() {
        return Err(Error::EmptySet("quotient matching"));
    }
    let graph = cayley_graph(g, s)?;
    let xd = g.coset_decomposition(x, h, Side::Left)?;
    if !s.contains(0) {
        return Err(Error::MissingIdentity);
    }
    // Put the part through the identity first.
    let mut sd = g.coset_decomposition(s, h, Side::Left)?.parts;
    sd.sort_by_key(|p| !p.contains(0));
    let profile = iso::atom_profile(&graph, 2, Sign::Forward)?;
    let far = graph.co_complement(h, Sign::Forward);
    let is_fragment = profile.separable
        && h.len() >= 2
        && far.len() >= 2
        && graph.boundary(h, Sign::Forward).len() == profile.kappa;
    if !is_fragment {
        return Err(Error::Precondition(format!("{h} is not a 2-fragment of the connection set")));
    }
    let t1 = xd.parts.len();
    let u = sd.len() - 1;
    let n = g.order();
    if n < (t1 + u) * h.len() {
        return Err(Error::Precondition(format!(
            "|G| - (t+1)|H| = {} is below u|H| = {}",
            n as i64 - (t1 * h.len()) as i64,
            u * h.len()
        )));
    }
    if t1 < u {
        return Err(Error::Precondition(format!(
            "X meets {t1} cosets but S meets {u} cosets besides H; at most {} new cosets are reachable",
            t1
        )));
    }
    let (quotient, phi) = g.quotient(h)?;
    let mut qs = quotient.empty_set();
    for e in s {
        qs.insert(phi[e]);
    }
    let qgraph = cayley_graph(&quotient, &qs)?;
    let quotient_kappa1 = iso::kappa(&qgraph, 1, Sign::Forward)?;
    if quotient_kappa1 < u {
        return Err(Error::Precondition(format!(
            "quotient connectivity {quotient_kappa1} is below u = {u}"
        )));
    }
    let mut qx = quotient.empty_set();
    let part_of_coset: Vec<(usize, usize)> = xd
        .parts
        .iter()
        .enumerate()
        .map(|(i, p)| (phi[p.first().expect("nonempty part")], i))
        .collect();
    for &(c, _) in &part_of_coset {
        qx.insert(c);
    }
    let matching = StrongIsoMatcher::with_kappa1(&qgraph, quotient_kappa1).matching(&qx, u)?;
    let mut indices = Vec::with_capacity(u);
    let mut elements = Vec::with_capacity(u);
    let mut reached = x.clone();
    for &(from, to) in &matching.pairs {
        let idx = part_of_coset
            .iter()
            .find(|&&(c, _)| c == from)
            .map(|&(_, i)| i)
            .expect("tail lies in phi(X)");
        let from_rep = xd.parts[idx].first().expect("nonempty");
        let y = s
            .iter()
            .find(|&e| !h.contains(e) && phi[g.mul(from_rep, e)] == to)
            .expect("arc of the quotient graph comes from S");
        indices.push(idx);
        elements.push(y);
        reached.union_with(&g.right_translate(&xd.parts[idx], y));
    }
    let mut cosets = quotient.empty_set();
    for e in &reached {
        cosets.insert(phi[e]);
    }
    let image_size = cosets.len();
    if image_size != t1 + u {
        return Err(Error::Precondition(format!(
            "recount gives {image_size} cosets, expected {}",
            t1 + u
        )));
    }
    Ok(QuotientWitness {
        x_parts: xd.parts,
        s_parts: sd,
        quotient_kappa1,
        indices,
        elements,
        image_size,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cay(n: usize, s: &[usize]) -> Digraph {
        let g = FiniteGroup::cyclic(n).unwrap();
        cayley_graph(&g, &g.set(s).unwrap()).unwrap()
    }

    fn set(n: usize, xs: &[usize]) -> ElementSet {
        ElementSet::from_indices(n, xs).unwrap()
    }

    fn path3() -> Digraph {
        Digraph::new(3, [(0, 1), (1, 2)]).unwrap().reflexive_closure()
    }

    /// Minimum `|∂A|` over `x ∈ A`, `y ∉ Γ(A)`, by scanning every subset.
    fn brute_connectivity(g: &Digraph, x: usize, y: usize) -> usize {
        let n = g.vertex_count();
        (0u64..1 << n)
            .map(|m| ElementSet::from_mask(n, m))
            .filter(|a| a.contains(x) && !g.image(a, Sign::Forward).contains(y))
            .map(|a| g.boundary(&a, Sign::Forward).len())
            .min()
            .unwrap()
    }

    #[test]
    fn connectivity_examples() {
        assert_eq!(local_connectivity(&cay(5, &[0, 1, 2]), 0, 3).unwrap(), 2);
        assert_eq!(local_connectivity(&path3(), 0, 2).unwrap(), 1);
        let split = Digraph::new(2, []).unwrap().reflexive_closure();
        assert_eq!(local_connectivity(&split, 0, 1).unwrap(), 0);
        assert!(matches!(
            local_connectivity(&cay(5, &[0, 1, 2]), 0, 1),
            Err(Error::AdjacentPair { .. })
        ));
    }

    #[test]
    fn path_examples() {
        let g = cay(5, &[0, 1, 2]);
        let fam = disjoint_paths(&g, 0, 3, 2).unwrap();
        assert_eq!(fam.paths.len(), 2);
        fam.verify(&g).unwrap();
        assert!(disjoint_paths(&g, 0, 3, 0).unwrap().paths.is_empty());
        match disjoint_paths(&g, 0, 3, 3) {
            Err(Error::InsufficientConnectivity { available, cut, .. }) => {
                assert_eq!(available, 2);
                assert_eq!(cut, set(5, &[1, 2]));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn k_part_examples() {
        let part = min_k_part(&cay(5, &[0, 1, 2]), 0, 3).unwrap();
        assert_eq!(part.set, set(5, &[0]));
        assert_eq!(part.boundary, set(5, &[1, 2]));
        let part = min_k_part(&path3(), 0, 2).unwrap();
        assert_eq!(part.set, set(3, &[0]));
        assert_eq!(part.boundary, set(3, &[1]));
    }

    #[test]
    fn verifier_rejects_bad_families() {
        let g = cay(5, &[0, 1, 2]);
        let shared = PathFamily {
            source: 0,
            target: 3,
            paths: vec![vec![0, 1, 3], vec![0, 1, 3]],
        };
        assert!(shared.verify(&g).is_err());
        let broken = PathFamily {
            source: 0,
            target: 3,
            paths: vec![vec![0, 3]],
        };
        assert!(broken.verify(&g).is_err());
    }

    #[test]
    fn fan_reaches_targets() {
        let g = cay(7, &[0, 1, 2, 4]);
        let targets = set(7, &[3, 5, 6]);
        let paths = fan(&g, 0, &targets).unwrap();
        assert_eq!(paths.len(), 3);
        let mut ends: Vec<usize> = paths.iter().map(|p| *p.last().unwrap()).collect();
        ends.sort();
        assert_eq!(ends, vec![3, 5, 6]);
        let mut interior = g.empty_set();
        for p in &paths {
            assert_eq!(p[0], 0);
            for w in p.windows(2) {
                assert!(g.has_arc(w[0], w[1]));
            }
            for &v in &p[1..] {
                assert!(interior.insert(v));
            }
        }
    }

    #[test]
    fn flow_kappa_matches_exhaustive() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let g = Digraph::random_reflexive(7, 0.4, &mut rng);
            assert_eq!(kappa1_flow(&g).unwrap(), iso::kappa(&g, 1, Sign::Forward).unwrap());
        }
        for s in [vec![0, 1, 3], vec![0, 1, 2, 5], vec![0, 3, 6]] {
            let g = cay(9, &s);
            assert_eq!(kappa1_flow(&g).unwrap(), iso::kappa(&g, 1, Sign::Forward).unwrap());
        }
    }

    #[test]
    fn random_pairs_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let g = Digraph::random_reflexive(6, 0.35, &mut rng);
            for x in 0..6 {
                for y in 0..6 {
                    if g.has_arc(x, y) {
                        continue;
                    }
                    let k = local_connectivity(&g, x, y).unwrap();
                    assert_eq!(k, brute_connectivity(&g, x, y));
                    let fam = disjoint_paths(&g, x, y, k).unwrap();
                    fam.verify(&g).unwrap();
                    assert_eq!(min_k_part(&g, x, y).unwrap().boundary_size, k);
                }
            }
        }
    }

    #[test]
    fn matching_examples() {
        let g = cay(7, &[0, 1, 3]);
        let x = set(7, &[0, 1]);
        let m = strong_iso_matching(&g, &x, 2).unwrap();
        assert_eq!(m.pairs.len(), 2);
        m.verify(&g, &x).unwrap();
        let single = strong_iso_matching(&g, &set(7, &[4]), 1).unwrap();
        assert_eq!(single.pairs.len(), 1);
        assert!(strong_iso_matching(&g, &x, 3).is_err());
        // A set whose boundary has exactly kappa_1 vertices: the matching
        // covers the whole boundary.
        let x = set(7, &[0, 1, 2, 3, 4]);
        assert_eq!(g.boundary(&x, Sign::Forward).len(), 2);
        let m = strong_iso_matching(&g, &x, 2).unwrap();
        let heads: Vec<usize> = m.pairs.iter().map(|p| p.1).collect();
        assert_eq!(heads, g.boundary(&x, Sign::Forward).to_vec());
    }

    #[test]
    fn quotient_matching_in_z12() {
        let g = FiniteGroup::cyclic(12).unwrap();
        let h = g.set(&[0, 6]).unwrap();
        // S = H ∪ (H+1): H is a 2-fragment with boundary {1,7}.
        let s = g.set(&[0, 1, 6, 7]).unwrap();
        let x = g.set(&[0, 2, 8]).unwrap();
        let w = abelian_strong_iso(&g, &s, &h, &x).unwrap();
        assert_eq!(w.x_parts.len(), 2);
        assert_eq!(w.image_size, 3);
        assert_eq!(w.indices.len(), 1);
        // Independent recount.
        let mut reached = x.clone();
        for (&i, &y) in w.indices.iter().zip(&w.elements) {
            reached.union_with(&g.right_translate(&w.x_parts[i], y));
        }
        let cosets: std::collections::BTreeSet<usize> = reached.iter().map(|e| e % 6).collect();
        assert_eq!(cosets.len(), 3);
    }

    #[test]
    fn quotient_matching_trivial_and_refused() {
        let g = FiniteGroup::cyclic(12).unwrap();
        let h = g.set(&[0, 6]).unwrap();
        let s = g.set(&[0, 1, 6, 7]).unwrap();
        // X inside one coset.
        let w = abelian_strong_iso(&g, &s, &h, &g.set(&[6]).unwrap()).unwrap();
        assert_eq!(w.image_size, 2);
        // S inside H: nothing to match.
        let w = abelian_strong_iso(&g, &h, &h, &g.set(&[0, 2, 8]).unwrap()).unwrap();
        assert!(w.indices.is_empty());
        assert_eq!(w.image_size, 2);
        // Too many cosets used: |G| - (t+1)|H| < u|H|.
        let x = g.set(&[0, 1, 2, 3, 4, 5]).unwrap();
        assert!(matches!(abelian_strong_iso(&g, &s, &h, &x), Err(Error::Precondition(_))));
    }

    #[test]
    fn mask_matching_agrees_with_set_matching() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let g = Digraph::random_reflexive(9, 0.3, &mut rng);
            let rows = g.out_masks();
            for m in [0b1u64, 0b101, 0b1_1100_0011, 0b111_1111] {
                let x = ElementSet::from_mask(9, m);
                assert_eq!(max_matching_masks(&rows, m), max_matching(&g, &x));
            }
        }
    }
}
