//! Graph-level checkers: forward/reverse duality, the fragment calculus,
//! max-flow certificates against brute force, and matchings across sets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::masks::{bits, full_mask, pop};
use super::{generating_jobs, groups_in, group_seed, sweep, CheckReport, Instance, TheoremId, VerifyConfig};
use crate::digraph::{cayley_graph, Digraph, Sign};
use crate::error::{Error, Result};
use crate::groups::{identity_subsets, Catalog, CatalogEntry};
use crate::iso::calculus::{
    check_submodularity, dual_fragment_order_from, duality_from, fragment_intersection_from,
    fragment_pair_bounds_from, translation_closure_from, CalculusReport,
};
use crate::iso::{self, profile};
use crate::menger::{self, StrongIsoMatcher};
use crate::set::ElementSet;

/// Vertex counts of the random digraphs, inclusive.
const RANDOM_MIN_VERTICES: usize = 2;

/// Seeded random reflexive digraphs with `2..=max_vertices` vertices and
/// arc densities spread over `[0.1, 0.9)`.
pub(crate) fn random_digraphs(seed: u64, count: usize, max_vertices: usize) -> Vec<Digraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(RANDOM_MIN_VERTICES..=max_vertices);
            let density = rng.gen_range(0.1..0.9);
            Digraph::random_reflexive(n, density, &mut rng)
        })
        .collect()
}

/// Records a calculus report as one clause: skipped when nothing was
/// checked, failed with the first violation otherwise.
fn record(inst: &mut Instance, clause: &'static str, s: Option<&ElementSet>, rep: &CalculusReport) {
    if rep.checks == 0 {
        inst.skip(clause);
        return;
    }
    inst.check(clause, rep.passed(), || {
        let v = &rep.violations[0];
        let mut sets: Vec<(&'static str, ElementSet)> = Vec::new();
        if let Some(s) = s {
            sets.push(("S", s.clone()));
        }
        for (name, set) in ["X", "Y"].into_iter().zip(&v.sets) {
            sets.push((name, set.clone()));
        }
        (sets, format!("{} violations; first: {} ({})", rep.violations.len(), v.clause, v.detail))
    });
}

fn graph_label(g: &Digraph) -> String {
    format!("random digraph on {} vertices with {} arcs", g.vertex_count(), g.arc_count())
}

const DUALITY_CLAUSES: [&str; 2] = ["duality k=1", "duality k=2"];

/// `κ_k = κ_{−k}` and the far-side bijection between forward and reverse
/// fragments, on every Cayley graph `Cay(G, S)` with `S ∋ 1` (generating or
/// not) for `k ∈ {1, 2}`, and on `cfg.duality_graphs` random digraphs on
/// at most seven vertices for `k = 1`.
pub(crate) fn check_duality_sweep(catalog: &Catalog, cfg: &VerifyConfig) -> Result<CheckReport> {
    let mut jobs: Vec<(&CatalogEntry, ElementSet)> = Vec::new();
    for entry in groups_in(catalog, cfg) {
        for s in identity_subsets(&entry.group)? {
            jobs.push((entry, s));
        }
    }
    let mut report = sweep(TheoremId::Duality, &jobs, |(entry, s)| {
        let graph = cayley_graph(&entry.group, s)?;
        let mut inst = Instance::new(&entry.name);
        for (k, clause) in (1..=2).zip(DUALITY_CLAUSES) {
            if 2 * k > graph.vertex_count() + 1 {
                inst.skip(clause);
                continue;
            }
            let fwd = profile(&graph, k, Sign::Forward)?;
            let rev = profile(&graph, k, Sign::Reverse)?;
            record(&mut inst, clause, Some(s), &duality_from(&graph, &fwd, &rev));
        }
        Ok(inst)
    })?;
    let graphs = random_digraphs(group_seed(cfg, TheoremId::Duality, usize::MAX), cfg.duality_graphs, 7);
    report.merge(sweep(TheoremId::Duality, &graphs, |g| {
        let mut inst = Instance::new(&graph_label(g));
        let fwd = profile(g, 1, Sign::Forward)?;
        let rev = profile(g, 1, Sign::Reverse)?;
        record(&mut inst, DUALITY_CLAUSES[0], None, &duality_from(g, &fwd, &rev));
        Ok(inst)
    })?);
    Ok(report)
}

/// Submodularity pairs: exhaustive only for tiny graphs.
const SUBMODULAR_EXHAUSTIVE_PAIRS: u64 = 1 << 12;
const SUBMODULAR_SAMPLES: u64 = 200;

/// The isoperimetric inequality over every `X` with `|X| ≥ k`, with images
/// built incrementally on masks. Returns a failing set or `None`, and whether
/// some set attains the bound (required only of separable graphs).
fn inequality_scan(rows: &[u64], k: usize, kappa: usize) -> (Option<u64>, bool) {
    let n = rows.len();
    let mut img = vec![0u64; 1 << n];
    let mut tight = false;
    for m in 1u64..1 << n {
        let low = m.trailing_zeros() as usize;
        img[m as usize] = img[(m & (m - 1)) as usize] | rows[low];
        if pop(m) < k {
            continue;
        }
        let size = pop(img[m as usize]);
        let bound = (n + 1 - k).min(pop(m) + kappa);
        if size < bound {
            return (Some(m), tight);
        }
        tight |= size == bound;
    }
    (None, tight)
}

/// The fragment calculus on every Cayley graph of a generating `S ∋ 1`:
/// intersection and union of fragments, atom intersections, inclusion
/// reversal on far sides, the pair bounds, the isoperimetric inequality and
/// its attainment, translation closure and submodularity.
pub(crate) fn check_fragment_laws(catalog: &Catalog, cfg: &VerifyConfig) -> Result<CheckReport> {
    let jobs = generating_jobs(catalog, cfg, |_| true)?;
    sweep(TheoremId::Fragments, &jobs, |(entry, s)| {
        let graph = cayley_graph(&entry.group, s)?;
        let n = graph.vertex_count();
        let rows = graph.out_masks();
        let mut inst = Instance::new(&entry.name);
        let mut kappa_prev = 0;
        for k in 1..=2 {
            let names: [&'static str; 6] = if k == 1 {
                [
                    "intersection laws k=1",
                    "far-side order k=1",
                    "pair bounds k=1",
                    "isoperimetric inequality k=1",
                    "translation closure k=1",
                    "reverse translation closure k=1",
                ]
            } else {
                [
                    "intersection laws k=2",
                    "far-side order k=2",
                    "pair bounds k=2",
                    "isoperimetric inequality k=2",
                    "translation closure k=2",
                    "reverse translation closure k=2",
                ]
            };
            if 2 * k > n + 1 {
                names.iter().for_each(|c| inst.skip(c));
                continue;
            }
            let fwd = profile(&graph, k, Sign::Forward)?;
            let rev = profile(&graph, k, Sign::Reverse)?;
            record(&mut inst, names[0], Some(s), &fragment_intersection_from(&graph, &fwd, &rev));
            record(&mut inst, names[1], Some(s), &dual_fragment_order_from(&graph, &fwd));
            record(&mut inst, names[2], Some(s), &fragment_pair_bounds_from(&graph, &fwd, kappa_prev));
            let (bad, tight) = inequality_scan(&rows, k, fwd.kappa);
            inst.check(names[3], bad.is_none() && (tight || !fwd.separable), || {
                let sets = match bad {
                    Some(m) => vec![("S", s.clone()), ("X", ElementSet::from_mask(n, m))],
                    None => vec![("S", s.clone())],
                };
                (sets, format!("kappa {}, attained {tight}", fwd.kappa))
            });
            record(&mut inst, names[4], Some(s), &translation_closure_from(&graph, &fwd)?);
            record(&mut inst, names[5], Some(s), &translation_closure_from(&graph, &rev)?);
            kappa_prev = fwd.kappa;
        }
        let seed = s.to_mask() ^ (n as u64) << 40;
        let sub = check_submodularity(&graph, SUBMODULAR_EXHAUSTIVE_PAIRS, SUBMODULAR_SAMPLES, seed)?;
        record(&mut inst, "submodularity", Some(s), &sub);
        Ok(inst)
    })
}

/// Minimum `|∂(A)|` over `x ∈ A`, `y ∉ Γ(A)` by scanning every subset.
fn brute_connectivity(rows: &[u64], x: usize, y: usize) -> usize {
    let n = rows.len();
    let mut img = vec![0u64; 1 << n];
    let mut best = usize::MAX;
    for m in 1u64..1 << n {
        let low = m.trailing_zeros() as usize;
        img[m as usize] = img[(m & (m - 1)) as usize] | rows[low];
        let im = img[m as usize];
        if m >> x & 1 == 1 && im >> y & 1 == 0 {
            best = best.min(pop(im & !m));
        }
    }
    best
}

const MENGER_CLAUSES: [&str; 6] = [
    "flow equals brute-force connectivity",
    "paths certify connectivity",
    "one more path is refused with a cut",
    "minimum part is a cut with far-side duality",
    "fan to the non-neighbours",
    "flow kappa1 equals exhaustive kappa1",
];

/// Local connectivity against brute force, path families, refusals with
/// minimum cuts, minimum parts and fans on every non-adjacent pair of seeded
/// random digraphs on at most eight vertices; flow `κ₁` against exhaustive
/// `κ₁` on those digraphs and on every Cayley graph `Cay(G, S)`, `S ∋ 1`.
pub(crate) fn check_menger(catalog: &Catalog, cfg: &VerifyConfig) -> Result<CheckReport> {
    let graphs = random_digraphs(group_seed(cfg, TheoremId::Menger, usize::MAX), cfg.random_graphs, 8);
    let mut report = sweep(TheoremId::Menger, &graphs, |g| {
        let n = g.vertex_count();
        let rows = g.out_masks();
        let mut inst = Instance::new(&graph_label(g));
        let pair_sets = |x: usize, y: usize| vec![("pair", ElementSet::from_indices(n, &[x, y]).expect("in range"))];
        for x in 0..n {
            for y in 0..n {
                if rows[x] >> y & 1 == 1 {
                    continue;
                }
                let flow = menger::local_connectivity(g, x, y)?;
                let brute = brute_connectivity(&rows, x, y);
                inst.check(MENGER_CLAUSES[0], flow == brute, || {
                    (pair_sets(x, y), format!("flow {flow}, brute force {brute}"))
                });
                let family = menger::disjoint_paths(g, x, y, flow)?;
                let checked = family.verify(g);
                inst.check(MENGER_CLAUSES[1], family.paths.len() == flow && checked.is_ok(), || {
                    (pair_sets(x, y), format!("{} paths, {:?}", family.paths.len(), checked))
                });
                let refused = match menger::disjoint_paths(g, x, y, flow + 1) {
                    Err(Error::InsufficientConnectivity { available, cut, .. }) => {
                        available == flow && cut.len() == flow && !cut.contains(x) && !cut.contains(y)
                    }
                    _ => false,
                };
                inst.check(MENGER_CLAUSES[2], refused, || (pair_sets(x, y), "no cut witness".into()));
                let part = menger::min_k_part(g, x, y)?;
                let ok = part.set.contains(x)
                    && !g.image(&part.set, Sign::Forward).contains(y)
                    && part.boundary_size == flow
                    && part.far_side_duality_holds(g);
                inst.check(MENGER_CLAUSES[3], ok, || {
                    (vec![("A", part.set.clone())], format!("boundary {}", part.boundary_size))
                });
            }
            // A fan from x to the vertices it misses, when connectivity allows.
            let targets = ElementSet::from_mask(n, full_mask(n) & !rows[x]);
            match menger::fan(g, x, &targets) {
                Ok(paths) => {
                    let ends: Vec<usize> = paths.iter().map(|p| *p.last().expect("nonempty")).collect();
                    let mut interior = vec![false; n];
                    let mut disjoint = true;
                    for p in &paths {
                        for w in p.windows(2) {
                            disjoint &= g.has_arc(w[0], w[1]);
                        }
                        for &v in &p[1..] {
                            disjoint &= v != x && !std::mem::replace(&mut interior[v], true);
                        }
                    }
                    let reached = ElementSet::from_indices(n, &ends).expect("in range");
                    inst.check(MENGER_CLAUSES[4], disjoint && reached == targets && ends.len() == targets.len(), || {
                        (vec![("T", targets.clone())], format!("paths {paths:?}"))
                    });
                }
                Err(Error::InsufficientConnectivity { available, .. }) => {
                    inst.check(MENGER_CLAUSES[4], available < targets.len(), || {
                        (vec![("T", targets.clone())], format!("refused with {available}"))
                    });
                }
                Err(e) => return Err(e),
            }
        }
        let flow = menger::kappa1_flow(g)?;
        let exhaustive = iso::kappa(g, 1, Sign::Forward)?;
        inst.check(MENGER_CLAUSES[5], flow == exhaustive, || {
            (Vec::new(), format!("flow {flow}, exhaustive {exhaustive}"))
        });
        Ok(inst)
    })?;
    let mut jobs: Vec<(&CatalogEntry, ElementSet)> = Vec::new();
    for entry in groups_in(catalog, cfg) {
        for s in identity_subsets(&entry.group)? {
            jobs.push((entry, s));
        }
    }
    report.merge(sweep(TheoremId::Menger, &jobs, |(entry, s)| {
        let graph = cayley_graph(&entry.group, s)?;
        let flow = menger::kappa1_flow(&graph)?;
        let exhaustive = iso::kappa(&graph, 1, Sign::Forward)?;
        let mut inst = Instance::new(&entry.name);
        inst.check(MENGER_CLAUSES[5], flow == exhaustive, || {
            (vec![("S", s.clone())], format!("flow {flow}, exhaustive {exhaustive}"))
        });
        Ok(inst)
    })?);
    Ok(report)
}

/// Matching sweeps enumerate every `X` up to this order and sample above.
pub const MATCHING_EXHAUSTIVE_ORDER: usize = 12;

/// For every generating `S ∋ 1` and every `X`, a matching of size
/// `min(κ₁, |X|, |V ∖ X|)` from `X` to its complement, checked pair by pair
/// (its prefixes cover every smaller `k`). In abelian groups the quotient
/// form is exercised for every subgroup that is a 2-fragment.
pub(crate) fn check_strong_iso(catalog: &Catalog, cfg: &VerifyConfig) -> Result<CheckReport> {
    let jobs = generating_jobs(catalog, cfg, |_| true)?;
    let mut report = sweep(TheoremId::StrongIso, &jobs, |(entry, s)| {
        let graph = cayley_graph(&entry.group, s)?;
        let n = graph.vertex_count();
        let rows = graph.out_masks();
        let matcher = StrongIsoMatcher::new(&graph)?;
        let mut inst = Instance::new(&entry.name);
        let sets: Vec<u64> = if n <= MATCHING_EXHAUSTIVE_ORDER {
            (1..full_mask(n)).collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(group_seed(cfg, TheoremId::StrongIso, s.to_mask() as usize));
            let per_set = (cfg.samples / 64).max(1);
            (0..per_set).map(|_| rng.gen_range(1..full_mask(n))).collect()
        };
        let mut failure: Option<(u64, String)> = None;
        let mut checked = 0u64;
        for m in sets {
            let x = ElementSet::from_mask(n, m);
            let k = matcher.promised(&x);
            if k == 0 {
                continue;
            }
            checked += 1;
            let verdict = match matcher.matching(&x, k) {
                Ok(matching) => {
                    let tails = matching.pairs.iter().fold(0u64, |acc, &(a, _)| acc | 1 << a);
                    let heads = matching.pairs.iter().fold(0u64, |acc, &(_, b)| acc | 1 << b);
                    let valid = matching.pairs.len() == k
                        && pop(tails) == k
                        && pop(heads) == k
                        && tails & !m == 0
                        && heads & m == 0
                        && matching.pairs.iter().all(|&(a, b)| rows[a] >> b & 1 == 1);
                    (!valid).then(|| format!("invalid matching {:?}", matching.pairs))
                }
                Err(e) => Some(e.to_string()),
            };
            if let Some(msg) = verdict {
                failure.get_or_insert((m, msg));
            }
        }
        if checked == 0 {
            inst.skip("matching across every set");
        } else {
            inst.check("matching across every set", failure.is_none(), || {
                let (m, msg) = failure.clone().expect("failure recorded");
                (
                    vec![("S", s.clone()), ("X", ElementSet::from_mask(n, m))],
                    format!("kappa1 {}: {msg}", matcher.kappa1()),
                )
            });
        }
        Ok(inst)
    })?;
    report.merge(quotient_matching_report(catalog, cfg)?);
    Ok(report)
}

/// Sets `X` tried per `(S, H)` in the quotient form; all of them when the
/// group is at most this large.
const QUOTIENT_EXHAUSTIVE_ORDER: usize = 8;
const QUOTIENT_SAMPLES: usize = 64;

fn quotient_matching_report(catalog: &Catalog, cfg: &VerifyConfig) -> Result<CheckReport> {
    let jobs = generating_jobs(catalog, cfg, |e| e.group.is_abelian() && e.group.order() >= 4)?;
    let subgroups: Vec<(String, Vec<ElementSet>)> = groups_in(catalog, cfg)
        .into_iter()
        .filter(|e| e.group.is_abelian())
        .map(|e| (e.name.clone(), e.group.all_subgroups()))
        .collect();
    sweep(TheoremId::StrongIso, &jobs, |(entry, s)| {
        let g = &entry.group;
        let n = g.order();
        let graph = cayley_graph(g, s)?;
        let mut inst = Instance::new(&entry.name);
        let two = iso::atom_profile(&graph, 2, Sign::Forward)?;
        let subs = &subgroups.iter().find(|(name, _)| *name == entry.name).expect("swept group").1;
        let fragments: Vec<&ElementSet> = subs
            .iter()
            .filter(|h| h.len() >= 2 && h.len() < n)
            .filter(|h| {
                two.separable
                    && graph.co_complement(h, Sign::Forward).len() >= 2
                    && graph.boundary(h, Sign::Forward).len() == two.kappa
            })
            .collect();
        if fragments.is_empty() {
            inst.skip("quotient matching");
            return Ok(inst);
        }
        for h in fragments {
            let xs: Vec<u64> = if n <= QUOTIENT_EXHAUSTIVE_ORDER {
                (1..=full_mask(n)).collect()
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(s.to_mask() ^ h.to_mask() << 32 ^ cfg.seed);
                (0..QUOTIENT_SAMPLES).map(|_| rng.gen_range(1..=full_mask(n))).collect()
            };
            let parts_of = |m: u64| {
                let mut cosets = 0u64;
                for x in bits(m) {
                    cosets |= 1 << g.left_translate(x, h).first().expect("nonempty");
                }
                pop(cosets)
            };
            let s_parts = parts_of(s.to_mask()) - 1;
            for m in xs {
                let x = ElementSet::from_mask(n, m);
                let t1 = parts_of(m);
                if n < (t1 + s_parts) * h.len() || t1 < s_parts {
                    continue;
                }
                match menger::abelian_strong_iso(g, s, h, &x) {
                    Ok(w) => {
                        let ok = w.image_size == t1 + s_parts
                            && w.indices.len() == s_parts
                            && w.quotient_kappa1 >= s_parts;
                        inst.check("quotient matching", ok, || {
                            (
                                vec![("S", s.clone()), ("H", h.clone()), ("X", x.clone())],
                                format!("image {} cosets, expected {}", w.image_size, t1 + s_parts),
                            )
                        });
                    }
                    Err(e) => inst.check("quotient matching", false, || {
                        (vec![("S", s.clone()), ("H", h.clone()), ("X", x.clone())], e.to_string())
                    }),
                }
            }
        }
        Ok(inst)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(max: usize) -> VerifyConfig {
        VerifyConfig {
            max_order: max,
            random_graphs: 60,
            duality_graphs: 60,
            samples: 300,
            ..VerifyConfig::default()
        }
    }

    #[test]
    fn random_digraphs_are_reproducible() {
        let a = random_digraphs(5, 10, 7);
        let b = random_digraphs(5, 10, 7);
        assert_eq!(a.len(), 10);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.to_file(), y.to_file());
            assert!((2..=7).contains(&x.vertex_count()));
        }
    }

    #[test]
    fn inequality_scan_on_cycle() {
        // Directed 5-cycle with loops: kappa1 = 1, every interval is tight.
        let rows: Vec<u64> = (0..5).map(|v| 1u64 << v | 1 << ((v + 1) % 5)).collect();
        assert_eq!(inequality_scan(&rows, 1, 1), (None, true));
        assert!(inequality_scan(&rows, 1, 2).0.is_some());
    }

    #[test]
    fn brute_connectivity_example() {
        let g = crate::groups::FiniteGroup::cyclic(5).unwrap();
        let graph = cayley_graph(&g, &g.set(&[0, 1, 2]).unwrap()).unwrap();
        assert_eq!(brute_connectivity(&graph.out_masks(), 0, 3), 2);
    }

    #[test]
    fn graph_checkers_pass_on_small_groups() {
        let cat = Catalog::builtin().unwrap();
        for r in [
            check_duality_sweep(&cat, &cfg(6)).unwrap(),
            check_fragment_laws(&cat, &cfg(7)).unwrap(),
            check_menger(&cat, &cfg(6)).unwrap(),
            check_strong_iso(&cat, &cfg(8)).unwrap(),
        ] {
            assert!(r.passed(), "{}: {:?}", r.theorem_id, r.counterexamples);
            assert!(r.instances_tested > 0);
        }
    }
}
