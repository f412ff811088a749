//! Checks of the structural laws fragments obey: duality between a graph
//! and its reverse, submodularity of the boundary, closure of fragments
//! under intersection and union, the order reversal `X ↦ X^⋏`, and the pair
//! bounds relating two fragments.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{profile, FragmentList, IsoProfile};
use crate::digraph::{Digraph, Sign};
use crate::error::Result;
use crate::set::ElementSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub clause: String,
    pub sets: Vec<ElementSet>,
    pub detail: String,
}

/// Number of individual assertions made and every one that failed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CalculusReport {
    pub checks: u64,
    pub violations: Vec<Violation>,
}

impl CalculusReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn assert(&mut self, ok: bool, clause: &str, sets: &[&ElementSet], detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations.push(Violation {
                clause: clause.to_string(),
                sets: sets.iter().map(|s| (*s).clone()).collect(),
                detail: detail(),
            });
        }
    }

    pub fn merge(&mut self, other: CalculusReport) {
        self.checks += other.checks;
        self.violations.extend(other.violations);
    }
}

fn listed(list: &FragmentList) -> Option<&[ElementSet]> {
    match list {
        FragmentList::Listed(v) => Some(v),
        FragmentList::AllKSubsets { .. } => None,
    }
}

/// Forward and reverse profiles agree on `κ_k`, and `X ↦ X^⋏` maps the
/// forward fragments bijectively onto the reverse ones with
/// `∂⁻(X^⋏) = ∂(X)` and `(X^⋏)^⋎ = X`.
pub fn check_duality(g: &Digraph, k: usize) -> Result<CalculusReport> {
    let fwd = profile(g, k, Sign::Forward)?;
    let rev = profile(g, k, Sign::Reverse)?;
    Ok(duality_from(g, &fwd, &rev))
}

pub(crate) fn duality_from(g: &Digraph, fwd: &IsoProfile, rev: &IsoProfile) -> CalculusReport {
    let mut r = CalculusReport::default();
    r.assert(fwd.kappa == rev.kappa, "kappa symmetric", &[], || {
        format!("forward {} reverse {}", fwd.kappa, rev.kappa)
    });
    r.assert(fwd.separable == rev.separable, "separability symmetric", &[], || {
        format!("forward {} reverse {}", fwd.separable, rev.separable)
    });
    if let (Some(fs), Some(_)) = (listed(&fwd.fragments), listed(&rev.fragments)) {
        r.assert(fs.len() as u128 == rev.fragments.len(), "fragment counts equal", &[], || {
            format!("forward {} reverse {}", fs.len(), rev.fragments.len())
        });
        for x in fs {
            let far = g.co_complement(x, Sign::Forward);
            let back = g.co_complement(&far, Sign::Reverse);
            r.assert(
                g.boundary(&far, Sign::Reverse) == g.boundary(x, Sign::Forward),
                "reverse boundary of far side equals boundary",
                &[x],
                || format!("far side {far}"),
            );
            r.assert(back == *x, "far side of far side is the set", &[x], || {
                format!("got {back}")
            });
            r.assert(rev.fragments.contains(&far), "far side is a reverse fragment", &[x], || {
                format!("far side {far}")
            });
        }
    }
    r
}

/// `|∂(X∪Y)| + |∂(X∩Y)| ≤ |∂(X)| + |∂(Y)|`, over all pairs when there are at
/// most `exhaustive_pairs` of them and otherwise over `samples` seeded pairs.
pub fn check_submodularity(
    g: &Digraph,
    exhaustive_pairs: u64,
    samples: u64,
    seed: u64,
) -> Result<CalculusReport> {
    g.require_reflexive()?;
    let n = g.vertex_count();
    let mut r = CalculusReport::default();
    let check = |x: &ElementSet, y: &ElementSet, r: &mut CalculusReport| {
        let b = |s: &ElementSet| g.boundary(s, Sign::Forward).len();
        let lhs = b(&x.union(y)) + b(&x.intersection(y));
        let rhs = b(x) + b(y);
        r.assert(lhs <= rhs, "submodularity", &[x, y], || format!("{lhs} > {rhs}"));
    };
    let subsets = 1u64.checked_shl(n as u32).unwrap_or(0);
    if n < 32 && subsets.saturating_mul(subsets) <= exhaustive_pairs {
        for a in 0..subsets {
            let x = ElementSet::from_mask(n, a);
            for b in a..subsets {
                check(&x, &ElementSet::from_mask(n, b), &mut r);
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let random_set = |rng: &mut ChaCha8Rng| {
            let mut s = ElementSet::empty(n);
            for v in 0..n {
                if rng.gen_bool(0.5) {
                    s.insert(v);
                }
            }
            s
        };
        for _ in 0..samples {
            let x = random_set(&mut rng);
            let y = random_set(&mut rng);
            check(&x, &y, &mut r);
        }
    }
    Ok(r)
}

/// Intersection and union of overlapping fragments, the atom-inclusion law
/// and its consequence for distinct atoms, and the inclusion of atoms in the
/// far sides of reverse fragments.
pub fn check_fragment_intersection(g: &Digraph, k: usize) -> Result<CalculusReport> {
    let fwd = profile(g, k, Sign::Forward)?;
    let rev = profile(g, k, Sign::Reverse)?;
    Ok(fragment_intersection_from(g, &fwd, &rev))
}

pub(crate) fn fragment_intersection_from(g: &Digraph, fwd: &IsoProfile, rev: &IsoProfile) -> CalculusReport {
    let k = fwd.k;
    let mut r = CalculusReport::default();
    let (Some(frags), Some(atoms), Some(rev_frags)) =
        (listed(&fwd.fragments), listed(&fwd.atoms), listed(&rev.fragments))
    else {
        return r;
    };
    let far: Vec<ElementSet> = frags.iter().map(|f| g.co_complement(f, Sign::Forward)).collect();
    for (i, x) in frags.iter().enumerate() {
        for (j, y) in frags.iter().enumerate() {
            if i == j {
                continue;
            }
            let meet = x.intersection(y);
            if meet.len() >= k && x.len() - meet.len() + k <= far[j].len() {
                let join = x.union(y);
                r.assert(fwd.fragments.contains(&meet), "intersection is a fragment", &[x, y], || {
                    format!("intersection {meet}")
                });
                r.assert(fwd.fragments.contains(&join), "union is a fragment", &[x, y], || {
                    format!("union {join}")
                });
            }
        }
    }
    if fwd.alpha <= rev.alpha {
        for a in atoms {
            for f in frags {
                if a.intersection_len(f) >= k {
                    r.assert(a.is_subset(f), "atom inside overlapping fragment", &[a, f], String::new);
                }
            }
            for b in atoms {
                if a < b {
                    let m = a.intersection_len(b);
                    r.assert(m < k, "distinct atoms meet in fewer than k points", &[a, b], || {
                        format!("{m} common points")
                    });
                }
            }
        }
    }
    for x in frags {
        let is_atom = x.len() == fwd.alpha;
        for y in rev_frags {
            if y.len() < x.len() {
                continue;
            }
            let dual = g.co_complement(y, Sign::Reverse);
            let meet = x.intersection(&dual);
            if meet.len() >= k {
                r.assert(
                    fwd.fragments.contains(&meet),
                    "fragment meets far side of reverse fragment in a fragment",
                    &[x, y],
                    || format!("intersection {meet}"),
                );
                if is_atom {
                    r.assert(x.is_subset(&dual), "atom inside far side of reverse fragment", &[x, y], String::new);
                }
            }
        }
    }
    r
}

/// For fragments `X, Y`: `X ⊂ Y` exactly when `Y^⋏ ⊂ X^⋏`.
pub fn check_dual_fragment_order(g: &Digraph, k: usize) -> Result<CalculusReport> {
    Ok(dual_fragment_order_from(g, &profile(g, k, Sign::Forward)?))
}

pub(crate) fn dual_fragment_order_from(g: &Digraph, p: &IsoProfile) -> CalculusReport {
    let mut r = CalculusReport::default();
    let Some(frags) = listed(&p.fragments) else {
        return r;
    };
    let far: Vec<ElementSet> = frags.iter().map(|f| g.co_complement(f, Sign::Forward)).collect();
    for (i, x) in frags.iter().enumerate() {
        for (j, y) in frags.iter().enumerate() {
            let inner = x.is_subset(y);
            let outer = far[j].is_subset(&far[i]);
            r.assert(inner == outer, "inclusion reverses on far sides", &[x, y], || {
                format!("X in Y: {inner}, far(Y) in far(X): {outer}")
            });
        }
    }
    r
}

/// For fragments `A, F` with `|A| ≤ |F^⋏|` and `|A∩F| ≥ k−1`:
/// `|A∩∂F| ≤ |∂A ∩ F^⋏|`, `|Γ(A)∩Γ(F)| ≤ |A∩F| + κ_k` and
/// `|F^⋏ ∖ A^⋏| ≤ |A∖F| + κ_k − κ_{k−1}` (with `κ_0 = 0`).
pub fn check_fragment_pair_bounds(g: &Digraph, k: usize) -> Result<CalculusReport> {
    let p = profile(g, k, Sign::Forward)?;
    let kappa_prev = if k == 1 {
        0
    } else {
        super::kappa(g, k - 1, Sign::Forward)?
    };
    Ok(fragment_pair_bounds_from(g, &p, kappa_prev))
}

pub(crate) fn fragment_pair_bounds_from(g: &Digraph, p: &IsoProfile, kappa_prev: usize) -> CalculusReport {
    let mut r = CalculusReport::default();
    let Some(frags) = listed(&p.fragments) else {
        return r;
    };
    let kappa = p.kappa;
    let img: Vec<ElementSet> = frags.iter().map(|f| g.image(f, Sign::Forward)).collect();
    for (i, a) in frags.iter().enumerate() {
        let bd_a = img[i].difference(a);
        let far_a = img[i].complement();
        for (j, f) in frags.iter().enumerate() {
            let far_f = img[j].complement();
            let common = a.intersection_len(f);
            if a.len() > far_f.len() || common + 1 < p.k {
                continue;
            }
            let bd_f = img[j].difference(f);
            let lhs = a.intersection_len(&bd_f);
            let rhs = bd_a.intersection_len(&far_f);
            r.assert(lhs <= rhs, "boundary crossing bound", &[a, f], || format!("{lhs} > {rhs}"));
            let both = img[i].intersection_len(&img[j]);
            r.assert(both <= common + kappa, "common image bound", &[a, f], || {
                format!("{both} > {common} + {kappa}")
            });
            let lost = far_f.difference(&far_a).len();
            let bound = (a.len() - common + kappa) as i64 - kappa_prev as i64;
            r.assert(lost as i64 <= bound, "far side difference bound", &[a, f], || {
                format!("{lost} > {bound}")
            });
        }
    }
    r
}

/// `|Γ(X)| ≥ min(|V| − k + 1, |X| + κ_k)` for every `X` with `|X| ≥ k`, and
/// some `X` attains it when the graph is `k`-separable.
pub fn check_isoperimetric_inequality(g: &Digraph, k: usize) -> Result<CalculusReport> {
    let kappa = super::kappa(g, k, Sign::Forward)?;
    let separable = g.is_k_separable(k)?;
    let n = g.vertex_count();
    let mut r = CalculusReport::default();
    let mut tight = false;
    for m in 1u64..(1u64 << n) {
        if (m.count_ones() as usize) < k {
            continue;
        }
        let x = ElementSet::from_mask(n, m);
        let size = g.image(&x, Sign::Forward).len();
        let bound = (n + 1 - k).min(x.len() + kappa);
        tight |= size == bound;
        r.assert(size >= bound, "isoperimetric inequality", &[&x], || format!("{size} < {bound}"));
    }
    r.assert(tight || !separable, "inequality attained", &[], || "no set attains the bound".into());
    Ok(r)
}

/// For Cayley graphs every left translate of a fragment is a fragment.
pub fn check_translation_closure(g: &Digraph, k: usize, sign: Sign) -> Result<CalculusReport> {
    translation_closure_from(g, &profile(g, k, sign)?)
}

pub(crate) fn translation_closure_from(g: &Digraph, p: &IsoProfile) -> Result<CalculusReport> {
    let mut r = CalculusReport::default();
    let (Some(action), Some(frags)) = (g.transitive_action(), listed(&p.fragments)) else {
        return Ok(r);
    };
    for f in frags {
        for perm in action {
            let moved = ElementSet::from_indices(
                g.vertex_count(),
                &f.iter().map(|v| perm[v] as usize).collect::<Vec<_>>(),
            )?;
            r.assert(p.fragments.contains(&moved), "translate of fragment", &[f], || {
                format!("translate {moved}")
            });
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::cayley_graph;
    use crate::groups::FiniteGroup;

    fn cay(n: usize, s: &[usize]) -> Digraph {
        let g = FiniteGroup::cyclic(n).unwrap();
        cayley_graph(&g, &g.set(s).unwrap()).unwrap()
    }

    #[test]
    fn duality_on_examples() {
        assert!(check_duality(&cay(7, &[0, 1, 3]), 1).unwrap().passed());
        let s3 = FiniteGroup::symmetric(3).unwrap();
        for s in crate::groups::generating_sets(&s3).unwrap() {
            let g = cayley_graph(&s3, &s).unwrap();
            for k in 1..=2 {
                let rep = check_duality(&g, k).unwrap();
                assert!(rep.passed(), "{s} k={k}: {:?}", rep.violations);
            }
        }
    }

    #[test]
    fn submodularity_exhaustive_and_sampled() {
        let g = cay(5, &[0, 1, 3]);
        let rep = check_submodularity(&g, 1 << 20, 0, 0).unwrap();
        assert_eq!(rep.checks, 32 * 33 / 2);
        assert!(rep.passed());
        let rep = check_submodularity(&cay(20, &[0, 1, 7]), 0, 2000, 3).unwrap();
        assert_eq!(rep.checks, 2000);
        assert!(rep.passed());
    }

    #[test]
    fn intersection_examples() {
        for (g, k) in [(cay(11, &[0, 1]), 2), (cay(7, &[0, 1, 3]), 1)] {
            let rep = check_fragment_intersection(&g, k).unwrap();
            assert!(rep.passed(), "{:?}", rep.violations);
            assert!(rep.checks > 0);
        }
    }

    #[test]
    fn pair_bounds_examples() {
        for g in [cay(11, &[0, 1]), cay(13, &[0, 1, 2])] {
            let rep = check_fragment_pair_bounds(&g, 2).unwrap();
            assert!(rep.passed(), "{:?}", rep.violations);
            assert!(rep.checks > 0);
        }
    }

    #[test]
    fn dual_order_examples() {
        for g in [cay(7, &[0, 1]), cay(8, &[0, 1, 4]), cay(9, &[0, 1])] {
            let rep = check_dual_fragment_order(&g, 1).unwrap();
            assert!(rep.passed(), "{:?}", rep.violations);
        }
    }

    #[test]
    fn inequality_and_translation() {
        let g = cay(9, &[0, 1, 3]);
        for k in 1..=3 {
            assert!(check_isoperimetric_inequality(&g, k).unwrap().passed());
            assert!(check_translation_closure(&g, k, Sign::Reverse).unwrap().passed());
        }
    }

    #[test]
    fn violations_are_reported() {
        let mut r = CalculusReport::default();
        let x = ElementSet::from_indices(3, &[1]).unwrap();
        r.assert(false, "demo", &[&x], || "detail".into());
        assert_eq!(r.checks, 1);
        assert!(!r.passed());
        assert_eq!(r.violations[0].sets, vec![x]);
    }
}
