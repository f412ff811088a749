//! Checkers about atoms of Cayley graphs: subgroup structure of 1-atoms,
//! the half-degree bound on `κ₁` and its equality cases, small connection
//! sets, 2-atoms in abelian groups, and atom multiplicities.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::masks::{bits, pop, MaskGroup};
use super::{
    generating_jobs, groups_in, group_seed, sweep, sweep_batches, Batch, CheckReport, Instance, TheoremId,
    VerifyConfig,
};
use crate::digraph::{cayley_graph, Sign};
use crate::error::Result;
use crate::groups::{Catalog, CatalogEntry, FiniteGroup, MinSubgroupOrder, SemiNormality};
use crate::iso::{self, atom_profile, classify, AtomProfile, FragmentList};
use crate::set::ElementSet;

/// Atoms of a separable profile that contain the identity.
fn identity_atoms(p: &AtomProfile) -> Vec<ElementSet> {
    match &p.atoms {
        FragmentList::Listed(list) => list.iter().filter(|a| a.contains(0)).cloned().collect(),
        FragmentList::AllKSubsets { .. } => Vec::new(),
    }
}

fn profiles(graph: &crate::Digraph, k: usize) -> Result<(AtomProfile, AtomProfile)> {
    Ok((
        atom_profile(graph, k, Sign::Forward)?,
        atom_profile(graph, k, Sign::Reverse)?,
    ))
}

fn profile_summary(p: &AtomProfile) -> String {
    format!(
        "k = {}, {:?}: kappa {}, alpha {}, omega {} (max {})",
        p.k, p.sign, p.kappa, p.alpha, p.omega, p.omega_max
    )
}

/// The identity 1-atom is the subgroup generated by its intersection with
/// `S` (on the reverse side when the reverse atoms are smaller); right-periodic
/// identity 2-atoms are subgroups; `κ₁ = min(|LS|, |SL|) − |L|` for some
/// proper subgroup `L`.
pub(crate) fn check_one_atom_structure(catalog: &Catalog, cfg: &VerifyConfig) -> Result<CheckReport> {
    let jobs = generating_jobs(catalog, cfg, |_| true)?;
    let subgroups: Vec<(String, Vec<ElementSet>)> = groups_in(catalog, cfg)
        .into_iter()
        .map(|e| (e.name.clone(), e.group.all_subgroups()))
        .collect();
    sweep(TheoremId::OneAtom, &jobs, |(entry, s)| {
        let g = &entry.group;
        let n = g.order();
        let graph = cayley_graph(g, s)?;
        let (f1, r1) = profiles(&graph, 1)?;
        let mut inst = Instance::new(&entry.name);

        let generated_by_trace = |atom: &ElementSet, conn: &ElementSet| {
            g.is_subgroup(atom) && g.subgroup_generated(&conn.intersection(atom)) == *atom
        };
        let s_inv = g.inverse_set(s);
        for (clause, own, other, conn) in [
            ("identity atom is generated subgroup", &f1, &r1, s),
            ("reverse identity atom is generated subgroup", &r1, &f1, &s_inv),
        ] {
            if own.separable && own.alpha <= other.alpha {
                let h = own.atom_containing(0).expect("atoms cover every vertex");
                inst.check(clause, generated_by_trace(&h, conn), || {
                    (vec![("S", s.clone()), ("H", h.clone())], profile_summary(own))
                });
            } else {
                inst.skip(clause);
            }
        }

        let subs = &subgroups.iter().find(|(name, _)| *name == entry.name).expect("swept group").1;
        let kappa1 = f1.kappa;
        let found = subs.iter().filter(|l| l.len() < n).find(|l| {
            let ls = g.minkowski_product(l, s).expect("same universe").len();
            let sl = g.minkowski_product(s, l).expect("same universe").len();
            ls.min(sl) - l.len() == kappa1
        });
        if n == 1 {
            inst.skip("kappa1 attained by a subgroup");
        } else {
            inst.check("kappa1 attained by a subgroup", found.is_some(), || {
                (vec![("S", s.clone())], format!("kappa1 = {kappa1}"))
            });
        }

        if n >= 3 {
            let (f2, r2) = profiles(&graph, 2)?;
            for (clause, own, other) in [
                ("periodic 2-atom is subgroup", &f2, &r2),
                ("periodic reverse 2-atom is subgroup", &r2, &f2),
            ] {
                let periodic: Vec<ElementSet> = if own.separable && own.alpha <= other.alpha {
                    identity_atoms(own)
                        .into_iter()
                        .filter(|h| g.right_stabilizer(h).map(|p| p.len() >= 2).unwrap_or(false))
                        .collect()
                } else {
                    Vec::new()
                };
                if periodic.is_empty() {
                    inst.skip(clause);
                }
                for h in periodic {
                    inst.check(clause, g.is_subgroup(&h), || {
                        (vec![("S", s.clone()), ("H", h.clone())], profile_summary(own))
                    });
                }
            }
        }
        Ok(inst)
    })
}

/// Some `u` with `S = H ∪ Hu` (`right = true`) or `S = H ∪ uH`.
fn coset_pair(mg: &MaskGroup, s: u64, h: u64, right: bool) -> Option<usize> {
    (0..mg.order()).find(|&u| {
        let moved = bits(h).fold(0u64, |acc, x| {
            let y = if right { mg.mul(x, u) } else { mg.mul(u, x) };
            acc | 1 << y
        });
        h | moved == s
    })
}

/// Result of the odd-order construction `S = H ∪ Hu` with `H` non-normal and
/// `uH ≠ Hu`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZemorWitness {
    pub group: String,
    pub subgroup: ElementSet,
    pub u: usize,
    pub connection_set: ElementSet,
    pub kappa1: usize,
    pub alpha1: usize,
    pub alpha_reverse: usize,
    /// Reverse 1-atom through the identity.
    pub negative_atom: ElementSet,
    pub negative_atom_is_subgroup: bool,
    pub subgroup_is_atom: bool,
}

/// Every candidate `(H, u)` of the construction in `g`, with the observed
/// atoms. Empty when `g` has even order or no non-normal subgroup.
pub fn zemor_candidates(g: &FiniteGroup, name: &str) -> Result<Vec<ZemorWitness>> {
    if g.order().is_multiple_of(2) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for h in g.all_subgroups() {
        if h.len() == 1 || h.len() == g.order() || g.normality_witness(&h).is_none() {
            continue;
        }
        for u in 0..g.order() {
            let hu = g.right_translate(&h, u);
            if g.left_translate(u, &h) == hu {
                continue;
            }
            let s = h.union(&hu);
            if g.subgroup_generated(&s).len() != g.order() {
                continue;
            }
            let graph = cayley_graph(g, &s)?;
            let (f1, r1) = profiles(&graph, 1)?;
            let q = r1.atom_containing(0).expect("atoms cover every vertex");
            out.push(ZemorWitness {
                group: name.to_string(),
                subgroup: h.clone(),
                u,
                connection_set: s,
                kappa1: f1.kappa,
                alpha1: f1.alpha,
                alpha_reverse: r1.alpha,
                negative_atom_is_subgroup: identity_atoms(&r1).iter().any(|a| g.is_subgroup(a)),
                negative_atom: q,
                subgroup_is_atom: f1.atoms.contains(&h),
            });
        }
    }
    Ok(out)
}

/// First candidate in `g` whose reverse atoms contain no subgroup.
pub fn zemor_witness(g: &FiniteGroup, name: &str) -> Result<Option<ZemorWitness>> {
    Ok(zemor_candidates(g, name)?
        .into_iter()
        .find(|w| !w.negative_atom_is_subgroup))
}

/// `2κ₁ ≥ |S|` with the coset description of the equality cases, the growth
/// bounds for products, and the odd-order construction whose reverse atoms
/// are not subgroups. The construction is searched in every odd-order
/// non-abelian catalog group up to the sweep limit, since it only touches a
/// handful of connection sets.
pub(crate) fn check_olson(catalog: &Catalog, cfg: &VerifyConfig) -> Result<CheckReport> {
    let jobs = generating_jobs(catalog, cfg, |_| true)?;
    let mut report = sweep(TheoremId::Olson, &jobs, |(entry, s)| {
        let g = &entry.group;
        let mg = MaskGroup::new(g);
        let graph = cayley_graph(g, s)?;
        let (f1, r1) = profiles(&graph, 1)?;
        let mut inst = Instance::new(&entry.name);
        let clauses = [
            "half-degree bound",
            "equality has coset structure",
            "coset structure forces equality",
        ];
        if !f1.separable {
            clauses.iter().for_each(|c| inst.skip(c));
            return Ok(inst);
        }
        let k1 = f1.kappa;
        let sz = s.len();
        inst.check(clauses[0], 2 * k1 >= sz, || {
            (vec![("S", s.clone())], format!("kappa1 = {k1}, |S| = {sz}"))
        });
        let h = f1.atom_containing(0).expect("atoms cover every vertex");
        let k = r1.atom_containing(0).expect("atoms cover every vertex");
        let sm = s.to_mask();
        let right = h.len() <= k.len() && coset_pair(&mg, sm, h.to_mask(), true).is_some();
        let left = h.len() >= k.len() && coset_pair(&mg, sm, k.to_mask(), false).is_some();
        let structured = right || left;
        let equal = 2 * k1 == sz;
        let witness = || {
            (
                vec![("S", s.clone()), ("H", h.clone()), ("K", k.clone())],
                format!("kappa1 = {k1}, |S| = {sz}, H u-structure {right}, K u-structure {left}"),
            )
        };
        if equal {
            inst.check(clauses[1], structured, witness);
        } else {
            inst.skip(clauses[1]);
        }
        if structured {
            inst.check(clauses[2], equal, witness);
        } else {
            inst.skip(clauses[2]);
        }
        Ok(inst)
    })?;
    report.merge(super::sumsets::olson_growth_report(catalog, cfg)?);

    let mut found = Vec::new();
    for entry in catalog.iter() {
        let g = &entry.group;
        if g.is_abelian() || g.order() % 2 == 0 || g.order() > crate::groups::SWEEP_ORDER_LIMIT {
            continue;
        }
        for w in zemor_candidates(g, &entry.name)? {
            let mut inst = Instance::new(&entry.name);
            inst.check("odd-order construction has non-subgroup reverse atom", !w.negative_atom_is_subgroup, || {
                (
                    vec![("S", w.connection_set.clone()), ("H", w.subgroup.clone()), ("Q", w.negative_atom.clone())],
                    format!("alpha1 {}, reverse alpha1 {}", w.alpha1, w.alpha_reverse),
                )
            });
            if found.is_empty() && !w.negative_atom_is_subgroup {
                found.push(w);
            }
            report.absorb(inst);
        }
    }
    match found.first() {
        Some(w) => report.notes.push(format!(
            "{}: S = H ∪ Hu with H = {}, u = {}: kappa1 {}, alpha1 {}, reverse alpha1 {}, reverse atom {} is not a subgroup",
            w.group, w.subgroup, w.u, w.kappa1, w.alpha1, w.alpha_reverse, w.negative_atom
        )),
        None => report
            .notes
            .push("no odd-order non-abelian catalog group produced the construction".into()),
    }
    Ok(report)
}

/// Whether `set` is `{r^j, …, r^{j+|set|−1}}` for some `j`.
fn is_progression_of(mg: &MaskGroup, set: u64, r: usize) -> bool {
    let mut powers = vec![0usize];
    loop {
        let next = mg.mul(*powers.last().expect("nonempty"), r);
        if next == 0 {
            break;
        }
        powers.push(next);
    }
    let ord = powers.len();
    let len = pop(set);
    if len == 0 || len > ord {
        return false;
    }
    (0..ord).any(|start| (0..len).fold(0u64, |acc, i| acc | 1 << powers[(start + i) % ord]) == set)
}

fn common_ratio(mg: &MaskGroup, a: u64, b: u64) -> Option<usize> {
    (0..mg.order()).find(|&r| is_progression_of(mg, b, r) && is_progression_of(mg, a, r))
}

/// Common ratio with `A` allowed to be a left translate of a progression.
fn common_ratio_translated(mg: &MaskGroup, a: u64, b: u64) -> Option<usize> {
    (0..mg.order()).find(|&r| {
        is_progression_of(mg, b, r)
            && (0..mg.order()).any(|x| {
                let shifted = bits(a).fold(0u64, |acc, y| acc | 1 << mg.mul(x, y));
                is_progression_of(mg, shifted, r)
            })
    })
}

/// Small connection sets: sets no larger than the smallest nontrivial
/// subgroup are Cauchy and, when `κ₂ = |S| − 1`, progressions; identity
/// 2-atoms with trivial left period have at most `|S| − 1` elements; critical
/// pairs with small `B` are complements or common-ratio progressions.
pub(crate) fn check_small_sets(catalog: &Catalog, cfg: &VerifyConfig) -> Result<CheckReport> {
    let jobs = generating_jobs(catalog, cfg, |_| true)?;
    let mut report = sweep(TheoremId::SmallSets, &jobs, |(entry, s)| {
        let g = &entry.group;
        let n = g.order();
        let p = match g.min_subgroup_order() {
            MinSubgroupOrder::Order(p) => p,
            MinSubgroupOrder::Infinite => usize::MAX,
        };
        let graph = cayley_graph(g, s)?;
        let mut inst = Instance::new(&entry.name);
        let small = s.len() <= p;
        let k1 = iso::kappa(&graph, 1, Sign::Forward)?;
        if small {
            inst.check("small set is Cauchy", k1 + 1 == s.len(), || {
                (vec![("S", s.clone())], format!("kappa1 = {k1}"))
            });
        } else {
            inst.skip("small set is Cauchy");
        }
        if n < 3 {
            inst.skip("critical small set is a progression");
            inst.skip("2-atom size bound");
            inst.skip("reverse 2-atom size bound");
            return Ok(inst);
        }
        let (f2, r2) = profiles(&graph, 2)?;
        if small && f2.kappa + 1 == s.len() {
            let prog = g.detect_progression(s);
            inst.check("critical small set is a progression", prog.is_some(), || {
                (vec![("S", s.clone())], format!("kappa2 = {}, separable {}", f2.kappa, f2.separable))
            });
        } else {
            inst.skip("critical small set is a progression");
        }
        for (clause, own, other) in [
            ("2-atom size bound", &f2, &r2),
            ("reverse 2-atom size bound", &r2, &f2),
        ] {
            let candidates: Vec<ElementSet> = if s.len() >= 3 && own.separable && own.alpha <= other.alpha {
                identity_atoms(own)
                    .into_iter()
                    .filter(|h| g.stabilizers(h).map(|(l, _)| l.len() == 1).unwrap_or(false))
                    .collect()
            } else {
                Vec::new()
            };
            if candidates.is_empty() {
                inst.skip(clause);
            }
            for h in candidates {
                inst.check(clause, h.len() < s.len(), || {
                    (vec![("S", s.clone()), ("H", h.clone())], profile_summary(own))
                });
            }
        }
        Ok(inst)
    })?;
    report.merge(critical_pair_report(catalog, cfg)?);
    Ok(report)
}

/// Pair budget above which the critical-pair scan samples instead.
const CRITICAL_PAIR_BUDGET: u64 = 1 << 24;

fn critical_pair_report(catalog: &Catalog, cfg: &VerifyConfig) -> Result<CheckReport> {
    struct Job<'a> {
        entry: &'a CatalogEntry,
        mg: &'a MaskGroup,
        b: u64,
        a_list: Vec<u64>,
    }
    let groups = groups_in(catalog, cfg);
    let tables: Vec<MaskGroup> = groups.iter().map(|e| MaskGroup::new(&e.group)).collect();
    let mut jobs = Vec::new();
    for (i, entry) in groups.iter().enumerate() {
        let n = entry.group.order();
        let MinSubgroupOrder::Order(p) = entry.group.min_subgroup_order() else {
            continue;
        };
        let with_identity: Vec<u64> = (0u64..1 << (n - 1)).map(|m| (m << 1) | 1).filter(|&m| pop(m) >= 2).collect();
        let bs: Vec<u64> = with_identity.iter().copied().filter(|&b| pop(b) <= p).collect();
        let total = bs.len() as u64 * with_identity.len() as u64;
        if total <= CRITICAL_PAIR_BUDGET {
            for &b in &bs {
                jobs.push(Job {
                    entry,
                    mg: &tables[i],
                    b,
                    a_list: with_identity.clone(),
                });
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(group_seed(cfg, TheoremId::SmallSets, i));
            use rand::seq::SliceRandom;
            for _ in 0..cfg.samples {
                let b = *bs.choose(&mut rng).expect("some small set");
                let a = *with_identity.choose(&mut rng).expect("some set");
                jobs.push(Job {
                    entry,
                    mg: &tables[i],
                    b,
                    a_list: vec![a],
                });
            }
        }
    }
    let report = sweep_batches(TheoremId::SmallSets, &jobs, |job| {
        let mg = job.mg;
        let n = mg.order();
        let b = job.b;
        let k = mg.generated(b);
        let rows = mg.left_rows(b);
        let mut batch = Batch::default();
        for &a in &job.a_list {
            let ab = MaskGroup::product_with_rows(a, &rows);
            let size = pop(a) + pop(b);
            if pop(ab) + 1 != size || pop(ab) + 1 > pop(k) {
                batch.skipped += 1;
                continue;
            }
            let mut inst = Instance::new(&job.entry.name);
            let sets = || vec![("A", ElementSet::from_mask(n, a)), ("B", ElementSet::from_mask(n, b))];
            if size == pop(k) {
                let target = k & !b;
                let inv = mg.inverse_set(a);
                let ok = (0..n).any(|x| bits(inv).fold(0u64, |acc, y| acc | 1 << mg.mul(y, x)) == target);
                inst.check("critical pair filling the subgroup", ok, || (sets(), format!("|K| = {}", pop(k))));
                inst.skip("critical pair progressions");
            } else {
                inst.skip("critical pair filling the subgroup");
                let literal = common_ratio(mg, a, b);
                if literal.is_none() {
                    let translated = common_ratio_translated(mg, a, b);
                    inst.note(format!(
                        "{}: A = {}, B = {}: no common ratio, translated form {}",
                        job.entry.name,
                        ElementSet::from_mask(n, a),
                        ElementSet::from_mask(n, b),
                        if translated.is_some() { "holds" } else { "fails" }
                    ));
                }
                inst.check("critical pair progressions", literal.is_some(), || {
                    (sets(), format!("|AB| = {}, |K| = {}", pop(ab), pop(k)))
                });
            }
            batch.instances.push(inst);
        }
        Ok(batch)
    })?;
    Ok(report)
}

/// In abelian groups: forward and reverse connectivities and atom sizes
/// agree; with `μ = κ₂ − |S| ≤ 0` the identity 2-atoms are subgroups or
/// pairs (outside `|S| = |G| − 6` when `μ = 0`), and a non-subgroup identity
/// 2-atom `H` with `|H| ≠ 2` has `|H| ≤ κ₂(H)`, with `|H| = 3` when it
/// generates.
pub(crate) fn check_abelian_two_atoms(catalog: &Catalog, cfg: &VerifyConfig) -> Result<CheckReport> {
    let jobs = generating_jobs(catalog, cfg, |e| e.group.is_abelian())?;
    sweep(TheoremId::AbelianTwoAtoms, &jobs, |(entry, s)| {
        let g = &entry.group;
        let n = g.order();
        let graph = cayley_graph(g, s)?;
        let mut inst = Instance::new(&entry.name);
        let mut two = None;
        for k in 1..=2 {
            if 2 * k > n + 1 {
                continue;
            }
            let (f, r) = profiles(&graph, k)?;
            inst.check("reverse symmetry", f.kappa == r.kappa && f.alpha == r.alpha, || {
                (vec![("S", s.clone())], format!("{} / {}", profile_summary(&f), profile_summary(&r)))
            });
            if k == 2 {
                two = Some(f);
            }
        }
        let clauses = [
            "identity 2-atom is subgroup or pair",
            "atom bounded by its own connectivity",
            "generating atom has three elements",
        ];
        let Some(f2) = two.filter(|f| f.separable) else {
            clauses.iter().for_each(|c| inst.skip(c));
            return Ok(inst);
        };
        let mu = f2.kappa as i64 - s.len() as i64;
        let atoms = identity_atoms(&f2);
        let excluded = mu == 0 && s.len() + 6 == n;
        if mu <= 0 && !excluded {
            for m in &atoms {
                inst.check(clauses[0], g.is_subgroup(m) || m.len() == 2, || {
                    (vec![("S", s.clone()), ("M", m.clone())], format!("mu = {mu}, |M| = {}", m.len()))
                });
            }
        } else {
            inst.skip(clauses[0]);
            if excluded {
                for m in atoms.iter().filter(|m| !g.is_subgroup(m) && m.len() != 2) {
                    inst.note(format!(
                        "{}: S = {} in the excluded region has identity 2-atom {} of size {}",
                        entry.name,
                        s,
                        m,
                        m.len()
                    ));
                }
            }
        }
        let mut applied = false;
        if mu <= 0 {
            for h in atoms.iter().filter(|h| h.len() != 2 && !g.is_subgroup(h)) {
                applied = true;
                let own = classify(g, h)?;
                let k2h = own.kappa2.expect("a non-subgroup of size at least 3 generates at least 3 elements");
                inst.check(clauses[1], h.len() <= k2h, || {
                    (vec![("S", s.clone()), ("H", h.clone())], format!("kappa2(H) = {k2h}"))
                });
                if own.generated_order == n {
                    inst.check(clauses[2], h.len() == 3, || {
                        (vec![("S", s.clone()), ("H", h.clone())], format!("|H| = {}", h.len()))
                    });
                } else {
                    inst.skip(clauses[2]);
                }
            }
        }
        if !applied {
            inst.skip(clauses[1]);
            inst.skip(clauses[2]);
        }
        Ok(inst)
    })
}

/// Conjugation `Y ↦ a⁻¹ Y⁻¹ a` applied to a set.
fn twisted_inverse(g: &FiniteGroup, a: usize, y: &ElementSet) -> ElementSet {
    g.conjugate_set(g.inv(a), &g.inverse_set(y))
}

/// Atom multiplicity: when `|K| ≥ |H| ≥ 3`, either some direction has
/// multiplicity at most 2 or `|H| ≤ 3 + max(κ₂ − δ, κ₋₂ − δ₋)`; symmetric
/// sets have left-periodic large identity 2-atoms; for semi-normal sets the
/// twisted inversion maps fragments onto reverse fragments, and large
/// identity 2-atoms are subgroups whose normalizer has index at most 2.
pub(crate) fn check_superatoms(catalog: &Catalog, cfg: &VerifyConfig) -> Result<CheckReport> {
    let jobs = generating_jobs(catalog, cfg, |e| e.group.order() >= 3)?;
    sweep(TheoremId::Superatoms, &jobs, |(entry, s)| {
        let g = &entry.group;
        let n = g.order();
        let graph = cayley_graph(g, s)?;
        let mut inst = Instance::new(&entry.name);
        let (f2, r2) = profiles(&graph, 2)?;
        let delta = s.len() as i64;
        let clauses = [
            "multiplicity or size bound",
            "symmetric set atom has left period",
            "twisted inversion maps fragments",
            "semi-normal large atom is subgroup",
            "semi-normal large atom has small normalizer index",
        ];
        if !f2.separable {
            clauses.iter().for_each(|c| inst.skip(c));
            return Ok(inst);
        }
        let slack = (f2.kappa as i64 - delta).max(r2.kappa as i64 - delta);
        let (small, large) = if f2.alpha <= r2.alpha { (&f2, &r2) } else { (&r2, &f2) };
        if small.alpha >= 3 && large.alpha >= small.alpha {
            let ok = f2.omega.min(r2.omega) <= 2 || small.alpha as i64 <= 3 + slack;
            inst.check(clauses[0], ok, || {
                (
                    vec![("S", s.clone())],
                    format!("{} / {}", profile_summary(&f2), profile_summary(&r2)),
                )
            });
        } else {
            inst.skip(clauses[0]);
        }
        let threshold = f2.kappa as i64 - delta + 4;
        let large_atoms: Vec<ElementSet> = identity_atoms(&f2)
            .into_iter()
            .filter(|h| h.len() >= 3 && h.len() as i64 >= threshold)
            .collect();
        if g.inverse_set(s) == *s && !large_atoms.is_empty() {
            for h in &large_atoms {
                let period = g.stabilizers(h)?.0.len();
                inst.check(clauses[1], period >= 2, || {
                    (vec![("S", s.clone()), ("H", h.clone())], format!("left period of order {period}"))
                });
            }
        } else {
            inst.skip(clauses[1]);
        }
        let witness = match g.seminormality(s) {
            SemiNormality::Normal => Some(0),
            SemiNormality::SemiNormal { witness } => Some(witness),
            SemiNormality::Neither => None,
        };
        let Some(a) = witness else {
            clauses[2..].iter().for_each(|c| inst.skip(c));
            return Ok(inst);
        };
        for k in 1..=2 {
            let fwd = iso::fragments(&graph, k, Sign::Forward)?;
            let rev = iso::fragments(&graph, k, Sign::Reverse)?;
            let (FragmentList::Listed(fl), FragmentList::Listed(rl)) = (&fwd, &rev) else {
                continue;
            };
            let mut image: Vec<ElementSet> = fl.iter().map(|y| twisted_inverse(g, a, y)).collect();
            image.sort();
            image.dedup();
            inst.check(clauses[2], image.len() == fl.len() && image == *rl, || {
                (
                    vec![("S", s.clone())],
                    format!("k = {k}, a = {a}: {} fragments map to {} sets, {} reverse fragments", fl.len(), image.len(), rl.len()),
                )
            });
        }
        if large_atoms.is_empty() {
            inst.skip(clauses[3]);
            inst.skip(clauses[4]);
        }
        for h in &large_atoms {
            let sub = g.is_subgroup(h);
            inst.check(clauses[3], sub, || (vec![("S", s.clone()), ("H", h.clone())], format!("a = {a}")));
            if sub {
                let index = n / g.normalizer(h).len();
                inst.check(clauses[4], index <= 2, || {
                    (vec![("S", s.clone()), ("H", h.clone())], format!("index {index}"))
                });
            } else {
                inst.skip(clauses[4]);
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
            samples: 300,
            ..VerifyConfig::default()
        }
    }

    #[test]
    fn progression_detection_on_masks() {
        let g = FiniteGroup::cyclic(11).unwrap();
        let mg = MaskGroup::new(&g);
        // {0,2,4} = {0, 2, 2+2}.
        assert!(is_progression_of(&mg, 0b10101, 2));
        assert!(!is_progression_of(&mg, 0b10101, 1));
        assert_eq!(common_ratio(&mg, 0b111, 0b11), Some(1));
    }

    #[test]
    fn coset_pair_example() {
        // Z6, S = {0,1,3,4} = H ∪ (H+1) with H = {0,3}.
        let g = FiniteGroup::cyclic(6).unwrap();
        let mg = MaskGroup::new(&g);
        assert_eq!(coset_pair(&mg, 0b11011, 0b1001, true), Some(1));
        assert_eq!(coset_pair(&mg, 0b111, 0b1001, true), None);
    }

    #[test]
    fn one_atom_on_small_groups() {
        let r = check_one_atom_structure(&Catalog::builtin().unwrap(), &cfg(8)).unwrap();
        assert!(r.passed(), "{:?}", r.counterexamples);
        assert!(r.clause("identity atom is generated subgroup").tested > 0);
    }

    #[test]
    fn olson_on_small_groups() {
        let r = check_olson(&Catalog::builtin().unwrap(), &cfg(8)).unwrap();
        assert!(r.passed(), "{:?}", r.counterexamples);
        assert!(r.clause("equality has coset structure").tested > 0);
    }

    #[test]
    fn small_sets_on_small_groups() {
        let r = check_small_sets(&Catalog::builtin().unwrap(), &cfg(8)).unwrap();
        assert!(r.passed(), "{:?}", r.counterexamples);
    }

    #[test]
    fn abelian_two_atoms_small() {
        let r = check_abelian_two_atoms(&Catalog::builtin().unwrap(), &cfg(9)).unwrap();
        assert!(r.passed(), "{:?}", r.counterexamples);
    }

    #[test]
    fn superatoms_small() {
        let r = check_superatoms(&Catalog::builtin().unwrap(), &cfg(8)).unwrap();
        assert!(r.passed(), "{:?}", r.counterexamples);
    }
}
