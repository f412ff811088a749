//! Checkers that only need sumset arithmetic: the covering lemma, Kneser and
//! Diderrich lower bounds, the decomposition bound for non-generating sets,
//! Olson's growth bounds and the order-of-basis statement.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::masks::{bits, pop, random_nonempty, MaskGroup};
use super::{groups_in, group_seed, sweep, CheckReport, Instance, TheoremId, VerifyConfig};
use crate::digraph::Sign;
use crate::error::Result;
use crate::groups::{generating_sets, Catalog, CatalogEntry};
use crate::iso::{generated_cayley_graph, kappa};
use crate::set::ElementSet;

struct PairJob<'a> {
    index: usize,
    entry: &'a CatalogEntry,
    mg: &'a MaskGroup,
    a: u64,
    b: u64,
}

/// Every pair of nonempty subsets (with `b` containing the identity when
/// `b_has_identity`) for small groups, otherwise `cfg.samples` seeded pairs.
fn pair_masks(cfg: &VerifyConfig, id: TheoremId, index: usize, n: usize, b_has_identity: bool) -> Vec<(u64, u64)> {
    let full = super::masks::full_mask(n);
    if n <= cfg.exhaustive_pair_order {
        let bs: Vec<u64> = (1..=full).filter(|b| !b_has_identity || b & 1 == 1).collect();
        (1..=full).flat_map(|a| bs.iter().map(move |&b| (a, b))).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(group_seed(cfg, id, index));
        (0..cfg.samples)
            .map(|_| {
                let a = random_nonempty(&mut rng, n);
                let mut b = random_nonempty(&mut rng, n);
                if b_has_identity {
                    b |= 1;
                }
                (a, b)
            })
            .collect()
    }
}

fn pair_sweep<F>(id: TheoremId, catalog: &Catalog, cfg: &VerifyConfig, b_has_identity: bool, f: F) -> Result<CheckReport>
where
    F: Fn(&PairJob) -> Result<Instance> + Sync,
{
    let groups = groups_in(catalog, cfg);
    let tables: Vec<MaskGroup> = groups.iter().map(|e| MaskGroup::new(&e.group)).collect();
    let mut jobs = Vec::new();
    for (i, entry) in groups.iter().enumerate() {
        for (a, b) in pair_masks(cfg, id, i, entry.group.order(), b_has_identity) {
            jobs.push(PairJob {
                index: i,
                entry,
                mg: &tables[i],
                a,
                b,
            });
        }
    }
    sweep(id, &jobs, f)
}

fn set(n: usize, m: u64) -> ElementSet {
    ElementSet::from_mask(n, m)
}

/// Kneser's and Diderrich's lower bound for aperiodic products, and the
/// covering lemma `|A| + |B| > |G| ⇒ AB = G`.
pub(crate) fn check_classical_inequalities(catalog: &Catalog, cfg: &VerifyConfig) -> Result<CheckReport> {
    pair_sweep(TheoremId::Classical, catalog, cfg, false, |job| {
        let mg = job.mg;
        let n = mg.order();
        let (a, b) = (job.a, job.b);
        let ab = mg.product(a, b);
        let witness = || {
            (
                vec![("A", set(n, a)), ("B", set(n, b)), ("AB", set(n, ab))],
                format!("|A| = {}, |B| = {}, |AB| = {}", pop(a), pop(b), pop(ab)),
            )
        };
        let mut inst = Instance::new(&job.entry.name);
        if pop(a) + pop(b) > n {
            inst.check("covering", ab == mg.full(), witness);
        } else {
            inst.skip("covering");
        }
        let aperiodic = mg.right_stabilizer(ab) == 1;
        let bound = pop(ab) + 1 >= pop(a) + pop(b);
        if job.entry.group.is_abelian() && aperiodic {
            inst.check("kneser", bound, witness);
        } else {
            inst.skip("kneser");
        }
        if aperiodic && mg.elements_commute(b) {
            inst.check("diderrich", bound, witness);
        } else {
            inst.skip("diderrich");
        }
        Ok(inst)
    })
}

/// `κ₁(S)` in `Cay(⟨S⟩, S)` for every `S ∋ 1`, indexed by `mask >> 1`.
fn kappa1_table(entry: &CatalogEntry) -> Result<Vec<usize>> {
    let n = entry.group.order();
    (0u64..1 << (n - 1))
        .into_par_iter()
        .map(|m| {
            let s = set(n, (m << 1) | 1);
            let (graph, _, _) = generated_cayley_graph(&entry.group, &s)?;
            kappa(&graph, 1, Sign::Forward)
        })
        .collect()
}

/// Parts of `A` on the left cosets `xK`.
fn left_parts(mg: &MaskGroup, a: u64, k: u64) -> Vec<u64> {
    let mut rest = a;
    let mut parts = Vec::new();
    while rest != 0 {
        let x = rest.trailing_zeros() as usize;
        let coset = bits(k).fold(0u64, |acc, h| acc | 1 << mg.mul(x, h));
        parts.push(a & coset);
        rest &= !coset;
    }
    parts
}

/// With `K = ⟨S⟩`, the parts `A_i` of `A` on left `K`-cosets satisfy
/// `|{i : |A_i S| < |K|}| · κ₁(S) ≤ |AS| − |A|`.
pub(crate) fn check_diderrich_lemma(catalog: &Catalog, cfg: &VerifyConfig) -> Result<CheckReport> {
    let groups = groups_in(catalog, cfg);
    let kappas: Vec<Vec<usize>> = groups.iter().map(|e| kappa1_table(e)).collect::<Result<_>>()?;
    pair_sweep(TheoremId::DiderrichLemma, catalog, cfg, true, |job| {
        let mg = job.mg;
        let n = mg.order();
        let (a, s) = (job.a, job.b);
        let k = mg.generated(s);
        let k1 = kappas[job.index][(s >> 1) as usize];
        let rows = mg.left_rows(s);
        let w = left_parts(mg, a, k)
            .into_iter()
            .filter(|&part| pop(MaskGroup::product_with_rows(part, &rows)) < pop(k))
            .count();
        let growth = pop(MaskGroup::product_with_rows(a, &rows)) - pop(a);
        let mut inst = Instance::new(&job.entry.name);
        inst.check("deficient cosets bound", w * k1 <= growth, || {
            (
                vec![("A", set(n, a)), ("S", set(n, s)), ("K", set(n, k))],
                format!("|W| = {w}, kappa1 = {k1}, |AS| - |A| = {growth}"),
            )
        });
        Ok(inst)
    })
}

/// With `K = ⟨BB⁻¹⟩`: `|B^j| ≥ min(|K|, (j+1)|B|/2)` for every `j ≥ 1` and
/// `|AB| ≥ min(|AK|, |A| + |B|/2)`.
pub(crate) fn olson_growth_report(catalog: &Catalog, cfg: &VerifyConfig) -> Result<CheckReport> {
    pair_sweep(TheoremId::Olson, catalog, cfg, false, |job| {
        let mg = job.mg;
        let n = mg.order();
        let (a, b) = (job.a, job.b);
        let k = mg.generated(mg.product(b, mg.inverse_set(b)));
        let mut inst = Instance::new(&job.entry.name);
        let rows = mg.left_rows(b);
        let mut power = b;
        let mut worst = None;
        for j in 1..=2 * n {
            if 2 * pop(power) < (2 * pop(k)).min((j + 1) * pop(b)) {
                worst.get_or_insert((j, power));
            }
            power = MaskGroup::product_with_rows(power, &rows);
        }
        inst.check("power growth", worst.is_none(), || {
            let (j, p) = worst.expect("failure recorded");
            (vec![("B", set(n, b)), ("K", set(n, k))], format!("|B^{j}| = {}", pop(p)))
        });
        let ab = MaskGroup::product_with_rows(a, &rows);
        let ak = mg.product(a, k);
        let ok = 2 * pop(ab) >= (2 * pop(ak)).min(2 * pop(a) + pop(b));
        inst.check("product growth", ok, || {
            (
                vec![("A", set(n, a)), ("B", set(n, b)), ("K", set(n, k))],
                format!("|AB| = {}, |AK| = {}", pop(ab), pop(ak)),
            )
        });
        Ok(inst)
    })
}

/// `S^{⌊2n/k⌋−1} = G` for generating `S ∋ 1` with `|G| = n`, `|S| = k`.
///
/// Also asserts `S² = G` whenever `2|S| > |G|`, the covering lemma applied to
/// the case where the exponent above drops to one.
pub(crate) fn check_orderbase(catalog: &Catalog, cfg: &VerifyConfig) -> Result<CheckReport> {
    let groups = groups_in(catalog, cfg);
    let tables: Vec<MaskGroup> = groups.iter().map(|e| MaskGroup::new(&e.group)).collect();
    let mut jobs = Vec::new();
    for (i, entry) in groups.iter().enumerate() {
        for s in generating_sets(&entry.group)? {
            jobs.push((i, s.to_mask()));
        }
    }
    let mut report = sweep(TheoremId::OrderBase, &jobs, |&(i, s)| {
        let mg = &tables[i];
        let n = mg.order();
        let k = pop(s);
        let exponent = 2 * n / k - 1;
        let rows = mg.left_rows(s);
        let mut power = s;
        for _ in 1..exponent {
            power = MaskGroup::product_with_rows(power, &rows);
        }
        let mut inst = Instance::new(&groups[i].name);
        inst.check("power reaches group", power == mg.full(), || {
            (
                vec![("S", set(n, s)), ("power", set(n, power))],
                format!("n = {n}, |S| = {k}, exponent {exponent}, |S^{exponent}| = {}", pop(power)),
            )
        });
        if exponent >= 2 {
            inst.check("power reaches group when the exponent is at least 2", power == mg.full(), || {
                (vec![("S", set(n, s))], format!("n = {n}, |S| = {k}, exponent {exponent}"))
            });
        } else {
            inst.skip("power reaches group when the exponent is at least 2");
        }
        if 2 * k > n {
            let square = MaskGroup::product_with_rows(s, &rows);
            inst.check("square covers when 2|S| > n", square == mg.full(), || {
                (vec![("S", set(n, s))], format!("|S^2| = {}", pop(square)))
            });
        } else {
            inst.skip("square covers when 2|S| > n");
        }
        Ok(inst)
    })?;
    let all = report.clause("power reaches group");
    let two = report.clause("power reaches group when the exponent is at least 2");
    if all.tested > all.passing {
        report.notes.push(format!(
            "{} generating sets miss the group at the stated exponent, {} of them with exponent at least 2; \
             the rest have 3|S| > 2|G|, so the exponent is 1 and S itself would have to be the group",
            all.tested - all.passing,
            two.tested - two.passing
        ));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_catalog(max: usize) -> (Catalog, VerifyConfig) {
        let cfg = VerifyConfig {
            max_order: max,
            samples: 500,
            ..VerifyConfig::default()
        };
        (Catalog::builtin().unwrap(), cfg)
    }

    #[test]
    fn classical_passes_on_small_groups() {
        let (cat, cfg) = small_catalog(8);
        let r = check_classical_inequalities(&cat, &cfg).unwrap();
        assert!(r.passed(), "{:?}", r.counterexamples);
        assert!(r.clause("kneser").tested > 0);
        assert!(r.clause("diderrich").tested > r.clause("kneser").tested);
        assert!(r.clause("covering").tested > 0);
    }

    #[test]
    fn periodic_sum_is_skipped() {
        // Z6, A = B = {0,3}: A + B = {0,3} is periodic.
        let g = crate::groups::FiniteGroup::cyclic(6).unwrap();
        let mg = MaskGroup::new(&g);
        let ab = mg.product(0b1001, 0b1001);
        assert_eq!(ab, 0b1001);
        assert_ne!(mg.right_stabilizer(ab), 1);
    }

    #[test]
    fn diderrich_lemma_on_small_groups() {
        let (cat, cfg) = small_catalog(9);
        let r = check_diderrich_lemma(&cat, &cfg).unwrap();
        assert!(r.passed(), "{:?}", r.counterexamples);
    }

    #[test]
    fn decomposition_example() {
        // Z12, S = {0,4,8}: K = S, A = {0,1,4} splits into {0,4} and {1}.
        let g = crate::groups::FiniteGroup::cyclic(12).unwrap();
        let mg = MaskGroup::new(&g);
        let k = mg.generated(0b1_0001_0001);
        assert_eq!(k, 0b1_0001_0001);
        let parts = left_parts(&mg, 0b1_0011, k);
        assert_eq!(parts, vec![0b1_0001, 0b10]);
    }

    #[test]
    fn growth_bounds_hold() {
        let (cat, cfg) = small_catalog(10);
        let r = olson_growth_report(&cat, &cfg).unwrap();
        assert!(r.passed(), "{:?}", r.counterexamples);
    }

    #[test]
    fn orderbase_fails_exactly_where_exponent_is_one() {
        let (cat, cfg) = small_catalog(8);
        let r = check_orderbase(&cat, &cfg).unwrap();
        let mut expected = 0;
        for e in groups_in(&cat, &cfg) {
            let n = e.group.order();
            expected += generating_sets(&e.group)
                .unwrap()
                .iter()
                .filter(|s| 3 * s.len() > 2 * n && s.len() < n)
                .count() as u64;
        }
        let all = r.clause("power reaches group");
        assert_eq!(all.tested - all.passing, expected);
        let two = r.clause("power reaches group when the exponent is at least 2");
        assert!(two.tested > 0 && two.tested == two.passing);
        assert_eq!(r.clause("square covers when 2|S| > n").passing, r.clause("square covers when 2|S| > n").tested);
        assert_eq!(r.counterexamples[0].group, "Z4");
    }
}
