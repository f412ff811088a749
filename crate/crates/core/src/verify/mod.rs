//! Catalog sweeps that test structural statements about sumsets and Cayley
//! graphs against the exact invariants computed by [`crate::iso`] and
//! [`crate::menger`].
//!
//! Each checker walks a family of instances, filters them by the statement's
//! hypotheses and asserts its conclusion clause by clause. Instances failing
//! every hypothesis are counted as skipped. Any recorded counterexample means
//! the implementation disagrees with a proved statement.

mod atoms;
mod graphs;
pub(crate) mod masks;
mod sumsets;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::{generating_sets, Catalog, CatalogEntry};
use crate::set::ElementSet;

pub use atoms::{zemor_candidates, zemor_witness, ZemorWitness};

/// At most this many counterexamples are stored per report; the tallies
/// still count every failure.
pub const COUNTEREXAMPLE_CAP: usize = 50;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyConfig {
    pub max_order: usize,
    pub seed: u64,
    /// Pairs sampled per group once exhaustive enumeration is off.
    pub samples: usize,
    /// Pair checks enumerate every pair in groups up to this order.
    pub exhaustive_pair_order: usize,
    /// Random digraphs used by the Menger checker.
    pub random_graphs: usize,
    /// Random digraphs used by the duality checker.
    pub duality_graphs: usize,
    pub timings: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            max_order: 12,
            seed: 0,
            samples: 10_000,
            exhaustive_pair_order: 8,
            random_graphs: 500,
            duality_graphs: 1000,
            timings: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    OneAtom,
    Olson,
    OrderBase,
    DiderrichLemma,
    SmallSets,
    AbelianTwoAtoms,
    Superatoms,
    Classical,
    Duality,
    Fragments,
    Menger,
    StrongIso,
}

impl TheoremId {
    pub const ALL: [TheoremId; 12] = [
        TheoremId::OneAtom,
        TheoremId::Olson,
        TheoremId::OrderBase,
        TheoremId::DiderrichLemma,
        TheoremId::SmallSets,
        TheoremId::AbelianTwoAtoms,
        TheoremId::Superatoms,
        TheoremId::Classical,
        TheoremId::Duality,
        TheoremId::Fragments,
        TheoremId::Menger,
        TheoremId::StrongIso,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::OneAtom => "one-atom",
            TheoremId::Olson => "olson",
            TheoremId::OrderBase => "orderbase",
            TheoremId::DiderrichLemma => "diderrich-lemma",
            TheoremId::SmallSets => "small-sets",
            TheoremId::AbelianTwoAtoms => "abelian-two-atoms",
            TheoremId::Superatoms => "superatoms",
            TheoremId::Classical => "classical",
            TheoremId::Duality => "duality",
            TheoremId::Fragments => "fragments",
            TheoremId::Menger => "menger",
            TheoremId::StrongIso => "strong-iso",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown checker '{s}'")))
    }
}

/// `all` or a single checker.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selection {
    All,
    One(TheoremId),
}

impl FromStr for Selection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "all" {
            Ok(Selection::All)
        } else {
            s.parse().map(Selection::One)
        }
    }
}

impl Selection {
    pub fn ids(self) -> Vec<TheoremId> {
        match self {
            Selection::All => TheoremId::ALL.to_vec(),
            Selection::One(id) => vec![id],
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ClauseTally {
    pub tested: u64,
    pub passing: u64,
    pub skipped: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub group: String,
    pub clause: String,
    pub sets: BTreeMap<String, ElementSet>,
    pub observed: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub theorem_id: String,
    pub instances_tested: u64,
    pub instances_passing: u64,
    pub instances_skipped: u64,
    pub clauses: BTreeMap<String, ClauseTally>,
    pub counterexamples: Vec<Counterexample>,
    pub notes: Vec<String>,
    pub notes_omitted: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl CheckReport {
    pub fn new(id: &str) -> Self {
        Self {
            theorem_id: id.to_string(),
            instances_tested: 0,
            instances_passing: 0,
            instances_skipped: 0,
            clauses: BTreeMap::new(),
            counterexamples: Vec::new(),
            notes: Vec::new(),
            notes_omitted: 0,
            elapsed_ms: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.instances_passing == self.instances_tested && self.failures() == 0
    }

    /// Failed clause evaluations, including those beyond the stored cap.
    pub fn failures(&self) -> u64 {
        self.clauses.values().map(|c| c.tested - c.passing).sum()
    }

    pub fn clause(&self, name: &str) -> ClauseTally {
        self.clauses.get(name).cloned().unwrap_or_default()
    }

    pub(crate) fn absorb(&mut self, inst: Instance) {
        let mut any_tested = false;
        let mut all_pass = true;
        for (clause, outcome) in inst.outcomes {
            let tally = self.clauses.entry(clause.to_string()).or_default();
            match outcome {
                Outcome::Skip => tally.skipped += 1,
                Outcome::Pass => {
                    tally.tested += 1;
                    tally.passing += 1;
                    any_tested = true;
                }
                Outcome::Fail { sets, observed } => {
                    tally.tested += 1;
                    any_tested = true;
                    all_pass = false;
                    if self.counterexamples.len() < COUNTEREXAMPLE_CAP {
                        self.counterexamples.push(Counterexample {
                            group: inst.group.clone(),
                            clause: clause.to_string(),
                            sets: sets.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
                            observed,
                        });
                    }
                }
            }
        }
        if any_tested {
            self.instances_tested += 1;
            if all_pass {
                self.instances_passing += 1;
            }
        } else {
            self.instances_skipped += 1;
        }
        for note in inst.notes {
            if self.notes.len() < COUNTEREXAMPLE_CAP {
                self.notes.push(note);
            } else {
                self.notes_omitted += 1;
            }
        }
    }

    /// Appends the instances and notes of `other`, keeping this report's id.
    pub fn merge(&mut self, other: CheckReport) {
        self.instances_tested += other.instances_tested;
        self.instances_passing += other.instances_passing;
        self.instances_skipped += other.instances_skipped;
        for (name, t) in other.clauses {
            let tally = self.clauses.entry(name).or_default();
            tally.tested += t.tested;
            tally.passing += t.passing;
            tally.skipped += t.skipped;
        }
        let room = COUNTEREXAMPLE_CAP.saturating_sub(self.counterexamples.len());
        self.counterexamples.extend(other.counterexamples.into_iter().take(room));
        self.notes.extend(other.notes);
        self.notes_omitted += other.notes_omitted;
    }
}

pub(crate) enum Outcome {
    Pass,
    Skip,
    Fail {
        sets: Vec<(&'static str, ElementSet)>,
        observed: String,
    },
}

/// Clause outcomes for one instance, in evaluation order.
pub(crate) struct Instance {
    group: String,
    outcomes: Vec<(&'static str, Outcome)>,
    notes: Vec<String>,
}

impl Instance {
    pub(crate) fn new(group: &str) -> Self {
        Self {
            group: group.to_string(),
            outcomes: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub(crate) fn skip(&mut self, clause: &'static str) {
        self.outcomes.push((clause, Outcome::Skip));
    }

    pub(crate) fn check(
        &mut self,
        clause: &'static str,
        ok: bool,
        witness: impl FnOnce() -> (Vec<(&'static str, ElementSet)>, String),
    ) {
        let outcome = if ok {
            Outcome::Pass
        } else {
            let (sets, observed) = witness();
            Outcome::Fail { sets, observed }
        };
        self.outcomes.push((clause, outcome));
    }

    pub(crate) fn note(&mut self, text: String) {
        self.notes.push(text);
    }
}

/// Evaluates `f` on every job in parallel and folds the instances into a
/// report in job order, so the result does not depend on scheduling.
pub(crate) fn sweep<J, F>(id: TheoremId, jobs: &[J], f: F) -> Result<CheckReport>
where
    J: Sync,
    F: Fn(&J) -> Result<Instance> + Sync,
{
    let instances: Vec<Instance> = jobs.par_iter().map(&f).collect::<Result<_>>()?;
    let mut report = CheckReport::new(id.as_str());
    for inst in instances {
        report.absorb(inst);
    }
    Ok(report)
}

/// Instances produced by one job, plus a count of candidates the job
/// rejected on its hypotheses without building an [`Instance`].
#[derive(Default)]
pub(crate) struct Batch {
    pub(crate) instances: Vec<Instance>,
    pub(crate) skipped: u64,
}

pub(crate) fn sweep_batches<J, F>(id: TheoremId, jobs: &[J], f: F) -> Result<CheckReport>
where
    J: Sync,
    F: Fn(&J) -> Result<Batch> + Sync,
{
    let batches: Vec<Batch> = jobs.par_iter().map(&f).collect::<Result<_>>()?;
    let mut report = CheckReport::new(id.as_str());
    for batch in batches {
        report.instances_skipped += batch.skipped;
        for inst in batch.instances {
            report.absorb(inst);
        }
    }
    Ok(report)
}

/// `(group, S)` for every generating `S ∋ 1` of every group up to
/// `cfg.max_order` accepted by `keep`.
pub(crate) fn generating_jobs<'a>(
    catalog: &'a Catalog,
    cfg: &VerifyConfig,
    keep: impl Fn(&CatalogEntry) -> bool,
) -> Result<Vec<(&'a CatalogEntry, ElementSet)>> {
    let mut jobs = Vec::new();
    for entry in groups_in(catalog, cfg) {
        if keep(entry) {
            for s in generating_sets(&entry.group)? {
                jobs.push((entry, s));
            }
        }
    }
    Ok(jobs)
}

/// Catalog entries of order at most `cfg.max_order`.
pub(crate) fn groups_in<'a>(catalog: &'a Catalog, cfg: &VerifyConfig) -> Vec<&'a CatalogEntry> {
    catalog.iter().filter(|e| e.group.order() <= cfg.max_order).collect()
}

/// A per-group seed derived from the run seed and the group's position.
pub(crate) fn group_seed(cfg: &VerifyConfig, id: TheoremId, index: usize) -> u64 {
    let tag = id as u64;
    cfg.seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(tag << 32)
        .wrapping_add(index as u64)
}

pub fn run_checker(id: TheoremId, catalog: &Catalog, cfg: &VerifyConfig) -> Result<CheckReport> {
    let start = Instant::now();
    let mut report = match id {
        TheoremId::OneAtom => atoms::check_one_atom_structure(catalog, cfg),
        TheoremId::Olson => atoms::check_olson(catalog, cfg),
        TheoremId::OrderBase => sumsets::check_orderbase(catalog, cfg),
        TheoremId::DiderrichLemma => sumsets::check_diderrich_lemma(catalog, cfg),
        TheoremId::SmallSets => atoms::check_small_sets(catalog, cfg),
        TheoremId::AbelianTwoAtoms => atoms::check_abelian_two_atoms(catalog, cfg),
        TheoremId::Superatoms => atoms::check_superatoms(catalog, cfg),
        TheoremId::Classical => sumsets::check_classical_inequalities(catalog, cfg),
        TheoremId::Duality => graphs::check_duality_sweep(catalog, cfg),
        TheoremId::Fragments => graphs::check_fragment_laws(catalog, cfg),
        TheoremId::Menger => graphs::check_menger(catalog, cfg),
        TheoremId::StrongIso => graphs::check_strong_iso(catalog, cfg),
    }?;
    if cfg.timings {
        report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

/// Runs the selected checkers in their fixed order.
pub fn run(selection: Selection, catalog: &Catalog, cfg: &VerifyConfig) -> Result<Vec<CheckReport>> {
    selection.ids().into_iter().map(|id| run_checker(id, catalog, cfg)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for id in TheoremId::ALL {
            assert_eq!(id.as_str().parse::<TheoremId>().unwrap(), id);
        }
        assert_eq!("all".parse::<Selection>().unwrap(), Selection::All);
        assert!("nonsense".parse::<Selection>().is_err());
    }

    #[test]
    fn report_tallies() {
        let mut r = CheckReport::new("demo");
        let mut a = Instance::new("Z2");
        a.check("c", true, || unreachable!());
        r.absorb(a);
        let mut b = Instance::new("Z2");
        b.skip("c");
        r.absorb(b);
        let mut c = Instance::new("Z3");
        c.check("c", false, || (vec![("S", ElementSet::full(3))], "bad".into()));
        c.check("d", true, || unreachable!());
        r.absorb(c);
        assert_eq!(r.instances_tested, 2);
        assert_eq!(r.instances_passing, 1);
        assert_eq!(r.instances_skipped, 1);
        assert_eq!(r.clause("c"), ClauseTally { tested: 2, passing: 1, skipped: 1 });
        assert_eq!(r.counterexamples[0].group, "Z3");
        assert!(!r.passed());
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"S\":[0,1,2]"));
        assert!(!json.contains("elapsed"));
    }
}
