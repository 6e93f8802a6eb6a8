//! Runs every theorem oracle over a family of QRTs and tabulates the outcome.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::generate::{random_relabeling, random_sub_qrt};
use crate::kripke::{is_s4, models_isomorphic, s4_counterexample, KripkeError, KripkeModel};
use crate::logic::{check_theorem5, is_resource_preserving};
use crate::qrt::Qrt;
use crate::smc::{build_smc, verify_smc_laws, LawStatus, DEFAULT_OBJECT_CAP, DEFAULT_TRIPLE_BUDGET};
use crate::translate::{
    check_thm3_conditions, check_thm4_conditions, functor_f_star, verify_fstar_injectivity,
    verify_functoriality, InjectivityStatus, TranslateError, TranslationRecord,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarnessOptions {
    /// Seeds the relabelings and sub-QRTs drawn for functoriality.
    pub seed: u64,
    pub relabelings: usize,
    pub sub_qrts: usize,
    pub smc_object_cap: usize,
    pub smc_triple_budget: u64,
}

impl Default for HarnessOptions {
    fn default() -> Self {
        HarnessOptions {
            seed: 1,
            relabelings: 3,
            sub_qrts: 2,
            smc_object_cap: DEFAULT_OBJECT_CAP,
            smc_triple_budget: DEFAULT_TRIPLE_BUDGET,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Passed,
    Inconclusive,
    Falsified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Section {
    pub name: &'static str,
    pub status: Status,
    pub checked: usize,
    pub inconclusive: usize,
    pub failures: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Section {
    fn new(name: &'static str) -> Self {
        Section {
            name,
            status: Status::Passed,
            checked: 0,
            inconclusive: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(describe());
        }
    }

    fn undecided(&mut self, note: String) {
        self.checked += 1;
        self.inconclusive += 1;
        self.notes.push(note);
    }

    fn finish(mut self) -> Self {
        self.status = if !self.failures.is_empty() {
            Status::Falsified
        } else if self.inconclusive > 0 {
            Status::Inconclusive
        } else {
            Status::Passed
        };
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremsReport {
    pub family: Vec<String>,
    pub sections: Vec<Section>,
    /// Members whose `F`-image fails the converse of the free-to-free schema.
    pub resource_destroying: Vec<String>,
}

impl TheoremsReport {
    pub fn status(&self) -> Status {
        self.sections.iter().map(|s| s.status).max().unwrap_or(Status::Passed)
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    /// 0 pass, 1 falsified, 3 inconclusive.
    pub fn exit_code(&self) -> i32 {
        match self.status() {
            Status::Passed => 0,
            Status::Falsified => 1,
            Status::Inconclusive => 3,
        }
    }
}

/// Inputs checked alongside the family.
#[derive(Debug, Clone, Default)]
pub struct Injected {
    /// Checked against the necessary conditions for being an `F`-image.
    pub models: Vec<(String, KripkeModel)>,
    /// Checked against the free-to-free schema.
    pub records: Vec<(String, TranslationRecord)>,
    /// Extra injectivity pairs.
    pub pairs: Vec<(String, Qrt, Qrt)>,
}

/// Runs the oracles over `family` and the injected inputs.
pub fn run_theorems(
    family: &[(String, Qrt)],
    injected: &Injected,
    options: &HarnessOptions,
) -> Result<TheoremsReport, TranslateError> {
    let records: Vec<TranslationRecord> = family
        .par_iter()
        .map(|(_, q)| functor_f_star(q))
        .collect::<Result<_, _>>()?;
    let label = |i: usize| family[i].0.clone();

    let mut s4 = Section::new("s4");
    for (i, rec) in records.iter().enumerate() {
        s4.check(is_s4(&rec.model), || format!("{}: {:?}", label(i), s4_counterexample(&rec.model)));
    }

    let mut functoriality = Section::new("functoriality");
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut inputs = Vec::with_capacity(family.len());
    for (_, q) in family {
        let relabeled: Vec<Qrt> = (0..options.relabelings)
            .map(|_| random_relabeling(q, &mut rng))
            .collect::<Result<_, _>>()?;
        let subs: Vec<Qrt> = (0..options.sub_qrts)
            .map(|_| random_sub_qrt(q, &mut rng))
            .collect::<Result<_, _>>()?;
        inputs.push((relabeled, subs));
    }
    let reports: Vec<_> = family
        .par_iter()
        .zip(inputs.par_iter())
        .map(|((_, q), (r, s))| verify_functoriality(q, r, s))
        .collect();
    for (i, r) in reports.into_iter().enumerate() {
        let r = match r {
            Err(TranslateError::Kripke(KripkeError::ResourceLimit(msg))) => {
                functoriality.undecided(format!("{}: {msg}", label(i)));
                continue;
            }
            r => r?,
        };
        for c in &r.checks {
            functoriality.check(c.passed, || {
                format!("{}: {} {}: {}", label(i), c.kind, c.subject, c.detail.clone().unwrap_or_default())
            });
        }
    }

    let mut thm3 = Section::new("thm3_equivalence");
    let index_pairs: Vec<(usize, usize)> = (0..family.len())
        .flat_map(|i| (i..family.len()).map(move |j| (i, j)))
        .collect();
    let verdicts: Vec<Result<(bool, Option<bool>), TranslateError>> = index_pairs
        .par_iter()
        .map(|&(i, j)| {
            let conditions = check_thm3_conditions(&family[i].1, &family[j].1)?.all();
            let cap = family[i].1.tolerances().max_iso_nodes;
            match models_isomorphic(&records[i].model, &records[j].model, cap) {
                Ok(w) => Ok((conditions, Some(w.is_some()))),
                Err(KripkeError::ResourceLimit(_)) => Ok((conditions, None)),
                Err(e) => Err(e.into()),
            }
        })
        .collect();
    for (&(i, j), v) in index_pairs.iter().zip(verdicts) {
        match v? {
            (cond, Some(iso)) => thm3.check(cond == iso, || {
                format!("{} vs {}: conditions {cond}, F-images isomorphic {iso}", label(i), label(j))
            }),
            (_, None) => thm3.undecided(format!("{} vs {}: model isomorphism search cap", label(i), label(j))),
        }
    }

    let mut thm4 = Section::new("thm4_necessity");
    for (i, rec) in records.iter().enumerate() {
        let r = check_thm4_conditions(&rec.model);
        let needs_c = family[i].1.trivial().is_some();
        thm4.check(r.i && (r.ii || !needs_c), || format!("{}: (i) {} (ii) {}", label(i), r.i, r.ii));
    }
    for (name, m) in &injected.models {
        let r = check_thm4_conditions(m);
        thm4.check(r.i && r.ii, || format!("{name}: (i) {} (ii) {}", r.i, r.ii));
    }

    let mut thm5 = Section::new("thm5_free_to_free");
    let mut monotone = Section::new("resource_monotonicity");
    let mut resource_destroying = Vec::new();
    for (i, rec) in records.iter().enumerate() {
        let r = check_theorem5(rec).map_err(|e| TranslateError::InvalidSource(e.to_string()))?;
        for inst in &r.instances {
            thm5.check(inst.valid, || format!("{}: {} fails at {:?}", label(i), inst.formula, inst.failing_world));
        }
        for e in &rec.edges {
            let truth = |a: &str| rec.model.truth(rec.model.atom_index(a).expect("edge atoms exist"));
            monotone.check(!truth(&e.from) || truth(&e.to), || {
                format!("{}: {} maps free {} to resource {}", label(i), e.channel, e.from, e.to)
            });
        }
        let rp = is_resource_preserving(rec).map_err(|e| TranslateError::InvalidSource(e.to_string()))?;
        if !rp.preserving {
            resource_destroying.push(label(i));
        }
    }
    for (name, rec) in &injected.records {
        let r = check_theorem5(rec).map_err(|e| TranslateError::InvalidSource(e.to_string()))?;
        for inst in &r.instances {
            thm5.check(inst.valid, || format!("{name}: {} fails at {:?}", inst.formula, inst.failing_world));
        }
    }

    let mut thm6 = Section::new("fstar_injectivity");
    let mut all_pairs: Vec<(String, Qrt, Qrt)> = index_pairs
        .iter()
        .map(|&(i, j)| (format!("{} vs {}", label(i), label(j)), family[i].1.clone(), family[j].1.clone()))
        .collect();
    all_pairs.extend(injected.pairs.iter().cloned());
    let entries: Vec<_> = all_pairs
        .par_chunks(1)
        .map(verify_fstar_injectivity)
        .collect::<Result<Vec<_>, _>>()?;
    for e in entries.into_iter().flat_map(|r| r.entries) {
        match e.status {
            InjectivityStatus::Inconclusive => thm6.undecided(format!("{}: {}", e.label, e.note.unwrap_or_default())),
            status => thm6.check(status == InjectivityStatus::Consistent, || {
                format!(
                    "{}: starred-isomorphic {:?}, labeled-isomorphic {:?}{}",
                    e.label,
                    e.starred_isomorphic,
                    e.labeled_isomorphic,
                    e.note.map(|n| format!(" ({n})")).unwrap_or_default()
                )
            }),
        }
    }

    let mut smc = Section::new("smc_laws");
    let smc_reports: Vec<_> = records
        .par_iter()
        .enumerate()
        .filter_map(|(i, rec)| {
            let sm = rec.starred().expect("F* records carry an order");
            rec.c_world.as_ref()?;
            Some((i, build_smc(&sm, options.smc_object_cap).map(|c| verify_smc_laws(&c, options.smc_triple_budget))))
        })
        .collect();
    for (i, r) in smc_reports {
        match r {
            Ok(report) => {
                for law in &report.laws {
                    match law.status {
                        LawStatus::Inconclusive => smc.undecided(format!("{}: {} stopped at the triple budget", label(i), law.law)),
                        s => smc.check(s == LawStatus::Passed, || {
                            format!("{}: {} ({} violations, e.g. {})", label(i), law.law, law.violations, law.example.clone().unwrap_or_default())
                        }),
                    }
                }
            }
            Err(e) => smc.check(false, || format!("{}: {e}", label(i))),
        }
    }

    Ok(TheoremsReport {
        family: family.iter().map(|(n, _)| n.clone()).collect(),
        sections: vec![
            s4.finish(),
            functoriality.finish(),
            thm3.finish(),
            thm4.finish(),
            thm5.finish(),
            monotone.finish(),
            thm6.finish(),
            smc.finish(),
        ],
        resource_destroying,
    })
}
