//! Drivers that enumerate tableaux, compute their subdivisions and check
//! the resulting statements, with machine-readable reports.
//!
//! Theorems are gates (`fail`), conjectures are reported as
//! `counterexample`; neither panics.

mod suites;
mod tree;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub use suites::{verify_suite, Suite, SuiteParams, SuiteReport};
pub use tree::{tree_split, TreeSplit};

use crate::hypergeom::{
    certify, edge_directions_ok, regular_subdivision, split_hyperplane, splits_compatible, GeomError, Hypersimplex,
    Subdivision,
};
use crate::subsets;
use crate::tableaux::{classify_column, one_cyclic_gap, ColumnClass, Tableau, TableauError};
use crate::webtrop::{CacheEvent, WebCache, WebError, WebModel, WeightVector, DEFAULT_MAX_MONOMIALS};
use crate::Rational;

#[derive(Debug, thiserror::Error)]
pub enum CensusError {
    #[error(transparent)]
    Tableau(#[from] TableauError),
    #[error(transparent)]
    Web(#[from] WebError),
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error("{{{i},{j}}} is frozen in [{n}]; a split needs j > i+1 and {{i,j}} != {{1,n}}")]
    FrozenPair { i: usize, j: usize, n: usize },
    #[error("{0}")]
    Usage(String),
    #[error("census of Δ({k},{n}) needs {needed} sources but the budget is {cap}; raise --max-sources")]
    Budget { k: usize, n: usize, needed: usize, cap: usize, partial: Box<CensusReport> },
}

/// Web models keyed by `(k, n)`, built once and optionally persisted.
pub struct Models {
    cache: Option<WebCache>,
    max_monomials: u64,
    memo: Mutex<HashMap<(usize, usize), Arc<WebModel>>>,
    events: Mutex<Vec<(usize, usize, CacheEvent)>>,
}

impl Models {
    pub fn in_memory(max_monomials: u64) -> Self {
        Models { cache: None, max_monomials, memo: Mutex::default(), events: Mutex::default() }
    }

    pub fn with_cache(cache: WebCache, max_monomials: u64) -> Self {
        Models { cache: Some(cache), max_monomials, memo: Mutex::default(), events: Mutex::default() }
    }

    /// Cache events since the last call, in request order.
    pub fn take_events(&self) -> Vec<(usize, usize, CacheEvent)> {
        std::mem::take(&mut *self.events.lock().expect("event log"))
    }

    pub fn get(&self, k: usize, n: usize) -> Result<Arc<WebModel>, WebError> {
        if let Some(m) = self.memo.lock().expect("model memo").get(&(k, n)) {
            return Ok(m.clone());
        }
        let model = match &self.cache {
            Some(c) => {
                let (model, event) = c.get_or_build(k, n, self.max_monomials)?;
                self.events.lock().expect("event log").push((k, n, event));
                model
            }
            None => WebModel::build(k, n, self.max_monomials)?,
        };
        let model = Arc::new(model);
        self.memo.lock().expect("model memo").insert((k, n), model.clone());
        Ok(model)
    }

    /// `wt_T` and the induced subdivision.
    pub fn subdivide(&self, t: &Tableau) -> Result<(WeightVector, Subdivision), CensusError> {
        let model = self.get(t.k(), t.n())?;
        let w = model.weight_of(t)?;
        let sub = regular_subdivision(&Hypersimplex::new(t.k(), t.n())?, &w)?;
        Ok((w, sub))
    }
}

impl Default for Models {
    fn default() -> Self {
        Models::in_memory(DEFAULT_MAX_MONOMIALS)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Info,
    Counterexample,
    Fail,
}

impl Verdict {
    pub fn is_ok(self) -> bool {
        matches!(self, Verdict::Pass | Verdict::Info)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub passed: usize,
    pub total: usize,
    pub detail: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<serde_json::Value>,
}

impl Check {
    /// A check whose verdict is `pass` iff no witnesses were collected; a
    /// failure is reported with the given verdict.
    pub fn from_witnesses(
        name: &str,
        on_failure: Verdict,
        total: usize,
        detail: impl Into<String>,
        witnesses: Vec<serde_json::Value>,
    ) -> Check {
        let verdict = if witnesses.is_empty() { Verdict::Pass } else { on_failure };
        Check {
            name: name.into(),
            verdict,
            passed: total - witnesses.len().min(total),
            total,
            detail: detail.into(),
            witnesses: witnesses.into_iter().take(20).collect(),
        }
    }
}

/// Worst verdict among the gating checks; `info` only when nothing gates.
pub fn overall(checks: &[Check]) -> Verdict {
    let gating = checks.iter().map(|c| c.verdict).filter(|v| *v != Verdict::Info).max();
    match gating {
        Some(v) => v,
        None if checks.is_empty() => Verdict::Pass,
        None => Verdict::Info,
    }
}

#[derive(Debug, Clone)]
pub struct CensusOptions {
    /// Upper bound on the number of one-column sources, `C(n,k)`.
    pub max_sources: usize,
    /// Run the independent certification pass on each distinct subdivision.
    pub certify: bool,
    /// Run the LP compatibility test on all pairs of distinct splits.
    pub compatibility: bool,
    pub timing: bool,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions { max_sources: 70, certify: true, compatibility: true, timing: false }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SourceRecord {
    pub column: String,
    pub class: ColumnClass,
    pub one_gap: bool,
    pub cells: usize,
    pub split: bool,
    pub coarsest: bool,
    pub affine_dim: usize,
    /// Index into the distinct subdivisions, in order of first appearance.
    pub subdivision: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CompatibilityStats {
    pub pairs: usize,
    pub compatible: usize,
    pub incompatible: usize,
    /// A few incompatible pairs, as source columns.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub incompatible_examples: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CensusReport {
    pub k: usize,
    pub n: usize,
    pub scope: String,
    pub tableau_count: usize,
    pub processed: usize,
    pub distinct_subdivisions: usize,
    pub split_count: usize,
    pub coarsest_count: usize,
    pub formula: u64,
    pub verdict: Verdict,
    pub checks: Vec<Check>,
    pub compatibility: Option<CompatibilityStats>,
    /// Columns whose subdivision is coarsest, for manual inspection.
    pub coarsest_witnesses: Vec<String>,
    /// Number of distinct subdivisions by cell count.
    pub cell_histogram: BTreeMap<usize, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
    pub sources: Vec<SourceRecord>,
}

impl CensusReport {
    pub fn passed(&self) -> bool {
        self.verdict.is_ok()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("column,class,one_gap,cells,split,coarsest,affine_dim,subdivision\n");
        for r in &self.sources {
            s.push_str(&format!(
                "\"{}\",{},{},{},{},{},{},{}\n",
                r.column, r.class, r.one_gap, r.cells, r.split, r.coarsest, r.affine_dim, r.subdivision
            ));
        }
        s
    }
}

/// `(k-1) n (n-k-1) / 2`.
pub fn split_formula(k: usize, n: usize) -> u64 {
    if n < k + 1 {
        return 0;
    }
    ((k as u64 - 1) * n as u64 * (n - k - 1) as u64) / 2
}

/// The two maximal cells of the split of Δ(2,n) labelled by `{i, j}`, as
/// listed by paths through the two internal vertices of the tree:
/// `{(s,t) : s ≤ i, t ∈ [i+1,j]} ∪ {(s,t) : i < s ≤ j, t > s}` and
/// `{(s,t) : s ≤ i, t > s} ∪ {(s,t) : s > i, t > j, s < t}`.
pub fn split_cells_formula(n: usize, i: usize, j: usize) -> [Vec<Vec<usize>>; 2] {
    let mut a = Vec::new();
    for s in 1..=i {
        for t in i + 1..=j {
            a.push(vec![s, t]);
        }
    }
    for s in i + 1..=j {
        for t in s + 1..=n {
            a.push(vec![s, t]);
        }
    }
    let mut b = Vec::new();
    for s in 1..=i {
        for t in s + 1..=n {
            b.push(vec![s, t]);
        }
    }
    for s in i + 1..=n {
        for t in (j + 1).max(s + 1)..=n {
            b.push(vec![s, t]);
        }
    }
    a.sort();
    b.sort();
    a.dedup();
    b.dedup();
    [a, b]
}

/// Outcome of [`certify_subdivisions`] for one source.
struct CertOutcome {
    certificate: Option<String>,
    shift: bool,
}

/// Engine certification over labelled subdivisions: certificates, ridges,
/// covering, affine-shift invariance of canonical keys, and for `n ≤
/// edge_max_n` the edge oracle on every distinct cell.
pub fn certification_check(subs: &[(String, &Subdivision)], seed: u64, edge_max_n: usize) -> Check {
    let outcomes: Vec<CertOutcome> = subs
        .par_iter()
        .enumerate()
        .map(|(idx, (_, sub))| {
            let certificate = certify(sub).err().map(|e| e.to_string());
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(idx as u64));
            let n = sub.n();
            let lambda: Vec<Rational> = (0..n).map(|_| int(rng.gen_range(-5..=5))).collect();
            let c = int(rng.gen_range(-5..=5));
            let shifted = sub.weight().add_affine(&lambda, &c);
            let shift = regular_subdivision(sub.hypersimplex(), &shifted)
                .map(|s| s.canonical_key() == sub.canonical_key())
                .unwrap_or(false);
            CertOutcome { certificate, shift }
        })
        .collect();

    // distinct cells for the edge oracle
    let mut cells: BTreeMap<(usize, usize, Vec<usize>), usize> = BTreeMap::new();
    for (idx, (_, sub)) in subs.iter().enumerate() {
        if sub.n() <= edge_max_n {
            for cell in sub.cells() {
                cells.entry((sub.k(), sub.n(), cell.bases.clone())).or_insert(idx);
            }
        }
    }
    let cell_list: Vec<_> = cells.into_iter().collect();
    let edge_failures: Vec<serde_json::Value> = cell_list
        .par_iter()
        .filter_map(|((k, n, bases), idx)| {
            let h = Hypersimplex::new(*k, *n).expect("valid shape");
            (!edge_directions_ok(&h, bases)).then(|| {
                serde_json::json!({"source": subs[*idx].0, "check": "edges", "cell": h.render_cell(bases)})
            })
        })
        .collect();

    let mut witnesses = Vec::new();
    for ((label, _), o) in subs.iter().zip(&outcomes) {
        if let Some(e) = &o.certificate {
            witnesses.push(serde_json::json!({"source": label, "check": "certificate", "error": e}));
        }
        if !o.shift {
            witnesses.push(serde_json::json!({"source": label, "check": "affine-shift"}));
        }
    }
    witnesses.extend(edge_failures);
    let total = 2 * subs.len() + cell_list.len();
    Check::from_witnesses(
        "engine-certification",
        Verdict::Fail,
        total,
        format!(
            "{} subdivisions certified and shift-tested; {} distinct cells edge-checked (n <= {edge_max_n})",
            subs.len(),
            cell_list.len()
        ),
        witnesses,
    )
}

fn int(x: i64) -> Rational {
    Rational::from_integer(num_bigint::BigInt::from(x))
}

/// Enumerates all one-column tableaux of `SSYT(k, [n])`, computes their
/// subdivisions, dedups them by canonical key and counts splits.
pub fn split_census(models: &Models, k: usize, n: usize, opts: &CensusOptions) -> Result<CensusReport, CensusError> {
    let start = Instant::now();
    let all = subsets::k_subsets(n, k);
    let sources: Vec<Vec<usize>> = all.iter().take(opts.max_sources).cloned().collect();
    let model = models.get(k, n)?;
    let h = Hypersimplex::new(k, n)?;

    let computed: Vec<Result<(Vec<usize>, Subdivision), CensusError>> = sources
        .par_iter()
        .map(|col| {
            let t = Tableau::column(k, n, col)?;
            let w = model.weight_of(&t)?;
            Ok((col.clone(), regular_subdivision(&h, &w)?))
        })
        .collect();
    let computed: Vec<(Vec<usize>, Subdivision)> = computed.into_iter().collect::<Result<_, _>>()?;

    let mut key_index: HashMap<String, usize> = HashMap::new();
    let mut distinct: Vec<(String, &Subdivision)> = Vec::new();
    let mut records = Vec::new();
    let mut gap_witnesses = Vec::new();
    let mut positroid_witnesses = Vec::new();
    let mut one_gap_columns = 0;
    for (col, sub) in &computed {
        let key = sub.canonical_key();
        let label = subsets::render(col);
        let idx = *key_index.entry(key).or_insert_with(|| {
            distinct.push((label.clone(), sub));
            distinct.len() - 1
        });
        let cls = sub.classification();
        let gap = one_cyclic_gap(col, n);
        one_gap_columns += usize::from(gap);
        if gap != cls.is_split {
            gap_witnesses.push(serde_json::json!({"column": label, "oneGap": gap, "cells": cls.cell_count}));
        }
        if !cls.is_positroidal {
            positroid_witnesses.push(serde_json::json!({"column": label}));
        }
        records.push(SourceRecord {
            column: label,
            class: classify_column(col, k, n)?,
            one_gap: gap,
            cells: cls.cell_count,
            split: cls.is_split,
            coarsest: cls.is_coarsest,
            affine_dim: cls.affine_dim,
            subdivision: idx,
        });
    }

    let splits: Vec<&(String, &Subdivision)> =
        distinct.iter().filter(|(_, s)| s.classification().is_split).collect();
    let split_count = splits.len();
    let coarsest_count = distinct.iter().filter(|(_, s)| s.classification().is_coarsest).count();
    let formula = split_formula(k, n);
    let mut histogram = BTreeMap::new();
    for (_, s) in &distinct {
        *histogram.entry(s.cells().len()).or_insert(0) += 1;
    }

    let mut checks = Vec::new();
    let complete = sources.len() == all.len();
    checks.push(Check {
        name: "split-count-formula".into(),
        verdict: if !complete {
            Verdict::Info
        } else if split_count as u64 == formula {
            Verdict::Pass
        } else {
            Verdict::Counterexample
        },
        passed: usize::from(split_count as u64 == formula),
        total: 1,
        detail: format!("{split_count} distinct splits, formula (k-1)n(n-k-1)/2 = {formula}"),
        witnesses: Vec::new(),
    });
    let mut gap_check = Check::from_witnesses(
        "split-iff-one-gap",
        Verdict::Counterexample,
        records.len(),
        format!("{one_gap_columns} one-gap columns, {split_count} distinct splits"),
        gap_witnesses,
    );
    if gap_check.verdict == Verdict::Pass && one_gap_columns != split_count {
        gap_check.verdict = Verdict::Counterexample;
        gap_check.detail.push_str("; distinct one-gap columns share a split");
    }
    checks.push(gap_check);
    checks.push(Check::from_witnesses(
        "positroidal",
        Verdict::Fail,
        records.len(),
        "every induced subdivision is positroidal",
        positroid_witnesses,
    ));
    if opts.certify {
        checks.push(certification_check(&distinct, 0x5eed, 6));
    }

    let compatibility = opts.compatibility.then(|| {
        let hyper: Vec<(String, _)> = splits
            .iter()
            .map(|(label, s)| (label.clone(), split_hyperplane(s).expect("split has a wall")))
            .collect();
        let pairs: Vec<(usize, usize)> =
            (0..hyper.len()).flat_map(|a| (a + 1..hyper.len()).map(move |b| (a, b))).collect();
        let verdicts: Vec<bool> =
            pairs.par_iter().map(|&(a, b)| splits_compatible(k, n, &hyper[a].1, &hyper[b].1)).collect();
        let mut stats = CompatibilityStats { pairs: pairs.len(), ..Default::default() };
        for (&(a, b), ok) in pairs.iter().zip(verdicts) {
            if ok {
                stats.compatible += 1;
            } else {
                stats.incompatible += 1;
                if stats.incompatible_examples.len() < 5 {
                    stats.incompatible_examples.push((hyper[a].0.clone(), hyper[b].0.clone()));
                }
            }
        }
        stats
    });
    if let Some(stats) = &compatibility {
        checks.push(Check {
            name: "split-compatibility".into(),
            verdict: Verdict::Info,
            passed: stats.compatible,
            total: stats.pairs,
            detail: format!("{} of {} split pairs have hyperplanes avoiding the interior", stats.compatible, stats.pairs),
            witnesses: Vec::new(),
        });
    }

    let coarsest_witnesses = records.iter().filter(|r| r.coarsest).map(|r| r.column.clone()).collect();
    let report = CensusReport {
        k,
        n,
        scope: "one-column tableaux".into(),
        tableau_count: all.len(),
        processed: sources.len(),
        distinct_subdivisions: distinct.len(),
        split_count,
        coarsest_count,
        formula,
        // a partial report never claims pass
        verdict: if complete { overall(&checks) } else { overall(&checks).max(Verdict::Info) },
        checks,
        compatibility,
        coarsest_witnesses,
        cell_histogram: histogram,
        elapsed_ms: opts.timing.then(|| start.elapsed().as_millis() as u64),
        sources: records,
    };
    if !complete {
        return Err(CensusError::Budget {
            k,
            n,
            needed: all.len(),
            cap: opts.max_sources,
            partial: Box::new(report),
        });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_values() {
        let expected = [((2, 4), 2), ((2, 5), 5), ((2, 6), 9), ((3, 7), 21), ((3, 8), 32), ((4, 8), 36)];
        for ((k, n), v) in expected {
            assert_eq!(split_formula(k, n), v);
        }
    }

    #[test]
    fn split_formula_cells_match_interval_form() {
        for n in 4..=8 {
            for i in 1..n {
                for j in i + 2..=n {
                    if i == 1 && j == n {
                        continue;
                    }
                    let [a, b] = split_cells_formula(n, i, j);
                    let hits = |s: &Vec<usize>| s.iter().filter(|&&x| x > i && x <= j).count();
                    let all = subsets::k_subsets(n, 2);
                    let ia: Vec<_> = all.iter().filter(|s| hits(s) >= 1).cloned().collect();
                    let ib: Vec<_> = all.iter().filter(|s| hits(s) <= 1).cloned().collect();
                    assert_eq!((a, b), (ia, ib), "n={n} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn census_small() {
        let models = Models::default();
        let r = split_census(&models, 2, 5, &CensusOptions::default()).unwrap();
        assert_eq!((r.split_count, r.formula), (5, 5));
        assert!(r.passed(), "{:?}", r.checks);
        let stats = r.compatibility.unwrap();
        assert_eq!(stats.pairs, 10);
        assert_eq!(stats.incompatible, 5);
        let limited = CensusOptions { max_sources: 3, ..Default::default() };
        match split_census(&models, 2, 5, &limited) {
            Err(CensusError::Budget { partial, .. }) => assert_eq!(partial.processed, 3),
            other => panic!("{other:?}"),
        }
    }
}
