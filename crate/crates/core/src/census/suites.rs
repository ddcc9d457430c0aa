//! Named verification suites.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{certification_check, overall, split_cells_formula, tree_split, CensusError, Check, Models, Verdict};
use crate::hypergeom::{is_matroid, is_positroid, split_hyperplane, Subdivision};
use crate::subsets;
use crate::tableaux::{nonfrozen_prime_k2, weakly_separated, ws_column_decomposition, Tableau, WS_SEARCH_CAP};
use crate::webtrop::{three_term_violations, WeightVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Splits2n,
    Gr38Noncoarsest,
    Additivity,
    PositroidalRandom,
    Fixtures,
}

impl Suite {
    pub const ALL: [Suite; 5] =
        [Suite::Splits2n, Suite::Gr38Noncoarsest, Suite::Additivity, Suite::PositroidalRandom, Suite::Fixtures];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Splits2n => "splits-2n",
            Suite::Gr38Noncoarsest => "gr38-noncoarsest",
            Suite::Additivity => "additivity",
            Suite::PositroidalRandom => "positroidal-random",
            Suite::Fixtures => "fixtures",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = CensusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| CensusError::Usage(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone)]
pub struct SuiteParams {
    /// Values of `n` for `splits-2n` (default 4..=8).
    pub n_values: Option<Vec<usize>>,
    /// Sample count for the random suites (default 200).
    pub samples: Option<usize>,
    pub seed: u64,
    /// Largest `n` at which the edge oracle runs.
    pub edge_max_n: usize,
    pub certify: bool,
    pub timing: bool,
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams { n_values: None, samples: None, seed: 1729, edge_max_n: 6, certify: true, timing: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SuiteReport {
    pub suite: Suite,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub params: serde_json::Value,
    pub checks: Vec<Check>,
    pub records: Vec<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.verdict.is_ok()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("suite,check,verdict,passed,total,detail\n");
        for c in &self.checks {
            let verdict = serde_json::to_value(c.verdict).expect("serializable");
            s.push_str(&format!(
                "{},{},{},{},{},\"{}\"\n",
                self.suite,
                c.name,
                verdict.as_str().unwrap_or_default(),
                c.passed,
                c.total,
                c.detail.replace('"', "'")
            ));
        }
        s
    }
}

/// The eight Gr(3,8) tableaux whose subdivisions are positroidal but not
/// coarsest, in row format.
pub const GR38_TABLEAUX: [&str; 8] = [
    "1,2,3;2,5,6;4,7,8",
    "1,3,4;2,5,6;5,7,8",
    "1,3,4;2,6,7;5,8,8",
    "1,2,4;3,3,7;5,6,8",
    "1,1,2;3,4,5;6,7,8",
    "1,2,5;3,4,7;6,6,8",
    "1,2,3;4,4,5;6,7,8",
    "1,2,3;4,5,6;7,7,8",
];

/// Printed weight vectors: (k, n, tableau, weight).
pub const FIXTURES: [(usize, usize, &str, &[i64]); 7] = [
    (2, 5, "1;3", &[0, 0, 0, 0, 1, 0, 0, 0, 0, 0]),
    (2, 5, "1;4", &[0, 0, 0, 0, 1, 1, 0, 1, 0, 0]),
    (2, 5, "2;4", &[0, 0, 0, 0, 0, 0, 0, 1, 0, 0]),
    (2, 5, "2;5", &[0, 0, 0, 0, 0, 0, 0, 1, 1, 1]),
    (2, 5, "3;5", &[0, 0, 0, 0, 0, 0, 0, 0, 0, 1]),
    (
        3,
        7,
        "3;4;7",
        &[
            0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 0, 0, 0, 1, 1, 1, 1, 1, 1, 2,
        ],
    ),
    (
        3,
        7,
        "4;6;7",
        &[
            0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1,
        ],
    ),
];

fn random_column(rng: &mut ChaCha8Rng, k: usize, n: usize) -> Vec<usize> {
    let mut c: Vec<usize> = sample(rng, n, k).into_iter().map(|x| x + 1).collect();
    c.sort_unstable();
    c
}

fn union_of(k: usize, n: usize, cols: &[Vec<usize>]) -> Result<Tableau, CensusError> {
    Ok(Tableau::from_columns(k, n, cols.to_vec())?)
}

type Labeled = (String, Subdivision);

fn certification(params: &SuiteParams, subs: &[Labeled], checks: &mut Vec<Check>) {
    if params.certify {
        let refs: Vec<(String, &Subdivision)> = subs.iter().map(|(l, s)| (l.clone(), s)).collect();
        checks.push(certification_check(&refs, params.seed, params.edge_max_n));
    }
}

fn splits_2n(models: &Models, params: &SuiteParams) -> Result<(Vec<Check>, Vec<serde_json::Value>), CensusError> {
    let ns = params.n_values.clone().unwrap_or_else(|| (4..=8).collect());
    let mut jobs = Vec::new();
    for &n in &ns {
        if n < 4 {
            return Err(CensusError::Usage(format!("splits-2n needs n >= 4, got {n}")));
        }
        for i in 1..n {
            for j in i + 2..=n {
                if !(i == 1 && j == n) {
                    jobs.push((n, i, j));
                }
            }
        }
    }
    let results: Vec<Result<(usize, usize, usize, Subdivision, bool), CensusError>> = jobs
        .par_iter()
        .map(|&(n, i, j)| {
            let t = Tableau::column(2, n, &[i, j])?;
            let prime = nonfrozen_prime_k2(&t)?;
            let (_, sub) = models.subdivide(&t)?;
            Ok((n, i, j, sub, prime))
        })
        .collect();
    let mut shape_w = Vec::new();
    let mut prime_w = Vec::new();
    let mut tree_w = Vec::new();
    let mut subs = Vec::new();
    let mut records = Vec::new();
    for r in results {
        let (n, i, j, sub, prime) = r?;
        let label = format!("n={n} {{{i},{j}}}");
        let [a, b] = split_cells_formula(n, i, j);
        let mut expected = vec![a, b];
        expected.sort();
        let cells = sub.cell_subsets();
        let ok = cells == expected;
        if !ok {
            shape_w.push(serde_json::json!({"n": n, "pair": [i, j], "cells": sub.canonical_key()}));
        }
        if !prime {
            prime_w.push(serde_json::json!({"n": n, "pair": [i, j]}));
        }
        let tree = tree_split(n, (i, j))?;
        let tree_ok = split_hyperplane(&sub)
            .map(|hp| hp.vertices_on(sub.hypersimplex()) == tree.hyperplane().vertices_on(sub.hypersimplex()))
            .unwrap_or(false);
        if !tree_ok {
            tree_w.push(serde_json::json!({"n": n, "pair": [i, j]}));
        }
        records.push(serde_json::json!({"n": n, "pair": [i, j], "cells": sub.cells().len(), "matchesFormula": ok}));
        subs.push((label, sub));
    }
    let total = subs.len();
    let mut checks = vec![
        Check::from_witnesses(
            "two-cells-formula",
            Verdict::Fail,
            total,
            format!("non-frozen pairs for n in {ns:?}: exactly two maximal cells equal to the path formula"),
            shape_w,
        ),
        Check::from_witnesses("nonfrozen-prime", Verdict::Fail, total, "each pair is a non-frozen prime column", prime_w),
        Check::from_witnesses(
            "tree-hyperplane",
            Verdict::Fail,
            total,
            "split wall equals x over the tree block [i+1, j] = 1",
            tree_w,
        ),
    ];
    certification(params, &subs, &mut checks);
    Ok((checks, records))
}

fn gr38(models: &Models, params: &SuiteParams) -> Result<(Vec<Check>, Vec<serde_json::Value>), CensusError> {
    let results: Vec<Result<Labeled, CensusError>> = GR38_TABLEAUX
        .par_iter()
        .map(|text| {
            let t = Tableau::parse(text, 3, 8)?;
            Ok((text.to_string(), models.subdivide(&t)?.1))
        })
        .collect();
    let subs: Vec<Labeled> = results.into_iter().collect::<Result<_, _>>()?;
    let mut pos_w = Vec::new();
    let mut coarse_w = Vec::new();
    let mut records = Vec::new();
    for (text, sub) in &subs {
        let c = sub.classification();
        if !c.is_positroidal {
            pos_w.push(serde_json::json!({"tableau": text}));
        }
        if c.is_coarsest || c.affine_dim <= 9 {
            coarse_w.push(serde_json::json!({"tableau": text, "affineDim": c.affine_dim, "cells": c.cell_count}));
        }
        records.push(serde_json::json!({"tableau": text, "classification": c}));
    }
    let mut checks = vec![
        Check::from_witnesses("positroidal", Verdict::Fail, subs.len(), "all cells are positroids", pos_w),
        Check::from_witnesses(
            "not-coarsest",
            Verdict::Fail,
            subs.len(),
            "affineDim > n + 1 = 9 for every listed tableau",
            coarse_w,
        ),
    ];
    certification(params, &subs, &mut checks);
    Ok((checks, records))
}

fn fixtures(models: &Models) -> Result<(Vec<Check>, Vec<serde_json::Value>), CensusError> {
    let mut witnesses = Vec::new();
    let mut records = Vec::new();
    let mut computed = Vec::new();
    for (k, n, text, expected) in FIXTURES {
        let t = Tableau::parse(text, k, n)?;
        let w = models.get(k, n)?.weight_of(&t)?;
        let ok = w.to_integers().as_deref() == Some(expected);
        if !ok {
            witnesses.push(serde_json::json!({"tableau": text, "k": k, "n": n, "weight": w}));
        }
        records.push(serde_json::json!({"tableau": text, "k": k, "n": n, "weight": w, "matches": ok}));
        computed.push(w);
    }
    let t1 = Tableau::parse("3;4;7", 3, 7)?;
    let t2 = Tableau::parse("4;6;7", 3, 7)?;
    let union = models.get(3, 7)?.weight_of(&t1.union(&t2)?)?;
    let sum = computed[5].add(&computed[6]);
    let add_w = if union == sum {
        Vec::new()
    } else {
        vec![serde_json::json!({"union": union, "sum": sum})]
    };
    Ok((
        vec![
            Check::from_witnesses("printed-weights", Verdict::Fail, FIXTURES.len(), "seven printed weight vectors", witnesses),
            Check::from_witnesses("union-additivity", Verdict::Fail, 1, "wt of {3,4,7} ∪ {4,6,7} is the sum", add_w),
        ],
        records,
    ))
}

const ADDITIVITY_SHAPES: [(usize, usize); 5] = [(2, 5), (2, 6), (2, 7), (3, 6), (3, 7)];

fn additivity(models: &Models, params: &SuiteParams) -> Result<(Vec<Check>, Vec<serde_json::Value>), CensusError> {
    let samples = params.samples.unwrap_or(200);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut tuples: Vec<(usize, usize, Vec<Vec<usize>>)> = Vec::new();
    let mut attempts = 0usize;
    while tuples.len() < samples {
        attempts += 1;
        if attempts > samples * 1000 {
            return Err(CensusError::Usage("could not sample enough weakly separated tuples".into()));
        }
        let (k, n) = ADDITIVITY_SHAPES[rng.gen_range(0..ADDITIVITY_SHAPES.len())];
        let m = rng.gen_range(2..=3);
        let mut cols: Vec<Vec<usize>> = (0..m).map(|_| random_column(&mut rng, k, n)).collect();
        cols.sort();
        let ws = cols.iter().enumerate().all(|(a, x)| cols[a + 1..].iter().all(|y| weakly_separated(x, y)));
        if ws {
            tuples.push((k, n, cols));
        }
    }
    let results: Vec<Result<(bool, Option<bool>), CensusError>> = tuples
        .par_iter()
        .map(|(k, n, cols)| {
            let model = models.get(*k, *n)?;
            let t = union_of(*k, *n, cols)?;
            let mut sum = WeightVector::zero(*k, *n)?;
            for c in cols {
                sum = sum.add(&model.weight_of(&Tableau::column(*k, *n, c)?)?);
            }
            let additive = model.weight_of(&t)? == sum;
            let unique = if *k == 2 {
                let d = ws_column_decomposition(&t, WS_SEARCH_CAP)?;
                Some(d.unique && d.columns == *cols)
            } else {
                None
            };
            Ok((additive, unique))
        })
        .collect();
    let mut add_w = Vec::new();
    let mut uniq_w = Vec::new();
    let mut k2 = 0;
    for ((k, n, cols), r) in tuples.iter().zip(results) {
        let (additive, unique) = r?;
        let rendered: Vec<String> = cols.iter().map(|c| subsets::render(c)).collect();
        if !additive {
            add_w.push(serde_json::json!({"k": k, "n": n, "columns": rendered}));
        }
        if let Some(u) = unique {
            k2 += 1;
            if !u {
                uniq_w.push(serde_json::json!({"k": k, "n": n, "columns": rendered}));
            }
        }
    }
    Ok((
        vec![
            Check::from_witnesses(
                "weight-additivity",
                Verdict::Counterexample,
                tuples.len(),
                format!("pairwise weakly separated tuples of 2-3 columns over {ADDITIVITY_SHAPES:?}"),
                add_w,
            ),
            Check::from_witnesses(
                "k2-unique-decomposition",
                Verdict::Counterexample,
                k2,
                "for k = 2 the weakly separated column decomposition of the union is unique and recovers the tuple",
                uniq_w,
            ),
        ],
        Vec::new(),
    ))
}

fn positroidal_random(
    models: &Models,
    params: &SuiteParams,
) -> Result<(Vec<Check>, Vec<serde_json::Value>), CensusError> {
    let samples = params.samples.unwrap_or(200);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut items = Vec::new();
    for _ in 0..samples {
        let k = rng.gen_range(2..=3);
        let n = rng.gen_range(k + 2..=7);
        let m = rng.gen_range(1..=3);
        let cols: Vec<Vec<usize>> = (0..m).map(|_| random_column(&mut rng, k, n)).collect();
        let a = rng.gen_range(1..=n - k + 1);
        let trivial: Vec<usize> = (a..a + k).collect();
        items.push((k, n, cols, trivial));
    }
    type Item = (String, WeightVector, Subdivision, bool);
    let results: Vec<Result<Item, CensusError>> = items
        .par_iter()
        .map(|(k, n, cols, trivial)| {
            let t = union_of(*k, *n, cols)?;
            let (w, sub) = models.subdivide(&t)?;
            let padded = t.union(&Tableau::column(*k, *n, trivial)?)?;
            let (_, padded_sub) = models.subdivide(&padded)?;
            let same = padded_sub.canonical_key() == sub.canonical_key();
            Ok((format!("k={k} n={n} {t}"), w, sub, same))
        })
        .collect();
    let mut mat_w = Vec::new();
    let mut pos_w = Vec::new();
    let mut rel_w = Vec::new();
    let mut pad_w = Vec::new();
    let mut subs = Vec::new();
    let mut cells_checked = 0;
    for r in results {
        let (label, w, sub, same) = r?;
        for cell in sub.cell_subsets() {
            cells_checked += 1;
            if !is_matroid(&cell) {
                mat_w.push(serde_json::json!({"source": label, "cell": cell}));
            } else if !is_positroid(&cell, sub.n())? {
                pos_w.push(serde_json::json!({"source": label, "cell": cell}));
            }
        }
        let violations = three_term_violations(&w);
        if let Some(v) = violations.first() {
            rel_w.push(serde_json::json!({"source": label, "violations": violations.len(), "first": v}));
        }
        if !same {
            pad_w.push(serde_json::json!({"source": label}));
        }
        subs.push((label, sub));
    }
    let total = subs.len();
    let mut checks = vec![
        Check::from_witnesses("matroidal-cells", Verdict::Fail, cells_checked, "basis exchange on every cell", mat_w),
        Check::from_witnesses(
            "positroidal-cells",
            Verdict::Fail,
            cells_checked,
            "cyclic-interval envelope equality on every cell",
            pos_w,
        ),
        Check::from_witnesses(
            "three-term-relations",
            Verdict::Fail,
            total,
            "positive tropical three-term Plücker relations at every weight",
            rel_w,
        ),
        Check::from_witnesses(
            "trivial-padding-keys",
            Verdict::Fail,
            total,
            "adding a trivial column leaves the canonical key unchanged",
            pad_w,
        ),
    ];
    certification(params, &subs, &mut checks);
    Ok((checks, Vec::new()))
}

/// Runs one named suite.
pub fn verify_suite(models: &Models, suite: Suite, params: &SuiteParams) -> Result<SuiteReport, CensusError> {
    let start = Instant::now();
    let (checks, records) = match suite {
        Suite::Splits2n => splits_2n(models, params)?,
        Suite::Gr38Noncoarsest => gr38(models, params)?,
        Suite::Additivity => additivity(models, params)?,
        Suite::PositroidalRandom => positroidal_random(models, params)?,
        Suite::Fixtures => fixtures(models)?,
    };
    let seeded = match suite {
        Suite::Fixtures => false,
        Suite::Additivity | Suite::PositroidalRandom => true,
        Suite::Splits2n | Suite::Gr38Noncoarsest => params.certify,
    };
    let mut p = serde_json::Map::new();
    if suite == Suite::Splits2n {
        let ns = params.n_values.clone().unwrap_or_else(|| (4..=8).collect());
        p.insert("n".into(), serde_json::json!(ns));
    }
    if matches!(suite, Suite::Additivity | Suite::PositroidalRandom) {
        p.insert("samples".into(), serde_json::json!(params.samples.unwrap_or(200)));
    }
    if params.certify && suite != Suite::Fixtures && suite != Suite::Additivity {
        p.insert("edgeOracleMaxN".into(), serde_json::json!(params.edge_max_n));
    }
    Ok(SuiteReport {
        suite,
        verdict: overall(&checks),
        seed: seeded.then_some(params.seed),
        params: serde_json::Value::Object(p),
        checks,
        records,
        elapsed_ms: params.timing.then(|| start.elapsed().as_millis() as u64),
    })
}
