//! Family sweeps comparing the solver with every applicable prediction.

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::arith::factorize;
use crate::brute::{brute_solve, ORACLE_CAP};
use crate::descriptor::GroupSpec;
use crate::error::{GroupError, SolveError};
use crate::game::Seat;
use crate::group::{FiniteGroup, DEFAULT_ORDER_CAP};
use crate::lattice::SubgroupLattice;
use crate::solver::{solve_with, SolvedTable, TieBreak};
use crate::theory::{
    best_prediction, covering_class, covering_implication, many_generators_check, predict_covering, CoveringClass,
    PredictionRecord, Theorem,
};

/// Partitions of `n` into descending parts, in descending lexicographic order.
fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=n.min(max)).rev() {
            prefix.push(part);
            go(n - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// One descriptor per abelian group of each order `2..=max_order`, written as
/// a product of cyclic prime-power factors (descending prime, then
/// descending exponent).
pub fn enumerate_abelian(max_order: usize) -> Vec<String> {
    let mut out = Vec::new();
    for n in 2..=max_order {
        let mut primes = factorize(n);
        primes.reverse();
        let mut combos: Vec<Vec<usize>> = vec![vec![]];
        for (p, e) in primes {
            let mut next = Vec::new();
            for combo in &combos {
                for part in partitions(e) {
                    let mut c = combo.clone();
                    c.extend(part.iter().map(|&k| p.pow(k)));
                    next.push(c);
                }
            }
            combos = next;
        }
        for factors in combos {
            let spec = if factors.len() == 1 {
                GroupSpec::Cyclic(factors[0])
            } else {
                GroupSpec::Product(factors.into_iter().map(GroupSpec::Cyclic).collect())
            };
            out.push(spec.to_string());
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Cyclic { min: usize, max: usize },
    Dihedral { min: usize, max: usize },
    Abelian { max: usize },
    Explicit(Vec<String>),
}

impl Family {
    pub fn tag(&self) -> &'static str {
        match self {
            Family::Cyclic { .. } => "cyclic",
            Family::Dihedral { .. } => "dihedral",
            Family::Abelian { .. } => "abelian",
            Family::Explicit(_) => "explicit",
        }
    }

    pub fn descriptors(&self) -> Vec<String> {
        match self {
            Family::Cyclic { min, max } => (*min..=*max).map(|n| format!("cyclic:{n}")).collect(),
            Family::Dihedral { min, max } => (*min..=*max).map(|n| format!("dihedral:{n}")).collect(),
            Family::Abelian { max } => enumerate_abelian(*max),
            Family::Explicit(list) => list.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub order_cap: usize,
    /// Record solve time; off gives byte-identical reports across runs.
    pub timing: bool,
    /// Also run the brute-force oracle on groups within its cap.
    pub oracle: bool,
    pub cache: Option<Arc<LatticeCache>>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            order_cap: DEFAULT_ORDER_CAP,
            timing: true,
            oracle: false,
            cache: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationRow {
    pub descriptor: String,
    pub order: usize,
    pub family: String,
    /// Most specific prediction; for groups no point result covers, the
    /// covering constraint.
    pub prediction: Option<PredictionRecord>,
    pub solved: Seat,
    pub agree: Option<bool>,
    pub covering: Option<CoveringClass>,
    /// Covering clause the solver contradicts, if any.
    pub theorem_gap: Option<String>,
    /// Seat 3 is forced by the many-generators criterion; `Some(false)` if
    /// the solver disagrees.
    pub many_generators_ok: Option<bool>,
    pub oracle_agree: Option<bool>,
    pub subgroups: usize,
    pub ms: Option<f64>,
}

impl VerificationRow {
    pub fn is_point_prediction(&self) -> bool {
        self.prediction
            .as_ref()
            .is_some_and(|p| p.theorem != Theorem::Covering && p.predicted.point().is_some())
    }

    /// A point prediction was contradicted, or the oracle disagreed.
    pub fn is_failure(&self) -> bool {
        (self.is_point_prediction() && self.agree == Some(false))
            || self.many_generators_ok == Some(false)
            || self.oracle_agree == Some(false)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub rows: usize,
    pub point_predictions: usize,
    pub agreements: usize,
    pub disagreements: usize,
    pub constraint_only: usize,
    pub no_prediction: usize,
    pub theorem_gaps: BTreeMap<String, usize>,
    pub oracle_mismatches: usize,
    pub many_generators_failures: usize,
    pub errors: usize,
    /// `theorem case` → number of rows where it fired.
    pub cases: BTreeMap<String, usize>,
}

impl Summary {
    fn from_rows(rows: &[VerificationRow], errors: usize) -> Self {
        let mut s = Summary {
            rows: rows.len(),
            errors,
            ..Default::default()
        };
        for row in rows {
            match &row.prediction {
                Some(p) if row.is_point_prediction() => {
                    s.point_predictions += 1;
                    if row.agree == Some(true) {
                        s.agreements += 1;
                    } else {
                        s.disagreements += 1;
                    }
                    *s.cases.entry(format!("{} {}", p.theorem, p.case_label)).or_insert(0) += 1;
                }
                Some(_) => s.constraint_only += 1,
                None => s.no_prediction += 1,
            }
            if let Some(clause) = &row.theorem_gap {
                *s.theorem_gaps.entry(clause.clone()).or_insert(0) += 1;
            }
            if row.oracle_agree == Some(false) {
                s.oracle_mismatches += 1;
            }
            if row.many_generators_ok == Some(false) {
                s.many_generators_failures += 1;
            }
        }
        s
    }

    pub fn all_clear(&self) -> bool {
        self.disagreements == 0 && self.oracle_mismatches == 0 && self.many_generators_failures == 0 && self.errors == 0
    }
}

#[derive(Clone, Debug, Default)]
pub struct Sweep {
    pub rows: Vec<VerificationRow>,
    /// Descriptors that failed to parse or build, with the reason.
    pub errors: Vec<(String, String)>,
    pub summary: Summary,
}

/// A group together with its lattice and solved table.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub spec: GroupSpec,
    pub group: FiniteGroup,
    pub lattice: Arc<SubgroupLattice>,
    pub table: SolvedTable,
    pub solve_ms: f64,
}

pub fn analyze(descriptor: &str, opts: &VerifyOptions) -> Result<Analysis, SolveError> {
    let spec = GroupSpec::parse(descriptor)?;
    let group = spec.build(opts.order_cap)?;
    let lattice = match &opts.cache {
        Some(cache) => cache.get_or_build(&group),
        None => Arc::new(SubgroupLattice::build(&group)),
    };
    let started = Instant::now();
    let table = solve_with(&group, &lattice, TieBreak::Canonical)?;
    let solve_ms = started.elapsed().as_secs_f64() * 1e3;
    Ok(Analysis {
        spec,
        group,
        lattice,
        table,
        solve_ms,
    })
}

/// Build the verification row for one analyzed group.
pub fn check(analysis: &Analysis, family: &str, opts: &VerifyOptions) -> Result<VerificationRow, SolveError> {
    let g = &analysis.group;
    let lat = &analysis.lattice;
    let solved = analysis.table.outcome().winner();

    let covering = if g.is_cyclic() {
        None
    } else {
        Some(covering_class(g, lat)?)
    };
    let theorem_gap = covering.and_then(|c| {
        let clause = match c {
            CoveringClass::TwoCover => "1",
            CoveringClass::OneCoverOnly => "2",
            CoveringClass::NoCover => "3",
        };
        (!covering_implication(c).admits(solved)).then(|| clause.to_string())
    });

    let mut prediction = best_prediction(g, lat, analysis.spec.dihedral_n())?;
    if prediction.is_none() && covering.is_some() {
        prediction = Some(predict_covering(g, lat)?);
    }
    let agree = prediction.as_ref().map(|p| p.predicted.admits(solved));
    let many_generators_ok = many_generators_check(g).map(|seat| seat == solved);
    let oracle_agree = if opts.oracle && g.order() <= ORACLE_CAP {
        Some(brute_solve(g)?.winner() == solved)
    } else {
        None
    };

    Ok(VerificationRow {
        descriptor: g.descriptor().to_string(),
        order: g.order(),
        family: family.to_string(),
        prediction,
        solved,
        agree,
        covering,
        theorem_gap,
        many_generators_ok,
        oracle_agree,
        subgroups: lat.len(),
        ms: opts.timing.then_some(analysis.solve_ms),
    })
}

pub fn verify_descriptors(descriptors: &[String], family: &str, opts: &VerifyOptions) -> Sweep {
    let results: Vec<Result<VerificationRow, (String, String)>> = descriptors
        .par_iter()
        .map(|d| {
            analyze(d, opts)
                .and_then(|a| check(&a, family, opts))
                .map_err(|e| (d.clone(), e.to_string()))
        })
        .collect();
    let mut sweep = Sweep::default();
    for r in results {
        match r {
            Ok(row) => sweep.rows.push(row),
            Err(e) => sweep.errors.push(e),
        }
    }
    sweep.summary = Summary::from_rows(&sweep.rows, sweep.errors.len());
    sweep
}

pub fn verify_family(family: &Family, opts: &VerifyOptions) -> Sweep {
    verify_descriptors(&family.descriptors(), family.tag(), opts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("no rows to report")]
    Empty,
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// Flat report record; field order is the CSV column order.
#[derive(Serialize)]
struct ReportRecord<'a> {
    descriptor: &'a str,
    order: usize,
    family: &'a str,
    theorem: String,
    case_label: String,
    predicted: String,
    solved: String,
    agree: String,
    covering: String,
    subgroups: usize,
    ms: String,
}

impl<'a> From<&'a VerificationRow> for ReportRecord<'a> {
    fn from(row: &'a VerificationRow) -> Self {
        let p = row.prediction.as_ref();
        let covering = match (&row.covering, &row.theorem_gap) {
            (Some(c), Some(clause)) => format!("{c};THEOREM-GAP({clause})"),
            (Some(c), None) => c.to_string(),
            (None, _) => String::new(),
        };
        ReportRecord {
            descriptor: &row.descriptor,
            order: row.order,
            family: &row.family,
            theorem: p.map(|p| p.theorem.label().to_string()).unwrap_or_default(),
            case_label: p.map(|p| p.case_label.clone()).unwrap_or_default(),
            predicted: p.map(|p| p.predicted.to_string()).unwrap_or_default(),
            solved: row.solved.to_string(),
            agree: row.agree.map(|a| a.to_string()).unwrap_or_default(),
            covering,
            subgroups: row.subgroups,
            ms: row.ms.map(|ms| format!("{ms:.3}")).unwrap_or_default(),
        }
    }
}

pub fn render_report(rows: &[VerificationRow], format: ReportFormat) -> Result<Vec<u8>, ReportError> {
    if rows.is_empty() {
        return Err(ReportError::Empty);
    }
    let records: Vec<ReportRecord> = rows.iter().map(ReportRecord::from).collect();
    match format {
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &records {
                w.serialize(r)?;
            }
            w.into_inner().map_err(|e| ReportError::Io {
                path: "<buffer>".into(),
                source: e.into_error(),
            })
        }
        ReportFormat::Json => {
            let mut out = serde_json::to_vec_pretty(&records)?;
            out.push(b'\n');
            Ok(out)
        }
    }
}

pub fn write_report(rows: &[VerificationRow], format: ReportFormat, path: &Path) -> Result<(), ReportError> {
    let bytes = render_report(rows, format)?;
    std::fs::write(path, bytes).map_err(|source| ReportError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[derive(Serialize, Deserialize)]
struct CachedLattice {
    descriptor: String,
    order: usize,
    subgroups: Vec<Vec<usize>>,
}

/// In-process lattice cache, optionally backed by a directory of JSON files
/// named by the SHA-256 of the group descriptor.
#[derive(Debug, Default)]
pub struct LatticeCache {
    dir: Option<PathBuf>,
    memory: Mutex<HashMap<String, Arc<SubgroupLattice>>>,
}

impl LatticeCache {
    pub fn in_memory() -> Self {
        LatticeCache::default()
    }

    pub fn with_dir(dir: impl Into<PathBuf>) -> Self {
        LatticeCache {
            dir: Some(dir.into()),
            memory: Mutex::default(),
        }
    }

    pub fn file_for(&self, descriptor: &str) -> Option<PathBuf> {
        let digest = Sha256::digest(descriptor.as_bytes());
        self.dir
            .as_ref()
            .map(|d| d.join(format!("{}.json", hex::encode(digest))))
    }

    fn load(&self, g: &FiniteGroup) -> Option<SubgroupLattice> {
        let path = self.file_for(g.descriptor())?;
        let text = std::fs::read_to_string(path).ok()?;
        let cached: CachedLattice = serde_json::from_str(&text).ok()?;
        if cached.descriptor != g.descriptor() || cached.order != g.order() {
            return None;
        }
        SubgroupLattice::from_member_lists(g, &cached.subgroups).ok()
    }

    fn store(&self, g: &FiniteGroup, lat: &SubgroupLattice) {
        let Some(path) = self.file_for(g.descriptor()) else {
            return;
        };
        let cached = CachedLattice {
            descriptor: g.descriptor().to_string(),
            order: g.order(),
            subgroups: lat.subgroups().iter().map(|s| s.members().to_vec()).collect(),
        };
        // A failed write only costs a rebuild next time.
        if let Some(parent) = path.parent() {
            let _ = std::fs::create_dir_all(parent);
        }
        if let Ok(text) = serde_json::to_string(&cached) {
            let _ = std::fs::write(path, text);
        }
    }

    pub fn get_or_build(&self, g: &FiniteGroup) -> Arc<SubgroupLattice> {
        if let Some(lat) = self.memory.lock().expect("cache lock").get(g.descriptor()) {
            return Arc::clone(lat);
        }
        let lat = Arc::new(self.load(g).unwrap_or_else(|| {
            let lat = SubgroupLattice::build(g);
            self.store(g, &lat);
            lat
        }));
        self.memory
            .lock()
            .expect("cache lock")
            .insert(g.descriptor().to_string(), Arc::clone(&lat));
        lat
    }
}

/// Prediction for an arbitrary descriptor using the most specific predictor.
pub fn predict_descriptor(descriptor: &str, cap: usize) -> Result<Option<PredictionRecord>, GroupError> {
    let spec = GroupSpec::parse(descriptor)?;
    let g = spec.build(cap)?;
    let lat = SubgroupLattice::build(&g);
    best_prediction(&g, &lat, spec.dihedral_n())
}
