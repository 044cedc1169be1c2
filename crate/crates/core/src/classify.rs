//! Bounded classification of minimal monads whose homology has rank 2 or 3 and no inner
//! cohomology, on `Q_4` to `Q_8`.
//!
//! The search space is every normalized candidate within the twist and multiplicity bounds.
//! `Q_4` is searched with hierarchical pruning: condition 3 only sees the spinor part `P` of
//! `B`, condition 1 only `(P, C)` and condition 2 only `(P, A)`. On `Q_n`, `n >= 5`, every
//! survivor restricts to a survivor on `Q_{n-1}` (the pipeline's `restriction` step), so the
//! lifts of the lower survivors are complete.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bundle::{Atom, BundleError, BundleExpr, SpinorKind};
use crate::chow::{ChowClass, ChowError, QuadricSpace};
use crate::cohomology::cohomology;
use crate::les::{les_propagate, DimTable, LesError};
use crate::monad::{
    check_minimality, check_monad, condition_1_parts, condition_2_parts, condition_3_parts, section_feasible,
    MonadCandidate, MonadError, Mode, Reason, Verdict,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("classification covers Q_4 to Q_8, not Q_{0}")]
    UnsupportedSpace(u32),
    #[error("classification covers homology rank 2 and 3, not {0}")]
    UnsupportedRank(u64),
    #[error("twist bound must be at least 1")]
    BadTwistBound,
    #[error("the construction needs an ACM bundle of rank > 4 on Q_4, got {0}")]
    NotApplicable(String),
    #[error(transparent)]
    Chow(#[from] ChowError),
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error(transparent)]
    Monad(#[from] MonadError),
    #[error(transparent)]
    Les(#[from] LesError),
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub n: u32,
    pub homology_rank: u64,
    pub twist_bound: i64,
    pub multiplicity_bound: u32,
    #[serde(default = "default_true")]
    pub spinors_enabled: bool,
    /// How many rejected candidates to report with their first fatal condition.
    #[serde(default)]
    pub trace_samples: usize,
}

impl SearchConfig {
    pub fn new(n: u32, homology_rank: u64) -> Self {
        SearchConfig { n, homology_rank, twist_bound: 5, multiplicity_bound: 3, spinors_enabled: true, trace_samples: 0 }
    }

    pub fn with_twist_bound(mut self, t: i64) -> Self {
        self.twist_bound = t;
        self
    }

    pub fn with_multiplicity_bound(mut self, m: u32) -> Self {
        self.multiplicity_bound = m;
        self
    }

    pub fn without_spinors(mut self) -> Self {
        self.spinors_enabled = false;
        self
    }

    pub fn with_trace(mut self, samples: usize) -> Self {
        self.trace_samples = samples;
        self
    }

    pub fn space(&self) -> Result<QuadricSpace, ClassifyError> {
        if !(4..=8).contains(&self.n) {
            return Err(ClassifyError::UnsupportedSpace(self.n));
        }
        if !(2..=3).contains(&self.homology_rank) {
            return Err(ClassifyError::UnsupportedRank(self.homology_rank));
        }
        if self.twist_bound < 1 {
            return Err(ClassifyError::BadTwistBound);
        }
        Ok(QuadricSpace::new(self.n)?)
    }

    fn kinds(&self, space: &QuadricSpace) -> Vec<SpinorKind> {
        if !self.spinors_enabled {
            return Vec::new();
        }
        [SpinorKind::Plus, SpinorKind::Minus, SpinorKind::Odd].into_iter().filter(|k| k.legal_on(space)).collect()
    }
}

/// Nondecreasing sequences of length `size` with entries in `lo..=hi`.
fn multisets(lo: i64, hi: i64, size: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(size);
    fn go(lo: i64, hi: i64, size: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        let start = cur.last().copied().unwrap_or(lo);
        for v in start..=hi {
            cur.push(v);
            go(lo, hi, size, cur, out);
            cur.pop();
        }
    }
    if size == 0 || lo <= hi {
        go(lo, hi, size, &mut cur, &mut out);
    }
    out
}

/// Number of multisets of size `k` from `n` values.
fn multiset_count(n: u64, k: u64) -> u64 {
    if k == 0 {
        return 1;
    }
    if n == 0 {
        return 0;
    }
    // C(n + k - 1, k), exact at every step
    let mut acc: u64 = 1;
    for i in 1..=k {
        acc = acc * (n + i - 1) / i;
    }
    acc
}

/// Normalized `C` options: empty, or lowest twist 1.
fn c_options(cfg: &SearchConfig) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for s in 1..=cfg.multiplicity_bound as usize {
        for rest in multisets(1, cfg.twist_bound, s - 1) {
            let mut v = vec![1];
            v.extend(rest);
            out.push(v);
        }
    }
    out
}

/// `A` options; with `C = 0` the normalization puts the highest twist of `A` at 0.
fn a_options(cfg: &SearchConfig, c_empty: bool) -> Vec<Vec<i64>> {
    let t = cfg.twist_bound;
    let mut out = Vec::new();
    if c_empty {
        for s in 1..=cfg.multiplicity_bound as usize {
            for mut rest in multisets(-t, 0, s - 1) {
                rest.push(0);
                out.push(rest);
            }
        }
    } else {
        for s in 0..=cfg.multiplicity_bound as usize {
            out.extend(multisets(-t, t, s));
        }
    }
    out
}

/// Spinor parts of `B` by rank: at most `bound` copies of each kind, twists in `[-T, T]`, rank
/// within what `A`, `C` and the homology can absorb.
fn spinor_parts(cfg: &SearchConfig, space: QuadricSpace, bound: u32) -> BTreeMap<u64, Vec<BundleExpr>> {
    let t = cfg.twist_bound;
    let budget = 2 * cfg.multiplicity_bound as u64 + cfg.homology_rank;
    let sr = space.spinor_rank();
    let mut parts = vec![BundleExpr::zero(space)];
    for kind in cfg.kinds(&space) {
        let mut next = Vec::new();
        for p in &parts {
            let room = ((budget - p.rank()) / sr).min(bound as u64) as usize;
            for s in 0..=room {
                for twists in multisets(-t, t, s) {
                    let mut q = p.clone();
                    for x in twists {
                        q.push(Atom::Spinor(kind, x), 1).expect("legal kind");
                    }
                    next.push(q);
                }
            }
        }
        parts = next;
    }
    let mut by_rank: BTreeMap<u64, Vec<BundleExpr>> = BTreeMap::new();
    for p in parts {
        by_rank.entry(p.rank()).or_default().push(p);
    }
    by_rank
}

fn assemble(space: QuadricSpace, a: &[i64], p: &BundleExpr, l: &[i64], c: &[i64]) -> Option<MonadCandidate> {
    let mut b = p.clone();
    for &x in l {
        b.push(Atom::Line(x), 1).expect("lines are legal");
    }
    MonadCandidate::new(BundleExpr::lines(space, a), b, BundleExpr::lines(space, c)).ok()
}

/// Every normalized candidate within the bounds, in a fixed order, without duplicates.
pub fn enumerate_candidates(cfg: &SearchConfig) -> Result<impl Iterator<Item = MonadCandidate>, ClassifyError> {
    let space = cfg.space()?;
    let cfg = *cfg;
    let parts = Arc::new(spinor_parts(&cfg, space, cfg.multiplicity_bound));
    let line_sets: Arc<Vec<Vec<Vec<i64>>>> = Arc::new(
        (0..=cfg.multiplicity_bound as usize).map(|k| multisets(-cfg.twist_bound, cfg.twist_bound, k)).collect(),
    );
    let h = cfg.homology_rank;
    let iter = c_options(&cfg).into_iter().flat_map(move |c| {
        let parts = Arc::clone(&parts);
        let line_sets = Arc::clone(&line_sets);
        a_options(&cfg, c.is_empty()).into_iter().flat_map(move |a| {
            let c = c.clone();
            let line_sets = Arc::clone(&line_sets);
            let need = a.len() as u64 + c.len() as u64 + h;
            let lo = need.saturating_sub(cfg.multiplicity_bound as u64);
            let ranks: Vec<u64> = parts.range(lo..=need).map(|(r, _)| *r).collect();
            let parts = Arc::clone(&parts);
            let chosen = ranks.into_iter().flat_map(move |r| {
                let parts = Arc::clone(&parts);
                (0..parts[&r].len()).map(move |i| parts[&r][i].clone())
            });
            chosen.flat_map(move |p| {
                let k = (need - p.rank()) as usize;
                let a = a.clone();
                let c = c.clone();
                let line_sets = Arc::clone(&line_sets);
                (0..line_sets[k].len()).filter_map(move |j| assemble(space, &a, &p, &line_sets[k][j], &c))
            })
        })
    });
    Ok(iter)
}

/// Size of the [`enumerate_candidates`] stream, by counting.
pub fn count_candidates(cfg: &SearchConfig) -> Result<u64, ClassifyError> {
    let space = cfg.space()?;
    let m = cfg.multiplicity_bound as u64;
    let values = (2 * cfg.twist_bound + 1) as u64;
    // number of spinor parts by total spinor count
    let mut by_count: BTreeMap<u64, u64> = BTreeMap::from([(0, 1)]);
    for _ in cfg.kinds(&space) {
        let mut next = BTreeMap::new();
        for (&have, &ways) in &by_count {
            for s in 0..=m {
                *next.entry(have + s).or_insert(0) += ways * multiset_count(values, s);
            }
        }
        by_count = next;
    }
    let sr = space.spinor_rank();
    let mut total = 0;
    for c in c_options(cfg) {
        for a in a_options(cfg, c.is_empty()) {
            let need = a.len() as u64 + c.len() as u64 + cfg.homology_rank;
            for (&count, &ways) in &by_count {
                let r = count * sr;
                if r <= need && need - r <= m {
                    total += ways * multiset_count(values, need - r);
                }
            }
        }
    }
    Ok(total)
}

fn passes(m: &MonadCandidate) -> bool {
    check_monad(m, Mode::FirstFatal).first_fatal().is_none()
}

fn is_fail(r: Result<(Verdict, Reason), MonadError>) -> bool {
    matches!(r, Ok((Verdict::Fail, _)))
}

/// Spinor counts and line counts within the bounds.
fn within_bounds(m: &MonadCandidate, cfg: &SearchConfig, spinor_bound: u32) -> bool {
    let t = cfg.twist_bound;
    let lines_ok = |e: &BundleExpr| {
        let tw = e.line_twists();
        tw.len() as u32 <= cfg.multiplicity_bound && tw.iter().all(|x| (-t..=t).contains(x))
    };
    if !(lines_ok(m.a()) && lines_ok(m.b()) && lines_ok(m.c())) {
        return false;
    }
    let mut per_kind: BTreeMap<SpinorKind, u32> = BTreeMap::new();
    for (atom, k) in m.b().atoms() {
        match atom {
            Atom::Line(_) => {}
            Atom::Spinor(kind, x) if cfg.spinors_enabled && (-t..=t).contains(&x) => *per_kind.entry(kind).or_insert(0) += k,
            _ => return false,
        }
    }
    per_kind.values().all(|&k| k <= spinor_bound)
}

/// Spinor bound used one dimension down: restriction merges or splits families, so only the
/// rank budget limits it there.
fn relaxed_bound(cfg: &SearchConfig) -> u32 {
    (2 * cfg.multiplicity_bound + cfg.homology_rank as u32).max(cfg.multiplicity_bound)
}

fn q4_survivors(cfg: &SearchConfig, space: QuadricSpace, spinor_bound: u32) -> Vec<MonadCandidate> {
    let m = cfg.multiplicity_bound as u64;
    let budget = 2 * m + cfg.homology_rank;
    let t = cfg.twist_bound;
    let sr = space.spinor_rank();

    // condition 3 failures persist when summands are added, so prune while growing each family
    let mut parts = vec![BundleExpr::zero(space)];
    for kind in cfg.kinds(&space) {
        let mut grown = Vec::new();
        for base in &parts {
            let mut stack = vec![(base.clone(), -t)];
            while let Some((p, from)) = stack.pop() {
                let count: u32 = p.atoms().filter(|(a, _)| matches!(a, Atom::Spinor(k, _) if *k == kind)).map(|(_, c)| c).sum();
                grown.push(p.clone());
                if count >= spinor_bound || p.rank() + sr > budget {
                    continue;
                }
                for x in from..=t {
                    let q = p.clone().with(Atom::Spinor(kind, x)).expect("legal kind");
                    if !is_fail(condition_3_parts(&q)) {
                        stack.push((q, x));
                    }
                }
            }
        }
        parts = grown;
    }
    parts.sort();

    let cs = c_options(cfg);
    let line_sets: Vec<Vec<Vec<i64>>> = (0..=m as usize).map(|k| multisets(-t, t, k)).collect();
    let mut out = Vec::new();
    for p in &parts {
        if is_fail(condition_3_parts(p)) {
            continue;
        }
        for c in &cs {
            let ce = BundleExpr::lines(space, c);
            if is_fail(condition_1_parts(p, &ce)) {
                continue;
            }
            for a in a_options(cfg, c.is_empty()) {
                let ae = BundleExpr::lines(space, &a);
                if is_fail(condition_2_parts(p, &ae)) {
                    continue;
                }
                let need = a.len() as u64 + c.len() as u64 + cfg.homology_rank;
                if p.rank() > need || need - p.rank() > m {
                    continue;
                }
                for l in &line_sets[(need - p.rank()) as usize] {
                    if let Some(cand) = assemble(space, &a, p, l, c) {
                        if passes(&cand) {
                            out.push(cand);
                        }
                    }
                }
            }
        }
    }
    out.sort();
    out
}

fn survivors_at(cfg: &SearchConfig, space: QuadricSpace, spinor_bound: u32) -> Result<Vec<MonadCandidate>, ClassifyError> {
    if space.n() == 4 {
        return Ok(q4_survivors(cfg, space, spinor_bound));
    }
    let lower_space = QuadricSpace::new(space.n() - 1)?;
    let lower = survivors_at(cfg, lower_space, relaxed_bound(cfg))?;
    let mut out = Vec::new();
    for s in &lower {
        let a = BundleExpr::lines(space, &s.a().line_twists());
        let c = BundleExpr::lines(space, &s.c().line_twists());
        for b in s.b().lift_candidates() {
            let Ok(cand) = MonadCandidate::new(a.clone(), b, c.clone()) else { continue };
            if within_bounds(&cand, cfg, spinor_bound) && passes(&cand) {
                out.push(cand);
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Normalized candidates within the bounds that pass every pipeline condition.
pub fn pruned_survivors(cfg: &SearchConfig) -> Result<Vec<MonadCandidate>, ClassifyError> {
    let space = cfg.space()?;
    survivors_at(cfg, space, cfg.multiplicity_bound)
}

/// The same set as [`pruned_survivors`], by running the pipeline on every candidate.
pub fn exhaustive_survivors(cfg: &SearchConfig) -> Result<Vec<MonadCandidate>, ClassifyError> {
    let mut out: Vec<MonadCandidate> = enumerate_candidates(cfg)?.filter(passes).collect();
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedMonad {
    /// Sequence label, e.g. `(5)` or `Z4`.
    pub label: String,
    /// Monad text; a family writes its free line summand as `O(a)`.
    pub monad: String,
    pub homology: String,
    pub family: bool,
}

impl ExpectedMonad {
    fn new(label: &str, monad: &str, homology: &str) -> Self {
        ExpectedMonad { label: label.into(), monad: monad.into(), homology: homology.into(), family: monad.contains("O(a)") }
    }

    fn instance(&self, space: QuadricSpace, a: Option<i64>) -> Option<MonadCandidate> {
        let text = match a {
            Some(a) => self.monad.replace("O(a)", &format!("O({a})")),
            None => self.monad.clone(),
        };
        MonadCandidate::parse(&text, space).ok()
    }

    /// `Some(None)` for a fixed match, `Some(Some(a))` for a family member.
    pub fn matches(&self, m: &MonadCandidate) -> Option<Option<i64>> {
        if !self.family {
            return (self.instance(m.space(), None).as_ref() == Some(m)).then_some(None);
        }
        m.b().line_twists().into_iter().find(|&a| self.instance(m.space(), Some(a)).as_ref() == Some(m)).map(Some)
    }

    /// Family parameters within `[-T, T]` that give a minimal candidate.
    pub fn admissible_values(&self, space: QuadricSpace, twist_bound: i64) -> Vec<i64> {
        if !self.family {
            return Vec::new();
        }
        (-twist_bound..=twist_bound)
            .filter(|&a| {
                self.instance(space, Some(a))
                    .is_some_and(|m| check_minimality(&m).verdict("minimality") == Some(Verdict::Pass))
            })
            .collect()
    }
}

/// The known answer lists.
pub fn expected_results(space: QuadricSpace, rank: u64) -> Result<Vec<ExpectedMonad>, ClassifyError> {
    let n = space.n();
    if !(4..=8).contains(&n) {
        return Err(ClassifyError::UnsupportedSpace(n));
    }
    let e = ExpectedMonad::new;
    Ok(match (n, rank) {
        (4, 3) => vec![
            e("(1)", "0 -> S'(1) + S''(1) -> O(1)", "G4"),
            e("(2)", "O -> S'(1) + S''(1) -> 0", "P4"),
            e("(5)", "O -> O(a) + S'(1) + S''(1) -> O(1)", "Z4+O(a)"),
        ],
        (5, 3) => vec![
            e("(3)", "0 -> S(1) -> O(1)", "G5"),
            e("(4)", "O -> S(1) -> 0", "P5"),
            e("(5')", "O -> O(a) + S(1) -> O(1)", "Z5+O(a)"),
        ],
        (6, 3) => vec![
            e("(6)", "O -> S'(1) -> 0", "P'6"),
            e("(7)", "O -> S''(1) -> 0", "P''6"),
            e("(8)", "0 -> S'(1) -> O(1)", "G'6"),
            e("(9)", "0 -> S''(1) -> O(1)", "G''6"),
        ],
        (4, 2) => vec![e("Z4", "O -> S'(1) + S''(1) -> O(1)", "Z4")],
        (5, 2) => vec![e("Z5", "O -> S(1) -> O(1)", "Z5")],
        (_, 2) | (_, 3) => Vec::new(),
        _ => return Err(ClassifyError::UnsupportedRank(rank)),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Exists,
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Survivor {
    pub monad: String,
    pub status: Status,
    pub matched_sequence: Option<String>,
    pub homology: Option<String>,
    /// Family parameter values found, for a parametric survivor.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parameter_values: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraint: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    pub monad: String,
    pub fatal: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationResult {
    pub space: u32,
    pub rank: u64,
    pub config: SearchConfig,
    pub survivors: Vec<Survivor>,
    /// Every concrete survivor, normalized and sorted.
    pub survivor_monads: Vec<MonadCandidate>,
    pub rejected_count: u64,
    pub sample_rejections: Vec<Rejection>,
    pub expected: Vec<ExpectedMonad>,
    /// Expected labels absent from the survivors, or families with missing parameter values.
    pub missing: Vec<String>,
}

impl ClassificationResult {
    /// Survivors coincide with the expected list.
    pub fn matches_expected(&self) -> bool {
        self.missing.is_empty() && self.survivors.iter().all(|s| s.status == Status::Exists)
    }

    pub fn labels(&self) -> Vec<String> {
        self.survivors.iter().filter_map(|s| s.matched_sequence.clone()).collect()
    }
}

const FAMILY_CONSTRAINT: &str = "a free; map components zero";

/// Runs the search and matches the survivors against the expected list.
pub fn classify(cfg: &SearchConfig) -> Result<ClassificationResult, ClassifyError> {
    let space = cfg.space()?;
    let concrete = pruned_survivors(cfg)?;
    // without spinors every candidate splits, so the known answer is empty
    let expected = if cfg.spinors_enabled { expected_results(space, cfg.homology_rank)? } else { Vec::new() };

    let mut survivors = Vec::new();
    let mut family_values: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
    for m in &concrete {
        let hit = expected.iter().enumerate().find_map(|(i, e)| e.matches(m).map(|a| (i, a)));
        match hit {
            Some((i, Some(a))) => family_values.entry(i).or_default().push(a),
            Some((i, None)) => survivors.push((
                i,
                Survivor {
                    monad: m.to_string(),
                    status: Status::Exists,
                    matched_sequence: Some(expected[i].label.clone()),
                    homology: Some(expected[i].homology.clone()),
                    parameter_values: Vec::new(),
                    constraint: None,
                },
            )),
            None => survivors.push((
                usize::MAX,
                Survivor {
                    monad: m.to_string(),
                    status: Status::Unresolved,
                    matched_sequence: None,
                    homology: None,
                    parameter_values: Vec::new(),
                    constraint: None,
                },
            )),
        }
    }
    for (&i, values) in &family_values {
        survivors.push((
            i,
            Survivor {
                monad: expected[i].monad.clone(),
                status: Status::Exists,
                matched_sequence: Some(expected[i].label.clone()),
                homology: Some(expected[i].homology.clone()),
                parameter_values: values.clone(),
                constraint: Some(FAMILY_CONSTRAINT.into()),
            },
        ));
    }
    survivors.sort_by(|x, y| (x.0, &x.1.monad).cmp(&(y.0, &y.1.monad)));
    let survivors: Vec<Survivor> = survivors.into_iter().map(|(_, s)| s).collect();

    let mut missing = Vec::new();
    for (i, e) in expected.iter().enumerate() {
        if e.family {
            let want = e.admissible_values(space, cfg.twist_bound);
            if family_values.get(&i).is_none_or(|v| *v != want) {
                missing.push(e.label.clone());
            }
        } else if !survivors.iter().any(|s| s.matched_sequence.as_deref() == Some(e.label.as_str())) {
            missing.push(e.label.clone());
        }
    }

    let total = count_candidates(cfg)?;
    let sample_rejections = if cfg.trace_samples == 0 {
        Vec::new()
    } else {
        enumerate_candidates(cfg)?
            .filter_map(|m| {
                let r = check_monad(&m, Mode::FirstFatal);
                let fatal = r.first_fatal()?;
                Some(Rejection { monad: m.to_string(), fatal: fatal.into(), reason: r.reasons[fatal].detail.clone() })
            })
            .take(cfg.trace_samples)
            .collect()
    };

    Ok(ClassificationResult {
        space: space.n(),
        rank: cfg.homology_rank,
        config: *cfg,
        survivors,
        rejected_count: total - concrete.len() as u64,
        survivor_monads: concrete,
        sample_rejections,
        expected,
        missing,
    })
}

pub fn classify_rank3(cfg: &SearchConfig) -> Result<ClassificationResult, ClassifyError> {
    if cfg.homology_rank != 3 {
        return Err(ClassifyError::UnsupportedRank(cfg.homology_rank));
    }
    classify(cfg)
}

pub fn classify_rank2(cfg: &SearchConfig) -> Result<ClassificationResult, ClassifyError> {
    if cfg.homology_rank != 2 {
        return Err(ClassifyError::UnsupportedRank(cfg.homology_rank));
    }
    classify(cfg)
}

/// The cokernel of a generic `O^{r-4} -> H` on `Q_4`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rank4Descriptor {
    pub source: String,
    pub rank: u64,
    pub chern: String,
    /// `H^2` of the cokernel (the only inner row on `Q_4`) in every twist of the window.
    pub inner_cohomology: Verdict,
    pub window: (i64, i64),
    /// Whether the generic map can be injective on every fibre.
    pub subbundle: Verdict,
    pub subbundle_reason: String,
    #[serde(skip)]
    pub chern_class: Option<ChowClass>,
}

const RANK4_WINDOW: (i64, i64) = (-10, 10);

pub fn counterexample_rank4(h: &BundleExpr) -> Result<Rank4Descriptor, ClassifyError> {
    let space = h.space();
    if space.n() != 4 || !h.is_acm() || h.rank() <= 4 {
        return Err(ClassifyError::NotApplicable(h.to_string()));
    }
    let chern = h.total_chern()?;
    let k = h.rank() - 4;
    let free = BundleExpr::lines(space, &vec![0; k as usize]);
    let window = RANK4_WINDOW.0..=RANK4_WINDOW.1;
    let a = DimTable::from_table(&cohomology(&free), window.clone());
    let b = DimTable::from_table(&cohomology(h), window.clone());
    let c = DimTable::unknown(space, window.clone()).with_rank(4);
    let (_, _, coker) = les_propagate(&a, &b, &c)?;
    let row = |i: usize| {
        let mut v = Verdict::Pass;
        for t in window.clone() {
            match coker.value(i, t) {
                Some(0) => {}
                Some(_) => return Verdict::Fail,
                None => v = Verdict::Unknown,
            }
        }
        v
    };
    let inner_cohomology = row(2);

    let generated = h.atoms().all(|(atom, _)| match atom {
        Atom::Line(t) => t >= 0,
        Atom::Spinor(_, t) => t >= 1,
        _ => false,
    });
    let (subbundle, subbundle_reason) = if generated {
        (
            Verdict::Pass,
            format!("{h} is globally generated; the degeneracy locus of a generic map has codimension 5 > 4"),
        )
    } else if k == 1 {
        let (v, r) = section_feasible(h);
        (v, r.detail)
    } else {
        (Verdict::Unknown, format!("{h} is not globally generated"))
    };

    Ok(Rank4Descriptor {
        source: h.to_string(),
        rank: h.rank() - k,
        chern: chern.to_string(),
        inner_cohomology,
        window: RANK4_WINDOW,
        subbundle,
        subbundle_reason,
        chern_class: Some(chern),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: u32) -> QuadricSpace {
        QuadricSpace::new(n).unwrap()
    }

    #[test]
    fn multiset_counts_agree() {
        for n in 0..6u64 {
            for k in 0..5u64 {
                let listed = if n == 0 { (k == 0) as usize } else { multisets(0, n as i64 - 1, k as usize).len() };
                assert_eq!(multiset_count(n, k) as usize, listed, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn stream_size_matches_count() {
        for cfg in [
            SearchConfig::new(4, 3).with_twist_bound(1).with_multiplicity_bound(2),
            SearchConfig::new(4, 2).with_twist_bound(2).with_multiplicity_bound(1),
            SearchConfig::new(5, 3).with_twist_bound(1).with_multiplicity_bound(2),
            SearchConfig::new(6, 2).with_twist_bound(1).with_multiplicity_bound(1).without_spinors(),
        ] {
            let listed: Vec<_> = enumerate_candidates(&cfg).unwrap().collect();
            assert_eq!(listed.len() as u64, count_candidates(&cfg).unwrap(), "{cfg:?}");
            let mut dedup = listed.clone();
            dedup.sort();
            dedup.dedup();
            assert_eq!(dedup.len(), listed.len());
            assert!(listed.iter().all(|m| m.is_normalized() && m.homology_rank() == cfg.homology_rank));
        }
    }

    #[test]
    fn stream_contains_family_shape() {
        let cfg = SearchConfig::new(4, 3).with_twist_bound(2).with_multiplicity_bound(1);
        let listed: Vec<String> = enumerate_candidates(&cfg).unwrap().map(|m| m.to_string()).collect();
        for a in -2..=2 {
            let m = MonadCandidate::parse(&format!("O -> O({a}) + S'(1) + S''(1) -> O(1)"), q(4)).unwrap();
            assert!(listed.contains(&m.to_string()), "{m}");
        }
    }

    #[test]
    fn disabled_spinors_give_line_middles() {
        let cfg = SearchConfig::new(4, 3).with_twist_bound(1).with_multiplicity_bound(2).without_spinors();
        assert!(enumerate_candidates(&cfg).unwrap().all(|m| m.b().is_line_only()));
    }

    #[test]
    fn pruned_equals_exhaustive_on_small_bounds() {
        for cfg in [
            SearchConfig::new(4, 3).with_twist_bound(2).with_multiplicity_bound(2),
            SearchConfig::new(4, 2).with_twist_bound(2).with_multiplicity_bound(2),
            SearchConfig::new(5, 3).with_twist_bound(1).with_multiplicity_bound(2),
            SearchConfig::new(5, 2).with_twist_bound(2).with_multiplicity_bound(1),
        ] {
            assert_eq!(pruned_survivors(&cfg).unwrap(), exhaustive_survivors(&cfg).unwrap(), "{cfg:?}");
        }
    }

    #[test]
    fn q4_rank3_list() {
        let r = classify_rank3(&SearchConfig::new(4, 3)).unwrap();
        assert_eq!(r.labels(), ["(1)", "(2)", "(5)"]);
        assert!(r.matches_expected(), "{:?}", r.missing);
        assert_eq!(r.survivors[2].parameter_values, [-5, -4, -3, -2, -1, 2, 3, 4, 5]);
        assert_eq!(r.survivors[2].constraint.as_deref(), Some(FAMILY_CONSTRAINT));
        assert_eq!(r.rejected_count + r.survivor_monads.len() as u64, count_candidates(&r.config).unwrap());
    }

    #[test]
    fn higher_lists() {
        let labels = |n, rank| classify(&SearchConfig::new(n, rank)).unwrap().labels();
        assert_eq!(labels(5, 3), ["(3)", "(4)", "(5')"]);
        assert_eq!(labels(6, 3), ["(6)", "(7)", "(8)", "(9)"]);
        assert!(labels(7, 3).is_empty());
        assert!(labels(8, 3).is_empty());
        assert_eq!(labels(4, 2), ["Z4"]);
        assert_eq!(labels(5, 2), ["Z5"]);
        assert!(labels(6, 2).is_empty());
    }

    #[test]
    fn samples_record_first_fatal() {
        let cfg = SearchConfig::new(4, 3).with_twist_bound(1).with_multiplicity_bound(1).with_trace(5);
        let r = classify(&cfg).unwrap();
        assert_eq!(r.sample_rejections.len(), 5);
        for s in &r.sample_rejections {
            let m = MonadCandidate::parse(&s.monad, q(4)).unwrap();
            assert_eq!(check_monad(&m, Mode::FirstFatal).first_fatal(), Some(s.fatal.as_str()));
        }
    }

    #[test]
    fn result_json_round_trip() {
        let r = classify(&SearchConfig::new(5, 3).with_twist_bound(3).with_trace(2)).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        let back: ClassificationResult = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn bad_configs() {
        assert_eq!(classify(&SearchConfig::new(3, 3)).unwrap_err(), ClassifyError::UnsupportedSpace(3));
        assert_eq!(classify(&SearchConfig::new(4, 4)).unwrap_err(), ClassifyError::UnsupportedRank(4));
        assert_eq!(classify_rank2(&SearchConfig::new(4, 3)).unwrap_err(), ClassifyError::UnsupportedRank(3));
        assert_eq!(classify(&SearchConfig::new(4, 3).with_twist_bound(0)).unwrap_err(), ClassifyError::BadTwistBound);
        assert!(expected_results(q(9), 3).is_err());
        assert!(expected_results(q(8), 3).unwrap().is_empty());
    }

    #[test]
    fn rank4_cokernel() {
        let h = crate::parse::parse_bundle_expr("S' + S'' + O(1)", q(4)).unwrap();
        let d = counterexample_rank4(&h).unwrap();
        assert_eq!(d.rank, 4);
        assert_eq!(d.inner_cohomology, Verdict::Pass);
        assert_eq!(d.chern_class, Some(h.total_chern().unwrap()));
        // S' and S'' have no sections, so a map O -> H factors through O(1) and vanishes on a hyperplane
        assert_eq!(d.subbundle, Verdict::Fail);

        let g = crate::parse::parse_bundle_expr("S'(1) + S''(1) + O(1)", q(4)).unwrap();
        assert_eq!(counterexample_rank4(&g).unwrap().subbundle, Verdict::Pass);

        let small = crate::parse::parse_bundle_expr("S'(1) + S''(1)", q(4)).unwrap();
        assert!(matches!(counterexample_rank4(&small), Err(ClassifyError::NotApplicable(_))));
    }
}
