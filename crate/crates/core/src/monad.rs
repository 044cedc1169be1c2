//! Structural feasibility checks for minimal monads `0 -> A -> B -> C -> 0` with `A`, `C` sums of
//! line bundles and `B` ACM. No maps are ever built: every rule is a necessary condition, so a
//! `fail` is definitive while a `pass` only means "not excluded".

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::bundle::{Atom, BundleError, BundleExpr};
use crate::chow::{ChowClass, ChowError, QuadricSpace};
use crate::cohomology::{atom_dim, atom_row, betti0, betti0j, cohomology, generator_degrees, GradedModule};
use crate::parse::{parse_monad_terms, ParseError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonadError {
    #[error("monad terms live on different quadrics")]
    SpaceMismatch,
    #[error("{0} must be a sum of line bundles")]
    NotLineSum(&'static str),
    #[error("the middle term must be a nonempty ACM bundle")]
    BadMiddle,
    #[error("homology rank would be {0}")]
    NonPositiveRank(i64),
    #[error("expected {0}")]
    Shape(String),
    #[error("restriction needs n >= 5")]
    NoRestriction,
    #[error("extending by O({0}) breaks minimality")]
    MinimalityCollision(i64),
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error(transparent)]
    Chow(#[from] ChowError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// `A -> B -> C` without maps.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonadCandidate {
    a: BundleExpr,
    b: BundleExpr,
    c: BundleExpr,
}

impl MonadCandidate {
    pub fn new(a: BundleExpr, b: BundleExpr, c: BundleExpr) -> Result<Self, MonadError> {
        if a.space() != b.space() || b.space() != c.space() {
            return Err(MonadError::SpaceMismatch);
        }
        if !a.is_line_only() {
            return Err(MonadError::NotLineSum("A"));
        }
        if !c.is_line_only() {
            return Err(MonadError::NotLineSum("C"));
        }
        if b.is_empty() || !b.is_acm() {
            return Err(MonadError::BadMiddle);
        }
        let r = b.rank() as i64 - a.rank() as i64 - c.rank() as i64;
        if r < 1 {
            return Err(MonadError::NonPositiveRank(r));
        }
        Ok(Self { a, b, c })
    }

    pub fn parse(src: &str, space: QuadricSpace) -> Result<Self, MonadError> {
        let [a, b, c] = parse_monad_terms(src, space)?;
        Self::new(a, b, c)
    }

    pub fn space(&self) -> QuadricSpace {
        self.b.space()
    }

    pub fn a(&self) -> &BundleExpr {
        &self.a
    }

    pub fn b(&self) -> &BundleExpr {
        &self.b
    }

    pub fn c(&self) -> &BundleExpr {
        &self.c
    }

    pub fn homology_rank(&self) -> u64 {
        self.b.rank() - self.a.rank() - self.c.rank()
    }

    pub fn twist(&self, k: i64) -> MonadCandidate {
        MonadCandidate { a: self.a.twist(k), b: self.b.twist(k), c: self.c.twist(k) }
    }

    /// Twist so that the lowest summand of `C` is `O(1)`, or the highest of `A` is `O` when `C = 0`.
    pub fn normalize(&self) -> MonadCandidate {
        self.twist(self.normalizing_twist())
    }

    fn normalizing_twist(&self) -> i64 {
        if let Some(&lo) = self.c.line_twists().first() {
            1 - lo
        } else if let Some(&hi) = self.a.line_twists().last() {
            -hi
        } else {
            0
        }
    }

    pub fn is_normalized(&self) -> bool {
        self.normalizing_twist() == 0
    }
}

impl fmt::Display for MonadCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} -> {}", self.a, self.b, self.c)
    }
}

#[derive(Serialize, Deserialize)]
struct CandidateRepr {
    n: u32,
    monad: String,
}

impl Serialize for MonadCandidate {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CandidateRepr { n: self.space().n(), monad: self.to_string() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MonadCandidate {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = CandidateRepr::deserialize(d)?;
        let space = QuadricSpace::new(repr.n).map_err(serde::de::Error::custom)?;
        MonadCandidate::parse(&repr.monad, space).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Unknown => "unknown",
        })
    }
}

/// Machine-readable code plus a sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reason {
    pub code: String,
    pub detail: String,
}

impl Reason {
    fn new(code: &str, detail: impl Into<String>) -> Self {
        Reason { code: code.to_string(), detail: detail.into() }
    }
}

/// Conditions in pipeline order; the first failing one is the rejection trace.
pub const PIPELINE: [&str; 9] = [
    "condition_3",
    "condition_1",
    "condition_2",
    "minimality",
    "injectivity",
    "surjectivity",
    "kernel_top_chern",
    "restriction",
    "prior_rank2",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub candidate: MonadCandidate,
    pub verdicts: BTreeMap<String, Verdict>,
    pub reasons: BTreeMap<String, Reason>,
    pub fatal: bool,
}

impl CheckReport {
    fn new(candidate: &MonadCandidate) -> Self {
        CheckReport { candidate: candidate.clone(), verdicts: BTreeMap::new(), reasons: BTreeMap::new(), fatal: false }
    }

    fn record(&mut self, name: &str, verdict: Verdict, reason: Reason) {
        self.verdicts.insert(name.to_string(), verdict);
        self.reasons.insert(name.to_string(), reason);
        self.fatal |= verdict == Verdict::Fail;
    }

    fn absorb(&mut self, other: CheckReport) {
        for (k, v) in other.verdicts {
            let r = other.reasons[&k].clone();
            self.record(&k, v, r);
        }
    }

    pub fn verdict(&self, name: &str) -> Option<Verdict> {
        self.verdicts.get(name).copied()
    }

    /// First failing condition in [`PIPELINE`] order.
    pub fn first_fatal(&self) -> Option<&'static str> {
        PIPELINE.iter().copied().find(|c| self.verdict(c) == Some(Verdict::Fail))
    }

    pub fn has_unknown(&self) -> bool {
        self.verdicts.values().any(|v| *v == Verdict::Unknown)
    }
}

/// Row `i` of an expression, split into the tabulated part and a flag for untabulated atoms.
fn known_row(e: &BundleExpr, i: usize) -> (GradedModule, bool) {
    let space = e.space();
    let mut known = GradedModule::Zero;
    let mut unknown = false;
    for (a, k) in e.atoms() {
        let row = atom_row(&space, &a, i);
        if row.is_unknown() {
            unknown = true;
        } else {
            for _ in 0..k {
                known = known.sum(&row);
            }
        }
    }
    (known, unknown)
}

/// `H^1_*(∧²X) ≠ 0` and the Betti inequalities against `H^0_*(S_2 Y)`.
fn betti_condition(x: &BundleExpr, y: &BundleExpr, label: &str) -> Result<(Verdict, Reason), MonadError> {
    let (h1, partial) = known_row(&x.wedge2()?, 1);
    let s2 = cohomology(&y.sym2()?).row(0).clone();
    if h1.is_zero() {
        return Ok(if partial {
            (Verdict::Unknown, Reason::new("h1_untabulated", format!("H^1_*(wedge2 {label}) involves untabulated summands")))
        } else {
            (Verdict::Fail, Reason::new("h1_wedge2_zero", format!("H^1_*(wedge2 {label}) = 0")))
        });
    }
    let have = betti0(&h1).expect("finite or zero");
    let need = betti0(&s2).expect("free");
    let undecided = |code: &str, detail: String| {
        if partial {
            Ok((Verdict::Unknown, Reason::new(code, format!("{detail}; untabulated summands could add generators"))))
        } else {
            Ok((Verdict::Fail, Reason::new(code, detail)))
        }
    };
    if have < need {
        return undecided("betti0_total", format!("beta_0(H^1_*(wedge2 {label})) = {have} < {need} = beta_0(H^0_*(S_2))"));
    }
    for j in generator_degrees(&s2) {
        let (h, s) = (betti0j(&h1, j).expect("finite"), betti0j(&s2, j).expect("free"));
        if h < s {
            return undecided("betti0_degree", format!("in degree {j}: beta_0j(H^1_*(wedge2 {label})) = {h} < {s}"));
        }
    }
    Ok((Verdict::Pass, Reason::new("betti_ok", format!("H^1_*(wedge2 {label}) has {have} generator(s), S_2 needs {need}"))))
}

fn h2_vanishing(x: &BundleExpr, label: &str) -> Result<(Verdict, Reason), MonadError> {
    let (h2, partial) = known_row(&x.wedge2()?, 2);
    Ok(if !h2.is_zero() {
        (Verdict::Fail, Reason::new("h2_wedge2_nonzero", format!("H^2_*(wedge2 {label}) != 0")))
    } else if partial {
        (Verdict::Unknown, Reason::new("h2_untabulated", format!("H^2_*(wedge2 {label}) involves untabulated summands")))
    } else {
        (Verdict::Pass, Reason::new("h2_zero", format!("H^2_*(wedge2 {label}) = 0")))
    })
}

/// The three cohomological conditions a minimal monad of a bundle without inner cohomology obeys.
pub fn check_theorem_conditions(m: &MonadCandidate) -> Result<CheckReport, MonadError> {
    let mut r = CheckReport::new(m);
    condition_3(m, &mut r)?;
    condition_1(m, &mut r)?;
    condition_2(m, &mut r)?;
    Ok(r)
}

/// Condition 1 for middle term `b` and right term `c`. Only the non-line part of `b` matters.
pub fn condition_1_parts(b: &BundleExpr, c: &BundleExpr) -> Result<(Verdict, Reason), MonadError> {
    if c.is_empty() {
        return Ok((Verdict::Pass, Reason::new("vacuous", "C = 0")));
    }
    betti_condition(b, c, "B")
}

/// Condition 2 for middle term `b` and left term `a`: condition 1 for the dual monad.
pub fn condition_2_parts(b: &BundleExpr, a: &BundleExpr) -> Result<(Verdict, Reason), MonadError> {
    if a.is_empty() {
        return Ok((Verdict::Pass, Reason::new("vacuous", "A = 0")));
    }
    betti_condition(&b.dual()?, &a.dual()?, "B^dual")
}

/// Condition 3 for middle term `b`. A known nonzero summand fails it for every `b` containing it.
pub fn condition_3_parts(b: &BundleExpr) -> Result<(Verdict, Reason), MonadError> {
    let (v1, why1) = h2_vanishing(b, "B")?;
    let (v2, why2) = h2_vanishing(&b.dual()?, "B^dual")?;
    Ok(match (v1, v2) {
        (Verdict::Fail, _) => (v1, why1),
        (_, Verdict::Fail) => (v2, why2),
        (Verdict::Unknown, _) => (v1, why1),
        (_, Verdict::Unknown) => (v2, why2),
        _ => (Verdict::Pass, Reason::new("h2_zero", "H^2_*(wedge2 B) = H^2_*(wedge2 B^dual) = 0")),
    })
}

fn condition_1(m: &MonadCandidate, r: &mut CheckReport) -> Result<(), MonadError> {
    let (v, why) = condition_1_parts(&m.b, &m.c)?;
    r.record("condition_1", v, why);
    Ok(())
}

fn condition_2(m: &MonadCandidate, r: &mut CheckReport) -> Result<(), MonadError> {
    let (v, why) = condition_2_parts(&m.b, &m.a)?;
    r.record("condition_2", v, why);
    Ok(())
}

fn condition_3(m: &MonadCandidate, r: &mut CheckReport) -> Result<(), MonadError> {
    let (v, why) = condition_3_parts(&m.b)?;
    r.record("condition_3", v, why);
    Ok(())
}

/// A degree-0 component between equal line bundles could be an isomorphism.
pub fn check_minimality(m: &MonadCandidate) -> CheckReport {
    let mut r = CheckReport::new(m);
    let b = m.b.line_twists();
    let clash = |x: &BundleExpr| x.line_twists().into_iter().find(|t| b.contains(t));
    let (v, why) = if let Some(t) = clash(&m.a) {
        (Verdict::Fail, Reason::new("shared_twist_ab", format!("O({t}) occurs in A and B")))
    } else if let Some(t) = clash(&m.c) {
        (Verdict::Fail, Reason::new("shared_twist_bc", format!("O({t}) occurs in B and C")))
    } else {
        (Verdict::Pass, Reason::new("no_shared_twist", "no line bundle of A or C reappears in B"))
    };
    r.record("minimality", v, why);
    r
}

fn top_chern(e: &BundleExpr) -> Result<ChowClass, MonadError> {
    let n = e.space().n();
    let r = e.rank().min(n as u64) as u32;
    Ok(e.total_chern()?.component(r))
}

/// Can `O -> b` be a subbundle, i.e. can `b` have a nowhere vanishing section?
pub fn section_feasible(b: &BundleExpr) -> (Verdict, Reason) {
    let space = b.space();
    let n = space.n();
    let sec = b.filtered(|a| atom_dim(&space, a, 0, 0).is_none_or(|d| d > 0));
    if sec.is_empty() {
        return (Verdict::Fail, Reason::new("no_sections", format!("{b} has no global sections")));
    }
    if sec.line_twists().contains(&0) {
        return (Verdict::Pass, Reason::new("constant_section", "O is a summand"));
    }
    let divisors = sec.line_twists().len() as u64;
    let rest = sec.non_line_part();
    // a nowhere vanishing section of a bundle of rank <= n kills its top Chern class
    if sec.rank() <= n as u64 {
        match top_chern(&sec) {
            Ok(c) if !c.is_zero() => {
                return (
                    Verdict::Fail,
                    Reason::new("top_chern", format!("sections live in {sec}, whose top Chern class {c} is nonzero")),
                )
            }
            Ok(_) => {}
            Err(_) => return (Verdict::Unknown, Reason::new("chern_untabulated", format!("no Chern data for {sec}"))),
        }
    }
    // the zero locus of the non-line part is nonempty of dimension >= n - rank, and cutting it
    // with one ample divisor per line summand cannot empty it
    let forced_dim = if rest.is_empty() {
        Some(n as u64)
    } else if rest.rank() <= n as u64 {
        match top_chern(&rest) {
            Ok(c) if !c.is_zero() => Some(n as u64 - rest.rank()),
            Ok(_) => None,
            Err(_) => return (Verdict::Unknown, Reason::new("chern_untabulated", format!("no Chern data for {rest}"))),
        }
    } else {
        None
    };
    match forced_dim {
        Some(d) if d >= divisors => (
            Verdict::Fail,
            Reason::new(
                "forced_zero_locus",
                format!("every section of {sec} vanishes: a locus of dimension >= {d} meets {divisors} hypersurface(s)"),
            ),
        ),
        _ => (Verdict::Pass, Reason::new("nowhere_vanishing_possible", format!("{sec} may have a nowhere vanishing section"))),
    }
}

fn single_line(e: &BundleExpr) -> Option<i64> {
    match e.line_twists().as_slice() {
        [t] => Some(*t),
        _ => None,
    }
}

/// Feasibility of an injective `A = O -> B`.
pub fn check_injectivity_feasible(m: &MonadCandidate) -> Result<CheckReport, MonadError> {
    let mut r = CheckReport::new(m);
    if m.a.is_empty() {
        r.record("injectivity", Verdict::Pass, Reason::new("vacuous", "A = 0"));
        return Ok(r);
    }
    if single_line(&m.a) != Some(0) {
        return Err(MonadError::Shape(format!("A = O, got {}", m.a)));
    }
    let (v, why) = section_feasible(&m.b);
    r.record("injectivity", v, why);
    Ok(r)
}

/// Feasibility of a surjective `B -> C = O(d)`, through the dual monad.
pub fn check_surjectivity_feasible(m: &MonadCandidate) -> Result<CheckReport, MonadError> {
    let mut r = CheckReport::new(m);
    if m.c.is_empty() {
        r.record("surjectivity", Verdict::Pass, Reason::new("vacuous", "C = 0"));
        return Ok(r);
    }
    let Some(d) = single_line(&m.c) else {
        return Err(MonadError::Shape(format!("C = O(d), got {}", m.c)));
    };
    // dual twisted by d puts O in front
    let b = m.b.dual()?.twist(d);
    let (v, why) = section_feasible(&b);
    let spinors: Vec<String> = b.non_line_part().expanded().iter().map(|a| a.to_string()).collect();
    let detail = if spinors.is_empty() {
        format!("dual middle term {b}: {}", why.detail)
    } else {
        format!("dual middle term {b} (needs sections of {}): {}", spinors.join(", "), why.detail)
    };
    r.record("surjectivity", v, Reason::new(&why.code, detail));
    Ok(r)
}

/// `c(K) = c(B) / c(C)` for `K = ker(B -> C)`; `O -> K` must be nowhere vanishing, so the top
/// Chern class of `K` (codimension `min(rank K, n)`) vanishes.
pub fn kernel_top_chern_test(m: &MonadCandidate) -> Result<CheckReport, MonadError> {
    let mut r = CheckReport::new(m);
    if m.a.is_empty() {
        r.record("kernel_top_chern", Verdict::Pass, Reason::new("vacuous", "A = 0"));
        return Ok(r);
    }
    let Some(e) = single_line(&m.a) else {
        return Err(MonadError::Shape(format!("A a single line bundle, got {}", m.a)));
    };
    let t = m.twist(-e);
    let ck = t.b.total_chern()?.divide(&t.c.total_chern()?)?;
    let n = m.space().n();
    let rank = t.b.rank() - t.c.rank();
    let codim = rank.min(n as u64) as u32;
    let top = ck.component(codim);
    let (v, code) = if top.is_zero() { (Verdict::Pass, "top_chern_zero") } else { (Verdict::Fail, "top_chern_nonzero") };
    let detail = if codim == n {
        format!("c_{n}(K) = {top}, degree {}", top.degree())
    } else {
        format!("rank K = {rank}, c_{codim}(K) = {top}")
    };
    r.record("kernel_top_chern", v, Reason::new(code, detail));
    Ok(r)
}

/// Rank and total Chern class of the homology, `c(B) / (c(A) c(C))`.
pub fn homology_invariants(m: &MonadCandidate) -> Result<(u64, ChowClass), MonadError> {
    let denom = m.a.total_chern()?.mul(&m.c.total_chern()?)?;
    Ok((m.homology_rank(), m.b.total_chern()?.divide(&denom)?))
}

/// The dual monad, normalized.
pub fn dualize(m: &MonadCandidate) -> Result<MonadCandidate, MonadError> {
    Ok(MonadCandidate::new(m.c.dual()?, m.b.dual()?, m.a.dual()?)?.normalize())
}

/// Componentwise restriction to `Q_{n-1}`.
pub fn restrict_monad(m: &MonadCandidate) -> Result<MonadCandidate, MonadError> {
    if m.space().n() < 5 {
        return Err(MonadError::NoRestriction);
    }
    MonadCandidate::new(m.a.restrict()?, m.b.restrict()?, m.c.restrict()?)
}

/// `B` replaced by `B + O(a)`: a minimal monad of the old homology plus `O(a)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    pub monad: MonadCandidate,
    /// The homology is the old one plus `O(split_summand)`.
    pub split_summand: i64,
}

pub fn extend_with_line_bundle(m: &MonadCandidate, a: i64) -> Result<Extension, MonadError> {
    if m.a.line_twists().contains(&a) || m.c.line_twists().contains(&a) {
        return Err(MonadError::MinimalityCollision(a));
    }
    let b = m.b.clone().with(Atom::Line(a))?;
    Ok(Extension { monad: MonadCandidate::new(m.a.clone(), b, m.c.clone())?, split_summand: a })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Evaluate every condition.
    Full,
    /// Stop at the first failure.
    FirstFatal,
}

/// Runs every condition in [`PIPELINE`] order.
pub fn check_monad(m: &MonadCandidate, mode: Mode) -> CheckReport {
    let mut r = CheckReport::new(m);
    let stop = |r: &CheckReport| mode == Mode::FirstFatal && r.fatal;
    let steps: [&dyn Fn(&MonadCandidate, &mut CheckReport); 9] = [
        &|m, r| guard(r, "condition_3", |r| condition_3(m, r)),
        &|m, r| guard(r, "condition_1", |r| condition_1(m, r)),
        &|m, r| guard(r, "condition_2", |r| condition_2(m, r)),
        &|m, r| r.absorb(check_minimality(m)),
        &|m, r| step_with_line_front(m, r, "injectivity", true),
        &|m, r| step_with_line_front(m, r, "surjectivity", false),
        &|m, r| match kernel_top_chern_test(m) {
            Ok(x) => r.absorb(x),
            Err(e) => r.record("kernel_top_chern", Verdict::Unknown, Reason::new("not_applicable", e.to_string())),
        },
        &|m, r| restriction_step(m, r),
        &|m, r| prior_rank2_step(m, r),
    ];
    for step in steps {
        step(m, &mut r);
        if stop(&r) {
            break;
        }
    }
    r
}

fn guard(r: &mut CheckReport, name: &str, f: impl FnOnce(&mut CheckReport) -> Result<(), MonadError>) {
    if let Err(e) = f(r) {
        r.record(name, Verdict::Unknown, Reason::new("error", e.to_string()));
    }
}

fn step_with_line_front(m: &MonadCandidate, r: &mut CheckReport, name: &str, injective: bool) {
    let result = if injective {
        match single_line(&m.a) {
            Some(e) => check_injectivity_feasible(&m.twist(-e)),
            None if m.a.is_empty() => check_injectivity_feasible(m),
            None => Err(MonadError::Shape("A a single line bundle".into())),
        }
    } else if m.c.is_empty() || single_line(&m.c).is_some() {
        check_surjectivity_feasible(m)
    } else {
        Err(MonadError::Shape("C a single line bundle".into()))
    };
    match result {
        Ok(x) => {
            let v = x.verdicts[name];
            r.record(name, v, x.reasons[name].clone());
        }
        Err(e) => r.record(name, Verdict::Unknown, Reason::new("not_applicable", e.to_string())),
    }
}

fn restriction_step(m: &MonadCandidate, r: &mut CheckReport) {
    if m.space().n() < 5 {
        r.record("restriction", Verdict::Pass, Reason::new("vacuous", "n = 4"));
        return;
    }
    let lower = match restrict_monad(m) {
        Ok(x) => x,
        Err(e) => {
            r.record("restriction", Verdict::Unknown, Reason::new("error", e.to_string()));
            return;
        }
    };
    let sub = check_monad(&lower, Mode::FirstFatal);
    let axiom = "assuming a minimal monad restricts to a minimal monad";
    match sub.first_fatal() {
        Some(c) => r.record(
            "restriction",
            Verdict::Fail,
            Reason::new("restriction_rejected", format!("restriction {lower} fails {c} on Q_{} ({axiom})", m.space().n() - 1)),
        ),
        None => r.record(
            "restriction",
            Verdict::Pass,
            Reason::new("restriction_admissible", format!("restriction {lower} is admissible on Q_{} ({axiom})", m.space().n() - 1)),
        ),
    }
}

/// On `Q_n`, `n >= 6`, a non-split rank-2 bundle without inner cohomology does not exist
/// (taken as an axiom). With `A`, `C` both nonzero the homology is such a bundle (rank 2) or
/// such a bundle plus a line bundle split off `B` (rank 3).
fn prior_rank2_step(m: &MonadCandidate, r: &mut CheckReport) {
    let n = m.space().n();
    let applies = n >= 6
        && !m.a.is_empty()
        && !m.c.is_empty()
        && (m.homology_rank() <= 2 || (m.homology_rank() == 3 && !m.b.line_twists().is_empty()));
    if applies {
        r.record(
            "prior_rank2",
            Verdict::Fail,
            Reason::new("rank2_axiom", format!("homology would contain a non-split rank-2 bundle without inner cohomology on Q_{n}")),
        );
    } else {
        r.record("prior_rank2", Verdict::Pass, Reason::new("vacuous", "not of the excluded shape"));
    }
}
