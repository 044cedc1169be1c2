//! Graded cohomology `H^i_*(E) = ⊕_t H^i(E(t))` of bundle expressions on `Q_n`.
//!
//! Line and spinor atoms are ACM, so only `H^0_*` and `H^n_*` are nonzero for them. Products of
//! two spinors on `Q_4` come from a versioned fact table; everything else is [`GradedModule::Unknown`].

use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bundle::{binomial, Atom, BundleError, BundleExpr, SpinorKind};
use crate::chow::QuadricSpace;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("module is unknown")]
    UnknownModule,
    #[error("module is not finitely generated (top cohomology)")]
    NotFinitelyGenerated,
    #[error("tensor fact table, line {line}: {msg}")]
    BadFacts { line: usize, msg: String },
    #[error(transparent)]
    Bundle(#[from] BundleError),
}

/// Graded dimension data of one cohomology module. Degree `t` means `H^i(E(t))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "lowercase")]
pub enum GradedModule {
    Zero,
    /// Minimal generator degrees of `H^0_*` of an ACM bundle.
    Free(Vec<i64>),
    /// Finite length module, degree to dimension.
    Finite(BTreeMap<i64, u64>),
    /// Graded dual of a free module: `H^n_*` of an ACM bundle, recorded by the top degrees.
    Cofree(Vec<i64>),
    Unknown,
}

impl GradedModule {
    pub fn finite(entries: impl IntoIterator<Item = (i64, u64)>) -> GradedModule {
        let mut map = BTreeMap::new();
        for (d, k) in entries {
            if k > 0 {
                *map.entry(d).or_insert(0) += k;
            }
        }
        if map.is_empty() {
            GradedModule::Zero
        } else {
            GradedModule::Finite(map)
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, GradedModule::Zero)
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, GradedModule::Unknown)
    }

    /// Direct sum.
    pub fn sum(&self, other: &GradedModule) -> GradedModule {
        use GradedModule::*;
        match (self, other) {
            (Zero, x) | (x, Zero) => x.clone(),
            (Unknown, _) | (_, Unknown) => Unknown,
            (Free(a), Free(b)) => Free(sorted_concat(a, b)),
            (Cofree(a), Cofree(b)) => Cofree(sorted_concat(a, b)),
            (Finite(a), Finite(b)) => GradedModule::finite(a.iter().chain(b).map(|(d, k)| (*d, *k))),
            // mixed shapes do not occur for the atoms handled here
            _ => Unknown,
        }
    }

    /// The module of `E(k)` given that of `E`.
    pub fn shifted(&self, k: i64) -> GradedModule {
        use GradedModule::*;
        match self {
            Zero => Zero,
            Unknown => Unknown,
            Free(g) => Free(g.iter().map(|d| d - k).collect()),
            Cofree(g) => Cofree(g.iter().map(|d| d - k).collect()),
            Finite(m) => Finite(m.iter().map(|(d, v)| (d - k, *v)).collect()),
        }
    }

    /// The module in row `n - i` of the dual bundle: degree `d` goes to `-d - n`.
    pub fn serre_dual(&self, n: u32) -> GradedModule {
        use GradedModule::*;
        let flip = |d: &i64| -d - n as i64;
        match self {
            Zero => Zero,
            Unknown => Unknown,
            Free(g) => Cofree(sorted(g.iter().map(flip).collect())),
            Cofree(g) => Free(sorted(g.iter().map(flip).collect())),
            Finite(m) => Finite(m.iter().map(|(d, v)| (flip(d), *v)).collect()),
        }
    }
}

fn sorted(mut v: Vec<i64>) -> Vec<i64> {
    v.sort_unstable();
    v
}

fn sorted_concat(a: &[i64], b: &[i64]) -> Vec<i64> {
    sorted(a.iter().chain(b).copied().collect())
}

/// Total number of minimal generators.
///
/// Finite modules are assumed to have trivial multiplication, so every basis vector is a
/// generator; see [`assumes_trivial_multiplication`].
pub fn betti0(module: &GradedModule) -> Result<u64, CohomologyError> {
    match module {
        GradedModule::Zero => Ok(0),
        GradedModule::Free(g) => Ok(g.len() as u64),
        GradedModule::Finite(m) => Ok(m.values().sum()),
        GradedModule::Cofree(_) => Err(CohomologyError::NotFinitelyGenerated),
        GradedModule::Unknown => Err(CohomologyError::UnknownModule),
    }
}

/// Number of minimal generators in degree `j`.
pub fn betti0j(module: &GradedModule, j: i64) -> Result<u64, CohomologyError> {
    match module {
        GradedModule::Zero => Ok(0),
        GradedModule::Free(g) => Ok(g.iter().filter(|&&d| d == j).count() as u64),
        GradedModule::Finite(m) => Ok(m.get(&j).copied().unwrap_or(0)),
        GradedModule::Cofree(_) => Err(CohomologyError::NotFinitelyGenerated),
        GradedModule::Unknown => Err(CohomologyError::UnknownModule),
    }
}

/// Degrees in which [`betti0j`] can be nonzero.
pub fn generator_degrees(module: &GradedModule) -> Vec<i64> {
    match module {
        GradedModule::Free(g) => g.clone(),
        GradedModule::Finite(m) => m.keys().copied().collect(),
        _ => Vec::new(),
    }
}

/// True when a Betti number of `module` relies on the trivial-multiplication assumption.
pub fn assumes_trivial_multiplication(module: &GradedModule) -> bool {
    matches!(module, GradedModule::Finite(m) if m.values().sum::<u64>() > 1)
}

/// `dim H^0(Q_n, O(t))`: degree-`t` part of the coordinate ring of a quadric.
pub fn line_sections(n: u32, t: i64) -> u64 {
    if t < 0 {
        return 0;
    }
    let t = t as u64;
    let n = n as u64;
    binomial(t + n + 1, n + 1) - if t >= 2 { binomial(t + n - 1, n + 1) } else { 0 }
}

/// `dim H^0(Q_n, S(t))` for any spinor bundle `S`, from `0 -> S -> O^{2r} -> S(1) -> 0`
/// (families may swap; both families have the same dimensions).
pub fn spinor_sections(n: u32, t: i64) -> u64 {
    let space = QuadricSpace::new(n).expect("n >= 2");
    let width = 2 * space.spinor_rank();
    let mut prev = 0u64;
    for u in 1..=t {
        prev = width * line_sections(n, u - 1) - prev;
    }
    if t >= 1 {
        prev
    } else {
        0
    }
}

type PairKey = (u32, SpinorKind, SpinorKind);

#[derive(Debug, Clone, PartialEq, Eq)]
struct PairFacts {
    rows: RangeInclusive<usize>,
    dims: BTreeMap<(usize, i64), u64>,
}

/// Parsed tensor-fact table.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TensorFacts {
    pairs: BTreeMap<PairKey, PairFacts>,
}

pub const TENSOR_FACTS_SOURCE: &str = include_str!("../data/tensor_facts.txt");

fn parse_pair(s: &str) -> Option<(SpinorKind, SpinorKind)> {
    let kind = |x: &str| match x {
        "S'" => Some(SpinorKind::Plus),
        "S''" => Some(SpinorKind::Minus),
        "S" => Some(SpinorKind::Odd),
        _ => None,
    };
    let (l, r) = s.split_once('*')?;
    let (a, b) = (kind(l)?, kind(r)?);
    Some(if a <= b { (a, b) } else { (b, a) })
}

impl TensorFacts {
    pub fn parse(text: &str) -> Result<TensorFacts, CohomologyError> {
        let mut facts = TensorFacts::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |msg: &str| CohomologyError::BadFacts { line, msg: msg.to_string() };
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            if fields[0] == "rows" {
                let [_, n, pair, range] = fields[..] else {
                    return Err(err("expected `rows n pair lo..hi`"));
                };
                let n: u32 = n.parse().map_err(|_| err("bad n"))?;
                let (a, b) = parse_pair(pair).ok_or_else(|| err("bad pair"))?;
                let (lo, hi) = range.split_once("..").ok_or_else(|| err("bad range"))?;
                let lo: usize = lo.parse().map_err(|_| err("bad range"))?;
                let hi: usize = hi.parse().map_err(|_| err("bad range"))?;
                if hi > n as usize || lo > hi {
                    return Err(err("row range outside 0..=n"));
                }
                let prev = facts.pairs.insert((n, a, b), PairFacts { rows: lo..=hi, dims: BTreeMap::new() });
                if prev.is_some() {
                    return Err(err("pair declared twice"));
                }
            } else {
                let [n, pair, i, degree, dim] = fields[..] else {
                    return Err(err("expected `n pair i degree dim`"));
                };
                let n: u32 = n.parse().map_err(|_| err("bad n"))?;
                let (a, b) = parse_pair(pair).ok_or_else(|| err("bad pair"))?;
                let i: usize = i.parse().map_err(|_| err("bad row"))?;
                let degree: i64 = degree.parse().map_err(|_| err("bad degree"))?;
                let dim: u64 = dim.parse().map_err(|_| err("bad dim"))?;
                let entry = facts.pairs.get_mut(&(n, a, b)).ok_or_else(|| err("pair has no `rows` declaration"))?;
                if !entry.rows.contains(&i) {
                    return Err(err("row outside the declared range"));
                }
                if dim == 0 || entry.dims.insert((i, degree), dim).is_some() {
                    return Err(err("dimension must be positive and listed once"));
                }
            }
        }
        Ok(facts)
    }

    /// The table shipped with the crate.
    pub fn builtin() -> &'static TensorFacts {
        static FACTS: OnceLock<TensorFacts> = OnceLock::new();
        FACTS.get_or_init(|| TensorFacts::parse(TENSOR_FACTS_SOURCE).expect("shipped tensor facts parse"))
    }

    fn lookup(&self, n: u32, left: SpinorKind, right: SpinorKind) -> Option<&PairFacts> {
        self.pairs.get(&(n, left, right))
    }

    /// `(n, pair, i, degree, dim)` rows, for display.
    pub fn entries(&self) -> Vec<(u32, String, usize, i64, u64)> {
        let mut out = Vec::new();
        for ((n, a, b), f) in &self.pairs {
            for ((i, d), v) in &f.dims {
                out.push((*n, format!("{}*{}", a.symbol(), b.symbol()), *i, *d, *v));
            }
        }
        out
    }

    /// Declared row ranges, for display.
    pub fn declared_rows(&self) -> Vec<(u32, String, RangeInclusive<usize>)> {
        self.pairs
            .iter()
            .map(|((n, a, b), f)| (*n, format!("{}*{}", a.symbol(), b.symbol()), f.rows.clone()))
            .collect()
    }
}

/// Module in row `i` for one atom.
pub fn atom_row(space: &QuadricSpace, atom: &Atom, i: usize) -> GradedModule {
    let n = space.n() as usize;
    match *atom {
        Atom::Line(a) => match i {
            0 => GradedModule::Free(vec![-a]),
            _ if i == n => GradedModule::Cofree(vec![-a - n as i64]),
            _ => GradedModule::Zero,
        },
        Atom::Spinor(_, u) => {
            let width = 2 * space.spinor_rank() as usize;
            match i {
                0 => GradedModule::Free(vec![1 - u; width]),
                _ if i == n => GradedModule::Cofree(vec![-u - n as i64; width]),
                _ => GradedModule::Zero,
            }
        }
        Atom::TensorPair { left, right } => {
            let total = left.1 + right.1;
            match TensorFacts::builtin().lookup(space.n(), left.0, right.0) {
                Some(f) if f.rows.contains(&i) => GradedModule::finite(
                    f.dims.iter().filter(|((r, _), _)| *r == i).map(|((_, d), v)| (d - total, *v)),
                ),
                _ => GradedModule::Unknown,
            }
        }
        Atom::SpinorWedge2 { .. } => GradedModule::Unknown,
    }
}

/// `dim H^i(E(t))` for one atom, when known.
pub fn atom_dim(space: &QuadricSpace, atom: &Atom, i: usize, t: i64) -> Option<u64> {
    let n = space.n();
    let top = i == n as usize;
    match *atom {
        Atom::Line(a) => Some(match i {
            0 => line_sections(n, a + t),
            _ if top => line_sections(n, -(a + t) - n as i64),
            _ => 0,
        }),
        Atom::Spinor(_, u) => Some(match i {
            0 => spinor_sections(n, u + t),
            _ if top => spinor_sections(n, 1 - (u + t) - n as i64),
            _ => 0,
        }),
        Atom::TensorPair { .. } => match atom_row(space, atom, i) {
            GradedModule::Zero => Some(0),
            GradedModule::Finite(m) => Some(m.get(&t).copied().unwrap_or(0)),
            _ => None,
        },
        Atom::SpinorWedge2 { .. } => None,
    }
}

/// Rows `H^0_*` through `H^n_*` of a bundle expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyTable {
    expr: BundleExpr,
    rows: Vec<GradedModule>,
}

impl CohomologyTable {
    pub fn expr(&self) -> &BundleExpr {
        &self.expr
    }

    pub fn space(&self) -> QuadricSpace {
        self.expr.space()
    }

    pub fn rows(&self) -> &[GradedModule] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &GradedModule {
        &self.rows[i]
    }

    /// `dim H^i(E(t))`, or `None` when some summand is not tabulated.
    pub fn dim(&self, i: usize, t: i64) -> Option<u64> {
        let space = self.space();
        self.expr
            .atoms()
            .map(|(a, k)| atom_dim(&space, &a, i, t).map(|d| d * k as u64))
            .sum()
    }

    /// True when `H^2_* = ... = H^{n-2}_* = 0`.
    pub fn inner_vanishing(&self) -> Option<bool> {
        let n = self.space().n() as usize;
        let inner = &self.rows[2..=n - 2];
        if inner.iter().any(|r| !r.is_zero() && !r.is_unknown()) {
            Some(false)
        } else if inner.iter().any(GradedModule::is_unknown) {
            None
        } else {
            Some(true)
        }
    }
}

/// Cohomology table of `e`: summands are added row by row.
pub fn cohomology(e: &BundleExpr) -> CohomologyTable {
    let space = e.space();
    let n = space.n() as usize;
    let rows = (0..=n)
        .map(|i| {
            e.atoms().fold(GradedModule::Zero, |acc, (a, k)| {
                let row = atom_row(&space, &a, i);
                (0..k).fold(acc, |acc, _| acc.sum(&row))
            })
        })
        .collect();
    CohomologyTable { expr: e.clone(), rows }
}

/// Table of the dual bundle from Serre duality, `H^i(E(k)) ≅ H^{n-i}(E^∨(-k-n))^*`.
pub fn serre_dual(table: &CohomologyTable) -> Result<CohomologyTable, CohomologyError> {
    let n = table.space().n();
    let expr = table.expr.dual()?;
    let rows = (0..=n as usize).map(|i| table.rows[n as usize - i].serre_dual(n)).collect();
    Ok(CohomologyTable { expr, rows })
}
