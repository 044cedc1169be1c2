//! Dimension chasing along long exact cohomology sequences.
//!
//! Every entry `dim H^i(E(t))` is an interval. For a short exact sequence `0 -> A -> B -> C -> 0`
//! twisted by `t`, the long exact sequence `V_0 -> V_1 -> ...` satisfies `dim V_k = r_{k-1} + r_k`
//! where `r_k` is the rank of `V_k -> V_{k+1}`; intervals on dimensions and ranks are tightened
//! against each other until nothing changes.

use std::ops::RangeInclusive;

use serde::Serialize;
use thiserror::Error;

use crate::chow::QuadricSpace;
use crate::cohomology::CohomologyTable;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LesError {
    #[error("no exact sequence has these dimensions (twist {twist}, {detail})")]
    Inconsistent { twist: i64, detail: String },
    #[error("tables disagree on {0}")]
    Mismatch(String),
    #[error("ranks do not add up: {0} != {1} + {2}")]
    RankMismatch(u64, u64, u64),
}

/// Closed interval of dimensions; `hi = None` is unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Interval {
    pub lo: u64,
    pub hi: Option<u64>,
}

impl Interval {
    pub const UNKNOWN: Interval = Interval { lo: 0, hi: None };

    pub fn exact(v: u64) -> Interval {
        Interval { lo: v, hi: Some(v) }
    }

    pub fn value(&self) -> Option<u64> {
        (self.hi == Some(self.lo)).then_some(self.lo)
    }

    pub fn is_exact(&self) -> bool {
        self.value().is_some()
    }

    fn meet(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = match (self.hi, other.hi) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, None) => a,
            (None, b) => b,
        };
        match hi {
            Some(h) if h < lo => None,
            _ => Some(Interval { lo, hi }),
        }
    }
}

fn add(a: Interval, b: Interval) -> Interval {
    Interval { lo: a.lo + b.lo, hi: a.hi.zip(b.hi).map(|(x, y)| x + y) }
}

/// Values `x` with `a + x` in `v`, for some `a` in the given interval.
fn diff(v: Interval, a: Interval) -> Interval {
    let lo = match a.hi {
        Some(h) => v.lo.saturating_sub(h),
        None => 0,
    };
    let hi = v.hi.map(|h| h.saturating_sub(a.lo));
    Interval { lo, hi }
}

/// Tightens the dimensions of one exact sequence `0 -> V_0 -> ... -> V_{L-1} -> 0`.
/// Returns whether anything changed, or `None` if the dimensions admit no exact sequence.
pub fn propagate_chain(dims: &mut [Interval]) -> Option<bool> {
    let len = dims.len();
    // rank of V_k -> V_{k+1}; the last map goes to zero
    let mut ranks: Vec<Interval> = (0..len)
        .map(|k| {
            if k + 1 == len {
                Interval::exact(0)
            } else {
                let hi = match (dims[k].hi, dims[k + 1].hi) {
                    (Some(a), Some(b)) => Some(a.min(b)),
                    (a, None) => a,
                    (None, b) => b,
                };
                Interval { lo: 0, hi }
            }
        })
        .collect();
    let before = dims.to_vec();
    loop {
        let mut changed = false;
        for k in 0..len {
            let prev = if k == 0 { Interval::exact(0) } else { ranks[k - 1] };
            let v = dims[k].meet(&add(prev, ranks[k]))?;
            let r = ranks[k].meet(&diff(v, prev))?;
            let p = prev.meet(&diff(v, r))?;
            changed |= v != dims[k] || r != ranks[k] || p != prev;
            dims[k] = v;
            ranks[k] = r;
            if k > 0 {
                ranks[k - 1] = p;
            } else if p.lo > 0 {
                return None;
            }
        }
        if !changed {
            break;
        }
    }
    Some(dims != before.as_slice())
}

/// Interval-valued `dim H^i(E(t))` over a window of twists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimTable {
    space: QuadricSpace,
    window: RangeInclusive<i64>,
    rank: Option<u64>,
    cells: Vec<Vec<Interval>>,
}

impl DimTable {
    pub fn unknown(space: QuadricSpace, window: RangeInclusive<i64>) -> DimTable {
        let width = (window.end() - window.start() + 1).max(0) as usize;
        let cells = vec![vec![Interval::UNKNOWN; width]; space.n() as usize + 1];
        DimTable { space, window, rank: None, cells }
    }

    pub fn from_table(table: &CohomologyTable, window: RangeInclusive<i64>) -> DimTable {
        let mut out = DimTable::unknown(table.space(), window.clone());
        out.rank = Some(table.expr().rank());
        for i in 0..=table.space().n() as usize {
            for t in window.clone() {
                if let Some(d) = table.dim(i, t) {
                    out.cells[i][(t - window.start()) as usize] = Interval::exact(d);
                }
            }
        }
        out
    }

    pub fn with_rank(mut self, rank: u64) -> DimTable {
        self.rank = Some(rank);
        self
    }

    pub fn space(&self) -> QuadricSpace {
        self.space
    }

    pub fn window(&self) -> RangeInclusive<i64> {
        self.window.clone()
    }

    pub fn get(&self, i: usize, t: i64) -> Option<Interval> {
        if !self.window.contains(&t) || i >= self.cells.len() {
            return None;
        }
        Some(self.cells[i][(t - self.window.start()) as usize])
    }

    /// Known dimension, if pinned down.
    pub fn value(&self, i: usize, t: i64) -> Option<u64> {
        self.get(i, t).and_then(|v| v.value())
    }

    pub fn set(&mut self, i: usize, t: i64, v: Interval) {
        if self.window.contains(&t) {
            self.cells[i][(t - self.window.start()) as usize] = v;
        }
    }

    /// Intersects an entry with `v`. Out-of-window entries are ignored.
    fn refine(&mut self, i: usize, t: i64, v: Interval) -> Result<bool, LesError> {
        let Some(cur) = self.get(i, t) else {
            return Ok(false);
        };
        let next = cur.meet(&v).ok_or_else(|| LesError::Inconsistent {
            twist: t,
            detail: format!("H^{i} cannot lie in both {cur:?} and {v:?}"),
        })?;
        self.set(i, t, next);
        Ok(next != cur)
    }

    /// Alternating sum at twist `t`, if every entry is known.
    pub fn euler_characteristic(&self, t: i64) -> Option<i64> {
        (0..self.cells.len())
            .map(|i| self.value(i, t).map(|d| if i % 2 == 0 { d as i64 } else { -(d as i64) }))
            .sum()
    }
}

/// Refines the three tables of an exact triple `0 -> A -> B -> C -> 0` twist by twist.
pub fn les_propagate(a: &DimTable, b: &DimTable, c: &DimTable) -> Result<(DimTable, DimTable, DimTable), LesError> {
    if a.space != b.space || b.space != c.space {
        return Err(LesError::Mismatch("quadric".into()));
    }
    if a.window != b.window || b.window != c.window {
        return Err(LesError::Mismatch("twist window".into()));
    }
    if let (Some(ra), Some(rb), Some(rc)) = (a.rank, b.rank, c.rank) {
        if rb != ra + rc {
            return Err(LesError::RankMismatch(rb, ra, rc));
        }
    }
    let mut out = [a.clone(), b.clone(), c.clone()];
    let rows = a.cells.len();
    for t in a.window.clone() {
        let mut chain: Vec<Interval> = (0..rows)
            .flat_map(|i| out.iter().map(move |tab| (i, tab)))
            .map(|(i, tab)| tab.get(i, t).expect("in window"))
            .collect();
        if propagate_chain(&mut chain).is_none() {
            return Err(LesError::Inconsistent { twist: t, detail: "long exact sequence".into() });
        }
        for (k, v) in chain.into_iter().enumerate() {
            out[k % 3].set(k / 3, t, v);
        }
    }
    let [a, b, c] = out;
    Ok((a, b, c))
}

/// Handle to a table inside a [`LesSystem`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableId(usize);

#[derive(Debug, Clone, Copy)]
enum Link {
    /// `h^i(dual(t)) = h^{n-i}(primal(-t-n))`
    Serre { primal: TableId, dual: TableId },
    /// `h^i(target(t)) = h^i(source(t + shift))`
    Shift { target: TableId, source: TableId, shift: i64 },
}

/// A set of tables tied together by exact sequences, Serre duality and twists, solved to a
/// fixpoint. Sequence terms carry a twist offset, so `0 -> A(t) -> B(t) -> G(t+1) -> 0` is
/// expressed with offsets `(0, 0, 1)`.
#[derive(Debug, Clone)]
pub struct LesSystem {
    space: QuadricSpace,
    window: RangeInclusive<i64>,
    names: Vec<String>,
    tables: Vec<DimTable>,
    sequences: Vec<[(TableId, i64); 3]>,
    links: Vec<Link>,
}

impl LesSystem {
    pub fn new(space: QuadricSpace, window: RangeInclusive<i64>) -> LesSystem {
        LesSystem { space, window, names: Vec::new(), tables: Vec::new(), sequences: Vec::new(), links: Vec::new() }
    }

    pub fn add_known(&mut self, name: &str, table: &CohomologyTable) -> TableId {
        self.push(name, DimTable::from_table(table, self.window.clone()))
    }

    pub fn add_unknown(&mut self, name: &str) -> TableId {
        self.push(name, DimTable::unknown(self.space, self.window.clone()))
    }

    fn push(&mut self, name: &str, table: DimTable) -> TableId {
        self.names.push(name.to_string());
        self.tables.push(table);
        TableId(self.tables.len() - 1)
    }

    pub fn id(&self, name: &str) -> Option<TableId> {
        self.names.iter().position(|n| n == name).map(TableId)
    }

    pub fn table(&self, id: TableId) -> &DimTable {
        &self.tables[id.0]
    }

    /// Pins one entry.
    pub fn assume(&mut self, id: TableId, i: usize, t: i64, v: Interval) -> Result<(), LesError> {
        self.tables[id.0].refine(i, t, v).map(|_| ())
    }

    pub fn add_sequence(&mut self, terms: [(TableId, i64); 3]) {
        self.sequences.push(terms);
    }

    pub fn add_serre_pair(&mut self, primal: TableId, dual: TableId) {
        self.links.push(Link::Serre { primal, dual });
    }

    pub fn add_shift(&mut self, target: TableId, source: TableId, shift: i64) {
        self.links.push(Link::Shift { target, source, shift });
    }

    fn unify(&mut self, x: (TableId, usize, i64), y: (TableId, usize, i64)) -> Result<bool, LesError> {
        let (Some(u), Some(v)) = (self.tables[x.0 .0].get(x.1, x.2), self.tables[y.0 .0].get(y.1, y.2)) else {
            return Ok(false);
        };
        let m = u.meet(&v).ok_or_else(|| LesError::Inconsistent {
            twist: x.2,
            detail: format!("{} and {} disagree", self.names[x.0 .0], self.names[y.0 .0]),
        })?;
        let a = self.tables[x.0 .0].refine(x.1, x.2, m)?;
        let b = self.tables[y.0 .0].refine(y.1, y.2, m)?;
        Ok(a || b)
    }

    fn apply_links(&mut self) -> Result<bool, LesError> {
        let n = self.space.n() as i64;
        let mut changed = false;
        for link in self.links.clone() {
            for t in self.window.clone() {
                for i in 0..=n as usize {
                    changed |= match link {
                        Link::Serre { primal, dual } => self.unify((dual, i, t), (primal, n as usize - i, -t - n))?,
                        Link::Shift { target, source, shift } => self.unify((target, i, t), (source, i, t + shift))?,
                    };
                }
            }
        }
        Ok(changed)
    }

    fn apply_sequences(&mut self) -> Result<bool, LesError> {
        let rows = self.space.n() as usize + 1;
        let mut changed = false;
        for seq in self.sequences.clone() {
            for t in self.window.clone() {
                let mut chain = Vec::with_capacity(3 * rows);
                for i in 0..rows {
                    for (id, off) in seq {
                        chain.push(self.tables[id.0].get(i, t + off).unwrap_or(Interval::UNKNOWN));
                    }
                }
                if propagate_chain(&mut chain).is_none() {
                    let names: Vec<&str> = seq.iter().map(|(id, _)| self.names[id.0].as_str()).collect();
                    return Err(LesError::Inconsistent { twist: t, detail: format!("sequence {}", names.join(" -> ")) });
                }
                for (k, v) in chain.into_iter().enumerate() {
                    let (id, off) = seq[k % 3];
                    changed |= self.tables[id.0].refine(k / 3, t + off, v)?;
                }
            }
        }
        Ok(changed)
    }

    /// Runs to a fixpoint.
    pub fn solve(&mut self) -> Result<(), LesError> {
        while self.apply_links()? | self.apply_sequences()? {}
        Ok(())
    }
}
