//! Formal sums of line bundles, twisted spinor bundles and the tensor/wedge atoms that appear
//! in their exterior squares.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chow::{Basis, ChowClass, ChowError, QuadricSpace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BundleError {
    #[error("{atom} is not defined on Q_{n}")]
    IllegalAtom { atom: String, n: u32 },
    #[error("expressions live on different quadrics (Q_{0} vs Q_{1})")]
    SpaceMismatch(u32, u32),
    #[error("{0} has no dual in this calculus")]
    NoDual(String),
    #[error("{0} is not a sum of line bundles")]
    NotFree(String),
    #[error("{0} is not ACM (only line and spinor atoms are)")]
    NotAcm(String),
    #[error("no Chern data tabulated for {0}")]
    Untabulated(String),
    #[error("cannot restrict {0}")]
    NoRestriction(String),
    #[error(transparent)]
    Chow(#[from] ChowError),
}

/// The spinor families: `S'` and `S''` on even quadrics, `S` on odd ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SpinorKind {
    Plus,
    Minus,
    Odd,
}

impl SpinorKind {
    pub fn symbol(&self) -> &'static str {
        match self {
            SpinorKind::Plus => "S'",
            SpinorKind::Minus => "S''",
            SpinorKind::Odd => "S",
        }
    }

    pub fn legal_on(&self, space: &QuadricSpace) -> bool {
        match self {
            SpinorKind::Plus | SpinorKind::Minus => space.is_even(),
            SpinorKind::Odd => !space.is_even(),
        }
    }

    pub fn other(&self) -> SpinorKind {
        match self {
            SpinorKind::Plus => SpinorKind::Minus,
            SpinorKind::Minus => SpinorKind::Plus,
            SpinorKind::Odd => SpinorKind::Odd,
        }
    }
}

/// One summand. Twists are in units of `O(1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Atom {
    Line(i64),
    Spinor(SpinorKind, i64),
    /// `S_1(t_1) ⊗ S_2(t_2)`, kinds sorted, total twist split as evenly as possible.
    TensorPair { left: (SpinorKind, i64), right: (SpinorKind, i64) },
    /// `∧²S ⊗ O(twist)` for a spinor of rank at least 4. Opaque.
    SpinorWedge2 { kind: SpinorKind, twist: i64 },
}

impl Atom {
    pub fn tensor_pair(x: (SpinorKind, i64), y: (SpinorKind, i64)) -> Atom {
        let (k1, k2) = if x.0 <= y.0 { (x.0, y.0) } else { (y.0, x.0) };
        let total = x.1 + y.1;
        let lo = total.div_euclid(2);
        Atom::TensorPair { left: (k1, lo), right: (k2, total - lo) }
    }

    pub fn is_line(&self) -> bool {
        matches!(self, Atom::Line(_))
    }

    pub fn is_acm(&self) -> bool {
        matches!(self, Atom::Line(_) | Atom::Spinor(..))
    }

    pub fn rank(&self, space: &QuadricSpace) -> u64 {
        let r = space.spinor_rank();
        match self {
            Atom::Line(_) => 1,
            Atom::Spinor(..) => r,
            Atom::TensorPair { .. } => r * r,
            Atom::SpinorWedge2 { .. } => r * (r - 1) / 2,
        }
    }

    pub fn twisted(&self, k: i64) -> Atom {
        match *self {
            Atom::Line(t) => Atom::Line(t + k),
            Atom::Spinor(s, t) => Atom::Spinor(s, t + k),
            Atom::TensorPair { left, right } => Atom::tensor_pair(left, (right.0, right.1 + k)),
            Atom::SpinorWedge2 { kind, twist } => Atom::SpinorWedge2 { kind, twist: twist + k },
        }
    }

    fn check_legal(&self, space: &QuadricSpace) -> Result<(), BundleError> {
        let ok = match self {
            Atom::Line(_) => true,
            Atom::Spinor(k, _) | Atom::SpinorWedge2 { kind: k, .. } => k.legal_on(space),
            Atom::TensorPair { left, right } => left.0.legal_on(space) && right.0.legal_on(space),
        };
        if ok {
            Ok(())
        } else {
            Err(BundleError::IllegalAtom { atom: self.to_string(), n: space.n() })
        }
    }
}

fn twisted_name(name: &str, t: i64) -> String {
    if t == 0 {
        name.to_string()
    } else {
        format!("{name}({t})")
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Atom::Line(t) => write!(f, "{}", twisted_name("O", t)),
            Atom::Spinor(k, t) => write!(f, "{}", twisted_name(k.symbol(), t)),
            Atom::TensorPair { left, right } => write!(
                f,
                "{}*{}",
                twisted_name(left.0.symbol(), left.1),
                twisted_name(right.0.symbol(), right.1)
            ),
            Atom::SpinorWedge2 { kind, twist } => {
                write!(f, "{}", twisted_name(&format!("wedge2({})", kind.symbol()), twist))
            }
        }
    }
}

/// `S'(t)^∨ = S'(1-t)` when `n ≡ 0 (mod 4)`, `S'(t)^∨ = S''(1-t)` when `n ≡ 2 (mod 4)`,
/// `S(t)^∨ = S(1-t)` on odd quadrics. Indexed by `n mod 4`: does dualizing swap the families?
pub const DUAL_SWAPS_FAMILY: [bool; 4] = [false, false, true, false];

/// Chern classes of the globally generated spinors `S'(1)`, `S''(1)` on `Q_4`, written as
/// `(c_1, c_2)` in terms of `h` and the plane classes: `c(S'(1)) = 1 + h + a`, `c(S''(1)) = 1 + h + b`.
const Q4_SPINOR_CHERN: [(SpinorKind, Basis); 2] = [(SpinorKind::Plus, Basis::A), (SpinorKind::Minus, Basis::B)];

/// A direct sum of atoms with positive multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BundleExpr {
    space: QuadricSpace,
    atoms: BTreeMap<Atom, u32>,
}

impl BundleExpr {
    pub fn zero(space: QuadricSpace) -> Self {
        Self { space, atoms: BTreeMap::new() }
    }

    pub fn from_atoms(space: QuadricSpace, atoms: impl IntoIterator<Item = Atom>) -> Result<Self, BundleError> {
        let mut e = Self::zero(space);
        for a in atoms {
            e.push(a, 1)?;
        }
        Ok(e)
    }

    pub fn lines(space: QuadricSpace, twists: &[i64]) -> Self {
        Self::from_atoms(space, twists.iter().map(|&t| Atom::Line(t))).expect("line bundles are always legal")
    }

    pub fn push(&mut self, atom: Atom, mult: u32) -> Result<(), BundleError> {
        atom.check_legal(&self.space)?;
        if mult > 0 {
            *self.atoms.entry(atom).or_insert(0) += mult;
        }
        Ok(())
    }

    pub fn with(mut self, atom: Atom) -> Result<Self, BundleError> {
        self.push(atom, 1)?;
        Ok(self)
    }

    pub fn space(&self) -> QuadricSpace {
        self.space
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = (Atom, u32)> + '_ {
        self.atoms.iter().map(|(a, k)| (*a, *k))
    }

    /// Atoms repeated by multiplicity, in canonical order.
    pub fn expanded(&self) -> Vec<Atom> {
        self.atoms().flat_map(|(a, k)| std::iter::repeat_n(a, k as usize)).collect()
    }

    pub fn multiplicity(&self, atom: &Atom) -> u32 {
        self.atoms.get(atom).copied().unwrap_or(0)
    }

    pub fn count(&self) -> u32 {
        self.atoms.values().sum()
    }

    pub fn is_line_only(&self) -> bool {
        self.atoms.keys().all(Atom::is_line)
    }

    pub fn is_acm(&self) -> bool {
        self.atoms.keys().all(Atom::is_acm)
    }

    pub fn has_spinor(&self) -> bool {
        self.atoms.keys().any(|a| matches!(a, Atom::Spinor(..)))
    }

    /// Twists of the line summands with multiplicity, ascending.
    pub fn line_twists(&self) -> Vec<i64> {
        self.expanded()
            .into_iter()
            .filter_map(|a| match a {
                Atom::Line(t) => Some(t),
                _ => None,
            })
            .collect()
    }

    pub fn line_part(&self) -> BundleExpr {
        self.filtered(Atom::is_line)
    }

    pub fn non_line_part(&self) -> BundleExpr {
        self.filtered(|a| !a.is_line())
    }

    pub fn filtered(&self, keep: impl Fn(&Atom) -> bool) -> BundleExpr {
        BundleExpr {
            space: self.space,
            atoms: self.atoms.iter().filter(|(a, _)| keep(a)).map(|(a, k)| (*a, *k)).collect(),
        }
    }

    /// Removes one copy of `atom`, if present.
    pub fn without(&self, atom: &Atom) -> Option<BundleExpr> {
        let mut out = self.clone();
        let k = out.atoms.get_mut(atom)?;
        *k -= 1;
        if *k == 0 {
            out.atoms.remove(atom);
        }
        Some(out)
    }

    pub fn direct_sum(&self, other: &BundleExpr) -> Result<BundleExpr, BundleError> {
        if self.space != other.space {
            return Err(BundleError::SpaceMismatch(self.space.n(), other.space.n()));
        }
        let mut out = self.clone();
        for (a, k) in other.atoms() {
            out.push(a, k)?;
        }
        Ok(out)
    }

    pub fn rank(&self) -> u64 {
        self.atoms().map(|(a, k)| a.rank(&self.space) * k as u64).sum()
    }

    pub fn twist(&self, k: i64) -> BundleExpr {
        let mut out = Self::zero(self.space);
        for (a, m) in self.atoms() {
            *out.atoms.entry(a.twisted(k)).or_insert(0) += m;
        }
        out
    }

    pub fn dual_atom(space: &QuadricSpace, atom: &Atom) -> Result<Atom, BundleError> {
        match *atom {
            Atom::Line(t) => Ok(Atom::Line(-t)),
            Atom::Spinor(k, t) => {
                let swap = DUAL_SWAPS_FAMILY[(space.n() % 4) as usize];
                Ok(Atom::Spinor(if swap { k.other() } else { k }, 1 - t))
            }
            _ => Err(BundleError::NoDual(atom.to_string())),
        }
    }

    pub fn dual(&self) -> Result<BundleExpr, BundleError> {
        let mut out = Self::zero(self.space);
        for (a, k) in self.atoms() {
            out.push(Self::dual_atom(&self.space, &a)?, k)?;
        }
        Ok(out)
    }

    fn require_acm(&self) -> Result<(), BundleError> {
        match self.atoms.keys().find(|a| !a.is_acm()) {
            Some(a) => Err(BundleError::NotAcm(a.to_string())),
            None => Ok(()),
        }
    }

    fn wedge2_atom(&self, atom: &Atom) -> Option<Atom> {
        match *atom {
            Atom::Line(_) => None,
            Atom::Spinor(kind, t) => match self.space.spinor_rank() {
                1 => None,
                // det S(t) = O(2t - 1), since c_1(S(1)) = h
                2 => Some(Atom::Line(2 * t - 1)),
                _ => Some(Atom::SpinorWedge2 { kind, twist: 2 * t }),
            },
            _ => unreachable!("checked ACM"),
        }
    }

    fn tensor_atoms(x: &Atom, y: &Atom) -> Atom {
        match (*x, *y) {
            (Atom::Line(s), Atom::Line(t)) => Atom::Line(s + t),
            (Atom::Line(s), Atom::Spinor(k, t)) | (Atom::Spinor(k, t), Atom::Line(s)) => Atom::Spinor(k, s + t),
            (Atom::Spinor(k1, t1), Atom::Spinor(k2, t2)) => Atom::tensor_pair((k1, t1), (k2, t2)),
            _ => unreachable!("checked ACM"),
        }
    }

    /// Second exterior power of an ACM expression.
    pub fn wedge2(&self) -> Result<BundleExpr, BundleError> {
        self.require_acm()?;
        let mut out = Self::zero(self.space);
        let atoms: Vec<(Atom, u32)> = self.atoms().collect();
        for (i, (x, kx)) in atoms.iter().enumerate() {
            if let Some(w) = self.wedge2_atom(x) {
                out.push(w, *kx)?;
            }
            out.push(Self::tensor_atoms(x, x), kx * (kx - 1) / 2)?;
            for (y, ky) in &atoms[i + 1..] {
                out.push(Self::tensor_atoms(x, y), kx * ky)?;
            }
        }
        Ok(out)
    }

    /// Second symmetric power of a sum of line bundles.
    pub fn sym2(&self) -> Result<BundleExpr, BundleError> {
        if !self.is_line_only() {
            return Err(BundleError::NotFree(self.to_string()));
        }
        let t = self.line_twists();
        let mut out = Self::zero(self.space);
        for i in 0..t.len() {
            for j in i..t.len() {
                out.push(Atom::Line(t[i] + t[j]), 1)?;
            }
        }
        Ok(out)
    }

    /// Total Chern class of one atom.
    pub fn atom_chern(space: &QuadricSpace, atom: &Atom) -> Result<ChowClass, BundleError> {
        let s = *space;
        match *atom {
            Atom::Line(t) => Ok(ChowClass::one(s).add(&ChowClass::hyperplane(s, t))?),
            Atom::Spinor(kind, t) if s.n() == 4 => {
                let plane = Q4_SPINOR_CHERN
                    .iter()
                    .find(|(k, _)| *k == kind)
                    .map(|(_, b)| *b)
                    .expect("both Q_4 families are tabulated");
                let base = ChowClass::from_terms(s, &[(Basis::H(0), 1), (Basis::H(1), 1), (plane, 1)]);
                Ok(twist_chern(&base, 2, t - 1))
            }
            _ => Err(BundleError::Untabulated(atom.to_string())),
        }
    }

    /// Whitney product over all atoms.
    pub fn total_chern(&self) -> Result<ChowClass, BundleError> {
        let mut c = ChowClass::one(self.space);
        for (a, k) in self.atoms() {
            let ca = Self::atom_chern(&self.space, &a)?;
            for _ in 0..k {
                c = c.mul(&ca)?;
            }
        }
        Ok(c)
    }

    /// Restriction to a hyperplane section `Q_{n-1}`.
    pub fn restrict(&self) -> Result<BundleExpr, BundleError> {
        let target = self
            .space
            .hyperplane_section()
            .filter(|_| self.space.n() >= 3)
            .ok_or_else(|| BundleError::NoRestriction(format!("{self} below Q_2")))?;
        let mut out = Self::zero(target);
        for (a, k) in self.atoms() {
            match a {
                Atom::Line(t) => out.push(Atom::Line(t), k)?,
                Atom::Spinor(SpinorKind::Odd, t) => {
                    out.push(Atom::Spinor(SpinorKind::Plus, t), k)?;
                    out.push(Atom::Spinor(SpinorKind::Minus, t), k)?;
                }
                Atom::Spinor(_, t) => out.push(Atom::Spinor(SpinorKind::Odd, t), k)?,
                _ => return Err(BundleError::NoRestriction(a.to_string())),
            }
        }
        Ok(out)
    }

    /// Every ACM expression on `Q_{n+1}` whose restriction is exactly `self`.
    pub fn lift_candidates(&self) -> Vec<BundleExpr> {
        let Ok(target) = QuadricSpace::new(self.space.n() + 1) else {
            return Vec::new();
        };
        if !self.is_acm() {
            return Vec::new();
        }
        let mut partial = vec![BundleExpr::zero(target)];
        let extend = |options: Vec<Vec<(Atom, u32)>>, partial: &mut Vec<BundleExpr>| {
            let mut next = Vec::new();
            for p in partial.iter() {
                for opt in &options {
                    let mut q = p.clone();
                    for &(a, k) in opt {
                        q.push(a, k).expect("legal on target");
                    }
                    next.push(q);
                }
            }
            *partial = next;
        };
        for (a, k) in self.atoms() {
            match a {
                Atom::Line(t) => extend(vec![vec![(Atom::Line(t), k)]], &mut partial),
                Atom::Spinor(SpinorKind::Odd, t) => {
                    let opts = (0..=k)
                        .map(|j| {
                            vec![(Atom::Spinor(SpinorKind::Plus, t), j), (Atom::Spinor(SpinorKind::Minus, t), k - j)]
                        })
                        .collect();
                    extend(opts, &mut partial);
                }
                Atom::Spinor(SpinorKind::Plus, t) => {
                    if self.multiplicity(&Atom::Spinor(SpinorKind::Minus, t)) != k {
                        return Vec::new();
                    }
                    extend(vec![vec![(Atom::Spinor(SpinorKind::Odd, t), k)]], &mut partial);
                }
                // paired with the matching `S'` above
                Atom::Spinor(SpinorKind::Minus, t) => {
                    if self.multiplicity(&Atom::Spinor(SpinorKind::Plus, t)) != k {
                        return Vec::new();
                    }
                }
                _ => return Vec::new(),
            }
        }
        partial.sort();
        partial.dedup();
        partial
    }
}

/// Total Chern class of `E(t)` from that of a rank-`r` bundle `E`.
pub fn twist_chern(c: &ChowClass, rank: u64, t: i64) -> ChowClass {
    let s = c.space();
    let n = s.n() as u64;
    let mut out = ChowClass::zero(s);
    for i in 0..=n.min(rank) {
        let ci = c.component(i as u32);
        if ci.is_zero() {
            continue;
        }
        for k in i..=n.min(rank) {
            let coeff = binomial(rank - i, k - i) as i64 * t.pow((k - i) as u32);
            let term = ChowClass::h_pow(s, (k - i) as u32).mul(&ci).expect("same space").scale(coeff);
            out = out.add(&term).expect("same space");
        }
    }
    out
}

pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

impl fmt::Display for BundleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.expanded().iter().map(Atom::to_string).collect();
        write!(f, "{}", parts.join(" + "))
    }
}
